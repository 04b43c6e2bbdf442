use std::f64::consts::{FRAC_PI_2, PI};

use super::DisconnectParams;

fn s_linear(y: f64, a: f64) -> f64 {
    (y - a).abs() / ((a - y).floor() + a).abs()
}

fn r_nonsep(y: &[f64], a: usize) -> f64 {
    let len = y.len();
    let mut num = 0.0;
    for j in 0..len {
        num += y[j];
        for k in 0..a - 1 {
            num += (y[j] - y[(1 + j + k) % len]).abs();
        }
    }
    let half = a.div_ceil(2) as f64;
    let a = a as f64;
    num / ((len as f64 / a) * half * (1.0 + 2.0 * a - 2.0 * half))
}

fn r_sum(y: &[f64]) -> f64 {
    y.iter().sum::<f64>() / y.len() as f64
}

/// Reduced parameter vector `t3` (length m) from the raw decision vector.
fn reduce(z: &[f64], m: usize, k: usize) -> Vec<f64> {
    let n = z.len();
    let l = n - k;
    let y: Vec<f64> = z.iter().enumerate().map(|(i, v)| v / (2.0 * (i + 1) as f64)).collect();

    let t1: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(i, &v)| if i < k { v } else { s_linear(v, 0.35) })
        .collect();

    let mut t2: Vec<f64> = t1[..k].to_vec();
    for i in 0..l / 2 {
        t2.push(r_nonsep(&[t1[k + 2 * i], t1[k + 2 * i + 1]], 2));
    }

    let group = k / (m - 1);
    let mut t3: Vec<f64> = (0..m - 1).map(|i| r_sum(&t2[i * group..(i + 1) * group])).collect();
    t3.push(r_sum(&t2[k..k + l / 2]));
    t3
}

/// Shape values `h_i` for position parameters `x` (length m-1).
pub(super) fn shape(x: &[f64], m: usize, p: DisconnectParams) -> Vec<f64> {
    let mut h = Vec::with_capacity(m);
    for i in 1..m {
        let mut v: f64 = x[..m - i].iter().map(|xj| 1.0 - (xj * FRAC_PI_2).cos()).product();
        if i > 1 {
            v *= 1.0 - (x[m - i] * FRAC_PI_2).sin();
        }
        h.push(v);
    }
    let x1 = x[0];
    h.push(1.0 - x1.powf(p.alpha) * (p.a as f64 * x1.powf(p.beta) * PI).cos().powi(2));
    h
}

/// `S_i * h_i` terms of the objectives (without the distance term).
#[cfg(test)]
pub(super) fn wfg2_shape_terms(z: &[f64], m: usize, k: usize, p: DisconnectParams) -> Vec<f64> {
    let t3 = reduce(z, m, k);
    // degeneracy constants are all 1, so x_i = t3_i
    shape(&t3[..m - 1], m, p)
        .into_iter()
        .enumerate()
        .map(|(i, h)| 2.0 * (i + 1) as f64 * h)
        .collect()
}

pub(super) fn wfg2_star(z: &[f64], m: usize, k: usize, p: DisconnectParams) -> Vec<f64> {
    let t3 = reduce(z, m, k);
    let distance = t3[m - 1];
    shape(&t3[..m - 1], m, p)
        .into_iter()
        .enumerate()
        .map(|(i, h)| distance + 2.0 * (i + 1) as f64 * h)
        .collect()
}
