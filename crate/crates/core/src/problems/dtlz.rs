use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use super::DisconnectParams;

/// Distance function over the last `n - m + 1` variables.
pub(super) fn dtlz7_g(x: &[f64], m: usize) -> f64 {
    let tail = &x[m - 1..];
    1.0 + 9.0 / tail.len() as f64 * tail.iter().sum::<f64>()
}

pub(super) fn dtlz7_h(f: &[f64], g: f64, p: DisconnectParams) -> f64 {
    let m = f.len() + 1;
    m as f64
        - f.iter()
            .map(|&fi| fi / (1.0 + g) * (1.0 + fi.powf(p.alpha) * (p.a as f64 * PI * fi.powf(p.beta)).sin()))
            .sum::<f64>()
}

pub(super) fn dtlz7_star(x: &[f64], m: usize, p: DisconnectParams) -> Vec<f64> {
    let mut f: Vec<f64> = x[..m - 1].to_vec();
    let g = dtlz7_g(x, m);
    let h = dtlz7_h(&f, g, p);
    f.push((1.0 + g) * h);
    f
}

/// Unit-sphere position terms: returns `s` with `sum s_i^2 = 1`.
pub(super) fn sphere(angles: &[f64], m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let mut v: f64 = angles[..m - 1 - i].iter().map(|a| (a * FRAC_PI_2).cos()).product();
            if i > 0 {
                v *= (angles[m - 1 - i] * FRAC_PI_2).sin();
            }
            v
        })
        .collect()
}

fn dtlz2_g(x: &[f64], m: usize) -> f64 {
    x[m - 1..].iter().map(|v| (v - 0.5) * (v - 0.5)).sum()
}

pub(super) fn dtlz2(x: &[f64], m: usize) -> Vec<f64> {
    let g = dtlz2_g(x, m);
    sphere(&x[..m - 1], m).into_iter().map(|s| (1.0 + g) * s).collect()
}

/// Largest attainable DTLZ2 objective value, `1 + |x_M| / 4`.
pub(super) fn dtlz2_extreme(n: usize, m: usize) -> f64 {
    1.0 + 0.25 * (n - m + 1) as f64
}

/// DTLZ2 negated and shifted into the positive orthant.
pub(super) fn minus_dtlz2(x: &[f64], m: usize) -> Vec<f64> {
    let shift = dtlz2_extreme(x.len(), m);
    dtlz2(x, m).into_iter().map(|v| shift - v).collect()
}
