use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::RandomSource;
use crate::types::Bounds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OperatorParams {
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    /// Per-variable mutation probability; `None` means `1/n`.
    pub mutation_prob: Option<f64>,
    pub mutation_eta: f64,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self {
            crossover_prob: 1.0,
            crossover_eta: 20.0,
            mutation_prob: None,
            mutation_eta: 20.0,
        }
    }
}

impl OperatorParams {
    pub fn mutation_prob_for(&self, n: usize) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / n as f64)
    }
}

fn sbx_spread(u: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded simulated binary crossover. Each variable is recombined with
/// probability 0.5 once the pair is selected for crossover.
pub fn sbx_crossover(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    params: &OperatorParams,
    rng: &mut RandomSource,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= params.crossover_prob {
        return (c1, c2);
    }
    let eta = params.crossover_eta;
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= 1e-14 {
            continue;
        }
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let y1 = p1[i].min(p2[i]);
        let y2 = p1[i].max(p2[i]);
        let u = rng.random::<f64>();
        let bq = sbx_spread(u, 1.0 + 2.0 * (y1 - lo) / (y2 - y1), eta);
        let a = (0.5 * ((y1 + y2) - bq * (y2 - y1))).clamp(lo, hi);
        let bq = sbx_spread(u, 1.0 + 2.0 * (hi - y2) / (y2 - y1), eta);
        let b = (0.5 * ((y1 + y2) + bq * (y2 - y1))).clamp(lo, hi);
        if rng.random::<bool>() {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation.
pub fn polynomial_mutation(x: &[f64], bounds: &Bounds, params: &OperatorParams, rng: &mut RandomSource) -> Vec<f64> {
    let pm = params.mutation_prob_for(x.len());
    let eta = params.mutation_eta;
    let power = 1.0 / (eta + 1.0);
    let mut y = x.to_vec();
    for (i, v) in y.iter_mut().enumerate() {
        if rng.random::<f64>() >= pm {
            continue;
        }
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let width = hi - lo;
        if width <= 0.0 {
            continue;
        }
        let d1 = (*v - lo) / width;
        let d2 = (hi - *v) / width;
        let u = rng.random::<f64>();
        let dq = if u < 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            val.powf(power) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(power)
        };
        *v = (*v + dq * width).clamp(lo, hi);
    }
    y
}
