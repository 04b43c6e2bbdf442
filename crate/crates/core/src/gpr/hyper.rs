//! Maximum-likelihood kernel hyperparameters by multi-start Nelder–Mead
//! in log space.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{matern52, standardization, KernelParams, LN_2PI};
use crate::rng::RandomSource;
use crate::types::distance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HyperSearch {
    pub starts: usize,
    pub max_iterations: usize,
    /// Shared box for amplitude and length scale.
    pub lower: f64,
    pub upper: f64,
    pub jitter: f64,
}

impl Default for HyperSearch {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iterations: 200,
            lower: 1e-5,
            upper: 1e5,
            jitter: 1e-8,
        }
    }
}

struct Likelihood {
    dist: DMatrix<f64>,
    y: DVector<f64>,
    jitter: f64,
    lo: f64,
    hi: f64,
}

impl Likelihood {
    fn clamp(&self, theta: [f64; 2]) -> [f64; 2] {
        [theta[0].clamp(self.lo, self.hi), theta[1].clamp(self.lo, self.hi)]
    }

    fn params(&self, theta: [f64; 2]) -> KernelParams {
        let t = self.clamp(theta);
        KernelParams::new(t[0].exp(), t[1].exp()).with_jitter(self.jitter)
    }

    /// Log marginal likelihood, `-inf` when the factorization fails.
    fn value(&self, theta: [f64; 2]) -> f64 {
        let p = self.params(theta);
        let n = self.y.len();
        let k = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                p.amplitude * (1.0 + p.jitter)
            } else {
                matern52(self.dist[(i, j)], &p)
            }
        });
        let Some(chol) = Cholesky::new(k) else {
            return f64::NEG_INFINITY;
        };
        let w = chol.solve(&self.y);
        let l = chol.l_dirty();
        let log_det_half: f64 = (0..n).map(|i| l[(i, i)].ln()).sum();
        let v = -0.5 * self.y.dot(&w) - log_det_half - 0.5 * n as f64 * LN_2PI;
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Maximizes `f` from `start`; returns the best point and value.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], max_iterations: usize) -> ([f64; 2], f64) {
    // minimize the negated objective
    let cost = |p: [f64; 2]| -f(p);
    let mut simplex = [start, [start[0] + 0.5, start[1]], [start[0], start[1] + 0.5]];
    let mut values = simplex.map(cost);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    for _ in 0..max_iterations {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let spread = values[2] - values[0];
        let size = (1..3)
            .map(|i| (simplex[i][0] - simplex[0][0]).abs().max((simplex[i][1] - simplex[0][1]).abs()))
            .fold(0.0, f64::max);
        if values[0].is_finite() && spread.abs() <= 1e-9 * (1.0 + values[0].abs()) && size <= 1e-5 {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = cost(reflected);
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = cost(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, cost(c))
            } else {
                let c = lerp(centroid, simplex[2], 0.5);
                (c, cost(c))
            };
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = cost(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best], -values[best])
}

/// Fits `(amplitude, length_scale)` by maximizing the log marginal
/// likelihood of the standardized targets.
///
/// Starts are drawn log-uniformly; when `warm_start` is given it replaces
/// the first draw. The best start wins, ties going to the lowest index. If
/// every start fails, falls back to unit amplitude (the standardized
/// target variance) and half the median pairwise input distance.
pub fn optimize_hyperparameters(
    train_x: &[Vec<f64>],
    train_y: &[f64],
    rng: &mut RandomSource,
    search: &HyperSearch,
    warm_start: Option<KernelParams>,
) -> KernelParams {
    let n = train_x.len();
    assert!(n >= 2, "need at least two training points");
    let (mean, sd) = standardization(train_y);
    let y = DVector::from_iterator(n, train_y.iter().map(|v| (v - mean) / sd));
    let dist = DMatrix::from_fn(n, n, |i, j| distance(&train_x[i], &train_x[j]));
    let lik = Likelihood {
        dist,
        y,
        jitter: search.jitter,
        lo: search.lower.ln(),
        hi: search.upper.ln(),
    };

    let dim = train_x[0].len() as f64;
    let (amp_lo, amp_hi) = (0.1f64.ln(), 10f64.ln());
    let (rho_lo, rho_hi) = (0.05f64.ln(), (2.0 * dim.sqrt()).ln());
    let mut starts: Vec<[f64; 2]> = (0..search.starts)
        .map(|_| [rng.random_range(amp_lo..amp_hi), rng.random_range(rho_lo..rho_hi)])
        .collect();
    if let (Some(w), Some(first)) = (warm_start, starts.first_mut()) {
        *first = [w.amplitude.ln(), w.length_scale.ln()];
    }

    let mut best: Option<([f64; 2], f64)> = None;
    for s in starts {
        let (theta, value) = nelder_mead(|t| lik.value(t), lik.clamp(s), search.max_iterations);
        if value.is_finite() && best.is_none_or(|(_, b)| value > b) {
            best = Some((theta, value));
        }
    }
    match best {
        Some((theta, _)) => lik.params(theta),
        None => {
            let mut pairs: Vec<f64> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| lik.dist[(i, j)]).collect();
            pairs.sort_by(f64::total_cmp);
            let median = pairs[pairs.len() / 2];
            let fallback = KernelParams::new(1.0, (0.5 * median).clamp(search.lower, search.upper)).with_jitter(search.jitter);
            log::warn!("hyperparameter search failed from every start; using {fallback:?}");
            fallback
        }
    }
}
