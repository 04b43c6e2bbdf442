//! First-order Pareto-set continuation: KKT multipliers, tangent directions
//! of the Pareto manifold, and sampling of new candidates along them.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dominance::nondominated_indices;
use crate::error::{Error, Result};
use crate::objective::DifferentiableVectorObjective;
use crate::rng::RandomSource;
use crate::types::{distance, Bounds, EvaluatedSolution, Population};

const PGD_ITERATIONS: usize = 500;
const PGD_TOLERANCE: f64 = 1e-10;
const NULL_THRESHOLD: f64 = 1e-8;
const MIN_BLOCK_NORM: f64 = 1e-10;
/// Candidates closer than this (normalized Euclidean) count as duplicates.
pub const DEDUP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct KktMultipliers {
    pub alpha: Vec<f64>,
    /// Stationarity residual `|| sum_i alpha_i grad f_i ||`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct TangentBasis {
    /// Orthonormal decision-space directions, at most `m - 1`.
    pub directions: Vec<DVector<f64>>,
    /// Null vectors of the system matrix whose decision block is the
    /// matching direction.
    pub generators: Vec<DVector<f64>>,
    /// Largest `||A g|| / ||g||` over the generators.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InterpolationConfig {
    /// Total number of candidates to generate.
    pub count_total: usize,
    /// Step length along a unit tangent, in normalized decision units.
    pub step_scale: f64,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        Self {
            count_total: 100,
            step_scale: 0.1,
        }
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumulative += uk;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Simplex-constrained least squares for `min || J^T alpha ||^2` by
/// projected gradient descent from the uniform point.
pub fn multipliers_from_jacobian(jacobian: &DMatrix<f64>) -> KktMultipliers {
    let m = jacobian.nrows();
    let gram = jacobian * jacobian.transpose();
    let lipschitz = 2.0 * gram.trace();
    let mut alpha = DVector::from_element(m, 1.0 / m as f64);
    let residual = |a: &DVector<f64>| (jacobian.transpose() * a).norm();
    if lipschitz > 0.0 {
        for _ in 0..PGD_ITERATIONS {
            if residual(&alpha) <= PGD_TOLERANCE {
                break;
            }
            let grad = &gram * &alpha * 2.0;
            let step: Vec<f64> = (&alpha - grad / lipschitz).iter().copied().collect();
            let next = DVector::from_vec(project_simplex(&step));
            let moved = (&next - &alpha).norm();
            alpha = next;
            if moved <= 1e-16 {
                break;
            }
        }
    }
    KktMultipliers {
        residual: residual(&alpha),
        alpha: alpha.iter().copied().collect(),
    }
}

pub fn estimate_multipliers<O: DifferentiableVectorObjective + ?Sized>(objective: &O, x: &[f64]) -> KktMultipliers {
    multipliers_from_jacobian(&objective.jacobian(x))
}

/// The `(1+n) x (m+n)` matrix whose null space holds `(alpha', x')` pairs:
/// first row `[1 ... 1, 0 ... 0]`, then `[J^T, sum_i alpha_i H_i]`.
pub fn kkt_system_matrix<O: DifferentiableVectorObjective + ?Sized>(
    objective: &O,
    x: &[f64],
    alpha: &[f64],
) -> DMatrix<f64> {
    let jac = objective.jacobian(x);
    let hessians = objective.hessians(x);
    let (m, n) = (jac.nrows(), jac.ncols());
    assert_eq!(alpha.len(), m);
    let mut a = DMatrix::zeros(1 + n, m + n);
    for i in 0..m {
        a[(0, i)] = 1.0;
    }
    a.view_mut((1, 0), (n, m)).copy_from(&jac.transpose());
    let mut weighted = DMatrix::zeros(n, n);
    for (h, &w) in hessians.iter().zip(alpha) {
        weighted += h * w;
    }
    a.view_mut((1, m), (n, n)).copy_from(&weighted);
    a
}

/// Tangent directions from the null space of a KKT system matrix with `m`
/// multiplier columns.
pub fn tangent_from_system(system: &DMatrix<f64>, m: usize) -> Result<TangentBasis> {
    let cols = system.ncols();
    let n = cols - m;
    // pad to square so the SVD exposes the full right singular basis
    let mut square = DMatrix::zeros(cols.max(system.nrows()), cols);
    square.view_mut((0, 0), (system.nrows(), cols)).copy_from(system);
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.max();
    let mut null: Vec<DVector<f64>> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= NULL_THRESHOLD * sigma_max.max(f64::MIN_POSITIVE))
        .map(|k| v_t.row(k).transpose())
        .filter(|g| g.rows(m, n).norm() > MIN_BLOCK_NORM)
        .collect();
    null.sort_by(|a, b| b.rows(m, n).norm().total_cmp(&a.rows(m, n).norm()));

    let mut directions: Vec<DVector<f64>> = Vec::new();
    let mut generators: Vec<DVector<f64>> = Vec::new();
    for g in null {
        if directions.len() >= m.saturating_sub(1) {
            break;
        }
        let mut x = g.rows(m, n).into_owned();
        let mut full = g.clone();
        for (d, gen) in directions.iter().zip(&generators) {
            let c = d.dot(&x);
            x -= d * c;
            full -= gen * c;
        }
        let norm = x.norm();
        if norm <= MIN_BLOCK_NORM {
            continue;
        }
        directions.push(x / norm);
        generators.push(full / norm);
    }
    if directions.is_empty() {
        return Err(Error::EmptyTangent);
    }
    let residual = generators
        .iter()
        .map(|g| (system * g).norm() / g.norm())
        .fold(0.0, f64::max);
    Ok(TangentBasis {
        directions,
        generators,
        residual,
    })
}

pub fn tangent_vectors<O: DifferentiableVectorObjective + ?Sized>(
    objective: &O,
    x: &[f64],
    alpha: &[f64],
) -> Result<TangentBasis> {
    tangent_from_system(&kkt_system_matrix(objective, x, alpha), objective.num_objectives())
}

fn is_duplicate(x: &[f64], others: &[Vec<f64>]) -> bool {
    others.iter().any(|o| distance(x, o) <= DEDUP_TOLERANCE)
}

/// Samples candidates along the tangent space of each member of `parents`
/// and returns the non-dominated ones under the surrogate's predictions.
///
/// Each parent gets `ceil(count_total / |parents|)` samples (at most
/// `count_total` overall) of the form `x + sum_i s_i eta_i step v_i` with
/// `eta_i` in (0, 1] and random signs `s_i`. Samples leaving `bounds` are
/// discarded, as are samples within [`DEDUP_TOLERANCE`] of an earlier
/// sample or of any point in `exclude`.
pub fn interpolate<O: DifferentiableVectorObjective + ?Sized>(
    parents: &Population,
    objective: &O,
    cfg: &InterpolationConfig,
    bounds: &Bounds,
    exclude: &[Vec<f64>],
    rng: &mut RandomSource,
) -> Population {
    if parents.is_empty() || cfg.count_total == 0 {
        return Population::default();
    }
    let per_point = cfg.count_total.div_ceil(parents.len());
    let mut generated = 0;
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut empty = 0;
    for parent in parents {
        if generated >= cfg.count_total {
            break;
        }
        let alpha = estimate_multipliers(objective, &parent.x);
        let basis = match tangent_vectors(objective, &parent.x, &alpha.alpha) {
            Ok(b) => b,
            Err(_) => {
                empty += 1;
                continue;
            }
        };
        for _ in 0..per_point.min(cfg.count_total - generated) {
            generated += 1;
            let mut x = parent.x.0.clone();
            for v in &basis.directions {
                let eta = 1.0 - rng.random::<f64>();
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                for (xi, vi) in x.iter_mut().zip(v.iter()) {
                    *xi += sign * eta * cfg.step_scale * vi;
                }
            }
            if !bounds.contains(&x) || is_duplicate(&x, exclude) || is_duplicate(&x, &kept) {
                continue;
            }
            kept.push(x);
        }
    }
    if empty == parents.len() {
        log::info!("no parent yielded a tangent direction; interpolation produced nothing");
    }
    let candidates: Vec<EvaluatedSolution> = kept
        .into_iter()
        .map(|x| {
            let f = objective.value(&x);
            EvaluatedSolution::predicted(x, f)
        })
        .collect();
    let objs: Vec<&[f64]> = candidates.iter().map(|s| &s.f[..]).collect();
    let keep = nondominated_indices(&objs);
    keep.into_iter().map(|i| candidates[i].clone()).collect()
}
