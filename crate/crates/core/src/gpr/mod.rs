//! Gaussian-process surrogates with a Matérn 5/2 kernel.
//!
//! Inputs are expected in the unit box and targets are standardized inside
//! [`GpModel::fit`]; predictions and derivatives are returned on the raw
//! target scale.

mod bank;
mod hyper;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::distance;

pub use bank::SurrogateBank;
pub use hyper::{optimize_hyperparameters, HyperSearch};

const SQRT5: f64 = 2.236_067_977_499_79;
const MAX_JITTER: f64 = 1e-2;
const LN_2PI: f64 = 1.837_877_066_409_345_3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    /// Signal variance.
    pub amplitude: f64,
    pub length_scale: f64,
    /// Diagonal stabilizer, relative to the amplitude: the kernel matrix is
    /// factorized as `K + jitter * amplitude * I`.
    pub jitter: f64,
}

impl KernelParams {
    pub fn new(amplitude: f64, length_scale: f64) -> Self {
        Self {
            amplitude,
            length_scale,
            jitter: 1e-8,
        }
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter = jitter;
        self
    }
}

/// Matérn 5/2 covariance at distance `d`.
pub fn matern52(d: f64, params: &KernelParams) -> f64 {
    debug_assert!(d >= 0.0);
    let sd = SQRT5 * d / params.length_scale;
    params.amplitude * (1.0 + sd + sd * sd / 3.0) * (-sd).exp()
}

/// Lower Cholesky factor of `k + jitter I`, escalating the jitter tenfold
/// until the factorization succeeds or the jitter passes `1e-2`.
fn factorize(k: &DMatrix<f64>, amplitude: f64, jitter: f64) -> Result<(Cholesky<f64, Dyn>, f64)> {
    let mut j = jitter;
    loop {
        let mut a = k.clone();
        for i in 0..a.nrows() {
            a[(i, i)] += j * amplitude;
        }
        if let Some(c) = Cholesky::new(a) {
            return Ok((c, j));
        }
        j *= 10.0;
        if j > MAX_JITTER {
            return Err(Error::IllConditioned { jitter: j / 10.0 });
        }
    }
}

fn kernel_matrix(x: &[Vec<f64>], params: &KernelParams) -> DMatrix<f64> {
    let n = x.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = params.amplitude;
        for j in 0..i {
            let v = matern52(distance(&x[i], &x[j]), params);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

fn lml_from_factor(chol: &Cholesky<f64, Dyn>, y: &DVector<f64>, weights: &DVector<f64>) -> f64 {
    let l = chol.l_dirty();
    let log_det_half: f64 = (0..y.len()).map(|i| l[(i, i)].ln()).sum();
    -0.5 * y.dot(weights) - log_det_half - 0.5 * y.len() as f64 * LN_2PI
}

/// Log marginal likelihood of already-standardized targets `y` under
/// `params`, using exactly the given jitter. `None` if the kernel matrix is
/// not numerically positive definite.
pub fn log_marginal_likelihood_at(x: &[Vec<f64>], y: &[f64], params: &KernelParams) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let mut k = kernel_matrix(x, params);
    for i in 0..k.nrows() {
        k[(i, i)] += params.jitter * params.amplitude;
    }
    let chol = Cholesky::new(k)?;
    let y = DVector::from_column_slice(y);
    let w = chol.solve(&y);
    Some(lml_from_factor(&chol, &y, &w))
}

/// Zero-mean, unit-variance standardization constants (`sd = 1` for flat data).
pub(crate) fn standardization(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    (mean, if sd > 1e-12 * mean.abs().max(1.0) { sd } else { 1.0 })
}

/// A fitted, immutable GP posterior for one objective.
#[derive(Debug, Clone)]
pub struct GpModel {
    train_x: Vec<Vec<f64>>,
    train_y: DVector<f64>,
    params: KernelParams,
    factor: Cholesky<f64, Dyn>,
    weights: DVector<f64>,
    target_mean: f64,
    target_sd: f64,
}

impl GpModel {
    /// Fits the posterior to `train_x` (unit-box inputs) and raw targets.
    ///
    /// The jitter actually used (after any escalation) is reported by
    /// [`GpModel::params`].
    pub fn fit(train_x: &[Vec<f64>], train_y: &[f64], params: KernelParams) -> Result<Self> {
        assert!(train_x.len() >= 2, "a GP needs at least two training points");
        assert_eq!(train_x.len(), train_y.len(), "input/target count mismatch");
        let (target_mean, target_sd) = standardization(train_y);
        let y = DVector::from_iterator(train_y.len(), train_y.iter().map(|v| (v - target_mean) / target_sd));
        let k = kernel_matrix(train_x, &params);
        let (factor, jitter) = factorize(&k, params.amplitude, params.jitter)?;
        let weights = factor.solve(&y);
        Ok(Self {
            train_x: train_x.to_vec(),
            train_y: y,
            params: params.with_jitter(jitter),
            factor,
            weights,
            target_mean,
            target_sd,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn num_train(&self) -> usize {
        self.train_x.len()
    }

    pub fn num_variables(&self) -> usize {
        self.train_x[0].len()
    }

    pub fn target_mean(&self) -> f64 {
        self.target_mean
    }

    pub fn target_sd(&self) -> f64 {
        self.target_sd
    }

    /// Lower-triangular factor of the jittered kernel matrix.
    pub fn factor(&self) -> DMatrix<f64> {
        self.factor.l()
    }

    /// Dual coefficients solving `(K + jitter I) w = y` in standardized units.
    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn standardized_targets(&self) -> &DVector<f64> {
        &self.train_y
    }

    pub fn log_marginal_likelihood(&self) -> f64 {
        lml_from_factor(&self.factor, &self.train_y, &self.weights)
    }

    fn cross_covariance(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.train_x.len(),
            self.train_x.iter().map(|t| matern52(distance(x, t), &self.params)),
        )
    }

    /// Posterior mean on the raw target scale.
    pub fn predict_mean(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (t, w) in self.train_x.iter().zip(self.weights.iter()) {
            s += w * matern52(distance(x, t), &self.params);
        }
        self.target_mean + self.target_sd * s
    }

    /// Posterior mean and variance on the raw target scale.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let k = self.cross_covariance(x);
        let mean = self.target_mean + self.target_sd * k.dot(&self.weights);
        let v = self
            .factor
            .l_dirty()
            .solve_lower_triangular(&k)
            .expect("factor has a positive diagonal");
        let var = (self.params.amplitude - v.norm_squared()).max(0.0);
        (mean, self.target_sd * self.target_sd * var)
    }

    /// Gradient of the posterior mean with respect to `x`.
    pub fn mean_gradient(&self, x: &[f64]) -> DVector<f64> {
        let n = x.len();
        let mut g = DVector::zeros(n);
        let rho = self.params.length_scale;
        let c = 5.0 * self.params.amplitude / (3.0 * rho * rho);
        for (t, w) in self.train_x.iter().zip(self.weights.iter()) {
            let d = distance(x, t);
            if d == 0.0 {
                continue;
            }
            let sd = SQRT5 * d / rho;
            let phi = -c * (1.0 + sd) * (-sd).exp() * w;
            for j in 0..n {
                g[j] += phi * (x[j] - t[j]);
            }
        }
        g * self.target_sd
    }

    /// Hessian of the posterior mean with respect to `x`.
    pub fn mean_hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let mut h = DMatrix::zeros(n, n);
        let rho = self.params.length_scale;
        let a = self.params.amplitude;
        let c = 5.0 * a / (3.0 * rho * rho);
        let c2 = 25.0 * a / (3.0 * rho.powi(4));
        let mut r = vec![0.0; n];
        for (t, w) in self.train_x.iter().zip(self.weights.iter()) {
            for j in 0..n {
                r[j] = x[j] - t[j];
            }
            let d = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            let sd = SQRT5 * d / rho;
            let e = (-sd).exp();
            let diag = -c * (1.0 + sd) * e * w;
            let outer = c2 * e * w;
            for i in 0..n {
                h[(i, i)] += diag;
                for j in 0..n {
                    h[(i, j)] += outer * r[i] * r[j];
                }
            }
        }
        h * self.target_sd
    }
}
