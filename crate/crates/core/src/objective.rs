//! Vector-valued objective interfaces.

use nalgebra::DMatrix;

/// A vector objective `F: R^n -> R^m` that can be queried pointwise.
pub trait VectorObjective: Sync {
    fn num_objectives(&self) -> usize;
    fn num_variables(&self) -> usize;
    fn value(&self, x: &[f64]) -> Vec<f64>;
}

/// A twice-differentiable vector objective.
///
/// `jacobian` is `m x n`; `hessians` holds one symmetric `n x n` matrix per
/// objective.
pub trait DifferentiableVectorObjective: VectorObjective {
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64>;
    fn hessians(&self, x: &[f64]) -> Vec<DMatrix<f64>>;
}

/// `f1 = |x|^2`, `f2 = |x - e1|^2`.
///
/// Its Pareto set is the segment `{(t, 0, ..., 0) : t in [0, 1]}`, which makes
/// it the reference model for tangent and search tests.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPair {
    pub n: usize,
}

impl QuadraticPair {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n }
    }

    /// Distance from `x` to the analytic Pareto set.
    pub fn distance_to_pareto_set(&self, x: &[f64]) -> f64 {
        let t = x[0].clamp(0.0, 1.0);
        let mut d2 = (x[0] - t).powi(2);
        d2 += x[1..].iter().map(|v| v * v).sum::<f64>();
        d2.sqrt()
    }
}

impl VectorObjective for QuadraticPair {
    fn num_objectives(&self) -> usize {
        2
    }

    fn num_variables(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        let f1: f64 = x.iter().map(|v| v * v).sum();
        let f2 = f1 - 2.0 * x[0] + 1.0;
        vec![f1, f2]
    }
}

impl DifferentiableVectorObjective for QuadraticPair {
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(2, self.n, |i, j| {
            let shift = if i == 1 && j == 0 { 1.0 } else { 0.0 };
            2.0 * (x[j] - shift)
        })
    }

    fn hessians(&self, _x: &[f64]) -> Vec<DMatrix<f64>> {
        vec![DMatrix::identity(self.n, self.n) * 2.0; 2]
    }
}
