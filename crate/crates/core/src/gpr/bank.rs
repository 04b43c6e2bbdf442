use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{optimize_hyperparameters, GpModel, HyperSearch, KernelParams};
use crate::error::Result;
use crate::objective::{DifferentiableVectorObjective, VectorObjective};
use crate::rng::RandomSource;

/// One independent GP per objective over shared training inputs.
#[derive(Debug, Clone)]
pub struct SurrogateBank {
    models: Vec<GpModel>,
}

impl SurrogateBank {
    /// Fits with fixed kernel parameters, one entry per objective.
    pub fn fit(train_x: &[Vec<f64>], train_f: &[Vec<f64>], params: &[KernelParams]) -> Result<Self> {
        let m = params.len();
        assert!(train_f.iter().all(|f| f.len() == m), "objective count mismatch");
        let models = (0..m)
            .into_par_iter()
            .map(|j| {
                let y: Vec<f64> = train_f.iter().map(|f| f[j]).collect();
                GpModel::fit(train_x, &y, params[j])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { models })
    }

    /// Searches hyperparameters for every objective, then fits.
    ///
    /// Objective `j` draws its starts from `rng.child(j)`, so the result does
    /// not depend on scheduling.
    pub fn fit_optimized(
        train_x: &[Vec<f64>],
        train_f: &[Vec<f64>],
        rng: &RandomSource,
        search: &HyperSearch,
        warm_start: Option<&[KernelParams]>,
    ) -> Result<Self> {
        let m = train_f[0].len();
        let params: Vec<KernelParams> = (0..m)
            .into_par_iter()
            .map(|j| {
                let y: Vec<f64> = train_f.iter().map(|f| f[j]).collect();
                let mut child = rng.child(j as u64);
                optimize_hyperparameters(train_x, &y, &mut child, search, warm_start.map(|w| w[j]))
            })
            .collect();
        Self::fit(train_x, train_f, &params)
    }

    pub fn from_models(models: Vec<GpModel>) -> Self {
        assert!(!models.is_empty());
        Self { models }
    }

    pub fn models(&self) -> &[GpModel] {
        &self.models
    }

    pub fn params(&self) -> Vec<KernelParams> {
        self.models.iter().map(|g| *g.params()).collect()
    }
}

impl VectorObjective for SurrogateBank {
    fn num_objectives(&self) -> usize {
        self.models.len()
    }

    fn num_variables(&self) -> usize {
        self.models[0].num_variables()
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.models.iter().map(|g| g.predict_mean(x)).collect()
    }
}

impl DifferentiableVectorObjective for SurrogateBank {
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let grads: Vec<_> = self.models.iter().map(|g| g.mean_gradient(x).transpose()).collect();
        DMatrix::from_rows(&grads)
    }

    fn hessians(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        self.models.iter().map(|g| g.mean_hessian(x)).collect()
    }
}
