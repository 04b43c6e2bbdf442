//! Evolutionary multi-objective optimizers run on surrogate predictions:
//! NSGA-II, IBEA and MOEA/D with SBX crossover and polynomial mutation.

mod ibea;
mod moead;
mod nsga2;
mod operators;
mod sorting;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::objective::VectorObjective;
use crate::rng::RandomSource;
use crate::types::{Bounds, EvaluatedSolution, Population};

pub use ibea::{ibea_fitness, ibea_run, indicator_hd, normalize_objectives};
pub use moead::{das_dennis_weights, default_divisions, moead_run, tchebycheff, IdealPoint, WeightSet};
pub use nsga2::nsga2_run;
pub use operators::{polynomial_mutation, sbx_crossover, OperatorParams};
pub use sorting::{crowding_distance, nondominated_sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Nsga2,
    Ibea,
    Moead,
}

impl Optimizer {
    pub fn id(self) -> &'static str {
        match self {
            Optimizer::Nsga2 => "nsga2",
            Optimizer::Ibea => "ibea",
            Optimizer::Moead => "moead",
        }
    }
}

impl std::str::FromStr for Optimizer {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nsga2" | "nsga-ii" => Ok(Optimizer::Nsga2),
            "ibea" => Ok(Optimizer::Ibea),
            "moead" | "moea/d" => Ok(Optimizer::Moead),
            _ => Err(crate::Error::Config(format!("unknown optimizer '{s}'"))),
        }
    }
}

/// Settings shared by the three optimizers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Population size; MOEA/D uses the Das–Dennis lattice size instead.
    pub population: usize,
    pub generations: usize,
    pub operators: OperatorParams,
    /// MOEA/D neighbourhood size T.
    pub neighborhood: usize,
    /// MOEA/D probability of mating/replacing over the whole population.
    pub delta: f64,
    /// MOEA/D cap on replacements per offspring.
    pub replacement_cap: usize,
    /// MOEA/D lattice divisions H; `None` picks [`default_divisions`].
    pub divisions: Option<usize>,
    /// IBEA fitness scaling factor.
    pub kappa: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            population: 100,
            generations: 100,
            operators: OperatorParams::default(),
            neighborhood: 20,
            delta: 0.1,
            replacement_cap: 2,
            divisions: None,
            kappa: 0.05,
        }
    }
}

impl SearchConfig {
    /// Runs `optimizer` on `objective` within `bounds`.
    pub fn run<O: VectorObjective + ?Sized>(
        &self,
        optimizer: Optimizer,
        objective: &O,
        bounds: &Bounds,
        rng: &mut RandomSource,
    ) -> Population {
        match optimizer {
            Optimizer::Nsga2 => nsga2_run(objective, bounds, self, rng),
            Optimizer::Ibea => ibea_run(objective, bounds, self, rng),
            Optimizer::Moead => moead_run(objective, bounds, self, rng),
        }
    }
}

pub(crate) fn random_point(bounds: &Bounds, rng: &mut RandomSource) -> Vec<f64> {
    (0..bounds.dim())
        .map(|i| bounds.lower()[i] + rng.random::<f64>() * bounds.width(i))
        .collect()
}

pub(crate) fn evaluate<O: VectorObjective + ?Sized>(objective: &O, x: Vec<f64>) -> EvaluatedSolution {
    let f = objective.value(&x);
    EvaluatedSolution::predicted(x, f)
}

/// Offspring of two parents: SBX followed by mutation of both children.
pub(crate) fn reproduce(
    p1: &[f64],
    p2: &[f64],
    bounds: &Bounds,
    params: &OperatorParams,
    rng: &mut RandomSource,
) -> (Vec<f64>, Vec<f64>) {
    let (c1, c2) = sbx_crossover(p1, p2, bounds, params, rng);
    (
        polynomial_mutation(&c1, bounds, params, rng),
        polynomial_mutation(&c2, bounds, params, rng),
    )
}
