//! Surrogate-assisted multi-objective optimisation with Pareto-manifold
//! interpolation for fronts made of disconnected pieces.

pub mod batch;
pub mod dominance;
pub mod driver;
pub mod emo;
pub mod error;
pub mod gpr;
pub mod manifold;
pub mod metrics;
pub mod objective;
pub mod problems;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod types;

pub use batch::{BatchSelection, Selector};
pub use driver::{run_dmi, run_suite, ExperimentConfig, RunRecord, SuiteConfig};
pub use dominance::{dominates, nondominated_filter, nondominated_indices, weakly_dominates};
pub use emo::{Optimizer, SearchConfig};
pub use error::{Error, Result};
pub use gpr::{GpModel, HyperSearch, KernelParams, SurrogateBank};
pub use manifold::{interpolate, InterpolationConfig};
pub use metrics::{hypervolume, ihv_contributions, ReferencePoint};
pub use objective::{DifferentiableVectorObjective, VectorObjective};
pub use problems::{evaluate_true, DisconnectParams, EvaluationBudget, Family, ProblemSpec};
pub use rng::RandomSource;
pub use sampling::{latin_hypercube, InitialDesign};
pub use stats::{a12, wilcoxon_signed_rank, ComparisonReport, Magnitude};
pub use types::{Bounds, DecisionVector, EvaluatedSolution, ObjectiveVector, Population, Source};
