use serde::{Deserialize, Serialize};

use crate::batch::Selector;
use crate::emo::{Optimizer, SearchConfig};
use crate::error::{Error, Result};
use crate::gpr::HyperSearch;
use crate::manifold::InterpolationConfig;
use crate::problems::{DisconnectParams, ProblemSpec};
use crate::sampling::InitialDesign;

/// One experiment: a problem, an optimizer/selector pair and a seed.
///
/// Every field except `problem`, `n` and `m` has a default, so a minimal JSON
/// config is `{"problem": "zdt31", "n": 10, "m": 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    /// Overrides the `(A, alpha, beta)` bound by the problem id.
    pub params: Option<DisconnectParams>,
    pub optimizer: Optimizer,
    pub selector: Selector,
    /// Batch size: true evaluations per iteration.
    pub batch_size: usize,
    pub interpolation: InterpolationConfig,
    pub interpolation_enabled: bool,
    /// Defaults to `11n - 1`.
    pub initial_size: Option<usize>,
    /// True evaluations after the initial design; defaults to 150 (m = 2)
    /// or 250 (m >= 3).
    pub max_fes: Option<usize>,
    pub seed: u64,
    pub search: SearchConfig,
    pub hyper: HyperSearch,
    /// When set, refits after the first iteration start from the previous
    /// hyperparameters plus this many random starts in total.
    pub refit_starts: Option<usize>,
    /// Points sampled from the true front for the reference point and
    /// segment coverage.
    pub pf_samples: usize,
    pub gap_factor: f64,
    /// Normalized objective distance within which a front point covers a
    /// true-front segment.
    pub coverage_tolerance: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: String::new(),
            n: 0,
            m: 2,
            params: None,
            optimizer: Optimizer::Moead,
            selector: Selector::Ihv,
            batch_size: 10,
            interpolation: InterpolationConfig::default(),
            interpolation_enabled: true,
            initial_size: None,
            max_fes: None,
            seed: 0,
            search: SearchConfig::default(),
            hyper: HyperSearch::default(),
            refit_starts: None,
            pf_samples: 1000,
            gap_factor: 5.0,
            coverage_tolerance: 0.05,
        }
    }
}

impl ExperimentConfig {
    pub fn new(problem: &str, n: usize, m: usize) -> Self {
        Self {
            problem: problem.to_string(),
            n,
            m,
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn initial_size(&self) -> usize {
        self.initial_size.unwrap_or_else(|| InitialDesign::default_size(self.n))
    }

    pub fn max_fes(&self) -> usize {
        self.max_fes.unwrap_or(if self.m == 2 { 150 } else { 250 })
    }

    /// `dmi-<optimizer>[-ihv]`, without the prefix when interpolation is off.
    pub fn instance_name(&self) -> String {
        let mut name = String::new();
        if self.interpolation_enabled {
            name.push_str("dmi-");
        }
        name.push_str(self.optimizer.id());
        if self.selector == Selector::Ihv {
            name.push_str("-ihv");
        }
        name
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let spec = ProblemSpec::from_id(&self.problem, self.n, self.m)?;
        match self.params {
            Some(p) if spec.params.is_some() => ProblemSpec::with_params(spec.family, self.n, self.m, p),
            Some(_) => Err(Error::Config(format!("problem '{}' takes no parameters", self.problem))),
            None => Ok(spec),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        self.problem_spec()?;
        if !(2..=3).contains(&self.m) {
            return fail(format!("runs report exact hypervolume, which needs m in {{2,3}}; got m={}", self.m));
        }
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1".into());
        }
        if self.interpolation.count_total == 0 {
            return fail("interpolation.count_total must be at least 1".into());
        }
        if self.interpolation.step_scale < 0.0 {
            return fail("interpolation.step_scale must be non-negative".into());
        }
        let max_fes = self.max_fes();
        if max_fes != 0 && max_fes < self.batch_size {
            return fail(format!("max_fes ({max_fes}) is smaller than batch_size ({})", self.batch_size));
        }
        if self.initial_size() < 2 {
            return fail("initial_size must be at least 2".into());
        }
        if self.search.population == 0 {
            return fail("search.population must be positive".into());
        }
        if self.pf_samples == 0 {
            return fail("pf_samples must be positive".into());
        }
        Ok(())
    }
}
