//! The optimisation loop, suites of runs, and their on-disk records.

mod config;
mod output;
mod suite;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::batch::{
    select_ibea_native, select_ihv, select_moead_native, select_nsga2_native, subproblem_bests, BatchSelection,
    Selector,
};
use crate::dominance::nondominated_filter;
use crate::emo::{das_dennis_weights, default_divisions, tchebycheff, IdealPoint, Optimizer, WeightSet};
use crate::error::{Error, Result};
use crate::gpr::{KernelParams, SurrogateBank};
use crate::manifold::{interpolate, DEDUP_TOLERANCE};
use crate::metrics::{hypervolume, ReferencePoint};
use crate::problems::{evaluate_true, sample_true_pf, segment_coverage, EvaluationBudget, ProblemSpec};
use crate::rng::RandomSource;
use crate::sampling::latin_hypercube;
use crate::types::{distance, Bounds, EvaluatedSolution, Population};

pub use config::ExperimentConfig;
pub use output::{emit_front, true_front_path, read_front_csv, summary_header, summary_row, write_summary};
pub use suite::{run_suite, suite_threads, InstanceEntry, ProblemEntry, SuiteConfig, SuiteOutcome, SuiteRun, THREADS_ENV};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: usize,
    /// True evaluations consumed after this iteration (initial design excluded).
    pub fes_consumed: usize,
    pub archive_hv: f64,
    /// Newly evaluated solutions, raw decision vectors and true objectives.
    pub batch: Vec<EvaluatedSolution>,
    pub hyperparameters: Vec<KernelParams>,
    pub candidates: usize,
    pub interpolated: usize,
    /// Batch members that came from interpolation rather than the search.
    pub interpolated_chosen: usize,
    /// Batch slots filled with fresh Latin hypercube points.
    pub refilled: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub covered: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub instance: String,
    pub reference: Vec<f64>,
    pub archive: Population,
    pub iterations: Vec<IterationLog>,
    pub front: Population,
    pub initial_hv: f64,
    pub final_hv: f64,
    pub coverage: Coverage,
    /// All true evaluations, initial design included.
    pub true_fes: usize,
}

impl RunRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Reference point and sampled true front shared by every run on a problem.
pub struct ProblemContext {
    pub spec: ProblemSpec,
    pub true_pf: Vec<Vec<f64>>,
    pub reference: ReferencePoint,
}

impl ProblemContext {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        let spec = config.problem_spec()?;
        let true_pf = sample_true_pf(&spec, config.pf_samples);
        let reference = ReferencePoint::from_true_front(&true_pf);
        Ok(Self {
            spec,
            true_pf,
            reference,
        })
    }

    fn coverage(&self, front: &Population, config: &ExperimentConfig) -> Coverage {
        let pts: Vec<Vec<f64>> = front.iter().map(|s| s.f.0.clone()).collect();
        let c = segment_coverage(&pts, &self.true_pf, config.gap_factor, config.coverage_tolerance);
        Coverage {
            covered: c.covered,
            total: c.total,
        }
    }
}

fn archive_hv(archive: &Population, reference: &ReferencePoint) -> Result<f64> {
    hypervolume(&nondominated_filter(archive), reference)
}

fn is_near(x: &[f64], others: &[Vec<f64>]) -> bool {
    others.iter().any(|o| distance(x, o) <= DEDUP_TOLERANCE)
}

/// Selector state that persists across iterations.
struct SelectionContext {
    weights: WeightSet,
    /// Per-subproblem objective vectors of the previous best members
    /// (MOEA/D native selection).
    previous: Option<Vec<Vec<f64>>>,
}

impl SelectionContext {
    fn select(
        &self,
        config: &ExperimentConfig,
        pool: &Population,
        limit: usize,
        archive_f: &[&[f64]],
    ) -> Result<BatchSelection> {
        Ok(match (config.selector, config.optimizer) {
            (Selector::Ihv, _) => select_ihv(pool, limit)?,
            (Selector::Native, Optimizer::Nsga2) => select_nsga2_native(pool, limit, &self.weights),
            (Selector::Native, Optimizer::Ibea) => select_ibea_native(pool, limit, config.search.kappa),
            (Selector::Native, Optimizer::Moead) => {
                let (ideal, previous) = self.moead_reference(pool, archive_f);
                select_moead_native(pool, limit, &self.weights, &ideal.z, &previous)
            }
        })
    }

    /// Ideal point over archive and pool, and previous per-subproblem values
    /// under it: from the archive at first, later from the last pool.
    fn moead_reference(&self, pool: &Population, archive_f: &[&[f64]]) -> (IdealPoint, Vec<f64>) {
        let m = archive_f[0].len();
        let ideal = IdealPoint::from_points(archive_f.iter().copied().chain(pool.iter().map(|s| &s.f[..])), m);
        let previous: Vec<f64> = match &self.previous {
            Some(prev) => prev
                .iter()
                .zip(&self.weights.vectors)
                .map(|(f, w)| tchebycheff(f, w, &ideal.z))
                .collect(),
            None => subproblem_bests(archive_f, &self.weights, &ideal.z)
                .into_iter()
                .map(|(_, g)| g)
                .collect(),
        };
        (ideal, previous)
    }

    fn remember(&mut self, pool: &Population, archive_f: &[&[f64]]) {
        let (ideal, _) = self.moead_reference(pool, archive_f);
        let objs = pool.objectives();
        self.previous = Some(
            subproblem_bests(&objs, &self.weights, &ideal.z)
                .into_iter()
                .map(|(i, _)| objs[i].to_vec())
                .collect(),
        );
    }
}

/// Picks up to `limit` new normalized points from `pool`, re-selecting
/// among the remaining candidates whenever picks duplicate the archive or
/// each other. Returns the picks and how many came from the pool.
fn choose_batch(
    config: &ExperimentConfig,
    selection: &SelectionContext,
    mut pool: Population,
    limit: usize,
    archive_x: &[Vec<f64>],
    archive_f: &[&[f64]],
) -> Result<Vec<Vec<f64>>> {
    let mut picked: Vec<Vec<f64>> = Vec::with_capacity(limit);
    while picked.len() < limit && !pool.is_empty() {
        let sel = selection.select(config, &pool, limit - picked.len(), archive_f)?;
        if sel.indices.is_empty() {
            break;
        }
        for &i in &sel.indices {
            let x = &pool.members()[i].x;
            if !is_near(x, archive_x) && !is_near(x, &picked) {
                picked.push(x.0.clone());
            }
        }
        let rest: Vec<usize> = (0..pool.len()).filter(|i| !sel.indices.contains(i)).collect();
        pool = pool.subset(&rest);
    }
    Ok(picked)
}

fn fit_bank(
    archive_x: &[Vec<f64>],
    archive_f: &[Vec<f64>],
    config: &ExperimentConfig,
    rng: &RandomSource,
    warm: Option<&[KernelParams]>,
) -> Result<SurrogateBank> {
    let mut search = config.hyper.clone();
    if warm.is_some() {
        if let Some(k) = config.refit_starts {
            search.starts = k.max(1);
        }
    }
    match SurrogateBank::fit_optimized(archive_x, archive_f, rng, &search, warm) {
        Err(Error::IllConditioned { jitter }) => {
            log::warn!("surrogate ill-conditioned at jitter {jitter:e}; retrying with doubled jitter");
            search.jitter *= 2.0;
            SurrogateBank::fit_optimized(archive_x, archive_f, rng, &search, warm)
        }
        other => other,
    }
}

/// Runs the full surrogate-assisted loop for `config`.
pub fn run_dmi(config: &ExperimentConfig) -> Result<RunRecord> {
    config.validate()?;
    let context = ProblemContext::new(config)?;
    run_dmi_with(config, &context)
}

/// As [`run_dmi`], reusing a precomputed problem context.
pub fn run_dmi_with(config: &ExperimentConfig, context: &ProblemContext) -> Result<RunRecord> {
    config.validate()?;
    let spec = &context.spec;
    let bounds = &spec.bounds;
    let unit = Bounds::unit(spec.n);
    let mut rng = RandomSource::new(config.seed);

    let design = latin_hypercube(config.initial_size(), bounds, &mut rng);
    let mut archive: Population = design
        .points
        .into_iter()
        .map(|x| {
            let f = spec.evaluate(&x);
            EvaluatedSolution::evaluated(x, f)
        })
        .collect();
    let initial_hv = archive_hv(&archive, &context.reference)?;

    let budget = EvaluationBudget::new(config.max_fes());
    let divisions = config.search.divisions.unwrap_or_else(|| default_divisions(spec.m));
    let mut selection = SelectionContext {
        weights: das_dennis_weights(spec.m, divisions),
        previous: None,
    };
    let mut warm: Option<Vec<KernelParams>> = None;
    let mut iterations = Vec::new();

    while !budget.is_exhausted() {
        let started = Instant::now();
        let iteration = iterations.len() + 1;
        let archive_x: Vec<Vec<f64>> = archive.iter().map(|s| bounds.normalize(&s.x)).collect();
        let archive_f: Vec<Vec<f64>> = archive.iter().map(|s| s.f.0.clone()).collect();
        let archive_refs: Vec<&[f64]> = archive_f.iter().map(Vec::as_slice).collect();

        let bank = fit_bank(&archive_x, &archive_f, config, &rng.child(iteration as u64), warm.as_deref())?;
        let mut search_rng = rng.child(1_000_000 + iteration as u64);
        let population = config.search.run(config.optimizer, &bank, &unit, &mut search_rng);
        let interpolated = if config.interpolation_enabled {
            interpolate(&population, &bank, &config.interpolation, &unit, &archive_x, &mut search_rng)
        } else {
            Population::default()
        };
        let n_interpolated = interpolated.len();
        let interpolated_x: Vec<Vec<f64>> = interpolated.iter().map(|s| s.x.0.clone()).collect();
        let mut pool = population;
        pool.extend(interpolated);
        let candidates = pool.len();

        let limit = config.batch_size.min(budget.remaining());
        let mut picked = choose_batch(config, &selection, pool.clone(), limit, &archive_x, &archive_refs)?;
        if config.selector == Selector::Native && config.optimizer == Optimizer::Moead {
            selection.remember(&pool, &archive_refs);
        }
        let from_pool = picked.len();
        let interpolated_chosen = picked.iter().filter(|p| interpolated_x.contains(p)).count();
        let mut attempts = 0;
        while picked.len() < limit {
            attempts += 1;
            if attempts > 1000 {
                return Err(Error::InvalidInput("could not find fresh points to fill the batch".into()));
            }
            for p in latin_hypercube(limit - picked.len(), &unit, &mut rng).points {
                if picked.len() < limit && !is_near(&p, &archive_x) && !is_near(&p, &picked) {
                    picked.push(p.0);
                }
            }
        }
        if picked.len() > from_pool {
            log::info!("iteration {iteration}: filled {} batch slots with fresh samples", picked.len() - from_pool);
        }

        let raw: Vec<Vec<f64>> = picked.iter().map(|u| bounds.denormalize(u)).collect();
        let results: Vec<Result<EvaluatedSolution>> = raw
            .into_par_iter()
            .map(|x| {
                let f = evaluate_true(spec, &x, &budget)?;
                Ok(EvaluatedSolution::evaluated(x, f))
            })
            .collect();
        let batch: Vec<EvaluatedSolution> = results.into_iter().collect::<Result<_>>()?;
        for s in &batch {
            archive.push(s.clone());
        }

        let params = bank.params();
        iterations.push(IterationLog {
            iteration,
            fes_consumed: budget.consumed(),
            archive_hv: archive_hv(&archive, &context.reference)?,
            batch,
            hyperparameters: params.clone(),
            candidates,
            interpolated: n_interpolated,
            interpolated_chosen,
            refilled: limit - from_pool,
            wall_time_secs: started.elapsed().as_secs_f64(),
        });
        log::debug!(
            "iteration {iteration}: {} FEs, HV {:.6}",
            budget.consumed(),
            iterations.last().unwrap().archive_hv
        );
        warm = Some(params);
    }

    let front = nondominated_filter(&archive);
    let final_hv = hypervolume(&front, &context.reference)?;
    let coverage = context.coverage(&front, config);
    Ok(RunRecord {
        config: config.clone(),
        instance: config.instance_name(),
        reference: context.reference.r.0.clone(),
        true_fes: archive.len(),
        archive,
        iterations,
        front,
        initial_hv,
        final_hv,
        coverage,
    })
}

/// Pure Latin hypercube baseline spending the same total number of true
/// evaluations (`initial_size + max_fes`) as a full run.
pub fn run_lhs_baseline(config: &ExperimentConfig, context: &ProblemContext) -> Result<RunRecord> {
    config.validate()?;
    let spec = &context.spec;
    let mut rng = RandomSource::new(config.seed);
    let total = config.initial_size() + config.max_fes();
    let archive: Population = latin_hypercube(total, &spec.bounds, &mut rng)
        .points
        .into_iter()
        .map(|x| {
            let f = spec.evaluate(&x);
            EvaluatedSolution::evaluated(x, f)
        })
        .collect();
    let front = nondominated_filter(&archive);
    let hv = hypervolume(&front, &context.reference)?;
    let coverage = context.coverage(&front, config);
    Ok(RunRecord {
        config: config.clone(),
        instance: "lhs".into(),
        reference: context.reference.r.0.clone(),
        true_fes: archive.len(),
        archive,
        iterations: Vec::new(),
        front,
        initial_hv: hv,
        final_hv: hv,
        coverage,
    })
}
