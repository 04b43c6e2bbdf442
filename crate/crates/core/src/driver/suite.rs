//! Suites of independent runs over problems, instances and seeds.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_dmi_with, run_lhs_baseline, summary_row, write_summary, ExperimentConfig, ProblemContext, RunRecord};
use crate::batch::Selector;
use crate::emo::Optimizer;
use crate::error::{Error, Result};
use crate::problems::DisconnectParams;

/// Environment variable overriding the number of worker threads.
pub const THREADS_ENV: &str = "DMI_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEntry {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub params: Option<DisconnectParams>,
}

/// An algorithm instance, written as its name: `dmi-moead-ihv`,
/// `moead-ihv` (no interpolation), `dmi-nsga2` (native selection), or
/// `lhs` for the pure Latin hypercube baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InstanceEntry {
    Dmi {
        optimizer: Optimizer,
        selector: Selector,
        interpolation: bool,
    },
    LhsBaseline,
}

impl InstanceEntry {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let InstanceEntry::Dmi {
            optimizer,
            selector,
            interpolation,
        } = *self
        {
            cfg.optimizer = optimizer;
            cfg.selector = selector;
            cfg.interpolation_enabled = interpolation;
        }
    }
}

impl FromStr for InstanceEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "lhs" {
            return Ok(InstanceEntry::LhsBaseline);
        }
        let (interpolation, rest) = match s.strip_prefix("dmi-") {
            Some(r) => (true, r),
            None => (false, s.as_str()),
        };
        let (selector, opt) = match rest.strip_suffix("-ihv") {
            Some(o) => (Selector::Ihv, o),
            None => (Selector::Native, rest),
        };
        let optimizer = opt
            .parse()
            .map_err(|_| Error::Config(format!("unknown instance '{s}'")))?;
        Ok(InstanceEntry::Dmi {
            optimizer,
            selector,
            interpolation,
        })
    }
}

impl TryFrom<String> for InstanceEntry {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for InstanceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InstanceEntry::LhsBaseline => f.write_str("lhs"),
            InstanceEntry::Dmi { .. } => {
                let mut cfg = ExperimentConfig::default();
                self.apply(&mut cfg);
                f.write_str(&cfg.instance_name())
            }
        }
    }
}

impl From<InstanceEntry> for String {
    fn from(e: InstanceEntry) -> String {
        e.to_string()
    }
}

/// Problems x instances x seeds; every other setting comes from `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub problems: Vec<ProblemEntry>,
    pub instances: Vec<InstanceEntry>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub base: ExperimentConfig,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        for c in cfg.configs() {
            c.1.validate()?;
        }
        Ok(cfg)
    }

    /// Every run of the suite in problem, instance, seed order.
    pub fn configs(&self) -> Vec<(InstanceEntry, ExperimentConfig)> {
        let mut out = Vec::new();
        for p in &self.problems {
            for inst in &self.instances {
                for &seed in &self.seeds {
                    let mut cfg = self.base.clone();
                    cfg.problem = p.problem.clone();
                    cfg.n = p.n;
                    cfg.m = p.m;
                    cfg.params = p.params;
                    cfg.seed = seed;
                    inst.apply(&mut cfg);
                    out.push((*inst, cfg));
                }
            }
        }
        out
    }
}

/// One suite entry: the run's config and either its record or the error
/// that stopped it.
#[derive(Debug)]
pub struct SuiteRun {
    pub instance: InstanceEntry,
    pub config: ExperimentConfig,
    pub result: std::result::Result<RunRecord, String>,
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub runs: Vec<SuiteRun>,
}

impl SuiteOutcome {
    pub fn summary_rows(&self) -> Vec<Vec<String>> {
        self.runs
            .iter()
            .map(|r| match &r.result {
                Ok(rec) => summary_row(rec),
                Err(e) => {
                    let c = &r.config;
                    vec![
                        c.problem.clone(),
                        c.n.to_string(),
                        c.m.to_string(),
                        r.instance.to_string(),
                        c.seed.to_string(),
                        format!("error: {e}"),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]
                }
            })
            .collect()
    }

    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter_map(|r| r.result.as_ref().ok())
    }
}

/// Worker threads for suites: `DMI_THREADS` when set to a positive
/// integer, otherwise rayon's default.
pub fn suite_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

fn record_file_name(instance: &InstanceEntry, cfg: &ExperimentConfig) -> String {
    format!("{}_n{}_m{}_{}_s{}.json", cfg.problem, cfg.n, cfg.m, instance, cfg.seed)
}

/// Runs every entry of `suite`, concurrently where threads allow. Failed
/// runs are recorded and do not stop the suite. With `out`, writes one JSON
/// record per successful run and `summary.csv`.
pub fn run_suite(suite: &SuiteConfig, out: Option<&Path>) -> Result<SuiteOutcome> {
    let configs = suite.configs();
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }

    let mut contexts: HashMap<(String, usize, usize, Option<[u64; 3]>), std::result::Result<ProblemContext, String>> =
        HashMap::new();
    let key = |c: &ExperimentConfig| {
        (
            c.problem.clone(),
            c.n,
            c.m,
            c.params.map(|p| [p.a as u64, p.alpha.to_bits(), p.beta.to_bits()]),
        )
    };
    for (_, c) in &configs {
        contexts
            .entry(key(c))
            .or_insert_with(|| ProblemContext::new(c).map_err(|e| e.to_string()));
    }

    let work = || -> Vec<SuiteRun> {
        configs
            .par_iter()
            .map(|(inst, cfg)| {
                let result = match &contexts[&key(cfg)] {
                    Err(e) => Err(e.clone()),
                    Ok(ctx) => {
                        let r = match inst {
                            InstanceEntry::LhsBaseline => run_lhs_baseline(cfg, ctx),
                            InstanceEntry::Dmi { .. } => run_dmi_with(cfg, ctx),
                        };
                        r.map_err(|e| e.to_string())
                    }
                };
                if let Err(e) = &result {
                    log::error!("{}: {e}", record_file_name(inst, cfg));
                }
                SuiteRun {
                    instance: *inst,
                    config: cfg.clone(),
                    result,
                }
            })
            .collect()
    };
    let runs = match suite_threads() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let outcome = SuiteOutcome { runs };

    if let Some(dir) = out {
        for run in &outcome.runs {
            if let Ok(rec) = &run.result {
                fs::write(dir.join(record_file_name(&run.instance, &run.config)), rec.to_json()?)?;
            }
        }
        write_summary(&dir.join("summary.csv"), &outcome.summary_rows())?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_names_round_trip() {
        for name in ["dmi-moead-ihv", "moead-ihv", "dmi-nsga2", "ibea", "lhs", "dmi-ibea-ihv"] {
            let e: InstanceEntry = name.parse().unwrap();
            assert_eq!(e.to_string(), name);
        }
        assert!("dmi-foo".parse::<InstanceEntry>().is_err());
    }

    #[test]
    fn suite_bookkeeping_and_failures() {
        let dir = tempfile::tempdir().unwrap();
        let mut base = ExperimentConfig::default();
        base.max_fes = Some(10);
        base.search.generations = 5;
        base.search.population = 20;
        base.hyper.starts = 1;
        base.pf_samples = 100;
        base.interpolation.count_total = 20;
        let suite = SuiteConfig {
            problems: vec![
                ProblemEntry {
                    problem: "zdt31".into(),
                    n: 3,
                    m: 2,
                    params: None,
                },
                ProblemEntry {
                    problem: "dtlz71".into(),
                    n: 3,
                    m: 2,
                    params: None,
                },
            ],
            instances: vec!["dmi-moead-ihv".parse().unwrap(), "lhs".parse().unwrap()],
            seeds: vec![1, 2, 3],
            base,
        };
        let out = run_suite(&suite, Some(dir.path())).unwrap();
        assert_eq!(out.runs.len(), 12);
        let files = fs::read_dir(dir.path()).unwrap().filter(|e| {
            e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")
        });
        assert_eq!(files.count(), 12);
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 13);

        let again = run_suite(&suite, None).unwrap();
        assert_eq!(out.summary_rows(), again.summary_rows());

        let mut bad = suite.clone();
        bad.problems[1].n = 0;
        let out = run_suite(&bad, None).unwrap();
        assert_eq!(out.records().count(), 6);
        assert!(out.summary_rows()[6][5].starts_with("error"));
    }
}
