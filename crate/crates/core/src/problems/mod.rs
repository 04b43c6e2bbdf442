//! Benchmark problems with analytically known, possibly disconnected fronts.
//!
//! The parametric families take a [`DisconnectParams`] triple `(A, alpha, beta)`:
//! `A` drives the frequency of the disconnecting sine term, `alpha` its
//! amplitude shape and `beta` where along the front the breaks occur.

mod dtlz;
mod front;
mod wfg;
mod zdt;

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::VectorObjective;
use crate::types::{Bounds, ObjectiveVector};

pub use front::{count_segments, sample_true_pf, segment_coverage, segment_labels, SegmentCoverage};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisconnectParams {
    /// Number-of-regions control.
    pub a: u32,
    /// Shape control.
    pub alpha: f64,
    /// Location control.
    pub beta: f64,
}

impl DisconnectParams {
    pub fn new(a: u32, alpha: f64, beta: f64) -> Self {
        assert!(a >= 1, "A must be >= 1");
        assert!(alpha >= 0.0, "alpha must be non-negative");
        assert!(beta > 0.0, "beta must be positive");
        Self { a, alpha, beta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Zdt3,
    Zdt3Star,
    Dtlz7,
    Dtlz7Star,
    Dtlz2,
    MinusDtlz2,
    Wfg2,
    Wfg2Star,
}

impl Family {
    fn is_zdt(self) -> bool {
        matches!(self, Family::Zdt3 | Family::Zdt3Star)
    }

    fn is_wfg(self) -> bool {
        matches!(self, Family::Wfg2 | Family::Wfg2Star)
    }

    /// Parameters that reproduce the classic member of the family.
    fn classic_params(self) -> Option<DisconnectParams> {
        match self {
            Family::Zdt3 | Family::Zdt3Star => Some(DisconnectParams::new(10, 1.0, 1.0)),
            Family::Dtlz7 | Family::Dtlz7Star => Some(DisconnectParams::new(3, 0.0, 1.0)),
            Family::Wfg2 | Family::Wfg2Star => Some(DisconnectParams::new(5, 1.0, 1.0)),
            Family::Dtlz2 | Family::MinusDtlz2 => None,
        }
    }
}

/// Named instances and the parameter triple each binds.
pub const NAMED_INSTANCES: [(&str, Family, DisconnectParams); 7] = [
    ("zdt31", Family::Zdt3Star, DisconnectParams { a: 10, alpha: 10.0, beta: 1.0 }),
    ("zdt32", Family::Zdt3Star, DisconnectParams { a: 5, alpha: 0.0, beta: 5.0 }),
    ("dtlz71", Family::Dtlz7Star, DisconnectParams { a: 5, alpha: 0.0, beta: 1.0 }),
    ("dtlz72", Family::Dtlz7Star, DisconnectParams { a: 3, alpha: 0.0, beta: 2.0 }),
    ("wfg21", Family::Wfg2Star, DisconnectParams { a: 10, alpha: 1.0, beta: 1.0 }),
    ("wfg22", Family::Wfg2Star, DisconnectParams { a: 5, alpha: 5.0, beta: 1.0 }),
    ("wfg23", Family::Wfg2Star, DisconnectParams { a: 5, alpha: 1.0, beta: 5.0 }),
];

/// A fully configured benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub bounds: Bounds,
    pub params: Option<DisconnectParams>,
    /// Position-parameter count, WFG families only.
    pub wfg_k: Option<usize>,
}

impl ProblemSpec {
    pub fn new(family: Family, n: usize, m: usize, params: Option<DisconnectParams>) -> Result<Self> {
        let params = match family {
            Family::Zdt3Star | Family::Dtlz7Star | Family::Wfg2Star => Some(params.ok_or_else(|| {
                Error::Config(format!("{family:?} requires (A, alpha, beta) parameters"))
            })?),
            Family::Dtlz2 | Family::MinusDtlz2 => None,
            _ => family.classic_params(),
        };
        if family.is_zdt() && m != 2 {
            return Err(Error::Config(format!("{family:?} is bi-objective, got m={m}")));
        }
        if !(2..=3).contains(&m) && family.is_wfg() {
            return Err(Error::Config(format!("{family:?} supports m in {{2,3}}, got m={m}")));
        }
        if m < 2 {
            return Err(Error::Config(format!("need at least two objectives, got m={m}")));
        }
        if n < m || n < 2 {
            return Err(Error::Config(format!("need n >= m and n >= 2, got n={n}, m={m}")));
        }
        let mut wfg_k = None;
        let bounds = if family.is_wfg() {
            let k = wfg_position_count(n, m)?;
            wfg_k = Some(k);
            Bounds::new(vec![0.0; n], (1..=n).map(|i| 2.0 * i as f64).collect())
        } else {
            Bounds::unit(n)
        };
        Ok(Self {
            family,
            n,
            m,
            bounds,
            params,
            wfg_k,
        })
    }

    /// Builds a problem from its stable identifier, e.g. `"zdt31"`, `"dtlz2"`.
    pub fn from_id(id: &str, n: usize, m: usize) -> Result<Self> {
        let id = id.to_ascii_lowercase();
        if let Some((_, fam, p)) = NAMED_INSTANCES.iter().find(|(name, _, _)| *name == id) {
            return Self::new(*fam, n, m, Some(*p));
        }
        let family = match id.as_str() {
            "zdt3" => Family::Zdt3,
            "dtlz7" => Family::Dtlz7,
            "dtlz2" => Family::Dtlz2,
            "minus-dtlz2" | "minus_dtlz2" | "mdtlz2-minus" => Family::MinusDtlz2,
            "wfg2" => Family::Wfg2,
            _ => return Err(Error::Config(format!("unknown problem id '{id}'"))),
        };
        Self::new(family, n, m, None)
    }

    /// Parametric family member with explicit parameters.
    pub fn with_params(family: Family, n: usize, m: usize, params: DisconnectParams) -> Result<Self> {
        Self::new(family, n, m, Some(params))
    }

    /// Pure closed-form evaluation. Panics if `x` is outside the bounds.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "decision vector has wrong length");
        assert!(self.bounds.contains(x), "decision vector outside bounds: {x:?}");
        match self.family {
            Family::Zdt3 | Family::Zdt3Star => zdt::zdt3_star(x, self.params.unwrap()).to_vec(),
            Family::Dtlz7 | Family::Dtlz7Star => dtlz::dtlz7_star(x, self.m, self.params.unwrap()),
            Family::Dtlz2 => dtlz::dtlz2(x, self.m),
            Family::MinusDtlz2 => dtlz::minus_dtlz2(x, self.m),
            Family::Wfg2 | Family::Wfg2Star => {
                wfg::wfg2_star(x, self.m, self.wfg_k.unwrap(), self.params.unwrap())
            }
        }
    }
}

impl VectorObjective for ProblemSpec {
    fn num_objectives(&self) -> usize {
        self.m
    }

    fn num_variables(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> Vec<f64> {
        self.evaluate(x)
    }
}

/// `k = 2(m-1)` unless that leaves an odd number of distance variables, in
/// which case the bi-objective case grows `k` by one.
fn wfg_position_count(n: usize, m: usize) -> Result<usize> {
    let mut k = 2 * (m - 1);
    if (n.saturating_sub(k)) % 2 == 1 && m == 2 {
        k += 1;
    }
    let l = n.saturating_sub(k);
    if k >= n || l % 2 == 1 || l == 0 || k % (m - 1) != 0 {
        return Err(Error::Config(format!(
            "WFG needs k divisible by m-1 and an even, non-zero number of distance variables; n={n}, m={m}"
        )));
    }
    Ok(k)
}

/// Counter of true (expensive) evaluations against a hard cap.
#[derive(Debug)]
pub struct EvaluationBudget {
    consumed: AtomicUsize,
    maximum: usize,
}

impl EvaluationBudget {
    pub fn new(maximum: usize) -> Self {
        Self {
            consumed: AtomicUsize::new(0),
            maximum,
        }
    }

    pub fn consumed(&self) -> usize {
        self.consumed.load(Ordering::SeqCst)
    }

    pub fn maximum(&self) -> usize {
        self.maximum
    }

    pub fn remaining(&self) -> usize {
        self.maximum - self.consumed()
    }

    pub fn is_exhausted(&self) -> bool {
        self.consumed() >= self.maximum
    }

    fn try_consume(&self) -> Result<()> {
        self.consumed
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |c| (c < self.maximum).then_some(c + 1))
            .map(|_| ())
            .map_err(|c| Error::BudgetExhausted {
                consumed: c,
                maximum: self.maximum,
            })
    }
}

/// Evaluates `x` and charges one unit against `budget`.
pub fn evaluate_true(spec: &ProblemSpec, x: &[f64], budget: &EvaluationBudget) -> Result<ObjectiveVector> {
    assert!(spec.bounds.contains(x), "decision vector outside bounds: {x:?}");
    budget.try_consume()?;
    Ok(ObjectiveVector(spec.evaluate(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use rand::Rng;
    use std::f64::consts::PI;

    fn random_point(spec: &ProblemSpec, rng: &mut RandomSource) -> Vec<f64> {
        (0..spec.n)
            .map(|i| spec.bounds.lower()[i] + rng.random::<f64>() * spec.bounds.width(i))
            .collect()
    }

    #[test]
    fn zdt3_star_corner_values() {
        let spec = ProblemSpec::with_params(Family::Zdt3Star, 30, 2, DisconnectParams::new(10, 1.0, 1.0)).unwrap();
        let budget = EvaluationBudget::new(10);
        let f = evaluate_true(&spec, &vec![0.0; 30], &budget).unwrap();
        assert_eq!(f.0, vec![0.0, 1.0]);
        let mut x = vec![0.0; 30];
        x[0] = 1.0;
        let f = evaluate_true(&spec, &x, &budget).unwrap();
        assert_eq!(f[0], 1.0);
        assert!(f[1].abs() < 1e-12);
        assert_eq!(budget.consumed(), 2);
    }

    #[test]
    fn named_instances_bind_table_parameters() {
        let expect = [
            ("zdt31", 10, 10.0, 1.0),
            ("zdt32", 5, 0.0, 5.0),
            ("dtlz71", 5, 0.0, 1.0),
            ("dtlz72", 3, 0.0, 2.0),
            ("wfg21", 10, 1.0, 1.0),
            ("wfg22", 5, 5.0, 1.0),
            ("wfg23", 5, 1.0, 5.0),
        ];
        for (id, a, alpha, beta) in expect {
            let m = if id.starts_with("zdt") { 2 } else { 3 };
            let spec = ProblemSpec::from_id(id, 10, m).unwrap();
            assert_eq!(spec.params, Some(DisconnectParams::new(a, alpha, beta)), "{id}");
        }
        assert!(ProblemSpec::from_id("wfg48", 10, 2).is_err());
    }

    #[test]
    fn dtlz7_star_matches_independent_evaluation() {
        let spec = ProblemSpec::from_id("dtlz72", 10, 3).unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                let (x1, x2) = (i as f64 / 10.0, j as f64 / 10.0);
                let mut x = vec![0.0; 10];
                x[0] = x1;
                x[1] = x2;
                let f = spec.evaluate(&x);
                // g = 1 when the distance block is zero; 1 + g = 2
                let term = |v: f64| v / 2.0 * (1.0 + 1.0 * (3.0 * PI * v * v).sin());
                let f3 = 2.0 * (3.0 - term(x1) - term(x2));
                assert_eq!(f[0], x1);
                assert_eq!(f[1], x2);
                assert!((f[2] - f3).abs() < 1e-12, "({x1},{x2}): {} vs {f3}", f[2]);
            }
        }
    }

    #[test]
    fn zdt3_star_reduces_to_classic_zdt3() {
        let star = ProblemSpec::with_params(Family::Zdt3Star, 30, 2, DisconnectParams::new(10, 1.0, 1.0)).unwrap();
        let mut rng = RandomSource::new(3);
        for _ in 0..1000 {
            let x = random_point(&star, &mut rng);
            let g = 1.0 + 9.0 / 29.0 * x[1..].iter().sum::<f64>();
            let h = 1.0 - (x[0] / g).sqrt() - (x[0] / g) * (10.0 * PI * x[0]).sin();
            let f = star.evaluate(&x);
            assert!((f[0] - x[0]).abs() <= 1e-12);
            assert!((f[1] - g * h).abs() <= 1e-12);
        }
    }

    #[test]
    fn evaluations_are_pure() {
        let mut rng = RandomSource::new(9);
        for id in ["zdt31", "dtlz71", "wfg23", "dtlz2", "minus-dtlz2"] {
            let m = if id.starts_with("zdt") { 2 } else { 3 };
            let spec = ProblemSpec::from_id(id, 10, m).unwrap();
            let x = random_point(&spec, &mut rng);
            let a = spec.evaluate(&x);
            let b = spec.evaluate(&x);
            assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn distance_function_is_at_least_one() {
        let mut rng = RandomSource::new(11);
        for id in ["zdt31", "zdt32", "dtlz71", "dtlz72", "zdt3", "dtlz7"] {
            let m = if id.starts_with("zdt") { 2 } else { 3 };
            let spec = ProblemSpec::from_id(id, 10, m).unwrap();
            for _ in 0..200 {
                let x = random_point(&spec, &mut rng);
                let g = match spec.family {
                    Family::Zdt3 | Family::Zdt3Star => zdt::g(&x),
                    _ => dtlz::dtlz7_g(&x, spec.m),
                };
                assert!(g >= 1.0);
            }
        }
    }

    #[test]
    fn wfg2_star_objective_ranges() {
        let mut rng = RandomSource::new(5);
        for (id, m) in [("wfg21", 2), ("wfg22", 3), ("wfg23", 3), ("wfg2", 2)] {
            let spec = ProblemSpec::from_id(id, 10, m).unwrap();
            for _ in 0..1000 {
                let x = random_point(&spec, &mut rng);
                let shape = wfg::wfg2_shape_terms(&x, m, spec.wfg_k.unwrap(), spec.params.unwrap());
                let f = spec.evaluate(&x);
                for i in 0..m {
                    let s = 2.0 * (i + 1) as f64;
                    assert!((0.0..=s).contains(&shape[i]), "{id} shape f{i} = {}", shape[i]);
                    assert!((0.0..=s + 1.0).contains(&f[i]));
                }
            }
        }
    }

    #[test]
    fn wfg_position_count_rules() {
        assert_eq!(wfg_position_count(10, 2).unwrap(), 2);
        assert_eq!(wfg_position_count(5, 2).unwrap(), 3);
        assert_eq!(wfg_position_count(10, 3).unwrap(), 4);
        assert!(wfg_position_count(5, 3).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let spec = ProblemSpec::from_id("zdt3", 5, 2).unwrap();
        let budget = EvaluationBudget::new(1);
        let x = vec![0.5; 5];
        assert!(evaluate_true(&spec, &x, &budget).is_ok());
        assert!(matches!(
            evaluate_true(&spec, &x, &budget),
            Err(Error::BudgetExhausted { consumed: 1, maximum: 1 })
        ));
        assert_eq!(budget.consumed(), 1);
    }

    #[test]
    #[should_panic]
    fn out_of_bounds_is_a_contract_violation() {
        let spec = ProblemSpec::from_id("zdt3", 5, 2).unwrap();
        spec.evaluate(&[1.5, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        assert!(ProblemSpec::from_id("zdt31", 10, 3).is_err());
        assert!(ProblemSpec::new(Family::Zdt3Star, 10, 2, None).is_err());
        assert!(ProblemSpec::from_id("nope", 10, 2).is_err());
    }
}
