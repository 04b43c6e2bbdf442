//! Domain types shared by every stage of the optimizer.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// Box-shaped search space `[lower_i, upper_i]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert!(!lower.is_empty(), "bounds need at least one dimension");
        assert_eq!(lower.len(), upper.len(), "lower/upper length mismatch");
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            assert!(l < u, "bounds[{i}]: lower {l} must be < upper {u}");
        }
        Self { lower, upper }
    }

    /// The unit hypercube `[0, 1]^n`.
    pub fn unit(n: usize) -> Self {
        Self::new(vec![0.0; n], vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    /// Inclusive containment test.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    pub fn clip(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }

    /// Maps `x` into the unit cube.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, v)| (v - self.lower[i]) / self.width(i))
            .collect()
    }

    /// Inverse of [`Bounds::normalize`].
    pub fn denormalize(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(i, v)| (self.lower[i] + v * self.width(i)).clamp(self.lower[i], self.upper[i]))
            .collect()
    }
}

/// A point in decision space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(pub Vec<f64>);

impl Deref for DecisionVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DecisionVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Objective values of one solution, all to be minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

impl Deref for ObjectiveVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Where an objective vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    TrueEvaluation,
    SurrogatePrediction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedSolution {
    pub x: DecisionVector,
    pub f: ObjectiveVector,
    source: Source,
}

impl EvaluatedSolution {
    pub fn new(x: impl Into<DecisionVector>, f: impl Into<ObjectiveVector>, source: Source) -> Self {
        Self {
            x: x.into(),
            f: f.into(),
            source,
        }
    }

    pub fn evaluated(x: impl Into<DecisionVector>, f: impl Into<ObjectiveVector>) -> Self {
        Self::new(x, f, Source::TrueEvaluation)
    }

    pub fn predicted(x: impl Into<DecisionVector>, f: impl Into<ObjectiveVector>) -> Self {
        Self::new(x, f, Source::SurrogatePrediction)
    }

    pub fn source(&self) -> Source {
        self.source
    }
}

/// Ordered collection of solutions sharing `n` and `m`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Population {
    members: Vec<EvaluatedSolution>,
}

impl Population {
    pub fn new(members: Vec<EvaluatedSolution>) -> Self {
        if let Some(first) = members.first() {
            let (n, m) = (first.x.len(), first.f.len());
            assert!(
                members.iter().all(|s| s.x.len() == n && s.f.len() == m),
                "population members must share n and m"
            );
        }
        Self { members }
    }

    pub fn members(&self) -> &[EvaluatedSolution] {
        &self.members
    }

    pub fn into_members(self) -> Vec<EvaluatedSolution> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, s: EvaluatedSolution) {
        if let Some(first) = self.members.first() {
            assert!(s.x.len() == first.x.len() && s.f.len() == first.f.len());
        }
        self.members.push(s);
    }

    pub fn extend(&mut self, other: Population) {
        for s in other.members {
            self.push(s);
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EvaluatedSolution> {
        self.members.iter()
    }

    /// Objective vectors as plain slices, in member order.
    pub fn objectives(&self) -> Vec<&[f64]> {
        self.members.iter().map(|s| &s.f[..]).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Population {
        Population {
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }
}

impl FromIterator<EvaluatedSolution> for Population {
    fn from_iter<T: IntoIterator<Item = EvaluatedSolution>>(iter: T) -> Self {
        Population::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Population {
    type Item = &'a EvaluatedSolution;
    type IntoIter = std::slice::Iter<'a, EvaluatedSolution>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Euclidean distance.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
