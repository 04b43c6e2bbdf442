//! Exact hypervolume for two and three objectives and leave-one-out
//! contributions.

use serde::{Deserialize, Serialize};

use crate::dominance::weakly_dominates;
use crate::error::{Error, Result};
use crate::types::{ObjectiveVector, Population};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePoint {
    pub r: ObjectiveVector,
}

impl ReferencePoint {
    pub fn new(r: Vec<f64>) -> Self {
        Self { r: ObjectiveVector(r) }
    }

    /// Experiment-level reference from a sample of the true front:
    /// `1.1 * max` per objective, or `max + 0.1 * range` where the maximum
    /// is not positive.
    pub fn from_true_front(points: &[Vec<f64>]) -> Self {
        let (lo, hi) = extremes(points.iter().map(Vec::as_slice));
        Self::new(
            lo.iter()
                .zip(&hi)
                .map(|(&l, &h)| if h > 0.0 { 1.1 * h } else { h + pad(h - l) })
                .collect(),
        )
    }

    /// Per-candidate-set reference: `max + 0.1 * range` per objective.
    pub fn padded_max<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> Self {
        let (lo, hi) = extremes(points);
        Self::new(lo.iter().zip(&hi).map(|(&l, &h)| h + pad(h - l)).collect())
    }
}

fn pad(range: f64) -> f64 {
    if range > 0.0 {
        0.1 * range
    } else {
        0.1
    }
}

fn extremes<'a>(points: impl IntoIterator<Item = &'a [f64]>) -> (Vec<f64>, Vec<f64>) {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in points {
        if lo.is_empty() {
            lo = p.to_vec();
            hi = p.to_vec();
        }
        for j in 0..p.len() {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    assert!(!lo.is_empty(), "reference point needs at least one point");
    (lo, hi)
}

fn strictly_inside(p: &[f64], r: &[f64]) -> bool {
    p.iter().zip(r).all(|(a, b)| a < b)
}

fn hv2(points: &mut [[f64; 2]], r: &[f64]) -> f64 {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = r[1];
    for p in points.iter() {
        if p[1] < ceiling {
            area += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

fn hv3(points: &[&[f64]], r: &[f64]) -> f64 {
    let mut sorted: Vec<&[f64]> = points.to_vec();
    sorted.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slab: Vec<[f64; 2]> = Vec::with_capacity(sorted.len());
    for (k, p) in sorted.iter().enumerate() {
        slab.push([p[0], p[1]]);
        let top = sorted.get(k + 1).map_or(r[2], |q| q[2]);
        let height = top - p[2];
        if height > 0.0 {
            volume += hv2(&mut slab, r) * height;
        }
    }
    volume
}

/// Lebesgue measure of the union of boxes `[p, reference]`. Points not
/// strictly better than the reference in every objective contribute nothing.
pub fn hypervolume_of(points: &[&[f64]], reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if !(2..=3).contains(&m) {
        return Err(Error::NotSupported(format!("exact hypervolume for m={m}")));
    }
    let inside: Vec<&[f64]> = points
        .iter()
        .copied()
        .inspect(|p| assert_eq!(p.len(), m, "objective dimension mismatch"))
        .filter(|p| strictly_inside(p, reference))
        .collect();
    Ok(if m == 2 {
        let mut pts: Vec<[f64; 2]> = inside.iter().map(|p| [p[0], p[1]]).collect();
        hv2(&mut pts, reference)
    } else {
        hv3(&inside, reference)
    })
}

pub fn hypervolume(front: &Population, reference: &ReferencePoint) -> Result<f64> {
    hypervolume_of(&front.objectives(), &reference.r)
}

/// `HV(C) - HV(C \ {x})` for every member; members weakly dominated by
/// another member (including exact duplicates) get exactly zero.
pub fn ihv_contributions_of(points: &[&[f64]], reference: &[f64]) -> Result<Vec<f64>> {
    let total = hypervolume_of(points, reference)?;
    let mut out = Vec::with_capacity(points.len());
    let mut rest: Vec<&[f64]> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        let covered = points
            .iter()
            .enumerate()
            .any(|(j, q)| j != i && weakly_dominates(q, points[i]));
        if covered || !strictly_inside(points[i], reference) {
            out.push(0.0);
            continue;
        }
        rest.clear();
        rest.extend(points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| *q));
        out.push((total - hypervolume_of(&rest, reference)?).max(0.0));
    }
    Ok(out)
}

pub fn ihv_contributions(c: &Population, reference: &ReferencePoint) -> Result<Vec<f64>> {
    ihv_contributions_of(&c.objectives(), &reference.r)
}
