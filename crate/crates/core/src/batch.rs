//! Choosing which candidates receive expensive evaluations.

use serde::{Deserialize, Serialize};

use crate::dominance::{dominates, nondominated_indices};
use crate::emo::{crowding_distance, ibea_fitness, tchebycheff, WeightSet};
use crate::error::Result;
use crate::manifold::DEDUP_TOLERANCE;
use crate::metrics::{ihv_contributions_of, ReferencePoint};
use crate::types::{distance, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    /// Individual hypervolume contribution.
    Ihv,
    /// The active optimizer's own environmental selection.
    Native,
}

impl std::str::FromStr for Selector {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ihv" => Ok(Selector::Ihv),
            "native" => Ok(Selector::Native),
            _ => Err(crate::Error::Config(format!("unknown selector '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSelection {
    pub chosen: Population,
    /// Positions of the chosen members in the candidate set, in rank order.
    pub indices: Vec<usize>,
    /// Selection score of every candidate (larger is better).
    pub scores: Vec<f64>,
}

/// Candidates in `order`, skipping decision-space duplicates, until `limit`.
pub fn take_distinct(c: &Population, order: impl IntoIterator<Item = usize>, limit: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(limit);
    for i in order {
        if out.len() >= limit {
            break;
        }
        if out.iter().any(|&j| distance(&c.members()[i].x, &c.members()[j].x) <= DEDUP_TOLERANCE) {
            continue;
        }
        out.push(i);
    }
    out
}

fn finish(c: &Population, indices: Vec<usize>, scores: Vec<f64>) -> BatchSelection {
    BatchSelection {
        chosen: c.subset(&indices),
        indices,
        scores,
    }
}

/// Top `xi` candidates by hypervolume contribution, reference at the
/// candidates' maximum plus 10% of their range. Dominated candidates rank
/// after all non-dominated ones; remaining ties go to the lower index.
pub fn select_ihv(c: &Population, xi: usize) -> Result<BatchSelection> {
    assert!(!c.is_empty(), "empty candidate set");
    let objs = c.objectives();
    let reference = ReferencePoint::padded_max(objs.iter().copied());
    let scores = ihv_contributions_of(&objs, &reference.r)?;
    let dominated: Vec<bool> = objs.iter().map(|p| objs.iter().any(|q| dominates(q, p))).collect();
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| {
        dominated[a]
            .cmp(&dominated[b])
            .then(scores[b].total_cmp(&scores[a]))
            .then(a.cmp(&b))
    });
    let idx = take_distinct(c, order, xi);
    Ok(finish(c, idx, scores))
}

/// Index of the weight forming the smallest angle with `f` (ties by index).
pub fn associate(f: &[f64], weights: &WeightSet) -> usize {
    let fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if fnorm == 0.0 {
        return 0;
    }
    let mut best = 0;
    let mut best_cos = f64::NEG_INFINITY;
    for (k, w) in weights.vectors.iter().enumerate() {
        let wnorm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cos = f.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (fnorm * wnorm);
        if cos > best_cos {
            best_cos = cos;
            best = k;
        }
    }
    best
}

/// NSGA-II style: non-dominated candidates, one per weight subregion
/// (largest crowding distance), then by crowding distance.
pub fn select_nsga2_native(c: &Population, xi: usize, weights: &WeightSet) -> BatchSelection {
    assert!(!c.is_empty(), "empty candidate set");
    let objs = c.objectives();
    let nd = nondominated_indices(&objs);
    let nd_objs: Vec<&[f64]> = nd.iter().map(|&i| objs[i]).collect();
    let crowd = crowding_distance(&nd_objs);
    let m = objs[0].len();
    let lo: Vec<f64> = (0..m).map(|j| nd_objs.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|j| nd_objs.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();

    let mut region_best: Vec<Option<usize>> = vec![None; weights.len()];
    for (k, p) in nd_objs.iter().enumerate() {
        let scaled: Vec<f64> = (0..m)
            .map(|j| {
                let r = hi[j] - lo[j];
                if r > 0.0 {
                    (p[j] - lo[j]) / r
                } else {
                    0.0
                }
            })
            .collect();
        let region = associate(&scaled, weights);
        match region_best[region] {
            Some(b) if crowd[b] >= crowd[k] => {}
            _ => region_best[region] = Some(k),
        }
    }
    let by_crowding = |list: &mut Vec<usize>| list.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
    let mut reps: Vec<usize> = region_best.iter().flatten().copied().collect();
    by_crowding(&mut reps);
    let mut rest: Vec<usize> = (0..nd.len()).filter(|k| !reps.contains(k)).collect();
    by_crowding(&mut rest);
    let order = reps.into_iter().chain(rest).map(|k| nd[k]);
    let idx = take_distinct(c, order, xi);

    let mut scores = vec![f64::NEG_INFINITY; c.len()];
    for (k, &i) in nd.iter().enumerate() {
        scores[i] = crowd[k];
    }
    finish(c, idx, scores)
}

/// IBEA style: the `xi` candidates with the largest indicator fitness.
pub fn select_ibea_native(c: &Population, xi: usize, kappa: f64) -> BatchSelection {
    assert!(!c.is_empty(), "empty candidate set");
    let scores = ibea_fitness(&c.objectives(), kappa);
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let idx = take_distinct(c, order, xi);
    finish(c, idx, scores)
}

/// Best member (lowest Tchebycheff value, ties by index) of `points` for
/// every weight, with that value.
pub fn subproblem_bests(points: &[&[f64]], weights: &WeightSet, ideal: &[f64]) -> Vec<(usize, f64)> {
    weights
        .vectors
        .iter()
        .map(|w| {
            points
                .iter()
                .enumerate()
                .map(|(i, p)| (i, tchebycheff(p, w, ideal)))
                .fold((usize::MAX, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        })
        .collect()
}

/// Relative improvement of a subproblem; a zero previous value counts as an
/// infinite gain if the new value is smaller and as none otherwise.
pub fn relative_improvement(previous: f64, current: f64) -> f64 {
    if previous == 0.0 {
        if current < previous {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        (previous - current) / previous
    }
}

/// MOEA/D style: the best candidates of the `xi` subproblems whose value
/// improved most relative to `previous_bests`.
pub fn select_moead_native(
    c: &Population,
    xi: usize,
    weights: &WeightSet,
    ideal: &[f64],
    previous_bests: &[f64],
) -> BatchSelection {
    assert!(!c.is_empty(), "empty candidate set");
    assert_eq!(previous_bests.len(), weights.len(), "one previous value per subproblem");
    let bests = subproblem_bests(&c.objectives(), weights, ideal);
    let gains: Vec<f64> = bests
        .iter()
        .zip(previous_bests)
        .map(|(&(_, cur), &prev)| relative_improvement(prev, cur))
        .collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]).then(a.cmp(&b)));
    let mut members: Vec<usize> = Vec::new();
    for k in order {
        let i = bests[k].0;
        if !members.contains(&i) {
            members.push(i);
        }
    }
    let idx = take_distinct(c, members, xi);
    let mut scores = vec![f64::NEG_INFINITY; c.len()];
    for (k, &(i, _)) in bests.iter().enumerate() {
        scores[i] = scores[i].max(gains[k]);
    }
    finish(c, idx, scores)
}
