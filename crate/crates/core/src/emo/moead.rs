use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate, random_point, reproduce, SearchConfig};
use crate::objective::VectorObjective;
use crate::rng::RandomSource;
use crate::types::{distance, Bounds, EvaluatedSolution, Population};

const WEIGHT_FLOOR: f64 = 1e-6;

/// Simplex-lattice weight vectors with their Euclidean neighbourhoods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub vectors: Vec<Vec<f64>>,
    /// `neighborhoods[i]` lists the closest weights to `i`, itself first.
    pub neighborhoods: Vec<Vec<usize>>,
}

impl WeightSet {
    pub fn new(vectors: Vec<Vec<f64>>, neighborhood: usize) -> Self {
        let t = neighborhood.clamp(1, vectors.len());
        let neighborhoods = (0..vectors.len())
            .map(|i| {
                let mut order: Vec<usize> = (0..vectors.len()).collect();
                order.sort_by(|&a, &b| {
                    distance(&vectors[i], &vectors[a])
                        .total_cmp(&distance(&vectors[i], &vectors[b]))
                        .then((a != i).cmp(&(b != i)))
                        .then(a.cmp(&b))
                });
                order.truncate(t);
                order
            })
            .collect();
        Self { vectors, neighborhoods }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Lattice divisions giving the default surrogate-search population:
/// 99 for two objectives (100 weights), 13 for three (105 weights), and
/// otherwise the smallest lattice with at least 100 points.
pub fn default_divisions(m: usize) -> usize {
    match m {
        2 => 99,
        3 => 13,
        _ => (1..).find(|&h| lattice_size(m, h) >= 100).unwrap(),
    }
}

fn lattice_size(m: usize, h: usize) -> usize {
    // C(h + m - 1, m - 1)
    let mut c = 1usize;
    for i in 1..m {
        c = c * (h + i) / i;
    }
    c
}

/// All weight vectors with components in `{0, 1/H, ..., 1}` summing to one,
/// ordered by ascending first component. Neighbourhood size is 20.
pub fn das_dennis_weights(m: usize, h: usize) -> WeightSet {
    assert!(m >= 1 && h >= 1);
    fn fill(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=rest {
            prefix.push(k);
            fill(rest - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    fill(h, m, &mut Vec::new(), &mut raw);
    let vectors = raw
        .into_iter()
        .map(|c| c.into_iter().map(|k| k as f64 / h as f64).collect())
        .collect();
    WeightSet::new(vectors, 20)
}

/// `max_i |f_i - z_i| / w_i`, zero weights floored at `1e-6`.
pub fn tchebycheff(f: &[f64], w: &[f64], ideal: &[f64]) -> f64 {
    f.iter()
        .zip(w)
        .zip(ideal)
        .map(|((fi, wi), zi)| (fi - zi).abs() / wi.max(WEIGHT_FLOOR))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Componentwise minimum of all objective vectors seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    pub z: Vec<f64>,
}

impl IdealPoint {
    pub fn new(m: usize) -> Self {
        Self {
            z: vec![f64::INFINITY; m],
        }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a [f64]>, m: usize) -> Self {
        let mut z = Self::new(m);
        for p in points {
            z.update(p);
        }
        z
    }

    pub fn update(&mut self, f: &[f64]) {
        for (z, v) in self.z.iter_mut().zip(f) {
            *z = z.min(*v);
        }
    }
}

/// MOEA/D with Tchebycheff decomposition. Member `i` of the result is the
/// incumbent of weight `i` of `das_dennis_weights(m, H)`.
pub fn moead_run<O: VectorObjective + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    config: &SearchConfig,
    rng: &mut RandomSource,
) -> Population {
    let m = objective.num_objectives();
    let h = config.divisions.unwrap_or_else(|| default_divisions(m));
    let mut weights = das_dennis_weights(m, h);
    if config.neighborhood != 20 {
        weights = WeightSet::new(weights.vectors, config.neighborhood);
    }
    let size = weights.len();
    let mut pop: Vec<EvaluatedSolution> = (0..size)
        .map(|_| evaluate(objective, random_point(bounds, rng)))
        .collect();
    let mut ideal = IdealPoint::from_points(pop.iter().map(|s| &s.f[..]), m);
    let all: Vec<usize> = (0..size).collect();

    for _ in 0..config.generations {
        for i in 0..size {
            let scope: &[usize] = if rng.random::<f64>() < config.delta {
                &all
            } else {
                &weights.neighborhoods[i]
            };
            let a = scope[rng.random_range(0..scope.len())];
            let mut b = scope[rng.random_range(0..scope.len())];
            if scope.len() > 1 {
                while b == a {
                    b = scope[rng.random_range(0..scope.len())];
                }
            }
            let (child, _) = reproduce(&pop[a].x, &pop[b].x, bounds, &config.operators, rng);
            let child = evaluate(objective, child);
            ideal.update(&child.f);

            let mut order = scope.to_vec();
            order.shuffle(rng);
            replace_incumbents(&mut pop, &child, &order, &weights, &ideal, config.replacement_cap);
        }
    }
    Population::new(pop)
}

/// Replaces, in `order`, up to `cap` incumbents that `child` strictly
/// improves on their own subproblem. Returns the replaced indices.
fn replace_incumbents(
    pop: &mut [EvaluatedSolution],
    child: &EvaluatedSolution,
    order: &[usize],
    weights: &WeightSet,
    ideal: &IdealPoint,
    cap: usize,
) -> Vec<usize> {
    let mut replaced = Vec::new();
    for &j in order {
        if replaced.len() >= cap {
            break;
        }
        let w = &weights.vectors[j];
        if tchebycheff(&child.f, w, &ideal.z) < tchebycheff(&pop[j].f, w, &ideal.z) {
            pop[j] = child.clone();
            replaced.push(j);
        }
    }
    replaced
}
