use rand::Rng;

use super::{evaluate, random_point, reproduce, SearchConfig};
use crate::dominance::weakly_dominates;
use crate::objective::VectorObjective;
use crate::rng::RandomSource;
use crate::types::{Bounds, EvaluatedSolution, Population};

const REFERENCE: f64 = 1.1;

/// Min-max normalization of each objective over `points` (zero ranges map to 0).
pub fn normalize_objectives(points: &[&[f64]]) -> Vec<Vec<f64>> {
    if points.is_empty() {
        return Vec::new();
    }
    let m = points[0].len();
    let lo: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    points
        .iter()
        .map(|p| {
            (0..m)
                .map(|j| {
                    let r = hi[j] - lo[j];
                    if r > 0.0 {
                        (p[j] - lo[j]) / r
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn box_volume(p: &[f64], reference: &[f64]) -> f64 {
    p.iter().zip(reference).map(|(v, r)| (r - v).max(0.0)).product()
}

/// Binary hypervolume-difference indicator `I_HD({a}, {b})`: the volume
/// dominated by `b` but not by `a`, or `HV(b) - HV(a)` when `a` weakly
/// dominates `b`.
pub fn indicator_hd(a: &[f64], b: &[f64], reference: &[f64]) -> f64 {
    if weakly_dominates(a, b) {
        return box_volume(b, reference) - box_volume(a, reference);
    }
    let joint: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.max(*y)).collect();
    box_volume(b, reference) - box_volume(&joint, reference)
}

fn indicator_matrix(normalized: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = normalized.first().map_or(0, Vec::len);
    let reference = vec![REFERENCE; m];
    normalized
        .iter()
        .map(|a| normalized.iter().map(|b| indicator_hd(a, b, &reference)).collect())
        .collect()
}

fn fitness_from(ind: &[Vec<f64>], kappa: f64) -> Vec<f64> {
    let n = ind.len();
    (0..n)
        .map(|x| (0..n).filter(|&o| o != x).map(|o| -(-ind[o][x] / kappa).exp()).sum())
        .collect()
}

/// IBEA fitness `F(x) = sum over x' != x of -exp(-I_HD(x', x) / kappa)` on
/// objectives normalized over `points`. Larger is better.
pub fn ibea_fitness(points: &[&[f64]], kappa: f64) -> Vec<f64> {
    assert!(kappa > 0.0, "kappa must be positive");
    fitness_from(&indicator_matrix(&normalize_objectives(points)), kappa)
}

/// Removes the worst member until `size` remain, updating the fitness of the
/// survivors after each removal.
fn environmental_selection(pool: Vec<EvaluatedSolution>, size: usize, kappa: f64) -> (Vec<EvaluatedSolution>, Vec<f64>) {
    let objs: Vec<&[f64]> = pool.iter().map(|s| &s.f[..]).collect();
    let ind = indicator_matrix(&normalize_objectives(&objs));
    let mut fit = fitness_from(&ind, kappa);
    let mut alive: Vec<bool> = vec![true; pool.len()];
    for _ in size..pool.len() {
        let worst = (0..pool.len())
            .filter(|&i| alive[i])
            .min_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(b.cmp(&a)))
            .unwrap();
        alive[worst] = false;
        for i in 0..pool.len() {
            if alive[i] {
                fit[i] += (-ind[worst][i] / kappa).exp();
            }
        }
    }
    let mut out = Vec::with_capacity(size);
    let mut out_fit = Vec::with_capacity(size);
    for (i, s) in pool.into_iter().enumerate() {
        if alive[i] {
            out.push(s);
            out_fit.push(fit[i]);
        }
    }
    (out, out_fit)
}

/// IBEA with the hypervolume-difference indicator.
pub fn ibea_run<O: VectorObjective + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    config: &SearchConfig,
    rng: &mut RandomSource,
) -> Population {
    let size = config.population;
    let initial: Vec<EvaluatedSolution> = (0..size)
        .map(|_| evaluate(objective, random_point(bounds, rng)))
        .collect();
    let (mut pop, mut fit) = environmental_selection(initial, size, config.kappa);
    for _ in 0..config.generations {
        let tournament = |rng: &mut RandomSource| {
            let a = rng.random_range(0..pop.len());
            let b = rng.random_range(0..pop.len());
            if fit[b] > fit[a] {
                b
            } else {
                a
            }
        };
        let mut parents = Vec::with_capacity(size);
        for _ in 0..size {
            parents.push(tournament(rng));
        }
        let mut offspring = Vec::with_capacity(size);
        for pair in parents.chunks(2) {
            let (a, b) = (pair[0], pair[pair.len() - 1]);
            let (c1, c2) = reproduce(&pop[a].x, &pop[b].x, bounds, &config.operators, rng);
            offspring.push(evaluate(objective, c1));
            if offspring.len() < size {
                offspring.push(evaluate(objective, c2));
            }
        }
        pop.extend(offspring);
        (pop, fit) = environmental_selection(pop, size, config.kappa);
    }
    Population::new(pop)
}
