use rand::Rng;

use super::{evaluate, random_point, reproduce, SearchConfig};
use super::{crowding_distance, nondominated_sort};
use crate::objective::VectorObjective;
use crate::rng::RandomSource;
use crate::types::{Bounds, EvaluatedSolution, Population};

/// Rank and crowding distance of every member.
fn rank_and_crowding(pop: &[EvaluatedSolution]) -> (Vec<usize>, Vec<f64>) {
    let objs: Vec<&[f64]> = pop.iter().map(|s| &s.f[..]).collect();
    let mut rank = vec![0; pop.len()];
    let mut crowd = vec![0.0; pop.len()];
    for (r, front) in nondominated_sort(&objs).into_iter().enumerate() {
        let sub: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&sub)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

/// Environmental selection: whole fronts while they fit, the last one by
/// decreasing crowding distance (ties by index).
fn truncate(pool: Vec<EvaluatedSolution>, size: usize) -> Vec<EvaluatedSolution> {
    let objs: Vec<&[f64]> = pool.iter().map(|s| &s.f[..]).collect();
    let mut keep = Vec::with_capacity(size);
    for front in nondominated_sort(&objs) {
        if keep.len() + front.len() <= size {
            keep.extend(front);
            continue;
        }
        let sub: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
        let d = crowding_distance(&sub);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(front[a].cmp(&front[b])));
        keep.extend(order.into_iter().take(size - keep.len()).map(|k| front[k]));
        break;
    }
    let mut pool: Vec<Option<EvaluatedSolution>> = pool.into_iter().map(Some).collect();
    keep.into_iter().map(|i| pool[i].take().unwrap()).collect()
}

fn tournament(rank: &[usize], crowd: &[f64], rng: &mut RandomSource) -> usize {
    let a = rng.random_range(0..rank.len());
    let b = rng.random_range(0..rank.len());
    let better = |x: usize, y: usize| rank[x] < rank[y] || (rank[x] == rank[y] && crowd[x] > crowd[y]);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// NSGA-II for `config.generations` generations from a uniform random start.
pub fn nsga2_run<O: VectorObjective + ?Sized>(
    objective: &O,
    bounds: &Bounds,
    config: &SearchConfig,
    rng: &mut RandomSource,
) -> Population {
    let size = config.population;
    let mut pop: Vec<EvaluatedSolution> = (0..size)
        .map(|_| evaluate(objective, random_point(bounds, rng)))
        .collect();
    for _ in 0..config.generations {
        let (rank, crowd) = rank_and_crowding(&pop);
        let mut offspring = Vec::with_capacity(size);
        while offspring.len() < size {
            let a = tournament(&rank, &crowd, rng);
            let b = tournament(&rank, &crowd, rng);
            let (c1, c2) = reproduce(&pop[a].x, &pop[b].x, bounds, &config.operators, rng);
            offspring.push(evaluate(objective, c1));
            if offspring.len() < size {
                offspring.push(evaluate(objective, c2));
            }
        }
        pop.extend(offspring);
        pop = truncate(pop, size);
    }
    Population::new(pop)
}
