//! Shared fixtures for the benchmarks.

use dmi_core::{latin_hypercube, Bounds, EvaluatedSolution, Population, ProblemSpec, RandomSource};
use rand::Rng;

/// `size` mutually non-dominated points on the unit sphere's positive
/// orthant in `m` objectives.
pub fn sphere_front(size: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RandomSource::new(seed);
    (0..size)
        .map(|_| {
            let raw: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 1e-3).collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            raw.iter().map(|v| v / norm).collect()
        })
        .collect()
}

/// Uniform random objective vectors, mostly mutually dominated.
pub fn random_points(size: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RandomSource::new(seed);
    (0..size).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn as_population(points: &[Vec<f64>]) -> Population {
    points
        .iter()
        .enumerate()
        .map(|(i, f)| EvaluatedSolution::predicted(vec![i as f64], f.clone()))
        .collect()
}

/// A normalized training archive of `size` Latin hypercube points on
/// `problem`, with objectives per row.
pub fn training_archive(problem: &str, n: usize, m: usize, size: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let spec = ProblemSpec::from_id(problem, n, m).expect("known problem");
    let mut rng = RandomSource::new(seed);
    let x: Vec<Vec<f64>> = latin_hypercube(size, &Bounds::unit(n), &mut rng)
        .points
        .into_iter()
        .map(|p| p.0)
        .collect();
    let f = x.iter().map(|u| spec.evaluate(&spec.bounds.denormalize(u))).collect();
    (x, f)
}
