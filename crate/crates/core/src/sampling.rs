//! Latin hypercube designs for the initial training archive.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng::RandomSource;
use crate::types::{Bounds, DecisionVector};

#[derive(Debug, Clone, PartialEq)]
pub struct InitialDesign {
    pub points: Vec<DecisionVector>,
    pub size: usize,
}

impl InitialDesign {
    /// Default initial archive size, `11n - 1`.
    pub fn default_size(n: usize) -> usize {
        11 * n - 1
    }
}

/// Plain random Latin hypercube: one point per stratum in every dimension,
/// uniform placement within strata, independent column permutations.
pub fn latin_hypercube(size: usize, bounds: &Bounds, rng: &mut RandomSource) -> InitialDesign {
    assert!(size >= 1, "design size must be positive");
    let n = bounds.dim();
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let mut strata: Vec<usize> = (0..size).collect();
        strata.shuffle(rng);
        let column: Vec<f64> = strata
            .into_iter()
            .map(|s| (s as f64 + rng.random::<f64>()) / size as f64)
            .collect();
        columns.push(column);
    }
    let points = (0..size)
        .map(|i| {
            let unit: Vec<f64> = columns.iter().map(|c| c[i]).collect();
            DecisionVector(bounds.denormalize(&unit))
        })
        .collect();
    InitialDesign { points, size }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn histogram(design: &InitialDesign, bounds: &Bounds, dim: usize) -> Vec<usize> {
        let mut bins = vec![0; design.size];
        for p in &design.points {
            let u = (p[dim] - bounds.lower()[dim]) / bounds.width(dim);
            let b = ((u * design.size as f64).floor() as usize).min(design.size - 1);
            bins[b] += 1;
        }
        bins
    }

    #[test]
    fn one_point_per_quarter() {
        let b = Bounds::unit(1);
        let d = latin_hypercube(4, &b, &mut RandomSource::new(1));
        let mut v: Vec<f64> = d.points.iter().map(|p| p[0]).collect();
        v.sort_by(f64::total_cmp);
        for (i, x) in v.iter().enumerate() {
            assert!(*x >= i as f64 * 0.25 && *x < (i + 1) as f64 * 0.25 + 1e-15);
        }
    }

    #[test]
    fn default_size_rule() {
        assert_eq!(InitialDesign::default_size(5), 54);
    }

    #[test]
    fn eight_by_three_histogram() {
        let b = Bounds::unit(3);
        let d = latin_hypercube(8, &b, &mut RandomSource::new(2));
        for j in 0..3 {
            assert_eq!(histogram(&d, &b, j), vec![1; 8]);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let b = Bounds::new(vec![0.0, -1.0], vec![2.0, 4.0]);
        let a = latin_hypercube(21, &b, &mut RandomSource::new(7));
        let c = latin_hypercube(21, &b, &mut RandomSource::new(7));
        assert_eq!(a, c);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn stratified_in_every_dimension(seed in any::<u64>(), size in 1usize..40, n in 1usize..6) {
            let b = Bounds::new((0..n).map(|i| -(i as f64)).collect(), (0..n).map(|i| 1.0 + 2.0 * i as f64).collect());
            let d = latin_hypercube(size, &b, &mut RandomSource::new(seed));
            prop_assert_eq!(d.points.len(), size);
            for p in &d.points {
                prop_assert!(b.contains(p));
            }
            for j in 0..n {
                prop_assert_eq!(histogram(&d, &b, j), vec![1; size]);
            }
        }
    }
}
