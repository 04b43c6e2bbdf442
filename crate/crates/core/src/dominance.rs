//! Pareto dominance for minimization.

use crate::types::Population;

/// `a` dominates `b`: no worse in every objective and not identical.
///
/// Equality is exact floating-point comparison.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "objective dimension mismatch");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// `a` is componentwise no worse than `b` (includes equality).
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "objective dimension mismatch");
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Indices of the points not dominated by any other point, in input order.
/// Duplicates are all kept.
pub fn nondominated_indices(points: &[&[f64]]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, points[i])))
        .collect()
}

/// Members of `population` not dominated by any other member.
pub fn nondominated_filter(population: &Population) -> Population {
    let idx = nondominated_indices(&population.objectives());
    population.subset(&idx)
}
