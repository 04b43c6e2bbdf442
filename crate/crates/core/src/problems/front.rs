//! Sampling of analytic Pareto fronts and detection of their disconnected regions.

use super::{dtlz, wfg, zdt, Family, ProblemSpec};
use crate::dominance::nondominated_indices;
use crate::types::distance;

const MIN_SWEEP: usize = 4096;
const MAX_SWEEP: usize = 1 << 20;

/// Samples `count` well-spread points of the true front of `spec`.
///
/// A dense deterministic sweep of the front parametrisation is filtered to
/// its nondominated subset and then thinned by farthest-point selection.
pub fn sample_true_pf(spec: &ProblemSpec, count: usize) -> Vec<Vec<f64>> {
    assert!(count > 0, "count must be positive");
    let mut sweep = MIN_SWEEP.max(4 * count);
    loop {
        let candidates = sweep_front(spec, sweep);
        let front = nondominated(candidates);
        if front.len() >= count || sweep >= MAX_SWEEP {
            return farthest_point_thinning(front, count);
        }
        sweep *= 4;
    }
}

fn sweep_front(spec: &ProblemSpec, size: usize) -> Vec<Vec<f64>> {
    let m = spec.m;
    let side = if m == 2 {
        size
    } else {
        (size as f64).powf(1.0 / (m - 1) as f64).ceil() as usize
    };
    let grid = grid_points(m - 1, side);
    grid.into_iter()
        .map(|t| match spec.family {
            Family::Zdt3 | Family::Zdt3Star => {
                // quadratic spacing keeps the steep sqrt end as dense as the rest
                let t = t[0] * t[0];
                vec![t, zdt::front_curve(t, spec.params.unwrap())]
            }
            Family::Dtlz7 | Family::Dtlz7Star => {
                let mut f = t.clone();
                f.push(2.0 * dtlz::dtlz7_h(&t, 1.0, spec.params.unwrap()));
                f
            }
            Family::Dtlz2 => dtlz::sphere(&t, m),
            Family::MinusDtlz2 => {
                let shift = dtlz::dtlz2_extreme(spec.n, m);
                dtlz::sphere(&t, m).into_iter().map(|s| shift * (1.0 - s)).collect()
            }
            Family::Wfg2 | Family::Wfg2Star => wfg::shape(&t, m, spec.params.unwrap())
                .into_iter()
                .enumerate()
                .map(|(i, h)| 2.0 * (i + 1) as f64 * h)
                .collect(),
        })
        .collect()
}

/// Regular grid over `[0,1]^dim` with `side` points per axis.
fn grid_points(dim: usize, side: usize) -> Vec<Vec<f64>> {
    let step = 1.0 / (side - 1) as f64;
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..side).map(move |i| {
                    let mut q = p.clone();
                    q.push(i as f64 * step);
                    q
                })
            })
            .collect();
    }
    out
}

fn nondominated(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if points.first().is_some_and(|p| p.len() == 2) {
        return nondominated_2d(points);
    }
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    let keep = nondominated_indices(&refs);
    keep.into_iter().map(|i| points[i].clone()).collect()
}

fn nondominated_2d(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut best = f64::INFINITY;
    for p in points {
        if p[1] < best {
            best = p[1];
            out.push(p);
        }
    }
    out
}

fn farthest_point_thinning(points: Vec<Vec<f64>>, count: usize) -> Vec<Vec<f64>> {
    if points.len() <= count {
        return points;
    }
    let start = (0..points.len())
        .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
        .unwrap();
    let mut nearest: Vec<f64> = points.iter().map(|p| distance(p, &points[start])).collect();
    let mut chosen = vec![start];
    while chosen.len() < count {
        let next = (0..points.len())
            .max_by(|&a, &b| nearest[a].total_cmp(&nearest[b]).then(b.cmp(&a)))
            .unwrap();
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(distance(p, &points[next]));
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Number of disconnected pieces of a bi-objective front.
///
/// Points are sorted by the first objective; a consecutive gap larger than
/// `gap_factor` times the median gap starts a new segment.
pub fn count_segments(front: &[Vec<f64>], gap_factor: f64) -> usize {
    if front.is_empty() {
        return 0;
    }
    assert!(front[0].len() == 2, "count_segments expects a bi-objective front");
    segment_labels(front, gap_factor).into_iter().max().map_or(0, |l| l + 1)
}

/// Segment label of each point (labels are `0..segments`).
///
/// Bi-objective fronts use the sorted-gap rule of [`count_segments`]; higher
/// dimensions use single-linkage clustering with a cut at `gap_factor` times
/// the median nearest-neighbour distance.
pub fn segment_labels(front: &[Vec<f64>], gap_factor: f64) -> Vec<usize> {
    let n = front.len();
    if n < 2 {
        return vec![0; n];
    }
    if front[0].len() == 2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a][0].total_cmp(&front[b][0]).then(front[a][1].total_cmp(&front[b][1])));
        let gaps: Vec<f64> = order.windows(2).map(|w| distance(&front[w[0]], &front[w[1]])).collect();
        let cut = gap_factor * median(gaps.clone());
        let mut labels = vec![0; n];
        let mut label = 0;
        for (i, w) in order.windows(2).enumerate() {
            if gaps[i] > cut {
                label += 1;
            }
            labels[w[1]] = label;
        }
        return labels;
    }

    let nearest: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| distance(&front[i], &front[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let cut = gap_factor * median(nearest);
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for seed in 0..n {
        if labels[seed] != usize::MAX {
            continue;
        }
        labels[seed] = next;
        let mut stack = vec![seed];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if labels[j] == usize::MAX && distance(&front[i], &front[j]) <= cut {
                    labels[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    labels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentCoverage {
    pub covered: usize,
    pub total: usize,
}

/// How many segments of the sampled true front have at least one point of
/// `front` within `tolerance`, measured after scaling each objective by the
/// true front's range.
pub fn segment_coverage(
    front: &[Vec<f64>],
    true_pf: &[Vec<f64>],
    gap_factor: f64,
    tolerance: f64,
) -> SegmentCoverage {
    let labels = segment_labels(true_pf, gap_factor);
    let total = labels.iter().max().map_or(0, |l| l + 1);
    if true_pf.is_empty() {
        return SegmentCoverage { covered: 0, total };
    }
    let m = true_pf[0].len();
    let lo: Vec<f64> = (0..m).map(|j| true_pf.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|j| true_pf.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let scale = |p: &[f64]| -> Vec<f64> {
        p.iter()
            .enumerate()
            .map(|(j, v)| {
                let r = hi[j] - lo[j];
                if r > 0.0 { (v - lo[j]) / r } else { v - lo[j] }
            })
            .collect()
    };
    let scaled_front: Vec<Vec<f64>> = front.iter().map(|p| scale(p)).collect();
    let mut hit = vec![false; total];
    for (p, &label) in true_pf.iter().zip(&labels) {
        if hit[label] {
            continue;
        }
        let q = scale(p);
        if scaled_front.iter().any(|f| distance(f, &q) <= tolerance) {
            hit[label] = true;
        }
    }
    SegmentCoverage {
        covered: hit.iter().filter(|&&h| h).count(),
        total,
    }
}
