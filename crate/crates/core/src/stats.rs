//! Wilcoxon signed-rank test and Vargha–Delaney A12 effect size.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Magnitude {
    Equal,
    Small,
    Medium,
    Large,
}

impl Magnitude {
    /// Band of an A12 value, symmetric around 0.5.
    pub fn from_a12(a: f64) -> Self {
        let a = a.max(1.0 - a);
        if a < 0.56 {
            Magnitude::Equal
        } else if a < 0.64 {
            Magnitude::Small
        } else if a < 0.71 {
            Magnitude::Medium
        } else {
            Magnitude::Large
        }
    }
}

impl std::fmt::Display for Magnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Magnitude::Equal => "equal",
            Magnitude::Small => "small",
            Magnitude::Medium => "medium",
            Magnitude::Large => "large",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub p_value: f64,
    pub a12: f64,
    pub magnitude: Magnitude,
}

impl ComparisonReport {
    pub fn compare(x: &[f64], y: &[f64]) -> Self {
        let a = a12(x, y);
        Self {
            p_value: wilcoxon_signed_rank(x, y),
            a12: a,
            magnitude: Magnitude::from_a12(a),
        }
    }
}

/// Probability that a draw from `x` exceeds one from `y`, ties counting half.
pub fn a12(x: &[f64], y: &[f64]) -> f64 {
    assert!(!x.is_empty() && !y.is_empty(), "samples must be non-empty");
    let mut wins = 0.0;
    for a in x {
        for b in y {
            if a > b {
                wins += 1.0;
            } else if a == b {
                wins += 0.5;
            }
        }
    }
    wins / (x.len() * y.len()) as f64
}

/// Average ranks (1-based) of `values`, returned doubled so they stay integral.
fn doubled_ranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share rank (i+1 + j+1)/2
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided p-value of the paired Wilcoxon signed-rank test.
///
/// Zero differences are dropped. Exact null distribution up to 20 non-zero
/// pairs, normal approximation with continuity and tie correction beyond.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "paired samples must have equal length");
    assert!(x.len() >= 5, "need at least five pairs");
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return 1.0;
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = doubled_ranks(&abs);
    let w_plus: u64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let total: u64 = ranks.iter().sum();
    let w_min = w_plus.min(total - w_plus);

    if n <= EXACT_LIMIT {
        // counts[s] = number of sign assignments with doubled W+ equal to s
        let mut counts = vec![0f64; total as usize + 1];
        counts[0] = 1.0;
        let mut reach = 0usize;
        for &r in &ranks {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if counts[s] > 0.0 {
                    counts[s + r] += counts[s];
                }
            }
            reach += r;
        }
        let tail: f64 = counts[..=w_min as usize].iter().sum();
        return (2.0 * tail / 2f64.powi(n as i32)).min(1.0);
    }

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut ties = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|v| **v == sorted[i]).count();
        let t = j as f64;
        ties += t * t * t - t;
        i += j;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let w = w_plus as f64 / 2.0;
    let z = ((w - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}
