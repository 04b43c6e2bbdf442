use std::f64::consts::PI;

use super::DisconnectParams;

pub(super) fn g(x: &[f64]) -> f64 {
    let n = x.len();
    1.0 + 9.0 / (n - 1) as f64 * x[1..].iter().sum::<f64>()
}

/// Front curve `f2(f1)` at `g = 1`.
pub(super) fn front_curve(t: f64, p: DisconnectParams) -> f64 {
    1.0 - t.sqrt() - t.powf(p.alpha) * (p.a as f64 * PI * t.powf(p.beta)).sin()
}

pub(super) fn zdt3_star(x: &[f64], p: DisconnectParams) -> [f64; 2] {
    let f1 = x[0];
    let g = g(x);
    let f2 = g * (1.0 - (f1 / g).sqrt() - f1.powf(p.alpha) / g * (p.a as f64 * PI * f1.powf(p.beta)).sin());
    [f1, f2]
}
