//! Deterministic quadrature for the probability that the axes of two random
//! hyperbolic elements cross.

use std::f64::consts::{FRAC_PI_2, PI};

use super::quad::{integrate_with, QuadOptions};
use crate::error::Result;

/// Density of `S = arcsin X` on `(−π/2, π/2)`:
/// `(2/π²)·cot θ·log|(1+sin θ)/(1−sin θ)|`.
pub fn pdf_s(theta: f64) -> f64 {
    let t = theta.abs();
    if t >= FRAC_PI_2 {
        return 0.0;
    }
    if t < 1e-8 {
        return 4.0 / (PI * PI);
    }
    // atanh(sin t) = ln((1 + sin t)/cos t) stays finite up to t = π/2.
    let (s, c) = t.sin_cos();
    4.0 / (PI * PI) * ((1.0 + s) / c).ln() * c / s
}

/// Measure of `Φ ∈_u [0, π/2]` with `|S − T| ≤ Φ` and `S + T + Φ ≤ π`.
fn phi_measure(s: f64, t: f64) -> f64 {
    let hi = FRAC_PI_2.min(PI - s - t);
    ((hi - (s - t).abs()) / FRAC_PI_2).max(0.0)
}

/// `∫_{S≥0} ∫_T 2F_S(S) F_S(T) μ_Φ(S, T) dT dS`.
pub fn axes_cross_quadrature() -> Result<f64> {
    let opts = QuadOptions::tol(1e-12);
    let inner = |s: f64| -> f64 {
        let breaks = [s, FRAC_PI_2 - s, s - FRAC_PI_2, 0.0];
        integrate_with(|t| pdf_s(t) * phi_measure(s, t), -FRAC_PI_2, FRAC_PI_2, &breaks, opts)
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
    };
    let q = integrate_with(
        |s| 2.0 * pdf_s(s) * inner(s),
        0.0,
        FRAC_PI_2,
        &[FRAC_PI_2 / 2.0],
        QuadOptions::tol(1e-10),
    )?;
    Ok(q.value)
}
