//! Irwin–Hall law and the equal-length arc disjointness probability.

use serde::Serialize;

use super::quad::{integrate_with, QuadOptions};
use crate::error::{domain, Result};

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check(m: u32, x: f64, name: &'static str) -> Result<()> {
    if m == 0 || !(0.0..=f64::from(m)).contains(&x) {
        return Err(domain(name, x));
    }
    Ok(())
}

/// Density of the sum of `m` independent uniform `[0, 1]` variables.
pub fn irwin_hall_pdf(m: u32, x: f64) -> Result<f64> {
    check(m, x, "irwin_hall_pdf")?;
    if m == 1 {
        return Ok(1.0);
    }
    let top = (x.floor() as u32).min(m - 1);
    let s: f64 = (0..=top)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(m, k) * (x - f64::from(k)).powi(m as i32 - 1)
        })
        .sum();
    Ok((s / factorial(m - 1)).max(0.0))
}

pub fn irwin_hall_cdf(m: u32, x: f64) -> Result<f64> {
    check(m, x, "irwin_hall_cdf")?;
    let top = (x.floor() as u32).min(m);
    let s: f64 = (0..=top)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(m, k) * (x - f64::from(k)).powi(m as i32)
        })
        .sum();
    Ok((s / factorial(m)).clamp(0.0, 1.0))
}

/// Probability that `2n` arcs of one common length `ℓ ∈_u [0, π]`, centred at
/// independent uniform points, are pairwise disjoint.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EqualArcs {
    pub n: u32,
    /// Exact value `∫₀¹ (1 − n t)₊^{2n−1} dt = 1/(2n²)` from the spacing law.
    pub value: f64,
    /// `(1/(2n)) ∫₀¹ IH_{2n−1}(2 − t) dt`: a `1/(2n)` min-gap factor times the
    /// Irwin–Hall tail condition, treated as independent.
    pub factored: f64,
    /// The displayed closed form `(1/((2n)·n!)) ∫₀¹ Σ_k (−1)^k C(n,k)(2−x−k)^n dx`.
    pub displayed: f64,
}

pub fn prob_equal_arcs_disjoint(n: u32) -> Result<EqualArcs> {
    if n == 0 {
        return Err(domain("prob_equal_arcs_disjoint", 0.0));
    }
    let nf = f64::from(n);
    let opts = QuadOptions::default();
    let m = 2 * n - 1;
    let factored =
        integrate_with(|t| irwin_hall_cdf(m, 2.0 - t).unwrap_or(1.0), 0.0, 1.0, &[], opts)?.value / (2.0 * nf);
    let raw = |x: f64| -> f64 {
        let top = (2.0 - x).floor().max(0.0) as u32;
        (0..=top.min(n))
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binom(n, k) * (2.0 - x - f64::from(k)).powi(n as i32)
            })
            .sum()
    };
    let displayed = integrate_with(raw, 0.0, 1.0, &[], opts)?.value / (2.0 * nf * factorial(n));
    Ok(EqualArcs {
        n,
        value: 1.0 / (2.0 * nf * nf),
        factored,
        displayed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdf_examples() {
        assert!((irwin_hall_pdf(3, 1.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((irwin_hall_pdf(3, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(irwin_hall_pdf(1, 0.3).unwrap(), 1.0);
        assert!(irwin_hall_pdf(3, 3.5).is_err());
        assert!(irwin_hall_pdf(0, 0.0).is_err());
    }

    #[test]
    fn cdf_is_integral_of_pdf() {
        for m in 2..=7 {
            for k in 0..=20 {
                let x = f64::from(m) * f64::from(k) / 20.0;
                let q = integrate_with(
                    |t| irwin_hall_pdf(m, t).unwrap(),
                    0.0,
                    x,
                    &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                    QuadOptions::default(),
                )
                .unwrap()
                .value;
                assert!((q - irwin_hall_cdf(m, x).unwrap()).abs() < 1e-12, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn equal_arcs_small_n() {
        let one = prob_equal_arcs_disjoint(1).unwrap();
        assert!((one.value - 0.5).abs() < 1e-15);
        assert!((one.factored - 0.5).abs() < 1e-12);
        let two = prob_equal_arcs_disjoint(2).unwrap();
        assert!((two.value - 0.125).abs() < 1e-15);
        assert!((two.factored - 0.125).abs() < 1e-12);
        assert!((two.displayed - 5.0 / 24.0).abs() < 1e-12);
        let three = prob_equal_arcs_disjoint(3).unwrap();
        assert!((three.value - 1.0 / 18.0).abs() < 1e-15);
        assert!((three.displayed - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn spacing_law_quadrature() {
        for n in 1..=5u32 {
            let nf = f64::from(n);
            let q = integrate_with(
                |t| (1.0 - nf * t).max(0.0).powi(2 * n as i32 - 1),
                0.0,
                1.0,
                &[1.0 / nf],
                QuadOptions::default(),
            )
            .unwrap()
            .value;
            assert!((q - prob_equal_arcs_disjoint(n).unwrap().value).abs() < 1e-13);
        }
    }
}
