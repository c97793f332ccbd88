//! Closed-form densities of the random-group model and the [`DensityFn`]
//! wrapper used for normalization checks, convolution and tabulated CDFs.

use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use super::dilog::dilog_odd;
use super::quad::{integrate_with, QuadOptions, Quadrature};
use crate::error::{domain, Error, Result};

const INV_PI2: f64 = 1.0 / (PI * PI);

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A named probability density on an interval.
///
/// `eval` returns 0 outside `[lo, hi]` and `+∞` at listed singular points.
#[derive(Clone)]
pub struct DensityFn {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    /// Integrable singularities and kinks, used as quadrature breakpoints.
    pub singular: Vec<f64>,
    eval: RealFn,
    cdf: Option<RealFn>,
}

impl fmt::Debug for DensityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityFn")
            .field("name", &self.name)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("singular", &self.singular)
            .finish()
    }
}

impl DensityFn {
    pub fn new(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        singular: Vec<f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DensityFn {
            name: name.into(),
            lo,
            hi,
            singular,
            eval: Arc::new(eval),
            cdf: None,
        }
    }

    pub fn with_cdf(mut self, cdf: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.cdf = Some(Arc::new(cdf));
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            (self.eval)(x)
        }
    }

    /// Closed-form CDF, where one is known.
    pub fn closed_cdf(&self) -> Option<&RealFn> {
        self.cdf.as_ref()
    }

    pub fn integrate_over(&self, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
        let (a, b) = (a.max(self.lo), b.min(self.hi));
        if a >= b {
            return Ok(Quadrature {
                value: 0.0,
                error: 0.0,
                intervals: 0,
            });
        }
        let f = |x: f64| (self.eval)(x);
        integrate_with(f, a, b, &self.singular, opts)
    }

    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.integrate_over(self.lo, self.hi, QuadOptions::default())?.value)
    }

    /// `∫ x^k p(x) dx`.
    pub fn moment(&self, k: i32) -> Result<f64> {
        let f = |x: f64| x.powi(k) * (self.eval)(x);
        Ok(integrate_with(f, self.lo, self.hi, &self.singular, QuadOptions::default())?.value)
    }
}

fn open(name: &'static str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x > lo && x < hi {
        Ok(())
    } else {
        Err(domain(name, x))
    }
}

/// Density of `|a|`: `2/(πx√(x²−1))` for `x > 1`.
pub fn pdf_abs_a(x: f64) -> Result<f64> {
    open("pdf_abs_a", x, 1.0, f64::INFINITY)?;
    Ok(2.0 / (PI * x * ((x - 1.0) * (x + 1.0)).sqrt()))
}

pub fn cdf_abs_a(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        1.0 - (1.0 / x).asin() / FRAC_PI_2
    }
}

/// Density of `|f(0)|`: `2/(π√(1−y²))` on `[0, 1)`.
pub fn pdf_f0(y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(domain("pdf_f0", y));
    }
    Ok(2.0 / (PI * ((1.0 - y) * (1.0 + y)).sqrt()))
}

pub fn cdf_f0(y: f64) -> f64 {
    y.clamp(0.0, 1.0).asin() / FRAC_PI_2
}

/// `E|f(0)| = 2/π`.
pub fn expected_f0() -> f64 {
    2.0 / PI
}

/// Hyperbolic distance from 0 to a point at Euclidean radius `2/π`.
pub fn hyperbolic_plugin_f0() -> f64 {
    ((PI + 2.0) / (PI - 2.0)).ln()
}

/// Density of `X = sin θ / cos α` given `X < 1`: `(4/(π²x))·log((1+x)/(1−x))`.
pub fn pdf_ratio_x(x: f64) -> Result<f64> {
    open("pdf_ratio_x", x, 0.0, 1.0)?;
    Ok(8.0 * INV_PI2 * x.atanh() / x)
}

/// Density of the half-angle `η` subtended at 0 by the fixed points of a
/// hyperbolic element, on `(0, π/2)`.
pub fn pdf_half_angle(eta: f64) -> Result<f64> {
    open("pdf_half_angle", eta, 0.0, FRAC_PI_2)?;
    // log((1+cos η)/(1−cos η)) = −2 log tan(η/2), stable at both ends.
    Ok(-8.0 * INV_PI2 * eta.tan() * (0.5 * eta).tan().ln())
}

/// `1 − (4/π²)(Li₂(cos η) − Li₂(−cos η))`.
pub fn cdf_half_angle(eta: f64) -> f64 {
    if eta <= 0.0 {
        return 0.0;
    }
    if eta >= FRAC_PI_2 {
        return 1.0;
    }
    1.0 - 4.0 * INV_PI2 * dilog_odd(eta.cos()).unwrap_or(f64::NAN)
}

/// Probability that the axis of a random hyperbolic element meets the
/// hyperbolic disk of radius `r` about 0.
pub fn prob_axis_meets_disk(r: f64) -> f64 {
    if r.is_nan() {
        return f64::NAN;
    }
    if r <= 0.0 {
        return 0.0;
    }
    4.0 * INV_PI2 * dilog_odd(r.tanh()).unwrap_or(f64::NAN)
}

/// Density of `|tr f|` on `(0, ∞)`: `(2/(π²s))·log|(s+2)/(s−2)|`.
///
/// On `s > 2` this is the hyperbolic trace law `(4/(π²s))·arccosh(s/√(s²−4))`,
/// which carries mass 1/2.
pub fn pdf_trace(s: f64) -> Result<f64> {
    open("pdf_trace", s, 0.0, f64::INFINITY)?;
    if s == 2.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * INV_PI2 / s * ((s + 2.0) / (s - 2.0)).abs().ln())
}

/// Density of `β = tr² − 4` on `(−4, ∞)`:
/// `(1/(π²(β+4)))·log|(√(β+4)+2)/(√(β+4)−2)|`.
pub fn pdf_beta(beta: f64) -> Result<f64> {
    open("pdf_beta", beta, -4.0, f64::INFINITY)?;
    if beta == 0.0 {
        return Ok(f64::INFINITY);
    }
    let t = beta + 4.0;
    let s = t.sqrt();
    // (s+2)/(s−2) = (s+2)²/β avoids cancellation near β = 0.
    Ok(INV_PI2 / t * ((s + 2.0) * (s + 2.0) / beta.abs()).ln())
}

/// Mellin-quotient density `h(w) = (1/(π²w))·log|(√w+1)/(√w−1)|` on `(0, ∞)`.
pub fn pdf_w(w: f64) -> Result<f64> {
    open("pdf_w", w, 0.0, f64::INFINITY)?;
    if w == 1.0 {
        return Ok(f64::INFINITY);
    }
    let r = w.sqrt();
    Ok(INV_PI2 / w * ((r + 1.0) * (r + 1.0) / (w - 1.0).abs()).ln())
}

/// Translation length density `−(4/π²)·tanh(τ/2)·log tanh(τ/4)` on `τ > 0`.
pub fn pdf_translation_length(tau: f64) -> Result<f64> {
    open("pdf_translation_length", tau, 0.0, f64::INFINITY)?;
    let t = (0.25 * tau).tanh();
    if t == 1.0 {
        // log tanh(τ/4) ≈ −2e^{−τ/2} once tanh rounds to 1.
        return Ok(8.0 * INV_PI2 * (-0.5 * tau).exp());
    }
    Ok(-4.0 * INV_PI2 * (0.5 * tau).tanh() * t.ln())
}

/// `E τ = 4 log 2`.
pub fn expected_translation_length() -> f64 {
    4.0 * LN_2
}

/// Survival function `(1 − ψ/π)⁴` of the smallest of four independent
/// uniform gaps on `[0, π]`.
pub fn min_gap_law(psi: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&psi) {
        return Err(domain("min_gap_law", psi));
    }
    Ok((1.0 - psi / PI).powi(4))
}

pub fn pdf_min_gap(psi: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&psi) {
        return Err(domain("pdf_min_gap", psi));
    }
    Ok(4.0 * (1.0 - psi / PI).powi(3) / PI)
}

pub fn expected_min_gap() -> f64 {
    PI / 5.0
}

fn wrap(f: fn(f64) -> Result<f64>) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
    move |x| f(x).unwrap_or(0.0)
}

impl DensityFn {
    pub fn abs_a() -> Self {
        DensityFn::new("abs-a", 1.0, f64::INFINITY, vec![1.0], wrap(pdf_abs_a)).with_cdf(cdf_abs_a)
    }

    pub fn f0() -> Self {
        DensityFn::new("f0", 0.0, 1.0, vec![1.0], wrap(pdf_f0)).with_cdf(cdf_f0)
    }

    pub fn ratio_x() -> Self {
        DensityFn::new("ratio-x", 0.0, 1.0, vec![1.0], wrap(pdf_ratio_x))
            .with_cdf(|x| 1.0 - cdf_half_angle(x.clamp(0.0, 1.0).acos()))
    }

    pub fn half_angle() -> Self {
        DensityFn::new("half-angle", 0.0, FRAC_PI_2, vec![0.0], wrap(pdf_half_angle)).with_cdf(cdf_half_angle)
    }

    pub fn trace() -> Self {
        DensityFn::new("trace", 0.0, f64::INFINITY, vec![2.0], wrap(pdf_trace))
    }

    pub fn beta() -> Self {
        DensityFn::new("beta", -4.0, f64::INFINITY, vec![-4.0, 0.0], wrap(pdf_beta))
    }

    pub fn w() -> Self {
        DensityFn::new("w", 0.0, f64::INFINITY, vec![1.0], wrap(pdf_w))
    }

    pub fn translation_length() -> Self {
        DensityFn::new("tau", 0.0, f64::INFINITY, vec![], wrap(pdf_translation_length))
    }

    pub fn min_gap() -> Self {
        DensityFn::new("min-gap", 0.0, PI, vec![], wrap(pdf_min_gap))
            .with_cdf(|x| 1.0 - min_gap_law(x.clamp(0.0, PI)).unwrap_or(0.0))
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        let h = 1.0 / (hi - lo);
        DensityFn::new(format!("uniform[{lo},{hi}]"), lo, hi, vec![], move |_| h)
            .with_cdf(move |x| ((x - lo) * h).clamp(0.0, 1.0))
    }

    pub fn irwin_hall(m: u32) -> Self {
        let kinks = (0..=m).map(f64::from).collect();
        DensityFn::new(format!("irwin-hall-{m}"), 0.0, f64::from(m), kinks, move |x| {
            super::irwin_hall::irwin_hall_pdf(m, x).unwrap_or(0.0)
        })
        .with_cdf(move |x| super::irwin_hall::irwin_hall_cdf(m, x).unwrap_or(if x <= 0.0 { 0.0 } else { 1.0 }))
    }

    /// Lookup by the names used on the command line.
    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs-a" => Self::abs_a(),
            "f0" => Self::f0(),
            "ratio-x" => Self::ratio_x(),
            "half-angle" => Self::half_angle(),
            "trace" => Self::trace(),
            "beta" => Self::beta(),
            "w" => Self::w(),
            "tau" => Self::translation_length(),
            "min-gap" => Self::min_gap(),
            "half-angle-sum" => pdf_convolve(&Self::half_angle(), &Self::half_angle()).ok()?,
            "uniform-sum" => pdf_convolve(&Self::uniform(0.0, TAU), &Self::uniform(0.0, TAU)).ok()?,
            _ => {
                let m: u32 = name.strip_prefix("irwin-hall-")?.parse().ok()?;
                if m == 0 {
                    return None;
                }
                Self::irwin_hall(m)
            }
        })
    }

    pub fn catalog() -> Vec<&'static str> {
        vec![
            "abs-a",
            "f0",
            "ratio-x",
            "half-angle",
            "trace",
            "beta",
            "w",
            "tau",
            "min-gap",
            "half-angle-sum",
            "uniform-sum",
            "irwin-hall-<m>",
        ]
    }
}

/// Density of the sum of independent variables with densities `d1`, `d2`.
pub fn pdf_convolve(d1: &DensityFn, d2: &DensityFn) -> Result<DensityFn> {
    for d in [d1, d2] {
        let mass = d.total_mass().map_err(|_| Error::NonIntegrable(d.name.clone()))?;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::NonIntegrable(d.name.clone()));
        }
    }
    let (a, b) = (d1.clone(), d2.clone());
    let mut kinks: Vec<f64> = Vec::new();
    for &p in a.singular.iter().chain([a.lo, a.hi].iter()) {
        for &q in b.singular.iter().chain([b.lo, b.hi].iter()) {
            if (p + q).is_finite() {
                kinks.push(p + q);
            }
        }
    }
    kinks.sort_by(f64::total_cmp);
    kinks.dedup();
    let name = format!("{}*{}", a.name, b.name);
    let (lo, hi) = (a.lo + b.lo, a.hi + b.hi);
    Ok(DensityFn::new(name, lo, hi, kinks, move |x| {
        let t0 = a.lo.max(x - b.hi);
        let t1 = a.hi.min(x - b.lo);
        if t0 >= t1 {
            return 0.0;
        }
        let mut breaks = a.singular.clone();
        breaks.extend(b.singular.iter().map(|s| x - s));
        integrate_with(|t| a.eval(t) * b.eval(x - t), t0, t1, &breaks, QuadOptions::tol(1e-11))
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
    }))
}

/// Tabulated CDF on a sorted grid, interpolated by monotone-clamped cubic
/// Hermite segments whose slopes are the density values. Segments touching
/// a singular point are integrated exactly instead.
#[derive(Debug, Clone)]
pub struct CdfTable {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    slopes: Vec<f64>,
    density: DensityFn,
}

impl CdfTable {
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return self.values[0];
        }
        let last = g.len() - 1;
        if x >= g[last] {
            return self.values[last];
        }
        let k = g.partition_point(|&p| p <= x) - 1;
        let (x0, x1) = (g[k], g[k + 1]);
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        if !(m0.is_finite() && m1.is_finite()) {
            let opts = QuadOptions::tol(1e-13);
            return match self.density.integrate_over(x0, x, opts) {
                Ok(q) => (v0 + q.value).clamp(v0, v1),
                Err(_) => v0 + t * (v1 - v0),
            };
        }
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * v0
            + (t3 - 2.0 * t2 + t) * h * m0
            + (-2.0 * t3 + 3.0 * t2) * v1
            + (t3 - t2) * h * m1;
        v.clamp(v0, v1)
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

const CDF_BASE_POINTS: usize = 4096;
// Finer refinement pushes quadrature nodes into the rounding zone of the
// singular point itself.
const REFINE_LEVELS: i32 = 12;
const CDF_FAR: f64 = 1e14;

/// Build a [`CdfTable`] by integrating `d` between grid points.
pub fn cdf_of(d: &DensityFn) -> Result<CdfTable> {
    let mut grid = Vec::with_capacity(2 * CDF_BASE_POINTS);
    let n = CDF_BASE_POINTS;
    match (d.lo.is_finite(), d.hi.is_finite()) {
        (true, true) => {
            let h = (d.hi - d.lo) / n as f64;
            grid.extend((0..=n).map(|k| d.lo + h * k as f64));
            for &s in &d.singular {
                for j in 1..=REFINE_LEVELS {
                    let e = h * 0.5f64.powi(j);
                    grid.push(s - e);
                    grid.push(s + e);
                }
            }
        }
        (true, false) => {
            let scale = 1.0 + d.singular.iter().fold(0.0f64, |m, s| m.max((s - d.lo).abs()));
            grid.extend((0..n).map(|k| {
                let t = k as f64 / n as f64;
                d.lo + scale * t / (1.0 - t)
            }));
            let mut x = grid[n - 1];
            while x < CDF_FAR {
                x *= 1.25;
                grid.push(x.min(CDF_FAR));
            }
            let h = scale / n as f64;
            for &s in &d.singular {
                for j in 1..=REFINE_LEVELS {
                    let e = h * 0.5f64.powi(j);
                    grid.push(s - e);
                    grid.push(s + e);
                }
            }
        }
        _ => return Err(Error::NonIntegrable(format!("{}: unsupported domain", d.name))),
    }
    grid.extend(d.singular.iter().copied());
    let hi = if d.hi.is_finite() { d.hi } else { CDF_FAR };
    grid.retain(|&x| x >= d.lo && x <= hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 400,
    };
    let mut values = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    values.push(0.0);
    for w in grid.windows(2) {
        acc += d.integrate_over(w[0], w[1], opts)?.value;
        values.push(acc);
    }
    let total = *values.last().unwrap();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::NonIntegrable(format!("{}: total mass {total}", d.name)));
    }
    let slopes = grid
        .iter()
        .map(|&x| {
            let near = d.singular.iter().any(|&s| (s - x).abs() <= 1e-9 * (1.0 + s.abs()));
            if near {
                f64::INFINITY
            } else {
                d.eval(x)
            }
        })
        .collect();
    Ok(CdfTable {
        grid,
        values,
        slopes,
        density: d.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn plug_in_values() {
        assert!(close(pdf_abs_a(2f64.sqrt()).unwrap(), 2f64.sqrt() / PI, 1e-15));
        assert!(pdf_abs_a(1.0).is_err());
        assert!(pdf_abs_a(1.0 + 1e-12).unwrap() > 1e5);
        assert!(close(expected_f0(), 0.63662, 5e-6));
        assert!(close(hyperbolic_plugin_f0(), 1.50494, 5e-6));
        assert!(pdf_f0(1.0).is_err());
        assert!(pdf_f0(-0.1).is_err());
        assert!(close(expected_translation_length(), 2.77259, 5e-6));
        assert_eq!(prob_axis_meets_disk(0.0), 0.0);
    }

    #[test]
    fn small_argument_limits() {
        assert!(close(pdf_ratio_x(1e-9).unwrap(), 8.0 / (PI * PI), 1e-12));
        assert!(pdf_half_angle(1e-12).unwrap() < 1e-9);
        assert!(close(pdf_half_angle(FRAC_PI_2 - 1e-6).unwrap(), 8.0 / (PI * PI), 1e-8));
        assert!(pdf_translation_length(1e-9).unwrap() < 1e-7);
    }

    #[test]
    fn hyperbolic_trace_form() {
        for k in 1..50 {
            let s = 2.0 + 0.37 * k as f64;
            let f = 4.0 / (PI * PI * s) * (s / (s * s - 4.0).sqrt()).acosh();
            assert!(close(pdf_trace(s).unwrap(), f, 1e-13 * f.max(1.0)), "s = {s}");
        }
    }

    #[test]
    fn masses() {
        for d in [
            DensityFn::abs_a(),
            DensityFn::f0(),
            DensityFn::ratio_x(),
            DensityFn::half_angle(),
            DensityFn::trace(),
            DensityFn::beta(),
            DensityFn::w(),
            DensityFn::translation_length(),
            DensityFn::min_gap(),
        ] {
            let m = d.total_mass().unwrap();
            assert!(close(m, 1.0, 1e-6), "{} mass {m}", d.name);
        }
    }

    #[test]
    fn closed_cdfs_match_quadrature() {
        for d in [
            DensityFn::abs_a(),
            DensityFn::f0(),
            DensityFn::half_angle(),
            DensityFn::ratio_x(),
        ] {
            let cdf = d.closed_cdf().unwrap().clone();
            let hi = if d.hi.is_finite() { d.hi } else { d.lo + 20.0 };
            for k in 1..20 {
                let x = d.lo + (hi - d.lo) * k as f64 / 20.0;
                let q = d.integrate_over(d.lo, x, QuadOptions::default()).unwrap().value;
                assert!(close(q, cdf(x), 1e-9), "{} at {x}: {q} vs {}", d.name, cdf(x));
            }
        }
    }

    #[test]
    fn cdf_table_shape() {
        let t = cdf_of(&DensityFn::translation_length()).unwrap();
        assert!(t.is_monotone());
        assert_eq!(t.values[0], 0.0);
        assert!(close(*t.values.last().unwrap(), 1.0, 1e-6));
        let b = cdf_of(&DensityFn::beta()).unwrap();
        for k in 0..=40 {
            let x = -4.0 + 0.1 * k as f64;
            let y = (x + 4.0).sqrt() / 2.0;
            // Closed form on β ≤ 0 via the trace law.
            let exact = 2.0 / (PI * PI) * super::super::dilog::dilog_odd(y.min(1.0)).unwrap();
            assert!(close(b.eval(x), exact, 1e-9), "x = {x}: {} vs {exact}", b.eval(x));
        }
        let h = cdf_of(&DensityFn::half_angle()).unwrap();
        for k in 1..100 {
            let x = FRAC_PI_2 * k as f64 / 100.0;
            assert!(close(h.eval(x), cdf_half_angle(x), 1e-8));
        }
    }

    #[test]
    fn uniform_self_convolution_is_triangular() {
        let u = DensityFn::uniform(0.0, TAU);
        let c = pdf_convolve(&u, &u).unwrap();
        for k in 0..=40 {
            let z = 4.0 * PI * k as f64 / 40.0;
            let tri = if z < TAU { z } else { 2.0 * TAU - z } / (4.0 * PI * PI);
            assert!(close(c.eval(z), tri, 1e-10), "z = {z}");
        }
    }

    #[test]
    fn convolution_rejects_non_densities() {
        let bad = DensityFn::new("bad", 0.0, f64::INFINITY, vec![], |x| 1.0 / (1.0 + x));
        assert!(matches!(
            pdf_convolve(&bad, &DensityFn::f0()),
            Err(Error::NonIntegrable(_))
        ));
    }

    #[test]
    fn min_gap() {
        assert_eq!(min_gap_law(0.0).unwrap(), 1.0);
        assert!(min_gap_law(4.0).is_err());
        let m = DensityFn::min_gap().moment(1).unwrap();
        assert!(close(m, expected_min_gap(), 1e-12));
    }
}
