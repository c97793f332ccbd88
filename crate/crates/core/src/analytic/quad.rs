//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The rule is open, so integrable endpoint singularities are never sampled.
//! Infinite limits are handled with `x = a + t/(1−t)` style maps.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol: abs_tol,
            ..Default::default()
        }
    }
}

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Smallest GK15 node offset from either end of a piece of width `w`.
const EDGE_NODE: f64 = 0.5 * (1.0 - XGK[0]);

fn adapt_finite<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    cuts: &[f64],
    floors: &[f64],
    opts: QuadOptions,
) -> Result<Quadrature> {
    // Each segment [c₀, c₁] is mapped from u ∈ [k, k+1] by the cubic
    // x = c₀ + L·v²(3 − 2v), whose vanishing derivative at both ends
    // tames square-root and logarithmic endpoint singularities.
    let mut segs: Vec<(f64, f64, f64, f64)> = Vec::new();
    for (k, w) in cuts.windows(2).enumerate() {
        if w[1] > w[0] {
            segs.push((w[0], w[1] - w[0], floors[k], floors[k + 1]));
        }
    }
    if segs.is_empty() {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let last = segs.len() - 1;
    let g = |u: f64| {
        let k = (u.floor() as usize).min(last);
        let v = u - k as f64;
        let (c0, len, _, _) = segs[k];
        let x = c0 + len * v * v * (3.0 - 2.0 * v);
        let jac = 6.0 * len * v * (1.0 - v);
        if jac == 0.0 || x <= c0 || x >= c0 + len {
            0.0
        } else {
            f(x) * jac
        }
    };
    // A split is refused once the children's outermost nodes would sit
    // within the rounding floor of a segment end, where x − c₀ is lost.
    let can_split = |ua: f64, ub: f64| {
        let k = (ua.floor() as usize).min(last);
        let (_, len, f0, f1) = segs[k];
        let half = 0.5 * (ub - ua);
        let v0 = ua - k as f64 + half * EDGE_NODE;
        let v1 = (k + 1) as f64 - ub + half * EDGE_NODE;
        len * v0 * v0 * (3.0 - 2.0 * v0) > f0 && len * v1 * v1 * (3.0 - 2.0 * v1) > f1
    };
    let ucuts: Vec<f64> = (0..=segs.len()).map(|k| k as f64).collect();
    adapt_plain(&g, &ucuts, &can_split, opts)
}

fn rounding_floor(c: f64) -> f64 {
    256.0 * f64::EPSILON * c.abs()
}

fn adapt_plain<F: Fn(f64) -> f64>(
    f: &F,
    cuts: &[f64],
    can_split: &dyn Fn(f64, f64) -> bool,
    opts: QuadOptions,
) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Piece> = Vec::new();
    let (mut value, mut error) = (0.0, 0.0);
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(f, w[0], w[1]);
            value += v;
            error += e;
            heap.push(Piece {
                a: w[0],
                b: w[1],
                value: v,
                error: e,
            });
        }
    }
    while error > opts.abs_tol.max(opts.rel_tol * value.abs()) && heap.len() + done.len() < opts.max_intervals {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) || !can_split(p.a, p.b) {
            done.push(p);
            continue;
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        value += v1 + v2 - p.value;
        error += e1 + e2 - p.error;
        heap.push(Piece {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed drift from the running updates.
    let (value, error) = heap
        .iter()
        .chain(done.iter())
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    if !value.is_finite() || !error.is_finite() || error > 1e-6 * value.abs().max(1.0) {
        return Err(Error::NonIntegrable(format!(
            "quadrature did not converge (value {value}, error {error})"
        )));
    }
    Ok(Quadrature {
        value,
        error,
        intervals: heap.len() + done.len(),
    })
}

/// Integrate `f` over `[a, b]`, either limit possibly infinite, splitting at
/// the interior `breaks`.
pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<Quadrature> {
    integrate_dyn(&f, a, b, breaks, opts)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<Quadrature> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::NonIntegrable("NaN limit".into()));
    }
    if b < a {
        let q = integrate_dyn(f, b, a, breaks, opts)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let mut cuts = vec![a];
            cuts.extend(pts);
            cuts.push(b);
            let floors: Vec<f64> = cuts.iter().map(|&c| rounding_floor(c)).collect();
            adapt_finite(f, &cuts, &floors, opts)
        }
        (true, false) => {
            // x = a + t/(1−t); the last finite breakpoint anchors the tail.
            let anchor = pts.last().copied().unwrap_or(a);
            let head = if anchor > a {
                let mut cuts = vec![a];
                cuts.extend(&pts);
                let floors: Vec<f64> = cuts.iter().map(|&c| rounding_floor(c)).collect();
                Some(adapt_finite(f, &cuts, &floors, opts)?)
            } else {
                None
            };
            let g = |t: f64| {
                let u = 1.0 - t;
                let x = anchor + t / u;
                if x.is_finite() {
                    f(x) / (u * u)
                } else {
                    0.0
                }
            };
            let tail = adapt_finite(&g, &[0.0, 1.0], &[rounding_floor(anchor), 0.0], opts)?;
            Ok(combine(head, tail))
        }
        (false, true) => {
            let neg: Vec<f64> = pts.iter().map(|x| -x).collect();
            integrate_dyn(&|x| f(-x), -b, f64::INFINITY, &neg, opts)
        }
        (false, false) => {
            let mid = pts.first().copied().unwrap_or(0.0);
            let left = integrate_dyn(f, f64::NEG_INFINITY, mid, &[], opts)?;
            let right = integrate_dyn(f, mid, f64::INFINITY, &pts, opts)?;
            Ok(combine(Some(left), right))
        }
    }
}

fn combine(head: Option<Quadrature>, tail: Quadrature) -> Quadrature {
    match head {
        None => tail,
        Some(h) => Quadrature {
            value: h.value + tail.value,
            error: h.error + tail.error,
            intervals: h.intervals + tail.intervals,
        },
    }
}

/// Integrate with default tolerances (1e-12).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Ok(integrate_with(f, a, b, &[], QuadOptions::default())?.value)
}
