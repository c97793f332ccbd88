//! Registry of seeded Monte Carlo experiments with analytic targets.
//!
//! A run splits `n` trials over a fixed number of streams. Stream `i` draws
//! from `StreamSeed::new(seed, i)` and fills its own [`Tally`]; tallies are
//! merged in stream order, so results depend on `(n, seed, streams)` only
//! and never on the worker count.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    axes_cross_quadrature, cdf_abs_a, cdf_f0, cdf_half_angle, cdf_of, expected_f0, expected_translation_length,
    prob_axis_meets_disk, DensityFn,
};
use crate::arcs::{all_disjoint, arcs_disjoint, Arc};
use crate::discreteness::{jorgensen_fails, ping_pong, shares_fixed_point, Status};
use crate::error::{domain, Error, Result};
use crate::mobius::{fixed_point_cross_ratio, gamma, MobiusTransform, TransformKind};
use crate::sampling::{
    sample_arc, sample_hyperbolic, sample_mobius, sample_parabolic, sample_unit, StreamRng, StreamSeed, Support,
};

pub const DEFAULT_STREAMS: u64 = 64;
pub const MIN_SAMPLES: u64 = 1000;
/// Pass iff `D·√n` stays below this (two-sided, α ≈ 0.001).
pub const KS_THRESHOLD: f64 = 1.95;
/// Radii of the axis-meets-disk grid.
pub const DISK_RADII: [f64; 5] = [0.25, 0.678, 1.0, 1.5, 2.24419];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub n: u64,
    /// `None` for sample means.
    pub hits: Option<u64>,
    pub p_hat: f64,
    pub std_err: f64,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub target_ref: String,
    /// `(p_hat − target) / std_err`.
    pub sigma_distance: Option<f64>,
    pub pass: Option<bool>,
}

impl Estimate {
    pub fn event(name: &str, hits: u64, n: u64) -> Self {
        let p = if n == 0 { f64::NAN } else { hits as f64 / n as f64 };
        Estimate {
            name: name.into(),
            n,
            hits: Some(hits),
            p_hat: p,
            std_err: (p * (1.0 - p) / n as f64).sqrt(),
            target: None,
            tolerance: None,
            target_ref: String::new(),
            sigma_distance: None,
            pass: None,
        }
    }

    pub fn mean(name: &str, n: u64, sum: f64, sum_sq: f64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        Estimate {
            name: name.into(),
            n,
            hits: None,
            p_hat: mean,
            std_err: (var / nf).sqrt(),
            target: None,
            tolerance: None,
            target_ref: String::new(),
            sigma_distance: None,
            pass: None,
        }
    }

    /// Attach a target and absolute tolerance; sets `pass`.
    pub fn against(mut self, target: f64, tolerance: f64, reference: &str) -> Self {
        self.target = Some(target);
        self.tolerance = Some(tolerance);
        self.target_ref = reference.into();
        self.sigma_distance = (self.std_err > 0.0).then(|| (self.p_hat - target) / self.std_err);
        self.pass = Some((self.p_hat - target).abs() <= tolerance);
        self
    }

    /// Attach a description without asserting anything.
    pub fn reported(mut self, reference: &str) -> Self {
        self.target_ref = reference.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    /// Values at or above the last edge, and NaN.
    pub overflow: u64,
}

impl Histogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || !edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("histogram edges must be strictly increasing".into()));
        }
        let bins = edges.len() - 1;
        Ok(Histogram {
            edges,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Self {
        let h = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|k| lo + h * k as f64).collect();
        edges.push(hi);
        Histogram::new(edges).expect("uniform edges are increasing")
    }

    pub fn add(&mut self, x: f64) {
        let last = self.edges.len() - 1;
        if x < self.edges[0] {
            self.underflow += 1;
        } else if x < self.edges[last] {
            let k = self.edges.partition_point(|&e| e <= x) - 1;
            self.counts[k] += 1;
        } else {
            self.overflow += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    fn merge(&mut self, other: &Histogram) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
    }

    /// `bin_left,bin_right,count` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,bin_right,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", self.edges[k], self.edges[k + 1], c);
        }
        s
    }
}

pub fn histogram(samples: &[f64], edges: &[f64]) -> Result<Histogram> {
    let mut h = Histogram::new(edges.to_vec())?;
    samples.iter().for_each(|&x| h.add(x));
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub label: String,
    /// Two-sided statistic `D_n`.
    pub statistic: f64,
    pub n: u64,
    pub threshold: f64,
    /// `D_n·√n`.
    pub scaled: f64,
    pub pass: bool,
}

/// Two-sided Kolmogorov–Smirnov test of `samples` against `cdf`.
pub fn ks_test(label: &str, samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Config("KS test needs non-empty, NaN-free samples".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        let hi = (i + 1) as f64 / n - f;
        let lo = f - i as f64 / n;
        d.max(hi).max(lo)
    });
    let scaled = d * n.sqrt();
    Ok(KsResult {
        label: label.into(),
        statistic: d,
        n: xs.len() as u64,
        threshold: KS_THRESHOLD,
        scaled,
        pass: scaled < KS_THRESHOLD,
    })
}

/// A deterministic computation with a target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueCheck {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub target_ref: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub name: String,
    pub n: u64,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Outcome {
    Estimate(Estimate),
    Ks(KsResult),
    Histogram(HistogramReport),
    Value(ValueCheck),
}

impl Outcome {
    pub fn name(&self) -> &str {
        match self {
            Outcome::Estimate(e) => &e.name,
            Outcome::Ks(k) => &k.label,
            Outcome::Histogram(h) => &h.name,
            Outcome::Value(v) => &v.name,
        }
    }

    /// `None` when nothing is asserted.
    pub fn pass(&self) -> Option<bool> {
        match self {
            Outcome::Estimate(e) => e.pass,
            Outcome::Ks(k) => Some(k.pass),
            Outcome::Histogram(_) => None,
            Outcome::Value(v) => Some(v.pass),
        }
    }

    pub fn summary(&self) -> String {
        let verdict = match self.pass() {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "report",
        };
        let body = match self {
            Outcome::Estimate(e) => match (e.target, e.tolerance) {
                (Some(t), Some(tol)) => format!(
                    "{:.6} ± {:.6} (target {t:.6} ± {tol}, {:+.2}σ)",
                    e.p_hat,
                    e.std_err,
                    e.sigma_distance.unwrap_or(0.0)
                ),
                _ => format!("{:.6} ± {:.6}", e.p_hat, e.std_err),
            },
            Outcome::Ks(k) => format!("D√n = {:.4} (threshold {})", k.scaled, k.threshold),
            Outcome::Histogram(h) => format!(
                "{} bins, {} under, {} over",
                h.histogram.counts.len(),
                h.histogram.underflow,
                h.histogram.overflow
            ),
            Outcome::Value(v) => format!("{:.7} (target {} ± {})", v.value, v.target, v.tolerance),
        };
        format!("[{verdict}] {}: {body}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    /// Trials run; 0 for deterministic entries.
    pub n: u64,
    pub seed: u64,
    pub streams: u64,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    /// False iff some asserted outcome failed.
    pub fn pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass() != Some(false))
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name() == name)
    }

    pub fn estimate(&self, name: &str) -> Option<&Estimate> {
        match self.outcome(name) {
            Some(Outcome::Estimate(e)) => Some(e),
            _ => None,
        }
    }
}

/// Per-stream accumulators.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub trials: u64,
    pub hits: Vec<u64>,
    pub sums: Vec<f64>,
    pub sum_sqs: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    pub hists: Vec<Histogram>,
}

impl Tally {
    pub fn new(events: usize, moments: usize, sample_sets: usize, hists: Vec<Histogram>) -> Self {
        Tally {
            trials: 0,
            hits: vec![0; events],
            sums: vec![0.0; moments],
            sum_sqs: vec![0.0; moments],
            samples: vec![Vec::new(); sample_sets],
            hists,
        }
    }

    fn hit(&mut self, k: usize, event: bool) {
        self.hits[k] += u64::from(event);
    }

    fn moment(&mut self, k: usize, x: f64) {
        self.sums[k] += x;
        self.sum_sqs[k] += x * x;
    }

    /// Append `other`; callers merge in stream order.
    pub fn merge(&mut self, other: Tally) {
        self.trials += other.trials;
        for (a, b) in self.hits.iter_mut().zip(&other.hits) {
            *a += b;
        }
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.sum_sqs.iter_mut().zip(&other.sum_sqs) {
            *a += b;
        }
        for (a, b) in self.samples.iter_mut().zip(other.samples) {
            a.extend(b);
        }
        for (a, b) in self.hists.iter_mut().zip(&other.hists) {
            a.merge(b);
        }
    }

    fn event(&self, k: usize, name: &str) -> Estimate {
        Estimate::event(name, self.hits[k], self.trials)
    }

    fn mean(&self, k: usize, name: &str) -> Estimate {
        Estimate::mean(name, self.trials, self.sums[k], self.sum_sqs[k])
    }
}

type Init = fn() -> Tally;
type Trial = fn(&mut StreamRng, &mut Tally);
type Finish = fn(&Tally) -> Result<Vec<Outcome>>;

enum Kind {
    MonteCarlo { init: Init, trial: Trial, finish: Finish },
    Deterministic(fn() -> Result<Vec<Outcome>>),
}

pub struct Experiment {
    pub name: &'static str,
    pub claim: &'static str,
    pub default_n: u64,
    kind: Kind,
}

impl Experiment {
    pub fn is_deterministic(&self) -> bool {
        matches!(self.kind, Kind::Deterministic(_))
    }
}

// ---------------------------------------------------------------- trials

fn hyperbolic_pair(rng: &mut StreamRng) -> (MobiusTransform, MobiusTransform) {
    (sample_hyperbolic(rng), sample_hyperbolic(rng))
}

fn isometric_arcs_of(fs: &[MobiusTransform]) -> Option<Vec<Arc>> {
    let mut out = Vec::with_capacity(2 * fs.len());
    for f in fs {
        let iso = f.isometric_arcs().ok()?;
        out.push(iso.plus_arc);
        out.push(iso.minus_arc);
    }
    Some(out)
}

/// Half the angle at 0 between the fixed points of a hyperbolic element.
fn half_angle(f: &MobiusTransform) -> Option<f64> {
    let fp = f.fixed_points().ok()?;
    Some(0.5 * (fp.z_plus / fp.z_minus).arg().abs())
}

fn init_single() -> Tally {
    Tally::new(2, 2, 0, vec![])
}

/// Events: isometric arcs disjoint, not elliptic. Moments: `|f(0)|`.
fn trial_single(rng: &mut StreamRng, t: &mut Tally) {
    let f = sample_mobius(rng);
    let disjoint = f
        .isometric_arcs()
        .map(|iso| arcs_disjoint(&iso.plus_arc, &iso.minus_arc))
        .unwrap_or(false);
    t.hit(0, disjoint);
    t.hit(1, f.kind() != TransformKind::Elliptic);
    let f0 = f.apply(Complex64::new(0.0, 0.0)).map(|z| z.norm()).unwrap_or(f64::NAN);
    t.moment(0, f0);
}

const PAIR_CROSS: usize = 0;
const PAIR_CROSS_RATIO: usize = 1;
const PAIR_AGREE: usize = 2;
const PAIR_BELOW: usize = 3;
const PAIR_INTERVAL: usize = 4;
const PAIR_JORGENSEN: usize = 5;
const PAIR_SHARED: usize = 6;
const PAIR_CR_AT_LEAST_ONE: usize = 7;

fn init_hyp_pair() -> Tally {
    Tally::new(
        8,
        0,
        0,
        vec![
            Histogram::uniform(-20.0, 20.0, 400),
            Histogram::uniform(-10.0, 10.0, 400),
        ],
    )
}

fn trial_hyp_pair(rng: &mut StreamRng, t: &mut Tally) {
    let (f, g) = hyperbolic_pair(rng);
    let gm = gamma(&f, &g);
    let cr = fixed_point_cross_ratio(&f, &g).unwrap_or(f64::NAN);
    t.hit(PAIR_CROSS, gm < 0.0);
    t.hit(PAIR_CROSS_RATIO, cr > 1.0);
    t.hit(PAIR_AGREE, (gm < 0.0) == (cr > 1.0));
    t.hit(PAIR_BELOW, gm < -4.0);
    t.hit(PAIR_INTERVAL, gm > -4.0 && gm < 0.0);
    t.hit(PAIR_JORGENSEN, jorgensen_fails(&f, &g));
    t.hit(PAIR_SHARED, shares_fixed_point(&[f, g]));
    t.hit(PAIR_CR_AT_LEAST_ONE, cr >= 1.0);
    t.hists[0].add(gm);
    t.hists[1].add(cr);
}

fn init_any_pair() -> Tally {
    Tally::new(1, 0, 0, vec![Histogram::uniform(-20.0, 20.0, 400)])
}

fn trial_any_pair(rng: &mut StreamRng, t: &mut Tally) {
    let (f, g) = (sample_mobius(rng), sample_mobius(rng));
    let gm = gamma(&f, &g);
    t.hit(0, gm < -4.0);
    t.hists[0].add(gm);
}

fn init_events<const K: usize>() -> Tally {
    Tally::new(K, 0, 0, vec![])
}

fn trial_chords(rng: &mut StreamRng, t: &mut Tally) {
    let p: [f64; 4] = std::array::from_fn(|_| sample_unit(rng).arg());
    let rel = |x: f64| (x - p[0]).rem_euclid(std::f64::consts::TAU);
    let span = rel(p[1]);
    t.hit(0, (rel(p[2]) < span) != (rel(p[3]) < span));
}

fn trial_arcs_half(rng: &mut StreamRng, t: &mut Tally) {
    let (a, b) = (sample_arc(rng, Support::HalfTurn), sample_arc(rng, Support::HalfTurn));
    t.hit(0, arcs_disjoint(&a, &b));
}

fn trial_arcs_full(rng: &mut StreamRng, t: &mut Tally) {
    let (a, b) = (sample_arc(rng, Support::FullTurn), sample_arc(rng, Support::FullTurn));
    t.hit(0, arcs_disjoint(&a, &b));
}

fn trial_generators<const N: usize>(rng: &mut StreamRng, t: &mut Tally) {
    let fs: [MobiusTransform; N] = std::array::from_fn(|_| sample_mobius(rng));
    t.hit(0, isometric_arcs_of(&fs).is_some_and(|a| all_disjoint(&a)));
}

/// Two arcs of one common length `ℓ ∈_u [0, π]` at independent uniform midpoints.
fn arc_pair(rng: &mut StreamRng) -> [Arc; 2] {
    let len = PI * rng.random::<f64>();
    [
        Arc::from_unit(sample_unit(rng), len),
        Arc::from_unit(sample_unit(rng), len),
    ]
}

/// Both pairs internally disjoint by rejection; event: all four disjoint.
fn trial_two_pairs_conditional(rng: &mut StreamRng, t: &mut Tally) {
    let draw = |rng: &mut StreamRng| loop {
        let p = arc_pair(rng);
        if arcs_disjoint(&p[0], &p[1]) {
            return p;
        }
    };
    let (a, b) = (draw(rng), draw(rng));
    t.hit(0, all_disjoint(&[a[0], a[1], b[0], b[1]]));
}

fn trial_equal_length<const N: usize>(rng: &mut StreamRng, t: &mut Tally) {
    let len = PI * rng.random::<f64>();
    let arcs: Vec<Arc> = (0..2 * N).map(|_| Arc::from_unit(sample_unit(rng), len)).collect();
    t.hit(0, all_disjoint(&arcs));
}

fn init_samples() -> Tally {
    Tally::new(0, 0, 1, vec![])
}

fn trial_ks_beta(rng: &mut StreamRng, t: &mut Tally) {
    t.samples[0].push(sample_mobius(rng).beta());
}

fn trial_ks_tau(rng: &mut StreamRng, t: &mut Tally) {
    t.samples[0].push(sample_hyperbolic(rng).classify().tau);
}

fn trial_ks_abs_a(rng: &mut StreamRng, t: &mut Tally) {
    t.samples[0].push(sample_mobius(rng).a().norm());
}

fn trial_ks_f0(rng: &mut StreamRng, t: &mut Tally) {
    let f = sample_mobius(rng);
    t.samples[0].push(f.apply(Complex64::new(0.0, 0.0)).map(|z| z.norm()).unwrap_or(f64::NAN));
}

fn trial_ks_half_angle(rng: &mut StreamRng, t: &mut Tally) {
    t.samples[0].push(half_angle(&sample_hyperbolic(rng)).unwrap_or(f64::NAN));
}

fn init_tau() -> Tally {
    Tally::new(0, 1, 0, vec![])
}

fn trial_tau(rng: &mut StreamRng, t: &mut Tally) {
    t.moment(0, sample_hyperbolic(rng).classify().tau);
}

/// Axis meets the hyperbolic disk of radius `r` about 0 iff its Euclidean
/// distance `cos η / (1 + sin η)` from 0 is below `tanh(r/2)`.
fn trial_axis_disk(rng: &mut StreamRng, t: &mut Tally) {
    let eta = half_angle(&sample_hyperbolic(rng)).unwrap_or(f64::NAN);
    let (s, c) = eta.sin_cos();
    let rho = c / (1.0 + s);
    for (k, r) in DISK_RADII.iter().enumerate() {
        t.hit(k, rho < (0.5 * r).tanh());
    }
}

const PP_DISCRETE: usize = 0;
const PP_TANGENT: usize = 1;

fn trial_pingpong_hyperbolic(rng: &mut StreamRng, t: &mut Tally) {
    let (f, g) = hyperbolic_pair(rng);
    pingpong_events(&[f, g], t);
}

fn trial_pingpong_all(rng: &mut StreamRng, t: &mut Tally) {
    let gens = [sample_mobius(rng), sample_mobius(rng)];
    pingpong_events(&gens, t);
}

fn trial_pingpong_parabolic(rng: &mut StreamRng, t: &mut Tally) {
    let gens = [sample_parabolic(rng), sample_parabolic(rng)];
    pingpong_events(&gens, t);
}

fn pingpong_events(gens: &[MobiusTransform], t: &mut Tally) {
    let status = ping_pong(gens).map(|v| v.status).unwrap_or(Status::Inconclusive);
    t.hit(PP_DISCRETE, status.is_discrete());
    t.hit(PP_TANGENT, status == Status::DiscreteByPingPongWithTangency);
}

// -------------------------------------------------------------- finishers

fn one(e: Estimate) -> Result<Vec<Outcome>> {
    Ok(vec![Outcome::Estimate(e)])
}

fn finish_isometric(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "isometric-disjoint").against(
        0.5,
        0.004,
        "isometric circles of a random element are disjoint with probability 1/2",
    ))
}

fn finish_cyclic(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(1, "cyclic-discrete").against(
        0.5,
        0.004,
        "a random cyclic group is discrete (not elliptic) with probability 1/2",
    ))
}

fn finish_mean_f0(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.mean(0, "mean-f0").against(expected_f0(), 0.002, "E|f(0)| = 2/π"))
}

fn finish_axes_cross(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Estimate(t.event(PAIR_CROSS, "axes-cross").against(
            0.4296,
            0.003,
            "axes of two random hyperbolics cross (γ < 0), about 0.4296",
        )),
        Outcome::Estimate(t.event(PAIR_CROSS_RATIO, "axes-cross-cross-ratio").against(
            0.4296,
            0.003,
            "same event through the fixed-point cross ratio exceeding 1",
        )),
        Outcome::Estimate(t.event(PAIR_AGREE, "axes-cross-route-agreement").against(
            1.0,
            1e-4,
            "γ < 0 and cross ratio > 1 agree sample by sample",
        )),
    ])
}

fn finish_gamma_below(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(PAIR_BELOW, "gamma-below-minus4").against(
        0.2668,
        0.003,
        "γ < −4 for random hyperbolic pairs, about 0.266818",
    ))
}

fn finish_gamma_interval(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(PAIR_INTERVAL, "gamma-in-interval").against(
        0.1624,
        0.003,
        "−4 < γ < 0 for random hyperbolic pairs, about 0.162394",
    ))
}

fn finish_jorgensen(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Estimate(t.event(PAIR_JORGENSEN, "jorgensen-fail").against(
            0.111,
            0.010,
            "about 1/9 of random hyperbolic pairs fail Jørgensen's inequality",
        )),
        Outcome::Estimate(
            t.event(PAIR_SHARED, "shared-fixed-point")
                .reported("pairs sharing a fixed point (elementary)"),
        ),
    ])
}

fn finish_gamma_hyperbolic_hist(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Histogram(HistogramReport {
            name: "gamma-hyperbolic-histogram".into(),
            n: t.trials,
            histogram: t.hists[0].clone(),
        }),
        Outcome::Estimate(
            t.event(PAIR_BELOW, "gamma-hyperbolic-below-minus4")
                .reported("mass of the histogram below −4"),
        ),
    ])
}

fn finish_crossratio_hist(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Histogram(HistogramReport {
            name: "crossratio-histogram".into(),
            n: t.trials,
            histogram: t.hists[1].clone(),
        }),
        Outcome::Estimate(t.event(PAIR_CR_AT_LEAST_ONE, "crossratio-at-least-one").reported(
            "fixed-point cross ratio ≥ 1 for random hyperbolic pairs; a conjectured 1/5 is reported, not asserted",
        )),
    ])
}

fn finish_gamma_all_hist(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Histogram(HistogramReport {
            name: "gamma-histogram".into(),
            n: t.trials,
            histogram: t.hists[0].clone(),
        }),
        Outcome::Estimate(
            t.event(0, "gamma-below-minus4-all-pairs")
                .reported("mass of the histogram below −4"),
        ),
    ])
}

fn finish_chords(t: &Tally) -> Result<Vec<Outcome>> {
    one(t
        .event(0, "chords-cross")
        .against(1.0 / 3.0, 0.004, "two uniform random chords cross with probability 1/3"))
}

fn finish_arcs_half(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "arcs-disjoint-half").against(
        0.5,
        0.004,
        "two random arcs with lengths uniform on [0, π] are disjoint with probability 1/2",
    ))
}

fn finish_arcs_full(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "arcs-disjoint-full").against(
        1.0 / 6.0,
        0.004,
        "two random arcs with lengths uniform on [0, 2π] are disjoint with probability 1/6",
    ))
}

fn finish_two_pairs(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "two-pairs-all-disjoint").against(
        0.05,
        0.002,
        "the four isometric arcs of two random elements are disjoint with probability 1/20",
    ))
}

fn finish_two_pairs_conditional(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "two-pairs-conditional").against(
        0.2,
        0.004,
        "given each pair disjoint, all four arcs are disjoint with probability 1/5",
    ))
}

fn finish_three_pairs(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "three-pairs-all-disjoint").against(
        0.003,
        0.0005,
        "the six isometric arcs of three random elements are disjoint with probability 3/1000",
    ))
}

fn finish_equal2(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(0, "equal-length-pairs-2").against(
        0.125,
        0.003,
        "four arcs of one random common length are disjoint with probability 1/8",
    ))
}

fn finish_equal3(t: &Tally) -> Result<Vec<Outcome>> {
    one(t
        .event(0, "equal-length-pairs-3")
        .against(0.045, 0.002, "six arcs of one random common length, claimed 9/200"))
}

fn table_cdf(d: DensityFn) -> Result<impl Fn(f64) -> f64> {
    let table = cdf_of(&d)?;
    Ok(move |x| table.eval(x))
}

fn ks_outcome(t: &Tally, label: &str, cdf: impl Fn(f64) -> f64) -> Result<Vec<Outcome>> {
    Ok(vec![Outcome::Ks(ks_test(label, &t.samples[0], cdf)?)])
}

fn finish_ks_beta(t: &Tally) -> Result<Vec<Outcome>> {
    ks_outcome(t, "ks-beta", table_cdf(DensityFn::beta())?)
}

fn finish_ks_tau(t: &Tally) -> Result<Vec<Outcome>> {
    ks_outcome(t, "ks-tau", table_cdf(DensityFn::translation_length())?)
}

fn finish_ks_abs_a(t: &Tally) -> Result<Vec<Outcome>> {
    ks_outcome(t, "ks-abs-a", cdf_abs_a)
}

fn finish_ks_f0(t: &Tally) -> Result<Vec<Outcome>> {
    ks_outcome(t, "ks-f0", cdf_f0)
}

fn finish_ks_half_angle(t: &Tally) -> Result<Vec<Outcome>> {
    ks_outcome(t, "ks-half-angle", cdf_half_angle)
}

fn finish_mean_tau(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.mean(0, "mean-tau").against(
        expected_translation_length(),
        0.02,
        "E τ = 4 log 2 for random hyperbolics",
    ))
}

fn finish_axis_disk(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(DISK_RADII
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let name = format!("axis-meets-disk-r{r}");
            Outcome::Estimate(t.event(k, &name).against(
                prob_axis_meets_disk(r),
                0.004,
                "frequency matches (4/π²)(Li₂(tanh r) − Li₂(−tanh r))",
            ))
        })
        .collect())
}

fn finish_pp_hyperbolic(t: &Tally) -> Result<Vec<Outcome>> {
    one(t.event(PP_DISCRETE, "pingpong-hyperbolic").against(
        0.2,
        0.004,
        "ping-pong certifies about 1/5 of random hyperbolic pairs",
    ))
}

fn finish_pp_all(t: &Tally) -> Result<Vec<Outcome>> {
    one(t
        .event(PP_DISCRETE, "pingpong-all")
        .against(0.05, 0.002, "ping-pong certifies about 1/20 of random pairs"))
}

fn finish_pp_parabolic(t: &Tally) -> Result<Vec<Outcome>> {
    Ok(vec![
        Outcome::Estimate(t.event(PP_DISCRETE, "pingpong-parabolic").against(
            1.0 / 6.0,
            0.004,
            "ping-pong certifies 1/6 of random parabolic pairs",
        )),
        Outcome::Estimate(
            t.event(PP_TANGENT, "pingpong-parabolic-tangent")
                .reported("certificates relying on own-arc tangency"),
        ),
    ])
}

fn axes_cross_value() -> Result<Vec<Outcome>> {
    let value = axes_cross_quadrature()?;
    Ok(vec![Outcome::Value(ValueCheck {
        name: "axes-cross-quadrature".into(),
        value,
        target: 0.429,
        tolerance: 0.002,
        target_ref: "nested quadrature over the crossing region returns 0.429".into(),
        pass: (value - 0.429).abs() <= 0.002,
    })])
}

// --------------------------------------------------------------- registry

macro_rules! mc {
    ($name:expr, $claim:expr, $n:expr, $init:expr, $trial:expr, $finish:expr) => {
        Experiment {
            name: $name,
            claim: $claim,
            default_n: $n,
            kind: Kind::MonteCarlo {
                init: $init,
                trial: $trial,
                finish: $finish,
            },
        }
    };
}

const M: u64 = 1_000_000;
const KS_N: u64 = 100_000;

static REGISTRY: &[Experiment] = &[
    mc!(
        "isometric-disjoint",
        "isometric circles disjoint: 1/2",
        M,
        init_single,
        trial_single,
        finish_isometric
    ),
    mc!(
        "cyclic-discrete",
        "cyclic group discrete: 1/2",
        M,
        init_single,
        trial_single,
        finish_cyclic
    ),
    mc!(
        "axes-cross",
        "axes of hyperbolic pairs cross: 0.4296",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_axes_cross
    ),
    mc!(
        "gamma-histogram",
        "γ histogram over all pairs",
        M,
        init_any_pair,
        trial_any_pair,
        finish_gamma_all_hist
    ),
    mc!(
        "gamma-hyperbolic-histogram",
        "γ histogram over hyperbolic pairs",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_gamma_hyperbolic_hist
    ),
    mc!(
        "gamma-below-minus4",
        "γ < −4: 0.2668",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_gamma_below
    ),
    mc!(
        "gamma-in-interval",
        "−4 < γ < 0: 0.1624",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_gamma_interval
    ),
    mc!(
        "jorgensen-fail",
        "Jørgensen failures: about 1/9",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_jorgensen
    ),
    mc!(
        "chords-cross",
        "random chords cross: 1/3",
        M,
        init_events::<1>,
        trial_chords,
        finish_chords
    ),
    mc!(
        "arcs-disjoint-half",
        "arcs with lengths on [0, π] disjoint: 1/2",
        M,
        init_events::<1>,
        trial_arcs_half,
        finish_arcs_half
    ),
    mc!(
        "arcs-disjoint-full",
        "arcs with lengths on [0, 2π] disjoint: 1/6",
        M,
        init_events::<1>,
        trial_arcs_full,
        finish_arcs_full
    ),
    mc!(
        "two-pairs-all-disjoint",
        "two elements, four arcs disjoint: 1/20",
        M,
        init_events::<1>,
        trial_generators::<2>,
        finish_two_pairs
    ),
    mc!(
        "two-pairs-conditional",
        "four arcs disjoint given each pair disjoint: 1/5",
        M,
        init_events::<1>,
        trial_two_pairs_conditional,
        finish_two_pairs_conditional
    ),
    mc!(
        "three-pairs-all-disjoint",
        "three elements, six arcs disjoint: 3/1000",
        10 * M,
        init_events::<1>,
        trial_generators::<3>,
        finish_three_pairs
    ),
    mc!(
        "equal-length-pairs-2",
        "two equal-length pairs disjoint: 1/8",
        M,
        init_events::<1>,
        trial_equal_length::<2>,
        finish_equal2
    ),
    mc!(
        "equal-length-pairs-3",
        "three equal-length pairs disjoint: 9/200 claimed",
        M,
        init_events::<1>,
        trial_equal_length::<3>,
        finish_equal3
    ),
    mc!(
        "ks-beta",
        "β samples follow G",
        KS_N,
        init_samples,
        trial_ks_beta,
        finish_ks_beta
    ),
    mc!(
        "ks-tau",
        "τ samples follow H",
        KS_N,
        init_samples,
        trial_ks_tau,
        finish_ks_tau
    ),
    mc!(
        "ks-abs-a",
        "|a| samples follow 2/(πx√(x²−1))",
        KS_N,
        init_samples,
        trial_ks_abs_a,
        finish_ks_abs_a
    ),
    mc!(
        "ks-f0",
        "|f(0)| samples follow 2/(π√(1−y²))",
        KS_N,
        init_samples,
        trial_ks_f0,
        finish_ks_f0
    ),
    mc!(
        "ks-half-angle",
        "fixed-point half-angles follow H_Y",
        KS_N,
        init_samples,
        trial_ks_half_angle,
        finish_ks_half_angle
    ),
    mc!("mean-tau", "E τ = 4 log 2", M, init_tau, trial_tau, finish_mean_tau),
    mc!("mean-f0", "E|f(0)| = 2/π", M, init_single, trial_single, finish_mean_f0),
    mc!(
        "axis-meets-disk",
        "axis meets the disk of radius r: dilogarithm law",
        M,
        init_events::<5>,
        trial_axis_disk,
        finish_axis_disk
    ),
    mc!(
        "crossratio-histogram",
        "fixed-point cross ratios, Pr{≥ 1} reported",
        M,
        init_hyp_pair,
        trial_hyp_pair,
        finish_crossratio_hist
    ),
    Experiment {
        name: "axes-cross-quadrature",
        claim: "deterministic crossing quadrature: 0.429",
        default_n: 0,
        kind: Kind::Deterministic(axes_cross_value),
    },
    mc!(
        "pingpong-hyperbolic",
        "ping-pong on hyperbolic pairs: 1/5",
        M,
        init_events::<2>,
        trial_pingpong_hyperbolic,
        finish_pp_hyperbolic
    ),
    mc!(
        "pingpong-all",
        "ping-pong on all pairs: 1/20",
        M,
        init_events::<2>,
        trial_pingpong_all,
        finish_pp_all
    ),
    mc!(
        "pingpong-parabolic",
        "ping-pong on parabolic pairs: 1/6",
        M,
        init_events::<2>,
        trial_pingpong_parabolic,
        finish_pp_parabolic
    ),
];

pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.into()))
}

/// Run settings. `workers = None` uses the global rayon pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: u64,
    pub seed: u64,
    pub streams: u64,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        RunConfig {
            n,
            seed,
            streams: DEFAULT_STREAMS,
            workers: None,
        }
    }
}

fn run_streams(init: Init, trial: Trial, cfg: &RunConfig) -> Result<Tally> {
    let RunConfig { n, seed, streams, .. } = *cfg;
    let job = || {
        (0..streams)
            .into_par_iter()
            .map(|i| {
                let quota = n / streams + u64::from(i < n % streams);
                let mut rng = StreamSeed::new(seed, i).rng();
                let mut t = init();
                for _ in 0..quota {
                    trial(&mut rng, &mut t);
                }
                t.trials = quota;
                t
            })
            .collect::<Vec<_>>()
    };
    let parts = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(job),
        None => job(),
    };
    let mut total = init();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

pub fn run_experiment(exp: &Experiment, cfg: &RunConfig) -> Result<Report> {
    if cfg.streams == 0 {
        return Err(domain("streams", 0.0));
    }
    if cfg.workers == Some(0) {
        return Err(domain("workers", 0.0));
    }
    let (n, outcomes) = match exp.kind {
        Kind::Deterministic(f) => (0, f()?),
        Kind::MonteCarlo { init, trial, finish } => {
            if cfg.n < MIN_SAMPLES {
                return Err(Error::SampleSizeTooSmall(cfg.n));
            }
            let t = run_streams(init, trial, cfg)?;
            (t.trials, finish(&t)?)
        }
    };
    Ok(Report {
        name: exp.name.into(),
        n,
        seed: cfg.seed,
        streams: cfg.streams,
        outcomes,
    })
}

pub fn run(name: &str, cfg: &RunConfig) -> Result<Report> {
    run_experiment(find(name)?, cfg)
}

/// Every registered experiment; `n = None` uses each entry's default size.
pub fn run_all(n: Option<u64>, seed: u64, streams: u64, workers: Option<usize>) -> Result<Vec<Report>> {
    REGISTRY
        .iter()
        .map(|e| {
            let cfg = RunConfig {
                n: n.unwrap_or(e.default_n),
                seed,
                streams,
                workers,
            };
            run_experiment(e, &cfg)
        })
        .collect()
}
