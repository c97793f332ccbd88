//! Inverse-transform samplers for random elements and random arcs.
//!
//! Every sampler draws from a [`StreamRng`] obtained from a [`StreamSeed`],
//! so a draw sequence is a pure function of `(master_seed, stream_index)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arcs::{arc_matrix_entries, Arc, ArcPair};
use crate::mobius::MobiusTransform;

pub type StreamRng = ChaCha8Rng;

/// Key of an independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl StreamSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        StreamSeed {
            master_seed,
            stream_index,
        }
    }

    /// ChaCha8 keyed by the master seed, on its own 64-bit stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// The three uniform angles behind one element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerDraw {
    pub arg_a: f64,
    pub arg_c: f64,
    /// `2 arcsin(1/|a|)`, uniform on `[0, π]`.
    pub arc_angle: f64,
}

impl SamplerDraw {
    pub fn abs_a(&self) -> f64 {
        1.0 / (0.5 * self.arc_angle).sin()
    }

    pub fn transform(&self) -> MobiusTransform {
        let half = 0.5 * self.arc_angle;
        let (s, c) = half.sin_cos();
        let a = Complex64::from_polar(1.0 / s, self.arg_a);
        let cc = Complex64::from_polar(c / s, self.arg_c);
        MobiusTransform::normalized(a, cc)
    }
}

/// `ζ` and `w` of `z ↦ ζ²(z − w)/(1 − w̄z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskParametrization {
    pub zeta: Complex64,
    pub w: Complex64,
}

impl DiskParametrization {
    pub fn transform(&self) -> MobiusTransform {
        MobiusTransform::from_disk_form(self.zeta, self.w).expect("|w| < 1 by construction")
    }
}

/// Uniform on `(0, 1)`: the `[0, 1)` generator output with 0 resampled.
fn open_unit(rng: &mut StreamRng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn angle(rng: &mut StreamRng) -> f64 {
    TAU * rng.random::<f64>()
}

/// Map three uniforms on `[0, 1]` to an element: `arg a = 2πu₁`,
/// `arg c = 2πu₂`, `|a| = 1/sin(u₃π/2)`. `u₃ = 0` has no finite image.
pub fn mobius_from_uniforms(u1: f64, u2: f64, u3: f64) -> Option<MobiusTransform> {
    if !(u3 > 0.0 && u3 <= 1.0) {
        return None;
    }
    Some(
        SamplerDraw {
            arg_a: TAU * u1,
            arg_c: TAU * u2,
            arc_angle: PI * u3,
        }
        .transform(),
    )
}

pub fn sample_draw(rng: &mut StreamRng) -> SamplerDraw {
    let arg_a = angle(rng);
    let arg_c = angle(rng);
    let arc_angle = PI * open_unit(rng);
    SamplerDraw {
        arg_a,
        arg_c,
        arc_angle,
    }
}

pub fn sample_mobius(rng: &mut StreamRng) -> MobiusTransform {
    sample_draw(rng).transform()
}

/// `ζ` and `w/|w|` uniform, `|w| = cos(vπ/2)` with `v ∈ (0, 1)`.
pub fn sample_mobius_disk_form(rng: &mut StreamRng) -> DiskParametrization {
    let zeta = Complex64::from_polar(1.0, angle(rng));
    let dir = angle(rng);
    let r = (FRAC_PI_2 * open_unit(rng)).cos();
    DiskParametrization {
        zeta,
        w: Complex64::from_polar(r, dir),
    }
}

/// Rejection sampler conditioned on `β > 0`; also returns the number of
/// candidate draws consumed.
pub fn sample_hyperbolic_counted(rng: &mut StreamRng) -> (MobiusTransform, u32) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let f = sample_mobius(rng);
        if f.beta() > 0.0 {
            return (f, attempts);
        }
    }
}

pub fn sample_hyperbolic(rng: &mut StreamRng) -> MobiusTransform {
    sample_hyperbolic_counted(rng).0
}

/// Parabolic element built from two adjacent arcs of common length
/// `ℓ ∈_u (0, π)` starting at a uniform midpoint. Returns the element and
/// the `a` entry before sign canonicalization.
pub fn sample_parabolic_raw(rng: &mut StreamRng) -> (MobiusTransform, Complex64) {
    loop {
        let m1 = Complex64::from_polar(1.0, angle(rng));
        let len = PI * open_unit(rng);
        let m2 = m1 * Complex64::from_polar(1.0, len);
        let pair = ArcPair {
            first: Arc::from_unit(m1, len),
            second: Arc::from_unit(m2, len),
            common_length: len,
        };
        if let Ok((a, c)) = arc_matrix_entries(&pair) {
            if a.re.is_finite() && a.im.is_finite() {
                return (MobiusTransform::normalized(a, c), a);
            }
        }
    }
}

pub fn sample_parabolic(rng: &mut StreamRng) -> MobiusTransform {
    sample_parabolic_raw(rng).0
}

/// Length law of a random arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Support {
    /// `ℓ ∈_u [0, π]`, the law of isometric arcs.
    HalfTurn,
    /// `ℓ ∈_u [0, 2π]`.
    FullTurn,
}

impl Support {
    pub fn max_length(self) -> f64 {
        match self {
            Support::HalfTurn => PI,
            Support::FullTurn => TAU,
        }
    }
}

pub fn sample_arc(rng: &mut StreamRng, support: Support) -> Arc {
    let mid = Complex64::from_polar(1.0, angle(rng));
    let len = support.max_length() * rng.random::<f64>();
    Arc::from_unit(mid, len)
}

/// Uniform point on the unit circle.
pub fn sample_unit(rng: &mut StreamRng) -> Complex64 {
    Complex64::from_polar(1.0, angle(rng))
}
