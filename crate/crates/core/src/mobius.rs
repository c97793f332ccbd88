//! Circle-preserving Möbius transformations of the unit disk.
//!
//! A transformation is stored as the pair of matrix entries `(a, c)` of
//!
//! ```text
//!     [ a   c ]
//!     [ c̄   ā ]      |a|² − |c|² = 1,      z ↦ (az + c) / (c̄z + ā)
//! ```
//!
//! Matrices are kept in a canonical sign (`Re a ≥ 0`, ties broken by
//! `Im a ≥ 0`) since `(a, c)` and `(−a, −c)` act identically.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arcs::Arc;
use crate::error::{domain, Error, Result};

/// Admissible determinant residual in [`MobiusTransform::new`], relative to `max(1, |a|²)`.
pub const BUILD_TOL: f64 = 1e-6;
/// |β| at or below which a non-identity element is classified parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Entrywise tolerance for recognising the identity.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Two points closer than this are treated as coincident.
pub const COINCIDENT_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransformRecord", into = "TransformRecord")]
pub struct MobiusTransform {
    a: Complex64,
    c: Complex64,
}

/// Flat JSON form `{"a_re", "a_im", "c_re", "c_im"}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransformRecord {
    pub a_re: f64,
    pub a_im: f64,
    pub c_re: f64,
    pub c_im: f64,
}

impl From<MobiusTransform> for TransformRecord {
    fn from(f: MobiusTransform) -> Self {
        TransformRecord {
            a_re: f.a.re,
            a_im: f.a.im,
            c_re: f.c.re,
            c_im: f.c.im,
        }
    }
}

impl TryFrom<TransformRecord> for MobiusTransform {
    type Error = Error;

    fn try_from(r: TransformRecord) -> Result<Self> {
        MobiusTransform::new(Complex64::new(r.a_re, r.a_im), Complex64::new(r.c_re, r.c_im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TransformKind::Identity => "identity",
            TransformKind::Elliptic => "elliptic",
            TransformKind::Parabolic => "parabolic",
            TransformKind::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub kind: TransformKind,
    /// `tr² − 4`.
    pub beta: f64,
    /// Translation length along the axis; zero unless hyperbolic.
    pub tau: f64,
    /// `|tr| = 2|Re a|`.
    pub trace_abs: f64,
}

/// Roots of `c̄z² + (ā − a)z − c = 0`.
///
/// For hyperbolic inputs both points lie on the unit circle and `z_plus` is
/// attracting. For elliptic inputs the points are inverse to each other in
/// the circle; for parabolic inputs they coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub z_plus: Complex64,
    pub z_minus: Complex64,
    pub attracting_is_plus: bool,
    pub kind: TransformKind,
}

/// Arcs of the unit circle lying inside the two isometric disks.
///
/// `plus_arc` belongs to `C₊ = {|c̄z + ā| = 1}` (centred at `−ā/c̄`, the pole of
/// `f`); `minus_arc` to `C₋ = f(C₊)`, centred at `a/c̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometricArcs {
    pub plus_arc: Arc,
    pub minus_arc: Arc,
}

/// Conjugacy invariants `(β(f), β(g), γ(f, g))` of a two-generator group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupParameters {
    pub beta_f: f64,
    pub beta_g: f64,
    pub gamma: f64,
}

/// Complex distance `δ + iθ` between two hyperbolic lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDistance {
    pub delta: f64,
    /// Crossing angle in `[0, π/2]`; zero for disjoint lines.
    pub theta: f64,
}

impl ComplexDistance {
    /// `sinh²(δ + iθ)`, which is real whenever `δ = 0` or `θ = 0`.
    pub fn sinh_sq(&self) -> f64 {
        let (sd, cd) = (self.delta.sinh(), self.delta.cosh());
        let (st, ct) = self.theta.sin_cos();
        sd * sd * ct * ct - cd * cd * st * st
    }

    pub fn crosses(&self) -> bool {
        self.theta > 0.0
    }
}

impl MobiusTransform {
    /// Builds a transformation from its matrix entries.
    ///
    /// The determinant `|a|² − |c|²` must equal 1 up to [`BUILD_TOL`]
    /// (relative to `max(1, |a|²)`); the entries are then rescaled onto the
    /// group and put in canonical sign.
    pub fn new(a: Complex64, c: Complex64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NotInGroup { residual: f64::NAN });
        }
        let residual = a.norm_sqr() - c.norm_sqr() - 1.0;
        if residual.abs() > BUILD_TOL * a.norm_sqr().max(1.0) {
            return Err(Error::NotInGroup { residual });
        }
        Ok(Self::normalized(a, c))
    }

    /// Rescales by `1/√det` and canonicalizes the sign. Entries already on the
    /// group to rounding are left untouched so that serialization round trips
    /// are exact.
    pub(crate) fn normalized(mut a: Complex64, mut c: Complex64) -> Self {
        let det = a.norm_sqr() - c.norm_sqr();
        if (det - 1.0).abs() > 4.0 * f64::EPSILON * a.norm_sqr().max(1.0) && det > 0.0 {
            let s = det.sqrt().recip();
            a *= s;
            c *= s;
        }
        Self::signed(a, c)
    }

    /// Canonical sign only. Products of group elements are already on the
    /// group up to rounding, and rescaling by a `det` computed with
    /// cancellation of order `ε|a|²` would only add error.
    fn signed(a: Complex64, c: Complex64) -> Self {
        if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
            MobiusTransform { a: -a, c: -c }
        } else {
            MobiusTransform { a, c }
        }
    }

    pub fn identity() -> Self {
        MobiusTransform {
            a: Complex64::new(1.0, 0.0),
            c: Complex64::new(0.0, 0.0),
        }
    }

    /// The rotation `z ↦ e^{iφ} z`.
    pub fn rotation(angle: f64) -> Self {
        Self::normalized(Complex64::from_polar(1.0, angle / 2.0), Complex64::new(0.0, 0.0))
    }

    /// Member `(1 + it, t)` of the parabolic subgroup fixing `i`.
    pub fn parabolic_family(t: f64) -> Self {
        Self::normalized(Complex64::new(1.0, t), Complex64::new(t, 0.0))
    }

    /// Disk automorphism `z ↦ ζ² (z − w)/(1 − w̄z)`.
    pub fn from_disk_form(zeta: Complex64, w: Complex64) -> Result<Self> {
        let r2 = w.norm_sqr();
        if r2 >= 1.0 {
            return Err(domain("from_disk_form", w.norm()));
        }
        let s = (1.0 - r2).sqrt().recip();
        let zeta = zeta / zeta.norm();
        Ok(Self::normalized(zeta * s, -zeta * w * s))
    }

    /// Hyperbolic element with attracting fixed point `attracting`, repelling
    /// fixed point `repelling` (both on the unit circle) and trace `trace > 2`.
    pub fn hyperbolic_fixing(attracting: Complex64, repelling: Complex64, trace: f64) -> Result<Self> {
        if trace.is_nan() || trace <= 2.0 {
            return Err(domain("hyperbolic_fixing", trace));
        }
        if (attracting - repelling).norm() < COINCIDENT_TOL {
            return Err(Error::DegeneratePoints);
        }
        let re = trace / 2.0;
        let s = ((re - 1.0) * (re + 1.0)).sqrt();
        // z₊ − z₋ = 2s/c̄ and z₊ + z₋ = 2i Im(a)/c̄
        let cbar = 2.0 * s / (attracting - repelling);
        let im = ((attracting + repelling) * cbar / (2.0 * I)).re;
        Self::new(Complex64::new(re, im), cbar.conj())
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Trace of the canonical matrix, `2 Re a ≥ 0`.
    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.c], [self.c.conj(), self.a.conj()]]
    }

    /// `|a|² − |c|² − 1`.
    pub fn det_residual(&self) -> f64 {
        self.a.norm_sqr() - self.c.norm_sqr() - 1.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusTransform) -> MobiusTransform {
        let (a, c) = (self.a, self.c);
        let (b, d) = (other.a, other.c);
        Self::signed(a * b + c * d.conj(), a * d + c * b.conj())
    }

    pub fn inverse(&self) -> MobiusTransform {
        Self::signed(self.a.conj(), -self.c)
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &MobiusTransform) -> MobiusTransform {
        h.compose(self).compose(&h.inverse())
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c.conj() * z + self.a.conj();
        if den.norm() <= f64::MIN_POSITIVE {
            return Err(Error::PoleAtInput);
        }
        Ok((self.a * z + self.c) / den)
    }

    /// `|f'(z)| = 1/|c̄z + ā|²`.
    pub fn derivative_abs(&self, z: Complex64) -> f64 {
        (self.c.conj() * z + self.a.conj()).norm_sqr().recip()
    }

    pub fn is_identity(&self) -> bool {
        (self.a - 1.0).norm() < IDENTITY_TOL && self.c.norm() < IDENTITY_TOL
    }

    /// `β(f) = tr² − 4`.
    pub fn beta(&self) -> f64 {
        let t = self.a.re.abs();
        4.0 * (t - 1.0) * (t + 1.0)
    }

    pub fn classify(&self) -> ClassificationResult {
        let beta = self.beta();
        let trace_abs = 2.0 * self.a.re.abs();
        let kind = if self.is_identity() {
            TransformKind::Identity
        } else if beta.abs() <= PARABOLIC_TOL {
            TransformKind::Parabolic
        } else if beta > 0.0 {
            TransformKind::Hyperbolic
        } else {
            TransformKind::Elliptic
        };
        let tau = match kind {
            TransformKind::Hyperbolic => translation_length(beta),
            _ => 0.0,
        };
        ClassificationResult {
            kind,
            beta,
            tau,
            trace_abs,
        }
    }

    pub fn kind(&self) -> TransformKind {
        self.classify().kind
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind() == TransformKind::Hyperbolic
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        if self.c.norm() < COINCIDENT_TOL {
            return Err(Error::RotationCenterCase);
        }
        let kind = self.kind();
        let re = self.a.re;
        // Principal root of Re(a)² − 1: imaginary in the elliptic case.
        let disc = (re - 1.0) * (re + 1.0);
        let root = if disc >= 0.0 {
            Complex64::new(disc.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-disc).sqrt())
        };
        let mid = Complex64::new(0.0, self.a.im);
        let cbar = self.c.conj();
        let z_plus = (mid + root) / cbar;
        let z_minus = (mid - root) / cbar;
        let attracting_is_plus = self.derivative_abs(z_plus) < self.derivative_abs(z_minus);
        Ok(FixedPoints {
            z_plus,
            z_minus,
            attracting_is_plus,
            kind,
        })
    }

    pub fn isometric_arcs(&self) -> Result<IsometricArcs> {
        if self.c.norm() < COINCIDENT_TOL {
            return Err(Error::NoIsometricCircle);
        }
        let length = 2.0 * (1.0 / self.a.norm()).min(1.0).asin();
        // −ā/c̄ and a/c̄ point along −āc and ac respectively.
        let plus = -self.a.conj() * self.c;
        let minus = self.a * self.c;
        Ok(IsometricArcs {
            plus_arc: Arc::from_unit(plus / plus.norm(), length),
            minus_arc: Arc::from_unit(minus / minus.norm(), length),
        })
    }

    /// Entrywise distance to `other` modulo the sign ambiguity.
    pub fn distance(&self, other: &MobiusTransform) -> f64 {
        let same = (self.a - other.a).norm().max((self.c - other.c).norm());
        let flipped = (self.a + other.a).norm().max((self.c + other.c).norm());
        same.min(flipped)
    }

    pub fn approx_eq(&self, other: &MobiusTransform, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl Default for MobiusTransform {
    fn default() -> Self {
        Self::identity()
    }
}

/// `τ = arccosh(1 + β/2)`, written as `2 asinh(√β / 2)` to stay accurate for small β.
pub fn translation_length(beta: f64) -> f64 {
    2.0 * (beta.max(0.0).sqrt() / 2.0).asinh()
}

#[derive(Clone, Copy)]
struct Mat2([[Complex64; 2]; 2]);

impl Mat2 {
    fn of(f: &MobiusTransform) -> Self {
        Mat2(f.matrix())
    }

    /// Inverse of a unit-determinant matrix.
    fn inv(&self) -> Self {
        let [[p, q], [r, s]] = self.0;
        Mat2([[s, -q], [-r, p]])
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        let [[p, q], [r, s]] = self.0;
        let [[e, f], [g, h]] = o.0;
        Mat2([[p * e + q * g, p * f + q * h], [r * e + s * g, r * f + s * h]])
    }

    fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }
}

/// `γ(f, g) = tr[f, g] − 2`, evaluated as `−det(FG − GF)`.
///
/// For `f = (a, c)`, `g = (b, d)` this is `4|d Im a − c Im b|² − 4 Im(c d̄)²`,
/// which keeps full relative accuracy where the product `f g f⁻¹ g⁻¹`
/// cancels badly (large `|a|`).
pub fn gamma(f: &MobiusTransform, g: &MobiusTransform) -> f64 {
    let (a, c, b, d) = (f.a, f.c, g.a, g.c);
    let off = d * a.im - c * b.im;
    let diag = (c * d.conj()).im;
    4.0 * (off.norm_sqr() - diag * diag)
}

/// `tr(f g f⁻¹ g⁻¹) − 2` by explicit matrix products.
pub fn gamma_by_products(f: &MobiusTransform, g: &MobiusTransform) -> f64 {
    let (mf, mg) = (Mat2::of(f), Mat2::of(g));
    let comm = mf.mul(&mg).mul(&mf.inv()).mul(&mg.inv());
    comm.trace().re - 2.0
}

pub fn beta(f: &MobiusTransform) -> f64 {
    f.beta()
}

pub fn group_parameters(f: &MobiusTransform, g: &MobiusTransform) -> GroupParameters {
    GroupParameters {
        beta_f: f.beta(),
        beta_g: g.beta(),
        gamma: gamma(f, g),
    }
}

/// `[z1, z2, z3, z4] = (z1 − z3)(z2 − z4) / ((z1 − z2)(z3 − z4))`.
pub fn cross_ratio(z1: Complex64, z2: Complex64, z3: Complex64, z4: Complex64) -> Result<Complex64> {
    let d12 = z1 - z2;
    let d34 = z3 - z4;
    if d12.norm() < COINCIDENT_TOL || d34.norm() < COINCIDENT_TOL {
        return Err(Error::DegeneratePoints);
    }
    Ok((z1 - z3) * (z2 - z4) / (d12 * d34))
}

fn close(z: Complex64, w: Complex64) -> bool {
    (z - w).norm() < 1e-10
}

/// Complex distance between the lines with endpoints `(z1, z2)` and `(w1, w2)`
/// on the unit circle, solving `sinh²(½(δ + iθ)) · [z1, w1, z2, w2] = −1`.
pub fn complex_distance(line1: (Complex64, Complex64), line2: (Complex64, Complex64)) -> Result<ComplexDistance> {
    let (z1, z2) = line1;
    let (w1, w2) = line2;
    for p in [z1, z2, w1, w2] {
        if (p.norm() - 1.0).abs() > 1e-9 {
            return Err(domain("complex_distance", p.norm()));
        }
    }
    if close(z1, z2) || close(w1, w2) {
        return Err(Error::DegeneratePoints);
    }
    let identical = (close(z1, w1) && close(z2, w2)) || (close(z1, w2) && close(z2, w1));
    if identical {
        return Ok(ComplexDistance { delta: 0.0, theta: 0.0 });
    }
    if close(z1, w1) || close(z1, w2) || close(z2, w1) || close(z2, w2) {
        return Err(Error::SharedEndpoint);
    }
    let x = cross_ratio(z1, w1, z2, w2)?.re;
    let cd = if x > 1.0 {
        // sin²(θ/2) = 1/x
        let mut theta = 2.0 * (1.0 / x.sqrt()).min(1.0).asin();
        if theta > FRAC_PI_2 {
            theta = std::f64::consts::PI - theta;
        }
        ComplexDistance { delta: 0.0, theta }
    } else if x < 0.0 {
        // sinh²(δ/2) = −1/x
        ComplexDistance {
            delta: 2.0 * (-1.0 / x).sqrt().asinh(),
            theta: 0.0,
        }
    } else {
        // 0 < x < 1: δ + iπ branch, cosh²(δ/2) = 1/x
        ComplexDistance {
            delta: 2.0 * (1.0 / x.sqrt()).acosh(),
            theta: 0.0,
        }
    };
    Ok(cd)
}

fn require_hyperbolic(f: &MobiusTransform) -> Result<()> {
    if f.is_hyperbolic() {
        Ok(())
    } else {
        Err(Error::NotHyperbolic { beta: f.beta() })
    }
}

/// Whether the axes of two hyperbolic elements cross, decided by `γ(f, g) < 0`.
pub fn axes_cross(f: &MobiusTransform, g: &MobiusTransform) -> Result<bool> {
    require_hyperbolic(f)?;
    require_hyperbolic(g)?;
    Ok(gamma(f, g) < 0.0)
}

/// `[z₊, w₊, z₋, w₋]` for the fixed points of hyperbolic `f` and `g`, in the
/// closed form `2√(Re(a)² − 1)√(Re(a′)² − 1) / (Re[U V̄] − Re[c c̄′])` with
/// `U = i Im a + √(Re(a)² − 1)` and `V` likewise for `g = (a′, c′)`.
pub fn fixed_point_cross_ratio(f: &MobiusTransform, g: &MobiusTransform) -> Result<f64> {
    require_hyperbolic(f)?;
    require_hyperbolic(g)?;
    let root = |t: &MobiusTransform| {
        let re = t.a.re;
        ((re - 1.0) * (re + 1.0)).sqrt()
    };
    let (sf, sg) = (root(f), root(g));
    let u = Complex64::new(sf, f.a.im);
    let v = Complex64::new(sg, g.a.im);
    let den = (u * v.conj()).re - (f.c * g.c.conj()).re;
    let num = 2.0 * sf * sg;
    if den.abs() <= 1e-12 * (f.c.norm() * g.c.norm()).max(1.0) {
        return Err(Error::DegeneratePoints);
    }
    Ok(num / den)
}
