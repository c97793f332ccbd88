//! Arcs on the unit circle and the correspondence between pairs of equal
//! arcs and cyclic groups generated by a single transformation.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::mobius::{MobiusTransform, COINCIDENT_TOL};

/// Closed arc of the unit circle given by its midpoint and angular length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcRecord", into = "ArcRecord")]
pub struct Arc {
    midpoint: Complex64,
    length: f64,
}

/// JSON form `{"mid_arg": radians, "len": radians}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcRecord {
    pub mid_arg: f64,
    pub len: f64,
}

impl From<Arc> for ArcRecord {
    fn from(a: Arc) -> Self {
        ArcRecord {
            mid_arg: a.mid_arg(),
            len: a.length,
        }
    }
}

impl TryFrom<ArcRecord> for Arc {
    type Error = Error;

    fn try_from(r: ArcRecord) -> Result<Self> {
        Arc::at_angle(r.mid_arg, r.len)
    }
}

impl Arc {
    /// `midpoint` must be within 1e-9 of the unit circle; it is projected onto it.
    pub fn new(midpoint: Complex64, length: f64) -> Result<Self> {
        let r = midpoint.norm();
        if !r.is_finite() || (r - 1.0).abs() > 1e-9 {
            return Err(domain("arc midpoint modulus", r));
        }
        check_length(length)?;
        Ok(Arc {
            midpoint: midpoint / r,
            length,
        })
    }

    pub fn at_angle(mid_arg: f64, length: f64) -> Result<Self> {
        if !mid_arg.is_finite() {
            return Err(domain("arc midpoint argument", mid_arg));
        }
        check_length(length)?;
        Ok(Arc {
            midpoint: Complex64::from_polar(1.0, mid_arg),
            length,
        })
    }

    /// Caller guarantees a unit midpoint and a length in `[0, 2π]`.
    pub(crate) fn from_unit(midpoint: Complex64, length: f64) -> Self {
        debug_assert!((midpoint.norm() - 1.0).abs() < 1e-9);
        Arc { midpoint, length }
    }

    pub fn midpoint(&self) -> Complex64 {
        self.midpoint
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Argument of the midpoint in `(−π, π]`.
    pub fn mid_arg(&self) -> f64 {
        self.midpoint.arg()
    }

    pub fn rotated(&self, angle: f64) -> Arc {
        Arc {
            midpoint: self.midpoint * Complex64::from_polar(1.0, angle),
            length: self.length,
        }
    }

    pub fn with_length(&self, length: f64) -> Result<Arc> {
        check_length(length)?;
        Ok(Arc {
            midpoint: self.midpoint,
            length,
        })
    }

    /// Angular distance between midpoints, in `[0, π]`.
    pub fn gap(&self, other: &Arc) -> f64 {
        (self.midpoint * other.midpoint.conj()).arg().abs()
    }

    /// `gap − (ℓ₁ + ℓ₂)/2`; positive exactly when the arcs are disjoint.
    pub fn separation(&self, other: &Arc) -> f64 {
        self.gap(other) - 0.5 * (self.length + other.length)
    }
}

fn check_length(length: f64) -> Result<()> {
    if !(0.0..=TAU).contains(&length) {
        return Err(domain("arc length", length));
    }
    Ok(())
}

/// Two equal-length arcs; the order of `first` and `second` selects between a
/// generator and its inverse, but equality treats the pair as a set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcPair {
    pub first: Arc,
    pub second: Arc,
    pub common_length: f64,
}

impl ArcPair {
    pub fn new(first: Arc, second: Arc) -> Result<Self> {
        if (first.length - second.length).abs() > 1e-12 {
            return Err(domain("arc pair length mismatch", first.length - second.length));
        }
        Ok(ArcPair {
            first,
            second,
            common_length: first.length,
        })
    }

    pub fn from_midpoints(m1: Complex64, m2: Complex64, length: f64) -> Result<Self> {
        Self::new(Arc::new(m1, length)?, Arc::new(m2, length)?)
    }

    fn sorted(&self) -> (Arc, Arc) {
        let mut v = [self.first, self.second];
        v.sort_by(|x, y| x.mid_arg().partial_cmp(&y.mid_arg()).unwrap_or(Ordering::Equal));
        (v[0], v[1])
    }

    /// Set equality up to `tol` on midpoints and lengths.
    pub fn approx_eq(&self, other: &ArcPair, tol: f64) -> bool {
        let same = |x: &Arc, y: &Arc| (x.midpoint - y.midpoint).norm() <= tol && (x.length - y.length).abs() <= tol;
        (same(&self.first, &other.first) && same(&self.second, &other.second))
            || (same(&self.first, &other.second) && same(&self.second, &other.first))
    }

    pub fn arcs(&self) -> [Arc; 2] {
        [self.first, self.second]
    }
}

impl PartialEq for ArcPair {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted() && self.common_length == other.common_length
    }
}

/// Closed-arc disjointness: tangent arcs count as meeting.
pub fn arcs_disjoint(alpha: &Arc, beta: &Arc) -> bool {
    alpha.separation(beta) > 0.0
}

pub fn all_disjoint(arcs: &[Arc]) -> bool {
    arcs.iter()
        .enumerate()
        .all(|(i, x)| arcs[i + 1..].iter().all(|y| arcs_disjoint(x, y)))
}

/// Matrix entries `(a, c)` for the arc pair, before sign canonicalization.
///
/// `a = i√(m̄₁m₂)·cosec(ℓ/2)` and `c = −a·m₁·cos(ℓ/2)`, so that the pole
/// side isometric arc is centred on `m₁` and its image on `m₂`. Adjacent
/// arcs give `a = −1 + i cot(ℓ/2)`.
pub fn arc_matrix_entries(pair: &ArcPair) -> Result<(Complex64, Complex64)> {
    let len = pair.common_length;
    if !(len > 0.0 && len < TAU) {
        return Err(Error::DegenerateLength(len));
    }
    let (m1, m2) = (pair.first.midpoint, pair.second.midpoint);
    if (m1 - m2).norm() < COINCIDENT_TOL {
        return Err(Error::CoincidentMidpoints);
    }
    let (s, c) = (len / 2.0).sin_cos();
    let a = Complex64::new(0.0, 1.0) * (m1.conj() * m2).sqrt() / s;
    Ok((a, -a * m1 * c))
}

/// The generator whose isometric arcs are `pair.first` (pole side) and
/// `pair.second`. Swapping the arcs gives the inverse.
pub fn arcs_to_mobius(pair: &ArcPair) -> Result<MobiusTransform> {
    let (a, c) = arc_matrix_entries(pair)?;
    MobiusTransform::new(a, c)
}

pub fn mobius_to_arcs(f: &MobiusTransform) -> Result<ArcPair> {
    let iso = f.isometric_arcs().map_err(|_| Error::NoIsometricCircle)?;
    Ok(ArcPair {
        first: iso.plus_arc,
        second: iso.minus_arc,
        common_length: iso.plus_arc.length(),
    })
}

/// Length of the arc swept by two adjacent arcs of length `len`, capped at 2π.
pub fn union_length(len: f64) -> f64 {
    (2.0 * len).min(TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::TransformKind;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn arc(mid: f64, len: f64) -> Arc {
        Arc::at_angle(mid, len).unwrap()
    }

    #[test]
    fn disjoint_examples() {
        assert!(arcs_disjoint(&arc(0.0, FRAC_PI_2), &arc(PI, FRAC_PI_2)));
        assert!(!arcs_disjoint(&arc(0.0, PI), &arc(FRAC_PI_2, PI)));
        // tangent
        assert!(!arcs_disjoint(&arc(0.0, FRAC_PI_2), &arc(FRAC_PI_2, FRAC_PI_2)));
    }

    #[test]
    fn all_disjoint_examples() {
        let quarter: Vec<Arc> = (0..4).map(|k| arc(k as f64 * FRAC_PI_2, FRAC_PI_4)).collect();
        assert!(all_disjoint(&quarter));
        let a = arc(1.0, 0.3);
        assert!(!all_disjoint(&[arc(-2.0, 0.1), a, a]));
        assert!(all_disjoint(&[]));
    }

    #[test]
    fn arc_validation() {
        assert!(Arc::new(Complex64::new(2.0, 0.0), 1.0).is_err());
        assert!(Arc::at_angle(0.0, 7.0).is_err());
        assert!(Arc::at_angle(0.0, -0.1).is_err());
    }

    #[test]
    fn arcs_to_mobius_example() {
        let pair = ArcPair::from_midpoints(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), FRAC_PI_2).unwrap();
        let f = arcs_to_mobius(&pair).unwrap();
        assert!((f.a() - Complex64::new(SQRT_2, 0.0)).norm() < 1e-14);
        assert!((f.c().norm() - 1.0).abs() < 1e-14);
        let back = mobius_to_arcs(&f).unwrap();
        assert!(back.approx_eq(&pair, 1e-12));
        // pole-side arc is the first one
        assert!((back.first.midpoint() - pair.first.midpoint()).norm() < 1e-12);
    }

    #[test]
    fn adjacent_arcs_give_parabolic() {
        for &len in &[0.3, 1.0, 2.0, 3.0] {
            let m1 = Complex64::from_polar(1.0, 0.7);
            let m2 = m1 * Complex64::from_polar(1.0, len);
            let pair = ArcPair::from_midpoints(m1, m2, len).unwrap();
            let (a, _) = arc_matrix_entries(&pair).unwrap();
            assert!((a.re + 1.0).abs() < 1e-12);
            assert!((a.im - 1.0 / (len / 2.0).tan()).abs() < 1e-9);
            let f = arcs_to_mobius(&pair).unwrap();
            assert_eq!(f.kind(), TransformKind::Parabolic);
        }
    }

    #[test]
    fn overlapping_arcs_give_elliptic() {
        let pair = ArcPair::new(arc(0.0, 2.0), arc(1.0, 2.0)).unwrap();
        let f = arcs_to_mobius(&pair).unwrap();
        let b = f.beta();
        assert!((-4.0..0.0).contains(&b), "beta = {b}");
        assert!(mobius_to_arcs(&f).unwrap().approx_eq(&pair, 1e-12));
    }

    #[test]
    fn arcs_to_mobius_errors() {
        let m = Complex64::new(1.0, 0.0);
        assert_eq!(
            arcs_to_mobius(&ArcPair::from_midpoints(m, -m, 0.0).unwrap()),
            Err(Error::DegenerateLength(0.0))
        );
        assert_eq!(
            arcs_to_mobius(&ArcPair::from_midpoints(m, -m, TAU).unwrap()),
            Err(Error::DegenerateLength(TAU))
        );
        assert_eq!(
            arcs_to_mobius(&ArcPair::from_midpoints(m, m, 1.0).unwrap()),
            Err(Error::CoincidentMidpoints)
        );
    }

    #[test]
    fn mobius_to_arcs_examples() {
        let f = MobiusTransform::new(Complex64::new(SQRT_2, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
        let pair = mobius_to_arcs(&f).unwrap();
        let expect = ArcPair::new(arc(0.0, FRAC_PI_2), arc(PI, FRAC_PI_2)).unwrap();
        assert!(pair.approx_eq(&expect, 1e-12));

        let p = MobiusTransform::new(Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0)).unwrap();
        let pair = mobius_to_arcs(&p).unwrap();
        assert!(pair.first.separation(&pair.second).abs() < 1e-12);

        assert_eq!(
            mobius_to_arcs(&MobiusTransform::rotation(0.5)),
            Err(Error::NoIsometricCircle)
        );
    }

    #[test]
    fn pair_equality_is_unordered() {
        let p = ArcPair::new(arc(0.5, 1.0), arc(2.0, 1.0)).unwrap();
        let q = ArcPair::new(arc(2.0, 1.0), arc(0.5, 1.0)).unwrap();
        assert_eq!(p, q);
        let f = arcs_to_mobius(&p).unwrap();
        let g = arcs_to_mobius(&q).unwrap();
        assert!(g.approx_eq(&f.inverse(), 1e-12));
    }

    #[test]
    fn record_round_trip() {
        let a = arc(-2.5, 1.25);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("mid_arg") && s.contains("len"));
        let b: Arc = serde_json::from_str(&s).unwrap();
        assert!((a.midpoint() - b.midpoint()).norm() < 1e-15);
        assert!(serde_json::from_str::<Arc>(r#"{"mid_arg":0.0,"len":9.0}"#).is_err());
    }
}
