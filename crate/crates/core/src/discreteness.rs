//! Certificates and refutations of discreteness for two-generator groups.

use serde::{Deserialize, Serialize};

use crate::arcs::Arc;
use crate::error::{Error, Result};
use crate::mobius::{beta, gamma, MobiusTransform, TransformKind};

/// Two isometric arcs whose separation is at most this are treated as tangent.
pub const TANGENCY_TOL: f64 = 1e-9;
/// Fixed points closer than this are reported as shared.
pub const SHARED_FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    DiscreteFreeByPingPong,
    DiscreteByPingPongWithTangency,
    NotDiscreteByJorgensen,
    /// Up to the null set of finite-order elliptic commutator configurations.
    AlmostSurelyNotDiscrete,
    Inconclusive,
}

impl Status {
    pub fn is_discrete(self) -> bool {
        matches!(
            self,
            Status::DiscreteFreeByPingPong | Status::DiscreteByPingPongWithTangency
        )
    }
}

/// Which isometric arc of which generator: `(generator, is_plus_arc)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcLabel {
    pub generator: usize,
    pub plus: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Smallest separation over all arc pairs (positive, or zero at allowed tangencies).
    ArcSeparation {
        min_separation: f64,
        tangencies: usize,
    },
    /// First pair of isometric arcs found to meet.
    ArcOverlap {
        first: ArcLabel,
        second: ArcLabel,
        separation: f64,
    },
    /// `|β(f)| + |γ(f, g)|` below 1, with `f` the generator at `index`.
    Jorgensen {
        value: f64,
        index: usize,
    },
    GammaInterval {
        gamma: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Some two generators share a fixed point, so the group is elementary
    /// and a Jørgensen failure does not refute discreteness.
    pub shared_fixed_point: bool,
}

fn labelled_arcs(generators: &[MobiusTransform]) -> Result<Vec<(ArcLabel, Arc)>> {
    let mut out = Vec::with_capacity(2 * generators.len());
    for (i, g) in generators.iter().enumerate() {
        let iso = g.isometric_arcs()?;
        out.push((
            ArcLabel {
                generator: i,
                plus: true,
            },
            iso.plus_arc,
        ));
        out.push((
            ArcLabel {
                generator: i,
                plus: false,
            },
            iso.minus_arc,
        ));
    }
    Ok(out)
}

/// Ping-pong on isometric arcs: all `2n` arcs pairwise disjoint certifies a
/// discrete free group. The two arcs of one parabolic generator may touch.
pub fn ping_pong(generators: &[MobiusTransform]) -> Result<Verdict> {
    let arcs = labelled_arcs(generators)?;
    let mut min_sep = f64::INFINITY;
    let mut tangencies = 0;
    for (i, (la, a)) in arcs.iter().enumerate() {
        for (lb, b) in &arcs[i + 1..] {
            let sep = a.separation(b);
            let own = la.generator == lb.generator;
            if own && sep.abs() <= TANGENCY_TOL && generators[la.generator].kind() == TransformKind::Parabolic {
                tangencies += 1;
                min_sep = min_sep.min(sep.max(0.0));
                continue;
            }
            if sep > 0.0 {
                min_sep = min_sep.min(sep);
                continue;
            }
            return Ok(Verdict {
                status: Status::Inconclusive,
                witness: Some(Witness::ArcOverlap {
                    first: *la,
                    second: *lb,
                    separation: sep,
                }),
                shared_fixed_point: shares_fixed_point(generators),
            });
        }
    }
    let status = if tangencies > 0 {
        Status::DiscreteByPingPongWithTangency
    } else {
        Status::DiscreteFreeByPingPong
    };
    Ok(Verdict {
        status,
        witness: Some(Witness::ArcSeparation {
            min_separation: min_sep,
            tangencies,
        }),
        shared_fixed_point: shares_fixed_point(generators),
    })
}

/// `|β(f)| + |γ(f, g)|`.
pub fn jorgensen_value(f: &MobiusTransform, g: &MobiusTransform) -> f64 {
    beta(f).abs() + gamma(f, g).abs()
}

/// Jørgensen's inequality tested with either generator in the first slot.
pub fn jorgensen_fails(f: &MobiusTransform, g: &MobiusTransform) -> bool {
    jorgensen_value(f, g) < 1.0 || jorgensen_value(g, f) < 1.0
}

/// `γ(f, g) ∈ [−4, 0]`.
pub fn gamma_interval_flag(f: &MobiusTransform, g: &MobiusTransform) -> bool {
    (-4.0..=0.0).contains(&gamma(f, g))
}

fn fixed_point_set(f: &MobiusTransform) -> Vec<num_complex::Complex64> {
    match f.fixed_points() {
        Ok(fp) => vec![fp.z_plus, fp.z_minus],
        // c = 0: a rotation about 0 (or the identity) fixes 0 and ∞.
        Err(_) => vec![num_complex::Complex64::new(0.0, 0.0)],
    }
}

pub fn shares_fixed_point(generators: &[MobiusTransform]) -> bool {
    let sets: Vec<_> = generators.iter().map(fixed_point_set).collect();
    sets.iter().enumerate().any(|(i, a)| {
        sets[i + 1..].iter().any(|b| {
            a.iter()
                .any(|p| b.iter().any(|q| (p - q).norm() < SHARED_FIXED_POINT_TOL))
        })
    })
}

/// Priority: ping-pong certificate, then Jørgensen refutation, then the
/// γ-interval flag.
pub fn combined_verdict(f: &MobiusTransform, g: &MobiusTransform) -> Verdict {
    let gens = [*f, *g];
    let shared = shares_fixed_point(&gens);
    if let Ok(v) = ping_pong(&gens) {
        if v.status.is_discrete() {
            return v;
        }
    }
    let (vf, vg) = (jorgensen_value(f, g), jorgensen_value(g, f));
    if vf < 1.0 || vg < 1.0 {
        let (value, index) = if vf <= vg { (vf, 0) } else { (vg, 1) };
        return Verdict {
            status: Status::NotDiscreteByJorgensen,
            witness: Some(Witness::Jorgensen { value, index }),
            shared_fixed_point: shared,
        };
    }
    let gm = gamma(f, g);
    if (-4.0..=0.0).contains(&gm) {
        return Verdict {
            status: Status::AlmostSurelyNotDiscrete,
            witness: Some(Witness::GammaInterval { gamma: gm }),
            shared_fixed_point: shared,
        };
    }
    Verdict {
        status: Status::Inconclusive,
        witness: None,
        shared_fixed_point: shared,
    }
}

/// Verdict for an arbitrary generator list: ping-pong, and for two
/// generators the full [`combined_verdict`].
pub fn verdict_for(generators: &[MobiusTransform]) -> Result<Verdict> {
    match generators {
        [] => Err(Error::Parse("no generators".into())),
        [f, g] => Ok(combined_verdict(f, g)),
        _ => ping_pong(generators),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{arcs_to_mobius, ArcPair};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

    fn from_arcs(m1: f64, m2: f64, len: f64) -> MobiusTransform {
        let p = ArcPair::new(Arc::at_angle(m1, len).unwrap(), Arc::at_angle(m2, len).unwrap()).unwrap();
        arcs_to_mobius(&p).unwrap()
    }

    #[test]
    fn eighth_roots_certify() {
        let f = from_arcs(0.0, 4.0 * FRAC_PI_4, FRAC_PI_8);
        let g = from_arcs(2.0 * FRAC_PI_4, 6.0 * FRAC_PI_4, FRAC_PI_8);
        let v = ping_pong(&[f, g]).unwrap();
        assert_eq!(v.status, Status::DiscreteFreeByPingPong);
        assert_eq!(combined_verdict(&f, &g).status, Status::DiscreteFreeByPingPong);
    }

    #[test]
    fn duplicate_generator_is_inconclusive() {
        let f = from_arcs(0.0, PI, 1.0);
        let v = ping_pong(&[f, f]).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(matches!(v.witness, Some(Witness::ArcOverlap { .. })));
    }

    #[test]
    fn parabolic_pair_with_tangency() {
        let f = from_arcs(0.0, 0.5, 0.5);
        let g = from_arcs(PI, PI + 0.5, 0.5);
        assert_eq!(f.kind(), TransformKind::Parabolic);
        let v = ping_pong(&[f, g]).unwrap();
        assert_eq!(v.status, Status::DiscreteByPingPongWithTangency);
        assert!(
            matches!(v.witness, Some(Witness::ArcSeparation { tangencies: 2, .. })),
            "{:?}",
            v.witness
        );
    }

    #[test]
    fn rotation_generator_rejected() {
        let f = from_arcs(0.0, PI, 1.0);
        assert_eq!(
            ping_pong(&[f, MobiusTransform::rotation(1.0)]),
            Err(Error::NoIsometricCircle)
        );
    }

    #[test]
    fn jorgensen_examples() {
        let f = MobiusTransform::new(Complex64::new(SQRT_2, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let g = MobiusTransform::new(Complex64::new(0.0, SQRT_2), Complex64::new(0.0, 1.0)).unwrap();
        assert!((jorgensen_value(&f, &g) - 8.0).abs() < 1e-12);
        assert!(!jorgensen_fails(&f, &g));
        assert!(!gamma_interval_flag(&f, &g));

        let id = MobiusTransform::identity();
        assert!((jorgensen_value(&f, &id) - beta(&f).abs()).abs() < 1e-12);
        let near = MobiusTransform::parabolic_family(0.01);
        assert!(jorgensen_fails(&near, &f));
    }

    #[test]
    fn commuting_pair_flags_gamma() {
        let f = MobiusTransform::new(Complex64::new(SQRT_2, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let g = f.compose(&f);
        assert!(gamma(&f, &g).abs() < 1e-9);
        assert!(gamma_interval_flag(&f, &g));
        let v = combined_verdict(&f, &g);
        assert!(v.shared_fixed_point);
    }

    #[test]
    fn overlapping_arcs_with_negative_gamma() {
        // Search a small deterministic family for γ = −2 at a crossing angle.
        let f = from_arcs(0.0, PI, 1.0);
        let mut best = None;
        for k in 1..2000 {
            let t = k as f64 * PI / 2000.0;
            let g = from_arcs(t, t + PI, 1.0);
            let gm = gamma(&f, &g);
            if (gm + 2.0).abs() < 0.05 && !jorgensen_fails(&f, &g) {
                best = Some(g);
                break;
            }
        }
        let g = best.expect("a pair with gamma near -2");
        let v = combined_verdict(&f, &g);
        assert_eq!(v.status, Status::AlmostSurelyNotDiscrete);
    }

    #[test]
    fn jorgensen_priority() {
        let f = MobiusTransform::parabolic_family(0.01);
        let g = MobiusTransform::parabolic_family(0.02);
        let v = combined_verdict(&f, &g);
        assert_eq!(v.status, Status::NotDiscreteByJorgensen);
        assert!(v.shared_fixed_point);
    }
}
