use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use proptest::prelude::*;
use random_fuchsian::arcs::{arcs_disjoint, arcs_to_mobius, mobius_to_arcs, Arc, ArcPair};
use random_fuchsian::mobius::{
    axes_cross, complex_distance, cross_ratio, fixed_point_cross_ratio, gamma, gamma_by_products, MobiusTransform,
    TransformKind,
};
use random_fuchsian::sampling::{sample_hyperbolic, sample_mobius, StreamSeed};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Element with `|a| = 1/sin(t/2)`, `arg a = p`, `arg c = q`.
fn element(p: f64, q: f64, t: f64) -> MobiusTransform {
    let s = (0.5 * t).sin();
    MobiusTransform::new(
        Complex64::from_polar(1.0 / s, p),
        Complex64::from_polar((0.5 * t).cos() / s, q),
    )
    .unwrap()
}

fn moderate() -> impl Strategy<Value = MobiusTransform> {
    (0.0..2.0 * PI, 0.0..2.0 * PI, 0.05..PI).prop_map(|(p, q, t)| element(p, q, t))
}

#[test]
fn worked_examples() {
    let f = MobiusTransform::new(cx(SQRT_2, 0.0), cx(1.0, 0.0)).unwrap();
    let cls = f.classify();
    assert_eq!(cls.kind, TransformKind::Hyperbolic);
    assert!((cls.beta - 4.0).abs() < 1e-12);
    assert!((cls.tau - 3f64.acosh()).abs() < 1e-12);
    let fp = f.fixed_points().unwrap();
    let (att, rep) = if fp.attracting_is_plus {
        (fp.z_plus, fp.z_minus)
    } else {
        (fp.z_minus, fp.z_plus)
    };
    assert!((att - 1.0).norm() < 1e-12 && (rep + 1.0).norm() < 1e-12);

    let p = MobiusTransform::new(cx(1.0, 1.0), cx(1.0, 0.0)).unwrap();
    assert_eq!(p.kind(), TransformKind::Parabolic);
    let fp = p.fixed_points().unwrap();
    assert!((fp.z_plus - cx(0.0, 1.0)).norm() < 1e-12);
    let iso = p.isometric_arcs().unwrap();
    assert!(iso.plus_arc.separation(&iso.minus_arc).abs() < 1e-12);

    let e = MobiusTransform::new(cx(0.0, SQRT_2), cx(0.0, 1.0)).unwrap();
    assert!((e.beta() + 4.0).abs() < 1e-12);
    assert!((gamma(&f, &e) - 4.0).abs() < 1e-12);
}

#[test]
fn cross_ratio_and_distance_examples() {
    let v = cross_ratio(cx(1.0, 0.0), cx(0.0, 1.0), cx(-1.0, 0.0), cx(0.0, -1.0)).unwrap();
    assert!((v - cx(2.0, 0.0)).norm() < 1e-14);
    let d = complex_distance((cx(1.0, 0.0), cx(-1.0, 0.0)), (cx(0.0, 1.0), cx(0.0, -1.0))).unwrap();
    assert!(d.delta.abs() < 1e-14 && (d.theta - FRAC_PI_2).abs() < 1e-12);

    // Lines (1, −1) and the geodesic through ±i pushed off by hyperbolic distance log 2:
    // in the upper half plane these are (0, ∞) and (−s, s)... use the disk image of
    // the half-plane pair {−1, 1} and {−2, 2} via z ↦ (z − i)/(z + i).
    let to_disk = |z: f64| (cx(z, 0.0) - cx(0.0, 1.0)) / (cx(z, 0.0) + cx(0.0, 1.0));
    let d = complex_distance((to_disk(-1.0), to_disk(1.0)), (to_disk(-2.0), to_disk(2.0))).unwrap();
    assert!((d.delta - 2f64.ln()).abs() < 1e-12 && d.theta == 0.0);
}

#[test]
fn gamma_routes_agree_and_closed_form_is_stable() {
    let mut rng = StreamSeed::new(77, 0).rng();
    for _ in 0..20_000 {
        let (f, g) = (sample_mobius(&mut rng), sample_mobius(&mut rng));
        let (a, b) = (gamma(&f, &g), gamma_by_products(&f, &g));
        // The product route cancels terms of size |a_f|²|a_g|².
        let scale = f.a().norm_sqr() * g.a().norm_sqr();
        assert!((a - b).abs() <= 1e-12 * scale.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn fixed_point_residuals_and_crossing_routes() {
    let mut rng = StreamSeed::new(5, 9).rng();
    for _ in 0..100_000 {
        let f = sample_hyperbolic(&mut rng);
        let fp = f.fixed_points().unwrap();
        for z in [fp.z_plus, fp.z_minus] {
            assert!((z.norm() - 1.0).abs() < 1e-9);
            assert!((f.apply(z).unwrap() - z).norm() < 1e-8 * f.a().norm().max(1.0));
        }
    }
    // γ < 0, cross ratio > 1, and endpoint interleaving.
    let interleaved = |f: &MobiusTransform, g: &MobiusTransform| {
        let (pf, pg) = (f.fixed_points().unwrap(), g.fixed_points().unwrap());
        let (lo, hi) = {
            let (x, y) = (pf.z_plus.arg(), pf.z_minus.arg());
            (x.min(y), x.max(y))
        };
        let inside = |z: Complex64| (lo..hi).contains(&z.arg());
        inside(pg.z_plus) != inside(pg.z_minus)
    };
    for _ in 0..20_000 {
        let (f, g) = (sample_hyperbolic(&mut rng), sample_hyperbolic(&mut rng));
        let by_gamma = axes_cross(&f, &g).unwrap();
        assert_eq!(by_gamma, fixed_point_cross_ratio(&f, &g).unwrap() > 1.0);
        assert_eq!(by_gamma, interleaved(&f, &g));
    }
}

#[test]
fn fixed_point_cross_ratio_matches_generic_cross_ratio() {
    let mut rng = StreamSeed::new(6, 1).rng();
    for _ in 0..10_000 {
        let (f, g) = (sample_hyperbolic(&mut rng), sample_hyperbolic(&mut rng));
        let (pf, pg) = (f.fixed_points().unwrap(), g.fixed_points().unwrap());
        let generic = cross_ratio(pf.z_plus, pg.z_plus, pf.z_minus, pg.z_minus).unwrap();
        let closed = fixed_point_cross_ratio(&f, &g).unwrap();
        assert!(
            (generic.re - closed).abs() <= 1e-8 * closed.abs().max(1.0),
            "{generic} vs {closed}"
        );
    }
}

#[test]
fn arc_examples() {
    let a = |m: f64, l: f64| Arc::at_angle(m, l).unwrap();
    assert!(arcs_disjoint(&a(0.0, FRAC_PI_2), &a(PI, FRAC_PI_2)));
    assert!(!arcs_disjoint(&a(0.0, PI), &a(FRAC_PI_2, PI)));
    assert!(!arcs_disjoint(&a(0.0, FRAC_PI_2), &a(FRAC_PI_2, FRAC_PI_2)));

    let pair = ArcPair::new(a(PI, FRAC_PI_2), a(0.0, FRAC_PI_2)).unwrap();
    let f = arcs_to_mobius(&pair).unwrap();
    assert!(mobius_to_arcs(&f).unwrap().approx_eq(&pair, 1e-12));
    assert!((f.a().norm() - SQRT_2).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compose_with_inverse_is_identity(f in moderate(), z_arg in 0.0..2.0 * PI) {
        let id = f.compose(&f.inverse());
        prop_assert!(id.approx_eq(&MobiusTransform::identity(), 1e-9 * f.a().norm_sqr()));
        let z = Complex64::from_polar(1.0, z_arg);
        prop_assert!((f.apply(z).unwrap().norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negation_is_the_same_element(p in 0.0..2.0 * PI, q in 0.0..2.0 * PI, t in 0.05..PI) {
        let f = element(p, q, t);
        let g = MobiusTransform::new(-f.a(), -f.c()).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn serde_round_trip_is_exact(f in moderate()) {
        let s = serde_json::to_string(&f).unwrap();
        let g: MobiusTransform = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn beta_gamma_invariant_under_conjugation(f in moderate(), g in moderate(), h in moderate()) {
        let (cf, cg) = (f.conjugate_by(&h), g.conjugate_by(&h));
        let scale = h.a().norm_sqr() * f.a().norm_sqr() * g.a().norm_sqr();
        prop_assert!((f.beta() - cf.beta()).abs() < 1e-12 * scale);
        prop_assert!((gamma(&f, &g) - gamma(&cf, &cg)).abs() < 1e-12 * scale * scale);
    }

    #[test]
    fn cross_ratio_is_mobius_invariant(h in moderate(), args in prop::array::uniform4(0.0..2.0 * PI)) {
        let zs = args.map(|t| Complex64::from_polar(1.0, t));
        prop_assume!((zs[0] - zs[1]).norm() > 1e-3 && (zs[2] - zs[3]).norm() > 1e-3);
        let before = cross_ratio(zs[0], zs[1], zs[2], zs[3]).unwrap();
        let ws = zs.map(|z| h.apply(z).unwrap());
        let after = cross_ratio(ws[0], ws[1], ws[2], ws[3]).unwrap();
        prop_assert!((before - after).norm() <= 1e-8 * before.norm().max(1.0));
    }

    #[test]
    fn arcs_disjoint_symmetric_and_rotation_invariant(
        m1 in 0.0..2.0 * PI, m2 in 0.0..2.0 * PI, l1 in 0.0..6.0, l2 in 0.0..6.0, r in 0.0..2.0 * PI
    ) {
        let (a, b) = (Arc::at_angle(m1, l1).unwrap(), Arc::at_angle(m2, l2).unwrap());
        prop_assume!(a.separation(&b).abs() > 1e-12);
        prop_assert_eq!(arcs_disjoint(&a, &b), arcs_disjoint(&b, &a));
        prop_assert_eq!(arcs_disjoint(&a, &b), arcs_disjoint(&a.rotated(r), &b.rotated(r)));
    }

    #[test]
    fn arc_configuration_decides_kind(m1 in 0.0..2.0 * PI, gap in 0.01..PI, len in 0.01..3.1) {
        let pair = ArcPair::new(Arc::at_angle(m1, len).unwrap(), Arc::at_angle(m1 + gap, len).unwrap()).unwrap();
        let f = arcs_to_mobius(&pair).unwrap();
        let sep = gap - len;
        prop_assume!(sep.abs() > 1e-6);
        prop_assert_eq!(f.beta() > 0.0, sep > 0.0);
    }

    #[test]
    fn adjacent_arcs_are_parabolic(m1 in 0.0..2.0 * PI, len in 0.01..3.1) {
        let pair = ArcPair::new(Arc::at_angle(m1, len).unwrap(), Arc::at_angle(m1 + len, len).unwrap()).unwrap();
        let f = arcs_to_mobius(&pair).unwrap();
        prop_assert!(f.beta().abs() < 1e-8);
    }

    #[test]
    fn arcs_round_trip_up_to_inversion(f in moderate()) {
        let g = arcs_to_mobius(&mobius_to_arcs(&f).unwrap()).unwrap();
        prop_assert!(f.approx_eq(&g, 1e-8 * f.a().norm()) || f.approx_eq(&g.inverse(), 1e-8 * f.a().norm()));
    }
}
