use std::f64::consts::{PI, TAU};

use cdanalysis::transcend::*;
use cdanalysis::{gen, CdNumber};
use num_complex::Complex64;
use proptest::prelude::*;

fn oct(r: f64) -> impl Strategy<Value = CdNumber> {
    prop::array::uniform8(-r..r).prop_map(|c| CdNumber::from_array(3, c))
}

fn unit_axis() -> impl Strategy<Value = CdNumber> {
    prop::array::uniform7(-1.0..1.0f64)
        .prop_filter("nonzero", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|c| {
            let mut a = [0.0; 8];
            a[1..].copy_from_slice(&c);
            let z = CdNumber::from_array(3, a);
            z.scale(1.0 / z.norm())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_ln_round_trip(z in oct(3.0)) {
        prop_assume!(z.norm() > 1e-6);
        let back = exp(&ln(&z, 0).unwrap());
        prop_assert!(back.dist(&z) <= 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn exp_in_plane_is_complex_exp(m in unit_axis(), x in -3.0..3.0f64, y in -6.0..6.0f64) {
        let e = exp(&(m.scale(y) + x));
        let c = Complex64::new(x, y).exp();
        let want = m.scale(c.im) + c.re;
        prop_assert!(e.dist(&want) <= 1e-12 * c.norm().max(1.0));
    }

    #[test]
    fn branches_differ_by_axis(z in oct(3.0), n in -5i64..5) {
        prop_assume!(z.im_norm() > 1e-6);
        let d = ln(&z, n).unwrap() - ln(&z, 0).unwrap();
        let m = polar(&z).unwrap().axis;
        prop_assert!(d.dist(&m.scale(TAU * n as f64)) < 1e-12);
        prop_assert!(exp(&ln(&z, n).unwrap()).dist(&z) < 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn polar_reconstructs(z in oct(3.0), n in -3i64..3) {
        prop_assume!(z.norm() > 1e-6);
        let p = polar_branch(&z, n).unwrap();
        prop_assert!((p.axis.norm() - 1.0).abs() < 1e-12 && p.axis.re() == 0.0);
        prop_assert!(p.reconstruct().dist(&z) < 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn ln_n_inverts_exp_n(
        a in prop::collection::vec(prop::array::uniform4(-1.0..1.0f64), 1..=3),
        s in prop::array::uniform4(-1.0..1.0f64),
    ) {
        // scale so each stage stays within the principal strip
        let a: Vec<CdNumber> = a.iter().map(|c| {
            let q = CdNumber::from_slice(c).unwrap();
            q.scale(0.6 / q.norm().max(1e-3))
        }).collect();
        prop_assume!(a.iter().all(|x| x.norm() > 0.1));
        let z = CdNumber::from_slice(&s).unwrap();
        let e = exp_n(&a, &z).unwrap();
        let back = ln_n(&a, &e, &[]).unwrap();
        prop_assert!(back.dist(&z) < 1e-9, "{back} vs {z}");
    }

    #[test]
    fn spherical_round_trip(z in oct(5.0)) {
        prop_assume!(z.norm() > 1e-6);
        let s = to_spherical(&z).unwrap();
        prop_assert!(s.theta[0] >= 0.0 && s.theta[0] < TAU);
        prop_assert!(s.theta[1..].iter().all(|t| (0.0..=PI).contains(t)));
        prop_assert!(from_spherical(&s).unwrap().dist(&z) < 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn quaternion_nested_exp_expansion(p in prop::array::uniform3(-4.0..4.0f64)) {
        let q = CdNumber::from_slice(&[0.0, p[0], p[1], p[2]]).unwrap();
        let e = e_map(&q).unwrap();
        let inner = exp(&(gen(1).scale(p[0]).lift(2) * e_axis(&q).unwrap()));
        let (a, b, c) = (p[0], p[1], p[2]);
        let want = CdNumber::from_slice(&[
            a.cos(),
            a.sin() * b.cos(),
            a.sin() * b.sin() * c.cos(),
            a.sin() * b.sin() * c.sin(),
        ]).unwrap();
        // literal form of the nested exponential with i1 outside
        let lit = exp(&(gen(1).lift(2) * exp(&(gen(3).scale(-b).lift(2) * exp(&gen(1).scale(-c).lift(2)))).scale(a)));
        prop_assert!(lit.dist(&want) < 1e-12);
        prop_assert!((e - q.re()).dist(&e_axis(&q).unwrap().scale(a)) < 1e-12);
        let _ = inner;
    }

    #[test]
    fn e_inv_round_trip_quaternion(p0 in -3.0..3.0f64, p1 in 0.01..4.0f64, p2 in 0.01..3.13f64, p3 in 0.0..6.2f64) {
        let p = CdNumber::from_slice(&[p0, p1, p2, p3]).unwrap();
        let back = e_inv(&e_map(&p).unwrap(), 0).unwrap();
        prop_assert!(back.dist(&p) < 1e-10, "{back} vs {p}");
    }

    #[test]
    fn e_inv_round_trip_octonion(
        p0 in -3.0..3.0f64, p1 in 0.01..4.0f64,
        mid in prop::array::uniform5(0.01..3.13f64), last in 0.0..6.2f64,
    ) {
        let mut c = [0.0; 8];
        c[0] = p0; c[1] = p1; c[2..7].copy_from_slice(&mid); c[7] = last;
        let p = CdNumber::from_array(3, c);
        let back = e_inv(&e_map(&p).unwrap(), 0).unwrap();
        prop_assert!(back.dist(&p) < 1e-10, "{back} vs {p}");
    }

    #[test]
    fn e_axis_is_spherical_axis(b in 0.0..PI, c in 0.0..TAU) {
        let q = CdNumber::from_slice(&[0.0, 1.0, b, c]).unwrap();
        let k = e_axis(&q).unwrap();
        prop_assert!(k.dist(&axis_from_angles(&[0.0, b, c]).unwrap()) < 1e-12);
    }
}

#[test]
fn complex_values_fixed_by_e() {
    for (x, y) in [(0.0, 1.0), (-2.5, 0.3), (1.0, -4.0)] {
        let z = CdNumber::complex(x, y).lift(2);
        assert_eq!(e_map(&z).unwrap(), z);
        assert_eq!(e_inv(&z, 0).unwrap(), z);
    }
}

#[test]
fn ln_chain_follows_the_loop() {
    let a = [CdNumber::real(1.0).lift(2), CdNumber::real(1.0).lift(2)];
    let mut ch = LnChain::new(&a).unwrap();
    let m = gen(2);
    let mut last = CdNumber::zero(2);
    for k in 0..=400 {
        let t = k as f64 / 400.0;
        let (v, jump) = ch.next(&exp(&m.scale(TAU * t)).scale(2.0)).unwrap();
        assert!(k == 0 || jump < 0.1);
        last = v;
    }
    // first stage ends on the next sheet: ln 2 + 2πM
    let want = ln(&(m.scale(TAU) + 2f64.ln()), 0).unwrap();
    assert!(last.dist(&want) < 1e-12);
}
