use std::f64::consts::PI;

use cdanalysis::plane::{eval_in_plane, Plane};
use cdanalysis::xform::*;
use cdanalysis::{gen, CdError, CdNumber};
use num_complex::Complex64;
use proptest::prelude::*;

fn quat(c: [f64; 4]) -> CdNumber {
    CdNumber::from_slice(&c).unwrap()
}

fn rel(a: &CdNumber, b: &CdNumber) -> f64 {
    a.dist(b) / b.norm().max(1e-300)
}

/// Lanczos (g = 7, n = 9) complex gamma, independent of the library's product form.
fn lanczos_gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z.re < 0.5 {
        return PI / ((z * PI).sin() * lanczos_gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(C[0], 0.0);
    for (i, c) in C.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

fn gaussian(alpha: f64) -> Original {
    // e^{-αt²} ≤ e^{1/(4α)} e^{-|t|}
    Original::two_sided(move |t| CdNumber::real((-alpha * t * t).exp()), -1.0, 1.0)
        .with_growth_constant((0.25 / alpha).exp())
}

fn gaussian_image(alpha: f64) -> impl Fn(&CdNumber) -> cdanalysis::Result<CdNumber> {
    move |p: &CdNumber| Ok(eval_in_plane(p, |z| (PI / alpha).sqrt() * (z * z / (4.0 * alpha)).exp()))
}

fn exp_step(a: f64) -> Original {
    Original::right(move |t| CdNumber::real((a * t).exp()), a).with_discontinuities(vec![0.0])
}

#[test]
fn one_sided_closed_forms() {
    let spec = TransformSpec::linear(3);
    let a = 0.5;
    for p in [
        CdNumber::from_array(3, [1.3, 0.4, -0.2, 0.1, 0.7, 0.0, -0.3, 0.2]),
        CdNumber::complex(0.9, 5.0),
        CdNumber::real(2.0),
    ] {
        let step = Original::right(|_| CdNumber::real(1.0), 0.0);
        let v = laplace(&step, &p, &spec).unwrap();
        assert!(rel(&v, &p.inverse().unwrap()) < 1e-7, "1/p at {p}");
        let v = laplace(&exp_step(a), &p, &spec).unwrap();
        assert!(rel(&v, &(p - a).inverse().unwrap()) < 1e-7, "1/(p-a) at {p}");
    }
}

#[test]
fn two_sided_gaussian() {
    let spec = TransformSpec::linear(2);
    for alpha in [0.7, 2.0] {
        let img = gaussian_image(alpha);
        for p in [quat([0.3, 0.5, -0.4, 0.2]), quat([-0.6, 0.0, 1.1, 0.0]), CdNumber::real(0.2)] {
            let v = laplace_two_sided(&gaussian(alpha), &p, &spec).unwrap();
            assert!(rel(&v, &img(&p).unwrap()) < 1e-7, "alpha {alpha}, p {p}: {v}");
        }
    }
}

#[test]
fn two_sided_exponential_and_logistic() {
    let spec = TransformSpec::linear(3);
    let alpha = 1.5;
    let f = Original::two_sided(move |t| CdNumber::real(0.5 * (-alpha * t.abs()).exp()), -alpha, alpha)
        .with_growth_constant(0.5)
        .with_discontinuities(vec![0.0]);
    let p = CdNumber::from_array(3, [0.4, 0.3, 0.0, -0.5, 0.0, 0.2, 0.0, 0.6]);
    let want = eval_in_plane(&p, |z| alpha / (alpha * alpha - z * z));
    assert!(rel(&laplace_two_sided(&f, &p, &spec).unwrap(), &want) < 1e-7);

    let g = Original::two_sided(|t| CdNumber::real(1.0 / (t.exp() + 1.0)), -1.0, 0.0);
    for p in [CdNumber::complex(-0.5, 0.0), CdNumber::complex(-0.3, 2.0), quat([-0.7, 0.5, 0.5, -0.5])] {
        let want = eval_in_plane(&p, |z| -PI / (PI * z).sin());
        let v = laplace_two_sided(&g, &p, &spec.clone().with_tol(1e-11)).unwrap();
        assert!(rel(&v, &want) < 1e-7, "p {p}: {v} vs {want}");
    }
}

#[test]
fn mellin_of_decaying_exponential_is_gamma() {
    let spec = TransformSpec::linear(2);
    let g = Original::multiplicative(|tau| CdNumber::real((-tau).exp()), 0.0, f64::INFINITY);
    for (p, want) in [(0.5, PI.sqrt()), (2.0, 1.0), (3.0, 2.0), (1.5, 0.5 * PI.sqrt())] {
        let v = mellin(&g, &CdNumber::real(p), &spec).unwrap();
        assert!((v.re() - want).abs() < 1e-7 * want, "Γ({p}) = {v}");
    }
    let p = quat([1.2, 0.3, 0.4, -0.2]);
    let v = mellin(&g, &p, &spec).unwrap();
    let want = eval_in_plane(&p, lanczos_gamma);
    assert!(rel(&v, &want) < 1e-7);
    let zero = Original::multiplicative(|_| CdNumber::zero(2), 0.0, 1.0);
    assert_eq!(mellin(&zero, &CdNumber::real(0.5), &spec).unwrap().norm(), 0.0);
}

#[test]
fn kernels_agree_on_complex_arguments() {
    let lin = TransformSpec::linear(3);
    let sph = TransformSpec::spherical(3).unwrap();
    let g = gaussian(1.0);
    for p in [CdNumber::complex(0.3, 1.7), CdNumber::complex(-0.2, -0.9)] {
        let a = laplace_two_sided(&g, &p, &lin).unwrap();
        let b = laplace_two_sided(&g, &p, &sph).unwrap();
        assert!(a.dist(&b) < 1e-10);
    }
}

#[test]
fn strip_additivity() {
    let spec = TransformSpec::linear(2);
    let a = 0.4;
    let p = quat([1.1, 0.2, 0.9, -0.3]);
    let step = Original::right(|_| CdNumber::real(1.0), 0.0);
    let shifted = Original::right(move |t| CdNumber::real((a * t).exp() - 1.0), a).with_growth_constant(1.0);
    let f1 = laplace(&exp_step(a), &p, &spec).unwrap();
    let f2 = laplace(&shifted, &p, &spec).unwrap();
    let fu = laplace(&step, &p, &spec).unwrap();
    let closed = (p.inverse().unwrap() * (p - a).inverse().unwrap()).scale(a);
    assert!(rel(&f2, &closed) < 1e-7);
    assert!((f1 - f2).dist(&fu) < 1e-8);
}

#[test]
fn round_trip_exp_step() {
    let spec = TransformSpec::linear(2).with_tol(1e-9);
    let a = 0.5;
    let image = move |p: &CdNumber| (*p - a).inverse();
    for s in [gen(1), gen(2), quat([0.0, 0.6, 0.0, 0.8])] {
        let line = BromwichLine::new(1.5, s, 1.0).unwrap();
        for t in [0.5, 1.0, 2.5] {
            let v = invert(&image, t, &line, &spec).unwrap();
            assert!((v - (a * t).exp()).norm() < 1e-6, "S = {s}, t = {t}: {v}");
        }
        for t in [-0.5, -2.0] {
            let v = invert(&image, t, &line, &spec).unwrap();
            assert!(v.norm() < 1e-6, "t = {t}: {v}");
        }
    }
}

#[test]
fn round_trip_two_sided_examples() {
    let spec = TransformSpec::linear(2).with_tol(1e-9);
    let img = gaussian_image(0.8);
    let line = BromwichLine::new(0.0, gen(1), 1.0).unwrap();
    for t in [-1.5, 0.0, 0.7, 2.0] {
        let v = invert(&img, t, &line, &spec).unwrap();
        assert!((v - (-0.8 * t * t).exp()).norm() < 1e-6, "t = {t}: {v}");
    }
    let logistic = |p: &CdNumber| Ok(eval_in_plane(p, |z| -PI / (PI * z).sin()));
    let line = BromwichLine::new(-0.5, gen(3), 1.0).unwrap();
    for t in [-2.0, 0.3, 1.0] {
        let v = invert(&logistic, t, &line, &spec).unwrap();
        assert!((v - 1.0 / (t.exp() + 1.0)).norm() < 1e-6, "t = {t}: {v}");
    }
}

#[test]
fn round_trip_forward_then_inverse() {
    let spec = TransformSpec::linear(2).with_tol(1e-10);
    let f = Original::two_sided(move |t| CdNumber::real(0.5 * (-2.0 * t.abs()).exp()), -2.0, 2.0)
        .with_growth_constant(0.5)
        .with_discontinuities(vec![0.0]);
    let img = |p: &CdNumber| laplace_two_sided(&f, p, &spec);
    let line = BromwichLine::new(0.3, gen(1), 2.0).unwrap();
    for t in [-0.8, 0.6] {
        let v = invert(&img, t, &line, &spec.clone().with_tol(1e-7)).unwrap();
        assert!((v - 0.5 * (-2.0 * t.abs()).exp()).norm() < 1e-5, "t = {t}: {v}");
    }
}

#[test]
fn componentwise_inversion_reassembles() {
    let spec = TransformSpec::linear(2).with_tol(1e-9);
    let line = BromwichLine::standard(1.0);
    let f0 = |p: &CdNumber| p.inverse();
    let f2 = |p: &CdNumber| (*p + 1.0).inverse();
    let zero = |_: &CdNumber| Ok(CdNumber::zero(2));
    let t = 0.8;
    let v = invert_components(&[&f0, &zero, &f2], t, &line, &spec).unwrap();
    let want = CdNumber::real(1.0).lift(2) + gen(2).scale((-t).exp());
    assert!(v.dist(&want) < 1e-6, "{v}");
}

#[test]
fn mellin_round_trip_and_scaling() {
    let spec = TransformSpec::linear(2).with_tol(1e-9);
    let gamma = |p: &CdNumber| Ok(eval_in_plane(p, lanczos_gamma));
    let line = BromwichLine::new(1.0, gen(1), 1.0).unwrap();
    for tau in [0.3, 1.0, 2.5] {
        let v = invert_mellin(&gamma, tau, &line, &spec).unwrap();
        assert!((v - (-tau as f64).exp()).norm() < 1e-6, "τ = {tau}: {v}");
    }
    let zero = |_: &CdNumber| Ok(CdNumber::zero(2));
    assert!(invert_mellin(&zero, 1.7, &line, &spec).unwrap().norm() < 1e-15);
    // M[g(cτ)](p) = c^{-p} M[g](p)
    let c = 2.0;
    let g1 = Original::multiplicative(|tau| CdNumber::real((-tau).exp()), 0.0, f64::INFINITY);
    let g2 = Original::multiplicative(move |tau| CdNumber::real((-c * tau).exp()), 0.0, f64::INFINITY);
    let p = quat([1.4, 0.5, -0.3, 0.2]);
    let m1 = mellin(&g1, &p, &spec).unwrap();
    let m2 = mellin(&g2, &p, &spec).unwrap();
    let scale = eval_in_plane(&p, |z| Complex64::new(c, 0.0).powc(-z));
    assert!(rel(&m2, &(scale * m1)) < 1e-7);
}

#[test]
fn derivative_under_the_integral() {
    let spec = TransformSpec::linear(2);
    let step = Original::right(|_| CdNumber::real(1.0), 0.0);
    let p = quat([1.2, 0.3, -0.5, 0.1]);
    for h in [CdNumber::real(1.0), quat([0.0, 0.2, 0.7, -0.4])] {
        assert!(diff_under_integral_check(&step, &p, &h, &spec).unwrap() < 1e-6);
    }
    assert_eq!(diff_under_integral_check(&step, &p, &CdNumber::zero(2), &spec).unwrap(), 0.0);
    let g = gaussian(1.0);
    let h = quat([0.3, -0.1, 0.0, 0.5]);
    assert!(diff_under_integral_check(&g, &quat([0.2, 0.4, 0.1, 0.0]), &h, &spec).unwrap() < 1e-6);
    // the Gaussian derivative along a complex direction has a closed form
    let p = CdNumber::complex(0.2, 0.6);
    let hc = CdNumber::complex(0.3, 0.4);
    let img = gaussian_image(1.0);
    let dv = img(&p).unwrap() * p.scale(0.5) * hc;
    let e = 1e-4;
    let fd = (laplace_two_sided(&g, &(p + hc.scale(e)), &spec).unwrap()
        - laplace_two_sided(&g, &(p - hc.scale(e)), &spec).unwrap())
    .scale(0.5 / e);
    assert!(fd.dist(&dv) < 1e-6);
    let mel = Original::multiplicative(|tau| CdNumber::real((-tau).exp()), 0.0, f64::INFINITY);
    assert!(diff_under_integral_check(&mel, &quat([1.5, 0.2, 0.3, 0.0]), &quat([0.1, 0.5, 0.0, 0.2]), &spec).unwrap() < 1e-6);
}

#[test]
fn symmetry_of_real_images() {
    let lin = TransformSpec::linear(3);
    let probes = [
        CdNumber::from_array(3, [0.2, 0.5, -0.3, 0.1, 0.0, 0.4, 0.0, -0.2]),
        CdNumber::from_array(3, [-0.3, 0.1, 0.6, 0.0, 0.2, 0.0, -0.5, 0.3]),
    ];
    let g = gaussian(1.0);
    let img = |p: &CdNumber| laplace_two_sided(&g, p, &lin);
    let r = symmetry_report(&img, &probes, &lin);
    assert!(r.conj_sym < 1e-8 && r.even_sym < 1e-8, "{r:?}");
    let sph = TransformSpec::spherical(3).unwrap();
    let img_s = |p: &CdNumber| laplace_two_sided(&g, p, &sph);
    let rs = symmetry_report(&img_s, &probes, &sph);
    assert!(rs.spherical_conj_sym < 1e-8 && rs.even_sym < 1e-8, "{rs:?}");

    let es = exp_step(0.3);
    let img_e = |p: &CdNumber| laplace(&es, p, &lin);
    let probes = [CdNumber::from_array(3, [0.8, 0.5, -0.3, 0.1, 0.0, 0.4, 0.0, -0.2])];
    let re = symmetry_report(&img_e, &probes, &lin);
    assert!(re.conj_sym < 1e-8, "{re:?}");
    // −p lies outside the half-plane, so the evenness check has no usable probe
    assert!(re.even_sym.is_nan());
    let closed = |p: &CdNumber| (*p - 0.3).inverse();
    let rc = symmetry_report(&closed, &probes, &lin);
    assert!(rc.even_sym > 0.1);
}

#[test]
fn quasi_regularity_detects_nonreal_originals() {
    let lin = TransformSpec::linear(2);
    let probes = [quat([0.2, 0.3, 0.5, -0.4]), quat([-0.3, 0.0, 0.8, 0.2]), CdNumber::complex(0.1, 0.7)];
    assert!(quasi_regularity_check(&gaussian(1.0), &lin, &probes).unwrap() < 1e-7);
    for n in [gen(1), gen(2)] {
        let bad = Original::two_sided(move |t| n.scale((-t * t).exp()), -1.0, 1.0).with_growth_constant(1.3);
        let r = quasi_regularity_check(&bad, &lin, &probes).unwrap();
        assert!(r > 1e-2, "{n}: {r}");
    }
    // complex probes contribute nothing
    let bad = Original::two_sided(|t| gen(2).scale((-t * t).exp()), -1.0, 1.0).with_growth_constant(1.3);
    assert_eq!(quasi_regularity_check(&bad, &lin, &probes[2..]).unwrap(), 0.0);
}

#[test]
fn quasi_regularity_spherical_kernel() {
    // E(tz) is not tE(z), so one fixed rotation cannot carry F(x) to F(z)
    // even for a real original; the analog is measured, not expected to vanish
    let sph = TransformSpec::spherical(2).unwrap();
    let probes = [quat([-0.3, 0.6, 0.8, 1.2])];
    let r = quasi_regularity_check(&gaussian(1.0), &sph, &probes).unwrap();
    assert!(r > 1e-2 && r < 0.1, "{r}");
    assert_eq!(quasi_regularity_check(&gaussian(1.0), &sph, &[CdNumber::complex(0.2, 0.5)]).unwrap(), 0.0);
}

#[test]
fn error_paths() {
    let lin = TransformSpec::linear(2);
    let step = Original::right(|_| CdNumber::real(1.0), 0.0);
    assert!(matches!(laplace(&step, &CdNumber::complex(-0.1, 2.0), &lin), Err(CdError::DomainOfConvergence { .. })));
    let g = Original::two_sided(|_| CdNumber::real(1.0), 0.0, 0.0);
    assert!(matches!(laplace_two_sided(&g, &CdNumber::real(0.0), &lin), Err(CdError::EmptyStrip(..))));
    // F = 1 is not an image; the principal value never settles
    let one = |_: &CdNumber| Ok(CdNumber::one(2));
    let line = BromwichLine::new(1.0, gen(1), 1.0).unwrap();
    assert!(matches!(invert(&one, 0.0, &line, &lin), Err(CdError::TruncationTooSmall(_))));
    assert!(TransformSpec::spherical(1).is_err());
    assert!(BromwichLine::new(1.0, gen(1).scale(2.0), 1.0).is_err());
    assert!(matches!(invert(&one, 1.0, &line, &lin.clone().with_q(gen(1))), Err(CdError::UnsupportedLine(_))));
}

#[test]
fn growth_sampling() {
    assert!(gaussian(1.0).growth_violation(20.0, 400).is_none());
    let liar = Original::right(|t| CdNumber::real((2.0 * t).exp()), 1.0);
    assert!(liar.growth_violation(5.0, 100).is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Images restricted to a plane ℝ⊕Sℝ inside the strip satisfy the Cauchy–Riemann equations.
    #[test]
    fn images_are_holomorphic_on_planes(
        s in prop::array::uniform3(-1.0f64..1.0),
        x in -0.3f64..0.3,
        y in -2.0f64..2.0,
    ) {
        let n = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        prop_assume!(n > 0.2);
        let axis = quat([0.0, s[0] / n, s[1] / n, s[2] / n]);
        let plane = Plane::new(axis);
        let spec = TransformSpec::linear(2).with_tol(1e-12);
        let g = Original::two_sided(|t| CdNumber::real(1.0 / (t.exp() + 1.0)), -1.0, 0.0);
        let f = |c: Complex64| -> Complex64 {
            plane.to_c(&laplace_two_sided(&g, &plane.from_c(c), &spec).unwrap())
        };
        let z = Complex64::new(x - 0.5, y);
        let d = |dir: Complex64| {
            let h = 1e-3;
            (8.0 * (f(z + dir * h) - f(z - dir * h)) - (f(z + dir * 2.0 * h) - f(z - dir * 2.0 * h))) / (12.0 * h)
        };
        let dx = d(Complex64::new(1.0, 0.0));
        let dy = d(Complex64::i());
        // u_x = v_y and u_y = −v_x
        let scale = dx.norm().max(1.0);
        prop_assert!((dx.re - dy.im).abs() < 1e-6 * scale && (dy.re + dx.im).abs() < 1e-6 * scale);
        // the image stays in the plane of its argument
        let w = laplace_two_sided(&g, &plane.from_c(z), &spec).unwrap();
        prop_assert!((w - plane.from_c(plane.to_c(&w))).norm() < 1e-10);
    }
}

