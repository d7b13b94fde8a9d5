//! Acceptance checks 1–9 as deterministic, seeded computations.
//!
//! Every criterion yields a list of metrics with the bound it must meet.
//! Values depend only on the seeds below, never on timing or thread count.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::{delta_arg_n, residue, residue_form, residue_n, Path};
use crate::plane::eval_in_plane;
use crate::rotor::{build_rotation, find_partner};
use crate::special::{self, ZetaRep};
use crate::transcend::{e_inv, e_map, exp, ln};
use crate::xform::{
    diff_under_integral_check, invert, laplace_two_sided, quasi_regularity_check, symmetry_report, BromwichLine,
    Original, TransformSpec,
};
use crate::{gen, CdNumber, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// value < limit
    Below,
    /// value > limit
    Above,
    /// value == limit
    Equal,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metric {
    pub name: &'static str,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
}

impl Metric {
    pub fn ok(&self) -> bool {
        match self.bound {
            Bound::Below => self.value < self.limit,
            Bound::Above => self.value > self.limit,
            Bound::Equal => self.value == self.limit,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion: u8,
    pub title: &'static str,
    pub passed: bool,
    pub metrics: Vec<Metric>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const TITLES: [&str; 9] = [
    "algebra",
    "transcendental",
    "rotation",
    "residue",
    "n-residue and argument",
    "transforms",
    "symmetry and reality",
    "special functions",
    "zero scan",
];

fn below(name: &'static str, value: f64, limit: f64) -> Metric {
    Metric { name, value, bound: Bound::Below, limit }
}

fn above(name: &'static str, value: f64, limit: f64) -> Metric {
    Metric { name, value, bound: Bound::Above, limit }
}

fn equal(name: &'static str, value: f64, limit: f64) -> Metric {
    Metric { name, value, bound: Bound::Equal, limit }
}

fn rng(id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + u64::from(id))
}

fn random(r: &mut ChaCha8Rng, level: u8, scale: f64) -> CdNumber {
    let mut c = [0.0; 8];
    for x in c.iter_mut().take(1 << level) {
        *x = r.gen_range(-scale..scale);
    }
    CdNumber::from_array(level, c)
}

fn unit_imag(r: &mut ChaCha8Rng, level: u8) -> CdNumber {
    loop {
        let v = random(r, level, 1.0).im();
        if v.norm() > 0.1 {
            return v.scale(1.0 / v.norm());
        }
    }
}

fn rel(a: &CdNumber, b: &CdNumber, scale: f64) -> f64 {
    a.dist(b) / scale.max(1.0)
}

/// Runs one criterion. Computation errors are folded into a failing report.
pub fn run_criterion(id: u8) -> CriterionReport {
    let out = match id {
        1 => algebra(),
        2 => transcendental(),
        3 => rotation(),
        4 => residues(),
        5 => arguments(),
        6 => transforms(),
        7 => symmetry(),
        8 => special_functions(),
        9 => zero_scan(),
        _ => Err(crate::CdError::Invalid(format!("no criterion {id}"))),
    };
    let title = TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown");
    match out {
        Ok(metrics) => CriterionReport { criterion: id, title, passed: metrics.iter().all(Metric::ok), metrics, error: None },
        Err(e) => CriterionReport { criterion: id, title, passed: false, metrics: Vec::new(), error: Some(e.to_string()) },
    }
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=9).map(run_criterion).collect()
}

// Fano-plane lines, i_a i_b = i_c and cyclic.
const LINES: [(usize, usize, usize); 7] = [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (1, 7, 6), (2, 5, 7), (3, 6, 5)];

fn algebra() -> Result<Vec<Metric>> {
    let mut mismatches = 0;
    for (a, b, c) in LINES {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let (gx, gy, gz) = (gen(x).lift(3), gen(y).lift(3), gen(z).lift(3));
            mismatches += usize::from(gx * gy != gz) + usize::from(gy * gx != -gz);
        }
    }
    for k in 1..8 {
        let g = gen(k).lift(3);
        mismatches += usize::from(g * g != CdNumber::real(-1.0).lift(3));
    }
    let mut r = rng(1);
    let (mut assoc, mut alt, mut closed) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (a, b, c) = (random(&mut r, 2, 1.0), random(&mut r, 2, 1.0), random(&mut r, 2, 1.0));
        assoc = assoc.max(rel(&((a * b) * c), &(a * (b * c)), a.norm() * b.norm() * c.norm()));
        let (z, y) = (random(&mut r, 3, 1.0), random(&mut r, 3, 1.0));
        let s = z.norm_sqr() * y.norm();
        alt = alt.max(rel(&(z * (z * y)), &((z * z) * y), s)).max(rel(&((y * z) * z), &(y * (z * z)), s));
        let n = z.norm().max(1.0);
        closed = closed
            .max(z.conj_formula()?.dist(&z.conj()) / n)
            .max((z.re_formula()? - z.re()).abs() / n)
            .max((z.norm_formula()? - z.norm()).abs() / n);
    }
    Ok(vec![
        equal("table_mismatches", mismatches as f64, 0.0),
        below("assoc_h", assoc, 1e-12),
        below("alt_o", alt, 1e-12),
        below("closed_forms", closed, 1e-12),
    ])
}

fn transcendental() -> Result<Vec<Metric>> {
    let mut r = rng(2);
    let (mut round, mut fix, mut inv) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let z = random(&mut r, 3, 3.0);
        round = round.max(rel(&exp(&ln(&z, 0)?), &z, z.norm()));
        // ln ∘ exp on |Im w| < π
        let w = unit_imag(&mut r, 3).scale(r.gen_range(0.0..3.1)) + r.gen_range(-3.0..3.0);
        round = round.max(rel(&ln(&exp(&w), 0)?, &w, w.norm()));
        let y = CdNumber::complex(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        for b in [2, 3] {
            let e = e_map(&y.lift(b))?;
            fix = fix.max(e.dist(&y.lift(b)) / y.norm().max(f64::MIN_POSITIVE));
        }
        let b = if r.gen_bool(0.5) { 2 } else { 3 };
        let m = (1usize << b) - 1;
        let mut p = [0.0; 8];
        p[0] = r.gen_range(-2.0..2.0);
        p[1] = r.gen_range(0.05..3.0);
        for x in p.iter_mut().take(m).skip(2) {
            *x = r.gen_range(0.05..PI - 0.05);
        }
        p[m] = r.gen_range(0.0..TAU - 0.05);
        let p = CdNumber::from_array(b, p);
        inv = inv.max(rel(&e_inv(&e_map(&p)?, 0)?, &p, p.norm()));
    }
    Ok(vec![below("exp_ln_round_trip", round, 1e-10), below("e_fixes_complex", fix, 1e-15), below("e_inv_e", inv, 1e-10)])
}

fn rotation() -> Result<Vec<Metric>> {
    let mut r = rng(3);
    let (mut mul, mut fix, mut norm, mut inv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..1_000 {
        let b = if k % 2 == 0 { 3 } else { 2 };
        let z = random(&mut r, b, 2.0);
        let x = find_partner(&z, 1);
        let t = build_rotation(&z, &x, (1, b))?;
        let (u, v) = (random(&mut r, b, 2.0), random(&mut r, b, 2.0));
        mul = mul.max(rel(&t.apply(&(u * v))?, &(t.apply(&u)? * t.apply(&v)?), u.norm() * v.norm()));
        let s = CdNumber::real(r.gen_range(-5.0..5.0)).lift(b);
        fix = fix.max(t.apply(&s)?.dist(&s));
        norm = norm.max((t.apply(&u)?.norm() - u.norm()).abs() / u.norm().max(1.0));
        // scale (vz, wx) and shift of the real parts leave the images unchanged
        let (sv, sw, sh) = (r.gen_range(0.1..10.0), r.gen_range(0.1..10.0), r.gen_range(-3.0..3.0));
        let scaled = build_rotation(&z.im().scale(sv), &x.im().scale(sw), (1, b))?;
        let shifted = build_rotation(&(z + sh), &(x + sh), (1, b))?;
        for ((p, q), s) in t.images().iter().zip(scaled.images()).zip(shifted.images()) {
            inv = inv.max(p.dist(q)).max(p.dist(s));
        }
    }
    Ok(vec![
        below("multiplicativity", mul, 1e-11),
        below("fixes_reals", fix, 1e-11),
        below("norm_preservation", norm, 1e-11),
        below("scale_slice_invariance", inv, 1e-11),
    ])
}

fn residues() -> Result<Vec<Metric>> {
    let tol = 1e-12;
    let y = CdNumber::from_array(3, [0.2, -0.1, 0.4, 0.0, 0.3, 0.0, -0.2, 0.1]);
    let mut simple = 0.0f64;
    for j in 1..8 {
        for rho in [0.1, 1.0] {
            let n = gen(j).lift(3);
            simple = simple.max(residue(|z| (*z - y).inverse(), &y, &n, rho, tol)?.dist(&n));
        }
    }
    let q = |c: [f64; 4]| CdNumber::from_array(2, [c[0], c[1], c[2], c[3], 0.0, 0.0, 0.0, 0.0]);
    let (a, b, c, e) = (q([0.3, 1.0, -0.5, 0.2]), q([1.0, 0.2, 0.7, -0.4]), q([-0.6, 0.1, 0.3, 0.9]), q([0.5, -0.8, 0.0, 0.4]));
    let yq = q([0.1, 0.2, 0.3, 0.4]);
    let mut factored = 0.0f64;
    for n in [gen(1).lift(2), gen(2).lift(2), q([0.0, 0.6, 0.0, 0.8])] {
        let v = residue_form(|z, dz| Ok(a * ((b * ((*z - yq).inverse()? * *dz)) * c) * e), &yq, &n, 0.3, tol)?;
        factored = factored.max(v.dist(&((a * ((b * n) * c)) * e)));
    }
    let mut r = rng(4);
    let mut linear = 0.0f64;
    let zero = CdNumber::zero(3);
    for _ in 0..4 {
        let (s1, s2) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let k = random(&mut r, 3, 1.0);
        let n = unit_imag(&mut r, 3);
        let f1 = |z: &CdNumber| Ok(z.inverse()? * k);
        let f2 = |z: &CdNumber| Ok(k * z.inverse()? + *z);
        let lhs = residue(|z| Ok(f1(z)?.scale(s1) + f2(z)?.scale(s2)), &zero, &n, 0.4, tol)?;
        let r1 = residue(f1, &zero, &n, 0.4, tol)?;
        let rhs = r1.scale(s1) + residue(f2, &zero, &n, 0.4, tol)?.scale(s2);
        linear = linear.max(lhs.dist(&rhs));
        let scaled = residue(f1, &zero, &n.scale(2.5), 0.4, tol)?;
        linear = linear.max(scaled.dist(&r1.scale(2.5)));
    }
    Ok(vec![below("simple_pole", simple, 1e-8), below("factored_form", factored, 1e-7), below("real_linearity", linear, 1e-9)])
}

fn arguments() -> Result<Vec<Metric>> {
    let tol = 1e-12;
    let q = |c: [f64; 4]| CdNumber::from_array(3, [c[0], c[1], c[2], c[3], 0.0, 0.0, 0.0, 0.0]);
    let y = q([0.1, 0.0, 0.2, 0.0]);
    let f = |z: &CdNumber| (*z - y).inverse();
    let m = gen(1).lift(3);
    let base = residue_n(f, &y, &m, 0.2, &[gen(1).lift(3)], tol)?;
    let mut indep = 0.0f64;
    for a in [vec![q([0.4, 0.0, 0.3, 0.5])], vec![gen(5).lift(3).scale(0.7), CdNumber::real(0.5).lift(3)]] {
        indep = indep.max(residue_n(f, &y, &m, 0.2, &a, tol)?.dist(&base));
    }
    let mut darg = 0.0f64;
    let mut r = rng(5);
    for mm in [gen(1).lift(3), gen(6).lift(3), unit_imag(&mut r, 3)] {
        let c = Path::circle(CdNumber::zero(3), 1.0, mm)?;
        darg = darg.max(delta_arg_n(|z| Ok(*z), &c, &[])?.dist(&mm.scale(TAU)));
    }
    let mm = gen(5).lift(3);
    let c = Path::circle(CdNumber::zero(3), 1.0, mm)?;
    let f2 = |z: &CdNumber| Ok(*z * *z * *z);
    let q2 = delta_arg_n(f2, &c, &[])?;
    let q1 = delta_arg_n(|z| Ok(f2(z)? + z.scale(0.3) + 0.2), &c, &[])?;
    Ok(vec![below("res_n_independence", indep, 1e-7), below("delta_arg", darg, 1e-8), below("rouche", q1.dist(&q2), 1e-7)])
}

fn strip_probes(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec<CdNumber> {
    (0..20)
        .map(|k| {
            let re = r.gen_range(lo..hi);
            if k % 2 == 0 {
                CdNumber::complex(re, r.gen_range(-3.0..3.0)).lift(2)
            } else {
                unit_imag(r, 2).scale(r.gen_range(0.1..3.0)) + re
            }
        })
        .collect()
}

fn gaussian(alpha: f64) -> Original {
    Original::two_sided(move |t| CdNumber::real((-alpha * t * t).exp()), -1.0, 1.0).with_growth_constant((0.25 / alpha).exp())
}

fn transforms() -> Result<Vec<Metric>> {
    let spec = TransformSpec::linear(2);
    let mut r = rng(6);
    let mut forward = 0.0f64;
    let alpha = 0.8;
    for p in strip_probes(&mut r, -0.9, 0.9) {
        let want = eval_in_plane(&p, |z| (PI / alpha).sqrt() * (z * z / (4.0 * alpha)).exp());
        forward = forward.max(laplace_two_sided(&gaussian(alpha), &p, &spec)?.dist(&want) / want.norm());
    }
    let a = 1.5;
    let lap = Original::two_sided(move |t| CdNumber::real(0.5 * (-a * t.abs()).exp()), -a, a)
        .with_growth_constant(0.5)
        .with_discontinuities(vec![0.0]);
    for p in strip_probes(&mut r, -1.3, 1.3) {
        let want = eval_in_plane(&p, |z| a / (a * a - z * z));
        forward = forward.max(laplace_two_sided(&lap, &p, &spec)?.dist(&want) / want.norm());
    }
    let logistic = Original::two_sided(|t| CdNumber::real(1.0 / (t.exp() + 1.0)), -1.0, 0.0);
    let tight = spec.clone().with_tol(1e-11);
    for p in strip_probes(&mut r, -0.9, -0.1) {
        let want = eval_in_plane(&p, |z| -PI / (PI * z).sin());
        forward = forward.max(laplace_two_sided(&logistic, &p, &tight)?.dist(&want) / want.norm());
    }
    let inv_spec = spec.clone().with_tol(1e-9);
    let mut round = 0.0f64;
    let img = |p: &CdNumber| Ok(eval_in_plane(p, |z| (PI / alpha).sqrt() * (z * z / (4.0 * alpha)).exp()));
    let line = BromwichLine::new(0.0, gen(2), 1.0)?;
    for t in [-1.5, 0.0, 0.7, 2.0] {
        round = round.max((invert(&img, t, &line, &inv_spec)? - (-alpha * t * t).exp()).norm());
    }
    let step_img = |p: &CdNumber| (*p - 0.5).inverse();
    let line = BromwichLine::new(1.5, CdNumber::from_array(2, [0.0, 0.6, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0]), 1.0)?;
    for t in [0.5, 1.0, 2.5] {
        round = round.max((invert(&step_img, t, &line, &inv_spec)? - (0.5 * t).exp()).norm());
    }
    let step = Original::right(|_| CdNumber::real(1.0), 0.0);
    let p = CdNumber::from_array(2, [1.2, 0.3, -0.5, 0.1, 0.0, 0.0, 0.0, 0.0]);
    let mut deriv = 0.0f64;
    for h in [CdNumber::real(1.0).lift(2), CdNumber::from_array(2, [0.0, 0.2, 0.7, -0.4, 0.0, 0.0, 0.0, 0.0])] {
        deriv = deriv.max(diff_under_integral_check(&step, &p, &h, &spec)?);
    }
    let pg = CdNumber::from_array(2, [0.2, 0.4, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let hg = CdNumber::from_array(2, [0.3, -0.1, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0]);
    deriv = deriv.max(diff_under_integral_check(&gaussian(1.0), &pg, &hg, &spec)?);
    Ok(vec![below("closed_forms_rel", forward, 1e-7), below("inversion_round_trip", round, 1e-5), below("derivative_check", deriv, 1e-6)])
}

fn symmetry() -> Result<Vec<Metric>> {
    let lin = TransformSpec::linear(3);
    let sph = TransformSpec::spherical(3)?;
    let probes = [
        CdNumber::from_array(3, [0.2, 0.5, -0.3, 0.1, 0.0, 0.4, 0.0, -0.2]),
        CdNumber::from_array(3, [-0.3, 0.1, 0.6, 0.0, 0.2, 0.0, -0.5, 0.3]),
    ];
    let g = gaussian(1.0);
    let rl = symmetry_report(&|p: &CdNumber| laplace_two_sided(&g, p, &lin), &probes, &lin);
    let rs = symmetry_report(&|p: &CdNumber| laplace_two_sided(&g, p, &sph), &probes, &sph);
    let real_even = rl.conj_sym.max(rl.even_sym).max(rs.spherical_conj_sym).max(rs.even_sym);
    let nonreal = Original::two_sided(|t| gen(1).scale((-t * t).exp()), -1.0, 1.0).with_growth_constant(1.3);
    let rn = symmetry_report(&|p: &CdNumber| laplace_two_sided(&nonreal, p, &lin), &probes, &lin);
    let shifted = Original::two_sided(|t| CdNumber::real((-(t - 1.0) * (t - 1.0)).exp()), -1.0, 1.0).with_growth_constant(4.0);
    let ro = symmetry_report(&|p: &CdNumber| laplace_two_sided(&shifted, p, &lin), &probes, &lin);
    let l2 = TransformSpec::linear(2);
    let qp = [
        CdNumber::from_array(2, [0.2, 0.3, 0.5, -0.4, 0.0, 0.0, 0.0, 0.0]),
        CdNumber::from_array(2, [-0.3, 0.0, 0.8, 0.2, 0.0, 0.0, 0.0, 0.0]),
    ];
    let equi_real = quasi_regularity_check(&g, &l2, &qp)?;
    let bad = Original::two_sided(|t| gen(1).scale((-t * t).exp()), -1.0, 1.0).with_growth_constant(1.3);
    let equi_bad = quasi_regularity_check(&bad, &l2, &qp)?;
    Ok(vec![
        below("real_even_residual", real_even, 1e-8),
        above("nonreal_conj_residual", rn.conj_sym, 1e-3),
        above("uneven_even_residual", ro.even_sym, 1e-3),
        below("equivariance_real", equi_real, 1e-7),
        above("equivariance_i1", equi_bad, 1e-3),
    ])
}

/// Σ n^{-2} to 10⁷ with the Euler–Maclaurin remainder.
fn zeta2_direct() -> f64 {
    let n = 10_000_000u64;
    let mut acc = 0.0;
    for k in (1..n).rev() {
        let x = k as f64;
        acc += 1.0 / (x * x);
    }
    let nf = n as f64;
    acc + 1.0 / nf + 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf)
}

fn special_functions() -> Result<Vec<Metric>> {
    let z2 = special::zeta(&CdNumber::real(2.0))?.re();
    let direct = (z2 - zeta2_direct()).abs().max((z2 - PI * PI / 6.0).abs());
    let mut r = rng(8);
    let (mut fe, mut sym) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let s = r.gen_range(0.05..0.95);
        let t = r.gen_range(-20.0..20.0);
        let z = if k % 2 == 0 { CdNumber::complex(s, t).lift(2) } else { unit_imag(&mut r, if k % 4 == 1 { 2 } else { 3 }).scale(t) + s };
        let zf = special::zeta(&z)?;
        let res = zf - special::chi(&z)? * special::zeta(&(-z + 1.0))?;
        fe = fe.max(res.norm() / zf.norm().max(1.0));
        let one = special::chi(&z)? * special::chi(&(-z + 1.0))?;
        sym = sym.max(one.dist(&CdNumber::one(z.level())));
        let u = z - 0.5;
        let ups = special::upsilon(&u)?;
        sym = sym.max(ups.dist(&special::upsilon(&-u)?) / ups.norm().max(1.0));
        sym = sym.max(ups.conj().dist(&special::upsilon(&u.conj())?) / ups.norm().max(1.0));
    }
    let mut theta = 0.0f64;
    for x in [1.0 / 3.0, 1.0, 3.0] {
        let l = 2.0 * special::theta_psi(x)? + 1.0;
        theta = theta.max((l - (2.0 * special::theta_psi(1.0 / x)? + 1.0) / x.sqrt()).abs());
    }
    let mut gres = 0.0f64;
    let axis = gen(2).lift(2);
    let mut fact = 1.0;
    for n in 0..=5 {
        if n > 0 {
            fact *= n as f64;
        }
        let z0 = CdNumber::real(-(n as f64)).lift(2);
        let v = residue(special::gamma, &z0, &axis, 0.3, 1e-12)?;
        gres = gres.max(v.dist(&axis.scale((-1.0f64).powi(n) / fact)));
    }
    let zr = residue(special::zeta, &CdNumber::real(1.0).lift(2), &axis, 0.4, 1e-12)?.dist(&axis);
    Ok(vec![
        below("zeta2_direct", direct, 1e-8),
        below("functional_equation", fe, 1e-6),
        below("chi_upsilon_symmetries", sym, 1e-8),
        below("theta_modular", theta, 1e-12),
        below("gamma_residues", gres, 1e-7),
        below("zeta_residue", zr, 1e-7),
    ])
}

fn zero_scan() -> Result<Vec<Metric>> {
    let a = special::critical_line_scan(10.0, 26.0, 0.25, &gen(1))?;
    let b = special::critical_line_scan(10.0, 26.0, 0.25, &CdNumber::from_array(3, [0.0, 0.0, 0.6, 0.0, 0.0, 0.8, 0.0, 0.0]))?;
    let agree = if a.len() == b.len() { a.iter().zip(&b).map(|(x, y)| (x.t - y.t).abs()).fold(0.0, f64::max) } else { f64::INFINITY };
    // the minimum of |ζ(1/2 + it)| on a dense grid must sit next to each bracket
    let mut oracle = 0.0f64;
    for z in &a {
        let h = 1e-4;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=2000 {
            let t = z.t - 0.1 + h * i as f64;
            let v = special::zeta_c(Complex64::new(0.5, t), ZetaRep::EulerMaclaurin)?.norm();
            if v < best.0 {
                best = (v, t);
            }
        }
        oracle = oracle.max((best.1 - z.t).abs());
    }
    let first = a.first().map_or(f64::NAN, |z| z.t);
    Ok(vec![
        equal("brackets", a.len() as f64, 3.0),
        above("first_zero_lo", first, 14.0),
        below("first_zero_hi", first, 15.0),
        below("axis_agreement", agree, 1e-6),
        below("dense_sampling_offset", oracle, 1e-4),
    ])
}
