use cdanalysis::{gen, CdError, CdNumber};
use proptest::prelude::*;

/// Oriented lines of the Fano plane: `i_a i_b = i_c` and cyclic.
const TRIPLES: [(usize, usize, usize); 7] = [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (1, 7, 6), (2, 5, 7), (3, 6, 5)];

fn fano(j: usize, k: usize) -> (f64, usize) {
    if j == 0 {
        return (1.0, k);
    }
    if k == 0 {
        return (1.0, j);
    }
    if j == k {
        return (-1.0, 0);
    }
    for (a, b, c) in TRIPLES {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            if (j, k) == (x, y) {
                return (1.0, z);
            }
            if (j, k) == (y, x) {
                return (-1.0, z);
            }
        }
    }
    unreachable!()
}

fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn close(a: &CdNumber, b: &CdNumber, scale: f64) -> bool {
    a.dist(b) <= 1e-12 * scale.max(1.0)
}

fn cd(level: u8) -> impl Strategy<Value = CdNumber> {
    prop::collection::vec(-3.0f64..3.0, 1usize << level).prop_map(move |v| CdNumber::new(level, &v).unwrap())
}

#[test]
fn full_generator_table() {
    for j in 0..8 {
        for k in 0..8 {
            let (s, m) = fano(j, k);
            assert_eq!(gen(j).lift(3) * gen(k).lift(3), gen(m).lift(3).scale(s), "i{j} i{k}");
        }
    }
    assert_eq!(gen(1) * gen(2), gen(3));
    assert_eq!(gen(5) * gen(6), -gen(3).lift(3));
    let z = CdNumber::new(3, &[1.0, 2.0, -1.0, 0.5, 0.0, 3.0, -2.0, 1.0]).unwrap();
    assert_eq!(CdNumber::one(3) * z, z);
}

#[test]
fn scalar_examples() {
    assert_eq!(CdNumber::complex(1.0, 2.0).conj(), CdNumber::complex(1.0, -2.0));
    assert_eq!(CdNumber::real(4.0).conj(), CdNumber::real(4.0));
    assert_eq!(CdNumber::new(2, &[1.0; 4]).unwrap().norm(), 2.0);
    assert_eq!((CdNumber::real(3.0) - gen(2).scale(4.0)).re(), 3.0);
    assert_eq!((CdNumber::real(2.0) + gen(3).scale(5.0)).proj(3).unwrap(), 5.0);
    assert_eq!(gen(7).proj(0).unwrap(), 0.0);
    assert_eq!(gen(1).inverse().unwrap(), -gen(1));
    assert!(matches!(CdNumber::zero(2).inverse(), Err(CdError::ZeroDivision(_))));
    assert!(gen(5).embed(2).is_err());
}

#[test]
fn octonions_are_not_associative() {
    let (a, b, c) = (gen(1).lift(3), gen(2).lift(3), gen(4).lift(3));
    assert_eq!((a * b) * c, -(a * (b * c)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn quaternion_product_is_hamilton(a in cd(2), b in cd(2)) {
        let mut x = [0.0; 4];
        let mut y = [0.0; 4];
        x.copy_from_slice(a.coeffs());
        y.copy_from_slice(b.coeffs());
        let h = CdNumber::new(2, &hamilton(x, y)).unwrap();
        prop_assert!(close(&(a * b), &h, a.norm() * b.norm()));
    }

    #[test]
    fn quaternions_associate(a in cd(2), b in cd(2), c in cd(2)) {
        let s = a.norm() * b.norm() * c.norm();
        prop_assert!(close(&((a * b) * c), &(a * (b * c)), s));
    }

    #[test]
    fn octonions_are_alternative(z in cd(3), y in cd(3)) {
        let s = z.norm() * z.norm() * y.norm();
        prop_assert!(close(&(z * (z * y)), &((z * z) * y), s));
        prop_assert!(close(&((y * z) * z), &(y * (z * z)), s));
        prop_assert!(close(&((z * y) * z), &(z * (y * z)), s));
    }

    #[test]
    fn conjugation_reverses_products(level in 0u8..=3, seed in prop::collection::vec(-3.0f64..3.0, 16)) {
        let n = 1usize << level;
        let a = CdNumber::new(level, &seed[..n]).unwrap();
        let b = CdNumber::new(level, &seed[8..8 + n]).unwrap();
        prop_assert!(close(&(a * b).conj(), &(b.conj() * a.conj()), a.norm() * b.norm()));
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-12 * (a.norm() * b.norm()).max(1.0));
        let zz = a * a.conj();
        prop_assert!(close(&zz, &CdNumber::real(a.norm_sqr()).lift(level), a.norm_sqr()));
    }

    #[test]
    fn closed_formulas_match_coefficients(z in prop_oneof![cd(2), cd(3)]) {
        prop_assert!(close(&z.conj_formula().unwrap(), &z.conj(), z.norm()));
        prop_assert!((z.re_formula().unwrap() - z.re()).abs() <= 1e-12 * z.norm().max(1.0));
        prop_assert!((z.norm_formula().unwrap() - z.norm()).abs() <= 1e-12 * z.norm().max(1.0));
        for j in 0..z.dim() {
            prop_assert!((z.proj_formula(j).unwrap() - z.coeffs()[j]).abs() <= 1e-12 * z.norm().max(1.0));
        }
    }

    #[test]
    fn inverse_both_sides(z in cd(3)) {
        prop_assume!(z.norm() > 1e-3);
        let w = z.inverse().unwrap();
        let one = CdNumber::one(3);
        prop_assert!(close(&(z * w), &one, 1.0));
        prop_assert!(close(&(w * z), &one, 1.0));
    }

    #[test]
    fn embedding_commutes_with_products(a in cd(1), b in cd(1)) {
        let lifted = a.embed(3).unwrap() * b.embed(3).unwrap();
        prop_assert_eq!(lifted, (a * b).embed(3).unwrap());
        let q = (a * b).embed(2).unwrap();
        prop_assert_eq!(q.embed(3).unwrap(), lifted);
    }

    #[test]
    fn json_round_trip(z in cd(3)) {
        let s = serde_json::to_string(&z).unwrap();
        let back: CdNumber = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, z);
    }
}
