use num_traits::Zero;
use proptest::prelude::*;
use scalarlin::expr::{parse, Empty};
use scalarlin::{rat, RatMatrix, Rational, SymForm};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |d| RatMatrix::from_i64(rows, cols, &d))
}

/// Unimodular-ish invertible matrix: a product of elementary row operations.
fn invertible(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..8).prop_map(move |ops| {
        let mut m = RatMatrix::identity(n);
        for (i, j, c) in ops {
            if i != j {
                let mut e = RatMatrix::identity(n);
                e[(i, j)] = rat(c, 1);
                m = e.mul(&m);
            }
        }
        m
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = SymForm> {
    prop::collection::vec(-2i64..=2, n * (n + 1) / 2)
        .prop_map(move |u| SymForm::new(n, u.into_iter().map(|v| rat(v, 1)).collect()))
}

proptest! {
    #[test]
    fn nullspace_is_annihilated(m in small_matrix(3, 5)) {
        for v in m.nullspace() {
            prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_plus_nullity(m in small_matrix(4, 6)) {
        prop_assert_eq!(m.rank() + m.nullspace().len(), 6);
    }

    #[test]
    fn char_poly_is_similarity_invariant(a in small_matrix(4, 4), s in invertible(4)) {
        let sinv = s.inverse().unwrap();
        let b = sinv.mul(&a).mul(&s);
        prop_assert_eq!(a.char_poly().unwrap(), b.char_poly().unwrap());
    }

    #[test]
    fn char_poly_constant_term_is_signed_determinant(a in small_matrix(3, 3)) {
        let p = a.char_poly().unwrap();
        prop_assert_eq!(p[3].clone(), -a.determinant().unwrap());
    }

    #[test]
    fn signature_is_congruence_invariant(q in symmetric(4), s in invertible(4)) {
        let (p, n, z) = q.signature();
        prop_assert_eq!(p + n + z, 4);
        prop_assert_eq!(q.congruent(&s).signature(), (p, n, z));
    }

    #[test]
    fn inverse_round_trips(s in invertible(3)) {
        prop_assert_eq!(s.mul(&s.inverse().unwrap()), RatMatrix::identity(3));
    }

    #[test]
    fn integer_arithmetic_stays_exact(a in -50i64..50, b in 1i64..20, c in -5i64..5) {
        let src = format!("({a})/({b}) - ({c})^2*({a})");
        let v = parse(&src).unwrap().eval(&Empty).unwrap();
        let expected = rat(a, b) - Rational::from_integer((c * c * a).into());
        prop_assert_eq!(v.as_exact(), Some(&expected));
    }

    #[test]
    fn display_reparses_to_same_value(a in -9i64..9, b in 1i64..9, k in -3i32..4) {
        let src = format!("-({a}/{b} - x)^{k}*x + {b}/x");
        let e = parse(&src).unwrap();
        let x = rat(7, 3);
        let env = |n: &str| (n == "x").then(|| scalarlin::Scalar::Exact(x.clone()));
        let v1 = e.eval(&env);
        let v2 = parse(&e.to_string()).unwrap().eval(&env);
        prop_assert_eq!(v1, v2);
    }
}
