use std::collections::BTreeMap;

use liecore::{LieAlgebra, QuotientMode};
use proptest::prelude::*;
use scalarlin::{rat, RatMatrix, RatVec, Rational};

fn v(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x, 1)).collect()
}

fn half(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x, 2)).collect()
}

fn alg(key: &str, dim: usize, brackets: &[(usize, usize, RatVec)]) -> LieAlgebra {
    LieAlgebra::new(key, BTreeMap::new(), dim, brackets).unwrap()
}

// Bracket tables typed in from the appendix, independent of the catalog data.
fn l35() -> LieAlgebra {
    alg("L(3,5)", 3, &[(1, 2, v(&[1, 0, 0])), (1, 3, v(&[0, -2, 0])), (2, 3, v(&[0, 0, 1]))])
}

fn l36() -> LieAlgebra {
    alg("L(3,6)", 3, &[(1, 2, v(&[0, 0, 1])), (1, 3, v(&[0, -1, 0])), (2, 3, v(&[1, 0, 0]))])
}

fn l32(x: Rational) -> LieAlgebra {
    alg("L(3,2,x)", 3, &[(1, 3, v(&[1, 0, 0])), (2, 3, vec![rat(0, 1), x, rat(0, 1)])])
}

fn l48() -> LieAlgebra {
    alg("L(4,8)", 4, &[(2, 3, v(&[1, 0, 0, 0])), (2, 4, v(&[0, 1, 0, 0])), (3, 4, v(&[0, 0, -1, 0]))])
}

fn l411() -> LieAlgebra {
    alg("L(4,11)", 4, &[(2, 3, v(&[1, 0, 0, 0])), (2, 4, v(&[0, 0, -1, 0])), (3, 4, v(&[0, 1, 0, 0]))])
}

fn l412(x: Rational) -> LieAlgebra {
    let z = rat(0, 1);
    alg(
        "L(4,12,x)",
        4,
        &[
            (1, 4, vec![&x * rat(2, 1), z.clone(), z.clone(), z.clone()]),
            (2, 3, v(&[1, 0, 0, 0])),
            (2, 4, vec![z.clone(), x.clone(), rat(-1, 1), z.clone()]),
            (3, 4, vec![z.clone(), rat(1, 1), x, z]),
        ],
    )
}

fn l4m3() -> LieAlgebra {
    alg("L(4,-3)", 4, &[(2, 3, v(&[1, 0, 0, 0]))])
}

fn l4m7() -> LieAlgebra {
    alg("L(4,-7)", 4, &[(1, 2, v(&[1, 0, 0, 0])), (1, 3, v(&[0, -2, 0, 0])), (2, 3, v(&[0, 0, 1, 0]))])
}

#[test]
fn printed_brackets() {
    assert_eq!(l35().bracket(&v(&[1, 0, 0]), &v(&[0, 0, 1])).unwrap(), v(&[0, -2, 0]));
    assert_eq!(l48().bracket(&v(&[0, 1, 0, 0]), &v(&[0, 0, 0, 1])).unwrap(), v(&[0, 1, 0, 0]));
}

#[test]
fn jacobi_holds_on_catalog_samples_and_fails_on_a_corrupted_table() {
    assert!(l36().jacobi_check());
    assert!(l412(rat(1, 2)).jacobi_check());
    // Rescaling [e1, e3] keeps the only Jacobi triple balanced: still a Lie algebra.
    let rescaled = alg("L(3,5)'", 3, &[(1, 2, v(&[1, 0, 0])), (1, 3, v(&[0, -1, 0])), (2, 3, v(&[0, 0, 1]))]);
    assert!(rescaled.jacobi_check());
    // [[e1,e2],e3] = -2e2 while the other two terms vanish.
    let broken = alg("L(3,5)''", 3, &[(1, 2, v(&[1, 0, 0])), (1, 3, v(&[0, -2, 0])), (2, 3, v(&[1, 0, 0]))]);
    assert!(!broken.jacobi_check());
    let mut t = vec![v(&[0, 0]); 4];
    t[1] = v(&[1, 0]);
    assert!(!LieAlgebra::from_tensor("not antisymmetric", 2, t).jacobi_check());
}

#[test]
fn ad_matrices() {
    assert!(l4m3().ad_matrix(&v(&[0, 0, 0, 1])).unwrap().is_zero());
    let ad = l32(rat(-1, 1)).ad_matrix(&v(&[0, 0, 1])).unwrap();
    assert_eq!(ad, RatMatrix::from_i64(3, 3, &[-1, 0, 0, 0, 1, 0, 0, 0, 0]));
}

#[test]
fn quotient_actions() {
    let m = l48()
        .quotient_action(&v(&[0, 0, 0, 1]), &[v(&[1, 0, 0, 0]), v(&[0, 1, 1, 0]), v(&[0, -1, 1, 0])], QuotientMode::Strict)
        .unwrap();
    assert_eq!(m, RatMatrix::from_i64(3, 3, &[0, 0, 0, 0, 0, 1, 0, 1, 0]));

    let m = l411()
        .quotient_action(&v(&[0, 0, 0, 1]), &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, -1, 0])], QuotientMode::Strict)
        .unwrap();
    // λ(λ² + 1)
    assert_eq!(m.char_poly().unwrap(), v(&[1, 0, 1, 0]));

    let m = l4m3()
        .quotient_action(&v(&[0, 0, 0, 1]), &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])], QuotientMode::Strict)
        .unwrap();
    assert!(m.is_zero());
}

#[test]
fn strict_mode_rejects_non_reductive_complements() {
    // [e1, e2] = e1 in L(3,5), so (e2, e3) is not ad(e1)-invariant.
    let g = l35();
    let h = v(&[1, 0, 0]);
    let m = [v(&[0, 1, 0]), v(&[0, 0, 1])];
    assert!(g.quotient_action(&h, &m, QuotientMode::Strict).is_err());
    let q = g.quotient_action(&h, &m, QuotientMode::Quotient).unwrap();
    // ad(e1) e2 = e1 (dropped), ad(e1) e3 = -2 e2
    assert_eq!(q, RatMatrix::from_i64(2, 2, &[0, -2, 0, 0]));
}

#[test]
fn bracket_containment() {
    let g = l32(rat(-1, 1));
    let h = vec![v(&[0, 0, 1])];
    let m = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
    assert!(g.bracket_contained(&m, &m, &h));

    let g = l4m7();
    let h = half(&[1, 0, -1, 0]);
    let m = vec![v(&[0, 0, 0, 1]), v(&[0, 1, 0, 0]), half(&[-1, 0, -1, 0])];
    assert!(g.bracket_contained(std::slice::from_ref(&h), &m, &m));
    let all: Vec<RatVec> = (0..4).map(|i| g.basis_vector(i)).collect();
    assert!(!g.bracket_contained(&all, &m, &m));
    assert!(g.bracket_contained(&m, &m, &all));
}

fn small_vec(n: usize) -> impl Strategy<Value = RatVec> {
    prop::collection::vec((-4i64..=4, 1i64..=3), n).prop_map(|xs| xs.into_iter().map(|(p, q)| rat(p, q)).collect())
}

fn samples() -> Vec<LieAlgebra> {
    vec![l35(), l36(), l32(rat(-1, 2)), l48(), l411(), l412(rat(3, 4)), l4m3(), l4m7()]
}

fn commutator(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    a.mul(b).add(&b.mul(a).scale(&rat(-1, 1)))
}

proptest! {
    #[test]
    fn antisymmetry(idx in 0usize..8, u in small_vec(4), w in small_vec(4)) {
        let g = &samples()[idx];
        let n = g.dim();
        let (u, w) = (&u[..n], &w[..n]);
        let s: Vec<Rational> = g.bracket(u, w).unwrap().iter().zip(g.bracket(w, u).unwrap()).map(|(a, b)| a + b).collect();
        prop_assert!(s.iter().all(|x| *x == rat(0, 1)));
    }

    #[test]
    fn jacobi_on_random_vectors(idx in 0usize..8, a in small_vec(4), b in small_vec(4), c in small_vec(4)) {
        let g = &samples()[idx];
        let n = g.dim();
        let (a, b, c) = (&a[..n], &b[..n], &c[..n]);
        let br = |x: &[Rational], y: &[Rational]| g.bracket(x, y).unwrap();
        let s1 = br(&br(a, b), c);
        let s2 = br(&br(b, c), a);
        let s3 = br(&br(c, a), b);
        for i in 0..n {
            prop_assert_eq!(&s1[i] + &s2[i] + &s3[i], rat(0, 1));
        }
    }

    #[test]
    fn ad_is_a_representation(idx in 0usize..8, u in small_vec(4), w in small_vec(4)) {
        let g = &samples()[idx];
        let n = g.dim();
        let (u, w) = (&u[..n], &w[..n]);
        let lhs = g.ad_matrix(&g.bracket(u, w).unwrap()).unwrap();
        let rhs = commutator(&g.ad_matrix(u).unwrap(), &g.ad_matrix(w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_spectrum_ignores_complement_basis(a in -3i64..=3, b in -3i64..=3, c in 1i64..=3) {
        // L(4,8), h0 = e4, reductive complement (e1, e2, e3) and a rebased version of it.
        let g = l48();
        let h = v(&[0, 0, 0, 1]);
        let m1 = vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])];
        let m2 = vec![v(&[c, 0, 0, 0]), v(&[a, 1, b, 0]), v(&[0, 0, 1, 0])];
        let p1 = g.quotient_action(&h, &m1, QuotientMode::Strict).unwrap().char_poly().unwrap();
        let p2 = g.quotient_action(&h, &m2, QuotientMode::Quotient).unwrap().char_poly().unwrap();
        prop_assert_eq!(p1, p2);
    }
}
