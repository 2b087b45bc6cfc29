use canonical::{
    adjoint_invariants, apply_generator, canonicalize, check_automorphism, enumerate_subalgebras, lambda_generator, Sheet,
    LAMBDA,
};
use catalog::{Catalog, Params};
use classify::ClassifyOptions;
use scalarlin::{rat, RatVec, Scalar};

fn s(p: i64, q: i64) -> Scalar {
    Scalar::Exact(rat(p, q))
}

fn v(xs: &[(i64, i64)]) -> Vec<Scalar> {
    xs.iter().map(|&(p, q)| s(p, q)).collect()
}

fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| s(x, 1)).collect()
}

fn sheet(key: &str) -> Sheet<'static> {
    Sheet::load(Catalog::embedded(), key, &Params::new()).unwrap()
}

#[test]
fn generator_formulas() {
    let l35 = sheet("L(3,5)");
    let a1 = l35.generator("A1").unwrap();
    assert_eq!(apply_generator(&a1, &Params::new(), &s(1, 1), &ints(&[0, 1, 0])).unwrap(), ints(&[1, 1, 0]));
    let lam = lambda_generator(3);
    assert_eq!(apply_generator(&lam, &Params::new(), &s(2, 1), &ints(&[2, 0, 0])).unwrap(), ints(&[1, 0, 0]));

    // inner and outer automorphisms are the identity at t = 0
    let c = Catalog::embedded();
    for w in c.worksheets() {
        let sh = Sheet::load(c, &w.key, &w.param_samples[0]).unwrap();
        let u = ints(&[1, -2, 3, 5][..sh.dim()]);
        for g in w.generators.iter().filter(|g| !g.kind.is_scaling()) {
            assert_eq!(apply_generator(g, &sh.params, &s(0, 1), &u).unwrap(), u, "{} {}", w.key, g.name);
        }
    }
}

#[test]
fn automorphism_checks() {
    let g = sheet("L(4,-7)");
    assert!(check_automorphism(&g.algebra, &g.generator("A3").unwrap(), &s(3, 2)).unwrap());

    let g = sheet("L(3,5)");
    assert!(!check_automorphism(&g.algebra, &g.generator(LAMBDA).unwrap(), &s(2, 1)).unwrap());

    let g = sheet("L(3,6)");
    let t = Scalar::Approx(std::f64::consts::FRAC_PI_4);
    assert!(check_automorphism(&g.algebra, &g.generator("A1").unwrap(), &t).unwrap());
}

#[test]
fn invariant_values() {
    let c = Catalog::embedded();
    let none = Params::new();
    let l48 = adjoint_invariants(c, "L(4,8)", &none, &ints(&[0, 1, 1, 0])).unwrap();
    assert_eq!((l48["I"].clone(), l48["J"].clone()), (s(1, 1), s(0, 1)));
    assert_eq!(adjoint_invariants(c, "L(3,5)", &none, &ints(&[1, 0, 1])).unwrap()["I"], s(4, 1));
    let l413 = adjoint_invariants(c, "L(4,13)", &none, &ints(&[0, 0, 1, 2])).unwrap();
    assert_eq!((l413["I"].clone(), l413["J"].clone()), (s(1, 1), s(2, 1)));
}

#[test]
fn reduction_examples() {
    let c = Catalog::embedded();
    let none = Params::new();
    let half = v(&[(1, 2), (0, 1), (1, 2)]);

    let r = canonicalize(c, "L(3,5)", &none, &ints(&[1, 0, 1])).unwrap();
    assert_eq!((r.case, r.representative.clone()), (1, half.clone()));
    // A1(0) and S(1) are identities, then λ(2)
    let params: Vec<Scalar> = r.transcript.iter().map(|st| st.parameter.clone()).collect();
    assert_eq!(params, ints(&[0, 1, 2]));
    assert_eq!(r.transcript.last().unwrap().generator, LAMBDA);

    let r = canonicalize(c, "L(3,5)", &none, &ints(&[0, 1, 0])).unwrap();
    assert_eq!((r.case, r.representative), (2, half));

    let r = canonicalize(c, "L(4,-7)", &none, &ints(&[1, 0, 0, 1])).unwrap();
    assert!(r.is_exact());
    assert_eq!((r.case, r.representative), (6, ints(&[1, 0, 0, 1])));

    // an irrational step parameter switches to floating point
    let r = canonicalize(c, "L(3,5)", &none, &ints(&[1, 0, 2])).unwrap();
    assert!(!r.is_exact() && r.landed());
    let json = r.to_json();
    assert_eq!(json["transcript"][1]["mode"], "approx");
}

#[test]
fn enumeration() {
    let c = Catalog::embedded();
    let opts = ClassifyOptions::default();
    let reps = |key: &str, p: &Params| -> Vec<RatVec> {
        enumerate_subalgebras(c, key, p, opts).unwrap().into_iter().map(|e| e.row.h0).collect()
    };
    let e = |n: usize, i: usize| liecore::unit(n, i - 1);
    let none = Params::new();
    let mut l48 = reps("L(4,-8)", &none);
    l48.sort();
    let mut want = vec![e(4, 1), e(4, 4), vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]];
    want.sort();
    assert_eq!(l48, want);
    assert_eq!(reps("L(3,6)", &none), vec![e(3, 1)]);

    let rows = enumerate_subalgebras(c, "L(4,13)", &none, opts).unwrap();
    let ks: Vec<_> = rows.iter().filter_map(|r| r.row.bindings.get("k")).collect();
    assert!(!ks.is_empty());
    for r in &rows {
        let h = &r.row.h0;
        let generic = h[0] == rat(0, 1) && h[1] == rat(0, 1) && h[2] == rat(1, 1);
        assert!(generic || *h == e(4, 1) || *h == e(4, 4), "{h:?}");
    }
    // a special regime is reached through the generic key
    let p: Params = [("x".to_string(), rat(1, 1))].into();
    let routed = enumerate_subalgebras(c, "L(3,2,x)", &p, opts).unwrap();
    assert_eq!(routed[0].report.algebra, "L(3,2,1)");
}
