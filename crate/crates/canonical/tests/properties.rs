//! Randomised checks over every worksheet and parameter sample.

use canonical::{apply_generator, close, exact, preserves_bracket, to_exact, Sheet, LAMBDA};
use catalog::{Catalog, GenKind};
use classify::{coordinate_complement, invariant_forms, isotropy_type, kappa};
use liecore::{LieAlgebra, QuotientMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalarlin::{rat, Rational, Scalar};

fn rational(rng: &mut impl Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=4))
}

fn nonzero(rng: &mut impl Rng) -> Rational {
    loop {
        let r = rational(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

fn vector(rng: &mut impl Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::Exact(rational(rng))).collect()
}

/// Generator parameters stay small so that `exp(t)` factors do not swamp
/// the comparison.
fn parameter(rng: &mut impl Rng, kind: GenKind) -> Scalar {
    let t = rat(rng.random_range(-6..=6), rng.random_range(2..=4));
    if kind.is_scaling() && t == rat(0, 1) {
        Scalar::int(1)
    } else {
        Scalar::Exact(t)
    }
}

fn sheets(c: &'static Catalog) -> Vec<Sheet<'static>> {
    let mut out = Vec::new();
    for w in c.worksheets() {
        for p in &w.param_samples {
            let sh = Sheet::load(c, &w.key, p).unwrap();
            assert_eq!(sh.key(), w.key, "{p:?} routes elsewhere");
            out.push(sh);
        }
    }
    out
}

fn report(failures: Vec<String>) {
    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures[..failures.len().min(40)].join("\n"));
}

#[test]
fn generators_preserve_brackets() {
    let c = Catalog::embedded();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut checked = 0;
    for sh in sheets(c) {
        for gen in &sh.worksheet.generators {
            for _ in 0..200 {
                let t = parameter(&mut rng, gen.kind);
                let (u, v) = (vector(&mut rng, sh.dim()), vector(&mut rng, sh.dim()));
                checked += 1;
                if !preserves_bracket(&sh.algebra, gen, &t, &u, &v).unwrap() {
                    failures.push(format!("{} {:?} {} at t = {t}", sh.key(), sh.params, gen.name));
                    break;
                }
            }
        }
    }
    assert!(checked > 30_000);
    report(failures);
}

#[test]
fn lambda_is_not_an_automorphism() {
    let c = Catalog::embedded();
    let mut nonabelian = 0;
    for sh in sheets(c) {
        let n = sh.dim();
        let abelian = (0..n).all(|i| (0..n).all(|j| sh.algebra.structure(i, j).iter().all(|x| *x == rat(0, 1))));
        if abelian {
            continue;
        }
        nonabelian += 1;
        let lam = sh.generator(LAMBDA).unwrap();
        assert!(!canonical::check_automorphism(&sh.algebra, &lam, &Scalar::int(2)).unwrap(), "{}", sh.key());
    }
    assert!(nonabelian > 0);
}

#[test]
fn invariants_are_constant_on_inner_orbits() {
    let c = Catalog::embedded();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for sh in sheets(c) {
        for gen in sh.worksheet.generators.iter().filter(|g| g.kind == GenKind::Inner) {
            for _ in 0..200 {
                let t = parameter(&mut rng, gen.kind);
                let v = vector(&mut rng, sh.dim());
                let w = apply_generator(gen, &sh.params, &t, &v).unwrap();
                let (a, b) = (sh.invariants(&v).unwrap(), sh.invariants(&w).unwrap());
                if let Some((name, _)) = a.iter().find(|(k, x)| !close(x, &b[*k])) {
                    failures.push(format!("{} {:?} {name} under {}({t})", sh.key(), sh.params, gen.name));
                    break;
                }
            }
        }
    }
    report(failures);
}

/// Random vectors biased towards the special strata: sparse vectors, and
/// images of each listed representative under random exact automorphisms.
fn samples(sh: &Sheet, rng: &mut impl Rng, count: usize) -> Vec<Vec<Rational>> {
    let n = sh.dim();
    let c = Catalog::embedded();
    let reps: Vec<Vec<Rational>> = c.worksheet_rows(sh.key(), &sh.params).unwrap().into_iter().map(|r| r.h0).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Rational> = match out.len() % 3 {
            0 => (0..n).map(|_| rational(rng)).collect(),
            1 => (0..n).map(|_| if rng.random_bool(0.5) { rat(0, 1) } else { nonzero(rng) }).collect(),
            _ => {
                let mut v = exact(&reps[rng.random_range(0..reps.len())]);
                v.iter_mut().for_each(|x| *x = &*x * &Scalar::Exact(nonzero(rng)));
                for _ in 0..3 {
                    let gens = &sh.worksheet.generators;
                    let gen = &gens[rng.random_range(0..gens.len())];
                    let w = apply_generator(gen, &sh.params, &parameter(rng, gen.kind), &v).unwrap();
                    if w.iter().all(Scalar::is_exact) {
                        v = w;
                    }
                }
                to_exact(&v).unwrap()
            }
        };
        if v.iter().any(|x| *x != rat(0, 1)) {
            out.push(v);
        }
    }
    out
}

/// κ, isotropy label and number of invariant forms of the line through `v`.
fn orbit_data(g: &LieAlgebra, v: &[Rational]) -> (usize, Option<catalog::IsotropyLabel>, usize) {
    let m = g.quotient_action(v, &coordinate_complement(v), QuotientMode::Quotient).unwrap();
    (kappa(g, v).unwrap(), isotropy_type(&m).label(), invariant_forms(&m).len())
}

#[test]
fn cases_partition_and_land() {
    let c = Catalog::embedded();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut per_regime = std::collections::BTreeMap::new();
    for sh in sheets(c) {
        // 1000 vectors at the first sample of each regime, 200 at the others
        let count = if per_regime.insert(sh.key().to_string(), ()).is_none() { 1000 } else { 200 };
        let mut seen = std::collections::BTreeSet::new();
        let mut target_data = std::collections::HashMap::new();
        for v in samples(&sh, &mut rng, count) {
            let tag = || format!("{} {:?} {}", sh.key(), sh.params, canonical::vector_to_string(&exact(&v)));
            let matched = sh.matching_cases(&exact(&v)).unwrap();
            if matched.len() != 1 {
                failures.push(format!("{}: cases {matched:?}", tag()));
                continue;
            }
            let r = match sh.canonicalize(&exact(&v)) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{}: {e}", tag()));
                    continue;
                }
            };
            seen.insert(r.case);
            if !r.landed() {
                failures.push(format!(
                    "{}: case {} gives {} not {}",
                    tag(),
                    r.case,
                    canonical::vector_to_string(&r.representative),
                    canonical::vector_to_string(&r.target)
                ));
                continue;
            }
            // the steps before λ are automorphisms, and λ only rescales
            let (steps, lam) = r.transcript.split_at(r.transcript.len() - 1);
            for st in steps {
                let gen = sh.generator(&st.generator).unwrap();
                if !canonical::check_automorphism(&sh.algebra, &gen, &st.parameter).unwrap() {
                    failures.push(format!("{}: {}({}) is not an automorphism", tag(), st.generator, st.parameter));
                }
            }
            let pre = sh.replay(&exact(&v), steps).unwrap();
            let scaled: Vec<Scalar> = r.representative.iter().map(|x| x * &lam[0].parameter).collect();
            if !pre.iter().zip(&scaled).all(|(a, b)| close(a, b)) {
                failures.push(format!("{}: replay differs by more than λ", tag()));
            }
            let target = to_exact(&r.target).expect("printed representatives are rational here");
            let want = target_data.entry(target.clone()).or_insert_with(|| orbit_data(&sh.algebra, &target));
            if orbit_data(&sh.algebra, &v) != *want {
                failures.push(format!("{}: orbit data changes along the transcript", tag()));
            }
        }
        let all: Vec<u32> = sh.worksheet.cases.iter().map(|c| c.id).collect();
        let missed: Vec<_> = all.iter().filter(|id| !seen.contains(id)).collect();
        if !missed.is_empty() {
            failures.push(format!("{} {:?}: cases never reached {missed:?}", sh.key(), sh.params));
        }
    }
    report(failures);
}

/// Case targets are fixed points, and each listed representative lies on
/// the line of the target its case produces. The listing may print a
/// multiple of the target, e.g. `1/2*(e1 + e3)` for `e1 + e3`.
#[test]
fn representatives_are_fixed_points() {
    let c = Catalog::embedded();
    let mut failures = Vec::new();
    for sh in sheets(c) {
        for row in c.worksheet_rows(sh.key(), &sh.params).unwrap() {
            let tag = format!("{} {:?} {}", sh.key(), row.bindings, row.rep);
            let r = match sh.canonicalize(&exact(&row.h0)) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            let target = to_exact(&r.target).unwrap();
            if !r.landed() || scalarlin::RatMatrix::from_rows(&[row.h0.clone(), target.clone()]).rank() != 1 {
                failures.push(format!("{tag}: case {} gives {}", r.case, canonical::vector_to_string(&r.target)));
                continue;
            }
            let again = sh.canonicalize(&r.target).unwrap();
            if again.case != r.case || again.representative != r.target {
                failures.push(format!("{tag}: target {} is not fixed", canonical::vector_to_string(&r.target)));
            }
        }
    }
    report(failures);
}
