use catalog::{Catalog, Variant};
use scalarlin::expr::parse;
use vfields::{vf_bracket_at, vf_eval, verify_action, Constants, Realization, VectorField, FAIL_TOL, PASS_TOL};

fn realization(id: &str) -> Realization<'static> {
    Realization::new(Catalog::embedded().petrov_action(id, Variant::Corrected).unwrap()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn field_values() {
    let r = realization("32.12");
    assert_eq!(r.eval(3, &[1.0, 2.0, 3.0, 0.0]).unwrap(), vec![-3.0, 0.0, 2.0, 0.0]);
    let d2 = VectorField::from_p(&parse("p2").unwrap(), 4).unwrap();
    assert_eq!(vf_eval(&d2, &[0.3, 0.1, 0.7, 0.9], &Constants::new()).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    let r = realization("30.6");
    assert_eq!(r.eval(2, &[0.0; 4]).unwrap(), vec![0.0; 4]);
}

#[test]
fn bracket_values() {
    let r = realization("32.12");
    for p in r.sample_points(5, 1) {
        assert!(close(&r.bracket_at(0, 3, &p).unwrap(), &r.eval(1, &p).unwrap(), 1e-12));
        assert!(close(&r.bracket_at(2, 2, &p).unwrap(), &[0.0; 4], 0.0));
    }
    let r = realization("30.1");
    let p = [1.0, 1.0, 0.0, 0.0];
    assert!(close(&r.bracket_at(0, 2, &p).unwrap(), &r.eval(1, &p).unwrap(), 1e-12));
}

#[test]
fn bracket_is_antisymmetric_and_satisfies_jacobi() {
    let c = Catalog::embedded();
    for a in c.actions() {
        let r = Realization::new(a).unwrap();
        let k = a.group_dim;
        let sym: Vec<Vec<VectorField>> = (0..k).map(|i| (0..k).map(|j| r.fields[i].bracket(&r.fields[j])).collect()).collect();
        for p in r.sample_points(20, r.seed() ^ 1) {
            for i in 0..k {
                for j in 0..k {
                    let (xy, yx) = (r.bracket_at(i, j, &p).unwrap(), r.bracket_at(j, i, &p).unwrap());
                    assert!(xy.iter().zip(&yx).all(|(u, v)| (u + v).abs() <= 1e-8), "{} [{i},{j}]", a.id);
                    for l in 0..k {
                        let f = &r.fields;
                        let terms = [
                            vf_bracket_at(&sym[i][j], &f[l], &p, &r.constants).unwrap(),
                            vf_bracket_at(&sym[j][l], &f[i], &p, &r.constants).unwrap(),
                            vf_bracket_at(&sym[l][i], &f[j], &p, &r.constants).unwrap(),
                        ];
                        let sum: Vec<f64> = (0..p.len()).map(|m| terms.iter().map(|t| t[m]).sum()).collect();
                        assert!(sum.iter().all(|x| x.abs() <= 1e-8), "{} Jacobi {i} {j} {l}: {sum:?}", a.id);
                    }
                }
            }
        }
    }
}

#[test]
fn constants_do_not_depend_on_the_points() {
    let c = Catalog::embedded();
    for a in c.actions() {
        let r = Realization::new(a).unwrap();
        let points = r.sample_points(60, r.seed());
        let (first, second) = points.split_at(30);
        let (f, g) = (r.fit(first).unwrap(), r.fit(second).unwrap());
        let flat = |x: &vfields::Fit| x.constants.iter().flatten().flatten().copied().collect::<Vec<f64>>();
        assert!(close(&flat(&f), &flat(&g), 1e-8), "{}", a.id);
    }
}

#[test]
fn corrected_actions_verify() {
    let c = Catalog::embedded();
    for a in c.actions() {
        let rep = verify_action(c, &a.id, Variant::Corrected).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(rep.identified_class.as_deref(), Some(a.class.as_str()));
        assert_eq!(rep.preferred_isotropy_ok.is_none(), a.id == "32.26", "{}", a.id);
    }
}

#[test]
fn spec_reports() {
    let c = Catalog::embedded();
    let rep = verify_action(c, "32.12", Variant::Corrected).unwrap();
    assert!(rep.closure_residual <= PASS_TOL && rep.identification_residual <= PASS_TOL);
    assert_eq!(rep.identified_class.as_deref(), Some("L(4,1)"));
    let basis: Vec<String> = c.petrov_action("32.12", Variant::Corrected).unwrap().basis.iter().map(|e| e.to_string()).collect();
    assert_eq!(basis, ["X3", "X2", "X1", "X4"]);

    let rep = verify_action(c, "30.6", Variant::Typo).unwrap();
    assert!(rep.closure_residual > FAIL_TOL, "{rep:?}");

    let a = c.petrov_action("32.24(-)", Variant::Corrected).unwrap();
    assert_eq!(a.h0.as_ref().unwrap().to_string(), "1/2*(X1 + X3 + X4)");
    assert_eq!(verify_action(c, "32.24(-)", Variant::Corrected).unwrap().preferred_isotropy_ok, Some(true));

    let json = verify_action(c, "32.26", Variant::Corrected).unwrap().to_json();
    assert_eq!(json["identified_class"], "L(4,-3)");
    assert!(json["preferred_isotropy_ok"].is_null());
}

#[test]
fn typo_variants_fail() {
    let c = Catalog::embedded();
    let ids = c.typo_ids();
    for id in ["30.6", "30.8", "32.07", "32.24(+)", "32.24(-)"] {
        assert!(ids.contains(&id), "{id}");
    }
    for id in ids {
        let good = verify_action(c, id, Variant::Corrected).unwrap();
        let bad = verify_action(c, id, Variant::Typo).unwrap();
        assert!(bad.fails_against(&good), "{bad:?}");
        if id == "30.8" {
            // closes, but onto the Heisenberg algebra
            assert!(bad.closure_residual <= PASS_TOL);
            assert_eq!(bad.identified_class.as_deref(), Some("L(3,1)"));
        } else {
            assert!(bad.closure_residual > FAIL_TOL, "{bad:?}");
        }
    }
}

#[test]
fn dependent_samples_are_rejected() {
    // X3 = -x2*X1 + x1*X2 pointwise, so one point cannot separate them
    let r = realization("30.1");
    assert!(matches!(r.fit(&r.sample_points(1, 3)), Err(vfields::VfError::Singular(_))));
    assert!(matches!(r.fit(&[]), Err(vfields::VfError::Singular(_))));
    assert!(r.fit(&r.sample_points(20, 3)).is_ok());
}
