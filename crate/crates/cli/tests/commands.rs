use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("liehom").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}")))
}

#[test]
fn classify_reports_petrov_id() {
    let (code, v) = json(&["classify", "--algebra", "L(4,-7)", "--isotropy", "1/2,0,1/2,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["petrov"], "32.24(+)");
    assert_eq!(v["algebra"], "L(4,-7)");
}

#[test]
fn constraint_violation_is_an_input_error() {
    let (code, out, err) = run(&["classify", "--algebra", "L(3,2,x)", "--param", "x=0", "--isotropy", "0,0,1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("violate"), "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["classify", "--algebra", "L(4,-7)", "--isotropy", "0.5,0,1,1"]).0, 2);
    assert_eq!(run(&["classify", "--algebra", "L(9,9)", "--isotropy", "1,0,0"]).0, 2);
    assert_eq!(run(&["classify", "--algebra", "L(4,-7)", "--isotropy", "0,0,0,0"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(run(&["--tol", "-1", "catalog", "list"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn classify_is_deterministic() {
    let args = ["--seed", "5", "classify", "--algebra", "L(4,-8)", "--isotropy", "1,0,0,0"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn given_complement_is_used() {
    let (code, v) = json(&["classify", "--algebra", "L(4,-8)", "--isotropy", "1,0,0,1", "--complement", "1,0,0,0;0,0,1,0;0,1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["petrov"], "32.10");
    assert_eq!(v["complement"][0], serde_json::json!(["1", "0", "0", "0"]));
}

#[test]
fn catalog_commands() {
    let (code, v) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert!(v.as_array().unwrap().iter().any(|a| a["key"] == "L(4,-7)"));
    let (code, v) = json(&["catalog", "show", "L(3,5)"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 3);
    assert_eq!(run(&["catalog", "show", "L(7)"]).0, 2);
    let (code, out, _) = run(&["--format", "csv", "catalog", "list"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("key,dim,params,constraints,worksheet\n"), "{out}");
    let (_, md, _) = run(&["--format", "md", "catalog", "list"]);
    assert!(md.lines().nth(1).unwrap().starts_with("| --- |"));
}

#[test]
fn enumerate_and_canonicalize() {
    let (code, v) = json(&["enumerate", "--algebra", "L(4,-8)"]);
    assert_eq!(code, 0);
    let ids: Vec<&Value> = v.as_array().unwrap().iter().map(|r| &r["petrov"]).collect();
    assert!(ids.contains(&&Value::from("32.09")) && ids.contains(&&Value::from("32.10")), "{ids:?}");
    let (code, v) = json(&["canonicalize", "--algebra", "L(4,-8)", "--vector", "3,1,2,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["landed"], true);
    assert_eq!(v["target"], serde_json::json!(["1", "0", "0", "0"]));
}

#[test]
fn vector_field_reports() {
    let (code, v) = json(&["vf", "verify", "--id", "32.12"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["identified_class"], "L(4,1)");
    let (code, v) = json(&["vf", "verify", "--id", "30.6", "--variant", "typo"]);
    assert_eq!(code, 1);
    assert!(v[0]["closure_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn mismatches_exit_one() {
    // a Jacobi failure injected into a dumped catalog
    let (_, text, _) = run(&["catalog", "dump"]);
    let mut data: Value = serde_json::from_str(&text).unwrap();
    let algebra = data["algebras"].as_array_mut().unwrap().iter_mut().find(|a| a["key"] == "L(4,1)").unwrap();
    // [e2,e3] = e3 gives [[e2,e3],e4] = e2 with no other term to cancel it
    algebra["brackets"].as_array_mut().unwrap().push(serde_json::json!({"i": 2, "j": 3, "coeffs": ["0", "0", "1", "0"]}));
    let path = std::env::temp_dir().join(format!("liehom-broken-{}.json", std::process::id()));
    std::fs::write(&path, data.to_string()).unwrap();
    let (code, v) = json(&["--catalog", path.to_str().unwrap(), "verify", "jacobi"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn dumped_catalog_reproduces_tables() {
    let (code, text, _) = run(&["catalog", "dump"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("liehom-dump-{}.json", std::process::id()));
    std::fs::write(&path, &text).unwrap();
    let embedded = run(&["verify", "tables"]);
    let reloaded = run(&["--catalog", path.to_str().unwrap(), "verify", "tables"]);
    let (_, again, _) = run(&["--catalog", path.to_str().unwrap(), "catalog", "dump"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(embedded.0, 0);
    assert_eq!(embedded, reloaded);
    assert_eq!(text, again);
}

#[test]
fn emitted_tables() {
    let (code, v) = json(&["verify", "--emit"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|t| t["table"].as_str().unwrap()).collect();
    assert_eq!(names, ["g4-summary", "g3-summary", "invariant-metrics", "reductions"]);
    let (_, md, _) = run(&["--format", "md", "verify", "--emit"]);
    assert!(md.contains("### Equivalences between G4 and G3 actions"));
    assert!(md.contains("| 32.07 | L(4,-7) | 1/2*e1 - 1/2*e3 | L(3,5) | M | R/R |"), "{md}");
}

#[test]
fn full_suite_with_seed() {
    let (code, v) = json(&["verify", "tables", "--suite", "all", "--seed", "7"]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["seed"], 7);
    assert_eq!(v["suites"].as_array().unwrap().len(), cli::Suite::ALL.len());
}

#[test]
fn report_order_is_independent_of_workers() {
    let one = run(&["verify", "actions", "worksheets", "--jobs", "1"]);
    let four = run(&["verify", "actions", "worksheets", "--jobs", "4"]);
    assert_eq!(one.0, 0);
    assert_eq!(one, four);
}
