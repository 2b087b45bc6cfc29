//! The verification suites behind `verify`. Each suite splits into tasks
//! (one per worksheet, action or table) that seed their own generators, so
//! results do not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use canonical::{apply_generator, check_automorphism, close, exact, preserves_bracket, to_exact, vector_to_string, Sheet, LAMBDA};
use catalog::{Catalog, GenKind, IsotropyLabel, Params, Variant};
use classify::{classify_pair, coordinate_complement, invariant_forms, isotropy_type, kappa, same_span, ClassifyOptions};
use liecore::{LieAlgebra, QuotientMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalarlin::{rat, RatMatrix, Rational, Scalar};
use serde_json::{json, Value};

use crate::tables;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Jacobi,
    Tables,
    Worksheets,
    Automorphisms,
    Invariants,
    Canonical,
    Actions,
    Key,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Jacobi,
        Suite::Tables,
        Suite::Worksheets,
        Suite::Automorphisms,
        Suite::Invariants,
        Suite::Canonical,
        Suite::Actions,
        Suite::Key,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::Tables => "tables",
            Suite::Worksheets => "worksheets",
            Suite::Automorphisms => "automorphisms",
            Suite::Invariants => "invariants",
            Suite::Canonical => "canonical",
            Suite::Actions => "actions",
            Suite::Key => "key",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: usize,
    /// Random draws per generator and per invariant.
    pub draws: usize,
    /// Random vectors at the first parameter sample of each worksheet.
    pub vectors: usize,
    /// Random vectors at every further sample.
    pub extra_vectors: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0, trials: 256, draws: 200, vectors: 1000, extra_vectors: 200 }
    }
}

impl VerifyOptions {
    fn classify(&self) -> ClassifyOptions {
        ClassifyOptions { seed: self.seed, trials: self.trials }
    }

    /// A generator for one task, independent of the order tasks run in.
    fn rng(&self, task: &str) -> ChaCha8Rng {
        let salt = task.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }
}

/// Outcome of one task.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>) -> Self {
        Self { suite, name: name.into(), checked: 0, failures: Vec::new() }
    }

    fn errored(suite: Suite, name: impl Into<String>, e: CliError) -> Self {
        Self { suite, name: name.into(), checked: 0, failures: vec![format!("error: {e}")] }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "check": self.name,
            "passed": self.passed(),
            "checked": self.checked,
            "failures": self.failures,
        })
    }
}

type TaskFn = dyn Fn(&Catalog, &VerifyOptions) -> Result<Check, CliError> + Send + Sync;

/// A unit of work in the pool.
pub struct Task {
    pub suite: Suite,
    pub name: String,
    run: Box<TaskFn>,
}

impl Task {
    fn new(
        suite: Suite,
        name: impl Into<String>,
        run: impl Fn(&Catalog, &VerifyOptions) -> Result<Check, CliError> + Send + Sync + 'static,
    ) -> Self {
        Self { suite, name: name.into(), run: Box::new(run) }
    }

    pub fn run(&self, catalog: &Catalog, opts: &VerifyOptions) -> Check {
        (self.run)(catalog, opts).unwrap_or_else(|e| Check::errored(self.suite, self.name.clone(), e))
    }
}

/// The tasks of `suite` in report order.
pub fn tasks(catalog: &Catalog, suite: Suite) -> Vec<Task> {
    let keys: Vec<String> = catalog.worksheets().iter().map(|w| w.key.clone()).collect();
    let per_sheet = |f: fn(&Catalog, &VerifyOptions, &str) -> Result<Check, CliError>| -> Vec<Task> {
        keys.iter()
            .map(|k| {
                let k = k.clone();
                Task::new(suite, k.clone(), move |c, o| f(c, o, &k))
            })
            .collect()
    };
    match suite {
        Suite::Jacobi => vec![Task::new(suite, "appendix", jacobi)],
        Suite::Tables => [4usize, 3]
            .into_iter()
            .map(|d| Task::new(suite, tables::summary_title(d).0, move |c, o| summary_check(c, o, d)))
            .chain([
                Task::new(suite, "invariant-metrics", |c, o| {
                    table_check(tables::golden_metrics(c), tables::regenerate_metrics(c, o.classify())?)
                }),
                Task::new(suite, "reductions", |c, o| {
                    table_check(tables::golden_reductions(c), tables::regenerate_reductions(c, o.classify())?)
                }),
            ])
            .collect(),
        Suite::Worksheets => per_sheet(worksheet),
        Suite::Automorphisms => {
            let mut t = per_sheet(automorphisms);
            t.push(Task::new(suite, "lambda", lambda));
            t
        }
        Suite::Invariants => per_sheet(invariants),
        Suite::Canonical => per_sheet(canonicalization),
        Suite::Actions => catalog
            .actions()
            .map(|a| {
                let id = a.id.clone();
                Task::new(suite, id.clone(), move |c, _| action(c, &id))
            })
            .collect(),
        Suite::Key => vec![Task::new(suite, "petrov-key", key)],
    }
}

fn jacobi(c: &Catalog, _: &VerifyOptions) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Jacobi, "appendix");
    for entry in c.algebras() {
        for (regime, points) in c.regime_samples(&entry.key, 3)? {
            if points.is_empty() {
                out.fail(format!("{} {regime}: no parameter sample", entry.key));
            }
            for p in &points {
                out.checked += 1;
                if !c.get(&entry.key, p)?.jacobi_check() {
                    out.fail(format!("{} at {}: Jacobi identity fails", entry.key, show_params(p)));
                }
            }
        }
    }
    Ok(out)
}

fn show_params(p: &Params) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={}", scalarlin::rat_to_string(v))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn table_check(golden: tables::Table, got: tables::Table) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Tables, golden.name);
    out.checked = golden.rows.len() * golden.columns.len();
    out.failures = tables::diff(&golden, &got);
    Ok(out)
}

fn summary_check(c: &Catalog, o: &VerifyOptions, dim: usize) -> Result<Check, CliError> {
    table_check(tables::golden_summary(c, dim)?, tables::regenerate_summary(c, dim, o.classify())?)
}

fn sheets<'c>(c: &'c Catalog, key: &str) -> Result<Vec<Sheet<'c>>, CliError> {
    let w = c.worksheet(key)?;
    w.param_samples.iter().map(|p| Ok(Sheet::load(c, key, p)?)).collect()
}

fn tag(sh: &Sheet) -> String {
    format!("{} {}", sh.key(), show_params(&sh.params))
}

fn worksheet(c: &Catalog, o: &VerifyOptions, key: &str) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Worksheets, key);
    let w = c.worksheet(key)?;
    for p in &w.param_samples {
        let g = c.get(key, p)?;
        for row in c.worksheet_rows(key, p)? {
            out.checked += 1;
            let at = format!("{key} {} {}", show_params(p), row.rep);
            let r = classify_pair(c, &g, &row.h0, Some(&row.complement), o.classify())?;
            if r.kappa != row.kappa {
                out.fail(format!("{at}: kappa {} vs {}", r.kappa, row.kappa));
            }
            if r.forms.len() != row.forms.len() {
                out.fail(format!("{at}: {} invariant forms vs {:?}", r.forms.len(), row.form_names));
            }
            if !row.congruence_only && !same_span(&r.forms, &row.forms) {
                out.fail(format!("{at}: form span differs from {:?}", row.form_names));
            }
            if r.complement_type != row.types {
                out.fail(format!("{at}: complement type {} vs {}", r.complement_type, row.types));
            }
            let admits = r.effective && r.metric;
            if admits != !row.petrov.is_empty() {
                out.fail(format!("{at}: admissible {admits} vs listed {:?}", row.petrov));
            }
            match (&r.petrov, row.petrov.first()) {
                (Some(got), Some(_)) if !row.petrov.contains(got) => {
                    out.fail(format!("{at}: petrov {got} vs {:?}", row.petrov))
                }
                (None, Some(want)) => out.fail(format!("{at}: no petrov id, expected {want}")),
                _ => {}
            }
        }
    }
    Ok(out)
}

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

fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::Exact(rational(rng))).collect()
}

/// Small parameters keep `exp(t)` factors from swamping the comparison.
fn parameter(rng: &mut impl Rng, kind: GenKind) -> Scalar {
    let t = rat(rng.random_range(-6..=6), rng.random_range(2..=4));
    if kind.is_scaling() && t == rat(0, 1) {
        Scalar::int(1)
    } else {
        Scalar::Exact(t)
    }
}

fn automorphisms(c: &Catalog, o: &VerifyOptions, key: &str) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Automorphisms, key);
    let mut rng = o.rng(&format!("automorphisms {key}"));
    for sh in sheets(c, key)? {
        for gen in &sh.worksheet.generators {
            for _ in 0..o.draws {
                let t = parameter(&mut rng, gen.kind);
                let (u, v) = (random_vector(&mut rng, sh.dim()), random_vector(&mut rng, sh.dim()));
                out.checked += 1;
                if !preserves_bracket(&sh.algebra, gen, &t, &u, &v)? {
                    out.fail(format!("{} {}({t}) breaks [{}, {}]", tag(&sh), gen.name, vector_to_string(&u), vector_to_string(&v)));
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn is_abelian(g: &LieAlgebra) -> bool {
    let n = g.dim();
    (0..n).all(|i| (0..n).all(|j| g.structure(i, j).iter().all(|x| *x == rat(0, 1))))
}

fn lambda(c: &Catalog, _: &VerifyOptions) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Automorphisms, "lambda");
    for w in c.worksheets() {
        for sh in sheets(c, &w.key)? {
            if is_abelian(&sh.algebra) {
                continue;
            }
            out.checked += 1;
            let lam = sh.generator(LAMBDA)?;
            if check_automorphism(&sh.algebra, &lam, &Scalar::int(2))? {
                out.fail(format!("{}: scaling by 1/2 preserves the bracket", tag(&sh)));
            }
        }
    }
    Ok(out)
}

fn invariants(c: &Catalog, o: &VerifyOptions, key: &str) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Invariants, key);
    let mut rng = o.rng(&format!("invariants {key}"));
    for sh in sheets(c, key)? {
        if sh.worksheet.invariants.is_empty() {
            continue;
        }
        for gen in sh.worksheet.generators.iter().filter(|g| g.kind == GenKind::Inner) {
            for _ in 0..o.draws {
                let t = parameter(&mut rng, gen.kind);
                let v = random_vector(&mut rng, sh.dim());
                let w = apply_generator(gen, &sh.params, &t, &v)?;
                let (a, b) = (sh.invariants(&v)?, sh.invariants(&w)?);
                out.checked += 1;
                if let Some((name, _)) = a.iter().find(|(k, x)| !close(x, &b[*k])) {
                    out.fail(format!("{} {name} changes under {}({t}) at {}", tag(&sh), gen.name, vector_to_string(&v)));
                    break;
                }
            }
        }
    }
    if out.checked == 0 {
        // nothing printed for this algebra
        out.checked = 1;
    }
    Ok(out)
}

/// Random vectors biased towards special strata: sparse vectors and images
/// of the listed representatives under random exact automorphisms.
fn sample_vectors(c: &Catalog, sh: &Sheet, rng: &mut impl Rng, count: usize) -> Result<Vec<Vec<Rational>>, CliError> {
    let n = sh.dim();
    let reps: Vec<Vec<Rational>> = c.worksheet_rows(sh.key(), &sh.params)?.into_iter().map(|r| r.h0).collect();
    let gens = &sh.worksheet.generators;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Rational> = match out.len() % 3 {
            0 => (0..n).map(|_| rational(rng)).collect(),
            1 => (0..n).map(|_| if rng.random_bool(0.5) { rat(0, 1) } else { nonzero(rng) }).collect(),
            _ => {
                let mut v = exact(&reps[rng.random_range(0..reps.len())]);
                let s = Scalar::Exact(nonzero(rng));
                v.iter_mut().for_each(|x| *x = &*x * &s);
                for _ in 0..3 {
                    let gen = &gens[rng.random_range(0..gens.len())];
                    let w = apply_generator(gen, &sh.params, &parameter(rng, gen.kind), &v)?;
                    if w.iter().all(Scalar::is_exact) {
                        v = w;
                    }
                }
                to_exact(&v).expect("exact images")
            }
        };
        if v.iter().any(|x| *x != rat(0, 1)) {
            out.push(v);
        }
    }
    Ok(out)
}

/// κ, isotropy label and number of invariant forms of the line through `v`.
type OrbitData = (usize, Option<IsotropyLabel>, usize);

fn orbit_data(g: &LieAlgebra, v: &[Rational]) -> Result<OrbitData, CliError> {
    let m = g.quotient_action(v, &coordinate_complement(v), QuotientMode::Quotient).map_err(classify::ClassifyError::from)?;
    Ok((kappa(g, v)?, isotropy_type(&m).label(), invariant_forms(&m).len()))
}

fn canonicalization(c: &Catalog, o: &VerifyOptions, key: &str) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Canonical, key);
    let mut rng = o.rng(&format!("canonical {key}"));
    for (i, sh) in sheets(c, key)?.into_iter().enumerate() {
        let count = if i == 0 { o.vectors } else { o.extra_vectors };
        let mut seen = BTreeSet::new();
        let mut targets: HashMap<Vec<Rational>, OrbitData> = HashMap::new();
        for v in sample_vectors(c, &sh, &mut rng, count)? {
            out.checked += 1;
            let at = || format!("{} {}", tag(&sh), vector_to_string(&exact(&v)));
            let matched = sh.matching_cases(&exact(&v))?;
            if matched.len() != 1 {
                out.fail(format!("{}: cases {matched:?} match", at()));
                continue;
            }
            let r = match sh.canonicalize(&exact(&v)) {
                Ok(r) => r,
                Err(e) => {
                    out.fail(format!("{}: {e}", at()));
                    continue;
                }
            };
            seen.insert(r.case);
            if !r.landed() {
                out.fail(format!(
                    "{}: case {} gives {} not {}",
                    at(),
                    r.case,
                    vector_to_string(&r.representative),
                    vector_to_string(&r.target)
                ));
                continue;
            }
            let (steps, lam) = r.transcript.split_at(r.transcript.len() - 1);
            for st in steps {
                let gen = sh.generator(&st.generator)?;
                if !check_automorphism(&sh.algebra, &gen, &st.parameter)? {
                    out.fail(format!("{}: {}({}) is not an automorphism", at(), st.generator, st.parameter));
                }
            }
            let pre = sh.replay(&exact(&v), steps)?;
            let scaled: Vec<Scalar> = r.representative.iter().map(|x| x * &lam[0].parameter).collect();
            if !pre.iter().zip(&scaled).all(|(a, b)| close(a, b)) {
                out.fail(format!("{}: replayed steps differ from the representative by more than λ", at()));
            }
            let Some(target) = to_exact(&r.target) else {
                out.fail(format!("{}: representative {} is not rational", at(), vector_to_string(&r.target)));
                continue;
            };
            let want = match targets.get(&target) {
                Some(d) => *d,
                None => {
                    let d = orbit_data(&sh.algebra, &target)?;
                    targets.insert(target, d);
                    d
                }
            };
            if orbit_data(&sh.algebra, &v)? != want {
                out.fail(format!("{}: κ, isotropy or form count changes along the transcript", at()));
            }
        }
        let missed: Vec<u32> = sh.worksheet.cases.iter().map(|c| c.id).filter(|id| !seen.contains(id)).collect();
        if !missed.is_empty() {
            out.fail(format!("{}: cases never reached {missed:?}", tag(&sh)));
        }
        // listed representatives lie on fixed lines
        for row in c.worksheet_rows(sh.key(), &sh.params)? {
            out.checked += 1;
            let at = format!("{} row {}", tag(&sh), row.rep);
            let r = match sh.canonicalize(&exact(&row.h0)) {
                Ok(r) => r,
                Err(e) => {
                    out.fail(format!("{at}: {e}"));
                    continue;
                }
            };
            let same_line = to_exact(&r.target).is_some_and(|t| RatMatrix::from_rows(&[row.h0.clone(), t]).rank() == 1);
            if !r.landed() || !same_line {
                out.fail(format!("{at}: case {} gives {}", r.case, vector_to_string(&r.target)));
                continue;
            }
            let again = sh.canonicalize(&r.target)?;
            if again.case != r.case || again.representative != r.target {
                out.fail(format!("{at}: {} is not a fixed point", vector_to_string(&r.target)));
            }
        }
    }
    Ok(out)
}

fn action(c: &Catalog, id: &str) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Actions, id);
    let good = vfields::verify_action(c, id, Variant::Corrected)?;
    out.checked += 1;
    if !good.passes() {
        out.fail(format!("{id}: {}", good.to_json()));
    }
    if c.typo_ids().contains(&id) {
        let bad = vfields::verify_action(c, id, Variant::Typo)?;
        out.checked += 1;
        if !bad.fails_against(&good) {
            out.fail(format!("{id} typo variant verifies: {}", bad.to_json()));
        }
    }
    Ok(out)
}

/// The key from (algebra, isotropy, complement type) to Petrov ids is a
/// function on every sampled parameter value, and no id is reached from
/// two rows of the same group dimension.
fn key(c: &Catalog, _: &VerifyOptions) -> Result<Check, CliError> {
    let mut out = Check::new(Suite::Key, "petrov-key");
    let mut by_id: BTreeMap<(usize, &str), usize> = BTreeMap::new();
    for row in c.petrov_key() {
        let dim = c.entry(&row.algebra)?.dim;
        *by_id.entry((dim, row.petrov.as_str())).or_default() += 1;
    }
    for ((dim, id), n) in &by_id {
        out.checked += 1;
        if *n > 1 {
            out.fail(format!("G{dim} id {id} is reached from {n} key rows"));
        }
    }
    let algebras: BTreeSet<&str> = c.petrov_key().iter().map(|r| r.algebra.as_str()).collect();
    for key in algebras {
        let rows: Vec<_> = c.petrov_key().iter().filter(|r| r.algebra == key).collect();
        for (_, points) in c.regime_samples(key, usize::MAX)? {
            for p in points {
                let scope = catalog::scope_of(&p);
                let mut images: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
                for r in &rows {
                    let mut live = true;
                    for cond in &r.regime {
                        live &= cond.holds(&scope).map_err(|source| catalog::CatalogError::Eval { context: cond.to_string(), source })?;
                    }
                    if live {
                        let arg = format!("{} {}{}", r.isotropy.letter(), r.complement.symmetric, r.complement.ideal);
                        images.entry(arg).or_default().insert(r.petrov.as_str());
                    }
                }
                out.checked += 1;
                if let Some((arg, ids)) = images.iter().find(|(_, ids)| ids.len() > 1) {
                    out.fail(format!("{key} at {}: {arg} maps to {ids:?}", show_params(&p)));
                }
            }
        }
    }
    Ok(out)
}
