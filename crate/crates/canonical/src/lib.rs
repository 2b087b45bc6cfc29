//! Automorphism generators, Adjoint invariants and the case-by-case
//! reduction of a vector to the representative of its subalgebra class.
//!
//! Pipelines run in exact arithmetic until a step parameter is irrational
//! (`exp`, `atan`, a square root of a non-square), after which the
//! remaining steps use `f64`.

use std::collections::BTreeMap;

use catalog::{Catalog, CatalogError, GenKind, Generator, Params, ResolvedRow, Worksheet};
use classify::{ClassificationReport, ClassifyError, ClassifyOptions};
use liecore::LieAlgebra;
use num_traits::Zero;
use scalarlin::expr::{Chain, EvalError, Expr, Scope};
use scalarlin::{Rational, Scalar};
use serde_json::{json, Value};
use thiserror::Error;

/// Name under which the final projective rescaling appears in transcripts.
pub const LAMBDA: &str = "lambda";

#[derive(Debug, Error)]
pub enum CanonError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("{context}: {source}")]
    Eval { context: String, source: EvalError },
    #[error("{key}: no generator `{name}`")]
    UnknownGenerator { key: String, name: String },
    #[error("{0}: parameter must be nonzero")]
    ZeroParameter(String),
    #[error("expected a vector of length {expected}, found {found}")]
    Length { expected: usize, found: usize },
    #[error("the zero vector spans no subalgebra")]
    ZeroVector,
    #[error("{key}: no case matches {vector}")]
    NoCase { key: String, vector: String },
}

fn eval(expr: &Expr, scope: &dyn Scope, context: impl FnOnce() -> String) -> Result<Scalar, CanonError> {
    expr.eval(scope).map_err(|source| CanonError::Eval { context: context(), source })
}

/// Exact zero, or an approximation that is exactly `0.0`. Tiny but
/// nonzero values such as `exp(-24)` are legitimate parameters.
fn vanishes(s: &Scalar) -> bool {
    match s {
        Scalar::Exact(r) => r.is_zero(),
        Scalar::Approx(x) => *x == 0.0,
    }
}

/// Binds `y1..yn` to the coordinates of `v`.
fn coords(v: &[Scalar]) -> BTreeMap<String, Scalar> {
    v.iter().enumerate().map(|(i, s)| (format!("y{}", i + 1), s.clone())).collect()
}

/// Exact scalars from rationals.
pub fn exact(v: &[Rational]) -> Vec<Scalar> {
    v.iter().cloned().map(Scalar::Exact).collect()
}

/// The rationals back, if every entry is exact.
pub fn to_exact(v: &[Scalar]) -> Option<Vec<Rational>> {
    v.iter().map(|s| s.as_exact().cloned()).collect()
}

pub fn vector_to_string(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(Scalar::to_plain_string).collect();
    format!("({})", parts.join(", "))
}

/// `λ(t)(v) = v/t`, the rescaling of the line. Not an automorphism.
pub fn lambda_generator(dim: usize) -> Generator {
    let formula = (1..=dim).map(|i| Expr::var(&format!("y{i}")) / Expr::var("t")).collect();
    Generator { name: LAMBDA.into(), kind: GenKind::Lambda, formula }
}

/// The generator's formula at parameter `t`, applied to `v`.
pub fn apply_generator(gen: &Generator, params: &Params, t: &Scalar, v: &[Scalar]) -> Result<Vec<Scalar>, CanonError> {
    if v.len() != gen.formula.len() {
        return Err(CanonError::Length { expected: gen.formula.len(), found: v.len() });
    }
    if gen.kind.is_scaling() && vanishes(t) {
        return Err(CanonError::ZeroParameter(gen.name.clone()));
    }
    let mut local = coords(v);
    local.insert("t".into(), t.clone());
    let p = catalog::scope_of(params);
    let scope = Chain(&local, &p);
    gen.formula
        .iter()
        .map(|f| eval(f, &scope, || format!("{} at t = {t}", gen.name)))
        .collect()
}

fn scalar_bracket(g: &LieAlgebra, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let n = g.dim();
    let mut out = vec![Scalar::zero(); n];
    for (i, ui) in u.iter().enumerate().filter(|(_, x)| !vanishes(x)) {
        for (j, vj) in v.iter().enumerate().filter(|(_, x)| !vanishes(x)) {
            let c = ui * vj;
            for (o, s) in out.iter_mut().zip(g.structure(i, j)).filter(|(_, s)| !s.is_zero()) {
                *o = &*o + &(&c * &Scalar::Exact(s.clone()));
            }
        }
    }
    out
}

/// Exact equality, or agreement within the tolerance scaled by the larger
/// magnitude once either side is approximate.
pub fn close(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= scalarlin::tolerance() * x.abs().max(y.abs()).max(1.0)
        }
    }
}

fn same(a: &[Scalar], b: &[Scalar]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(x, y))
}

/// Whether `φ = gen(t)` satisfies `φ[u, v] = [φu, φv]`.
pub fn preserves_bracket(
    g: &LieAlgebra,
    gen: &Generator,
    t: &Scalar,
    u: &[Scalar],
    v: &[Scalar],
) -> Result<bool, CanonError> {
    let p = g.params();
    let lhs = apply_generator(gen, p, t, &scalar_bracket(g, u, v))?;
    let rhs = scalar_bracket(g, &apply_generator(gen, p, t, u)?, &apply_generator(gen, p, t, v)?);
    Ok(same(&lhs, &rhs))
}

/// Bracket preservation on all pairs of basis vectors; exact for exact
/// images, within tolerance otherwise. Generator formulas are linear in the
/// coordinates, so the images of the basis determine the map.
pub fn check_automorphism(g: &LieAlgebra, gen: &Generator, t: &Scalar) -> Result<bool, CanonError> {
    let n = g.dim();
    let images = (0..n)
        .map(|k| apply_generator(gen, g.params(), t, &exact(&liecore::unit(n, k))))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        for j in i + 1..n {
            let mut lhs = vec![Scalar::zero(); n];
            for (c, image) in g.structure(i, j).iter().zip(&images).filter(|(c, _)| !c.is_zero()) {
                let c = Scalar::Exact(c.clone());
                for (l, x) in lhs.iter_mut().zip(image) {
                    *l = &*l + &(&c * x);
                }
            }
            if !same(&lhs, &scalar_bracket(g, &images[i], &images[j])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One applied step of a pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub generator: String,
    pub parameter: Scalar,
}

impl Step {
    pub fn is_exact(&self) -> bool {
        self.parameter.is_exact()
    }
}

pub fn transcript_json(steps: &[Step]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| {
                json!({
                    "generator": s.generator,
                    "parameter": s.parameter.to_plain_string(),
                    "mode": if s.is_exact() { "exact" } else { "approx" },
                })
            })
            .collect(),
    )
}

/// Result of reducing one vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    /// Worksheet the vector was reduced in; differs from the requested key
    /// when the parameters select a special regime.
    pub key: String,
    pub params: Params,
    pub case: u32,
    /// The image of the vector under the transcript.
    pub representative: Vec<Scalar>,
    /// The printed representative of the case, evaluated at the vector.
    pub target: Vec<Scalar>,
    pub transcript: Vec<Step>,
}

impl Canonical {
    pub fn is_exact(&self) -> bool {
        self.representative.iter().all(Scalar::is_exact)
    }

    /// Whether the pipeline landed on the printed representative.
    pub fn landed(&self) -> bool {
        same(&self.representative, &self.target)
    }

    pub fn to_json(&self) -> Value {
        let strings = |v: &[Scalar]| v.iter().map(Scalar::to_plain_string).collect::<Vec<_>>();
        json!({
            "algebra": self.key,
            "params": self.params.iter().map(|(k, v)| (k.clone(), Value::String(scalarlin::rat_to_string(v)))).collect::<serde_json::Map<_, _>>(),
            "case": self.case,
            "representative": strings(&self.representative),
            "target": strings(&self.target),
            "mode": if self.is_exact() { "exact" } else { "approx" },
            "landed": self.landed(),
            "transcript": transcript_json(&self.transcript),
        })
    }
}

/// A worksheet bound to the algebra it describes.
#[derive(Debug, Clone)]
pub struct Sheet<'c> {
    pub worksheet: &'c Worksheet,
    pub algebra: LieAlgebra,
    pub params: Params,
}

impl<'c> Sheet<'c> {
    /// Loads the worksheet for `key` at `params`, following the catalog's
    /// routing to a special regime where the generic one does not apply.
    pub fn load(catalog: &'c Catalog, key: &str, params: &Params) -> Result<Self, CanonError> {
        let (algebra, key, params) = catalog.get_routed(key, params)?;
        Ok(Self { worksheet: catalog.worksheet(&key)?, algebra, params })
    }

    pub fn key(&self) -> &str {
        &self.worksheet.key
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn generator(&self, name: &str) -> Result<Generator, CanonError> {
        if name == LAMBDA {
            return Ok(lambda_generator(self.dim()));
        }
        self.worksheet
            .generator(name)
            .cloned()
            .ok_or_else(|| CanonError::UnknownGenerator { key: self.key().into(), name: name.into() })
    }

    fn check(&self, v: &[Scalar]) -> Result<(), CanonError> {
        if v.len() != self.dim() {
            return Err(CanonError::Length { expected: self.dim(), found: v.len() });
        }
        if v.iter().all(vanishes) {
            return Err(CanonError::ZeroVector);
        }
        Ok(())
    }

    /// The printed invariants of the Adjoint action at `v`.
    pub fn invariants(&self, v: &[Scalar]) -> Result<BTreeMap<String, Scalar>, CanonError> {
        if v.len() != self.dim() {
            return Err(CanonError::Length { expected: self.dim(), found: v.len() });
        }
        let y = coords(v);
        let p = catalog::scope_of(&self.params);
        let scope = Chain(&y, &p);
        self.worksheet
            .invariants
            .iter()
            .map(|inv| Ok((inv.name.clone(), eval(&inv.expr, &scope, || format!("{} {}", self.key(), inv.name))?)))
            .collect()
    }

    /// Coordinates, invariants and parameters, in that lookup order.
    fn base_scope(&self, v: &[Scalar]) -> Result<BTreeMap<String, Scalar>, CanonError> {
        let mut scope = catalog::scope_of(&self.params);
        scope.extend(self.invariants(v)?);
        scope.extend(coords(v));
        Ok(scope)
    }

    /// Ids of every case whose guard holds at `v`.
    pub fn matching_cases(&self, v: &[Scalar]) -> Result<Vec<u32>, CanonError> {
        self.check(v)?;
        let scope = self.base_scope(v)?;
        let mut out = Vec::new();
        for case in &self.worksheet.cases {
            if self.guard_holds(&case.guard, &scope)? {
                out.push(case.id);
            }
        }
        Ok(out)
    }

    fn guard_holds(&self, guard: &[scalarlin::expr::Condition], scope: &dyn Scope) -> Result<bool, CanonError> {
        for c in guard {
            let ok = c
                .holds(scope)
                .map_err(|source| CanonError::Eval { context: format!("{}: {c}", self.key()), source })?;
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Runs the first case, in printed order, whose guard holds at `v`.
    pub fn canonicalize(&self, v: &[Scalar]) -> Result<Canonical, CanonError> {
        self.check(v)?;
        let mut scope = self.base_scope(v)?;
        let mut chosen = None;
        for case in &self.worksheet.cases {
            if self.guard_holds(&case.guard, &scope)? {
                chosen = Some(case);
                break;
            }
        }
        let case =
            chosen.ok_or_else(|| CanonError::NoCase { key: self.key().into(), vector: vector_to_string(v) })?;
        let ctx = |what: &str| format!("{} case {} {what}", self.key(), case.id);
        for (name, expr) in &case.lets {
            let value = eval(expr, &scope, || ctx(name))?;
            scope.insert(name.clone(), value);
        }

        let mut transcript = Vec::with_capacity(case.steps.len() + 1);
        for (name, expr) in &case.steps {
            transcript.push(Step { generator: name.clone(), parameter: eval(expr, &scope, || ctx(name))? });
        }
        transcript.push(Step { generator: LAMBDA.into(), parameter: eval(&case.lambda, &scope, || ctx(LAMBDA))? });
        let representative = self.replay(v, &transcript)?;

        let n = self.dim();
        let basis = |name: &str| -> Option<Vec<Scalar>> {
            let i: usize = name.strip_prefix('e')?.parse().ok()?;
            (1..=n).contains(&i).then(|| exact(&liecore::unit(n, i - 1)))
        };
        let target = case
            .target
            .eval_vector(&scope, &basis, n)
            .map_err(|source| CanonError::Eval { context: ctx("target"), source })?;
        Ok(Canonical {
            key: self.key().into(),
            params: self.params.clone(),
            case: case.id,
            representative,
            target,
            transcript,
        })
    }

    /// Applies a transcript to `v`, step by step.
    pub fn replay(&self, v: &[Scalar], steps: &[Step]) -> Result<Vec<Scalar>, CanonError> {
        let mut cur = v.to_vec();
        for s in steps {
            cur = apply_generator(&self.generator(&s.generator)?, &self.params, &s.parameter, &cur)?;
        }
        Ok(cur)
    }
}

/// See [`Sheet::invariants`].
pub fn adjoint_invariants(
    catalog: &Catalog,
    key: &str,
    params: &Params,
    v: &[Scalar],
) -> Result<BTreeMap<String, Scalar>, CanonError> {
    Sheet::load(catalog, key, params)?.invariants(v)
}

/// See [`Sheet::canonicalize`].
pub fn canonicalize(catalog: &Catalog, key: &str, params: &Params, v: &[Scalar]) -> Result<Canonical, CanonError> {
    Sheet::load(catalog, key, params)?.canonicalize(v)
}

/// A worksheet representative with its classification.
#[derive(Debug, Clone)]
pub struct Enumerated {
    pub row: ResolvedRow,
    pub report: ClassificationReport,
}

/// The representatives listed for the regime of `params`, each classified
/// with the listed complement.
pub fn enumerate_subalgebras(
    catalog: &Catalog,
    key: &str,
    params: &Params,
    opts: ClassifyOptions,
) -> Result<Vec<Enumerated>, CanonError> {
    let (g, key, params) = catalog.get_routed(key, params)?;
    catalog
        .worksheet_rows(&key, &params)?
        .into_iter()
        .map(|row| {
            let report = classify::classify_pair(catalog, &g, &row.h0, Some(&row.complement), opts)?;
            Ok(Enumerated { row, report })
        })
        .collect()
}
