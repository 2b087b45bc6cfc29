//! The Winternitz algebras of dimension at most four, the per-algebra
//! worksheets of expected classification results, Petrov's local group
//! actions, and the summary and identification tables.
//!
//! Everything ships as one JSON document embedded at build time. A catalog
//! can also be loaded from an edited copy of that file.

mod labels;
mod model;
mod raw;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

use liecore::LieAlgebra;
use scalarlin::expr::{Chain, Condition, EvalError, Expr, Scope};
use scalarlin::{RatMatrix, RatVec, Rational, Scalar, SymForm};
use thiserror::Error;

pub use labels::{group_dim_of, normalize_petrov_id, ComplementType, IsotropyLabel, MISSING};
pub use model::{
    ActionSummary, AlgebraEntry, CanonicalCase, Decomposition, GenKind, Generator, Invariant, KeyRow, Params,
    PetrovAction, ReductionRow, SummaryRow, Variant, Worksheet, WorksheetRow,
};

const EMBEDDED: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown algebra `{0}`")]
    UnknownKey(String),
    #[error("unknown Petrov action `{0}`")]
    UnknownAction(String),
    #[error("no typo variant is recorded for `{0}`")]
    NoTypo(String),
    #[error("{key}: missing parameter `{param}`")]
    MissingParam { key: String, param: String },
    #[error("{key}: unexpected parameter `{param}`")]
    UnexpectedParam { key: String, param: String },
    #[error("{key}: parameters violate `{condition}`{}", hint.as_ref().map(|h| format!(" (use {h})")).unwrap_or_default())]
    Constraint { key: String, condition: String, hint: Option<String> },
    #[error("{context}: {source}")]
    Eval { context: String, source: EvalError },
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid catalog: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parameter values tried by [`Catalog::regime_samples`], in order.
const SAMPLE_GRID: [(i64, i64); 11] = [(-2, 1), (-1, 1), (-1, 2), (-1, 3), (0, 1), (1, 3), (1, 2), (3, 4), (1, 1), (2, 1), (3, 1)];

/// Scalar bindings for a parameter assignment.
pub fn scope_of(params: &Params) -> BTreeMap<String, Scalar> {
    params.iter().map(|(k, v)| (k.clone(), Scalar::Exact(v.clone()))).collect()
}

fn exact(context: &str, s: Scalar) -> Result<Rational, CatalogError> {
    match s {
        Scalar::Exact(r) => Ok(r),
        Scalar::Approx(_) => Err(CatalogError::Invalid(format!("{context}: value is not exact"))),
    }
}

/// Free complement constants that default to zero.
fn free_constant(name: &str) -> Option<Scalar> {
    matches!(name, "c" | "c1" | "c2" | "c3").then(Scalar::zero)
}

/// Evaluates a vector expression in `e1..e{dim}` exactly. `h`, when given,
/// is bound to the subalgebra generator.
pub fn eval_basis_vector(
    expr: &Expr,
    dim: usize,
    scope: &dyn Scope,
    h: Option<&[Rational]>,
) -> Result<RatVec, CatalogError> {
    let vectors = |name: &str| -> Option<Vec<Scalar>> {
        if name == "h" {
            return h.map(|h| h.iter().cloned().map(Scalar::Exact).collect());
        }
        let i: usize = name.strip_prefix('e')?.parse().ok()?;
        (1..=dim).contains(&i).then(|| liecore::unit(dim, i - 1).into_iter().map(Scalar::Exact).collect())
    };
    let ctx = expr.to_string();
    let v = expr
        .eval_vector(scope, &vectors, dim)
        .map_err(|source| CatalogError::Eval { context: ctx.clone(), source })?;
    v.into_iter().map(|s| exact(&ctx, s)).collect()
}

fn holds_all<'a>(conds: &'a [Condition], scope: &dyn Scope) -> Result<Option<&'a Condition>, CatalogError> {
    for c in conds {
        let ok = c.holds(scope).map_err(|source| CatalogError::Eval { context: c.to_string(), source })?;
        if !ok {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// A worksheet row evaluated at concrete parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRow {
    pub key: String,
    /// Index into the worksheet's row list.
    pub index: usize,
    /// Algebra parameters plus any family parameter of the row.
    pub bindings: Params,
    pub rep: Expr,
    pub h0: RatVec,
    /// Complement as printed, free constants kept.
    pub complement_text: Vec<Expr>,
    /// Complement with free constants set to zero.
    pub complement: Vec<RatVec>,
    pub types: ComplementType,
    pub kappa: usize,
    pub form_names: Vec<String>,
    /// Nonzero forms spanning the expected space of invariant forms.
    pub forms: Vec<SymForm>,
    pub petrov: Vec<String>,
    pub congruence_only: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    data: raw::CatalogData,
    algebras: Vec<AlgebraEntry>,
    worksheets: Vec<Worksheet>,
    actions: Vec<(PetrovAction, Option<PetrovAction>)>,
    equivalences: Vec<(String, String)>,
    summary: Vec<SummaryRow>,
    key: Vec<KeyRow>,
    reductions: Vec<ReductionRow>,
    forms: BTreeMap<usize, BTreeMap<String, Vec<SymForm>>>,
}

impl Catalog {
    /// The catalog compiled into the binary.
    pub fn embedded() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::from_json(EMBEDDED).expect("embedded catalog is valid"))
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        Self::from_data(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CatalogError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Serializes back to the on-disk schema.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.data).expect("catalog data serializes");
        s.push('\n');
        s
    }

    fn from_data(data: raw::CatalogData) -> Result<Self, CatalogError> {
        let algebras = data.algebras.iter().map(AlgebraEntry::from_raw).collect::<Result<Vec<_>, _>>()?;
        let worksheets = data.worksheets.iter().map(Worksheet::from_raw).collect::<Result<Vec<_>, _>>()?;
        let actions = data.actions.iter().map(model::actions_from_raw).collect::<Result<Vec<_>, _>>()?;
        let summary = data.summary.iter().map(SummaryRow::from_raw).collect::<Result<_, _>>()?;
        let key = data.petrov_key.iter().map(KeyRow::from_raw).collect::<Result<_, _>>()?;
        let reductions = data.reductions.iter().map(ReductionRow::from_raw).collect::<Result<_, _>>()?;
        let forms = model::forms_from_raw(&data.forms)?;
        let equivalences = data
            .equivalences
            .iter()
            .map(|(a, b)| (normalize_petrov_id(a), normalize_petrov_id(b)))
            .collect();

        for w in &worksheets {
            if !algebras.iter().any(|a| a.key == w.key) {
                return Err(CatalogError::Invalid(format!("worksheet for unknown algebra `{}`", w.key)));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (a, _) in &actions {
            if !seen.insert(a.id.clone()) {
                return Err(CatalogError::Invalid(format!("duplicate action id `{}`", a.id)));
            }
        }
        Ok(Self { data, algebras, worksheets, actions, equivalences, summary, key, reductions, forms })
    }

    pub fn algebras(&self) -> &[AlgebraEntry] {
        &self.algebras
    }

    pub fn entry(&self, key: &str) -> Result<&AlgebraEntry, CatalogError> {
        self.algebras.iter().find(|a| a.key == key).ok_or_else(|| CatalogError::UnknownKey(key.to_string()))
    }

    /// Instantiates an algebra at the given parameters.
    pub fn get(&self, key: &str, params: &Params) -> Result<LieAlgebra, CatalogError> {
        self.instantiate(key, params, true)
    }

    fn instantiate(&self, key: &str, params: &Params, route: bool) -> Result<LieAlgebra, CatalogError> {
        let entry = self.entry(key)?;
        for p in &entry.params {
            if !params.contains_key(p) {
                return Err(CatalogError::MissingParam { key: key.into(), param: p.clone() });
            }
        }
        if let Some(p) = params.keys().find(|p| !entry.params.contains(p)) {
            return Err(CatalogError::UnexpectedParam { key: key.into(), param: p.clone() });
        }
        let scope = scope_of(params);
        if let Some(c) = holds_all(&entry.constraints, &scope)? {
            return Err(CatalogError::Constraint {
                key: key.into(),
                condition: c.to_string(),
                hint: if route { self.route(key, params).map(|(k, _)| k) } else { None },
            });
        }
        let table = entry
            .brackets
            .iter()
            .map(|(i, j, coeffs)| {
                let v = coeffs
                    .iter()
                    .map(|e| {
                        let ctx = format!("{key} [e{i}, e{j}]");
                        let s = e.eval(&scope).map_err(|source| CatalogError::Eval { context: ctx.clone(), source })?;
                        exact(&ctx, s)
                    })
                    .collect::<Result<RatVec, _>>()?;
                Ok((*i, *j, v))
            })
            .collect::<Result<Vec<_>, CatalogError>>()?;
        LieAlgebra::new(key, params.clone(), entry.dim, &table)
            .map_err(|e| CatalogError::Invalid(format!("{key}: {e}")))
    }

    /// Finds another key whose literal arguments absorb `params`, e.g.
    /// `L(4,2,x,y)` at `x = y = 1` is `L(4,2,1,1)`.
    fn route(&self, key: &str, params: &Params) -> Option<(String, Params)> {
        let args = key_args(key)?;
        self.algebras.iter().filter(|a| a.key != key).find_map(|other| {
            let oargs = key_args(&other.key)?;
            if oargs.len() != args.len() {
                return None;
            }
            let mut sub = Params::new();
            for (a, b) in args.iter().zip(&oargs) {
                let value = match scalarlin::parse_rational(a) {
                    Some(v) => v,
                    None => params.get(*a)?.clone(),
                };
                match scalarlin::parse_rational(b) {
                    Some(lit) if lit == value => {}
                    Some(_) => return None,
                    None => match sub.insert(b.to_string(), value.clone()) {
                        Some(prev) if prev != value => return None,
                        _ => {}
                    },
                }
            }
            let ok = self.instantiate(&other.key, &sub, false).is_ok();
            ok.then(|| (other.key.clone(), sub))
        })
    }

    /// Like [`get`](Self::get), but follows the routing hint of a
    /// constraint violation. Returns the key and parameters actually used.
    pub fn get_routed(&self, key: &str, params: &Params) -> Result<(LieAlgebra, String, Params), CatalogError> {
        match self.get(key, params) {
            Ok(g) => Ok((g, key.to_string(), params.clone())),
            Err(e @ CatalogError::Constraint { .. }) => {
                let (k, p) = self.route(key, params).ok_or(e)?;
                Ok((self.get(&k, &p)?, k, p))
            }
            Err(e) => Err(e),
        }
    }

    pub fn worksheets(&self) -> &[Worksheet] {
        &self.worksheets
    }

    pub fn worksheet(&self, key: &str) -> Result<&Worksheet, CatalogError> {
        self.worksheets.iter().find(|w| w.key == key).ok_or_else(|| CatalogError::UnknownKey(key.to_string()))
    }

    /// Rows of a worksheet whose regime matches `params`, evaluated exactly.
    /// Rows describing a family `e3 + k*e4` appear once per sample of `k`.
    pub fn worksheet_rows(&self, key: &str, params: &Params) -> Result<Vec<ResolvedRow>, CatalogError> {
        let w = self.worksheet(key)?;
        let dim = self.entry(key)?.dim;
        let mut out = Vec::new();
        for (index, row) in w.rows.iter().enumerate() {
            let samples = if row.samples.is_empty() { vec![Params::new()] } else { row.samples.clone() };
            for sample in samples {
                let mut bindings = params.clone();
                bindings.extend(sample);
                let scope = scope_of(&bindings);
                if holds_all(&row.regime, &scope)?.is_some() {
                    continue;
                }
                let with_free = Chain(&scope, &free_constant);
                let h0 = eval_basis_vector(&row.rep, dim, &scope, None)?;
                let complement = row
                    .complement
                    .iter()
                    .map(|e| eval_basis_vector(e, dim, &with_free, Some(&h0)))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(ResolvedRow {
                    key: key.to_string(),
                    index,
                    bindings,
                    rep: row.rep.clone(),
                    h0,
                    complement_text: row.complement.clone(),
                    complement,
                    types: row.types,
                    kappa: row.kappa,
                    form_names: row.forms.clone(),
                    forms: self.resolve_forms(dim - 1, &row.forms)?,
                    petrov: row.petrov.clone(),
                    congruence_only: row.congruence_only,
                    note: row.note.clone(),
                });
            }
        }
        Ok(out)
    }

    /// Named forms of the given side, nonzero ones only. Names may be sums
    /// such as `Q12 + Q13`.
    pub fn resolve_forms(&self, side: usize, names: &[String]) -> Result<Vec<SymForm>, CatalogError> {
        let table = self.forms.get(&side).ok_or_else(|| CatalogError::Invalid(format!("no forms of side {side}")))?;
        let lookup = |n: &str| -> Result<&Vec<SymForm>, CatalogError> {
            table.get(n).ok_or_else(|| CatalogError::Invalid(format!("unknown form `{n}` of side {side}")))
        };
        let mut out = Vec::new();
        for name in names {
            if name.contains('+') {
                let mut parts = Vec::new();
                for part in name.split('+').map(str::trim) {
                    match lookup(part)?.as_slice() {
                        [f] => parts.push(f.clone()),
                        _ => return Err(CatalogError::Invalid(format!("`{part}` cannot appear in a sum"))),
                    }
                }
                let ones = vec![Rational::from_integer(1.into()); parts.len()];
                out.push(SymForm::combine(&parts, &ones));
            } else {
                out.extend(lookup(name)?.iter().cloned());
            }
        }
        out.retain(|f| !f.is_zero());
        Ok(out)
    }

    /// Every recorded action in table order, corrected variants only.
    pub fn actions(&self) -> impl Iterator<Item = &PetrovAction> {
        self.actions.iter().map(|(a, _)| a)
    }

    /// Maps any spelling of an id, including the right-hand column of the
    /// equivalence table, to an id that carries data.
    pub fn resolve_action_id(&self, id: &str) -> Result<String, CatalogError> {
        let id = normalize_petrov_id(id);
        if self.actions.iter().any(|(a, _)| a.id == id) {
            return Ok(id);
        }
        self.equivalences
            .iter()
            .find(|(_, right)| *right == id)
            .map(|(left, _)| left.clone())
            .filter(|left| self.actions.iter().any(|(a, _)| &a.id == left))
            .ok_or(CatalogError::UnknownAction(id))
    }

    pub fn petrov_action(&self, id: &str, variant: Variant) -> Result<&PetrovAction, CatalogError> {
        let id = self.resolve_action_id(id)?;
        let (corrected, typo) = self.actions.iter().find(|(a, _)| a.id == id).expect("resolved id exists");
        match variant {
            Variant::Corrected => Ok(corrected),
            Variant::Typo => typo.as_ref().ok_or(CatalogError::NoTypo(id)),
        }
    }

    /// Ids with a recorded typo variant.
    pub fn typo_ids(&self) -> Vec<&str> {
        self.actions.iter().filter(|(_, t)| t.is_some()).map(|(a, _)| a.id.as_str()).collect()
    }

    pub fn equivalences(&self) -> &[(String, String)] {
        &self.equivalences
    }

    pub fn summary(&self) -> &[SummaryRow] {
        &self.summary
    }

    pub fn petrov_key(&self) -> &[KeyRow] {
        &self.key
    }

    /// Looks up the Petrov id for an algebra at given parameters, isotropy
    /// and complement type. Returns [`MISSING`] for the space Petrov omits.
    pub fn identify(
        &self,
        algebra: &str,
        params: &Params,
        isotropy: IsotropyLabel,
        complement: ComplementType,
    ) -> Result<Option<&str>, CatalogError> {
        let scope = scope_of(params);
        for row in self.key.iter().filter(|r| r.algebra == algebra) {
            if row.isotropy == isotropy
                && row.complement.symmetric == complement.symmetric
                && row.complement.ideal == complement.ideal
                && holds_all(&row.regime, &scope)?.is_none()
            {
                return Ok(Some(&row.petrov));
            }
        }
        Ok(None)
    }

    pub fn reductions(&self) -> &[ReductionRow] {
        &self.reductions
    }

    /// Up to `count` grid points for each regime of an algebra. Regimes are
    /// the distinct condition sets of its worksheet rows; conditions on
    /// family parameters such as `k` are ignored.
    pub fn regime_samples(&self, key: &str, count: usize) -> Result<Vec<(String, Vec<Params>)>, CatalogError> {
        let entry = self.entry(key)?;
        let names: BTreeSet<String> = entry.params.iter().cloned().collect();
        let mut regimes: Vec<Vec<Condition>> = match self.worksheet(key) {
            Ok(w) => w.rows.iter().map(|r| r.regime.clone()).collect(),
            Err(_) => vec![Vec::new()],
        };
        regimes.dedup();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for regime in regimes {
            let label = regime.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" & ");
            if !seen.insert(label.clone()) {
                continue;
            }
            let conds: Vec<Condition> =
                entry.constraints.iter().chain(regime.iter().filter(|c| c.vars().is_subset(&names))).cloned().collect();
            let mut points = vec![Params::new()];
            for n in &entry.params {
                points = points
                    .into_iter()
                    .flat_map(|p| {
                        SAMPLE_GRID.iter().map(move |&(a, b)| {
                            let mut q = p.clone();
                            q.insert(n.clone(), Rational::new(a.into(), b.into()));
                            q
                        })
                    })
                    .collect();
            }
            let mut kept = Vec::new();
            for p in points {
                if kept.len() == count {
                    break;
                }
                if holds_all(&conds, &scope_of(&p))?.is_none() {
                    kept.push(p);
                }
            }
            out.push((label, kept));
        }
        Ok(out)
    }

    /// Named forms of one side, e.g. `forms(3)["B"]`.
    pub fn forms(&self, side: usize) -> Option<&BTreeMap<String, Vec<SymForm>>> {
        self.forms.get(&side)
    }
}

/// `"L(4,2,x,y)"` to `["4", "2", "x", "y"]`.
pub fn key_args(key: &str) -> Option<Vec<&str>> {
    let inner = key.strip_prefix("L(")?.strip_suffix(')')?;
    Some(inner.split(',').map(str::trim).collect())
}

/// Bindings from an action's parameters and derived values.
pub fn action_scope(action: &PetrovAction) -> Result<BTreeMap<String, Scalar>, CatalogError> {
    let mut scope = scope_of(&action.params);
    for (name, e) in &action.derived {
        let v = e
            .eval(&scope)
            .map_err(|source| CatalogError::Eval { context: format!("{} {name}", action.id), source })?;
        scope.insert(name.clone(), v);
    }
    Ok(scope)
}

/// The Winternitz parameters an action is identified with.
pub fn action_class_params(action: &PetrovAction) -> Result<Params, CatalogError> {
    let scope = action_scope(action)?;
    action
        .class_params
        .iter()
        .map(|(name, e)| {
            let ctx = format!("{} {name}", action.id);
            let v = e.eval(&scope).map_err(|source| CatalogError::Eval { context: ctx.clone(), source })?;
            Ok((name.clone(), exact(&ctx, v)?))
        })
        .collect()
}

/// Coordinates of a combination of `X1..Xk` in the `X` basis.
pub fn x_coords(action: &PetrovAction, expr: &Expr) -> Result<RatVec, CatalogError> {
    let k = action.group_dim;
    let scope = action_scope(action)?;
    let vectors = |name: &str| -> Option<Vec<Scalar>> {
        let i: usize = name.strip_prefix('X')?.parse().ok()?;
        (1..=k).contains(&i).then(|| liecore::unit(k, i - 1).into_iter().map(Scalar::Exact).collect())
    };
    let ctx = format!("{} {expr}", action.id);
    let v = expr
        .eval_vector(&scope, &vectors, k)
        .map_err(|source| CatalogError::Eval { context: ctx.clone(), source })?;
    v.into_iter().map(|s| exact(&ctx, s)).collect()
}

/// Change of basis of an action: row `a` writes `e_a` in `X1..Xk`.
pub fn action_basis(action: &PetrovAction) -> Result<RatMatrix, CatalogError> {
    let rows = action.basis.iter().map(|e| x_coords(action, e)).collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix::from_rows(&rows))
}

/// A combination of `X1..Xk` rewritten in the Winternitz basis.
pub fn x_to_e(action: &PetrovAction, expr: &Expr) -> Result<RatVec, CatalogError> {
    let c = x_coords(action, expr)?;
    let inv = action_basis(action)?
        .inverse()
        .ok_or_else(|| CatalogError::Invalid(format!("{}: change of basis is singular", action.id)))?;
    // v = c·X and X = B⁻¹ e, so the e-coordinates are (B⁻¹)ᵀ c
    Ok(inv.transpose().mul_vec(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use scalarlin::rat;

    fn p(pairs: &[(&str, Rational)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn embedded_catalog_loads() {
        let c = Catalog::embedded();
        assert!(c.entry("L(4,-8)").is_ok());
        assert!(c.entry("L(9,9)").is_err());
    }

    #[test]
    fn routing_hint() {
        let c = Catalog::embedded();
        let err = c.get("L(4,2,x,y)", &p(&[("x", rat(1, 1)), ("y", rat(1, 1))])).unwrap_err();
        match err {
            CatalogError::Constraint { hint, .. } => assert_eq!(hint.as_deref(), Some("L(4,2,1,1)")),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn key_arguments() {
        assert_eq!(key_args("L(4,2,x,y)").unwrap(), ["4", "2", "x", "y"]);
        assert!(key_args("M").is_none());
    }

    #[test]
    fn parameter_checks() {
        let c = Catalog::embedded();
        assert!(matches!(c.get("L(3,2,x)", &Params::new()), Err(CatalogError::MissingParam { .. })));
        assert!(matches!(
            c.get("L(3,5)", &p(&[("x", rat(1, 1))])),
            Err(CatalogError::UnexpectedParam { .. })
        ));
        assert!(matches!(c.get("L(3,2,x)", &p(&[("x", rat(0, 1))])), Err(CatalogError::Constraint { .. })));
    }
}
