//! Parsed, typed view of the raw tables.

use std::collections::BTreeMap;

use scalarlin::expr::{parse, parse_condition, Condition, Expr};
use scalarlin::{parse_rational, Rational, SymForm};

use crate::labels::{normalize_petrov_id, ComplementType, IsotropyLabel};
use crate::raw;
use crate::CatalogError;

/// Parameter assignment such as `{x: -1/2}`.
pub type Params = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraEntry {
    pub key: String,
    pub dim: usize,
    pub params: Vec<String>,
    pub constraints: Vec<Condition>,
    /// `(i, j, [e_i, e_j])`, 1-based, `i < j`.
    pub brackets: Vec<(usize, usize, Vec<Expr>)>,
    pub decomposition: Option<Decomposition>,
}

/// `g = component ⊕ abelian`, with 1-based basis indices into `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub component: String,
    pub component_basis: Vec<usize>,
    pub abelian: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// `A_i(t) = Ad(exp(t e_i))`
    Inner,
    /// Outer automorphisms `O_i`.
    Outer,
    /// `S_i`: scales one coordinate.
    ScaleOne,
    /// `S_ij`: scales two coordinates by the same factor.
    ScaleTwo,
    /// `S_i^j`-style scalings acting on a pair with different weights.
    ScalePair,
    /// Projective rescaling of the line, not an automorphism.
    Lambda,
}

impl GenKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "inner" => GenKind::Inner,
            "outer" => GenKind::Outer,
            "scale_one" => GenKind::ScaleOne,
            "scale_two" => GenKind::ScaleTwo,
            "scale_pair" => GenKind::ScalePair,
            "lambda" => GenKind::Lambda,
            _ => return None,
        })
    }

    pub fn is_scaling(self) -> bool {
        matches!(self, GenKind::ScaleOne | GenKind::ScaleTwo | GenKind::ScalePair | GenKind::Lambda)
    }
}

/// Formula of an automorphism generator in the coordinates `y1..yn` of a
/// vector and the parameter `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    pub formula: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invariant {
    pub name: String,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalCase {
    pub id: u32,
    pub guard: Vec<Condition>,
    pub lets: Vec<(String, Expr)>,
    pub steps: Vec<(String, Expr)>,
    pub lambda: Expr,
    pub target: Expr,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorksheetRow {
    pub rep: Expr,
    pub regime: Vec<Condition>,
    pub complement: Vec<Expr>,
    pub types: ComplementType,
    pub kappa: usize,
    pub forms: Vec<String>,
    pub petrov: Vec<String>,
    /// Sample values for a free family parameter such as `k`.
    pub samples: Vec<Params>,
    /// The listed forms are a congruent representative, not the literal span.
    pub congruence_only: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Worksheet {
    pub key: String,
    pub rows: Vec<WorksheetRow>,
    pub generators: Vec<Generator>,
    pub invariants: Vec<Invariant>,
    pub cases: Vec<CanonicalCase>,
    pub param_samples: Vec<Params>,
}

impl Worksheet {
    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Corrected,
    Typo,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Corrected => "corrected",
            Variant::Typo => "typo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionSummary {
    pub h0: Expr,
    pub types: ComplementType,
    pub isotropy: IsotropyLabel,
}

/// One of Petrov's local group actions, with everything needed to check it.
///
/// Fields are vector expressions in `p1..pn` with coefficients in `x1..xn`
/// and the action's parameters; `basis` writes the Winternitz basis
/// `e_a` in terms of `X1..Xk`.
#[derive(Debug, Clone, PartialEq)]
pub struct PetrovAction {
    pub id: String,
    pub variant: Variant,
    pub group_dim: usize,
    pub coords: usize,
    pub params: Params,
    pub derived: Vec<(String, Expr)>,
    pub fields: Vec<Expr>,
    pub class: String,
    pub class_params: Vec<(String, Expr)>,
    pub basis: Vec<Expr>,
    pub generic_isotropy: Expr,
    pub x0: Option<Vec<Expr>>,
    pub h0: Option<Expr>,
    pub complement: Option<Vec<Expr>>,
    pub summary: Option<ActionSummary>,
    pub sample_box: Vec<(Rational, Rational)>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algebra: String,
    pub params: Params,
    pub h0: Expr,
    pub complement: Vec<Expr>,
    pub types: ComplementType,
    pub isotropy: IsotropyLabel,
    pub petrov: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyRow {
    pub algebra: String,
    pub regime: Vec<Condition>,
    pub isotropy: IsotropyLabel,
    pub complement: ComplementType,
    pub petrov: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionRow {
    pub algebra: String,
    pub params: Params,
    pub h0: Expr,
    pub component: String,
    pub component_params: Params,
    pub g4: String,
    pub g3: String,
}

// ---------------------------------------------------------------------------

pub(crate) fn expr(ctx: &str, s: &str) -> Result<Expr, CatalogError> {
    parse(s).map_err(|e| CatalogError::Parse { context: ctx.to_string(), message: e.to_string() })
}

fn exprs(ctx: &str, v: &[String]) -> Result<Vec<Expr>, CatalogError> {
    v.iter().map(|s| expr(ctx, s)).collect()
}

fn conds(ctx: &str, v: &[String]) -> Result<Vec<Condition>, CatalogError> {
    v.iter()
        .map(|s| parse_condition(s).map_err(|e| CatalogError::Parse { context: ctx.to_string(), message: e.to_string() }))
        .collect()
}

fn rational(ctx: &str, s: &str) -> Result<Rational, CatalogError> {
    parse_rational(s).ok_or_else(|| CatalogError::Invalid(format!("{ctx}: `{s}` is not a rational number")))
}

pub(crate) fn params(ctx: &str, m: &BTreeMap<String, String>) -> Result<Params, CatalogError> {
    m.iter().map(|(k, v)| Ok((k.clone(), rational(ctx, v)?))).collect()
}

/// Zips `{x: [a, b], y: [c, d]}` into `[{x: a, y: c}, {x: b, y: d}]`.
fn zip_samples(ctx: &str, m: &BTreeMap<String, Vec<String>>) -> Result<Vec<Params>, CatalogError> {
    let n = m.values().map(Vec::len).next().unwrap_or(0);
    if m.values().any(|v| v.len() != n) {
        return Err(CatalogError::Invalid(format!("{ctx}: sample lists differ in length")));
    }
    (0..n)
        .map(|i| m.iter().map(|(k, v)| Ok((k.clone(), rational(ctx, &v[i])?))).collect())
        .collect()
}

fn worksheet_types(ctx: &str, s: &str) -> Result<ComplementType, CatalogError> {
    ComplementType::from_worksheet_cell(s).ok_or_else(|| CatalogError::Invalid(format!("{ctx}: complement type `{s}`")))
}

fn summary_types(ctx: &str, s: &str) -> Result<ComplementType, CatalogError> {
    ComplementType::from_summary_cell(s).ok_or_else(|| CatalogError::Invalid(format!("{ctx}: complement type `{s}`")))
}

fn isotropy(ctx: &str, s: &str) -> Result<IsotropyLabel, CatalogError> {
    IsotropyLabel::from_letter(s).ok_or_else(|| CatalogError::Invalid(format!("{ctx}: isotropy type `{s}`")))
}

impl AlgebraEntry {
    pub(crate) fn from_raw(a: &raw::AlgebraData) -> Result<Self, CatalogError> {
        let ctx = a.key.as_str();
        let brackets = a
            .brackets
            .iter()
            .map(|b| {
                if b.coeffs.len() != a.dim {
                    return Err(CatalogError::Invalid(format!("{ctx}: bracket [e{}, e{}] has wrong length", b.i, b.j)));
                }
                Ok((b.i, b.j, exprs(ctx, &b.coeffs)?))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            key: a.key.clone(),
            dim: a.dim,
            params: a.params.clone(),
            constraints: conds(ctx, &a.constraints)?,
            brackets,
            decomposition: a.decomposition.as_ref().map(|d| Decomposition {
                component: d.component.clone(),
                component_basis: d.component_basis.clone(),
                abelian: d.abelian.clone(),
            }),
        })
    }
}

impl Worksheet {
    pub(crate) fn from_raw(w: &raw::WorksheetData) -> Result<Self, CatalogError> {
        let ctx = w.key.as_str();
        let rows = w
            .rows
            .iter()
            .map(|r| {
                let rctx = format!("{ctx} row {}", r.rep);
                Ok(WorksheetRow {
                    rep: expr(&rctx, &r.rep)?,
                    regime: conds(&rctx, &r.regime)?,
                    complement: exprs(&rctx, &r.complement)?,
                    types: worksheet_types(&rctx, &r.types)?,
                    kappa: r.kappa,
                    forms: r.forms.clone(),
                    petrov: r.petrov.iter().map(|p| normalize_petrov_id(p)).collect(),
                    samples: match &r.samples {
                        Some(s) => zip_samples(&rctx, s)?,
                        None => Vec::new(),
                    },
                    congruence_only: match r.compare.as_deref() {
                        None => false,
                        Some("congruence") => true,
                        Some(other) => return Err(CatalogError::Invalid(format!("{rctx}: compare `{other}`"))),
                    },
                    note: r.note.clone(),
                })
            })
            .collect::<Result<_, CatalogError>>()?;
        let generators = w
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    kind: GenKind::parse(&g.kind)
                        .ok_or_else(|| CatalogError::Invalid(format!("{ctx}: generator kind `{}`", g.kind)))?,
                    formula: exprs(&format!("{ctx} {}", g.name), &g.formula)?,
                })
            })
            .collect::<Result<_, CatalogError>>()?;
        let invariants = w
            .invariants
            .iter()
            .map(|i| Ok(Invariant { name: i.name.clone(), expr: expr(ctx, &i.expr)? }))
            .collect::<Result<_, CatalogError>>()?;
        let cases = w
            .cases
            .iter()
            .map(|c| {
                let cctx = format!("{ctx} case {}", c.id);
                Ok(CanonicalCase {
                    id: c.id,
                    guard: conds(&cctx, &c.guard)?,
                    lets: c.lets.iter().map(|(n, e)| Ok((n.clone(), expr(&cctx, e)?))).collect::<Result<_, CatalogError>>()?,
                    steps: c.steps.iter().map(|(n, e)| Ok((n.clone(), expr(&cctx, e)?))).collect::<Result<_, CatalogError>>()?,
                    lambda: expr(&cctx, &c.lambda)?,
                    target: expr(&cctx, &c.target)?,
                    note: c.note.clone(),
                })
            })
            .collect::<Result<_, CatalogError>>()?;
        Ok(Self {
            key: w.key.clone(),
            rows,
            generators,
            invariants,
            cases,
            param_samples: match &w.param_samples {
                Some(s) => zip_samples(ctx, s)?,
                None => vec![Params::new()],
            },
        })
    }
}

/// Returns the corrected action and, when recorded, the typo variant.
pub(crate) fn actions_from_raw(a: &raw::ActionData) -> Result<(PetrovAction, Option<PetrovAction>), CatalogError> {
    let ctx = a.id.as_str();
    let sample_box = match &a.sample_box {
        Some(b) => b.iter().map(|(lo, hi)| Ok((rational(ctx, lo)?, rational(ctx, hi)?))).collect::<Result<_, CatalogError>>()?,
        None => vec![(Rational::new(1.into(), 5.into()), Rational::new(4.into(), 5.into())); a.coords],
    };
    let corrected = PetrovAction {
        id: normalize_petrov_id(&a.id),
        variant: Variant::Corrected,
        group_dim: a.group_dim,
        coords: a.coords,
        params: params(ctx, &a.params)?,
        derived: a.derived.iter().map(|(n, e)| Ok((n.clone(), expr(ctx, e)?))).collect::<Result<_, CatalogError>>()?,
        fields: exprs(ctx, &a.fields)?,
        class: a.class.clone(),
        class_params: a.class_params.iter().map(|(n, e)| Ok((n.clone(), expr(ctx, e)?))).collect::<Result<_, CatalogError>>()?,
        basis: exprs(ctx, &a.basis)?,
        generic_isotropy: expr(ctx, &a.generic_isotropy)?,
        x0: a.x0.as_ref().map(|v| exprs(ctx, v)).transpose()?,
        h0: a.h0.as_ref().map(|v| expr(ctx, v)).transpose()?,
        complement: a.complement.as_ref().map(|v| exprs(ctx, v)).transpose()?,
        summary: a
            .summary
            .as_ref()
            .map(|s| {
                Ok::<_, CatalogError>(ActionSummary {
                    h0: expr(ctx, &s.h0)?,
                    types: summary_types(ctx, &s.types)?,
                    isotropy: isotropy(ctx, &s.isotropy)?,
                })
            })
            .transpose()?,
        sample_box,
        note: a.note.clone(),
    };
    if corrected.fields.len() != corrected.group_dim || corrected.basis.len() != corrected.group_dim {
        return Err(CatalogError::Invalid(format!("{ctx}: field or basis count differs from the group dimension")));
    }
    let typo = a
        .typo
        .as_ref()
        .map(|t| {
            let mut v = corrected.clone();
            v.variant = Variant::Typo;
            v.fields = exprs(ctx, &t.fields)?;
            if let Some(c) = &t.class {
                v.class = c.clone();
                v.class_params = Vec::new();
            }
            if let Some(b) = &t.basis {
                v.basis = exprs(ctx, b)?;
            }
            Ok::<_, CatalogError>(v)
        })
        .transpose()?;
    Ok((corrected, typo))
}

impl SummaryRow {
    pub(crate) fn from_raw(s: &raw::SummaryData) -> Result<Self, CatalogError> {
        let ctx = format!("summary {}", s.petrov);
        Ok(Self {
            algebra: s.algebra.clone(),
            params: params(&ctx, &s.params)?,
            h0: expr(&ctx, &s.h0)?,
            complement: exprs(&ctx, &s.complement)?,
            types: summary_types(&ctx, &s.types)?,
            isotropy: isotropy(&ctx, &s.isotropy)?,
            petrov: normalize_petrov_id(&s.petrov),
        })
    }
}

impl KeyRow {
    pub(crate) fn from_raw(k: &raw::KeyData) -> Result<Self, CatalogError> {
        let ctx = format!("petrov key {}", k.petrov);
        Ok(Self {
            algebra: k.algebra.clone(),
            regime: conds(&ctx, &k.regime)?,
            isotropy: isotropy(&ctx, &k.isotropy)?,
            complement: summary_types(&ctx, &k.complement)?,
            petrov: normalize_petrov_id(&k.petrov),
        })
    }
}

impl ReductionRow {
    pub(crate) fn from_raw(r: &raw::ReductionData) -> Result<Self, CatalogError> {
        let ctx = format!("reduction {}", r.g4);
        Ok(Self {
            algebra: r.algebra.clone(),
            params: params(&ctx, &r.params)?,
            h0: expr(&ctx, &r.h0)?,
            component: r.component.clone(),
            component_params: params(&ctx, &r.component_params)?,
            g4: normalize_petrov_id(&r.g4),
            g3: normalize_petrov_id(&r.g3),
        })
    }
}

/// Named quadratic forms per quotient dimension; `Q` maps to a full basis.
pub(crate) fn forms_from_raw(
    f: &BTreeMap<String, BTreeMap<String, raw::FormData>>,
) -> Result<BTreeMap<usize, BTreeMap<String, Vec<SymForm>>>, CatalogError> {
    let mut out = BTreeMap::new();
    for (side, table) in f {
        let n: usize = side.parse().map_err(|_| CatalogError::Invalid(format!("form side `{side}`")))?;
        let one = |v: &[String]| -> Result<SymForm, CatalogError> {
            if v.len() != n * (n + 1) / 2 {
                return Err(CatalogError::Invalid(format!("form of side {n} has {} entries", v.len())));
            }
            Ok(SymForm::new(n, v.iter().map(|s| rational("forms", s)).collect::<Result<_, _>>()?))
        };
        let mut named = BTreeMap::new();
        for (name, data) in table {
            let forms = match data {
                raw::FormData::One(v) => vec![one(v)?],
                raw::FormData::Many(vs) => vs.iter().map(|v| one(v)).collect::<Result<_, _>>()?,
            };
            named.insert(name.clone(), forms);
        }
        out.insert(n, named);
    }
    Ok(out)
}
