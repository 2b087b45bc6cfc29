//! Regeneration of the summary tables and their cell-level comparison with
//! the transcribed copies in the catalog.

use std::collections::BTreeMap;

use canonical::enumerate_subalgebras;
use catalog::{Catalog, Params, PetrovAction, Variant};
use classify::{classify_pair, reduce_decomposable, ClassifyOptions};
use liecore::format_vector;
use scalarlin::expr::parse;
use scalarlin::{rat_to_string, subspace_equal, RatMatrix, RatVec};
use serde_json::{json, Value};

use crate::CliError;

/// How two cells of a column are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Text,
    /// A vector in `e1..en`, compared as a line.
    Line,
    /// A comma-separated list of vectors, compared as a span.
    Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<String>,
    /// Bindings for vector cells such as `x*e2 - e3`.
    pub params: Params,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub title: &'static str,
    pub columns: Vec<(&'static str, CellKind)>,
    pub rows: Vec<Row>,
}

impl Table {
    fn new(name: &'static str, title: &'static str, columns: &[(&'static str, CellKind)]) -> Self {
        Self { name, title, columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, cells: Vec<String>, params: Params, dim: usize) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(Row { cells, params, dim });
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(&r.cells).map(|((c, _), v)| (c.to_string(), json!(v))).collect()))
            .collect();
        json!({ "table": self.name, "title": self.title, "rows": rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv_line(self.columns.iter().map(|(c, _)| *c));
        for r in &self.rows {
            out.push_str(&csv_line(r.cells.iter().map(String::as_str)));
        }
        out
    }

    pub fn to_md(&self) -> String {
        let mut out = format!("### {}\n\n", self.title);
        out.push_str(&md_line(self.columns.iter().map(|(c, _)| *c)));
        out.push_str(&md_line(self.columns.iter().map(|_| "---")));
        for r in &self.rows {
            out.push_str(&md_line(r.cells.iter().map(String::as_str)));
        }
        out
    }
}

pub(crate) fn csv_line<'a>(cells: impl Iterator<Item = &'a str>) -> String {
    let quoted: Vec<String> = cells
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.to_string() })
        .collect();
    quoted.join(",") + "\n"
}

pub(crate) fn md_line<'a>(cells: impl Iterator<Item = &'a str>) -> String {
    let cells: Vec<String> = cells.map(|c| c.replace('|', "\\|")).collect();
    format!("| {} |\n", cells.join(" | "))
}

fn vector(text: &str, row: &Row) -> Option<RatVec> {
    let e = parse(text).ok()?;
    catalog::eval_basis_vector(&e, row.dim, &catalog::scope_of(&row.params), None).ok()
}

fn vectors(text: &str, row: &Row) -> Option<Vec<RatVec>> {
    text.split(", ").map(|t| vector(t, row)).collect()
}

fn cells_agree(kind: CellKind, golden: &str, golden_row: &Row, got: &str, got_row: &Row) -> bool {
    if golden == got {
        return true;
    }
    match kind {
        CellKind::Text => false,
        CellKind::Line => match (vector(golden, golden_row), vector(got, got_row)) {
            (Some(a), Some(b)) => {
                let nonzero = |v: &RatVec| v.iter().any(|x| *x != scalarlin::rat(0, 1));
                nonzero(&a) && nonzero(&b) && RatMatrix::from_rows(&[a, b]).rank() == 1
            }
            _ => false,
        },
        CellKind::Span => match (vectors(golden, golden_row), vectors(got, got_row)) {
            (Some(a), Some(b)) => subspace_equal(&a, &b).unwrap_or(false),
            _ => false,
        },
    }
}

/// Cell-level differences, rows matched on the first column.
pub fn diff(golden: &Table, got: &Table) -> Vec<String> {
    let mut out = Vec::new();
    let index: BTreeMap<&str, &Row> = got.rows.iter().map(|r| (r.cells[0].as_str(), r)).collect();
    for g in &golden.rows {
        let key = g.cells[0].as_str();
        let Some(r) = index.get(key) else {
            out.push(format!("{}: row {key} missing", golden.name));
            continue;
        };
        for (i, (col, kind)) in golden.columns.iter().enumerate() {
            if !cells_agree(*kind, &g.cells[i], g, &r.cells[i], r) {
                out.push(format!("{}: row {key} column {col}: expected `{}`, got `{}`", golden.name, g.cells[i], r.cells[i]));
            }
        }
    }
    for r in &got.rows {
        if !golden.rows.iter().any(|g| g.cells[0] == r.cells[0]) {
            out.push(format!("{}: unexpected row {}", golden.name, r.cells[0]));
        }
    }
    out
}

fn params_cell(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={}", rat_to_string(v))).collect::<Vec<_>>().join(", ")
}

fn span_cell(m: &[RatVec]) -> String {
    m.iter().map(|v| format_vector(v, "e")).collect::<Vec<_>>().join(", ")
}

const SUMMARY_COLUMNS: [(&str, CellKind); 5] = [
    ("petrov", CellKind::Text),
    ("algebra", CellKind::Text),
    ("h0", CellKind::Line),
    ("type", CellKind::Text),
    ("isotropy", CellKind::Text),
];

pub fn summary_title(dim: usize) -> (&'static str, &'static str) {
    if dim == 3 {
        ("g3-summary", "Classification summary: G3 on V2")
    } else {
        ("g4-summary", "Classification summary: G4 on V3")
    }
}

fn summary_actions(catalog: &Catalog, group_dim: usize) -> impl Iterator<Item = &PetrovAction> {
    catalog.actions().filter(move |a| a.group_dim == group_dim)
}

/// The classification summary as transcribed.
pub fn golden_summary(catalog: &Catalog, group_dim: usize) -> Result<Table, CliError> {
    let (name, title) = summary_title(group_dim);
    let mut t = Table::new(name, title, &SUMMARY_COLUMNS);
    for a in summary_actions(catalog, group_dim) {
        let cells = match &a.summary {
            Some(s) => vec![s.h0.to_string(), s.types.summary_cell(), s.isotropy.letter().to_string()],
            None => vec![String::new(); 3],
        };
        let mut row = vec![a.id.clone(), a.class.clone()];
        row.extend(cells);
        t.push(row, catalog::action_class_params(a)?, group_dim);
    }
    Ok(t)
}

/// The classification summary recomputed from each action's fields: the
/// class from the fitted structure constants, then `h0`, complement type
/// and isotropy from the pair.
pub fn regenerate_summary(catalog: &Catalog, group_dim: usize, opts: ClassifyOptions) -> Result<Table, CliError> {
    let (name, title) = summary_title(group_dim);
    let mut t = Table::new(name, title, &SUMMARY_COLUMNS);
    for a in summary_actions(catalog, group_dim) {
        let report = vfields::verify_action(catalog, &a.id, Variant::Corrected)?;
        let class = report.identified_class.clone().unwrap_or_else(|| "unidentified".into());
        let params = catalog::action_class_params(a)?;
        let mut row = vec![a.id.clone(), class];
        match (&a.h0, &a.complement) {
            (Some(h0), Some(m)) => {
                let g = catalog.get(&a.class, &params)?;
                let h0 = catalog::x_to_e(a, h0)?;
                let m = m.iter().map(|x| catalog::x_to_e(a, x)).collect::<Result<Vec<_>, _>>()?;
                let r = classify_pair(catalog, &g, &h0, Some(&m), opts)?;
                row.push(format_vector(&h0, "e"));
                row.push(r.complement_type.summary_cell());
                row.push(r.isotropy.label().map(|l| l.letter().to_string()).unwrap_or_else(|| r.isotropy.to_string()));
            }
            _ => row.extend(vec![String::new(); 3]),
        }
        t.push(row, params, group_dim);
    }
    Ok(t)
}

const METRIC_COLUMNS: [(&str, CellKind); 7] = [
    ("petrov", CellKind::Text),
    ("algebra", CellKind::Text),
    ("params", CellKind::Text),
    ("h0", CellKind::Line),
    ("complement", CellKind::Span),
    ("type", CellKind::Text),
    ("isotropy", CellKind::Text),
];

const METRIC_TITLE: &str = "Summary of invariant metrics";

pub fn golden_metrics(catalog: &Catalog) -> Table {
    let mut t = Table::new("invariant-metrics", METRIC_TITLE, &METRIC_COLUMNS);
    for s in catalog.summary() {
        let dim = catalog.entry(&s.algebra).map(|e| e.dim).unwrap_or(0);
        let m: Vec<String> = s.complement.iter().map(|e| e.to_string()).collect();
        t.push(
            vec![
                s.petrov.clone(),
                s.algebra.clone(),
                params_cell(&s.params),
                s.h0.to_string(),
                m.join(", "),
                s.types.summary_cell(),
                s.isotropy.letter().to_string(),
            ],
            s.params.clone(),
            dim,
        );
    }
    t
}

/// Every worksheet representative that carries an invariant metric, one
/// row per Petrov id. Worksheets are enumerated at their parameter samples
/// and at the parameters the transcribed table uses; when an id occurs at
/// several parameter values the transcribed ones are preferred.
pub fn regenerate_metrics(catalog: &Catalog, opts: ClassifyOptions) -> Result<Table, CliError> {
    let golden: BTreeMap<&str, &Params> = catalog.summary().iter().map(|s| (s.petrov.as_str(), &s.params)).collect();
    let mut found: BTreeMap<String, Vec<canonical::Enumerated>> = BTreeMap::new();
    for w in catalog.worksheets() {
        let mut samples = w.param_samples.clone();
        for s in catalog.summary().iter().filter(|s| s.algebra == w.key) {
            if !samples.contains(&s.params) {
                samples.push(s.params.clone());
            }
        }
        for p in &samples {
            for e in enumerate_subalgebras(catalog, &w.key, p, opts)? {
                if let Some(id) = e.report.petrov.clone() {
                    found.entry(id).or_default().push(e);
                }
            }
        }
    }
    let mut t = Table::new("invariant-metrics", METRIC_TITLE, &METRIC_COLUMNS);
    let order: Vec<String> = catalog
        .summary()
        .iter()
        .map(|s| s.petrov.clone())
        .chain(found.keys().filter(|k| !golden.contains_key(k.as_str())).cloned())
        .collect();
    for id in order {
        let Some(list) = found.get(&id) else { continue };
        let e = golden
            .get(id.as_str())
            .and_then(|p| list.iter().find(|e| &&e.report.params == p))
            .unwrap_or(&list[0]);
        let r = &e.report;
        t.push(
            vec![
                id.clone(),
                r.algebra.clone(),
                params_cell(&r.params),
                format_vector(&r.h0, "e"),
                span_cell(&r.complement),
                r.complement_type.summary_cell(),
                r.isotropy.label().map(|l| l.letter().to_string()).unwrap_or_default(),
            ],
            r.params.clone(),
            r.h0.len(),
        );
    }
    Ok(t)
}

const REDUCTION_COLUMNS: [(&str, CellKind); 6] = [
    ("g4", CellKind::Text),
    ("algebra", CellKind::Text),
    ("h0", CellKind::Line),
    ("component", CellKind::Text),
    ("g3", CellKind::Text),
    ("isotropy", CellKind::Text),
];

const REDUCTION_TITLE: &str = "Equivalences between G4 and G3 actions";

pub fn golden_reductions(catalog: &Catalog) -> Table {
    let mut t = Table::new("reductions", REDUCTION_TITLE, &REDUCTION_COLUMNS);
    for r in catalog.reductions() {
        // the transcription records no isotropy; both sides must agree
        let iso = catalog.summary().iter().find(|s| s.petrov == r.g4).map(|s| s.isotropy.letter()).unwrap_or("");
        t.push(
            vec![r.g4.clone(), r.algebra.clone(), r.h0.to_string(), r.component.clone(), r.g3.clone(), format!("{iso}/{iso}")],
            r.params.clone(),
            4,
        );
    }
    t
}

/// Each G4 pair of the transcribed reductions restricted to its
/// three-dimensional summand and classified on both sides.
pub fn regenerate_reductions(catalog: &Catalog, opts: ClassifyOptions) -> Result<Table, CliError> {
    let mut t = Table::new("reductions", REDUCTION_TITLE, &REDUCTION_COLUMNS);
    for row in catalog.reductions() {
        let g4 = catalog.get(&row.algebra, &row.params)?;
        let h0 = catalog::eval_basis_vector(&row.h0, 4, &catalog::scope_of(&row.params), None)?;
        let big = classify_pair(catalog, &g4, &h0, None, opts)?;
        let cells = match reduce_decomposable(catalog, &row.algebra, &row.params, &h0)? {
            Some(red) => {
                let g3 = catalog.get(&red.key, &red.params)?;
                let small = classify_pair(catalog, &g3, &red.h0, None, opts)?;
                let letter = |r: &classify::ClassificationReport| r.isotropy.label().map(|l| l.letter()).unwrap_or("?");
                vec![red.key, small.petrov.clone().unwrap_or_default(), format!("{}/{}", letter(&big), letter(&small))]
            }
            None => vec!["indecomposable".into(), String::new(), String::new()],
        };
        let mut r = vec![big.petrov.clone().unwrap_or_default(), row.algebra.clone(), format_vector(&h0, "e")];
        r.extend(cells);
        t.push(r, row.params.clone(), 4);
    }
    Ok(t)
}

/// Golden and regenerated copies of every table.
pub fn regenerate_tables(catalog: &Catalog, opts: ClassifyOptions) -> Result<Vec<(Table, Table)>, CliError> {
    Ok(vec![
        (golden_summary(catalog, 4)?, regenerate_summary(catalog, 4, opts)?),
        (golden_summary(catalog, 3)?, regenerate_summary(catalog, 3, opts)?),
        (golden_metrics(catalog), regenerate_metrics(catalog, opts)?),
        (golden_reductions(catalog), regenerate_reductions(catalog, opts)?),
    ])
}
