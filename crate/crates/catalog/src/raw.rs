//! On-disk JSON schema. Everything is kept as strings so a dump reproduces
//! the source file field for field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogData {
    pub algebras: Vec<AlgebraData>,
    pub worksheets: Vec<WorksheetData>,
    pub actions: Vec<ActionData>,
    pub equivalences: Vec<(String, String)>,
    pub summary: Vec<SummaryData>,
    pub petrov_key: Vec<KeyData>,
    pub reductions: Vec<ReductionData>,
    pub forms: BTreeMap<String, BTreeMap<String, FormData>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraData {
    pub key: String,
    pub dim: usize,
    pub params: Vec<String>,
    pub constraints: Vec<String>,
    pub brackets: Vec<BracketData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketData {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionData {
    pub component: String,
    pub component_basis: Vec<usize>,
    pub abelian: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorksheetData {
    pub key: String,
    pub rows: Vec<RowData>,
    pub generators: Vec<GeneratorData>,
    pub invariants: Vec<InvariantData>,
    pub cases: Vec<CaseData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_samples: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowData {
    pub rep: String,
    pub regime: Vec<String>,
    pub complement: Vec<String>,
    pub types: String,
    pub kappa: usize,
    pub forms: Vec<String>,
    pub petrov: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorData {
    pub name: String,
    pub kind: String,
    pub formula: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantData {
    pub name: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseData {
    pub id: u32,
    pub guard: Vec<String>,
    pub lets: Vec<(String, String)>,
    pub steps: Vec<(String, String)>,
    pub lambda: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionData {
    pub id: String,
    pub group_dim: usize,
    pub coords: usize,
    pub params: BTreeMap<String, String>,
    pub derived: Vec<(String, String)>,
    pub fields: Vec<String>,
    pub class: String,
    pub class_params: BTreeMap<String, String>,
    pub basis: Vec<String>,
    pub generic_isotropy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<ActionSummaryData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub typo: Option<TypoData>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub sample_box: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSummaryData {
    pub h0: String,
    pub types: String,
    pub isotropy: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypoData {
    pub fields: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryData {
    pub algebra: String,
    pub params: BTreeMap<String, String>,
    pub h0: String,
    pub complement: Vec<String>,
    pub types: String,
    pub isotropy: String,
    pub petrov: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyData {
    pub algebra: String,
    pub regime: Vec<String>,
    pub isotropy: String,
    pub complement: String,
    pub petrov: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionData {
    pub algebra: String,
    pub params: BTreeMap<String, String>,
    pub h0: String,
    pub component: String,
    pub component_params: BTreeMap<String, String>,
    pub g4: String,
    pub g3: String,
}

/// A named form is one upper triangle, `Q` is the list of all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormData {
    One(Vec<String>),
    Many(Vec<Vec<String>>),
}
