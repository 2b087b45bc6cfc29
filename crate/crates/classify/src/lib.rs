//! Classification of a pair `(g, h)` with `h` one-dimensional: the induced
//! action of `h` on `g/h`, its invariant quadratic forms, the complement
//! and isotropy types, and the Petrov number when the pair carries an
//! invariant metric.

mod forms;
mod isotropy;

use catalog::{Catalog, CatalogError, ComplementType, IsotropyLabel, Params};
use liecore::{LieAlgebra, LieError, QuotientMode};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalarlin::{rat_to_string, RatMatrix, RatVec, Rational, SymForm};
use serde_json::{json, Value};
use thiserror::Error;

pub use forms::{admissibility, invariant_forms, is_invariant, same_span, Admissibility};
pub use isotropy::{isotropy_type, IsotropyType};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("no reductive complement exists for h0 = {0}")]
    NoReductiveComplement(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Seed of the random stage of the admissibility search.
    pub seed: u64,
    pub trials: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { seed: 0, trials: 256 }
    }
}

fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Unit vectors completing `h0` to a basis: drops `e_i` for the first
/// nonzero coordinate of `h0`.
pub fn coordinate_complement(h0: &[Rational]) -> Vec<RatVec> {
    let n = h0.len();
    let skip = h0.iter().position(|x| !x.is_zero()).unwrap_or(0);
    (0..n).filter(|&i| i != skip).map(|i| liecore::unit(n, i)).collect()
}

/// Dimension of the kernel of the action of `h` on `g/h`.
pub fn kappa(g: &LieAlgebra, h0: &[Rational]) -> Result<usize, ClassifyError> {
    let m = g.quotient_action(h0, &coordinate_complement(h0), QuotientMode::Quotient)?;
    Ok(m.rows() - m.rank())
}

/// Complement type of `m` as a complement of `span(h0)`.
pub fn complement_type(g: &LieAlgebra, h0: &[Rational], m: &[RatVec]) -> ComplementType {
    let h = [h0.to_vec()];
    if !g.bracket_contained(&h, m, m) {
        return ComplementType::NON_REDUCTIVE;
    }
    let all: Vec<RatVec> = (0..g.dim()).map(|i| g.basis_vector(i)).collect();
    ComplementType {
        reductive: true,
        symmetric: g.bracket_contained(m, m, &h),
        ideal: g.bracket_contained(&all, m, m),
    }
}

fn spans_with(h0: &[Rational], m: &[RatVec]) -> bool {
    let mut rows = vec![h0.to_vec()];
    rows.extend(m.iter().cloned());
    RatMatrix::from_rows(&rows).rank() == h0.len()
}

/// A complement `m` with `[h0, m] ⊆ m`.
///
/// Coordinate complements are tried first in lexicographic order. Failing
/// those, an invariant hyperplane `ker φ` is solved for: `φ ad(h0) = 0`
/// with `φ(h0) ≠ 0`.
pub fn find_reductive_complement(g: &LieAlgebra, h0: &[Rational]) -> Result<Vec<RatVec>, ClassifyError> {
    let n = g.dim();
    let h = [h0.to_vec()];
    // omitting the last index first gives the lexicographic order of subsets
    for omit in (0..n).rev() {
        let m: Vec<RatVec> = (0..n).filter(|&i| i != omit).map(|i| liecore::unit(n, i)).collect();
        if spans_with(h0, &m) && g.bracket_contained(&h, &m, &m) {
            return Ok(m);
        }
    }
    let ad = g.ad_matrix(h0)?;
    let dot = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let phi = ad
        .transpose()
        .nullspace()
        .into_iter()
        .find(|phi| !dot(phi, h0).is_zero())
        .ok_or_else(|| ClassifyError::NoReductiveComplement(liecore::format_vector(h0, "e")))?;
    Ok(RatMatrix::from_rows(&[phi]).nullspace())
}

/// Everything the pipeline derives for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub algebra: String,
    pub params: Params,
    pub h0: RatVec,
    pub complement: Vec<RatVec>,
    pub kappa: usize,
    /// `ad(h0)` on `g/h` in the complement basis.
    pub m: RatMatrix,
    pub isotropy: IsotropyType,
    pub forms: Vec<SymForm>,
    pub admissibility: Admissibility,
    pub effective: bool,
    pub complement_type: ComplementType,
    /// G4: a Lorentz form exists. G3: any nondegenerate form exists.
    pub metric: bool,
    pub petrov: Option<String>,
    pub seed: u64,
}

impl ClassificationReport {
    /// Stable field order; rationals as `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        let vec = |v: &[Rational]| v.iter().map(rat_to_string).collect::<Vec<_>>();
        let form = |f: &Option<SymForm>| f.as_ref().map(|f| vec(f.upper()));
        json!({
            "algebra": self.algebra,
            "params": self.params.iter().map(|(k, v)| (k.clone(), Value::String(rat_to_string(v)))).collect::<serde_json::Map<_, _>>(),
            "h0": vec(&self.h0),
            "complement": self.complement.iter().map(|v| vec(v)).collect::<Vec<_>>(),
            "kappa": self.kappa,
            "m": (0..self.m.rows()).map(|i| vec(self.m.row(i))).collect::<Vec<_>>(),
            "isotropy": match &self.isotropy {
                IsotropyType::Unclassified(why) => format!("unclassified ({why})"),
                t => t.to_string(),
            },
            "forms": self.forms.iter().map(|f| vec(f.upper())).collect::<Vec<_>>(),
            "admissibility": {
                "lorentz": form(&self.admissibility.lorentz),
                "riemannian": form(&self.admissibility.riemannian),
            },
            "effective": self.effective,
            "complement_type": {
                "reductive": self.complement_type.reductive,
                "symmetric": self.complement_type.symmetric,
                "ideal": self.complement_type.ideal,
            },
            "metric": self.metric,
            "petrov": self.petrov,
            "seed": self.seed,
        })
    }
}

/// Runs the whole pipeline. Without `m` a reductive complement is
/// searched for; a given `m` need not be reductive, in which case the
/// action on `g/h` is read off in quotient mode.
pub fn classify_pair(
    catalog: &Catalog,
    g: &LieAlgebra,
    h0: &[Rational],
    m: Option<&[RatVec]>,
    opts: ClassifyOptions,
) -> Result<ClassificationReport, ClassifyError> {
    if h0.len() != g.dim() {
        return Err(LieError::Length { expected: g.dim(), found: h0.len() }.into());
    }
    if is_zero(h0) {
        return Err(LieError::ZeroVector.into());
    }
    let complement = match m {
        Some(m) => m.to_vec(),
        None => find_reductive_complement(g, h0)?,
    };
    let mat = g.quotient_action(h0, &complement, QuotientMode::Quotient)?;
    let kappa = mat.rows() - mat.rank();
    let isotropy = isotropy_type(&mat);
    let forms = invariant_forms(&mat);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let adm = admissibility(&forms, &mut rng, opts.trials);
    let effective = !mat.is_zero();
    let ctype = complement_type(g, h0, &complement);
    let metric = if g.dim() == 4 { adm.lorentz.is_some() } else { adm.nondegenerate() };
    let petrov = match isotropy.label() {
        Some(label) if effective && metric && ctype.reductive => {
            petrov_identify(catalog, g.key(), g.params(), label, ctype)?
        }
        _ => None,
    };
    Ok(ClassificationReport {
        algebra: g.key().to_string(),
        params: g.params().clone(),
        h0: h0.to_vec(),
        complement,
        kappa,
        m: mat,
        isotropy,
        forms,
        admissibility: adm,
        effective,
        complement_type: ctype,
        metric,
        petrov,
        seed: opts.seed,
    })
}

/// Petrov id (or [`catalog::MISSING`]) for the data that determines it.
pub fn petrov_identify(
    catalog: &Catalog,
    key: &str,
    params: &Params,
    isotropy: IsotropyLabel,
    complement: ComplementType,
) -> Result<Option<String>, ClassifyError> {
    Ok(catalog.identify(key, params, isotropy, complement)?.map(str::to_string))
}

/// A G4 pair seen as a G3 pair on the three-dimensional summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub key: String,
    pub params: Params,
    pub h0: RatVec,
}

/// Restricts `h0` to the three-dimensional summand of a decomposable
/// algebra. `None` when the algebra is indecomposable or `h0` has a
/// component along the abelian summand.
pub fn reduce_decomposable(
    catalog: &Catalog,
    key: &str,
    params: &Params,
    h0: &[Rational],
) -> Result<Option<Reduction>, ClassifyError> {
    let entry = catalog.entry(key)?;
    let Some(dec) = &entry.decomposition else { return Ok(None) };
    if dec.abelian.iter().any(|&i| !h0[i - 1].is_zero()) {
        return Ok(None);
    }
    let comp = catalog.entry(&dec.component)?;
    let sub: Params = params.iter().filter(|(k, _)| comp.params.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
    let (_, key, params) = catalog.get_routed(&dec.component, &sub)?;
    Ok(Some(Reduction { key, params, h0: dec.component_basis.iter().map(|&i| h0[i - 1].clone()).collect() }))
}
