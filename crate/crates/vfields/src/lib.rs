//! Numeric checks of Petrov's vector-field realizations.
//!
//! Components are expression trees in `x1..xn`. Brackets differentiate the
//! trees symbolically and evaluate in `f64`; structure constants are then
//! recovered by least squares over points drawn from the action's sampling
//! box.

mod diff;

pub use diff::derivative;

use std::collections::BTreeMap;

use catalog::{Catalog, CatalogError, PetrovAction, Variant};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalarlin::expr::{EvalError, Expr};
use scalarlin::{Rational, Scalar};
use serde_json::{json, Value};

/// Closure, identification and isotropy residuals pass at or below this.
pub const PASS_TOL: f64 = 1e-9;
/// A typo variant fails closure when its residual exceeds this.
pub const FAIL_TOL: f64 = 1e-3;
/// Points drawn per verification.
pub const SAMPLE_POINTS: usize = 24;

/// Ratio of smallest to largest singular value below which the fields are
/// treated as dependent on the sampled points.
const CONDITION: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum VfError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{context}: {source}")]
    Eval { context: String, source: EvalError },
    #[error("`{0}` is not finite here; the sampling box may touch a pole")]
    NonFinite(String),
    #[error("`{0}` is not linear in its vector symbols")]
    NotLinear(String),
    #[error("{0}: singular least-squares system; sample more points")]
    Singular(String),
    #[error("expected a point with {expected} coordinates, got {found}")]
    Dimension { expected: usize, found: usize },
}

/// Numeric values of parameters and derived constants.
pub type Constants = BTreeMap<String, f64>;

/// Name of the `i`-th coordinate, 0-based: `x1`, `x2`, ...
pub fn coordinate(i: usize) -> String {
    format!("x{}", i + 1)
}

fn to_f64(r: &Rational) -> f64 {
    Scalar::Exact(r.clone()).to_f64()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Evaluates `e` with `x1..xn` bound to `p` and everything else looked up
/// in `constants`.
pub fn eval_at(e: &Expr, p: &[f64], constants: &Constants) -> Result<f64, VfError> {
    let lookup = |name: &str| -> Option<f64> {
        let i = name.strip_prefix('x').and_then(|i| i.parse::<usize>().ok());
        match i {
            Some(i) if (1..=p.len()).contains(&i) => Some(p[i - 1]),
            _ => constants.get(name).copied(),
        }
    };
    let v = e.eval_f64(&lookup).map_err(|source| VfError::Eval { context: e.to_string(), source })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(VfError::NonFinite(e.to_string()))
    }
}

/// Polynomial degree of `e` in `symbols`, or `None` where a symbol sits
/// inside a function, a denominator or a negative power.
fn degree(e: &Expr, symbols: &[String]) -> Option<u32> {
    match e {
        Expr::Num(_) | Expr::Pi => Some(0),
        Expr::Var(n) => Some(u32::from(symbols.contains(n))),
        Expr::Neg(a) => degree(a, symbols),
        Expr::Add(a, b) | Expr::Sub(a, b) => Some(degree(a, symbols)?.max(degree(b, symbols)?)),
        Expr::Mul(a, b) => Some(degree(a, symbols)? + degree(b, symbols)?),
        Expr::Div(a, b) => match degree(b, symbols)? {
            0 => degree(a, symbols),
            _ => None,
        },
        Expr::Pow(a, k) => match degree(a, symbols)? {
            0 => Some(0),
            d if *k >= 0 => Some(d * k.unsigned_abs()),
            _ => None,
        },
        Expr::Call(_, a) => (degree(a, symbols)? == 0).then_some(0),
    }
}

/// Splits `Σ c_i(x) s_i` into the coefficients `c_i`.
pub fn linear_coefficients(e: &Expr, symbols: &[String]) -> Result<Vec<Expr>, VfError> {
    if degree(e, symbols).map_or(true, |d| d > 1) {
        return Err(VfError::NotLinear(e.to_string()));
    }
    let pick = |k: Option<usize>| {
        e.substitute(&|name| {
            let i = symbols.iter().position(|s| s == name)?;
            Some(Expr::int(i64::from(Some(i) == k)))
        })
    };
    if pick(None).as_num().map_or(true, |r| *r != scalarlin::rat(0, 1)) {
        return Err(VfError::NotLinear(e.to_string()));
    }
    Ok((0..symbols.len()).map(|k| pick(Some(k))).collect())
}

/// A vector field `Σ X^k ∂_k` on coordinates `x1..xn`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<Expr>,
    /// `jacobian[k][j]` is `∂_j X^k`.
    jacobian: Vec<Vec<Expr>>,
}

impl VectorField {
    pub fn new(components: Vec<Expr>) -> Self {
        let n = components.len();
        let jacobian = components.iter().map(|c| (0..n).map(|j| derivative(c, &coordinate(j))).collect()).collect();
        Self { components, jacobian }
    }

    /// Reads the table notation `a*p1 + b*p2 + ...` on `n` coordinates.
    pub fn from_p(e: &Expr, n: usize) -> Result<Self, VfError> {
        let symbols: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        Ok(Self::new(linear_coefficients(e, &symbols)?))
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// The bracket as a field of its own, `[X,Y]^k = X^j ∂_j Y^k - Y^j ∂_j X^k`.
    pub fn bracket(&self, other: &Self) -> Self {
        let n = self.dim();
        let comps = (0..n)
            .map(|k| {
                (0..n).fold(Expr::int(0), |acc, j| {
                    acc + self.components[j].clone() * other.jacobian[k][j].clone()
                        - other.components[j].clone() * self.jacobian[k][j].clone()
                })
            })
            .collect();
        Self::new(comps)
    }

    fn check(&self, p: &[f64]) -> Result<(), VfError> {
        if p.len() == self.dim() {
            Ok(())
        } else {
            Err(VfError::Dimension { expected: self.dim(), found: p.len() })
        }
    }

    fn jacobian_at(&self, p: &[f64], constants: &Constants) -> Result<Vec<Vec<f64>>, VfError> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|e| eval_at(e, p, constants)).collect())
            .collect()
    }
}

/// Components of `x` at `p`.
pub fn vf_eval(x: &VectorField, p: &[f64], constants: &Constants) -> Result<Vec<f64>, VfError> {
    x.check(p)?;
    x.components.iter().map(|e| eval_at(e, p, constants)).collect()
}

/// `[X,Y](p)` from the symbolic partial derivatives.
pub fn vf_bracket_at(x: &VectorField, y: &VectorField, p: &[f64], constants: &Constants) -> Result<Vec<f64>, VfError> {
    let (xv, yv) = (vf_eval(x, p, constants)?, vf_eval(y, p, constants)?);
    y.check(p)?;
    let (dx, dy) = (x.jacobian_at(p, constants)?, y.jacobian_at(p, constants)?);
    Ok((0..p.len()).map(|k| (0..p.len()).map(|j| xv[j] * dy[k][j] - yv[j] * dx[k][j]).sum()).collect())
}

/// Structure constants recovered from sampled points.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    /// `constants[i][j][k]` is the coefficient of `X_k` in `[X_i, X_j]`.
    pub constants: Vec<Vec<Vec<f64>>>,
    /// Largest pointwise misfit `‖[X_i,X_j](p) - Σ c^k X_k(p)‖`.
    pub residual: f64,
}

/// One action with its fields parsed and its constants evaluated.
#[derive(Debug, Clone)]
pub struct Realization<'a> {
    pub action: &'a PetrovAction,
    pub fields: Vec<VectorField>,
    pub constants: Constants,
}

impl<'a> Realization<'a> {
    pub fn new(action: &'a PetrovAction) -> Result<Self, VfError> {
        let constants = catalog::action_scope(action)?.into_iter().map(|(k, v)| (k, v.to_f64())).collect();
        let fields = action.fields.iter().map(|f| VectorField::from_p(f, action.coords)).collect::<Result<_, _>>()?;
        Ok(Self { action, fields, constants })
    }

    pub fn eval(&self, i: usize, p: &[f64]) -> Result<Vec<f64>, VfError> {
        vf_eval(&self.fields[i], p, &self.constants)
    }

    pub fn bracket_at(&self, i: usize, j: usize, p: &[f64]) -> Result<Vec<f64>, VfError> {
        vf_bracket_at(&self.fields[i], &self.fields[j], p, &self.constants)
    }

    /// Coefficients of a combination of `X1..Xk` evaluated at `p`.
    pub fn x_coefficients(&self, e: &Expr, p: &[f64]) -> Result<Vec<f64>, VfError> {
        let symbols: Vec<String> = (1..=self.action.group_dim).map(|i| format!("X{i}")).collect();
        linear_coefficients(e, &symbols)?.iter().map(|c| eval_at(c, p, &self.constants)).collect()
    }

    /// The tangent vector `Σ c_k(p) X_k(p)`.
    pub fn combination_at(&self, e: &Expr, p: &[f64]) -> Result<Vec<f64>, VfError> {
        let mut out = vec![0.0; self.action.coords];
        for (k, c) in self.x_coefficients(e, p)?.into_iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.eval(k, p)?) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Uniform points in the sampling box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| self.action.sample_box.iter().map(|(lo, hi)| rng.random_range(to_f64(lo)..=to_f64(hi))).collect())
            .collect()
    }

    /// The fixed seed of this action's id.
    pub fn seed(&self) -> u64 {
        // FNV-1a, stable across platforms and releases
        self.action.id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
    }

    /// Least-squares structure constants over `points`.
    pub fn fit(&self, points: &[Vec<f64>]) -> Result<Fit, VfError> {
        let (n, k, m) = (self.action.coords, self.action.group_dim, points.len());
        let values = points
            .iter()
            .map(|p| (0..k).map(|i| self.eval(i, p)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if n * m < k {
            return Err(VfError::Singular(self.action.id.clone()));
        }
        let a = DMatrix::from_fn(n * m, k, |r, c| values[r / n][c][r % n]);
        let svd = a.clone().svd(true, true);
        let (lo, hi) = (svd.singular_values.min(), svd.singular_values.max());
        if hi <= 0.0 || lo / hi < CONDITION {
            return Err(VfError::Singular(self.action.id.clone()));
        }
        let mut constants = vec![vec![vec![0.0; k]; k]; k];
        let mut residual: f64 = 0.0;
        #[allow(clippy::needless_range_loop)]
        for i in 0..k {
            for j in i + 1..k {
                let mut b = Vec::with_capacity(n * m);
                for p in points {
                    b.extend(self.bracket_at(i, j, p)?);
                }
                let b = DVector::from_vec(b);
                let c = svd.solve(&b, 0.0).map_err(|_| VfError::Singular(self.action.id.clone()))?;
                let misfit = &a * &c - &b;
                for row in 0..m {
                    residual = residual.max(misfit.rows(row * n, n).norm());
                }
                constants[i][j] = c.iter().copied().collect();
                constants[j][i] = c.iter().map(|x| -x).collect();
            }
        }
        Ok(Fit { constants, residual })
    }

    /// Largest deviation of the fitted constants, rewritten in the recorded
    /// Winternitz basis, from the catalog table.
    pub fn identification_residual(&self, catalog: &Catalog, fit: &Fit) -> Result<f64, VfError> {
        let k = self.action.group_dim;
        let params = catalog::action_class_params(self.action)?;
        let g = catalog.get(&self.action.class, &params)?;
        if g.dim() != k {
            return Err(CatalogError::Invalid(format!("{}: {} has dimension {}", self.action.id, g.key(), g.dim())).into());
        }
        // basis coefficients are constants, so any point will do
        let anywhere = vec![0.0; self.action.coords];
        let rows = self.action.basis.iter().map(|e| self.x_coefficients(e, &anywhere)).collect::<Result<Vec<_>, _>>()?;
        let b = DMatrix::from_fn(k, k, |a, i| rows[a][i]);
        let inv = b.clone().try_inverse().ok_or_else(|| VfError::Singular(format!("{} change of basis", self.action.id)))?;
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for bb in 0..k {
                let want = g.structure(a, bb);
                for c in 0..k {
                    let mut got = 0.0;
                    for i in 0..k {
                        for j in 0..k {
                            let w = b[(a, i)] * b[(bb, j)];
                            if w != 0.0 {
                                got += w * (0..k).map(|l| fit.constants[i][j][l] * inv[(l, c)]).sum::<f64>();
                            }
                        }
                    }
                    worst = worst.max((got - to_f64(&want[c])).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Largest norm of the generic isotropy combination over `points`.
    pub fn isotropy_residual(&self, points: &[Vec<f64>]) -> Result<f64, VfError> {
        points.iter().try_fold(0.0_f64, |acc, p| Ok(acc.max(norm(&self.combination_at(&self.action.generic_isotropy, p)?))))
    }

    /// The preferred point, if the action records one.
    pub fn x0(&self) -> Result<Option<Vec<f64>>, VfError> {
        self.action.x0.as_ref().map(|x0| x0.iter().map(|e| eval_at(e, &[], &self.constants)).collect()).transpose()
    }

    /// Whether the generic isotropy combination at `x0` spans the same line
    /// as the recorded `h0` (32.23(+) prints `-1/2` times it). Only
    /// coefficients are compared: some fields are singular at their
    /// preferred point (32.07 has `coth(x2)` at `x2 = 0`). `None` when no
    /// preferred point is recorded.
    pub fn preferred_isotropy_ok(&self) -> Result<Option<bool>, VfError> {
        let (Some(x0), Some(h0)) = (self.x0()?, self.action.h0.as_ref()) else {
            return Ok(None);
        };
        let v = self.x_coefficients(&self.action.generic_isotropy, &x0)?;
        let h = self.x_coefficients(h0, &x0)?;
        let hh: f64 = h.iter().map(|x| x * x).sum();
        if hh == 0.0 || norm(&v) <= PASS_TOL {
            return Ok(Some(false));
        }
        let t = v.iter().zip(&h).map(|(a, b)| a * b).sum::<f64>() / hh;
        Ok(Some(v.iter().zip(&h).all(|(a, b)| (a - t * b).abs() <= PASS_TOL * t.abs().max(1.0))))
    }
}

/// Outcome of checking one action.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionReport {
    pub id: String,
    pub variant: Variant,
    pub closure_residual: f64,
    /// The recorded class when the fitted constants match it.
    pub identified_class: Option<String>,
    pub identification_residual: f64,
    pub isotropy_residual: f64,
    pub preferred_isotropy_ok: Option<bool>,
}

impl ActionReport {
    /// Everything a corrected action must satisfy.
    pub fn passes(&self) -> bool {
        self.closure_residual <= PASS_TOL
            && self.identified_class.is_some()
            && self.isotropy_residual <= PASS_TOL
            && self.preferred_isotropy_ok != Some(false)
    }

    /// A typo variant fails when it does not close, or closes onto another
    /// algebra than the corrected fields.
    pub fn fails_against(&self, corrected: &ActionReport) -> bool {
        self.closure_residual > FAIL_TOL || self.identified_class != corrected.identified_class
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "variant": self.variant.as_str(),
            "closure_residual": self.closure_residual,
            "identified_class": self.identified_class,
            "identification_residual": self.identification_residual,
            "isotropy_residual": self.isotropy_residual,
            "preferred_isotropy_ok": self.preferred_isotropy_ok,
        })
    }
}

/// Runs closure, identification and isotropy checks on one action.
pub fn verify_action(catalog: &Catalog, id: &str, variant: Variant) -> Result<ActionReport, VfError> {
    let action = catalog.petrov_action(id, variant)?;
    let r = Realization::new(action)?;
    let points = r.sample_points(SAMPLE_POINTS, r.seed());
    let fit = r.fit(&points)?;
    let identification_residual = r.identification_residual(catalog, &fit)?;
    Ok(ActionReport {
        id: action.id.clone(),
        variant,
        closure_residual: fit.residual,
        identified_class: (identification_residual <= PASS_TOL).then(|| action.class.clone()),
        identification_residual,
        isotropy_residual: r.isotropy_residual(&points)?,
        preferred_isotropy_ok: r.preferred_isotropy_ok()?,
    })
}

/// Every corrected action, then every typo variant, in table order.
pub fn verify_all(catalog: &Catalog) -> Result<Vec<ActionReport>, VfError> {
    let ids: Vec<String> = catalog.actions().map(|a| a.id.clone()).collect();
    let mut out = ids.iter().map(|id| verify_action(catalog, id, Variant::Corrected)).collect::<Result<Vec<_>, _>>()?;
    for id in catalog.typo_ids() {
        out.push(verify_action(catalog, id, Variant::Typo)?);
    }
    Ok(out)
}
