//! Finite-dimensional real Lie algebras given by rational structure
//! constants, together with the linear maps the classification needs:
//! `ad`, the isotropy action on a complement, and bracket containment.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use scalarlin::{rat_to_string, RatMatrix, RatVec, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("vector has length {found}, algebra has dimension {expected}")]
    Length { expected: usize, found: usize },
    #[error("bracket index ({i}, {j}) out of range or on the diagonal")]
    BadIndex { i: usize, j: usize },
    #[error("bracket [e{i}, e{j}] given twice with different values")]
    Conflict { i: usize, j: usize },
    #[error("the isotropy vector is zero")]
    ZeroVector,
    #[error("isotropy vector and complement do not form a basis")]
    NotABasis,
    #[error("complement is not reductive: [h0, m{0}] leaves the complement")]
    NotReductive(usize),
}

/// A Lie algebra over `Q` with basis `e1..en`.
///
/// The structure tensor is stored in full, `c[i][j] = [e_i, e_j]`, so both
/// orders are available without sign bookkeeping.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    key: String,
    params: BTreeMap<String, Rational>,
    dim: usize,
    c: Vec<RatVec>,
}

impl LieAlgebra {
    /// Builds an algebra from the brackets `[e_i, e_j]` with `i < j`
    /// (1-based, as printed). Brackets not listed are zero.
    pub fn new(
        key: impl Into<String>,
        params: BTreeMap<String, Rational>,
        dim: usize,
        brackets: &[(usize, usize, RatVec)],
    ) -> Result<Self, LieError> {
        let mut c = vec![vec![Rational::zero(); dim]; dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i == 0 || j == 0 || i > dim || j > dim || i == j {
                return Err(LieError::BadIndex { i, j });
            }
            if v.len() != dim {
                return Err(LieError::Length { expected: dim, found: v.len() });
            }
            let (a, b) = (i - 1, j - 1);
            let neg: RatVec = v.iter().map(|x| -x).collect();
            if seen[a * dim + b] && c[a * dim + b] != *v {
                return Err(LieError::Conflict { i, j });
            }
            seen[a * dim + b] = true;
            seen[b * dim + a] = true;
            c[a * dim + b] = v.clone();
            c[b * dim + a] = neg;
        }
        Ok(Self { key: key.into(), params, dim, c })
    }

    /// Builds an algebra from a full tensor without enforcing antisymmetry,
    /// so malformed tables can be fed to [`jacobi_check`](Self::jacobi_check).
    ///
    /// # Panics
    /// Panics unless `tensor` holds `dim * dim` vectors of length `dim`.
    pub fn from_tensor(key: impl Into<String>, dim: usize, tensor: Vec<RatVec>) -> Self {
        assert_eq!(tensor.len(), dim * dim);
        assert!(tensor.iter().all(|v| v.len() == dim));
        Self { key: key.into(), params: BTreeMap::new(), dim, c: tensor }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[e_i, e_j]` with 0-based indices.
    pub fn structure(&self, i: usize, j: usize) -> &RatVec {
        &self.c[i * self.dim + j]
    }

    /// Unit vector `e_{i+1}`.
    pub fn basis_vector(&self, i: usize) -> RatVec {
        unit(self.dim, i)
    }

    fn check_len(&self, v: &[Rational]) -> Result<(), LieError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(LieError::Length { expected: self.dim, found: v.len() })
        }
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<RatVec, LieError> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = vec![Rational::zero(); self.dim];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let coeff = ui * vj;
                for (o, c) in out.iter_mut().zip(self.structure(i, j)) {
                    *o += &coeff * c;
                }
            }
        }
        Ok(out)
    }

    /// Antisymmetry and the Jacobi identity on all basis triples.
    pub fn jacobi_check(&self) -> bool {
        let n = self.dim;
        let antisym = (0..n).all(|i| {
            (0..n).all(|j| self.structure(i, j).iter().zip(self.structure(j, i)).all(|(a, b)| (a + b).is_zero()))
        });
        if !antisym {
            return false;
        }
        let e: Vec<RatVec> = (0..n).map(|i| self.basis_vector(i)).collect();
        let br = |a: &[Rational], b: &[Rational]| self.bracket(a, b).expect("basis vectors have full length");
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s1 = br(&br(&e[i], &e[j]), &e[k]);
                    let s2 = br(&br(&e[j], &e[k]), &e[i]);
                    let s3 = br(&br(&e[k], &e[i]), &e[j]);
                    if s1.iter().zip(&s2).zip(&s3).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of `ad(v) = [v, ·]`; column `j` is `[v, e_j]`.
    pub fn ad_matrix(&self, v: &[Rational]) -> Result<RatMatrix, LieError> {
        let cols = (0..self.dim)
            .map(|j| self.bracket(v, &self.basis_vector(j)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix::from_cols(&cols))
    }

    /// Matrix of `ad(h0)` on the complement `m`, in the basis `m`.
    ///
    /// In [`QuotientMode::Strict`] every `[h0, m_j]` must lie in `span(m)`.
    /// [`QuotientMode::Quotient`] drops the `h0` component instead, which
    /// is the induced action on `g/h` with `m` as quotient basis.
    pub fn quotient_action(
        &self,
        h0: &[Rational],
        m: &[RatVec],
        mode: QuotientMode,
    ) -> Result<RatMatrix, LieError> {
        self.check_len(h0)?;
        for v in m {
            self.check_len(v)?;
        }
        if h0.iter().all(Zero::is_zero) {
            return Err(LieError::ZeroVector);
        }
        if m.len() + 1 != self.dim {
            return Err(LieError::NotABasis);
        }
        let solve = Coordinates::new(h0, m).ok_or(LieError::NotABasis)?;
        let k = m.len();
        let mut out = RatMatrix::zeros(k, k);
        for (j, mj) in m.iter().enumerate() {
            let coords = solve.of(&self.bracket(h0, mj)?);
            if mode == QuotientMode::Strict && !coords[0].is_zero() {
                return Err(LieError::NotReductive(j + 1));
            }
            for i in 0..k {
                out[(i, j)] = coords[i + 1].clone();
            }
        }
        Ok(out)
    }

    /// True iff `[a, b] ∈ span(c)` for every `a` in `a_basis`, `b` in `b_basis`.
    pub fn bracket_contained(&self, a_basis: &[RatVec], b_basis: &[RatVec], c_basis: &[RatVec]) -> bool {
        let c_rank = rank_of(c_basis, self.dim);
        a_basis.iter().all(|a| {
            b_basis.iter().all(|b| {
                let Ok(v) = self.bracket(a, b) else { return false };
                if v.iter().all(Zero::is_zero) {
                    return true;
                }
                let mut with = c_basis.to_vec();
                with.push(v);
                rank_of(&with, self.dim) == c_rank
            })
        })
    }
}

/// Coordinates with respect to the basis `(h0, m_1, ..)`.
enum Coordinates {
    /// Every `m_j` is a unit vector `e_{p_j}`; `s` is the remaining index.
    Units { h0: RatVec, s: usize, p: Vec<usize> },
    Inverse(RatMatrix),
}

impl Coordinates {
    fn new(h0: &[Rational], m: &[RatVec]) -> Option<Self> {
        let n = h0.len();
        let unit_index = |v: &RatVec| {
            let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
            match (nz.next(), nz.next()) {
                (Some((i, x)), None) if x.is_one() => Some(i),
                _ => None,
            }
        };
        if let Some(p) = m.iter().map(unit_index).collect::<Option<Vec<_>>>() {
            let mut seen = vec![false; n];
            p.iter().for_each(|&i| seen[i] = true);
            if let Some(s) = seen.iter().position(|x| !x) {
                if p.len() + 1 == n && !h0[s].is_zero() {
                    return Some(Coordinates::Units { h0: h0.to_vec(), s, p });
                }
            }
        }
        let mut cols = vec![h0.to_vec()];
        cols.extend(m.iter().cloned());
        RatMatrix::from_cols(&cols).inverse().map(Coordinates::Inverse)
    }

    fn of(&self, w: &[Rational]) -> RatVec {
        match self {
            Coordinates::Units { h0, s, p } => {
                let a = &w[*s] / &h0[*s];
                let mut out = vec![a.clone()];
                out.extend(p.iter().map(|&i| if h0[i].is_zero() { w[i].clone() } else { &w[i] - &a * &h0[i] }));
                out
            }
            Coordinates::Inverse(inv) => inv.mul_vec(w),
        }
    }
}

/// How [`LieAlgebra::quotient_action`] treats a complement that is not
/// `ad(h0)`-invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuotientMode {
    #[default]
    Strict,
    Quotient,
}

/// The 1-dimensional subalgebra spanned by a nonzero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraLine {
    h0: RatVec,
}

impl SubalgebraLine {
    pub fn new(h0: RatVec) -> Result<Self, LieError> {
        if h0.iter().all(Zero::is_zero) {
            Err(LieError::ZeroVector)
        } else {
            Ok(Self { h0 })
        }
    }

    pub fn h0(&self) -> &[Rational] {
        &self.h0
    }
}

/// A complement `m` of a line, `dim - 1` vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complement {
    pub vectors: Vec<RatVec>,
}

impl Complement {
    /// Checks that `h` together with `vectors` is a basis of `g`.
    pub fn new(g: &LieAlgebra, h: &SubalgebraLine, vectors: Vec<RatVec>) -> Result<Self, LieError> {
        let mut all = vec![h.h0.clone()];
        all.extend(vectors.iter().cloned());
        if vectors.len() + 1 != g.dim() || rank_of(&all, g.dim()) != g.dim() {
            return Err(LieError::NotABasis);
        }
        Ok(Self { vectors })
    }
}

pub fn unit(n: usize, i: usize) -> RatVec {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}

fn rank_of(vs: &[RatVec], dim: usize) -> usize {
    if vs.is_empty() {
        0
    } else {
        debug_assert!(vs.iter().all(|v| v.len() == dim));
        RatMatrix::from_rows(vs).rank()
    }
}

/// `"2*e1 - 1/2*e3"`, or `"0"`.
pub fn format_vector(v: &[Rational], symbol: &str) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != Rational::from_integer(1.into()) {
            out.push_str(&rat_to_string(&mag));
            out.push('*');
        }
        out.push_str(&format!("{symbol}{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)?;
        for (k, v) in &self.params {
            write!(f, " {k}={}", rat_to_string(v))?;
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.structure(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    write!(f, " [e{},e{}]={}", i + 1, j + 1, format_vector(v, "e"))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use scalarlin::rat;

    fn v(xs: &[i64]) -> RatVec {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    fn l35() -> LieAlgebra {
        LieAlgebra::new(
            "L(3,5)",
            BTreeMap::new(),
            3,
            &[(1, 2, v(&[1, 0, 0])), (1, 3, v(&[0, -2, 0])), (2, 3, v(&[0, 0, 1]))],
        )
        .unwrap()
    }

    #[test]
    fn brackets_are_antisymmetric_table_lookups() {
        let g = l35();
        assert_eq!(g.bracket(&v(&[1, 0, 0]), &v(&[0, 0, 1])).unwrap(), v(&[0, -2, 0]));
        assert_eq!(g.bracket(&v(&[0, 0, 1]), &v(&[1, 0, 0])).unwrap(), v(&[0, 2, 0]));
        assert_eq!(g.bracket(&v(&[1, 2, 3]), &v(&[1, 2, 3])).unwrap(), v(&[0, 0, 0]));
        assert!(g.bracket(&v(&[1, 0]), &v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn conflicting_duplicates_are_rejected() {
        let r = LieAlgebra::new("x", BTreeMap::new(), 2, &[(1, 2, v(&[1, 0])), (1, 2, v(&[0, 1]))]);
        assert_eq!(r.unwrap_err(), LieError::Conflict { i: 1, j: 2 });
        assert!(LieAlgebra::new("x", BTreeMap::new(), 2, &[(1, 1, v(&[1, 0]))]).is_err());
    }

    #[test]
    fn zero_vector_has_zero_ad() {
        assert!(l35().ad_matrix(&v(&[0, 0, 0])).unwrap().is_zero());
    }

    #[test]
    fn vector_formatting() {
        assert_eq!(format_vector(&[rat(1, 2), rat(0, 1), rat(-1, 1)], "e"), "1/2*e1 - e3");
        assert_eq!(format_vector(&[rat(0, 1)], "e"), "0");
        assert_eq!(format_vector(&[rat(-1, 1), rat(1, 1)], "X"), "-X1 + X2");
    }

    #[test]
    fn complement_must_complete_a_basis() {
        let g = l35();
        let h = SubalgebraLine::new(v(&[1, 0, 0])).unwrap();
        assert!(Complement::new(&g, &h, vec![v(&[2, 0, 0]), v(&[0, 1, 0])]).is_err());
        assert!(Complement::new(&g, &h, vec![v(&[0, 0, 1]), v(&[0, 1, 0])]).is_ok());
        assert!(SubalgebraLine::new(v(&[0, 0, 0])).is_err());
    }
}
