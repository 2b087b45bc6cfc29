use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{rat_to_string, Rational};

/// Column vector of exact rationals.
pub type RatVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    /// # Panics
    /// Panics if `data.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// # Panics
    /// Panics on ragged input.
    pub fn from_rows(rows: &[RatVec]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[RatVec]) -> Self {
        Self::from_rows(cols).transpose()
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::new(rows, cols, data.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// # Panics
    /// Panics if the inner dimensions differ.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVec {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| a * s).collect())
    }

    /// Reduced row-echelon form and the strictly increasing list of pivot
    /// columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            if !m[(r, c)].is_one() {
                let inv = m[(r, c)].recip();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(r, j)] *= &inv;
                    }
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let delta = &f * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : m v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<RatVec> {
        let (r, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
    }

    pub fn determinant(&self) -> Result<Rational, LinAlgError> {
        self.require_square()?;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                let f = &m[(i, c)] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let delta = &f * &m[(c, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Monic characteristic polynomial `det(λI − m)`, highest degree first.
    ///
    /// Closed forms up to size 3, the Faddeev–LeVerrier recurrence beyond.
    pub fn char_poly(&self) -> Result<Vec<Rational>, LinAlgError> {
        self.require_square()?;
        let n = self.rows;
        let a = |i: usize, j: usize| &self[(i, j)];
        let minor = |i: usize, j: usize| a(i, i) * a(j, j) - a(i, j) * a(j, i);
        match n {
            0 => return Ok(vec![Rational::one()]),
            1 => return Ok(vec![Rational::one(), -a(0, 0)]),
            2 => return Ok(vec![Rational::one(), -(a(0, 0) + a(1, 1)), minor(0, 1)]),
            3 => {
                let trace = a(0, 0) + a(1, 1) + a(2, 2);
                let minors = minor(0, 1) + minor(0, 2) + minor(1, 2);
                let det = a(0, 0) * minor(1, 2) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
                return Ok(vec![Rational::one(), -trace, minors, -det]);
            }
            _ => {}
        }
        let mut coeffs = vec![Rational::one()];
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let prev = coeffs[k - 1].clone();
            let shifted = Self::identity(n).scale(&prev).add(&mk);
            mk = self.mul(&shifted);
            let trace: Rational = (0..n).map(|i| mk[(i, i)].clone()).sum();
            coeffs.push(-trace / Rational::from_integer((k as i64).into()));
        }
        Ok(coeffs)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn require_square(&self) -> Result<(), LinAlgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinAlgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(rat_to_string).collect()).collect();
        write!(f, "{rows:?}")
    }
}

/// True iff `span(a) = span(b)`, decided by comparing reduced row-echelon
/// forms. Empty lists and lists of zero vectors span the zero subspace.
pub fn subspace_equal(a: &[RatVec], b: &[RatVec]) -> Result<bool, LinAlgError> {
    let dim = a.iter().chain(b).map(Vec::len).next().unwrap_or(0);
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != dim) {
        return Err(LinAlgError::DimensionMismatch { expected: dim, found: bad.len() });
    }
    let canon = |vs: &[RatVec]| -> RatMatrix {
        if vs.is_empty() {
            return RatMatrix::zeros(0, dim);
        }
        let (r, p) = RatMatrix::from_rows(vs).rref();
        RatMatrix::from_rows(&(0..p.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>())
    };
    let (ca, cb) = (canon(a), canon(b));
    Ok(ca.rows() == cb.rows() && ca.entries() == cb.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn m(rows: usize, cols: usize, d: &[i64]) -> RatMatrix {
        RatMatrix::from_i64(rows, cols, d)
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = m(2, 2, &[2, 4, 1, 2]).rref();
        assert_eq!(r, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_nilpotent() {
        let (r, p) = RatMatrix::identity(3).rref();
        assert_eq!(r, RatMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = m(2, 2, &[0, 1, 0, 0]).rref();
        assert_eq!(r, m(2, 2, &[0, 1, 0, 0]));
        assert_eq!(p, vec![1]);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(m(2, 2, &[0, 1, 0, 0]).nullspace(), vec![vec![rat(1, 1), rat(0, 1)]]);
        assert!(RatMatrix::identity(2).nullspace().is_empty());
        let a = m(3, 3, &[1, 1, 0, 0, 0, 0, 0, 0, 0]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(a.rank() + ns.len(), 3);
    }

    #[test]
    fn char_poly_examples() {
        let d = RatMatrix::diag(&[rat(1, 1), rat(-1, 1), rat(0, 1)]);
        let ints = |v: Vec<Rational>| v.into_iter().map(|r| r.to_integer().try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(ints(d.char_poly().unwrap()), vec![1, 0, -1, 0]);
        assert_eq!(ints(m(2, 2, &[0, -1, 1, 0]).char_poly().unwrap()), vec![1, 0, 1]);
        assert_eq!(ints(RatMatrix::zeros(3, 3).char_poly().unwrap()), vec![1, 0, 0, 0]);
        assert!(m(2, 3, &[0; 6]).char_poly().is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(3, 3, &[2, 0, 1, 1, 1, 0, 0, 3, 1]);
        assert_eq!(a.determinant().unwrap(), rat(5, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(3));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn subspace_equality() {
        let v = |a: i64, b: i64| vec![rat(a, 1), rat(b, 1)];
        assert!(subspace_equal(&[v(1, 0)], &[v(2, 0)]).unwrap());
        assert!(!subspace_equal(&[v(1, 0)], &[v(0, 1)]).unwrap());
        assert!(subspace_equal(&[], &[v(0, 0)]).unwrap());
        assert!(subspace_equal(&[v(1, 0)], &[vec![rat(1, 1)]]).is_err());
    }
}
