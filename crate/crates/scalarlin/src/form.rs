use num_traits::{Signed, Zero};

use crate::matrix::RatMatrix;
use crate::rational::Rational;

/// Symmetric bilinear form on `Q^n`, stored as its upper triangle in row
/// order (`11, 12, .., 1n, 22, ..`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymForm {
    n: usize,
    upper: Vec<Rational>,
}

impl SymForm {
    /// # Panics
    /// Panics if `upper.len() != n(n+1)/2`.
    pub fn new(n: usize, upper: Vec<Rational>) -> Self {
        assert_eq!(upper.len(), n * (n + 1) / 2, "upper triangle has wrong length");
        Self { n, upper }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, vec![Rational::zero(); n * (n + 1) / 2])
    }

    /// Symmetrizes `(m + mᵀ)/2` so any square matrix is accepted.
    pub fn from_matrix(m: &RatMatrix) -> Self {
        assert!(m.is_square(), "form matrix must be square");
        let n = m.rows();
        let half = Rational::new(1.into(), 2.into());
        let upper = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| (&m[(i, j)] + &m[(j, i)]) * &half)
            .collect();
        Self { n, upper }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.upper[i * self.n - i * (i + 1) / 2 + j]
    }

    pub fn to_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    /// Linear combination `Σ cᵢ formsᵢ`.
    pub fn combine(forms: &[SymForm], coeffs: &[Rational]) -> SymForm {
        let n = forms.first().map_or(0, |f| f.n);
        let mut upper = vec![Rational::zero(); n * (n + 1) / 2];
        for (f, c) in forms.iter().zip(coeffs) {
            for (u, v) in upper.iter_mut().zip(&f.upper) {
                *u += c * v;
            }
        }
        SymForm::new(n, upper)
    }

    /// `Sᵀ Q S`.
    pub fn congruent(&self, s: &RatMatrix) -> SymForm {
        SymForm::from_matrix(&s.transpose().mul(&self.to_matrix()).mul(s))
    }

    /// `(n_pos, n_neg, n_zero)` eigenvalue counts.
    ///
    /// A symmetric matrix has a real spectrum, so Descartes' rule of signs
    /// on `det(λI − Q)` counts positive roots exactly, and on the polynomial
    /// in `−λ` counts negative roots exactly.
    pub fn signature(&self) -> (usize, usize, usize) {
        let p = self
            .to_matrix()
            .char_poly()
            .expect("form matrix is square");
        let n = self.n;
        let zero = p.iter().rev().take_while(|c| c.is_zero()).count();
        let pos = sign_changes(p.iter().cloned());
        let neg = sign_changes(
            p.iter()
                .enumerate()
                .map(|(k, c)| if (n - k) % 2 == 1 { -c.clone() } else { c.clone() }),
        );
        (pos, neg, zero)
    }
}

fn sign_changes(coeffs: impl Iterator<Item = Rational>) -> usize {
    let signs: Vec<bool> = coeffs.filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn form(n: usize, u: &[i64]) -> SymForm {
        SymForm::new(n, u.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn signature_examples() {
        assert_eq!(form(2, &[1, 0, -1]).signature(), (1, 1, 0));
        assert_eq!(form(3, &[0, 0, 1, 1, 0, 0]).signature(), (2, 1, 0));
        assert_eq!(SymForm::zero(3).signature(), (0, 0, 3));
        assert_eq!(form(3, &[0, 0, 0, 1, 0, 1]).signature(), (2, 0, 1));
    }

    #[test]
    fn indexing_is_symmetric() {
        let f = form(3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(f.get(2, 1), &rat(5, 1));
        assert_eq!(f.get(1, 2), &rat(5, 1));
        assert_eq!(SymForm::from_matrix(&f.to_matrix()), f);
    }
}
