//! Invariant quadratic forms on `g/h` and the search for metric witnesses.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use scalarlin::{rat, RatMatrix, Rational, SymForm};

/// The symmetric unit forms `E_ab` (`a <= b`) in upper-triangle order.
fn unit_forms(n: usize) -> Vec<SymForm> {
    let len = n * (n + 1) / 2;
    (0..len)
        .map(|k| {
            let mut upper = vec![rat(0, 1); len];
            upper[k] = rat(1, 1);
            SymForm::new(n, upper)
        })
        .collect()
}

/// Position of the entry `(a, b)` in upper-triangle order.
fn upper_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * n - a * (a + 1) / 2 + b
}

/// Basis of `{Q : MᵀQ + QM = 0}`.
///
/// The system is assembled entry by entry: `(MᵀQ + QM)_ab` is
/// `Σ_c M_ca Q_cb + Q_ac M_cb`, linear in the upper entries of `Q`.
pub fn invariant_forms(m: &RatMatrix) -> Vec<SymForm> {
    assert!(m.is_square(), "quotient action must be square");
    let n = m.rows();
    let len = n * (n + 1) / 2;
    if len == 0 {
        return Vec::new();
    }
    let mut sys = RatMatrix::zeros(len, len);
    for a in 0..n {
        for b in a..n {
            let row = upper_index(n, a, b);
            for c in 0..n {
                if !m[(c, a)].is_zero() {
                    sys[(row, upper_index(n, c, b))] += &m[(c, a)];
                }
                if !m[(c, b)].is_zero() {
                    sys[(row, upper_index(n, a, c))] += &m[(c, b)];
                }
            }
        }
    }
    let basis = unit_forms(n);
    sys.nullspace().iter().map(|c| SymForm::combine(&basis, c)).collect()
}

/// True iff `MᵀQ + QM = 0`.
pub fn is_invariant(m: &RatMatrix, q: &SymForm) -> bool {
    let q = q.to_matrix();
    m.transpose().mul(&q).add(&q.mul(m)).is_zero()
}

/// Whether two lists of forms span the same space.
pub fn same_span(a: &[SymForm], b: &[SymForm]) -> bool {
    let up = |fs: &[SymForm]| fs.iter().map(|f| f.upper().to_vec()).collect::<Vec<_>>();
    scalarlin::subspace_equal(&up(a), &up(b)).unwrap_or(false)
}

/// First forms found with Lorentz `(n-1, 1)` and Riemannian `(n, 0)`
/// signature in the span of a list of invariant forms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Admissibility {
    pub lorentz: Option<SymForm>,
    pub riemannian: Option<SymForm>,
}

impl Admissibility {
    pub fn nondegenerate(&self) -> bool {
        self.lorentz.is_some() || self.riemannian.is_some()
    }

    fn done(&self) -> bool {
        self.lorentz.is_some() && self.riemannian.is_some()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Lorentz,
    Riemannian,
    Other,
}

/// `(pos, neg)` eigenvalue counts in floating point, or `None` when an
/// eigenvalue is too close to zero to trust.
fn float_signature(n: usize, upper: &[f64]) -> Option<(usize, usize)> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = upper[k];
            m[(j, i)] = upper[k];
            k += 1;
        }
    }
    let scale = m.norm().max(1.0);
    let eig = m.symmetric_eigenvalues();
    if eig.iter().any(|e| e.abs() <= 1e-9 * scale) {
        return None;
    }
    Some((eig.iter().filter(|e| **e > 0.0).count(), eig.iter().filter(|e| **e < 0.0).count()))
}

/// Determinant from the upper triangle, closed form for side 2 and 3.
fn small_det(q: &SymForm) -> Option<Rational> {
    let u = q.upper();
    match q.dim() {
        1 => Some(u[0].clone()),
        2 => Some(&u[0] * &u[2] - &u[1] * &u[1]),
        3 => {
            let (a, b, c, d, e, f) = (&u[0], &u[1], &u[2], &u[3], &u[4], &u[5]);
            Some(a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c))
        }
        _ => None,
    }
}

fn exact_kind(q: &SymForm) -> Kind {
    if small_det(q).is_some_and(|d| d.is_zero()) {
        return Kind::Other;
    }
    let n = q.dim();
    match q.signature() {
        (p, 1, 0) if p + 1 == n => Kind::Lorentz,
        (p, 0, 0) if p == n => Kind::Riemannian,
        _ => Kind::Other,
    }
}

struct Search<'a> {
    forms: &'a [SymForm],
    approx: Vec<Vec<f64>>,
    out: Admissibility,
}

impl<'a> Search<'a> {
    fn new(forms: &'a [SymForm]) -> Self {
        let approx = forms.iter().map(|f| f.upper().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        Self { forms, approx, out: Admissibility::default() }
    }

    /// Screens a combination in floating point; only candidate witnesses
    /// and near-degenerate combinations are decided exactly.
    fn offer(&mut self, coeffs: &[Rational]) {
        let n = self.forms[0].dim();
        let len = self.approx[0].len();
        let mut upper = vec![0.0; len];
        for (f, c) in self.approx.iter().zip(coeffs) {
            let c = c.to_f64().unwrap_or(f64::NAN);
            for (u, x) in upper.iter_mut().zip(f) {
                *u += c * x;
            }
        }
        let guess = match float_signature(n, &upper) {
            Some((p, 1)) if p + 1 == n => Some(Kind::Lorentz),
            Some((p, 0)) if p == n => Some(Kind::Riemannian),
            Some(_) => Some(Kind::Other),
            None => None,
        };
        let wanted = |k: Kind, out: &Admissibility| match k {
            Kind::Lorentz => out.lorentz.is_none(),
            Kind::Riemannian => out.riemannian.is_none(),
            Kind::Other => false,
        };
        if guess.is_some_and(|k| !wanted(k, &self.out)) {
            return;
        }
        let q = SymForm::combine(self.forms, coeffs);
        match exact_kind(&q) {
            Kind::Lorentz if self.out.lorentz.is_none() => self.out.lorentz = Some(q),
            Kind::Riemannian if self.out.riemannian.is_none() => self.out.riemannian = Some(q),
            _ => {}
        }
    }
}

/// Sweeps all coefficient tuples in `{-2..2}^k`, smallest coefficients
/// first, then tries `trials` random rational combinations.
///
/// A missing witness means none was found. Both signatures are open
/// conditions, so a span that contains one almost surely yields it.
/// Returned witnesses are checked in exact arithmetic.
pub fn admissibility(forms: &[SymForm], rng: &mut impl Rng, trials: usize) -> Admissibility {
    if forms.is_empty() {
        return Admissibility::default();
    }
    const ORDER: [i64; 5] = [0, 1, -1, 2, -2];
    let k = forms.len();
    let mut search = Search::new(forms);
    for code in 0..ORDER.len().pow(k as u32) {
        // base-5 digits, first coefficient most significant
        let coeffs: Vec<Rational> =
            (0..k).rev().map(|i| rat(ORDER[code / ORDER.len().pow(i as u32) % ORDER.len()], 1)).collect();
        search.offer(&coeffs);
        if search.out.done() {
            return search.out;
        }
    }
    for _ in 0..trials {
        let coeffs: Vec<Rational> = (0..k).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=4))).collect();
        search.offer(&coeffs);
        if search.out.done() {
            break;
        }
    }
    search.out
}
