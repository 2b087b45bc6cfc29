use std::fmt;

use catalog::IsotropyLabel;
use num_traits::{Signed, Zero};
use scalarlin::{rat_to_string, RatMatrix, Rational};

/// Eigenvalue pattern of the isotropy action on `g/h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotropyType {
    Rotation,
    Boost,
    Null,
    /// None of the three patterns; carries the characteristic polynomial.
    Unclassified(String),
}

impl IsotropyType {
    pub fn label(&self) -> Option<IsotropyLabel> {
        match self {
            IsotropyType::Rotation => Some(IsotropyLabel::Rotation),
            IsotropyType::Boost => Some(IsotropyLabel::Boost),
            IsotropyType::Null => Some(IsotropyLabel::Null),
            IsotropyType::Unclassified(_) => None,
        }
    }
}

impl fmt::Display for IsotropyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "{l}"),
            None => f.write_str("unclassified"),
        }
    }
}

fn describe(poly: &[Rational]) -> String {
    let deg = poly.len() - 1;
    let terms: Vec<String> = poly
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match deg - k {
            0 => rat_to_string(c),
            1 => format!("{}*l", rat_to_string(c)),
            e => format!("{}*l^{e}", rat_to_string(c)),
        })
        .collect();
    format!("char poly {}", terms.join(" + "))
}

/// Classifies `M` (side 2 or 3) from its characteristic polynomial.
///
/// On side 3 the polynomial must have a zero root, leaving
/// `λ(λ² + pλ + q)`; on side 2 the quadratic is used as is.
pub fn isotropy_type(m: &RatMatrix) -> IsotropyType {
    let poly = m.char_poly().expect("quotient action is square");
    let (p, q) = match poly.as_slice() {
        [_, p, q] => (p, q),
        [_, p, q, c] if c.is_zero() => (p, q),
        _ => return IsotropyType::Unclassified(describe(&poly)),
    };
    let disc = p * p - q * Rational::from_integer(4.into());
    if p.is_zero() && q.is_zero() {
        IsotropyType::Null
    } else if !q.is_zero() && disc.is_positive() {
        IsotropyType::Boost
    } else if !q.is_zero() && disc.is_negative() && p.is_zero() {
        IsotropyType::Rotation
    } else {
        IsotropyType::Unclassified(describe(&poly))
    }
}
