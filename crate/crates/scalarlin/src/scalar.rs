use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::{rat_to_f64, rat_to_string, Rational};

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Absolute tolerance used whenever an `Approx` value is compared.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replaces the process-wide comparison tolerance.
pub fn set_tolerance(tol: f64) {
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// A number that is either exact or a double-precision approximation.
///
/// Mixing the two promotes to `Approx`; exact values never lose precision
/// on their own.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(n.into()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rat_to_f64(r),
            Scalar::Approx(x) => *x,
        }
    }

    /// Converts to `Approx`, leaving the value untouched otherwise.
    pub fn to_approx(&self) -> Self {
        Scalar::Approx(self.to_f64())
    }

    /// Exact zero, or an approximation within tolerance of zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(x) => x.abs() <= tolerance(),
        }
    }

    /// Sign with the convention `sign(0) = 1`.
    pub fn sign(&self) -> Scalar {
        let neg = match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Approx(x) => *x < 0.0,
        };
        Scalar::int(if neg { -1 } else { 1 })
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    /// `None` when dividing by an exact zero. Division by an approximate
    /// zero follows IEEE rules.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        match (self, rhs) {
            (_, Scalar::Exact(d)) if d.is_zero() => None,
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(Scalar::Exact(a / b)),
            (a, b) => Some(Scalar::Approx(a.to_f64() / b.to_f64())),
        }
    }

    /// Integer power. `None` for a negative power of exact zero.
    pub fn powi(&self, k: i32) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if k < 0 && r.is_zero() {
                    return None;
                }
                Some(Scalar::Exact(num_traits::Pow::pow(r, k)))
            }
            Scalar::Approx(x) => Some(Scalar::Approx(x.powi(k))),
        }
    }

    /// Equality: exact when both sides are exact, within tolerance otherwise.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (a, b) => (a.to_f64() - b.to_f64()).abs() <= tolerance(),
        }
    }

    /// Three-way comparison. Approximate values closer than the tolerance
    /// compare equal.
    pub fn compare(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (a, b) => {
                let d = a.to_f64() - b.to_f64();
                if d.abs() <= tolerance() {
                    std::cmp::Ordering::Equal
                } else if d < 0.0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Approx(x) => x.is_finite(),
        }
    }

    /// `"p/q"` for exact values, shortest round-trip decimal otherwise.
    pub fn to_plain_string(&self) -> String {
        match self {
            Scalar::Exact(r) => rat_to_string(r),
            Scalar::Approx(x) => format!("{x:?}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Approx(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Approx(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Approx(x) => Scalar::Approx(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl ToPrimitive for Scalar {
    fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) => r.to_integer().to_i64(),
            Scalar::Approx(x) => x.to_i64(),
        }
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| v.to_u64())
    }
    fn to_f64(&self) -> Option<f64> {
        Some(Scalar::to_f64(self))
    }
}
