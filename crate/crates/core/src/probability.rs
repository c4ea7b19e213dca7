//! Exact rational probabilities paired with simulated values.

use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Relative tolerance between a simulated probability and its exact law.
pub const LAW_TOLERANCE: f64 = 1e-9;

/// `numerator / denominator` as a big rational.
pub fn ratio(numerator: u64, denominator: u64) -> BigRational {
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// `base^exponent`.
pub fn pow(base: &BigRational, exponent: u64) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exponent {
        out *= base;
    }
    out
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// True when the reduced denominator is a power of two.
pub fn is_dyadic(r: &BigRational) -> bool {
    let d = r.denom();
    d > &BigInt::zero() && (d & (d - BigInt::one())).is_zero()
}

/// A probability known exactly from its closed-form law, together with the
/// value the simulation actually produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Probability {
    pub exact: BigRational,
    pub value: f64,
}

impl Probability {
    /// A probability with no simulated counterpart; `value` is the exact rational rounded.
    pub fn exact(exact: BigRational) -> Self {
        let value = to_f64(&exact);
        Self { exact, value }
    }

    pub fn measured(exact: BigRational, value: f64) -> Self {
        Self { exact, value }
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    pub fn exact_f64(&self) -> f64 {
        to_f64(&self.exact)
    }

    /// Whether the simulated value agrees with the exact law.
    pub fn is_consistent(&self) -> bool {
        let e = self.exact_f64();
        (self.value - e).abs() <= LAW_TOLERANCE * e.max(f64::MIN_POSITIVE)
    }

    pub fn times(&self, other: &Probability) -> Self {
        Self {
            exact: &self.exact * &other.exact,
            value: self.value * other.value,
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:e})", self.exact, self.value)
    }
}
