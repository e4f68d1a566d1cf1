//! Scalar fields the engine can run over.
//!
//! Invariant values live in a field: products of invariants are summed with
//! signs and the per-level linear systems are solved by elimination. The
//! engine and the solver are written against [`Scalar`]; the crate's
//! concrete aliases instantiate them with [`BigRational`], which is the only
//! instantiation that satisfies the exactness contract of the tables. The
//! float impls exist for the generic linear algebra.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_bigint(v: &BigInt) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Zero test used by elimination. Exact fields compare with zero.
    fn is_negligible(&self) -> bool;

    /// Smaller is a better pivot.
    fn pivot_cost(&self) -> u64;

    /// The value as an integer, if it is one.
    fn to_integer(&self) -> Option<BigInt>;

    /// `num/den` rendering used by the cache file.
    fn to_ratio_string(&self) -> String;

    fn parse_ratio(s: &str) -> Option<Self>;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn pivot_cost(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }

    fn to_ratio_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_ratio(s: &str) -> Option<Self> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
            None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

macro_rules! impl_float_scalar {
    ($f:ty, $eps:expr) => {
        impl Scalar for $f {
            const EXACT: bool = false;

            fn from_bigint(v: &BigInt) -> Self {
                v.to_f64().unwrap_or(f64::NAN) as $f
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn pivot_cost(&self) -> u64 {
                // partial pivoting: largest magnitude wins
                let m = self.abs();
                if m == 0.0 {
                    u64::MAX
                } else {
                    (u32::MAX as f64 / (1.0 + m as f64)) as u64
                }
            }

            fn to_integer(&self) -> Option<BigInt> {
                let r = self.round();
                ((*self - r).abs() <= $eps * (1.0 + r.abs())).then(|| BigInt::from_f64(r as f64))?
            }

            fn to_ratio_string(&self) -> String {
                match BigRational::from_float(*self) {
                    Some(r) => r.to_ratio_string(),
                    None => format!("{}", self),
                }
            }

            fn parse_ratio(s: &str) -> Option<Self> {
                let r = BigRational::parse_ratio(s)?;
                Some((r.numer().to_f64()? / r.denom().to_f64()?) as $f)
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-4);

/// Binomial coefficient as a field element.
pub fn binomial<F: Scalar>(n: u64, k: u64) -> F {
    F::from_bigint(&binomial_int(n, k))
}

pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_string_is_lowest_terms() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(r.to_ratio_string(), "-3/2");
        assert_eq!(BigRational::parse_ratio("-3/2"), Some(r));
        assert_eq!(BigRational::parse_ratio("7"), Some(BigRational::from_int(7)));
        assert_eq!(BigRational::parse_ratio("1/0"), None);
        assert_eq!(BigRational::parse_ratio("x/2"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_int(5, 2), BigInt::from(10));
        assert_eq!(binomial_int(20, 10), BigInt::from(184756));
        assert_eq!(binomial_int(3, 4), BigInt::zero());
        assert_eq!(binomial::<f64>(6, 3), 20.0);
    }

    #[test]
    fn pivot_cost_prefers_small_rationals() {
        let small = BigRational::from_int(3);
        let big = BigRational::new(BigInt::from(12345678901i64), BigInt::from(7));
        assert!(small.pivot_cost() < big.pivot_cost());
        assert!(10.0f64.pivot_cost() < 0.1f64.pivot_cost());
    }

    #[test]
    fn float_integer_detection() {
        assert_eq!(3.0000000001f64.to_integer(), Some(BigInt::from(3)));
        assert_eq!(2.5f64.to_integer(), None);
    }
}
