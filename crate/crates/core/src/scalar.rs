//! The scalar abstraction shared by the polynomial and matrix code.
//!
//! Everything in this crate is exact. The polynomial and linear-algebra
//! layers are written once against [`Field`], which is implemented for every
//! `Ratio<I>` over a signed integer type `I`. The rest of the crate works with
//! the arbitrary-precision instance, [`crate::ExactScalar`].

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed};

/// Integer ring underlying a [`Field`]. Fraction-free elimination and
/// primitive polynomial remainder sequences run over this ring.
pub trait Ring: Clone + Integer + Signed + Debug + Display + Send + Sync + 'static {}

impl<I> Ring for I where I: Clone + Integer + Signed + Debug + Display + Send + Sync + 'static {}

/// An exact field of fractions.
pub trait Field:
    Clone + Eq + Ord + Debug + Display + Signed + FromPrimitive + Send + Sync + 'static
{
    type Int: Ring;

    fn numer_int(&self) -> &Self::Int;
    fn denom_int(&self) -> &Self::Int;
    fn from_int(value: Self::Int) -> Self;
    fn from_parts(numer: Self::Int, denom: Self::Int) -> Self;

    /// `k` as a field element.
    fn of(k: i64) -> Self {
        Self::from_i64(k).expect("every exact field contains the integers")
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow_i(&self, exp: i64) -> Self {
        if exp < 0 {
            return self.inv().pow_i(-exp);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl<I: Ring> Field for Ratio<I>
where
    Ratio<I>: FromPrimitive,
{
    type Int = I;

    fn numer_int(&self) -> &I {
        self.numer()
    }

    fn denom_int(&self) -> &I {
        self.denom()
    }

    fn from_int(value: I) -> Self {
        Ratio::from_integer(value)
    }

    fn from_parts(numer: I, denom: I) -> Self {
        Ratio::new(numer, denom)
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub(crate) fn common_denominator<F: Field>(values: &[F]) -> F::Int {
    values
        .iter()
        .fold(F::Int::one(), |acc, v| acc.lcm(v.denom_int()))
}

/// Scales `values` by their common denominator and returns the integer
/// numerators together with that scale.
pub(crate) fn clear_denominators<F: Field>(values: &[F]) -> (Vec<F::Int>, F::Int) {
    let scale = common_denominator(values);
    let ints = values
        .iter()
        .map(|v| v.numer_int().clone() * (scale.clone() / v.denom_int().clone()))
        .collect();
    (ints, scale)
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn pow_handles_negative_exponents() {
        let half = Rational64::new(1, 2);
        assert_eq!(half.pow_i(-3), Rational64::from_integer(8));
        assert_eq!(half.pow_i(0), Rational64::one());
    }

    #[test]
    fn clearing_denominators_uses_the_lcm() {
        let v = vec![
            BigRational::new(BigInt::from(1), BigInt::from(6)),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
        ];
        let (ints, scale) = clear_denominators(&v);
        assert_eq!(scale, BigInt::from(12));
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(9)]);
    }
}
