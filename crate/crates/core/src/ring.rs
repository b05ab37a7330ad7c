//! Ring abstraction used by the matrix and series layers.
//!
//! Operations live on a ring object rather than on the elements so that
//! context-dependent algebras (enveloping algebras carry structure
//! constants, series carry windows) can share the determinant and
//! Berezinian machinery.

use num::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::error::{AlgebraError, Result};

/// Z/2 parity grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Sum of parities in Z/2.
    pub fn plus(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// The Koszul sign (-1)^{|a||b|} as +-1.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

/// Parity content of an element: zero, homogeneous of a parity, or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(Parity),
    Mixed,
}

impl Homogeneity {
    /// Whether the element may appear in a slot requiring parity `p`.
    pub fn admits(self, p: Parity) -> bool {
        match self {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(q) => p == q,
            Homogeneity::Mixed => false,
        }
    }

    pub fn merge(self, other: Homogeneity) -> Homogeneity {
        match (self, other) {
            (Homogeneity::Zero, h) | (h, Homogeneity::Zero) => h,
            (Homogeneity::Homogeneous(a), Homogeneity::Homogeneous(b)) if a == b => self,
            _ => Homogeneity::Mixed,
        }
    }
}

/// An associative unital superalgebra over the rationals.
///
/// `add`/`mul` are fallible: mixing elements of distinct algebras or
/// exhausting a series window reports an error instead of corrupting
/// the normal form.
pub trait Ring {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Scalar action of Q.
    fn scale(&self, a: &Self::Elem, c: &BigRational) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b))
    }

    /// In-place accumulation; rings with large sparse elements override
    /// this to avoid cloning the accumulator.
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) -> Result<()> {
        *a = self.add(a, b)?;
        Ok(())
    }

    /// `a += b * c` without materializing the scaled copy.
    fn add_scaled_assign(
        &self,
        a: &mut Self::Elem,
        b: &Self::Elem,
        c: &BigRational,
    ) -> Result<()> {
        self.add_assign(a, &self.scale(b, c))
    }

    /// Two-sided inverse, when one exists in this ring.
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Parity content, used for type checks on matrices.
    fn homogeneity(&self, a: &Self::Elem) -> Homogeneity;

    fn from_rational(&self, c: &BigRational) -> Self::Elem {
        self.scale(&self.one(), c)
    }

    /// The supercommutator `[a, b] = ab - (-1)^{|a||b|} ba` of homogeneous
    /// elements, with parities supplied by the caller.
    fn supercommutator(
        &self,
        a: &Self::Elem,
        pa: Parity,
        b: &Self::Elem,
        pb: Parity,
    ) -> Result<Self::Elem> {
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        let signed = if pa.koszul(pb) < 0 {
            ba
        } else {
            self.neg(&ba)
        };
        self.add(&ab, &signed)
    }
}

/// The field of rationals as a `Ring`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a * b)
    }
    fn scale(&self, a: &BigRational, c: &BigRational) -> BigRational {
        a * c
    }
    fn invert(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(AlgebraError::NotInvertible("zero rational".into()))
        } else {
            Ok(a.recip())
        }
    }
    fn homogeneity(&self, a: &BigRational) -> Homogeneity {
        if a.is_zero() {
            Homogeneity::Zero
        } else {
            Homogeneity::Homogeneous(Parity::Even)
        }
    }
}

/// Generalized binomial coefficient `C(n, k)` for integer `n` (possibly
/// negative) and `k >= 0`, as an exact rational integer.
pub fn binomial(n: i64, k: u32) -> BigInt {
    // falling factorial n(n-1)...(n-k+1) / k!
    let mut num = BigInt::one();
    for t in 0..k as i64 {
        num *= BigInt::from(n - t);
    }
    let mut den = BigInt::one();
    for t in 1..=k as i64 {
        den *= BigInt::from(t);
    }
    // always divides exactly
    num / den
}

/// `C(i, k) * C(j, k) * k!` — the coefficient in the normal-ordering rule
/// for moving a power of the derivative symbol past a power of the
/// multiplication symbol.
pub fn reorder_factor(i: i64, j: i64, k: u32) -> BigInt {
    let mut fact = BigInt::one();
    for t in 1..=k as i64 {
        fact *= BigInt::from(t);
    }
    binomial(i, k) * binomial(j, k) * fact
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Integer power of a rational, exact for negative exponents too.
pub fn rat_pow(base: &BigRational, exp: i64) -> Result<BigRational> {
    if exp >= 0 {
        Ok(num::pow::pow(base.clone(), exp as usize))
    } else {
        if base.is_zero() {
            return Err(AlgebraError::NotInvertible("0^negative".into()));
        }
        Ok(num::pow::pow(base.recip(), (-exp) as usize))
    }
}

/// True if the rational is an integer and fits in i64.
pub fn rat_to_i64(a: &BigRational) -> Option<i64> {
    if !a.denom().is_one() {
        return None;
    }
    let n = a.numer();
    if n.abs() > BigInt::from(i64::MAX) {
        return None;
    }
    let (sign, digits) = n.to_u64_digits();
    let mag = *digits.first().unwrap_or(&0) as i64;
    Some(match sign {
        num::bigint::Sign::Minus => -mag,
        _ => mag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_negative_upper_index() {
        assert_eq!(binomial(-1, 0), BigInt::from(1));
        assert_eq!(binomial(-1, 1), BigInt::from(-1));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
        assert_eq!(binomial(-2, 3), BigInt::from(-4));
        assert_eq!(binomial(3, 2), BigInt::from(3));
        assert_eq!(binomial(1, 2), BigInt::from(0));
    }

    #[test]
    fn reorder_factor_matches_defining_relation() {
        // moving one derivative past one variable: k=0 term 1, k=1 term 1
        assert_eq!(reorder_factor(1, 1, 0), BigInt::from(1));
        assert_eq!(reorder_factor(1, 1, 1), BigInt::from(1));
        assert_eq!(reorder_factor(1, 1, 2), BigInt::from(0));
        // d^{-1} z: k=1 gives C(-1,1)C(1,1)1! = -1
        assert_eq!(reorder_factor(-1, 1, 1), BigInt::from(-1));
    }

    #[test]
    fn koszul_sign() {
        assert_eq!(Parity::Odd.koszul(Parity::Odd), -1);
        assert_eq!(Parity::Odd.koszul(Parity::Even), 1);
    }
}
