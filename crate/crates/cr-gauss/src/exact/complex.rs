//! Complex scalars with exact rational real and imaginary parts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::NegAssign;
use rug::Rational;

use super::Scalar;

/// A complex number `re + i·im` with arbitrary-precision rational parts.
///
/// `rug::Rational` keeps fractions reduced with positive denominators, so
/// structural equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactComplex {
    re: Rational,
    im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::new(), Rational::new())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::new(), Rational::from(1))
    }

    /// `2i`, ubiquitous in the Heisenberg defining identity.
    pub fn two_i() -> Self {
        Self::new(Rational::new(), Rational::from(2))
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(Rational::from(v), Rational::new())
    }

    /// Exact rational `p/q` as a real scalar.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(Rational::from((p, q)), Rational::new())
    }

    /// `(p/q) + i·(r/s)`.
    pub fn from_ratios(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self::new(Rational::from((p, q)), Rational::from((r, s)))
    }

    pub fn from_rational(re: Rational) -> Self {
        Self::new(re, Rational::new())
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == std::cmp::Ordering::Equal && self.im.cmp0() == std::cmp::Ordering::Equal
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == std::cmp::Ordering::Equal
    }

    pub fn conj(&self) -> Self {
        let mut im = self.im.clone();
        im.neg_assign();
        Self::new(self.re.clone(), im)
    }

    /// `|z|² = re² + im²`, exact.
    pub fn norm_sqr(&self) -> Rational {
        let mut r = Rational::from(&self.re * &self.re);
        r += Rational::from(&self.im * &self.im);
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let mut re = self.re.clone();
        re /= &n;
        let mut im = self.im.clone();
        im.neg_assign();
        im /= &n;
        Some(Self::new(re, im))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|v| self * &v)
    }

    /// Multiply by the imaginary unit: `i·(a+bi) = -b + ai`.
    pub fn mul_i(&self) -> Self {
        let mut re = self.im.clone();
        re.neg_assign();
        Self::new(re, self.re.clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(
            Rational::from(&self.re * r),
            Rational::from(&self.im * r),
        )
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.cmp0() == std::cmp::Ordering::Equal {
            write!(f, "{}", self.re)
        } else if self.re.cmp0() == std::cmp::Ordering::Equal {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            Rational::from(&self.re + &rhs.re),
            Rational::from(&self.im + &rhs.im),
        )
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            Rational::from(&self.re - &rhs.re),
            Rational::from(&self.im - &rhs.im),
        )
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        // (a+bi)(c+di) = (ac-bd) + (ad+bc)i
        let mut re = Rational::from(&self.re * &rhs.re);
        re -= Rational::from(&self.im * &rhs.im);
        let mut im = Rational::from(&self.re * &rhs.im);
        im += Rational::from(&self.im * &rhs.re);
        ExactComplex::new(re, im)
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        let mut re = self.re.clone();
        re.neg_assign();
        let mut im = self.im.clone();
        im.neg_assign();
        ExactComplex::new(re, im)
    }
}

impl Scalar for ExactComplex {
    fn add_s(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_s(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_s(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_s(&self) -> Self {
        -self
    }
    fn conj_s(&self) -> Self {
        self.conj()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_basics() {
        let a = ExactComplex::from_ratios(1, 2, -1, 3);
        let b = ExactComplex::from_ratios(2, 5, 7, 4);
        let prod = &a * &b;
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        assert_eq!(&a + &a.neg_s(), ExactComplex::zero());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = ExactComplex::i();
        assert_eq!(&i * &i, ExactComplex::from_int(-1));
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative() {
        let a = ExactComplex::from_ratios(3, 7, 5, 2);
        let b = ExactComplex::from_ratios(-1, 4, 1, 9);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn norm_sqr_matches_conj_product() {
        let a = ExactComplex::from_ratios(3, 5, -2, 7);
        let n = &a * &a.conj();
        assert!(n.is_real());
        assert_eq!(*n.re(), a.norm_sqr());
    }
}
