//! Arbitrary-precision floating complex scalars for the unitary steps of the
//! normalization pipeline.
//!
//! Everything that can be decided exactly stays in [`crate::exact`]; this
//! layer only carries the values that leave the rational field (`√λ`, `√μ_j`,
//! unitary matrix entries). Arithmetic is MPFR-backed and correctly rounded
//! at the working precision; binary operations round at the larger operand
//! precision.

use rug::ops::CompleteRound;
use rug::{Complex, Float, Rational};

use crate::exact::{ExactComplex, Scalar, ScalarOne};

pub type BigFloat = Float;

/// Minimum working precision in bits.
pub const MIN_PREC: u32 = 64;

/// A complex scalar with a shared precision parameter for both parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    inner: Complex,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        Self {
            inner: Complex::new(prec.max(MIN_PREC)),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self {
            inner: Complex::with_val(prec.max(MIN_PREC), (1, 0)),
        }
    }

    pub fn i(prec: u32) -> Self {
        Self {
            inner: Complex::with_val(prec.max(MIN_PREC), (0, 1)),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self {
            inner: Complex::with_val(prec.max(MIN_PREC), (re, im)),
        }
    }

    pub fn from_exact(c: &ExactComplex, prec: u32) -> Self {
        Self {
            inner: Complex::with_val(prec.max(MIN_PREC), (c.re(), c.im())),
        }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        Self {
            inner: Complex::with_val(prec.max(MIN_PREC), (re, im)),
        }
    }

    pub fn from_float(re: Float) -> Self {
        let prec = re.prec();
        Self {
            inner: Complex::with_val(prec, (re, Float::new(prec))),
        }
    }

    pub fn prec(&self) -> u32 {
        self.inner.prec().0
    }

    pub fn re(&self) -> &Float {
        self.inner.real()
    }

    pub fn im(&self) -> &Float {
        self.inner.imag()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.real().is_zero() && self.inner.imag().is_zero()
    }

    fn join(&self, rhs: &Self) -> u32 {
        self.prec().max(rhs.prec())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            inner: (&self.inner + &rhs.inner).complete((self.join(rhs), self.join(rhs))),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            inner: (&self.inner - &rhs.inner).complete((self.join(rhs), self.join(rhs))),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            inner: (&self.inner * &rhs.inner).complete((self.join(rhs), self.join(rhs))),
        }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Self {
            inner: (&self.inner / &rhs.inner).complete((self.join(rhs), self.join(rhs))),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            inner: (-&self.inner).complete((self.prec(), self.prec())),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            inner: self.inner.clone().conj(),
        }
    }

    pub fn mul_i(&self) -> Self {
        Self {
            inner: self.inner.clone().mul_i(false),
        }
    }

    pub fn scale(&self, f: &Float) -> Self {
        let prec = self.prec().max(f.prec());
        Self {
            inner: (&self.inner * f).complete((prec, prec)),
        }
    }

    pub fn recip(&self) -> Self {
        Self {
            inner: self.inner.clone().recip(),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        Self {
            inner: self.inner.clone().sqrt(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        self.inner.clone().norm().into_real_imag().0
    }

    pub fn abs(&self) -> Float {
        self.inner.clone().abs().into_real_imag().0
    }
}

impl std::fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({} + {}i)",
            self.re().to_f64(),
            self.im().to_f64()
        )
    }
}

impl Scalar for BigComplex {
    fn add_s(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_s(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_s(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn conj_s(&self) -> Self {
        self.conj()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
}

impl ScalarOne for BigComplex {
    fn one_s() -> Self {
        Self::one(MIN_PREC)
    }
    fn from_u32_s(k: u32) -> Self {
        Self {
            inner: Complex::with_val(MIN_PREC, (k, 0)),
        }
    }
}

/// `2^e` at precision `prec`, the building block for residual thresholds.
pub fn pow2(e: i32, prec: u32) -> Float {
    Float::with_val(prec.max(MIN_PREC), Float::i_exp(1, e))
}

/// Deterministic short decimal rendering used in reports.
pub fn to_decimal_string(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let s = f.to_string_radix(10, Some(digits));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_floor_and_join() {
        let a = BigComplex::from_f64(1.5, 0.25, 16);
        assert_eq!(a.prec(), MIN_PREC);
        let b = BigComplex::from_f64(2.0, 0.0, 256);
        assert_eq!(a.add(&b).prec(), 256);
    }

    #[test]
    fn exact_roundtrip_of_dyadics() {
        let c = ExactComplex::from_ratios(3, 8, -5, 4);
        let b = BigComplex::from_exact(&c, 128);
        assert_eq!(b.re().to_f64(), 0.375);
        assert_eq!(b.im().to_f64(), -1.25);
    }

    #[test]
    fn sqrt_squares_back() {
        let c = BigComplex::from_f64(-2.0, 1.0, 256);
        let s = c.sqrt();
        let back = s.mul(&s);
        let err = back.sub(&c).abs();
        assert!(err < pow2(-250, 256));
    }

    #[test]
    fn pow2_threshold() {
        let t = pow2(-128, 256);
        assert_eq!(t.to_f64(), 2f64.powi(-128));
    }
}
