//! Rational functions `num/den` with `den(0) = 1`, the component type of
//! rational CR maps.

use super::{AlgebraError, ExactComplex, MPoly, VarAlphabet};

/// A rational function over [`ExactComplex`], stored so that the denominator
/// evaluates to `1` at the origin. No gcd reduction is attempted; equality is
/// decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RFunc {
    num: MPoly<ExactComplex>,
    den: MPoly<ExactComplex>,
}

impl RFunc {
    /// Build from numerator and denominator; fails when `den(0) = 0`.
    pub fn new(num: MPoly<ExactComplex>, den: MPoly<ExactComplex>) -> Result<Self, AlgebraError> {
        if num.alphabet() != den.alphabet() {
            return Err(AlgebraError::AlphabetMismatch);
        }
        let c0 = den
            .constant_coeff()
            .cloned()
            .unwrap_or_else(ExactComplex::zero);
        if c0.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        let inv = c0.inv().expect("nonzero constant");
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(num: MPoly<ExactComplex>) -> Self {
        let one = MPoly::one(num.alphabet());
        Self { num, den: one }
    }

    pub fn zero(alphabet: VarAlphabet) -> Self {
        Self::from_poly(MPoly::zero(alphabet))
    }

    pub fn one(alphabet: VarAlphabet) -> Self {
        Self::from_poly(MPoly::one(alphabet))
    }

    pub fn constant(alphabet: VarAlphabet, c: ExactComplex) -> Self {
        Self::from_poly(MPoly::constant(alphabet, c))
    }

    pub fn var(alphabet: VarAlphabet, slot: usize) -> Self {
        Self::from_poly(MPoly::linear(alphabet, slot, ExactComplex::one()))
    }

    pub fn num(&self) -> &MPoly<ExactComplex> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<ExactComplex> {
        &self.den
    }

    pub fn alphabet(&self) -> VarAlphabet {
        self.num.alphabet()
    }

    /// Identically zero iff the numerator is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.num_terms() == 1 && self.den.constant_coeff().is_some()
    }

    /// Exact equality as rational functions (cross-multiplied).
    pub fn eq_rational(&self, rhs: &Self) -> bool {
        match (self.num.mul(&rhs.den), rhs.num.mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn value_at_origin(&self) -> ExactComplex {
        self.num
            .constant_coeff()
            .cloned()
            .unwrap_or_else(ExactComplex::zero)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let num = self
            .num
            .mul(&rhs.den)?
            .add(&rhs.num.mul(&self.den)?)?;
        Self::new(num, self.den.mul(&rhs.den)?)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let num = self
            .num
            .mul(&rhs.den)?
            .sub(&rhs.num.mul(&self.den)?)?;
        Self::new(num, self.den.mul(&rhs.den)?)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Self::new(self.num.mul(&rhs.num)?, self.den.mul(&rhs.den)?)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::new(self.num.mul(&rhs.den)?, self.den.mul(&rhs.num)?)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, slot: usize) -> Result<Self, AlgebraError> {
        let num = self
            .num
            .derivative(slot)
            .mul(&self.den)?
            .sub(&self.num.mul(&self.den.derivative(slot))?)?;
        Self::new(num, self.den.mul(&self.den)?)
    }

    /// Substitute `slot := p` for a polynomial `p`; the denominator must stay
    /// nonzero at the origin.
    pub fn substitute_poly(
        &self,
        slot: usize,
        p: &MPoly<ExactComplex>,
    ) -> Result<Self, AlgebraError> {
        Self::new(self.num.substitute(slot, p)?, self.den.substitute(slot, p)?)
    }

    /// Compose with a tuple of rational functions: every alphabet slot `i` is
    /// replaced by `subs[i]`. Used for exact composition of rational maps
    /// with automorphisms.
    pub fn compose(&self, subs: &[RFunc]) -> Result<Self, AlgebraError> {
        let alpha = self.alphabet();
        if subs.len() != alpha.slots() {
            return Err(AlgebraError::AlphabetMismatch);
        }
        let num = compose_poly(&self.num, subs)?;
        let den = compose_poly(&self.den, subs)?;
        num.div(&den)
    }

    /// The weighted-degree-`≤ order` Taylor polynomial at the origin,
    /// computed exactly by geometric-series inversion of the denominator.
    pub fn jet(&self, order: u32) -> MPoly<ExactComplex> {
        // den = 1 - q with q(0) = 0, so 1/den = sum q^k, and q has weighted
        // degree >= 1: `order` rounds suffice.
        let one = MPoly::one(self.alphabet());
        let q = one.sub(&self.den).expect("same alphabet");
        let q = q.wt_truncate(order);
        let mut inv = one.clone();
        let mut pw = one;
        for _ in 0..order {
            pw = pw.mul_truncated(&q, Some(order)).expect("same alphabet");
            if pw.is_zero() {
                break;
            }
            inv = inv.add(&pw).expect("same alphabet");
        }
        self.num
            .wt_truncate(order)
            .mul_truncated(&inv, Some(order))
            .expect("same alphabet")
    }

    /// Exact evaluation; `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[ExactComplex]) -> Option<ExactComplex> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        self.num.eval(point).div(&d)
    }
}

/// `p(subs)` for a polynomial `p`, with memoized powers per slot.
fn compose_poly(p: &MPoly<ExactComplex>, subs: &[RFunc]) -> Result<RFunc, AlgebraError> {
    let alpha = p.alphabet();
    let mut pow_cache: Vec<Vec<RFunc>> = (0..subs.len()).map(|_| vec![RFunc::one(alpha)]).collect();
    let mut acc = RFunc::zero(alpha);
    for (e, c) in p.terms() {
        let mut term = RFunc::constant(alpha, c.clone());
        for (slot, &k) in e.iter().enumerate() {
            let k = usize::from(k);
            if k == 0 {
                continue;
            }
            while pow_cache[slot].len() <= k {
                let next = pow_cache[slot].last().unwrap().mul(&subs[slot])?;
                pow_cache[slot].push(next);
            }
            term = term.mul(&pow_cache[slot][k])?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> VarAlphabet {
        VarAlphabet::new(3)
    }

    fn z1() -> MPoly<ExactComplex> {
        MPoly::linear(a3(), 0, ExactComplex::one())
    }

    fn w() -> MPoly<ExactComplex> {
        MPoly::linear(a3(), a3().w(), ExactComplex::one())
    }

    #[test]
    fn jet_of_z1_over_one_minus_w() {
        // z1/(1-w) to weighted order 3 is z1 + z1 w  (long-division oracle:
        // z1
        //  * (1 + w + w^2 + ...), truncated at weight 3).
        let r = RFunc::new(z1(), MPoly::one(a3()).sub(&w()).unwrap()).unwrap();
        let j = r.jet(3);
        let want = z1().add(&z1().mul(&w()).unwrap()).unwrap();
        assert_eq!(j, want);
    }

    #[test]
    fn jet_of_polynomial_is_truncation() {
        let r = RFunc::from_poly(w());
        assert_eq!(r.jet(4), w());
    }

    #[test]
    fn jet_geometric_series() {
        // 1/(1-z1) to weighted order 2 = 1 + z1 + z1^2
        let r = RFunc::new(MPoly::one(a3()), MPoly::one(a3()).sub(&z1()).unwrap()).unwrap();
        let j = r.jet(2);
        let want = MPoly::one(a3())
            .add(&z1())
            .unwrap()
            .add(&z1().mul(&z1()).unwrap())
            .unwrap();
        assert_eq!(j, want);
    }

    #[test]
    fn den_vanishing_at_origin_rejected() {
        assert!(matches!(
            RFunc::new(MPoly::one(a3()), w()),
            Err(AlgebraError::DenominatorVanishes)
        ));
    }

    #[test]
    fn jet_matches_brute_force_series_division() {
        // (1 + 2 z1 + w) / (1 + z1 - w/2): multiply the jet back by den and
        // compare against num to the same order.
        let num = MPoly::one(a3())
            .add(&z1().scale(&ExactComplex::from_int(2)))
            .unwrap()
            .add(&w())
            .unwrap();
        let den = MPoly::one(a3())
            .add(&z1())
            .unwrap()
            .sub(&w().scale(&ExactComplex::from_ratio(1, 2)))
            .unwrap();
        let r = RFunc::new(num.clone(), den.clone()).unwrap();
        for order in [0u32, 1, 2, 3, 4, 5, 6] {
            let j = r.jet(order);
            let back = j.mul(&den).unwrap().wt_truncate(order);
            assert_eq!(back, num.wt_truncate(order), "order {order}");
        }
    }

    #[test]
    fn quotient_rule() {
        // d/dw [w/(1-w)] = 1/(1-w)^2
        let one = MPoly::one(a3());
        let den = one.sub(&w()).unwrap();
        let r = RFunc::new(w(), den.clone()).unwrap();
        let d = r.derivative(a3().w()).unwrap();
        let want = RFunc::new(one, den.mul(&den).unwrap()).unwrap();
        assert!(d.eq_rational(&want));
    }
}
