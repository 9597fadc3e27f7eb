//! Sparse multivariate polynomials with a weighted grading.
//!
//! The variable alphabet is fixed by the source dimension `n` of the maps
//! under study and always has the layout
//!
//! ```text
//! slot 0 .. n-2   : z_1 .. z_{n-1}     weight 1
//! slot n-1        : w                  weight 2
//! slot n .. 2n-2  : ζ_1 .. ζ_{n-1}     weight 1   (complexified conjugates)
//! slot 2n-1       : u / η              weight 2   (hypersurface parameter,
//!                                                  or the reflected w)
//! ```
//!
//! Holomorphic data occupies the first `n` slots; the anti-holomorphic slots
//! come into play through [`MPoly::bar_reflect`] and the hypersurface
//! parameterization. Terms are kept in a `BTreeMap` so that iteration order,
//! and hence every downstream computation, is deterministic.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::{AlgebraError, ExactComplex, Scalar};

/// Exponent vector, one entry per alphabet slot. Dense and fixed-width:
/// alphabets stay small (≤ 12 slots at the supported dimensions), which makes
/// term merging cheap.
pub type Expo = SmallVec<[u16; 12]>;

/// The variable alphabet for source dimension `n ≥ 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VarAlphabet {
    n: usize,
}

impl VarAlphabet {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "source dimension must be at least 2");
        Self { n }
    }

    /// Source dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of `z` (equivalently `ζ`) variables, `n - 1`.
    pub fn n_z(&self) -> usize {
        self.n - 1
    }

    /// Count of holomorphic slots `(z_1..z_{n-1}, w)`.
    pub fn n_holo(&self) -> usize {
        self.n
    }

    /// Count of anti-holomorphic/real slots `(ζ_1..ζ_{n-1}, u)`.
    pub fn n_anti(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> usize {
        2 * self.n
    }

    pub fn z(&self, j: usize) -> usize {
        debug_assert!(j < self.n - 1);
        j
    }

    pub fn w(&self) -> usize {
        self.n - 1
    }

    pub fn zeta(&self, j: usize) -> usize {
        debug_assert!(j < self.n - 1);
        self.n + j
    }

    /// The `u` slot; doubles as the `η` slot under [`MPoly::bar_reflect`].
    pub fn u(&self) -> usize {
        2 * self.n - 1
    }

    /// Parabolic weight: `wt(z_j) = wt(ζ_j) = 1`, `wt(w) = wt(u) = 2`.
    pub fn weight(&self, slot: usize) -> u32 {
        if slot == self.w() || slot == self.u() {
            2
        } else {
            1
        }
    }

    pub fn wt_deg(&self, e: &Expo) -> u32 {
        e.iter()
            .enumerate()
            .map(|(s, &x)| u32::from(x) * self.weight(s))
            .sum()
    }

    pub fn total_deg(&self, e: &Expo) -> u32 {
        e.iter().map(|&x| u32::from(x)).sum()
    }

    pub fn zero_expo(&self) -> Expo {
        SmallVec::from_elem(0, self.slots())
    }

    pub fn unit_expo(&self, slot: usize) -> Expo {
        let mut e = self.zero_expo();
        e[slot] = 1;
        e
    }

    pub fn slot_name(&self, slot: usize) -> String {
        if slot < self.n - 1 {
            format!("z{}", slot + 1)
        } else if slot == self.w() {
            "w".into()
        } else if slot == self.u() {
            "u".into()
        } else {
            format!("zeta{}", slot - self.n + 1)
        }
    }
}

/// Multiplicative unit and small integers, needed by derivatives and
/// substitution.
pub trait ScalarOne: Scalar {
    fn one_s() -> Self;
    fn from_u32_s(k: u32) -> Self;
}

impl ScalarOne for ExactComplex {
    fn one_s() -> Self {
        ExactComplex::one()
    }
    fn from_u32_s(k: u32) -> Self {
        ExactComplex::from_int(i64::from(k))
    }
}

/// A sparse polynomial over [`Scalar`] coefficients; no zero coefficients
/// are stored.
#[derive(Clone, PartialEq)]
pub struct MPoly<C: Scalar> {
    alphabet: VarAlphabet,
    terms: BTreeMap<Expo, C>,
}

impl<C: Scalar> MPoly<C> {
    pub fn zero(alphabet: VarAlphabet) -> Self {
        Self {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: VarAlphabet, c: C) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(alphabet.zero_expo(), c);
        p
    }

    /// The monomial `c · x_slot`.
    pub fn linear(alphabet: VarAlphabet, slot: usize, c: C) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(alphabet.unit_expo(slot), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Expo, C)>>(alphabet: VarAlphabet, it: I) -> Self {
        let mut p = Self::zero(alphabet);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn alphabet(&self) -> VarAlphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Expo) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn constant_coeff(&self) -> Option<&C> {
        self.terms.get(&self.alphabet.zero_expo())
    }

    /// Merge a term in, pruning a resulting zero.
    pub fn add_term(&mut self, e: Expo, c: C) {
        if c.is_zero_s() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add_s(&c);
                if s.is_zero_s() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.alphabet != rhs.alphabet {
            return Err(AlgebraError::AlphabetMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.alphabet != rhs.alphabet {
            return Err(AlgebraError::AlphabetMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg_s());
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.mul_truncated(rhs, None)
    }

    /// Product, optionally dropping every term of weighted degree above
    /// `order` as it is formed. Jet arithmetic relies on this to stay small.
    pub fn mul_truncated(&self, rhs: &Self, order: Option<u32>) -> Result<Self, AlgebraError> {
        if self.alphabet != rhs.alphabet {
            return Err(AlgebraError::AlphabetMismatch);
        }
        let mut out = Self::zero(self.alphabet);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = ea.clone();
                for (x, y) in e.iter_mut().zip(eb.iter()) {
                    *x += *y;
                }
                if let Some(m) = order {
                    if self.alphabet.wt_deg(&e) > m {
                        continue;
                    }
                }
                out.add_term(e, ca.mul_s(cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg_s());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.alphabet);
        if c.is_zero_s() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.mul_s(c));
        }
        out
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.alphabet);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Weighted degree of the polynomial (`0` for the zero polynomial).
    pub fn wt_deg(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| self.alphabet.wt_deg(e))
            .max()
            .unwrap_or(0)
    }

    /// Drop all terms of weighted degree `> m`; idempotent.
    pub fn wt_truncate(&self, m: u32) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (e, c) in &self.terms {
            if self.alphabet.wt_deg(e) <= m {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// The `H^{(k,l)}` slice of a holomorphic jet: terms of `z`-degree `zdeg`
    /// and `w`-exponent `wpow` (anti-holomorphic slots must be absent).
    pub fn slice(&self, zdeg: u32, wpow: u16) -> Self {
        let a = self.alphabet;
        let mut out = Self::zero(a);
        for (e, c) in &self.terms {
            let zd: u32 = (0..a.n_z()).map(|j| u32::from(e[a.z(j)])).sum();
            if zd == zdeg && e[a.w()] == wpow {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Conjugate coefficients and swap `z_j ↔ ζ_j`, `w ↔ η(=u slot)`.
    /// An involution and a ring anti-homomorphism over conjugation.
    pub fn bar_reflect(&self) -> Self {
        let a = self.alphabet;
        let mut out = Self::zero(a);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            for j in 0..a.n_z() {
                e2.swap(a.z(j), a.zeta(j));
            }
            e2.swap(a.w(), a.u());
            out.terms.insert(e2, c.conj_s());
        }
        out
    }
}

impl<C: ScalarOne> MPoly<C> {
    pub fn one(alphabet: VarAlphabet) -> Self {
        Self::constant(alphabet, C::one_s())
    }

    /// Formal partial derivative with respect to one slot.
    pub fn derivative(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (e, c) in &self.terms {
            let k = e[slot];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[slot] = k - 1;
            out.add_term(e2, c.mul_s(&C::from_u32_s(u32::from(k))));
        }
        out
    }

    /// Substitute `slot := p`, leaving other variables untouched.
    pub fn substitute(&self, slot: usize, p: &Self) -> Result<Self, AlgebraError> {
        if self.alphabet != p.alphabet {
            return Err(AlgebraError::AlphabetMismatch);
        }
        if slot >= self.alphabet.slots() {
            return Err(AlgebraError::SlotOutOfRange(slot));
        }
        let mut pow_cache: Vec<Self> = vec![Self::one(self.alphabet)];
        let mut out = Self::zero(self.alphabet);
        for (e, c) in &self.terms {
            let k = usize::from(e[slot]);
            while pow_cache.len() <= k {
                let next = pow_cache.last().unwrap().mul(p)?;
                pow_cache.push(next);
            }
            let mut e2 = e.clone();
            e2[slot] = 0;
            let mono = Self::from_terms(self.alphabet, [(e2, c.clone())]);
            out = out.add(&mono.mul(&pow_cache[k])?)?;
        }
        Ok(out)
    }

    /// Simultaneous substitution: slot `i` becomes `subs[i]`; result truncated
    /// at weighted `order` when given. This is the composition workhorse for
    /// jets.
    pub fn subst_all(&self, subs: &[Self], order: Option<u32>) -> Result<Self, AlgebraError> {
        if subs.len() != self.alphabet.slots() {
            return Err(AlgebraError::AlphabetMismatch);
        }
        for s in subs {
            if s.alphabet != self.alphabet {
                return Err(AlgebraError::AlphabetMismatch);
            }
        }
        let mut pow_cache: Vec<Vec<Self>> = (0..subs.len())
            .map(|_| vec![Self::one(self.alphabet)])
            .collect();
        let mut out = Self::zero(self.alphabet);
        for (e, c) in &self.terms {
            let mut term = Self::constant(self.alphabet, c.clone());
            for (slot, &k) in e.iter().enumerate() {
                let k = usize::from(k);
                if k == 0 {
                    continue;
                }
                while pow_cache[slot].len() <= k {
                    let next = pow_cache[slot]
                        .last()
                        .unwrap()
                        .mul_truncated(&subs[slot], order)?;
                    pow_cache[slot].push(next);
                }
                term = term.mul_truncated(&pow_cache[slot][k], order)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a full point, one scalar per slot.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.alphabet.slots());
        let mut acc = C::one_s().sub_s(&C::one_s());
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (slot, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul_s(&point[slot]);
                }
            }
            acc = acc.add_s(&t);
        }
        acc
    }
}

impl MPoly<ExactComplex> {
    /// Largest bit-size appearing in any coefficient, a cheap blow-up gauge.
    pub fn max_coeff_bits(&self) -> u32 {
        self.terms
            .values()
            .flat_map(|c| {
                [
                    c.re().numer().significant_bits(),
                    c.re().denom().significant_bits(),
                    c.im().numer().significant_bits(),
                    c.im().denom().significant_bits(),
                ]
            })
            .max()
            .unwrap_or(0)
    }
}

impl<C: Scalar> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}", c)?;
            for (slot, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*{}", self.alphabet.slot_name(slot))?;
                } else if k > 1 {
                    write!(f, "*{}^{}", self.alphabet.slot_name(slot), k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> VarAlphabet {
        VarAlphabet::new(3)
    }

    fn zp(j: usize) -> MPoly<ExactComplex> {
        MPoly::linear(a3(), a3().z(j), ExactComplex::one())
    }

    fn wp() -> MPoly<ExactComplex> {
        MPoly::linear(a3(), a3().w(), ExactComplex::one())
    }

    #[test]
    fn z1_times_z1() {
        let z1 = zp(0);
        let sq = z1.mul(&z1).unwrap();
        let mut e = a3().zero_expo();
        e[0] = 2;
        assert_eq!(sq.coeff(&e), Some(&ExactComplex::one()));
        assert_eq!(sq.num_terms(), 1);
    }

    #[test]
    fn conjugate_pair_product() {
        // (1+iw)(1-iw) = 1 + w^2
        let one = MPoly::one(a3());
        let iw = wp().scale(&ExactComplex::i());
        let lhs = one.add(&iw).unwrap().mul(&one.sub(&iw).unwrap()).unwrap();
        let w2 = wp().mul(&wp()).unwrap();
        assert_eq!(lhs, one.add(&w2).unwrap());
    }

    #[test]
    fn weight_of_z1_sq_w() {
        let p = zp(0).mul(&zp(0)).unwrap().mul(&wp()).unwrap();
        assert_eq!(p.wt_deg(), 4);
    }

    #[test]
    fn truncate_examples() {
        // z1 + z1*w at weighted orders 2 / 3; w^2 dies at order 3.
        let z1w = zp(0).mul(&wp()).unwrap();
        let p = zp(0).add(&z1w).unwrap();
        assert_eq!(p.wt_truncate(2), zp(0));
        assert_eq!(p.wt_truncate(3), p);
        let w2 = wp().mul(&wp()).unwrap();
        assert!(w2.wt_truncate(3).is_zero());
    }

    #[test]
    fn truncate_composes_as_min() {
        let p = zp(0)
            .add(&zp(1).mul(&wp()).unwrap())
            .unwrap()
            .add(&wp().mul(&wp()).unwrap())
            .unwrap();
        let both = p.wt_truncate(4).wt_truncate(3);
        assert_eq!(both, p.wt_truncate(3));
        assert_eq!(p.wt_truncate(3).wt_truncate(5), p.wt_truncate(3));
    }

    #[test]
    fn bar_reflect_rules() {
        let a = a3();
        // i*z1 -> -i*zeta1
        let p = zp(0).scale(&ExactComplex::i());
        let r = p.bar_reflect();
        let e = a.unit_expo(a.zeta(0));
        assert_eq!(r.coeff(&e), Some(&ExactComplex::i().neg_s()));
        // 2 z1 zeta2 -> 2 zeta1 z2
        let p2 = MPoly::from_terms(
            a,
            [(
                {
                    let mut e = a.zero_expo();
                    e[a.z(0)] = 1;
                    e[a.zeta(1)] = 1;
                    e
                },
                ExactComplex::from_int(2),
            )],
        );
        let r2 = p2.bar_reflect();
        let mut e2 = a.zero_expo();
        e2[a.zeta(0)] = 1;
        e2[a.z(1)] = 1;
        assert_eq!(r2.coeff(&e2), Some(&ExactComplex::from_int(2)));
        // involution on z1 + i w
        let p3 = zp(0).add(&wp().scale(&ExactComplex::i())).unwrap();
        assert_eq!(p3.bar_reflect().bar_reflect(), p3);
    }

    #[test]
    fn derivative_product_rule_spot() {
        // d/dz1 (z1^2 w) = 2 z1 w
        let p = zp(0).mul(&zp(0)).unwrap().mul(&wp()).unwrap();
        let d = p.derivative(a3().z(0));
        let want = zp(0).mul(&wp()).unwrap().scale(&ExactComplex::from_int(2));
        assert_eq!(d, want);
    }

    #[test]
    fn substitute_slot() {
        // (w)^2 with w := u + i z1 zeta1
        let a = a3();
        let mut surf = MPoly::linear(a, a.u(), ExactComplex::one());
        let mut e = a.zero_expo();
        e[a.z(0)] = 1;
        e[a.zeta(0)] = 1;
        surf.add_term(e, ExactComplex::i());
        let w2 = wp().mul(&wp()).unwrap();
        let s = w2.substitute(a.w(), &surf).unwrap();
        assert_eq!(s, surf.mul(&surf).unwrap());
    }
}
