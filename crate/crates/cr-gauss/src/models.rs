//! Hypersurface models and rational CR maps between them.
//!
//! Maps go from `∂H_n` (Heisenberg, `Im w = |z|²`) or `∂B^n` (sphere) into
//! the corresponding model of dimension `N`. Components are stored in the
//! order `f_1..f_{n-1}, φ_1..φ_{N-n}, g` for the Heisenberg model; for the
//! ball model the same storage is read as `F_1..F_N` with the pole component
//! last. CR validity is an exact decision: the complexified defining
//! identity is checked as a cross-multiplied polynomial identity.

use rug::Rational;
use thiserror::Error;

use crate::exact::{AlgebraError, ExactComplex, MPoly, RFunc, Scalar, VarAlphabet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("denominator vanishes at the origin after composition")]
    DenominatorVanishes,
    #[error("point does not lie on the hypersurface")]
    PointOffSurface,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Heisenberg,
    Ball,
}

/// A point of `∂H_n`, stored as `(z₀, u₀)` with `w₀ = u₀ + i|z₀|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint {
    z: Vec<ExactComplex>,
    u: Rational,
}

impl HPoint {
    pub fn new(z: Vec<ExactComplex>, u: Rational) -> Self {
        Self { z, u }
    }

    pub fn origin(n: usize) -> Self {
        Self {
            z: vec![ExactComplex::zero(); n - 1],
            u: Rational::new(),
        }
    }

    /// Source dimension `n`.
    pub fn dim(&self) -> usize {
        self.z.len() + 1
    }

    pub fn z(&self) -> &[ExactComplex] {
        &self.z
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    /// `w₀ = u₀ + i·|z₀|²`; by construction `Im w₀ = |z₀|²` exactly.
    pub fn w(&self) -> ExactComplex {
        let mut n2 = Rational::new();
        for c in &self.z {
            n2 += c.norm_sqr();
        }
        ExactComplex::new(self.u.clone(), n2)
    }

    pub fn is_origin(&self) -> bool {
        self.u.cmp0() == std::cmp::Ordering::Equal && self.z.iter().all(ExactComplex::is_zero)
    }
}

/// A rational CR map `(f, φ, g) : ∂H_n → ∂H_N` (or the ball analogue).
#[derive(Debug, Clone)]
pub struct CRMap {
    model: Model,
    n: usize,
    n_target: usize,
    comps: Vec<RFunc>,
}

impl CRMap {
    pub fn new(
        model: Model,
        n: usize,
        n_target: usize,
        comps: Vec<RFunc>,
    ) -> Result<Self, ModelError> {
        if n < 2 || n_target < n {
            return Err(ModelError::DimensionMismatch(format!(
                "need N >= n >= 2, got n={n}, N={n_target}"
            )));
        }
        if comps.len() != n_target {
            return Err(ModelError::DimensionMismatch(format!(
                "expected {} components, got {}",
                n_target,
                comps.len()
            )));
        }
        let alpha = VarAlphabet::new(n);
        for c in &comps {
            if c.alphabet() != alpha {
                return Err(ModelError::DimensionMismatch(
                    "component alphabet does not match the source dimension".into(),
                ));
            }
        }
        Ok(Self {
            model,
            n,
            n_target,
            comps,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.n_target
    }

    pub fn alphabet(&self) -> VarAlphabet {
        VarAlphabet::new(self.n)
    }

    pub fn components(&self) -> &[RFunc] {
        &self.comps
    }

    /// `f` block: the first `n-1` components.
    pub fn f(&self) -> &[RFunc] {
        &self.comps[..self.n - 1]
    }

    /// `φ` block: components `n-1 .. N-1`.
    pub fn phi(&self) -> &[RFunc] {
        &self.comps[self.n - 1..self.n_target - 1]
    }

    /// Transversal component `g` (`x_N` for the ball model).
    pub fn g(&self) -> &RFunc {
        &self.comps[self.n_target - 1]
    }

    /// `f̃ = (f, φ)`: all but the transversal component.
    pub fn f_tilde(&self) -> &[RFunc] {
        &self.comps[..self.n_target - 1]
    }

    /// Value at the origin of every component.
    pub fn value_at_origin(&self) -> Vec<ExactComplex> {
        self.comps.iter().map(RFunc::value_at_origin).collect()
    }

    pub fn is_based(&self) -> bool {
        self.value_at_origin().iter().all(ExactComplex::is_zero)
    }

    /// Exact CR validity: the complexified defining identity of the target
    /// model holds identically on the complexified source.
    ///
    /// Heisenberg: `(g(z,w) − ḡ(ζ,η))/2i = Σ f̃_l(z,w)·f̃̄_l(ζ,η)` with
    /// `η = w − 2i⟨z,ζ⟩`. Ball: `Σ F_l(x)·F̄_l(ξ) − 1 ∈ (⟨x,ξ⟩ − 1)`.
    pub fn cr_validity(&self) -> Result<bool, ModelError> {
        match self.model {
            Model::Heisenberg => self.validity_heisenberg(),
            Model::Ball => self.validity_ball(),
        }
    }

    fn validity_heisenberg(&self) -> Result<bool, ModelError> {
        let alpha = self.alphabet();
        // η = w − 2i Σ z_j ζ_j substituted into every reflected component
        let mut eta = MPoly::linear(alpha, alpha.w(), ExactComplex::one());
        for j in 0..alpha.n_z() {
            let mut e = alpha.zero_expo();
            e[alpha.z(j)] = 1;
            e[alpha.zeta(j)] = 1;
            eta.add_term(e, ExactComplex::two_i().neg_s());
        }
        let reflect = |r: &RFunc| -> Result<RFunc, ModelError> {
            let num = r.num().bar_reflect().substitute(alpha.u(), &eta)?;
            let den = r.den().bar_reflect().substitute(alpha.u(), &eta)?;
            Ok(RFunc::new(num, den)?)
        };
        // lhs = (g − ḡ)/(2i)
        let g_bar = reflect(self.g())?;
        let lhs = self
            .g()
            .sub(&g_bar)?
            .scale(&ExactComplex::two_i().inv().expect("2i != 0"));
        let mut rhs = RFunc::zero(alpha);
        for c in self.f_tilde() {
            rhs = rhs.add(&c.mul(&reflect(c)?)?)?;
        }
        Ok(lhs.eq_rational(&rhs))
    }

    fn validity_ball(&self) -> Result<bool, ModelError> {
        let alpha = self.alphabet();
        // D = Σ F_l(x) F̄_l(ξ) − 1 as a rational function; decide whether the
        // numerator lies in the ideal (⟨x,ξ⟩ − 1).
        let reflect = |r: &RFunc| RFunc::new(r.num().bar_reflect(), r.den().bar_reflect());
        let mut d = RFunc::one(alpha).neg();
        for c in &self.comps {
            d = d.add(&c.mul(&reflect(c)?)?)?;
        }
        let num = d.num().clone();
        if num.is_zero() {
            return Ok(true);
        }
        // ⟨x,ξ⟩ pairs (z_j, ζ_j) plus the pole pair (w-slot, u-slot). Reduce
        // modulo x_n ξ_n − (1 − Σ') by ξ_n-degree, clearing x_n powers.
        let xi_n = alpha.u();
        let x_n = alpha.w();
        let max_deg = num.terms().map(|(e, _)| e[xi_n]).max().unwrap_or(0);
        // 1 − Σ_{j<n} x_j ξ_j
        let mut rest = MPoly::one(alpha);
        for j in 0..alpha.n_z() {
            let mut e = alpha.zero_expo();
            e[alpha.z(j)] = 1;
            e[alpha.zeta(j)] = 1;
            rest.add_term(e, ExactComplex::from_int(-1));
        }
        let x_n_poly = MPoly::linear(alpha, x_n, ExactComplex::one());
        // Σ_k c_k(x,ξ') (1−Σ')^k x_n^{K−k} must vanish identically.
        let mut acc = MPoly::zero(alpha);
        for k in 0..=max_deg {
            let mut ck = MPoly::zero(alpha);
            for (e, c) in num.terms() {
                if e[xi_n] == k {
                    let mut e2 = e.clone();
                    e2[xi_n] = 0;
                    ck.add_term(e2, c.clone());
                }
            }
            if ck.is_zero() {
                continue;
            }
            let mut term = ck;
            for _ in 0..k {
                term = term.mul(&rest)?;
            }
            for _ in 0..(max_deg - k) {
                term = term.mul(&x_n_poly)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc.is_zero())
    }

    /// Compose with automorphisms: `post ∘ F ∘ pre` (either side optional).
    pub fn compose_auto(
        &self,
        pre: Option<&HnAutomorphism>,
        post: Option<&HnAutomorphism>,
    ) -> Result<CRMap, ModelError> {
        if self.model != Model::Heisenberg {
            return Err(ModelError::InvalidParameter(
                "automorphism composition is defined on the Heisenberg model".into(),
            ));
        }
        let mut comps = self.comps.clone();
        if let Some(a) = pre {
            let source_map = a.components(self.n, Side::Source)?;
            let subs = subs_from_map(self.alphabet(), &source_map)?;
            comps = comps
                .iter()
                .map(|c| c.compose(&subs))
                .collect::<Result<Vec<_>, _>>()?;
        }
        if let Some(a) = post {
            let target_map = a.components(self.n_target, Side::Target)?;
            comps = target_map
                .iter()
                .map(|t| compose_cross_alphabet(t, &comps, self.alphabet()))
                .collect::<Result<Vec<_>, _>>()?;
        }
        CRMap::new(self.model, self.n, self.n_target, comps)
    }

    /// Move the image of `0` back to `0` with the target translation
    /// `τ^F_0`; requires `F(0) ∈ ∂H_N` (guaranteed for valid maps).
    pub fn rebase_target(&self) -> Result<CRMap, ModelError> {
        let vals = self.value_at_origin();
        let f0: Vec<ExactComplex> = vals[..self.n_target - 1].to_vec();
        let g0 = vals[self.n_target - 1].clone();
        let tau = HnAutomorphism::TargetTranslation { f0, g0 };
        self.compose_auto(None, Some(&tau))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// Automorphisms of `∂H_k` used by the normalization pipeline.
#[derive(Debug, Clone)]
pub enum HnAutomorphism {
    /// `σ⁰_p : (z,w) ↦ (z+z₀, w+w₀+2i⟨z, z̄₀⟩)`.
    SourceTranslation { p: HPoint },
    /// `τ^F_p : (z*,w*) ↦ (z*−f̃₀, w*−ḡ₀−2i⟨z*, f̃̄₀⟩)` for a point
    /// `(f̃₀, g₀)` on the target hypersurface.
    TargetTranslation {
        f0: Vec<ExactComplex>,
        g0: ExactComplex,
    },
    /// The fractional pair `(σ, τ)`: applied on the source it is
    /// `σ(z,w) = (z−cw, w)/q`, on the target `τ(z*,w*) = (z*+(c,0)w*, w*)/q*`
    /// with `q = 1+2i⟨c̄,z⟩−i|c|²w` and `q* = 1−2i⟨c̄,z*⟩−i|c|²w*`.
    FractionalPair { c: Vec<ExactComplex> },
    /// `(z,w) ↦ (z·U, w)` for an exact unitary `U`.
    Rotation { u: Vec<Vec<ExactComplex>> },
    /// Parabolic dilation `(z,w) ↦ (t·z, t²·w)`, `t > 0` rational.
    Dilation { t: Rational },
}

impl HnAutomorphism {
    /// The components of the self-map of `∂H_dim`, in the `dim`-alphabet.
    pub fn components(&self, dim: usize, side: Side) -> Result<Vec<RFunc>, ModelError> {
        let alpha = VarAlphabet::new(dim);
        let nz = dim - 1;
        let zvar = |j: usize| RFunc::var(alpha, alpha.z(j));
        let wvar = RFunc::var(alpha, alpha.w());
        match self {
            HnAutomorphism::SourceTranslation { p } => {
                if p.dim() != dim {
                    return Err(ModelError::DimensionMismatch(
                        "translation point dimension".into(),
                    ));
                }
                let mut out = Vec::with_capacity(dim);
                for j in 0..nz {
                    out.push(zvar(j).add(&RFunc::constant(alpha, p.z()[j].clone()))?);
                }
                // w + w0 + 2i <z, conj(z0)>
                let mut g = wvar.add(&RFunc::constant(alpha, p.w()))?;
                for j in 0..nz {
                    let c = &ExactComplex::two_i() * &p.z()[j].conj();
                    g = g.add(&zvar(j).scale(&c))?;
                }
                out.push(g);
                Ok(out)
            }
            HnAutomorphism::TargetTranslation { f0, g0 } => {
                if f0.len() != nz {
                    return Err(ModelError::DimensionMismatch(
                        "target translation dimension".into(),
                    ));
                }
                let mut im = g0.im().clone();
                for c in f0 {
                    im -= c.norm_sqr();
                }
                if im.cmp0() != std::cmp::Ordering::Equal {
                    return Err(ModelError::PointOffSurface);
                }
                let mut out = Vec::with_capacity(dim);
                for j in 0..nz {
                    out.push(zvar(j).sub(&RFunc::constant(alpha, f0[j].clone()))?);
                }
                let mut g = wvar.sub(&RFunc::constant(alpha, g0.conj()))?;
                for j in 0..nz {
                    let c = &ExactComplex::two_i() * &f0[j].conj();
                    g = g.sub(&zvar(j).scale(&c))?;
                }
                out.push(g);
                Ok(out)
            }
            HnAutomorphism::FractionalPair { c } => {
                let k = c.len();
                if k > nz {
                    return Err(ModelError::DimensionMismatch(
                        "fractional-pair parameter longer than z-block".into(),
                    ));
                }
                let mut c2 = Rational::new();
                for x in c {
                    c2 += x.norm_sqr();
                }
                let c2 = ExactComplex::from_rational(c2);
                let padded: Vec<ExactComplex> = (0..nz)
                    .map(|j| c.get(j).cloned().unwrap_or_else(ExactComplex::zero))
                    .collect();
                // source: z ↦ (z − cw)/q, q = 1 + 2i⟨c̄,z⟩ − i|c|²w
                // target: z* ↦ (z* + cw*)/q*, q* = 1 − 2i⟨c̄,z*⟩ − i|c|²w*
                let (shift_sign, q_sign) = match side {
                    Side::Source => (ExactComplex::from_int(-1), ExactComplex::one()),
                    Side::Target => (ExactComplex::one(), ExactComplex::from_int(-1)),
                };
                let mut q = RFunc::one(alpha);
                for j in 0..nz {
                    let coeff = &(&ExactComplex::two_i() * &padded[j].conj()) * &q_sign;
                    q = q.add(&zvar(j).scale(&coeff))?;
                }
                q = q.sub(&wvar.scale(&c2.mul_i()))?;
                let mut out = Vec::with_capacity(dim);
                for j in 0..nz {
                    let shifted =
                        zvar(j).add(&wvar.scale(&(&padded[j] * &shift_sign)))?;
                    out.push(shifted.div(&q)?);
                }
                out.push(wvar.div(&q)?);
                Ok(out)
            }
            HnAutomorphism::Rotation { u } => {
                if u.len() != nz || u.iter().any(|r| r.len() != nz) {
                    return Err(ModelError::DimensionMismatch("rotation matrix size".into()));
                }
                if !is_exact_unitary(u) {
                    return Err(ModelError::InvalidParameter(
                        "rotation matrix is not unitary".into(),
                    ));
                }
                let mut out = Vec::with_capacity(dim);
                for l in 0..nz {
                    // (z·U)_l = Σ_j z_j U_{jl}
                    let mut acc = RFunc::zero(alpha);
                    for j in 0..nz {
                        acc = acc.add(&zvar(j).scale(&u[j][l]))?;
                    }
                    out.push(acc);
                }
                out.push(wvar);
                Ok(out)
            }
            HnAutomorphism::Dilation { t } => {
                if t.cmp0() != std::cmp::Ordering::Greater {
                    return Err(ModelError::InvalidParameter(
                        "dilation factor must be positive".into(),
                    ));
                }
                let tc = ExactComplex::from_rational(t.clone());
                let mut out = Vec::with_capacity(dim);
                for j in 0..nz {
                    out.push(zvar(j).scale(&tc));
                }
                out.push(wvar.scale(&(&tc * &tc)));
                Ok(out)
            }
        }
    }

    /// The automorphism as a CR self-map of `∂H_dim`, for validity checks.
    pub fn as_crmap(&self, dim: usize, side: Side) -> Result<CRMap, ModelError> {
        CRMap::new(Model::Heisenberg, dim, dim, self.components(dim, side)?)
    }
}

fn is_exact_unitary(u: &[Vec<ExactComplex>]) -> bool {
    let n = u.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc = ExactComplex::zero();
            for (k, _) in u.iter().enumerate() {
                acc = &acc + &(&u[i][k] * &u[j][k].conj());
            }
            let want = if i == j {
                ExactComplex::one()
            } else {
                ExactComplex::zero()
            };
            if acc != want {
                return false;
            }
        }
    }
    true
}

/// Substitution tuple sending the holomorphic slots to map components and
/// fixing the anti-holomorphic slots.
fn subs_from_map(alpha: VarAlphabet, comps: &[RFunc]) -> Result<Vec<RFunc>, ModelError> {
    if comps.len() != alpha.n_holo() {
        return Err(ModelError::DimensionMismatch(
            "substitution arity mismatch".into(),
        ));
    }
    let mut subs = Vec::with_capacity(alpha.slots());
    for k in 0..alpha.slots() {
        if k < alpha.n_holo() {
            subs.push(comps[k].clone());
        } else {
            subs.push(RFunc::var(alpha, k));
        }
    }
    Ok(subs)
}

/// Compose a target-alphabet rational function with source-alphabet
/// arguments (one per target holomorphic slot).
fn compose_cross_alphabet(
    t: &RFunc,
    args: &[RFunc],
    src_alpha: VarAlphabet,
) -> Result<RFunc, ModelError> {
    let eval_poly = |p: &MPoly<ExactComplex>| -> Result<RFunc, ModelError> {
        let t_alpha = p.alphabet();
        let mut acc = RFunc::zero(src_alpha);
        let mut pow_cache: Vec<Vec<RFunc>> = (0..t_alpha.n_holo())
            .map(|_| vec![RFunc::one(src_alpha)])
            .collect();
        for (e, c) in p.terms() {
            for slot in t_alpha.n_holo()..t_alpha.slots() {
                if e[slot] != 0 {
                    return Err(ModelError::InvalidParameter(
                        "automorphism uses anti-holomorphic slots".into(),
                    ));
                }
            }
            let mut term = RFunc::constant(src_alpha, c.clone());
            for slot in 0..t_alpha.n_holo() {
                let k = usize::from(e[slot]);
                if k == 0 {
                    continue;
                }
                while pow_cache[slot].len() <= k {
                    let next = pow_cache[slot].last().unwrap().mul(&args[slot])?;
                    pow_cache[slot].push(next);
                }
                term = term.mul(&pow_cache[slot][k])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    };
    let num = eval_poly(t.num())?;
    let den = eval_poly(t.den())?;
    Ok(num.div(&den)?)
}

// ---------------------------------------------------------------------------
// Cayley transform
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyDirection {
    BallToHeisenberg,
    HeisenbergToBall,
}

/// The Cayley transform `ρ_n(z,w) = (2z/(1−iw), (1+iw)/(1−iw))` as a tuple
/// of rational functions in the `n`-alphabet.
pub fn cayley_rho(n: usize) -> Vec<RFunc> {
    let alpha = VarAlphabet::new(n);
    let one = MPoly::one(alpha);
    let iw = MPoly::linear(alpha, alpha.w(), ExactComplex::i());
    let den = one.sub(&iw).expect("alphabet");
    let num_last = one.add(&iw).expect("alphabet");
    let mut out = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let num = MPoly::linear(alpha, alpha.z(j), ExactComplex::from_int(2));
        out.push(RFunc::new(num, den.clone()).expect("den(0)=1"));
    }
    out.push(RFunc::new(num_last, den).expect("den(0)=1"));
    out
}

/// The inverse Cayley transform `ρ_n⁻¹(x) = (x'/(1+x_n), i(1−x_n)/(1+x_n))`.
pub fn cayley_rho_inv(n: usize) -> Vec<RFunc> {
    let alpha = VarAlphabet::new(n);
    let one = MPoly::one(alpha);
    let xn = MPoly::linear(alpha, alpha.w(), ExactComplex::one());
    let den = one.add(&xn).expect("alphabet");
    let mut out = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let num = MPoly::linear(alpha, alpha.z(j), ExactComplex::one());
        out.push(RFunc::new(num, den.clone()).expect("den(0)=1"));
    }
    let num_last = one.sub(&xn).expect("alphabet").scale(&ExactComplex::i());
    out.push(RFunc::new(num_last, den).expect("den(0)=1"));
    out
}

/// Conjugate a map across the Cayley transform: ball→heis gives
/// `ρ_N⁻¹ ∘ F ∘ ρ_n`, heis→ball gives `ρ_N ∘ F ∘ ρ_n⁻¹`. With `rebase`
/// set, a Heisenberg result is target-translated so that `F(0) = 0`.
pub fn cayley_conjugate(
    f: &CRMap,
    direction: CayleyDirection,
    rebase: bool,
) -> Result<CRMap, ModelError> {
    let (n, nn) = (f.source_dim(), f.target_dim());
    let src_alpha = f.alphabet();
    match direction {
        CayleyDirection::BallToHeisenberg => {
            if f.model() != Model::Ball {
                return Err(ModelError::InvalidParameter("map is not a ball map".into()));
            }
            let rho_n = cayley_rho(n);
            let subs = subs_from_map(src_alpha, &rho_n)?;
            let y: Vec<RFunc> = f
                .components()
                .iter()
                .map(|c| c.compose(&subs))
                .collect::<Result<Vec<_>, _>>()?;
            // ρ_N⁻¹ applied to the tuple y
            let den = RFunc::one(src_alpha).add(&y[nn - 1])?;
            if den.value_at_origin().is_zero() {
                return Err(ModelError::DenominatorVanishes);
            }
            let mut comps = Vec::with_capacity(nn);
            for yj in y.iter().take(nn - 1) {
                comps.push(yj.div(&den)?);
            }
            let gnum = RFunc::one(src_alpha)
                .sub(&y[nn - 1])?
                .scale(&ExactComplex::i());
            comps.push(gnum.div(&den)?);
            let out = CRMap::new(Model::Heisenberg, n, nn, comps)?;
            if rebase {
                out.rebase_target()
            } else {
                Ok(out)
            }
        }
        CayleyDirection::HeisenbergToBall => {
            if f.model() != Model::Heisenberg {
                return Err(ModelError::InvalidParameter(
                    "map is not a Heisenberg map".into(),
                ));
            }
            let rho_n_inv = cayley_rho_inv(n);
            let subs = subs_from_map(src_alpha, &rho_n_inv)?;
            let y: Vec<RFunc> = f
                .components()
                .iter()
                .map(|c| c.compose(&subs))
                .collect::<Result<Vec<_>, _>>()?;
            // ρ_N applied to the tuple y: (2y'/(1−i y_N), (1+i y_N)/(1−i y_N))
            let iy = y[nn - 1].scale(&ExactComplex::i());
            let den = RFunc::one(src_alpha).sub(&iy)?;
            if den.value_at_origin().is_zero() {
                return Err(ModelError::DenominatorVanishes);
            }
            let mut comps = Vec::with_capacity(nn);
            for yj in y.iter().take(nn - 1) {
                comps.push(yj.scale(&ExactComplex::from_int(2)).div(&den)?);
            }
            let num = RFunc::one(src_alpha).add(&iy)?;
            comps.push(num.div(&den)?);
            CRMap::new(Model::Ball, n, nn, comps)
        }
    }
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

/// The standard test maps, produced on the Heisenberg side.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogMap {
    /// `(z, 0, w) : ∂H_n → ∂H_N`, `N ≥ n`.
    Linear { n: usize, n_target: usize },
    /// Cayley conjugate of the Whitney map `B^n → B^{2n-1}`.
    Whitney { n: usize },
    /// Cayley conjugate of the D'Angelo family map `B² → B⁴` with an exact
    /// `(cos θ, sin θ)` pair on the unit circle.
    DAngelo { cos: Rational, sin: Rational },
}

pub fn catalog(which: &CatalogMap) -> Result<CRMap, ModelError> {
    match which {
        CatalogMap::Linear { n, n_target } => {
            if *n_target < *n {
                return Err(ModelError::InvalidParameter("linear needs N >= n".into()));
            }
            let alpha = VarAlphabet::new(*n);
            let mut comps = Vec::with_capacity(*n_target);
            for j in 0..n - 1 {
                comps.push(RFunc::var(alpha, alpha.z(j)));
            }
            for _ in 0..n_target - n {
                comps.push(RFunc::zero(alpha));
            }
            comps.push(RFunc::var(alpha, alpha.w()));
            CRMap::new(Model::Heisenberg, *n, *n_target, comps)
        }
        CatalogMap::Whitney { n } => {
            let ball = whitney_ball(*n)?;
            cayley_conjugate(&ball, CayleyDirection::BallToHeisenberg, true)
        }
        CatalogMap::DAngelo { cos, sin } => {
            let ball = dangelo_ball(cos, sin)?;
            cayley_conjugate(&ball, CayleyDirection::BallToHeisenberg, true)
        }
    }
}

/// Whitney map `(x', x_n) ↦ (x', x_1 x_n, …, x_{n-1} x_n, x_n²)` on the ball.
pub fn whitney_ball(n: usize) -> Result<CRMap, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidParameter("whitney needs n >= 2".into()));
    }
    let alpha = VarAlphabet::new(n);
    let xn = RFunc::var(alpha, alpha.w());
    let mut comps = Vec::with_capacity(2 * n - 1);
    for j in 0..n - 1 {
        comps.push(RFunc::var(alpha, alpha.z(j)));
    }
    for j in 0..n - 1 {
        comps.push(RFunc::var(alpha, alpha.z(j)).mul(&xn)?);
    }
    comps.push(xn.mul(&xn)?);
    CRMap::new(Model::Ball, n, 2 * n - 1, comps)
}

/// D'Angelo family `F_θ(x₁,x₂) = (x₁, cosθ·x₂, sinθ·x₁x₂, sinθ·x₂²)`.
pub fn dangelo_ball(cos: &Rational, sin: &Rational) -> Result<CRMap, ModelError> {
    let mut s = Rational::from(cos * cos);
    s += Rational::from(sin * sin);
    if s != 1u32 {
        return Err(ModelError::InvalidParameter(
            "cos²θ + sin²θ must equal 1 exactly".into(),
        ));
    }
    let alpha = VarAlphabet::new(2);
    let x1 = RFunc::var(alpha, alpha.z(0));
    let x2 = RFunc::var(alpha, alpha.w());
    let c = ExactComplex::from_rational(cos.clone());
    let sn = ExactComplex::from_rational(sin.clone());
    let comps = vec![
        x1.clone(),
        x2.scale(&c),
        x1.mul(&x2)?.scale(&sn),
        x2.mul(&x2)?.scale(&sn),
    ];
    CRMap::new(Model::Ball, 2, 4, comps)
}

// ---------------------------------------------------------------------------
// seeded sampling (used by the harness and by invariance tests)
// ---------------------------------------------------------------------------

pub mod sampling {
    //! Deterministic random generation of hypersurface points and exact
    //! automorphisms. Coordinates are rationals of bounded height so every
    //! downstream decision stays exact.

    use rand::Rng;
    use rug::Rational;

    use super::{ExactComplex, HPoint, HnAutomorphism};

    /// Uniform rational `a/c` with `|a| ≤ height`, `1 ≤ c ≤ height`.
    pub fn random_rational<R: Rng>(rng: &mut R, height: i64) -> Rational {
        let a = rng.gen_range(-height..=height);
        let c = rng.gen_range(1..=height);
        Rational::from((a, c))
    }

    pub fn random_exact_complex<R: Rng>(rng: &mut R, height: i64) -> ExactComplex {
        ExactComplex::new(random_rational(rng, height), random_rational(rng, height))
    }

    /// A random point of `∂H_n` with coordinate height bounded by `height`.
    pub fn random_hpoint<R: Rng>(rng: &mut R, n: usize, height: i64) -> HPoint {
        let z = (0..n - 1)
            .map(|_| random_exact_complex(rng, height))
            .collect();
        HPoint::new(z, random_rational(rng, height))
    }

    /// Exact-rational points on the unit circle from the Pythagorean
    /// parameterization `((m²−k²) + 2mk·i) / (m²+k²)`.
    pub fn random_unit<R: Rng>(rng: &mut R) -> ExactComplex {
        let m = rng.gen_range(1i64..=12);
        let k = rng.gen_range(0i64..m.max(1));
        let den = m * m + k * k;
        let mut u = ExactComplex::from_ratios(m * m - k * k, den, 2 * m * k, den);
        if rng.gen_bool(0.5) {
            u = u.conj();
        }
        if rng.gen_bool(0.5) {
            u = u.mul_i();
        }
        u
    }

    /// A random exact unitary matrix: a product of Givens-style rotations
    /// with Pythagorean (cos, sin) pairs and unit-modulus phases.
    pub fn random_exact_unitary<R: Rng>(rng: &mut R, dim: usize) -> Vec<Vec<ExactComplex>> {
        let mut u: Vec<Vec<ExactComplex>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            random_unit(rng)
                        } else {
                            ExactComplex::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for a in 0..dim {
            for b in (a + 1)..dim {
                let m = rng.gen_range(1i64..=8);
                let k = rng.gen_range(0i64..=m);
                let den = m * m + k * k;
                let c = ExactComplex::from_ratio(m * m - k * k, den);
                let s = ExactComplex::from_ratio(2 * m * k, den);
                // right-multiply: columns a,b mix
                for row in u.iter_mut() {
                    let xa = row[a].clone();
                    let xb = row[b].clone();
                    row[a] = &(&xa * &c) - &(&xb * &s);
                    row[b] = &(&xa * &s) + &(&xb * &c);
                }
            }
        }
        u
    }

    /// A random automorphism of `∂H_dim`; `kind` cycles through the five
    /// families deterministically with the generator.
    pub fn random_automorphism<R: Rng>(rng: &mut R, dim: usize) -> HnAutomorphism {
        match rng.gen_range(0..5u8) {
            0 => HnAutomorphism::SourceTranslation {
                p: random_hpoint(rng, dim, 4),
            },
            1 => {
                // a target translation needs a point on the surface
                let p = random_hpoint(rng, dim, 4);
                let g0 = p.w();
                let f0 = p.z().to_vec();
                HnAutomorphism::TargetTranslation { f0, g0 }
            }
            2 => HnAutomorphism::FractionalPair {
                c: (0..dim - 1)
                    .map(|_| random_exact_complex(rng, 3))
                    .collect(),
            },
            3 => HnAutomorphism::Rotation {
                u: random_exact_unitary(rng, dim - 1),
            },
            _ => HnAutomorphism::Dilation {
                t: {
                    let mut t = random_rational(rng, 5);
                    t.abs_mut();
                    if t.cmp0() == std::cmp::Ordering::Equal {
                        t += 1u32;
                    }
                    t
                },
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whitney3_heis() -> CRMap {
        catalog(&CatalogMap::Whitney { n: 3 }).unwrap()
    }

    #[test]
    fn rho_at_origin_hits_the_pole() {
        // ρ_2(0,0) = (0, 1)
        let rho = cayley_rho(2);
        let alpha = VarAlphabet::new(2);
        let origin = vec![ExactComplex::zero(); alpha.slots()];
        let vals: Vec<_> = rho.iter().map(|r| r.eval(&origin).unwrap()).collect();
        assert_eq!(vals[0], ExactComplex::zero());
        assert_eq!(vals[1], ExactComplex::one());
    }

    #[test]
    fn linear_maps_are_valid() {
        let f = catalog(&CatalogMap::Linear { n: 3, n_target: 5 }).unwrap();
        assert!(f.cr_validity().unwrap());
        assert!(f.is_based());
    }

    #[test]
    fn whitney_ball_is_valid_and_conjugates() {
        let ball = whitney_ball(3).unwrap();
        assert!(ball.cr_validity().unwrap());
        let heis = whitney3_heis();
        assert!(heis.is_based());
        assert!(heis.cr_validity().unwrap());
    }

    #[test]
    fn whitney3_heisenberg_closed_form() {
        // ρ_5⁻¹ ∘ W ∘ ρ_3 = (z(1−iw), z(1+iw)-block, 2w) / ((1−w)(1+w))
        let heis = whitney3_heis();
        let alpha = heis.alphabet();
        let one = MPoly::one(alpha);
        let w = MPoly::linear(alpha, alpha.w(), ExactComplex::one());
        let iw = MPoly::linear(alpha, alpha.w(), ExactComplex::i());
        let den = one.sub(&w.mul(&w).unwrap()).unwrap();
        let f1 = RFunc::new(
            MPoly::linear(alpha, alpha.z(0), ExactComplex::one())
                .mul(&one.sub(&iw).unwrap())
                .unwrap(),
            den.clone(),
        )
        .unwrap();
        assert!(heis.components()[0].eq_rational(&f1));
        let g = RFunc::new(w.scale(&ExactComplex::from_int(2)), den).unwrap();
        assert!(heis.g().eq_rational(&g));
    }

    #[test]
    fn invalid_map_detected() {
        // f = z, g = w² fails at first order
        let alpha = VarAlphabet::new(2);
        let w = RFunc::var(alpha, alpha.w());
        let f = CRMap::new(
            Model::Heisenberg,
            2,
            2,
            vec![RFunc::var(alpha, alpha.z(0)), w.mul(&w).unwrap()],
        )
        .unwrap();
        assert!(!f.cr_validity().unwrap());
    }

    #[test]
    fn corrupted_whitney_fails_validity() {
        let heis = whitney3_heis();
        // perturb one coefficient of one numerator by 1/1000
        let mut comps = heis.components().to_vec();
        let c0 = &comps[0];
        let bump = MPoly::linear(
            c0.alphabet(),
            c0.alphabet().z(0),
            ExactComplex::from_ratio(1, 1000),
        );
        let num = c0.num().add(&bump).unwrap();
        comps[0] = RFunc::new(num, c0.den().clone()).unwrap();
        let bad = CRMap::new(Model::Heisenberg, 3, 5, comps).unwrap();
        assert!(!bad.cr_validity().unwrap());
    }

    #[test]
    fn dangelo_exact_circle_parameter_enforced() {
        assert!(dangelo_ball(&Rational::from((1, 2)), &Rational::from((1, 2))).is_err());
        let f = dangelo_ball(&Rational::from((3, 5)), &Rational::from((4, 5))).unwrap();
        assert!(f.cr_validity().unwrap());
        let heis = catalog(&CatalogMap::DAngelo {
            cos: Rational::from((3, 5)),
            sin: Rational::from((4, 5)),
        })
        .unwrap();
        assert!(heis.cr_validity().unwrap());
        assert!(heis.is_based());
    }

    #[test]
    fn cayley_roundtrip_is_identity() {
        let heis = whitney3_heis();
        let ball = cayley_conjugate(&heis, CayleyDirection::HeisenbergToBall, false).unwrap();
        assert!(ball.cr_validity().unwrap());
        let back = cayley_conjugate(&ball, CayleyDirection::BallToHeisenberg, false).unwrap();
        for (a, b) in heis.components().iter().zip(back.components()) {
            assert!(a.eq_rational(b));
        }
    }

    #[test]
    fn automorphisms_preserve_validity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let f = whitney3_heis();
        for _ in 0..6 {
            let pre = sampling::random_automorphism(&mut rng, 3);
            let post = sampling::random_automorphism(&mut rng, 5);
            assert!(pre.as_crmap(3, Side::Source).unwrap().cr_validity().unwrap());
            assert!(post.as_crmap(5, Side::Target).unwrap().cr_validity().unwrap());
            let g = f.compose_auto(Some(&pre), Some(&post)).unwrap();
            assert!(g.cr_validity().unwrap());
        }
    }

    #[test]
    fn fractional_pair_sides_are_inverse() {
        // τ ∘ σ = id on ∂H_3 for the same c
        let c = vec![
            ExactComplex::from_ratios(1, 3, -1, 4),
            ExactComplex::from_ratios(0, 1, 2, 5),
        ];
        let a = HnAutomorphism::FractionalPair { c };
        let sigma = a.as_crmap(3, Side::Source).unwrap();
        let composed = sigma.compose_auto(None, Some(&a)).unwrap();
        let alpha = composed.alphabet();
        for (j, comp) in composed.components().iter().enumerate() {
            let var = RFunc::var(alpha, j);
            assert!(comp.eq_rational(&var), "component {j} not identity");
        }
    }

    #[test]
    fn translation_composition_fixes_origin() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let f = whitney3_heis();
        let p = sampling::random_hpoint(&mut rng, 3, 6);
        let sigma = HnAutomorphism::SourceTranslation { p: p.clone() };
        let moved = f.compose_auto(Some(&sigma), None).unwrap();
        let rebased = moved.rebase_target().unwrap();
        assert!(rebased.is_based());
        assert!(rebased.cr_validity().unwrap());
    }

    #[test]
    fn random_exact_unitaries_are_unitary() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..5 {
            let u = sampling::random_exact_unitary(&mut rng, 3);
            assert!(is_exact_unitary(&u));
        }
    }

    #[test]
    fn cayley_identity_on_complexified_constraint() {
        // |2z|² + |1+iw|² = |1−iw|² after substituting (w−η)/2i = z·ζ,
        // i.e. 4 z·ζ + (1+iw)(1−iη) − (1−iw)(1+iη) ⋯ checked as the exact
        // polynomial identity 4zζ + (1+iw)(1−iη) = (1−iw)(1+iη) + 2i(w−η)
        // reduced on η = w − 2i z·ζ — equivalently: the Heisenberg validity
        // of ρ_n as a map into the ball-defining identity. Stated directly:
        let alpha = VarAlphabet::new(3);
        let mut z_dot_zeta = MPoly::zero(alpha);
        for j in 0..alpha.n_z() {
            let mut e = alpha.zero_expo();
            e[alpha.z(j)] = 1;
            e[alpha.zeta(j)] = 1;
            z_dot_zeta.add_term(e, ExactComplex::one());
        }
        // η = w − 2i z·ζ
        let eta = MPoly::linear(alpha, alpha.w(), ExactComplex::one())
            .sub(&z_dot_zeta.scale(&ExactComplex::two_i()))
            .unwrap();
        let one = MPoly::one(alpha);
        let iw = MPoly::linear(alpha, alpha.w(), ExactComplex::i());
        let i_eta = eta.scale(&ExactComplex::i());
        // |2z|² ↦ 4 z·ζ ; |1±iw|² ↦ (1±iw)(1∓iη)
        let lhs = z_dot_zeta
            .scale(&ExactComplex::from_int(4))
            .add(&one.add(&iw).unwrap().mul(&one.sub(&i_eta).unwrap()).unwrap())
            .unwrap();
        let rhs = one
            .sub(&iw)
            .unwrap()
            .mul(&one.add(&i_eta).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
