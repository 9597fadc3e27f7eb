//! Linear algebra over the two coefficient layers.
//!
//! Exact routines (rank, span growth, solving) use Gaussian elimination over
//! the complex rationals, where any nonzero pivot is a valid pivot. Floating
//! routines (unitary completion, Hermitian eigendecomposition, unitary
//! pairing) work at the pipeline precision with explicit thresholds; the
//! matrices involved are tiny, so cyclic Jacobi is both adequate and easy to
//! make deterministic.

use rug::Float;

use crate::bigfloat::{pow2, BigComplex};
use crate::exact::ExactComplex;

// ---------------------------------------------------------------------------
// exact layer
// ---------------------------------------------------------------------------

/// Rank of a matrix over the exact complex rationals.
pub fn exact_rank(rows: &[Vec<ExactComplex>]) -> usize {
    let mut span = ExactSpan::new(rows.first().map_or(0, Vec::len));
    for r in rows {
        span.insert(r.clone());
    }
    span.dim()
}

/// Incremental row-echelon span over [`ExactComplex`]; used for the Lamel
/// subspaces `E_k(p)` where dimensions are read off as vectors arrive.
pub struct ExactSpan {
    width: usize,
    // echelon basis rows, each with its leading column
    rows: Vec<(usize, Vec<ExactComplex>)>,
}

impl ExactSpan {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis and insert the remainder if nonzero.
    /// Returns `true` when the span grew.
    pub fn insert(&mut self, mut v: Vec<ExactComplex>) -> bool {
        assert_eq!(v.len(), self.width);
        for (lead, row) in &self.rows {
            if !v[*lead].is_zero() {
                let f = v[*lead].clone();
                for (x, r) in v.iter_mut().zip(row.iter()) {
                    *x = &*x - &(&f * r);
                }
            }
        }
        if let Some(lead) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[lead].inv().expect("nonzero");
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
            self.rows.push((lead, v));
            self.rows.sort_by_key(|(l, _)| *l);
            // re-reduce upper rows so reductions stay canonical
            true
        } else {
            false
        }
    }
}

/// Solve `P · X = B` for square exact `P`; `None` when `P` is singular.
pub fn exact_solve(p: &[Vec<ExactComplex>], b: &[Vec<ExactComplex>]) -> Option<Vec<Vec<ExactComplex>>> {
    let n = p.len();
    let m = if n == 0 { return Some(Vec::new()) } else { b[0].len() };
    let mut a: Vec<Vec<ExactComplex>> = p
        .iter()
        .zip(b.iter())
        .map(|(pr, br)| pr.iter().chain(br.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].inv().expect("nonzero pivot");
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for cdx in col..n + m {
                    let s = &f * &a[col][cdx];
                    a[r][cdx] = &a[r][cdx] - &s;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// floating layer
// ---------------------------------------------------------------------------

/// Dense row-major matrix of [`BigComplex`].
#[derive(Clone, Debug)]
pub struct BigMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigComplex>,
}

impl BigMat {
    pub fn zero(rows: usize, cols: usize, prec: u32) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigComplex::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zero(n, n, prec);
        for i in 0..n {
            *m.at_mut(i, i) = BigComplex::one(prec);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigComplex {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<BigComplex> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigComplex> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let prec = self
            .data
            .iter()
            .chain(rhs.data.iter())
            .map(BigComplex::prec)
            .max()
            .unwrap_or(64);
        let mut out = Self::zero(self.rows, rhs.cols, prec);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigComplex::zero(prec);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(rhs.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn hermitian_transpose(&self) -> Self {
        let prec = self.data.iter().map(BigComplex::prec).max().unwrap_or(64);
        let mut out = Self::zero(self.cols, self.rows, prec);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn max_abs(&self) -> Float {
        let prec = self.data.iter().map(BigComplex::prec).max().unwrap_or(64);
        let mut m = Float::new(prec);
        for v in &self.data {
            let a = v.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn frobenius(&self) -> Float {
        let prec = self.data.iter().map(BigComplex::prec).max().unwrap_or(64);
        let mut acc = Float::new(prec);
        for v in &self.data {
            acc += v.norm_sqr();
        }
        acc.sqrt()
    }

    /// `max |(M M* − I)_{ij}|`, the unitarity defect.
    pub fn unitary_defect(&self) -> Float {
        assert_eq!(self.rows, self.cols);
        let prod = self.mul(&self.hermitian_transpose());
        let prec = prod.data.iter().map(BigComplex::prec).max().unwrap_or(64);
        let mut m = Float::new(prec);
        for i in 0..prod.rows {
            for j in 0..prod.cols {
                let mut d = prod.at(i, j).clone();
                if i == j {
                    d = d.sub(&BigComplex::one(prec));
                }
                let a = d.abs();
                if a > m {
                    m = a;
                }
            }
        }
        m
    }
}

fn hdot(u: &[BigComplex], v: &[BigComplex]) -> BigComplex {
    let prec = u.iter().chain(v.iter()).map(BigComplex::prec).max().unwrap_or(64);
    let mut acc = BigComplex::zero(prec);
    for (a, b) in u.iter().zip(v.iter()) {
        acc = acc.add(&a.mul(&b.conj()));
    }
    acc
}

fn vnorm(u: &[BigComplex]) -> Float {
    hdot(u, u).re().clone().sqrt()
}

/// Extend a (possibly empty) orthonormal family of rows to an orthonormal
/// basis of `C^dim` by projecting standard basis vectors in the given order.
/// Candidates whose residual is below `tol` are skipped.
pub fn gram_schmidt_complete(
    mut family: Vec<Vec<BigComplex>>,
    dim: usize,
    order: &[usize],
    prec: u32,
    tol: &Float,
) -> Vec<Vec<BigComplex>> {
    for &s in order {
        if family.len() == dim {
            break;
        }
        let mut v: Vec<BigComplex> = (0..dim)
            .map(|t| {
                if t == s {
                    BigComplex::one(prec)
                } else {
                    BigComplex::zero(prec)
                }
            })
            .collect();
        for q in &family {
            let c = hdot(&v, q);
            for (x, y) in v.iter_mut().zip(q.iter()) {
                *x = x.sub(&c.mul(y));
            }
        }
        let n = vnorm(&v);
        if n > *tol {
            let inv = BigComplex::from_float(n).recip();
            for x in v.iter_mut() {
                *x = x.mul(&inv);
            }
            family.push(v);
        }
    }
    assert_eq!(family.len(), dim, "unitary completion failed");
    family
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations: returns `(eigenvalues, Q)` with `Q* H Q` diagonal and the
/// eigenvalues sorted descending (ties broken by original index). Column
/// phases are fixed by making the largest-modulus entry of each eigenvector
/// real and positive.
pub fn jacobi_hermitian(h: &BigMat, prec: u32) -> (Vec<Float>, BigMat) {
    let n = h.rows;
    assert_eq!(n, h.cols);
    let mut a = h.clone();
    let mut q = BigMat::identity(n, prec);
    if n <= 1 {
        let ev = if n == 1 {
            vec![a.at(0, 0).re().clone()]
        } else {
            vec![]
        };
        return (ev, q);
    }
    let scale = {
        let m = a.max_abs();
        if m.is_zero() {
            Float::with_val(prec, 1)
        } else {
            m
        }
    };
    let stop = scale * pow2(-(prec as i32) + 8, prec);
    for _sweep in 0..200 {
        let mut off = Float::new(prec);
        for p in 0..n {
            for r in (p + 1)..n {
                let b = a.at(p, r).abs();
                if b > off {
                    off = b;
                }
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let bpq = a.at(p, r).clone();
                let babs = bpq.abs();
                if babs <= stop {
                    continue;
                }
                // phase: b = |b| e^{iφ}
                let phase = {
                    let inv = Float::with_val(prec, 1) / babs.clone();
                    bpq.scale(&inv)
                };
                let app = a.at(p, p).re().clone();
                let aqq = a.at(r, r).re().clone();
                // tan(2θ) = 2|b| / (app - aqq)
                let diff = app - aqq;
                let t: Float = if diff.is_zero() {
                    Float::with_val(prec, 1)
                } else {
                    let tau: Float = diff / (Float::with_val(prec, 2) * babs.clone());
                    let root = (tau.clone().square() + Float::with_val(prec, 1)).sqrt();
                    let denom = if tau.is_sign_positive() {
                        tau.clone() + root
                    } else {
                        tau.clone() - root
                    };
                    Float::with_val(prec, 1) / denom
                };
                let c = (t.clone().square() + Float::with_val(prec, 1))
                    .sqrt()
                    .recip();
                let s = t * c.clone();
                // J acts on columns p,r:  col_p' = c·col_p + s·conj(phase)·col_r
                //                        col_r' = -s·phase·col_p + c·col_r
                let cs = BigComplex::from_float(c.clone());
                let sn_p = phase.conj().scale(&s); // multiplies col_r into col_p'
                let sn_m = phase.scale(&s).neg(); // multiplies col_p into col_r'
                // A <- J* A J ; Q <- Q J
                for i in 0..n {
                    let aip = a.at(i, p).clone();
                    let air = a.at(i, r).clone();
                    *a.at_mut(i, p) = aip.mul(&cs).add(&air.mul(&sn_p));
                    *a.at_mut(i, r) = aip.mul(&sn_m).add(&air.mul(&cs));
                }
                for j in 0..n {
                    let apj = a.at(p, j).clone();
                    let arj = a.at(r, j).clone();
                    *a.at_mut(p, j) = apj.mul(&cs.conj()).add(&arj.mul(&sn_p.conj()));
                    *a.at_mut(r, j) = apj.mul(&sn_m.conj()).add(&arj.mul(&cs.conj()));
                }
                for i in 0..n {
                    let qip = q.at(i, p).clone();
                    let qir = q.at(i, r).clone();
                    *q.at_mut(i, p) = qip.mul(&cs).add(&qir.mul(&sn_p));
                    *q.at_mut(i, r) = qip.mul(&sn_m).add(&qir.mul(&cs));
                }
            }
        }
    }
    let mut ev: Vec<Float> = (0..n).map(|i| a.at(i, i).re().clone()).collect();
    // sort eigenvalues descending, ties by original index
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| ev[j].partial_cmp(&ev[i]).unwrap().then(i.cmp(&j)));
    let mut q2 = BigMat::zero(n, n, prec);
    let mut ev2 = Vec::with_capacity(n);
    for (newc, &oldc) in idx.iter().enumerate() {
        ev2.push(ev[oldc].clone());
        for i in 0..n {
            *q2.at_mut(i, newc) = q.at(i, oldc).clone();
        }
    }
    ev = ev2;
    // deterministic phases
    for c in 0..n {
        let col = q2.col(c);
        let mut best = 0;
        let mut besta = col[0].abs();
        for (i, v) in col.iter().enumerate().skip(1) {
            let a_ = v.abs();
            if a_ > besta {
                best = i;
                besta = a_;
            }
        }
        if !besta.is_zero() {
            let inv = Float::with_val(prec, 1) / besta;
            let ph = col[best].scale(&inv).conj();
            for i in 0..n {
                *q2.at_mut(i, c) = q2.at(i, c).mul(&ph);
            }
        }
    }
    (ev, q2)
}

/// Given two column families with equal Gram matrices, build a unitary `W`
/// with `W·Φ = Ψ` (pivoted Gram–Schmidt pairing, then completion on the
/// orthogonal complements).
pub fn pair_unitary(phi: &BigMat, psi: &BigMat, prec: u32, tol: &Float) -> BigMat {
    let nr = phi.rows;
    assert_eq!(psi.rows, nr);
    assert_eq!(psi.cols, phi.cols);
    let mut qs: Vec<Vec<BigComplex>> = Vec::new();
    let mut ps: Vec<Vec<BigComplex>> = Vec::new();
    let mut remaining: Vec<usize> = (0..phi.cols).collect();
    while !remaining.is_empty() && qs.len() < nr {
        // pivot: column with the largest residual after projecting out qs
        let mut best = None;
        let mut bestn = Float::new(prec);
        for &m in &remaining {
            let mut v = phi.col(m);
            for qv in &qs {
                let c = hdot(&v, qv);
                for (x, y) in v.iter_mut().zip(qv.iter()) {
                    *x = x.sub(&c.mul(y));
                }
            }
            let n = vnorm(&v);
            if n > bestn {
                bestn = n.clone();
                best = Some(m);
            }
        }
        let Some(m) = best else { break };
        if bestn <= *tol {
            break;
        }
        let mut v = phi.col(m);
        let mut v2 = psi.col(m);
        for (qv, pv) in qs.iter().zip(ps.iter()) {
            let c = hdot(&v, qv);
            for (x, y) in v.iter_mut().zip(qv.iter()) {
                *x = x.sub(&c.mul(y));
            }
            for (x, y) in v2.iter_mut().zip(pv.iter()) {
                *x = x.sub(&c.mul(y));
            }
        }
        let n1 = vnorm(&v);
        let n2 = vnorm(&v2);
        let i1 = BigComplex::from_float(n1).recip();
        let i2 = BigComplex::from_float(n2).recip();
        qs.push(v.iter().map(|x| x.mul(&i1)).collect());
        ps.push(v2.iter().map(|x| x.mul(&i2)).collect());
        remaining.retain(|&x| x != m);
    }
    let order: Vec<usize> = (0..nr).collect();
    let qs2 = gram_schmidt_complete(qs, nr, &order, prec, tol);
    let ps2 = gram_schmidt_complete(ps, nr, &order, prec, tol);
    // W = Σ p q*
    let mut w = BigMat::zero(nr, nr, prec);
    for (qv, pv) in qs2.iter().zip(ps2.iter()) {
        for i in 0..nr {
            for j in 0..nr {
                let add = pv[i].mul(&qv[j].conj());
                *w.at_mut(i, j) = w.at(i, j).add(&add);
            }
        }
    }
    w
}

/// Numerical rank by full-pivot elimination: pivots below `threshold` stop
/// the elimination.
pub fn rank_with_threshold(m: &BigMat, threshold: &Float) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    let mut live_rows: Vec<usize> = (0..a.rows).collect();
    let mut live_cols: Vec<usize> = (0..a.cols).collect();
    while !live_rows.is_empty() && !live_cols.is_empty() {
        // full pivot
        let (mut bi, mut bj) = (live_rows[0], live_cols[0]);
        let mut bv = a.at(bi, bj).abs();
        for &i in &live_rows {
            for &j in &live_cols {
                let v = a.at(i, j).abs();
                if v > bv {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if bv <= *threshold {
            break;
        }
        rank += 1;
        let pinv = a.at(bi, bj).recip();
        for &i in &live_rows {
            if i == bi {
                continue;
            }
            let f = a.at(i, bj).mul(&pinv);
            for &j in &live_cols {
                let s = f.mul(a.at(bi, j));
                *a.at_mut(i, j) = a.at(i, j).sub(&s);
            }
        }
        live_rows.retain(|&i| i != bi);
        live_cols.retain(|&j| j != bj);
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ec(p: i64, q: i64) -> ExactComplex {
        ExactComplex::from_ratio(p, q)
    }

    #[test]
    fn exact_rank_detects_dependence() {
        let rows = vec![
            vec![ec(1, 1), ec(2, 1)],
            vec![ec(2, 1), ec(4, 1)],
            vec![ec(0, 1), ec(1, 1)],
        ];
        assert_eq!(exact_rank(&rows), 2);
    }

    #[test]
    fn exact_solve_inverts() {
        let p = vec![vec![ec(2, 1), ec(1, 1)], vec![ec(1, 1), ec(1, 1)]];
        let b = vec![vec![ec(1, 1)], vec![ec(0, 1)]];
        let x = exact_solve(&p, &b).unwrap();
        assert_eq!(x[0][0], ec(1, 1));
        assert_eq!(x[1][0], ec(-1, 1));
    }

    #[test]
    fn jacobi_diag_2x2() {
        // A = [[2, 0], [0, 0]] is already diagonal: U = I, mu1 = 2.
        let prec = 192;
        let mut h = BigMat::zero(2, 2, prec);
        *h.at_mut(0, 0) = BigComplex::from_f64(2.0, 0.0, prec);
        let (ev, q) = jacobi_hermitian(&h, prec);
        assert!((ev[0].to_f64() - 2.0).abs() < 1e-40);
        assert!(ev[1].to_f64().abs() < 1e-40);
        assert!(q.unitary_defect() < pow2(-150, prec));
        assert!((q.at(0, 0).re().to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn jacobi_hermitian_3x3() {
        let prec = 256;
        // H = V D V* for a known unitary-ish construction; verify Q*HQ ≈ D.
        let mut h = BigMat::zero(3, 3, prec);
        let e = |re: f64, im: f64| BigComplex::from_f64(re, im, prec);
        // Hermitian with distinct eigenvalues
        *h.at_mut(0, 0) = e(2.0, 0.0);
        *h.at_mut(1, 1) = e(-1.0, 0.0);
        *h.at_mut(2, 2) = e(0.5, 0.0);
        *h.at_mut(0, 1) = e(0.3, 0.4);
        *h.at_mut(1, 0) = e(0.3, -0.4);
        *h.at_mut(0, 2) = e(-0.2, 0.1);
        *h.at_mut(2, 0) = e(-0.2, -0.1);
        *h.at_mut(1, 2) = e(0.0, 0.7);
        *h.at_mut(2, 1) = e(0.0, -0.7);
        let (ev, q) = jacobi_hermitian(&h, prec);
        assert!(q.unitary_defect() < pow2(-200, prec));
        // residual H Q - Q D
        let hq = h.mul(&q);
        let mut worst = Float::new(prec);
        for j in 0..3 {
            for i in 0..3 {
                let d = hq.at(i, j).sub(&q.at(i, j).scale(&ev[j]));
                let a = d.abs();
                if a > worst {
                    worst = a;
                }
            }
        }
        assert!(worst < pow2(-200, prec), "worst {worst}");
        assert!(ev[0] >= ev[1] && ev[1] >= ev[2]);
        // exact-input trace is 1.5; eigenvalue sum must match at precision
        let mut tr = Float::new(prec);
        for e in &ev {
            tr += e;
        }
        tr -= Float::with_val(prec, 1.5f64);
        assert!(tr.abs() < pow2(-200, prec));
    }

    #[test]
    fn rank_thresholding() {
        let prec = 128;
        let mut m = BigMat::zero(2, 3, prec);
        *m.at_mut(0, 0) = BigComplex::from_f64(1.0, 0.0, prec);
        *m.at_mut(0, 1) = BigComplex::from_f64(2.0, 0.0, prec);
        *m.at_mut(1, 0) = BigComplex::from_f64(0.5, 0.0, prec);
        *m.at_mut(1, 1) = BigComplex::from_f64(1.0, 0.0, prec);
        let t = pow2(-100, prec);
        assert_eq!(rank_with_threshold(&m, &t), 1);
        *m.at_mut(1, 2) = BigComplex::from_f64(1e-20, 0.0, prec);
        assert_eq!(rank_with_threshold(&m, &t), 2);
    }

    #[test]
    fn pair_unitary_reproduces_rotation() {
        let prec = 192;
        // Φ: two columns in C^2; Ψ = U Φ for a known unitary U.
        let mut phi = BigMat::zero(2, 2, prec);
        *phi.at_mut(0, 0) = BigComplex::from_f64(0.6, 0.1, prec);
        *phi.at_mut(1, 0) = BigComplex::from_f64(-0.3, 0.2, prec);
        *phi.at_mut(0, 1) = BigComplex::from_f64(0.0, 0.9, prec);
        *phi.at_mut(1, 1) = BigComplex::from_f64(0.4, 0.0, prec);
        // rotation kept unitary at working precision (f64 cos/sin would
        // cap the whole test at ~1e-17)
        let th = Float::with_val(prec, 7) / Float::with_val(prec, 10);
        let (c, s) = (th.clone().cos(), th.sin());
        let mut u = BigMat::zero(2, 2, prec);
        *u.at_mut(0, 0) = BigComplex::from_float(c.clone());
        *u.at_mut(0, 1) = BigComplex::from_float(-s.clone());
        *u.at_mut(1, 0) = BigComplex::from_float(s);
        *u.at_mut(1, 1) = BigComplex::from_float(c);
        let psi = u.mul(&phi);
        let tol = pow2(-90, prec);
        let w = pair_unitary(&phi, &psi, prec, &tol);
        assert!(w.unitary_defect() < pow2(-100, prec));
        let resid = w.mul(&phi);
        let mut worst = Float::new(prec);
        for i in 0..2 {
            for j in 0..2 {
                let d = resid.at(i, j).sub(psi.at(i, j)).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        assert!(worst < pow2(-100, prec));
    }
}
