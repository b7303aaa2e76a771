//! Truncated-Fock master equation for the two polaritons linked by
//! resonance (e), used as an independent check of the perturbative spectra.
//!
//! The Hamiltonian and the thermal dissipators conserve `n₁ + 2n₂` on each
//! side of the density matrix, so the Liouvillian is block diagonal in the
//! difference of ket and bra weights. The steady state lives in block 0 and
//! the regression source `[c₂†, ρ]` in block +2.

use crate::keldysh::EffectiveCouplings;
use crate::polariton::{cavity_green_with, bare_retarded, ModeIndex, PolaritonSpectrum};
use crate::{Complex64, Error, Result};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Blocks up to this dimension are solved by dense LU.
pub const DENSE_LIMIT: usize = 2500;
/// Top-level population accepted by the truncation certificate.
pub const TOP_LEVEL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedModel {
    pub omega_1: f64,
    pub omega_2: f64,
    pub g_e: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub n_1: f64,
    pub n_2: f64,
    pub n_max_1: usize,
    pub n_max_2: usize,
}

impl ReducedModel {
    /// Takes `(−,π)`, `(−,2π)` and `g̃_e` from the linear spectrum as they are.
    pub fn from_spectrum(spec: &PolaritonSpectrum, couplings: &EffectiveCouplings, n_max_1: usize, n_max_2: usize) -> Result<Self> {
        let m1 = spec.mode(ModeIndex::MINUS_PI);
        let m2 = spec.mode(ModeIndex::MINUS_2PI);
        ReducedModel {
            omega_1: m1.omega,
            omega_2: m2.omega,
            g_e: couplings.e,
            kappa_1: m1.kappa,
            kappa_2: m2.kappa,
            n_1: m1.n_occ,
            n_2: m2.n_occ,
            n_max_1,
            n_max_2,
        }
        .checked()
    }

    pub fn checked(self) -> Result<Self> {
        if self.n_max_1 < 2 || self.n_max_2 < 2 {
            return Err(Error::Invalid(format!(
                "Fock truncation needs at least 3 levels per mode, got {} and {}",
                self.n_max_1 + 1,
                self.n_max_2 + 1
            )));
        }
        if !(self.kappa_1 > 0.0 && self.kappa_2 > 0.0 && self.n_1 >= 0.0 && self.n_2 >= 0.0) {
            return Err(Error::Invalid("dampings must be positive and occupations non-negative".into()));
        }
        Ok(self)
    }

    pub fn with_truncation(self, n_max_1: usize, n_max_2: usize) -> Result<Self> {
        ReducedModel { n_max_1, n_max_2, ..self }.checked()
    }

    pub fn dim(&self) -> usize {
        (self.n_max_1 + 1) * (self.n_max_2 + 1)
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.n_max_2 + 1) + b
    }

    fn weight(&self, i: usize) -> i64 {
        let (a, b) = (i / (self.n_max_2 + 1), i % (self.n_max_2 + 1));
        (a + 2 * b) as i64
    }

    fn lower_1(&self) -> SparseOp {
        let mut e = Vec::new();
        for a in 1..=self.n_max_1 {
            for b in 0..=self.n_max_2 {
                e.push((self.idx(a - 1, b), self.idx(a, b), Complex64::new((a as f64).sqrt(), 0.0)));
            }
        }
        SparseOp::new(self.dim(), e)
    }

    fn lower_2(&self) -> SparseOp {
        let mut e = Vec::new();
        for a in 0..=self.n_max_1 {
            for b in 1..=self.n_max_2 {
                e.push((self.idx(a, b - 1), self.idx(a, b), Complex64::new((b as f64).sqrt(), 0.0)));
            }
        }
        SparseOp::new(self.dim(), e)
    }

    fn hamiltonian(&self) -> SparseOp {
        let mut e = Vec::new();
        for a in 0..=self.n_max_1 {
            for b in 0..=self.n_max_2 {
                let i = self.idx(a, b);
                e.push((i, i, Complex64::new(self.omega_1 * a as f64 + self.omega_2 * b as f64, 0.0)));
                // c₂†c₁c₁ |a,b⟩ = sqrt(a(a−1)(b+1)) |a−2,b+1⟩, plus its adjoint.
                if a >= 2 && b < self.n_max_2 {
                    let j = self.idx(a - 2, b + 1);
                    let v = Complex64::new(self.g_e * ((a * (a - 1) * (b + 1)) as f64).sqrt(), 0.0);
                    e.push((j, i, v));
                    e.push((i, j, v));
                }
            }
        }
        SparseOp::new(self.dim(), e)
    }

    fn jumps(&self) -> Vec<(f64, SparseOp)> {
        let (c1, c2) = (self.lower_1(), self.lower_2());
        vec![
            (self.kappa_1 * (self.n_1 + 1.0), c1.clone()),
            (self.kappa_1 * self.n_1, c1.adjoint()),
            (self.kappa_2 * (self.n_2 + 1.0), c2.clone()),
            (self.kappa_2 * self.n_2, c2.adjoint()),
        ]
    }

    /// Liouvillian restricted to ket-minus-bra weight `s`.
    pub fn liouvillian_block(&self, s: i64) -> LiouvillianBlock {
        let d = self.dim();
        let mut pairs = Vec::new();
        let mut pos = vec![usize::MAX; d * d];
        for i in 0..d {
            for j in 0..d {
                if self.weight(i) - self.weight(j) == s {
                    pos[i * d + j] = pairs.len();
                    pairs.push((i, j));
                }
            }
        }
        let jumps = self.jumps();
        let mut h_eff = self.hamiltonian().entries;
        for (rate, j) in &jumps {
            for (r, c, v) in j.adjoint().matmul(j).entries {
                h_eff.push((r, c, Complex64::new(0.0, -0.5 * rate) * v));
            }
        }
        let h_eff = SparseOp::new(d, h_eff);
        let mut trip = Vec::new();
        for (col, &(i, j)) in pairs.iter().enumerate() {
            let mut put = |k: usize, l: usize, v: Complex64| {
                let row = pos[k * d + l];
                debug_assert!(row != usize::MAX, "Liouvillian left its weight block");
                trip.push((row, col, v));
            };
            for &(k, h) in &h_eff.cols[i] {
                put(k, j, -I * h);
            }
            for &(l, h) in &h_eff.cols[j] {
                put(i, l, I * h.conj());
            }
            for (rate, op) in &jumps {
                if *rate == 0.0 {
                    continue;
                }
                for &(k, a) in &op.cols[i] {
                    for &(l, b) in &op.cols[j] {
                        put(k, l, *rate * a * b.conj());
                    }
                }
            }
        }
        let matrix = Csr::from_triplets(pairs.len(), trip);
        LiouvillianBlock { dim_h: d, pairs, pos, matrix }
    }

    /// Steady state, checked for trace, hermiticity, positivity and residual.
    pub fn steady_state(&self) -> Result<SteadyState> {
        let block = self.liouvillian_block(0);
        let n = block.pairs.len();
        let anchor = block.pos[0];
        let trace_cols: Vec<usize> = (0..self.dim()).map(|i| block.pos[i * self.dim() + i]).collect();
        let op = |x: &DVector<Complex64>| {
            let mut y = block.matrix.mul(x);
            y[anchor] = trace_cols.iter().map(|&c| x[c]).sum();
            y
        };
        let mut rhs = DVector::from_element(n, ZERO);
        rhs[anchor] = Complex64::new(1.0, 0.0);
        let x = if n <= DENSE_LIMIT {
            let mut m = block.matrix.to_dense(n);
            for c in 0..n {
                m[(anchor, c)] = ZERO;
            }
            for &c in &trace_cols {
                m[(anchor, c)] = Complex64::new(1.0, 0.0);
            }
            m.lu().solve(&rhs).ok_or_else(|| Error::NoConvergence("singular steady-state system".into()))?
        } else {
            gmres(&op, &rhs, 1e-10, 200, 50)?
        };
        let rho = block.to_matrix(&x);
        let residual = block.matrix.mul(&x).norm();
        let trace: Complex64 = (0..self.dim()).map(|i| rho[(i, i)]).sum();
        let herm = (&rho - rho.adjoint()).norm();
        let min_eig = nalgebra::SymmetricEigen::new((&rho + rho.adjoint()) * Complex64::new(0.5, 0.0))
            .eigenvalues
            .min();
        let st = SteadyState { rho, residual, trace, hermiticity_error: herm, min_eigenvalue: min_eig };
        if residual > 1e-8 || (trace - 1.0).norm() > 1e-10 || herm > 1e-10 || min_eig < -1e-10 {
            return Err(Error::NoConvergence(format!(
                "steady state failed its checks: residual {residual:.2e}, trace {trace}, hermiticity {herm:.2e}, min eigenvalue {min_eig:.2e}"
            )));
        }
        Ok(st)
    }

    /// Populations `(P₁(n_max_1), P₂(n_max_2))` of the top Fock levels.
    pub fn top_level_populations(&self, st: &SteadyState) -> (f64, f64) {
        let (mut p1, mut p2) = (0.0, 0.0);
        for a in 0..=self.n_max_1 {
            for b in 0..=self.n_max_2 {
                let p = st.rho[(self.idx(a, b), self.idx(a, b))].re;
                if a == self.n_max_1 {
                    p1 += p;
                }
                if b == self.n_max_2 {
                    p2 += p;
                }
            }
        }
        (p1, p2)
    }

    /// `(⟨c₁†c₁⟩, ⟨c₂†c₂⟩)`.
    pub fn mean_occupations(&self, st: &SteadyState) -> (f64, f64) {
        let (mut n1, mut n2) = (0.0, 0.0);
        for a in 0..=self.n_max_1 {
            for b in 0..=self.n_max_2 {
                let p = st.rho[(self.idx(a, b), self.idx(a, b))].re;
                n1 += a as f64 * p;
                n2 += b as f64 * p;
            }
        }
        (n1, n2)
    }

    /// `⟨H⟩` in the steady state.
    pub fn energy(&self, st: &SteadyState) -> f64 {
        let h = self.hamiltonian();
        h.entries.iter().map(|&(r, c, v)| (v * st.rho[(c, r)]).re).sum()
    }

    /// `G_R(ω) = i Tr[c₂ (L + iω)⁻¹ [c₂†, ρ]]` on every grid point.
    pub fn retarded_correlation(&self, st: &SteadyState, omegas: &[f64]) -> Result<Vec<Complex64>> {
        let block = self.liouvillian_block(2);
        let c2 = self.lower_2();
        let c2d = c2.adjoint();
        let src = c2d.left(&st.rho) - c2d.right(&st.rho);
        let x = DVector::from_iterator(block.pairs.len(), block.pairs.iter().map(|&(i, j)| src[(i, j)]));
        let n = block.pairs.len();
        let dense = (n <= DENSE_LIMIT).then(|| block.matrix.to_dense(n));
        let vals = crate::par::map_range(omegas.len(), |k| -> Result<Complex64> {
            let shift = I * omegas[k];
            let y = match &dense {
                Some(m) => {
                    let mut a = m.clone();
                    for i in 0..n {
                        a[(i, i)] += shift;
                    }
                    a.lu().solve(&x).ok_or_else(|| Error::NoConvergence(format!("singular resolvent at omega={}", omegas[k])))?
                }
                None => gmres(&|v: &DVector<Complex64>| block.matrix.mul(v) + v * shift, &x, 1e-10, 200, 50)?,
            };
            let mut tr = ZERO;
            for (p, &(i, j)) in block.pairs.iter().enumerate() {
                for &(r, v) in &c2.cols[i] {
                    if r == j {
                        tr += v * y[p];
                    }
                }
            }
            Ok(I * tr)
        });
        vals.into_iter().collect()
    }
}

/// Operator on the truncated Hilbert space stored by columns.
#[derive(Debug, Clone)]
struct SparseOp {
    n: usize,
    entries: Vec<(usize, usize, Complex64)>,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOp {
    fn new(n: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        let mut cols = vec![Vec::new(); n];
        for &(r, c, v) in &entries {
            cols[c].push((r, v));
        }
        SparseOp { n, entries, cols }
    }

    fn adjoint(&self) -> Self {
        SparseOp::new(self.n, self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect())
    }

    fn matmul(&self, other: &SparseOp) -> Self {
        let mut e = Vec::new();
        for (c, col) in other.cols.iter().enumerate() {
            for &(k, b) in col {
                for &(r, a) in &self.cols[k] {
                    e.push((r, c, a * b));
                }
            }
        }
        SparseOp::new(self.n, e)
    }

    fn left(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(self.n, self.n, ZERO);
        for &(r, k, v) in &self.entries {
            for c in 0..self.n {
                out[(r, c)] += v * m[(k, c)];
            }
        }
        out
    }

    fn right(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(self.n, self.n, ZERO);
        for &(k, c, v) in &self.entries {
            for r in 0..self.n {
                out[(r, c)] += m[(r, k)] * v;
            }
        }
        out
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<Complex64>,
}

impl Csr {
    fn from_triplets(n: usize, mut trip: Vec<(usize, usize, Complex64)>) -> Self {
        trip.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0; n + 1];
        let (mut col, mut val): (Vec<usize>, Vec<Complex64>) = (Vec::new(), Vec::new());
        let mut last = (usize::MAX, usize::MAX);
        for (r, c, v) in trip {
            if (r, c) == last {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
                row_ptr[r + 1] += 1;
                last = (r, c);
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr { n, row_ptr, col, val }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut y = DVector::from_element(x.len(), ZERO);
        for r in 0..self.n {
            let mut s = ZERO;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.val[p] * x[self.col[p]];
            }
            y[r] = s;
        }
        y
    }

    pub fn to_dense(&self, n: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(n, n, ZERO);
        for r in 0..self.n {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col[p])] += self.val[p];
            }
        }
        m
    }

    /// Sum of every column over the rows in `rows`.
    pub fn column_sums(&self, rows: &[usize], n: usize) -> Vec<Complex64> {
        let mut s = vec![ZERO; n];
        for &r in rows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                s[self.col[p]] += self.val[p];
            }
        }
        s
    }
}

/// One weight block of the Liouvillian.
#[derive(Debug, Clone)]
pub struct LiouvillianBlock {
    dim_h: usize,
    /// `(ket, bra)` basis index of each block coordinate.
    pub pairs: Vec<(usize, usize)>,
    pos: Vec<usize>,
    pub matrix: Csr,
}

impl LiouvillianBlock {
    /// Block coordinates of the diagonal elements `|i⟩⟨i|` present here.
    pub fn diagonal_positions(&self) -> Vec<usize> {
        (0..self.dim_h).map(|i| self.pos[i * self.dim_h + i]).filter(|&p| p != usize::MAX).collect()
    }

    fn to_matrix(&self, x: &DVector<Complex64>) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim_h, self.dim_h, ZERO);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            m[(i, j)] = x[p];
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DMatrix<Complex64>,
    pub residual: f64,
    pub trace: Complex64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

/// Restarted GMRES, modified Gram-Schmidt Arnoldi with Givens rotations.
pub fn gmres<F>(op: &F, b: &DVector<Complex64>, tol: f64, restart: usize, max_restarts: usize) -> Result<DVector<Complex64>>
where
    F: Fn(&DVector<Complex64>) -> DVector<Complex64>,
{
    let n = b.len();
    let bnorm = b.norm();
    let mut x = DVector::from_element(n, ZERO);
    if bnorm == 0.0 {
        return Ok(x);
    }
    for _ in 0..max_restarts {
        let r = b - op(&x);
        let res = r.norm();
        if res <= tol * bnorm {
            return Ok(x);
        }
        let m = restart.min(n);
        let mut v: Vec<DVector<Complex64>> = vec![r / Complex64::new(res, 0.0)];
        let mut h = DMatrix::from_element(m + 1, m, ZERO);
        let mut cs = vec![ZERO; m];
        let mut sn = vec![ZERO; m];
        let mut g = DVector::from_element(m + 1, ZERO);
        g[0] = Complex64::new(res, 0.0);
        let mut k_used = 0;
        for k in 0..m {
            let mut w = op(&v[k]);
            for i in 0..=k {
                let hij = v[i].dotc(&w);
                h[(i, k)] = hij;
                w -= &v[i] * hij;
            }
            let wn = w.norm();
            h[(k + 1, k)] = Complex64::new(wn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[(i, k)] + sn[i].conj() * h[(i + 1, k)];
                h[(i + 1, k)] = -sn[i] * h[(i, k)] + cs[i] * h[(i + 1, k)];
                h[(i, k)] = t;
            }
            let (a, bb) = (h[(k, k)], h[(k + 1, k)]);
            let den = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            cs[k] = a / den;
            sn[k] = bb / den;
            h[(k, k)] = Complex64::new(den, 0.0);
            h[(k + 1, k)] = ZERO;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k].conj() * g[k];
            k_used = k + 1;
            if g[k + 1].norm() <= tol * bnorm || wn == 0.0 {
                break;
            }
            v.push(w / Complex64::new(wn, 0.0));
        }
        let mut y = vec![ZERO; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[(i, j)] * y[j];
            }
            y[i] = s / h[(i, i)];
        }
        for (i, yi) in y.iter().enumerate() {
            x += &v[i] * *yi;
        }
    }
    let r = (b - op(&x)).norm();
    if r <= tol * bnorm {
        return Ok(x);
    }
    Err(Error::NoConvergence(format!("GMRES residual {:.2e} after {max_restarts} restarts", r / bnorm)))
}

/// Thermal-state guess for the smallest truncation that passes the certificate.
fn thermal_levels(n: f64, tol: f64) -> usize {
    if n <= 0.0 {
        return 2;
    }
    let q = n / (n + 1.0);
    ((tol * (n + 1.0)).ln() / q.ln()).ceil().max(2.0) as usize
}

/// Model, steady state and the truncation that certified it.
#[derive(Debug, Clone)]
pub struct CertifiedSteadyState {
    pub model: ReducedModel,
    pub steady: SteadyState,
    pub top_population: (f64, f64),
}

/// Grows both truncations until the top levels hold less than `TOP_LEVEL_TOL`.
pub fn auto_truncate(model: ReducedModel, max_levels: usize) -> Result<CertifiedSteadyState> {
    let mut n1 = thermal_levels(model.n_1, TOP_LEVEL_TOL).max(model.n_max_1);
    let mut n2 = thermal_levels(model.n_2, TOP_LEVEL_TOL).max(model.n_max_2);
    loop {
        let m = model.with_truncation(n1, n2)?;
        let st = m.steady_state()?;
        let (p1, p2) = m.top_level_populations(&st);
        if p1 < TOP_LEVEL_TOL && p2 < TOP_LEVEL_TOL {
            return Ok(CertifiedSteadyState { model: m, steady: st, top_population: (p1, p2) });
        }
        if p1 >= TOP_LEVEL_TOL {
            n1 += 2;
        }
        if p2 >= TOP_LEVEL_TOL {
            n2 += 2;
        }
        if n1 > max_levels || n2 > max_levels {
            return Err(Error::NoConvergence(format!("top-level populations ({p1:.2e}, {p2:.2e}) above tolerance at the truncation cap")));
        }
    }
}

/// Cavity DOS with the master-equation propagator in place of `(−,2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub omega: Vec<f64>,
    pub correlation: Vec<Complex64>,
    pub dos: Vec<f64>,
}

/// Evaluates the `(−,2π)` propagator at `±ω` through the master equation and
/// keeps the bare propagators of the other three modes.
pub fn oracle_cavity_dos(spec: &PolaritonSpectrum, model: &ReducedModel, st: &SteadyState, omegas: &[f64]) -> Result<OracleSpectrum> {
    let mut both: Vec<f64> = omegas.to_vec();
    both.extend(omegas.iter().map(|w| -w));
    let g = model.retarded_correlation(st, &both)?;
    let n = omegas.len();
    let dos = (0..n)
        .map(|k| {
            let gc = cavity_green_with(spec, omegas[k], |m, w| {
                if m == ModeIndex::MINUS_2PI {
                    if w == omegas[k] { g[k] } else { g[n + k] }
                } else {
                    bare_retarded(spec.mode(m), w)
                }
            });
            -gc.im / PI
        })
        .collect();
    Ok(OracleSpectrum { omega: omegas.to_vec(), correlation: g[..n].to_vec(), dos })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(g: f64, n1: f64, n2: f64) -> ReducedModel {
        ReducedModel { omega_1: 0.45, omega_2: 0.9, g_e: g, kappa_1: 0.03, kappa_2: 0.01, n_1: n1, n_2: n2, n_max_1: 6, n_max_2: 4 }
    }

    #[test]
    fn rejects_tiny_truncation() {
        assert!(model(0.0, 0.0, 0.0).with_truncation(1, 4).is_err());
    }

    #[test]
    fn vacuum_and_thermal() {
        let m = model(0.0, 0.0, 0.0);
        let st = m.steady_state().unwrap();
        assert!((st.rho[(0, 0)].re - 1.0).abs() < 1e-12);
        let m = model(0.0, 0.3, 0.1).with_truncation(14, 8).unwrap();
        let st = m.steady_state().unwrap();
        for a in 0..=m.n_max_1 {
            for b in 0..=m.n_max_2 {
                let p = |n: f64, k: usize| n.powi(k as i32) / (n + 1.0).powi(k as i32 + 1);
                let want = p(0.3, a) * p(0.1, b);
                // truncation distorts only the top level of a thermal ladder
                if a < m.n_max_1 && b < m.n_max_2 {
                    assert!((st.rho[(m.idx(a, b), m.idx(a, b))].re - want).abs() < 1e-6 * want.max(1e-12) + 1e-14, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn bare_lorentzian() {
        let m = model(0.0, 0.0, 0.0);
        let st = m.steady_state().unwrap();
        let w = [0.85, 0.9, 0.93];
        let g = m.retarded_correlation(&st, &w).unwrap();
        for (k, &wk) in w.iter().enumerate() {
            let want = Complex64::new(1.0, 0.0) / Complex64::new(wk - 0.9, 0.005);
            assert!((g[k] - want).norm() < 1e-6 * want.norm());
        }
    }

    #[test]
    fn trace_preserving_blocks() {
        let m = model(0.05, 0.4, 0.1);
        let b = m.liouvillian_block(0);
        let sums = b.matrix.column_sums(&b.diagonal_positions(), b.pairs.len());
        assert!(sums.iter().all(|s| s.norm() < 1e-12));
    }

    #[test]
    fn gmres_matches_lu() {
        let m = model(0.05, 0.4, 0.1);
        let b = m.liouvillian_block(2);
        let n = b.pairs.len();
        let rhs = DVector::from_fn(n, |i, _| Complex64::new((i as f64).sin(), 0.1));
        let shift = I * 0.9;
        let x = gmres(&|v: &DVector<Complex64>| b.matrix.mul(v) + v * shift, &rhs, 1e-12, 100, 100).unwrap();
        let mut a = b.matrix.to_dense(n);
        for i in 0..n {
            a[(i, i)] += shift;
        }
        let y = a.lu().solve(&rhs).unwrap();
        assert!((x - y).norm() < 1e-9 * rhs.norm());
    }
}
