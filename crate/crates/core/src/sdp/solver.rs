//! Interior-point solver for linear matrix inequalities with equality rows.
//!
//! minimize c.x  subject to  A0_j + sum_i x_i A_ij >= 0 for each block j,
//! E x = r. Blocks are stored as sparse lists of elementary-matrix terms,
//! which keeps gradient and Hessian assembly quadratic in the number of
//! nonzeros rather than cubic in the block size. Equalities are handled by
//! projecting Newton steps onto the constraint manifold; strict feasibility
//! is found by a phase-I shift variable when the caller cannot supply it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_inverse, log_det_from_cholesky, min_eigenvalue, CMatrix};

/// Sparse Hermitian matrix as a list of (coefficient, row, col) elementary
/// terms; Hermiticity is a property of the materialized sum, not per term.
#[derive(Clone, Debug, Default)]
pub struct AffineMap {
    pub terms: Vec<(Complex64, usize, usize)>,
}

impl AffineMap {
    pub fn empty() -> Self {
        AffineMap { terms: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap { terms: (0..dim).map(|i| (Complex64::ONE, i, i)).collect() }
    }

    pub fn from_matrix(m: &CMatrix, drop_tol: f64) -> Self {
        let mut terms = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m[(r, c)];
                if v.norm() > drop_tol {
                    terms.push((v, r, c));
                }
            }
        }
        AffineMap { terms }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        AffineMap { terms: self.terms.iter().map(|(c, r, cc)| (s * c, *r, *cc)).collect() }
    }

    pub fn add_to(&self, scale: f64, m: &mut CMatrix) {
        for (c, r, cc) in &self.terms {
            m[(*r, *cc)] += scale * c;
        }
    }

    pub fn materialize(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        self.add_to(1.0, &mut m);
        m
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_index(&self) -> usize {
        self.terms.iter().map(|(_, r, c)| (*r).max(*c)).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct LmiBlock {
    pub dim: usize,
    pub base: AffineMap,
    /// one map per variable, empty where the variable does not enter
    pub maps: Vec<AffineMap>,
}

#[derive(Clone, Debug)]
pub struct LmiProblem {
    pub num_vars: usize,
    /// minimized as objective . x
    pub objective: Vec<f64>,
    pub blocks: Vec<LmiBlock>,
    /// rows (e, rhs) enforcing e . x = rhs
    pub equalities: Vec<(Vec<f64>, f64)>,
    /// strictly feasible start, if the caller knows one
    pub init: Option<Vec<f64>>,
}

impl LmiProblem {
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::InvalidInput("objective length mismatch".into()));
        }
        for (row, _) in &self.equalities {
            if row.len() != self.num_vars {
                return Err(Error::InvalidInput("equality row length mismatch".into()));
            }
        }
        if let Some(x0) = &self.init {
            if x0.len() != self.num_vars {
                return Err(Error::InvalidInput("init length mismatch".into()));
            }
        }
        for block in &self.blocks {
            if block.maps.len() != self.num_vars {
                return Err(Error::InvalidInput("block map count mismatch".into()));
            }
            for map in std::iter::once(&block.base).chain(&block.maps) {
                if map.max_index() >= block.dim && !map.is_empty() {
                    return Err(Error::InvalidInput("term index beyond block dimension".into()));
                }
                let mat = map.materialize(block.dim);
                if mat.hermiticity_deviation() > 1e-12 {
                    return Err(Error::NotHermitian { dev: mat.hermiticity_deviation() });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIter,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub min_block_eigs: Vec<f64>,
    pub gap_estimate: f64,
    pub iterations: usize,
}

// ---------------------------------------------------------------------------
// small real symmetric linear algebra

fn real_cholesky(n: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn real_chol_solve(n: usize, l: &[f64], b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i * n + k] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let t = l[k * n + i] * y[k];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    y
}

/// Cholesky with escalating diagonal ridge; None if hopeless.
fn factor_spd(n: usize, h: &[f64]) -> Option<Vec<f64>> {
    let scale = (0..n).map(|i| h[i * n + i].abs()).fold(1.0f64, f64::max);
    let mut ridge = 0.0;
    loop {
        let mut a = h.to_vec();
        if ridge > 0.0 {
            for i in 0..n {
                a[i * n + i] += ridge;
            }
        }
        if let Some(l) = real_cholesky(n, &a) {
            return Some(l);
        }
        ridge = if ridge == 0.0 { 1e-12 * scale } else { ridge * 100.0 };
        if ridge > 1e-4 * scale {
            return None;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// barrier machinery

fn materialize_blocks(blocks: &[LmiBlock], x: &[f64]) -> Vec<CMatrix> {
    blocks
        .iter()
        .map(|b| {
            let mut m = CMatrix::zeros(b.dim, b.dim);
            b.base.add_to(1.0, &mut m);
            for (xi, map) in x.iter().zip(&b.maps) {
                if *xi != 0.0 && !map.is_empty() {
                    map.add_to(*xi, &mut m);
                }
            }
            m
        })
        .collect()
}

fn factor_blocks(mats: &[CMatrix]) -> Option<Vec<CMatrix>> {
    let mut out = Vec::with_capacity(mats.len());
    for m in mats {
        out.push(cholesky(m)?);
    }
    Some(out)
}

/// t * c.x - sum_j log det B_j(x); None when any block leaves the cone.
fn merit(blocks: &[LmiBlock], c: &[f64], t: f64, x: &[f64]) -> Option<f64> {
    let mats = materialize_blocks(blocks, x);
    let factors = factor_blocks(&mats)?;
    let mut v = t * dot(c, x);
    for l in &factors {
        v -= log_det_from_cholesky(l);
    }
    Some(v)
}

/// Barrier gradient and Hessian over the variables from the sparse maps.
/// Tr(S E_ab S E_cd) = S[b,c] S[d,a] keeps this quadratic in term counts.
fn grad_hess(blocks: &[LmiBlock], factors: &[CMatrix], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut g = vec![0.0f64; m];
    let mut h = vec![0.0f64; m * m];
    for (block, l) in blocks.iter().zip(factors) {
        let s = cholesky_inverse(l);
        let active: Vec<usize> = (0..m).filter(|i| !block.maps[*i].is_empty()).collect();
        for &i in &active {
            let mut gi = 0.0;
            for (c, r, cc) in &block.maps[i].terms {
                gi += (c * s[(*cc, *r)]).re;
            }
            g[i] -= gi;
        }
        for (pos, &i) in active.iter().enumerate() {
            for &k in &active[pos..] {
                let mut hik = 0.0;
                for (c1, a, b) in &block.maps[i].terms {
                    for (c2, cc, dd) in &block.maps[k].terms {
                        hik += (c1 * c2 * s[(*b, *cc)] * s[(*dd, *a)]).re;
                    }
                }
                h[i * m + k] += hik;
                if i != k {
                    h[k * m + i] += hik;
                }
            }
        }
    }
    (g, h)
}

/// Newton direction with E delta = 0 enforced through the Schur complement.
fn projected_newton(m: usize, h: &[f64], grad: &[f64], eq_rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let l = factor_spd(m, h)?;
    let neg_grad: Vec<f64> = grad.iter().map(|v| -v).collect();
    let u = real_chol_solve(m, &l, &neg_grad);
    if eq_rows.is_empty() {
        return Some(u);
    }
    let k = eq_rows.len();
    let vs: Vec<Vec<f64>> = eq_rows.iter().map(|row| real_chol_solve(m, &l, row)).collect();
    let mut sc = vec![0.0f64; k * k];
    let mut rhs = vec![0.0f64; k];
    for i in 0..k {
        for j in 0..k {
            sc[i * k + j] = dot(&eq_rows[i], &vs[j]);
        }
        rhs[i] = dot(&eq_rows[i], &u);
    }
    let lsc = factor_spd(k, &sc)?;
    let lam = real_chol_solve(k, &lsc, &rhs);
    let mut delta = u;
    for (j, vj) in vs.iter().enumerate() {
        for (d, v) in delta.iter_mut().zip(vj) {
            *d -= lam[j] * v;
        }
    }
    Some(delta)
}

struct PathOutcome {
    x: Vec<f64>,
    gap: f64,
    newton_iters: usize,
    centered: bool,
}

/// Follow the central path for min c.x; early_stop = (var, threshold) aborts
/// as soon as that coordinate drops below the threshold (phase-I use).
fn central_path(
    blocks: &[LmiBlock],
    c: &[f64],
    eq_rows: &[Vec<f64>],
    x0: Vec<f64>,
    tol: f64,
    early_stop: Option<(usize, f64)>,
) -> PathOutcome {
    let m = c.len();
    let total_dim: usize = blocks.iter().map(|b| b.dim).sum();
    let mut x = x0;
    let mut t = 1.0f64;
    let mut iters = 0usize;
    let mut centered = true;
    for _outer in 0..40 {
        // center at this t
        let mut stalled = false;
        for _inner in 0..60 {
            if let Some((idx, thr)) = early_stop {
                if x[idx] < thr {
                    return PathOutcome { x, gap: total_dim as f64 / t, newton_iters: iters, centered: true };
                }
            }
            let mats = materialize_blocks(blocks, &x);
            let factors = match factor_blocks(&mats) {
                Some(f) => f,
                None => {
                    stalled = true;
                    break;
                }
            };
            let (gb, h) = grad_hess(blocks, &factors, m);
            let grad: Vec<f64> = gb.iter().zip(c).map(|(g, ci)| g + t * ci).collect();
            let delta = match projected_newton(m, &h, &grad, eq_rows) {
                Some(d) => d,
                None => {
                    stalled = true;
                    break;
                }
            };
            iters += 1;
            let slope = dot(&grad, &delta);
            if -slope * 0.5 <= 1e-10 {
                break;
            }
            let phi0 = merit(blocks, c, t, &x).expect("current point feasible");
            let mut alpha = 1.0f64;
            let mut accepted = false;
            while alpha >= 1e-13 {
                let trial: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi + alpha * di).collect();
                if let Some(phi) = merit(blocks, c, t, &trial) {
                    if phi <= phi0 + 0.25 * alpha * slope {
                        x = trial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                stalled = true;
                break;
            }
        }
        let gap = total_dim as f64 / t;
        if gap <= tol {
            return PathOutcome { x, gap, newton_iters: iters, centered };
        }
        if stalled {
            centered = false;
        }
        t *= 10.0;
    }
    PathOutcome { x, gap: total_dim as f64 / t, newton_iters: iters, centered: false }
}

// ---------------------------------------------------------------------------

/// Least-norm correction of the start point onto the equality manifold.
fn equality_point(p: &LmiProblem) -> Result<Vec<f64>> {
    let m = p.num_vars;
    let mut x = p.init.clone().unwrap_or_else(|| vec![0.0; m]);
    if p.equalities.is_empty() {
        return Ok(x);
    }
    let k = p.equalities.len();
    let mut gram = vec![0.0f64; k * k];
    let mut resid = vec![0.0f64; k];
    for (i, (row_i, rhs_i)) in p.equalities.iter().enumerate() {
        for (j, (row_j, _)) in p.equalities.iter().enumerate() {
            gram[i * k + j] = dot(row_i, row_j);
        }
        gram[i * k + i] += 1e-13;
        resid[i] = rhs_i - dot(row_i, &x);
    }
    let l = factor_spd(k, &gram)
        .ok_or_else(|| Error::InvalidInput("degenerate equality rows".into()))?;
    let lam = real_chol_solve(k, &l, &resid);
    for (j, (row, _)) in p.equalities.iter().enumerate() {
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi += lam[j] * ri;
        }
    }
    for (row, rhs) in &p.equalities {
        if (dot(row, &x) - rhs).abs() > 1e-8 * (1.0 + rhs.abs()) {
            return Err(Error::Infeasible("inconsistent equality rows".into()));
        }
    }
    Ok(x)
}

fn strictly_feasible(p: &LmiProblem, x: &[f64]) -> bool {
    let mats = materialize_blocks(&p.blocks, x);
    mats.iter().all(|m| {
        let margin = 1e-10 * (1.0 + m.max_abs());
        let mut shifted = m.clone();
        for i in 0..shifted.rows() {
            shifted[(i, i)] -= Complex64::new(margin, 0.0);
        }
        cholesky(&shifted).is_some()
    })
}

/// Phase I: minimize s with every block shifted by s * identity. Returns a
/// strictly feasible point, or None when the optimum stays nonnegative.
fn phase_one(p: &LmiProblem, x_eq: &[f64], iters: &mut usize) -> Option<Vec<f64>> {
    let m = p.num_vars;
    let mats = materialize_blocks(&p.blocks, x_eq);
    let mut worst = 0.0f64;
    for mat in &mats {
        let lo = min_eigenvalue(mat).ok()?;
        worst = worst.max(-lo);
    }
    let s0 = 1.0 + 1.25 * worst;
    let blocks: Vec<LmiBlock> = p
        .blocks
        .iter()
        .map(|b| {
            let mut maps = b.maps.clone();
            maps.push(AffineMap::identity(b.dim));
            LmiBlock { dim: b.dim, base: b.base.clone(), maps }
        })
        .collect();
    let mut c = vec![0.0f64; m + 1];
    c[m] = 1.0;
    let eq_rows: Vec<Vec<f64>> = p
        .equalities
        .iter()
        .map(|(row, _)| {
            let mut r = row.clone();
            r.push(0.0);
            r
        })
        .collect();
    let mut x0 = x_eq.to_vec();
    x0.push(s0);
    let out = central_path(&blocks, &c, &eq_rows, x0, 1e-6, Some((m, -1e-7)));
    *iters += out.newton_iters;
    if out.x[m] < -1e-9 {
        let mut x = out.x;
        x.pop();
        Some(x)
    } else {
        None
    }
}

pub fn solve_lmi(p: &LmiProblem, tol: f64) -> Result<SdpSolution> {
    p.validate()?;
    let mut iterations = 0usize;
    let x_eq = equality_point(p)?;
    let start = if strictly_feasible(p, &x_eq) {
        x_eq
    } else {
        match phase_one(p, &x_eq, &mut iterations) {
            Some(x) => x,
            None => {
                return Ok(SdpSolution {
                    status: SdpStatus::Infeasible,
                    x: x_eq,
                    objective: f64::NAN,
                    min_block_eigs: Vec::new(),
                    gap_estimate: f64::NAN,
                    iterations,
                })
            }
        }
    };
    let eq_rows: Vec<Vec<f64>> = p.equalities.iter().map(|(row, _)| row.clone()).collect();
    let mut out = central_path(&p.blocks, &p.objective, &eq_rows, start, tol, None);
    iterations += out.newton_iters;
    if !p.equalities.is_empty() {
        // squeeze out the drift the projected Newton steps accumulate
        let reproject = LmiProblem { init: Some(out.x.clone()), ..p.clone() };
        out.x = equality_point(&reproject)?;
    }
    let mats = materialize_blocks(&p.blocks, &out.x);
    let mut min_block_eigs = Vec::with_capacity(mats.len());
    for m in &mats {
        min_block_eigs.push(min_eigenvalue(m)?);
    }
    let status = if out.gap <= tol && out.centered { SdpStatus::Optimal } else { SdpStatus::MaxIter };
    Ok(SdpSolution {
        status,
        objective: dot(&p.objective, &out.x),
        x: out.x,
        min_block_eigs,
        gap_estimate: out.gap,
        iterations,
    })
}
