//! Alternating (see-saw) optimization over product and biseparable states:
//! overlap maximization, geometric measure, projector minima, the phase-twisted
//! translation extremum in closed form and numerically, and the conditioned
//! norm maximization used for the flip-conjugate overlap conjecture.
//!
//! Every optimizer is multistart with restarts drawn from a seeded generator;
//! restart r uses seed ^ r, so results are reproducible and order-independent
//! under parallel execution.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{random_state_amplitudes, CMatrix, Operator, Shape, StateVector};
use crate::rng::rng_from;

#[derive(Clone, Copy, Debug)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        SeesawConfig { restarts: 64, max_iter: 500, rel_tol: 1e-12, seed: 17 }
    }
}

impl SeesawConfig {
    pub fn with_seed(seed: u64) -> Self {
        SeesawConfig { seed, ..Self::default() }
    }

    /// Four-party overlap landscapes are rougher; use more restarts.
    pub fn for_four_parties(seed: u64) -> Self {
        SeesawConfig { restarts: 256, seed, ..Self::default() }
    }
}

/// Tuple of per-party unit vectors.
#[derive(Clone, Debug)]
pub struct ProductState {
    pub factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    pub fn random(parties: usize, local_dim: usize, rng: &mut impl rand::Rng) -> Self {
        ProductState {
            factors: (0..parties).map(|_| random_state_amplitudes(local_dim, rng)).collect(),
        }
    }

    /// Materialize the product state; factors must share one local dimension.
    pub fn state_vector(&self) -> Result<StateVector> {
        let d = self.factors.first().map(|f| f.len()).ok_or_else(|| {
            Error::InvalidInput("empty product state".into())
        })?;
        if self.factors.iter().any(|f| f.len() != d) {
            return Err(Error::DimensionMismatch("factors of unequal dimension".into()));
        }
        let mut psi = StateVector::new(1, d, self.factors[0].clone())?;
        for f in &self.factors[1..] {
            psi = psi.kron(&StateVector::new(1, d, f.clone())?)?;
        }
        Ok(psi)
    }
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub value: f64,
    pub argument: ProductState,
    pub restarts_used: usize,
    pub converged: bool,
    pub iterations: usize,
}

fn assert_monotone(prev: f64, next: f64, maximize: bool) {
    let slack = 1e-9 * (1.0 + prev.abs());
    if maximize {
        debug_assert!(next >= prev - slack, "objective decreased: {prev} -> {next}");
    } else {
        debug_assert!(next <= prev + slack, "objective increased: {prev} -> {next}");
    }
}

fn converged(prev: f64, next: f64, rel_tol: f64) -> bool {
    (next - prev).abs() <= rel_tol * (1.0 + next.abs())
}

/// Contraction of psi with the conjugated factors on every party except
/// `skip`; the result lives on party `skip`.
fn contract_except(psi: &StateVector, factors: &[Vec<Complex64>], skip: usize) -> Vec<Complex64> {
    let shape = psi.shape();
    let d = shape.local_dim;
    let n = shape.parties;
    let mut out = vec![Complex64::ZERO; d];
    let mut digits = vec![0usize; n];
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        if *amp == Complex64::ZERO {
            continue;
        }
        crate::linalg::decode_index(idx, d, &mut digits);
        let mut coeff = *amp;
        for p in 0..n {
            if p != skip {
                coeff *= factors[p][digits[p]].conj();
            }
        }
        out[digits[skip]] += coeff;
    }
    out
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = norm(&v);
    if n < 1e-14 {
        return None;
    }
    let inv = Complex64::new(1.0 / n, 0.0);
    for x in v.iter_mut() {
        *x *= inv;
    }
    Some(v)
}

/// Largest squared overlap of psi with product states, over a multistart
/// see-saw of normalized-contraction updates.
pub fn max_product_overlap(psi: &StateVector, cfg: &SeesawConfig) -> Result<OptimizationResult> {
    let shape = psi.shape();
    if !(2..=4).contains(&shape.parties) {
        return Err(Error::Unsupported("product overlap implemented for 2 to 4 parties".into()));
    }
    let runs: Vec<(f64, ProductState, bool, usize)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from(cfg.seed ^ r as u64);
            let mut prod = ProductState::random(shape.parties, shape.local_dim, &mut rng);
            let mut current = 0.0f64;
            let mut done = false;
            let mut iters = 0;
            for _ in 0..cfg.max_iter {
                iters += 1;
                let previous = current;
                for p in 0..shape.parties {
                    let v = contract_except(psi, &prod.factors, p);
                    let len = norm(&v);
                    if len < 1e-14 {
                        continue;
                    }
                    prod.factors[p] = normalize(v).expect("nonzero");
                    assert_monotone(current, len * len, true);
                    current = len * len;
                }
                if iters > 1 && converged(previous, current, cfg.rel_tol) {
                    done = true;
                    break;
                }
            }
            (current, prod, done, iters)
        })
        .collect();
    Ok(reduce_runs(runs, true))
}

fn reduce_runs(runs: Vec<(f64, ProductState, bool, usize)>, maximize: bool) -> OptimizationResult {
    let restarts_used = runs.len();
    let mut best: Option<(f64, ProductState, bool, usize)> = None;
    for run in runs {
        let better = match &best {
            None => true,
            Some((v, _, _, _)) => {
                if maximize {
                    run.0 > *v
                } else {
                    run.0 < *v
                }
            }
        };
        if better {
            best = Some(run);
        }
    }
    let (value, argument, converged, iterations) = best.expect("at least one restart");
    OptimizationResult { value, argument, restarts_used, converged, iterations }
}

/// Geometric measure 1 - max product overlap.
pub fn geometric_measure(psi: &StateVector, cfg: &SeesawConfig) -> Result<f64> {
    Ok(1.0 - max_product_overlap(psi, cfg)?.value)
}

/// <anchor|op|anchor> with a joint anchor on the listed parties (ascending
/// order); the result acts on the remaining parties.
fn conditional_on_parties(op: &Operator, anchored: &[usize], anchor: &[Complex64]) -> Result<Operator> {
    let shape = op.shape();
    let n = shape.parties;
    let d = shape.local_dim;
    for p in anchored {
        if *p >= n {
            return Err(Error::InvalidParty { party: *p, parties: n });
        }
    }
    let kept: Vec<usize> = (0..n).filter(|p| !anchored.contains(p)).collect();
    if kept.is_empty() {
        return Err(Error::InvalidInput("cannot anchor every party".into()));
    }
    let a_dim = d.pow(anchored.len() as u32);
    if anchor.len() != a_dim {
        return Err(Error::DimensionMismatch("anchor length".into()));
    }
    let k_dim = d.pow(kept.len() as u32);
    let mut out = CMatrix::zeros(k_dim, k_dim);
    let dim = shape.dim();
    let mut drow = vec![0usize; n];
    let mut dcol = vec![0usize; n];
    for row in 0..dim {
        crate::linalg::decode_index(row, d, &mut drow);
        let (ra, rk) = split_digits(&drow, anchored, &kept, d);
        let ca = anchor[ra].conj();
        if ca == Complex64::ZERO {
            continue;
        }
        for col in 0..dim {
            let x = op.matrix()[(row, col)];
            if x == Complex64::ZERO {
                continue;
            }
            crate::linalg::decode_index(col, d, &mut dcol);
            let (cb, ck) = split_digits(&dcol, anchored, &kept, d);
            out[(rk, ck)] += ca * x * anchor[cb];
        }
    }
    Operator::new(kept.len(), d, out)
}

fn split_digits(digits: &[usize], anchored: &[usize], kept: &[usize], d: usize) -> (usize, usize) {
    let mut a = 0;
    for p in anchored {
        a = a * d + digits[*p];
    }
    let mut k = 0;
    for p in kept {
        k = k * d + digits[*p];
    }
    (a, k)
}

/// Extremal eigenvector of h, tie-broken toward the previous iterate when the
/// extremal eigenvalue is degenerate.
fn eigen_update(h: &Operator, prev: &[Complex64], pick_max: bool) -> Result<(Vec<Complex64>, f64)> {
    let eig = h.eig()?;
    let dim = h.shape().dim();
    let target = if pick_max { eig.max() } else { eig.min() };
    let members: Vec<usize> = (0..eig.values.len())
        .filter(|k| (eig.values[*k] - target).abs() < 1e-8)
        .collect();
    let mut proj = vec![Complex64::ZERO; dim];
    for k in &members {
        let col = eig.vector(*k);
        let olap: Complex64 = col.iter().zip(prev).map(|(c, p)| c.conj() * p).sum();
        for (dst, c) in proj.iter_mut().zip(&col) {
            *dst += olap * c;
        }
    }
    let v = match normalize(proj) {
        Some(v) => v,
        None => eig.vector(members[0]),
    };
    Ok((v, target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Min,
    Max,
}

fn product_extremum(op: &Operator, cfg: &SeesawConfig, dir: Direction, warm: Option<&ProductState>) -> Result<OptimizationResult> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian { dev: op.matrix().hermiticity_deviation() });
    }
    let shape = op.shape();
    if !(2..=4).contains(&shape.parties) {
        return Err(Error::Unsupported("product extremum implemented for 2 to 4 parties".into()));
    }
    let maximize = dir == Direction::Max;
    let runs: Vec<Result<(f64, ProductState, bool, usize)>> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from(cfg.seed ^ r as u64);
            let mut prod = match (r, warm) {
                (0, Some(w)) => w.clone(),
                _ => ProductState::random(shape.parties, shape.local_dim, &mut rng),
            };
            let mut current = f64::NAN;
            let mut done = false;
            let mut iters = 0;
            for _ in 0..cfg.max_iter {
                iters += 1;
                let previous = current;
                for p in 0..shape.parties {
                    let anchored: Vec<usize> = (0..shape.parties).filter(|q| *q != p).collect();
                    let anchor = joint_anchor(&prod.factors, &anchored);
                    let cond = conditional_on_parties(op, &anchored, &anchor)?;
                    let (v, val) = eigen_update(&cond, &prod.factors[p], maximize)?;
                    prod.factors[p] = v;
                    if !current.is_nan() {
                        assert_monotone(current, val, maximize);
                    }
                    current = val;
                }
                if !previous.is_nan() && converged(previous, current, cfg.rel_tol) {
                    done = true;
                    break;
                }
            }
            Ok((current, prod, done, iters))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(reduce_runs(runs, maximize))
}

fn joint_anchor(factors: &[Vec<Complex64>], parties: &[usize]) -> Vec<Complex64> {
    let mut anchor = vec![Complex64::ONE];
    for p in parties {
        let mut next = Vec::with_capacity(anchor.len() * factors[*p].len());
        for a in &anchor {
            for x in &factors[*p] {
                next.push(a * x);
            }
        }
        anchor = next;
    }
    anchor
}

/// Smallest product-state expectation of a Hermitian operator.
pub fn min_projector_overlap(pi: &Operator, cfg: &SeesawConfig) -> Result<OptimizationResult> {
    product_extremum(pi, cfg, Direction::Min, None)
}

/// Largest product-state expectation (the fully separable ceiling).
pub fn fully_separable_max(w: &Operator, cfg: &SeesawConfig) -> Result<OptimizationResult> {
    product_extremum(w, cfg, Direction::Max, None)
}

/// Same with a warm-start candidate replacing the first restart.
pub fn fully_separable_max_from(w: &Operator, cfg: &SeesawConfig, warm: &ProductState) -> Result<OptimizationResult> {
    product_extremum(w, cfg, Direction::Max, Some(warm))
}

/// Best biseparable expectation of a three-party Hermitian operator.
#[derive(Clone, Debug)]
pub struct BiseparableResult {
    /// single party of the best split
    pub party: usize,
    pub value: f64,
    pub state: StateVector,
    pub converged: bool,
}

pub fn biseparable_max(w: &Operator, cfg: &SeesawConfig) -> Result<BiseparableResult> {
    biseparable_max_from(w, cfg, None)
}

pub fn biseparable_max_from(w: &Operator, cfg: &SeesawConfig, warm: Option<&BiseparableResult>) -> Result<BiseparableResult> {
    let shape = w.shape();
    if shape.parties != 3 {
        return Err(Error::Unsupported("biseparable split needs exactly 3 parties".into()));
    }
    if !w.is_hermitian() {
        return Err(Error::NotHermitian { dev: w.matrix().hermiticity_deviation() });
    }
    let d = shape.local_dim;
    let mut best: Option<BiseparableResult> = None;
    for party in 0..3 {
        let pair: Vec<usize> = (0..3).filter(|p| *p != party).collect();
        let warm_factors = warm.filter(|b| b.party == party).map(|b| split_bipartite(&b.state, party));
        let runs: Vec<Result<(f64, Vec<Complex64>, Vec<Complex64>, bool)>> = (0..cfg.restarts.max(1))
            .into_par_iter()
            .map(|r| {
                let mut rng = rng_from(cfg.seed ^ (0x9e37 * (party as u64 + 1)) ^ r as u64);
                let (mut eta, mut mu) = match (r, &warm_factors) {
                    (0, Some((e, m))) => (e.clone(), m.clone()),
                    _ => (random_state_amplitudes(d, &mut rng), random_state_amplitudes(d * d, &mut rng)),
                };
                let mut current = f64::NAN;
                let mut done = false;
                for _ in 0..cfg.max_iter {
                    let previous = current;
                    let on_pair = conditional_on_parties(w, &[party], &eta)?;
                    let (mu_next, val_pair) = eigen_update(&on_pair, &mu, true)?;
                    mu = mu_next;
                    if !current.is_nan() {
                        assert_monotone(current, val_pair, true);
                    }
                    let on_single = conditional_on_parties(w, &pair, &mu)?;
                    let (eta_next, val) = eigen_update(&on_single, &eta, true)?;
                    eta = eta_next;
                    assert_monotone(val_pair, val, true);
                    current = val;
                    if !previous.is_nan() && converged(previous, current, cfg.rel_tol) {
                        done = true;
                        break;
                    }
                }
                Ok((current, eta, mu, done))
            })
            .collect();
        for run in runs {
            let (value, eta, mu, conv) = run?;
            if best.as_ref().map(|b| value > b.value).unwrap_or(true) {
                let state = embed_bipartite(d, party, &eta, &mu)?;
                best = Some(BiseparableResult { party, value, state, converged: conv });
            }
        }
    }
    Ok(best.expect("three bipartitions scanned"))
}

fn embed_bipartite(d: usize, party: usize, eta: &[Complex64], mu: &[Complex64]) -> Result<StateVector> {
    let shape = Shape::new(3, d)?;
    let pair: Vec<usize> = (0..3).filter(|p| *p != party).collect();
    let mut amps = vec![Complex64::ZERO; shape.dim()];
    let mut digits = vec![0usize; 3];
    for (idx, amp) in amps.iter_mut().enumerate() {
        crate::linalg::decode_index(idx, d, &mut digits);
        let m = digits[pair[0]] * d + digits[pair[1]];
        *amp = eta[digits[party]] * mu[m];
    }
    StateVector::from_unnormalized(3, d, amps)
}

fn split_bipartite(state: &StateVector, party: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    // recover the single-party factor and pair factor of an embedded
    // biseparable state via the dominant Schmidt pair
    let d = state.shape().local_dim;
    let rho = state.reduced_density(&[party]).expect("valid party");
    let eig = rho.eig().expect("hermitian");
    let eta = eig.vector(d - 1);
    let pair: Vec<usize> = (0..3).filter(|p| *p != party).collect();
    let mut mu = vec![Complex64::ZERO; d * d];
    let mut digits = vec![0usize; 3];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        crate::linalg::decode_index(idx, d, &mut digits);
        let m = digits[pair[0]] * d + digits[pair[1]];
        mu[m] += eta[digits[party]].conj() * amp;
    }
    (eta, normalize(mu).unwrap_or_else(|| {
        let mut e = vec![Complex64::ZERO; d * d];
        e[0] = Complex64::ONE;
        e
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaMode {
    Analytic,
    Numeric,
}

/// Smallest product-state value of Re(e^{i alpha} <abc|T|abc>) with T the
/// three-party translation. The closed form scans the eigenvalue branch
/// lam(c) = c/2 (C c/2 - sqrt((C c/2)^2 + 1 - c^2)), C = 2 cos(alpha), over
/// c in [-1, 1]; the numeric mode runs a see-saw on the rank-two conditional.
/// The value does not depend on the local dimension.
pub fn extremize_eta(alpha: f64, d: usize, mode: EtaMode, cfg: &SeesawConfig) -> Result<f64> {
    match mode {
        EtaMode::Analytic => Ok(extremize_eta_closed_form(alpha)),
        EtaMode::Numeric => extremize_eta_numeric(alpha, d, cfg),
    }
}

fn eta_branch(alpha: f64, c: f64) -> f64 {
    let half = 2.0 * alpha.cos() * c / 2.0;
    0.5 * c * (half - (half * half + 1.0 - c * c).sqrt())
}

fn extremize_eta_closed_form(alpha: f64) -> f64 {
    let samples = 20000;
    let mut best_c = -1.0;
    let mut best = f64::INFINITY;
    for k in 0..=samples {
        let c = -1.0 + 2.0 * k as f64 / samples as f64;
        let v = eta_branch(alpha, c);
        if v < best {
            best = v;
            best_c = c;
        }
    }
    // golden-section refinement around the best grid point
    let mut lo = (best_c - 2.0 / samples as f64).max(-1.0);
    let mut hi = (best_c + 2.0 / samples as f64).min(1.0);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c1 = hi - phi * (hi - lo);
    let mut c2 = lo + phi * (hi - lo);
    let mut f1 = eta_branch(alpha, c1);
    let mut f2 = eta_branch(alpha, c2);
    for _ in 0..200 {
        if f1 < f2 {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - phi * (hi - lo);
            f1 = eta_branch(alpha, c1);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + phi * (hi - lo);
            f2 = eta_branch(alpha, c2);
        }
    }
    best.min(f1.min(f2))
}

fn extremize_eta_numeric(alpha: f64, d: usize, cfg: &SeesawConfig) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidInput("local dimension must be at least 2".into()));
    }
    let phase = Complex64::from_polar(1.0, alpha);
    let runs: Vec<Result<f64>> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from(cfg.seed ^ r as u64);
            let mut f: Vec<Vec<Complex64>> = (0..3).map(|_| random_state_amplitudes(d, &mut rng)).collect();
            let inner = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
                x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
            };
            let mut current = f64::NAN;
            for _ in 0..cfg.max_iter {
                let previous = current;
                for p in 0..3 {
                    // with |abc> and the cycle |abc> -> |cab>, the objective is
                    // Re(phase <a|c><b|a><c|b>); for each party it is a
                    // quadratic form with a rank-two Hermitian kernel
                    let (u, v, scalar) = match p {
                        0 => (f[2].clone(), f[1].clone(), inner(&f[2], &f[1])),
                        1 => (f[0].clone(), f[2].clone(), inner(&f[0], &f[2])),
                        _ => (f[1].clone(), f[0].clone(), inner(&f[1], &f[0])),
                    };
                    // Hermitian part of phase*scalar |u><v|
                    let mut hh = CMatrix::zeros(d, d);
                    for i in 0..d {
                        for j in 0..d {
                            let k = phase * scalar * u[i] * v[j].conj();
                            let kc = (phase * scalar).conj() * v[i] * u[j].conj();
                            hh[(i, j)] = 0.5 * (k + kc);
                        }
                    }
                    let op = Operator::new(1, d, hh)?;
                    let (next, val) = eigen_update(&op, &f[p], false)?;
                    f[p] = next;
                    if !current.is_nan() {
                        assert_monotone(current, val, false);
                    }
                    current = val;
                }
                if !previous.is_nan() && converged(previous, current, cfg.rel_tol) {
                    break;
                }
            }
            Ok(current)
        })
        .collect();
    let mut best = f64::INFINITY;
    for r in runs {
        best = best.min(r?);
    }
    Ok(best)
}

/// Largest conditioned squared norm |z|^2(|b_n|^2+|c_n|^2)
/// + 2 Re((z*)^2 b_n* c_n <c|b>) over unit vectors b, c, with z the default
/// flip-conjugate coupling. The maximum is d^2/(d^2-1).
pub fn chi_norm_max(d: usize, n: usize, cfg: &SeesawConfig) -> Result<OptimizationResult> {
    if d < 2 || n >= d {
        return Err(Error::InvalidInput("need d >= 2 and entry index n < d".into()));
    }
    let z = crate::subspaces::flip_conjugate_default_z(d);
    let abs2 = z.norm_sqr();
    let zc2 = z.conj() * z.conj();
    let objective = |b: &[Complex64], c: &[Complex64]| -> f64 {
        let olap: Complex64 = c.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        abs2 * (b[n].norm_sqr() + c[n].norm_sqr()) + 2.0 * (zc2 * b[n].conj() * c[n] * olap).re
    };
    let runs: Vec<Result<(f64, ProductState, bool, usize)>> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from(cfg.seed ^ r as u64);
            let mut b = random_state_amplitudes(d, &mut rng);
            let mut c = random_state_amplitudes(d, &mut rng);
            let mut current = f64::NAN;
            let mut done = false;
            let mut iters = 0;
            for _ in 0..cfg.max_iter {
                iters += 1;
                let previous = current;
                // update b with c fixed: kernel |z|^2 E_nn + ((z*)^2 c_n |n><c| + h.c.)
                let hb = chi_kernel(d, n, abs2, zc2 * c[n], &c);
                let (bn, mut val) = eigen_update(&hb, &b, true)?;
                b = bn;
                val += abs2 * c[n].norm_sqr();
                if !current.is_nan() {
                    assert_monotone(current, val, true);
                }
                // symmetric step for c: kernel |z|^2 E_nn + (z^2 b_n |n><b| + h.c.)
                let hc = chi_kernel(d, n, abs2, zc2.conj() * b[n], &b);
                let (cn, mut val2) = eigen_update(&hc, &c, true)?;
                c = cn;
                val2 += abs2 * b[n].norm_sqr();
                assert_monotone(val, val2, true);
                current = val2;
                if !previous.is_nan() && converged(previous, current, cfg.rel_tol) {
                    done = true;
                    break;
                }
            }
            let value = objective(&b, &c);
            Ok((value, ProductState { factors: vec![b, c] }, done, iters))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(reduce_runs(runs, true))
}

fn chi_kernel(d: usize, n: usize, abs2: f64, coupling: Complex64, other: &[Complex64]) -> Operator {
    let mut h = CMatrix::zeros(d, d);
    h[(n, n)] = Complex64::new(abs2, 0.0);
    for i in 0..d {
        // coupling |n><other| + h.c.
        let k = coupling * other[i].conj();
        h[(n, i)] += k;
        h[(i, n)] += k.conj();
    }
    Operator::new(1, d, h).expect("hermitian kernel")
}

/// Closed-form floor for the geometric measure of flip-conjugate states.
pub fn flip_conjugate_analytic_bound(d: usize) -> f64 {
    let df = d as f64;
    1.0 - df / (df * df - 1.0)
}
