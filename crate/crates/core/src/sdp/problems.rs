//! Semidefinite programs over the translation-invariant operator basis
//! [1, F01, F02, F12, T+T^2, i(T-T^2)], plus the full-matrix PPT relaxation
//! of the conditional overlap problem.

use num_complex::Complex64;

use super::solver::{solve_lmi, AffineMap, LmiBlock, LmiProblem, SdpStatus};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Operator};
use crate::subspaces::{build_permutations, projector_traces, tripartite_projectors};
use crate::witness::{build_witnesses, spectral_coefficients, WitnessPair};

/// State in the invariant operator basis: rho = r0 1 + r01 F01 + r02 F02
/// + r12 F12 + t T + t* T^2 with coeffs = [r0, r01, r02, r12, Re t, Im t].
#[derive(Clone, Copy, Debug)]
pub struct InvariantState {
    pub local_dim: usize,
    pub coeffs: [f64; 6],
}

fn invariant_basis(d: usize) -> Result<[CMatrix; 6]> {
    let p = build_permutations(d)?;
    let t_plus = p.t.add(&p.t2)?;
    let t_minus = p.t.sub(&p.t2)?.scale(Complex64::I);
    Ok([
        Operator::identity(3, d).matrix().clone(),
        p.f01.matrix().clone(),
        p.f02.matrix().clone(),
        p.f12.matrix().clone(),
        t_plus.matrix().clone(),
        t_minus.matrix().clone(),
    ])
}

fn invariant_maps(d: usize) -> Result<Vec<AffineMap>> {
    Ok(invariant_basis(d)?.iter().map(|m| AffineMap::from_matrix(m, 1e-14)).collect())
}

/// Traces of the basis operators; the trace row of every invariant program.
fn invariant_trace_row(d: usize) -> Vec<f64> {
    let df = d as f64;
    vec![df * df * df, df * df, df * df, df * df, 2.0 * df, 0.0]
}

fn trace_prod(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.rows();
    let mut s = Complex64::ZERO;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

impl InvariantState {
    pub fn new(local_dim: usize, coeffs: [f64; 6]) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidInput("local dimension must be at least 2".into()));
        }
        Ok(InvariantState { local_dim, coeffs })
    }

    pub fn maximally_mixed(local_dim: usize) -> Self {
        let dim = (local_dim * local_dim * local_dim) as f64;
        InvariantState { local_dim, coeffs: [1.0 / dim, 0.0, 0.0, 0.0, 0.0, 0.0] }
    }

    /// rho = a P_antisym + b P_sym + c_j P_chiral + c_jbar P_antichiral,
    /// with weights (not sector probabilities). Needs d >= 3: below that the
    /// antisymmetric sector is empty and the basis operators are dependent.
    pub fn from_projector_weights(
        local_dim: usize,
        a: f64,
        b: f64,
        c_j: f64,
        c_jbar: f64,
    ) -> Result<Self> {
        if local_dim < 3 {
            return Err(Error::Unsupported(
                "projector-weight form needs local dimension at least 3".into(),
            ));
        }
        let w = crate::subspaces::omega();
        let w2 = w * w;
        // P_sym,antisym = (1 +- sum F + T + T^2)/6; P_chiral has T-weight
        // conj(w), P_antichiral T-weight w
        let r0 = (a + b) / 6.0 + (c_j + c_jbar) / 3.0;
        let rf = (b - a) / 6.0;
        let tau = Complex64::new((a + b) / 6.0, 0.0) + (c_j * w2 + c_jbar * w) / 3.0;
        Ok(InvariantState {
            local_dim,
            coeffs: [r0, rf, rf, rf, tau.re, tau.im],
        })
    }

    pub fn trace(&self) -> f64 {
        let row = invariant_trace_row(self.local_dim);
        row.iter().zip(&self.coeffs).map(|(t, c)| t * c).sum()
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let basis = invariant_basis(self.local_dim)?;
        let dim = self.local_dim.pow(3);
        let mut m = CMatrix::zeros(dim, dim);
        for (c, b) in self.coeffs.iter().zip(&basis) {
            m.add_scaled(Complex64::new(*c, 0.0), b);
        }
        Operator::new(3, self.local_dim, m)
    }

    /// Unit trace within 1e-10 and PSD within -1e-9.
    pub fn validate_state(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("trace {} is not 1", self.trace())));
        }
        let op = self.to_operator()?;
        let lo = op.eig()?.min();
        if lo < -1e-9 {
            return Err(Error::InvalidInput(format!("negative eigenvalue {lo}")));
        }
        Ok(())
    }

    pub fn witness_expectations(&self, pair: &WitnessPair) -> Result<(f64, f64)> {
        let rho = self.to_operator()?;
        let minus = trace_prod(pair.minus.matrix(), rho.matrix()).re;
        let plus = trace_prod(pair.plus.matrix(), rho.matrix()).re;
        Ok((minus, plus))
    }
}

// ---------------------------------------------------------------------------
// index plumbing for sparse maps on tensor factors

fn digits_of(idx: usize, parties: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0usize; parties];
    let mut rem = idx;
    for slot in (0..parties).rev() {
        out[slot] = rem % d;
        rem /= d;
    }
    out
}

fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, dig| acc * d + dig)
}

/// Partial transpose on one party, applied termwise.
fn pt_map(map: &AffineMap, parties: usize, d: usize, party: usize) -> AffineMap {
    let terms = map
        .terms
        .iter()
        .map(|(c, r, s)| {
            let mut dr = digits_of(*r, parties, d);
            let mut ds = digits_of(*s, parties, d);
            std::mem::swap(&mut dr[party], &mut ds[party]);
            (*c, index_of(&dr, d), index_of(&ds, d))
        })
        .collect();
    AffineMap { terms }
}

/// <0|A|0> with the anchor on one party of a three-party map.
fn anchored_map(map: &AffineMap, d: usize, party: usize) -> AffineMap {
    let mut terms = Vec::new();
    for (c, r, s) in &map.terms {
        let dr = digits_of(*r, 3, d);
        let ds = digits_of(*s, 3, d);
        if dr[party] != 0 || ds[party] != 0 {
            continue;
        }
        let keep: Vec<usize> = (0..3).filter(|p| *p != party).collect();
        let rr = index_of(&[dr[keep[0]], dr[keep[1]]], d);
        let ss = index_of(&[ds[keep[0]], ds[keep[1]]], d);
        terms.push((*c, rr, ss));
    }
    AffineMap { terms }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptFamily {
    /// no positivity beyond the state itself
    Quantum,
    /// all three partial transposes
    PptAll,
    /// a single marked party
    PptSingle(usize),
}

/// Largest <cos(theta) W_minus + sin(theta) W_plus> over invariant states of
/// the family; restricting to the invariant basis is lossless by twirling.
pub fn invariant_boundary(d: usize, theta: f64, family: PptFamily) -> Result<f64> {
    invariant_boundary_point(d, theta, family).map(|(v, _)| v)
}

/// Boundary value together with the maximizing invariant state (the support
/// point of the family's region in the witness plane).
pub fn invariant_boundary_point(
    d: usize,
    theta: f64,
    family: PptFamily,
) -> Result<(f64, InvariantState)> {
    if !(3..=5).contains(&d) {
        return Err(Error::Unsupported("boundary computed for d in 3..=5".into()));
    }
    let pair = build_witnesses(d)?;
    let w = pair
        .minus
        .scale(Complex64::new(theta.cos(), 0.0))
        .add(&pair.plus.scale(Complex64::new(theta.sin(), 0.0)))?;
    let maps = invariant_maps(d)?;
    let objective: Vec<f64> = expectation_row(w.matrix(), &maps).iter().map(|v| -v).collect();
    let dim = d.pow(3);
    let mut blocks = vec![LmiBlock { dim, base: AffineMap::empty(), maps: maps.clone() }];
    let pt_parties: Vec<usize> = match family {
        PptFamily::Quantum => vec![],
        PptFamily::PptAll => vec![0, 1, 2],
        PptFamily::PptSingle(x) => {
            if x > 2 {
                return Err(Error::InvalidParty { party: x, parties: 3 });
            }
            vec![x]
        }
    };
    for party in pt_parties {
        let pt_maps: Vec<AffineMap> = maps.iter().map(|m| pt_map(m, 3, d, party)).collect();
        blocks.push(LmiBlock { dim, base: AffineMap::empty(), maps: pt_maps });
    }
    let mut init = vec![0.0; 6];
    init[0] = 1.0 / dim as f64;
    let problem = LmiProblem {
        num_vars: 6,
        objective,
        blocks,
        equalities: vec![(invariant_trace_row(d), 1.0)],
        init: Some(init),
    };
    let sol = solve_lmi(&problem, 1e-8)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged(format!("boundary solve ended {:?}", sol.status)));
    }
    let trace_row = invariant_trace_row(d);
    let tr: f64 = trace_row.iter().zip(&sol.x).map(|(t, c)| t * c).sum();
    let mut coeffs = [0.0; 6];
    for (out, xi) in coeffs.iter_mut().zip(&sol.x) {
        *out = xi / tr;
    }
    Ok((-sol.objective, InvariantState::new(d, coeffs)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmeVerdict {
    Gme,
    Biseparable,
}

#[derive(Clone, Debug)]
pub struct GmeDecision {
    pub verdict: GmeVerdict,
    /// optimizing witness in the invariant basis
    pub witness: [f64; 6],
    pub optimum: f64,
}

/// Decide genuine multiparticle entanglement of an invariant state: minimize
/// Tr(rho W) over invariant W whose anchored conditionals <0|W|0> are PSD on
/// every party, with Tr W = d^3 fixing the scale and a coefficient box
/// guarding against unboundedness.
pub fn gme_decide(rho: &InvariantState, tol: f64) -> Result<GmeDecision> {
    rho.validate_state()?;
    let d = rho.local_dim;
    let maps = invariant_maps(d)?;
    let rho_op = rho.to_operator()?;
    let objective: Vec<f64> = maps
        .iter()
        .map(|m| {
            let mut s = Complex64::ZERO;
            for (c, r, cc) in &m.terms {
                s += c * rho_op.matrix()[(*cc, *r)];
            }
            s.re
        })
        .collect();
    let mut blocks = Vec::new();
    for party in 0..3 {
        let cond: Vec<AffineMap> = maps.iter().map(|m| anchored_map(m, d, party)).collect();
        blocks.push(LmiBlock { dim: d * d, base: AffineMap::empty(), maps: cond });
    }
    const BOX: f64 = 1e3;
    for i in 0..6 {
        for sign in [1.0f64, -1.0] {
            let mut bmaps = vec![AffineMap::empty(); 6];
            bmaps[i] = AffineMap { terms: vec![(Complex64::new(sign, 0.0), 0, 0)] };
            blocks.push(LmiBlock {
                dim: 1,
                base: AffineMap { terms: vec![(Complex64::new(BOX, 0.0), 0, 0)] },
                maps: bmaps,
            });
        }
    }
    let mut init = vec![0.0; 6];
    init[0] = 1.0;
    let d3 = (d * d * d) as f64;
    let problem = LmiProblem {
        num_vars: 6,
        objective,
        blocks,
        equalities: vec![(invariant_trace_row(d), d3)],
        init: Some(init),
    };
    let sol = solve_lmi(&problem, 1e-8)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged(format!("decision solve ended {:?}", sol.status)));
    }
    let mut witness = [0.0f64; 6];
    witness.copy_from_slice(&sol.x);
    let verdict = if sol.objective < -tol { GmeVerdict::Gme } else { GmeVerdict::Biseparable };
    Ok(GmeDecision { verdict, witness, optimum: sol.objective })
}

#[derive(Clone, Debug)]
pub struct PptGmePoint {
    pub wplus: f64,
    pub wminus: f64,
    /// weights on the antisymmetric, symmetric, and antichiral projectors
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub min_pt_eig: f64,
    pub gme: bool,
}

/// Sweep the <W_plus> range and maximize the antisymmetric weight a of
/// rho = a P_antisym + b P_sym + c P_antichiral subject to all three partial
/// transposes being PSD. Points with appreciable a are PPT and genuinely
/// multiparticle entangled; at d = 2 the antisymmetric sector is empty and
/// the list is empty.
pub fn find_ppt_gme(d: usize, sweep_points: usize) -> Result<Vec<PptGmePoint>> {
    if d == 2 {
        return Ok(Vec::new());
    }
    if !(3..=4).contains(&d) {
        return Err(Error::Unsupported("search implemented for d in {2,3,4}".into()));
    }
    let traces = projector_traces(d);
    let (t_a, t_s, t_j) = (traces.antisym as f64, traces.sym as f64, traces.chiral as f64);
    let coef = spectral_coefficients(d)?;
    let alpha = coef.alpha;
    let (c_s, c_a, c_j) = (coef.c_sym, coef.c_antisym, coef.c_chiral);
    let projectors = tripartite_projectors(d)?;
    let base_maps: Vec<AffineMap> = [&projectors.antisym, &projectors.sym, &projectors.antichiral]
        .iter()
        .map(|p| AffineMap::from_matrix(p.matrix(), 1e-13))
        .collect();
    let dim = d.pow(3);
    let mut blocks = Vec::new();
    for i in 0..3 {
        let mut bmaps = vec![AffineMap::empty(); 3];
        bmaps[i] = AffineMap::identity(1);
        blocks.push(LmiBlock { dim: 1, base: AffineMap::empty(), maps: bmaps });
    }
    for party in 0..3 {
        let pt_maps: Vec<AffineMap> =
            base_maps.iter().map(|m| pt_map(m, 3, d, party)).collect();
        blocks.push(LmiBlock { dim, base: AffineMap::empty(), maps: pt_maps });
    }
    let trace_row = vec![t_a, t_s, t_j];
    let pin_row = vec![c_a * t_a, c_s * t_s, c_j * t_j];
    let mut out = Vec::new();
    for k in 0..sweep_points.max(1) {
        let frac = if sweep_points <= 1 {
            0.5
        } else {
            0.02 + 0.96 * k as f64 / (sweep_points - 1) as f64
        };
        let pin = c_s * frac;
        let problem = LmiProblem {
            num_vars: 3,
            objective: vec![-1.0, 0.0, 0.0],
            blocks: blocks.clone(),
            equalities: vec![(trace_row.clone(), 1.0), (pin_row.clone(), pin)],
            init: None,
        };
        let sol = solve_lmi(&problem, 1e-8)?;
        if sol.status != SdpStatus::Optimal {
            continue;
        }
        // renormalize away the solver's residual trace error
        let norm = sol.x[0] * t_a + sol.x[1] * t_s + sol.x[2] * t_j;
        let (a, b, c) = (sol.x[0] / norm, sol.x[1] / norm, sol.x[2] / norm);
        let min_pt_eig = sol.min_block_eigs[3..6].iter().cloned().fold(f64::INFINITY, f64::min);
        let gme = if a > 1e-4 {
            let state = InvariantState::from_projector_weights(d, a, b, 0.0, c)?;
            let decision = gme_decide(&state, 1e-6)?;
            decision.verdict == GmeVerdict::Gme && -a * t_a < -1e-6
        } else {
            false
        };
        out.push(PptGmePoint {
            wplus: a * c_a * t_a + b * c_s * t_s + c * c_j * t_j,
            wminus: alpha * c * t_j,
            a,
            b,
            c,
            min_pt_eig,
            gme,
        });
    }
    Ok(out)
}

/// Conditional of the flip-conjugate projector at the conjugated party,
/// anchored at |0>; the operand of the PPT relaxation.
pub fn flip_conjugate_conditional(d: usize) -> Result<Operator> {
    let (pi, _) = crate::subspaces::flip_conjugate_projectors(d)?;
    let mut anchor = vec![Complex64::ZERO; d];
    anchor[0] = Complex64::ONE;
    pi.conditional(0, &anchor)
}

// Coordinates for a full Hermitian matrix variable: n diagonal entries, then
// (Re, Im) per off-diagonal pair a < b.

fn hermitian_coordinate_maps(n: usize) -> Vec<AffineMap> {
    let mut maps = Vec::with_capacity(n * n);
    for a in 0..n {
        maps.push(AffineMap { terms: vec![(Complex64::ONE, a, a)] });
    }
    for a in 0..n {
        for b in a + 1..n {
            maps.push(AffineMap { terms: vec![(Complex64::ONE, a, b), (Complex64::ONE, b, a)] });
            maps.push(AffineMap { terms: vec![(Complex64::I, a, b), (-Complex64::I, b, a)] });
        }
    }
    maps
}

fn hermitian_trace_row(n: usize) -> Vec<f64> {
    let mut row = vec![0.0; n * n];
    for r in row.iter_mut().take(n) {
        *r = 1.0;
    }
    row
}

/// Tr(W B_i) for every coordinate map; real when W is Hermitian.
fn expectation_row(w: &CMatrix, maps: &[AffineMap]) -> Vec<f64> {
    maps.iter()
        .map(|m| m.terms.iter().map(|(c, r, cc)| (c * w[(*cc, *r)]).re).sum())
        .collect()
}

fn mixed_state_init(n: usize, num_vars: usize) -> Vec<f64> {
    let mut init = vec![0.0; num_vars];
    for ini in init.iter_mut().take(n) {
        *ini = 1.0 / n as f64;
    }
    init
}

/// max Tr(Y rho) over two-party states with one PSD partial transpose: the
/// PPT relaxation of the best conditional product overlap.
pub fn ppt_relaxed_overlap(y: &Operator) -> Result<f64> {
    let shape = y.shape();
    if shape.parties != 2 {
        return Err(Error::Unsupported("relaxation acts on a two-party operator".into()));
    }
    if !y.is_hermitian() {
        return Err(Error::NotHermitian { dev: y.matrix().hermiticity_deviation() });
    }
    let d = shape.local_dim;
    if d > 6 {
        return Err(Error::SizeCap(format!(
            "full matrix variable needs d <= 6, got {d}"
        )));
    }
    let n = d * d;
    let maps = hermitian_coordinate_maps(n);
    let objective: Vec<f64> = expectation_row(y.matrix(), &maps).iter().map(|v| -v).collect();
    let m = maps.len();
    let pt_maps: Vec<AffineMap> = maps.iter().map(|mp| pt_map(mp, 2, d, 0)).collect();
    let blocks = vec![
        LmiBlock { dim: n, base: AffineMap::empty(), maps },
        LmiBlock { dim: n, base: AffineMap::empty(), maps: pt_maps },
    ];
    let problem = LmiProblem {
        num_vars: m,
        objective,
        blocks,
        equalities: vec![(hermitian_trace_row(n), 1.0)],
        init: Some(mixed_state_init(n, m)),
    };
    let sol = solve_lmi(&problem, 1e-8)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged(format!("relaxation solve ended {:?}", sol.status)));
    }
    Ok(-sol.objective)
}

/// Largest <cos(theta) X + sin(theta) Y> over states whose partial transposes
/// on `cuts` stay PSD, with the full density matrix as the variable. Unlike
/// `invariant_boundary` this makes no symmetry assumption, at the price of a
/// dim^2-variable program. Returns the value and the expectation pair of the
/// maximizer (the support point in the (X, Y) plane).
pub fn ppt_state_boundary(
    x_op: &Operator,
    y_op: &Operator,
    theta: f64,
    cuts: &[usize],
) -> Result<(f64, (f64, f64))> {
    let shape = x_op.shape();
    if y_op.shape() != shape {
        return Err(Error::DimensionMismatch("boundary operators differ in shape".into()));
    }
    if !x_op.is_hermitian() || !y_op.is_hermitian() {
        let dev = x_op
            .matrix()
            .hermiticity_deviation()
            .max(y_op.matrix().hermiticity_deviation());
        return Err(Error::NotHermitian { dev });
    }
    let n = shape.dim();
    if n > 27 {
        return Err(Error::SizeCap(format!(
            "full matrix variable needs total dimension <= 27, got {n}"
        )));
    }
    for &cut in cuts {
        if cut >= shape.parties {
            return Err(Error::InvalidParty { party: cut, parties: shape.parties });
        }
    }
    let w = x_op
        .scale(Complex64::new(theta.cos(), 0.0))
        .add(&y_op.scale(Complex64::new(theta.sin(), 0.0)))?;
    let maps = hermitian_coordinate_maps(n);
    let row_x = expectation_row(x_op.matrix(), &maps);
    let row_y = expectation_row(y_op.matrix(), &maps);
    let objective: Vec<f64> = expectation_row(w.matrix(), &maps).iter().map(|v| -v).collect();
    let m = maps.len();
    let mut blocks = vec![LmiBlock { dim: n, base: AffineMap::empty(), maps: maps.clone() }];
    for &cut in cuts {
        let pt_maps: Vec<AffineMap> =
            maps.iter().map(|mp| pt_map(mp, shape.parties, shape.local_dim, cut)).collect();
        blocks.push(LmiBlock { dim: n, base: AffineMap::empty(), maps: pt_maps });
    }
    let problem = LmiProblem {
        num_vars: m,
        objective,
        blocks,
        equalities: vec![(hermitian_trace_row(n), 1.0)],
        init: Some(mixed_state_init(n, m)),
    };
    let sol = solve_lmi(&problem, 1e-8)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::NotConverged(format!("boundary solve ended {:?}", sol.status)));
    }
    let px: f64 = row_x.iter().zip(&sol.x).map(|(r, xi)| r * xi).sum();
    let py: f64 = row_y.iter().zip(&sol.x).map(|(r, xi)| r * xi).sum();
    Ok((-sol.objective, (px, py)))
}
