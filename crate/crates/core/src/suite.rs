//! Replayable acceptance checks.
//!
//! Every headline result ships as a runner that recomputes it from scratch and
//! reports named checks with measured values. The acceptance test target and
//! the command line `verify` subcommand both dispatch here, so there is one
//! definition of passing.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{haar_random_unitary, random_state_amplitudes, CMatrix, Operator, StateVector};
use crate::povm::{gce, permutation_test, trace_cube, trace_power, TestMode};
use crate::rng::{rng_from, sub_seed};
use crate::sdp::{
    find_ppt_gme, flip_conjugate_conditional, gme_decide, ppt_relaxed_overlap, GmeVerdict,
    InvariantState,
};
use crate::seesaw::{
    biseparable_max, chi_norm_max, extremize_eta, flip_conjugate_analytic_bound,
    fully_separable_max, geometric_measure, max_product_overlap, min_projector_overlap, EtaMode,
    ProductState, SeesawConfig,
};
use crate::statespace::{self, Family, PairKind, SweepConfig};
use crate::subspaces::{
    build_permutations, chiral_basis, chiral_triples_qutrit, flip_conjugate_basis, four_qubit_m,
    four_qutrit_chiral, phase_state, projector_traces, tripartite_projectors,
};
use crate::witness::{
    analytic_bounds, build_gme_witnesses, build_witnesses, spectral_coefficients, WitnessKind,
};

/// One named check with its measured value and the rule it was held to.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub detail: String,
    pub pass: bool,
}

impl Check {
    fn close(label: impl Into<String>, measured: f64, target: f64, tol: f64) -> Check {
        Check {
            label: label.into(),
            detail: format!("measured {measured:.12} target {target:.12} tol {tol:.1e}"),
            pass: (measured - target).abs() <= tol,
        }
    }

    /// measured <= limit
    fn below(label: impl Into<String>, measured: f64, limit: f64) -> Check {
        Check {
            label: label.into(),
            detail: format!("measured {measured:.12} limit {limit:.12}"),
            pass: measured <= limit,
        }
    }

    /// measured >= floor
    fn above(label: impl Into<String>, measured: f64, floor: f64) -> Check {
        Check {
            label: label.into(),
            detail: format!("measured {measured:.12} floor {floor:.12}"),
            pass: measured >= floor,
        }
    }

    fn holds(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check { label: label.into(), detail: detail.into(), pass }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Single pass/fail summary line.
    pub fn status_line(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let verdict = if failed == 0 { "PASS" } else { "FAIL" };
        format!(
            "{verdict}  {}  ({} checks, {} failed, {:.1} s)",
            self.name,
            self.checks.len(),
            failed,
            self.seconds
        )
    }

    /// Full listing, one line per check.
    pub fn render(&self) -> String {
        let mut out = self.status_line();
        for c in &self.checks {
            out.push_str(&format!(
                "\n  {}  {}: {}",
                if c.pass { "ok  " } else { "FAIL" },
                c.label,
                c.detail
            ));
        }
        out
    }
}

fn finish(
    name: &'static str,
    start: Instant,
    budget: Option<f64>,
    mut checks: Vec<Check>,
) -> CriterionReport {
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = budget {
        checks.push(Check::below("runtime seconds", seconds, limit));
    }
    CriterionReport { name, checks, seconds }
}

fn max_abs(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut worst = 0.0f64;
    for r in 0..ma.rows() {
        for c in 0..ma.cols() {
            worst = worst.max((ma[(r, c)] - mb[(r, c)]).norm());
        }
    }
    worst
}

fn random_state(parties: usize, d: usize, rng: &mut impl rand::Rng) -> StateVector {
    let dim = d.pow(parties as u32);
    StateVector::new(parties, d, random_state_amplitudes(dim, rng)).expect("unit amplitudes")
}

fn seeded(seed: u64, task: u64) -> SeesawConfig {
    SeesawConfig::with_seed(sub_seed(seed, "suite", task))
}

/// Idempotence, orthogonality, completeness, and exact traces of the four
/// tripartite sector projectors for d = 2..5.
pub fn projector_algebra() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for d in [2usize, 3, 4, 5] {
        let pr = tripartite_projectors(d)?;
        let parts = [&pr.sym, &pr.antisym, &pr.chiral, &pr.antichiral];
        let mut idem = 0.0f64;
        for p in &parts {
            idem = idem.max(max_abs_diff(&p.mul(p)?, p));
        }
        checks.push(Check::close(format!("d={d} idempotence"), idem, 0.0, 1e-12));
        let mut ortho = 0.0f64;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                ortho = ortho.max(max_abs(parts[i].mul(parts[j])?.matrix()));
            }
        }
        checks.push(Check::close(format!("d={d} orthogonality"), ortho, 0.0, 1e-12));
        let mut sum = pr.sym.clone();
        for p in &parts[1..] {
            sum = sum.add(p)?;
        }
        let complete = max_abs_diff(&sum, &Operator::identity(3, d));
        checks.push(Check::close(format!("d={d} completeness"), complete, 0.0, 1e-12));
        let tr = projector_traces(d);
        let exact = tr.sym == (d * (d + 1) * (d + 2) / 6) as i64
            && tr.antisym == (d * (d - 1) * (d - 2) / 6) as i64
            && tr.chiral == ((d * d * d - d) / 3) as i64;
        let mut numeric = 0.0f64;
        for (p, t) in parts.iter().zip([tr.sym, tr.antisym, tr.chiral, tr.chiral]) {
            numeric = numeric.max((p.trace().re - t as f64).abs());
        }
        checks.push(Check::holds(
            format!("d={d} integer traces"),
            exact,
            format!("sym {} antisym {} each chiral sector {}", tr.sym, tr.antisym, tr.chiral),
        ));
        checks.push(Check::close(format!("d={d} numeric traces"), numeric, 0.0, 1e-12));
    }
    Ok(finish("projector algebra", start, Some(5.0), checks))
}

/// Qubit product-state extremes of the sector projectors and the shared
/// geometric measure of the chiral qubit sector.
pub fn qubit_product_extremes(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let pr = tripartite_projectors(2)?;
    let floor = min_projector_overlap(&pr.sym, &seeded(seed, 20))?;
    checks.push(Check::close("symmetric projector product floor", floor.value, 0.25, 1e-8));
    let blocked = pr.sym.add(&pr.antisym)?.add(&pr.antichiral)?;
    let floor = min_projector_overlap(&blocked, &seeded(seed, 21))?;
    checks.push(Check::close(
        "non-chiral projector sum product floor",
        floor.value,
        5.0 / 9.0,
        1e-8,
    ));
    let ceil = fully_separable_max(&pr.chiral, &seeded(seed, 22))?;
    checks.push(Check::close("chiral projector product ceiling", ceil.value, 4.0 / 9.0, 1e-8));
    let basis = chiral_basis(2)?;
    let mut rng = rng_from(sub_seed(seed, "suite", 23));
    let cfg = seeded(seed, 24);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let psi = basis.random_superposition(&mut rng);
        worst = worst.max((geometric_measure(&psi, &cfg)? - 5.0 / 9.0).abs());
    }
    checks.push(Check::close("chiral sector geometric measure spread", worst, 0.0, 1e-7));
    Ok(finish("qubit product extremes", start, Some(30.0), checks))
}

/// The same product-state extremes for d = 3 and d = 4; the exchange-blocked
/// floor now needs the antisymmetric sector in the sum.
pub fn qudit_product_extremes(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for d in [3usize, 4] {
        let pr = tripartite_projectors(d)?;
        let exchange = pr.sym.add(&pr.antisym)?;
        let floor = min_projector_overlap(&exchange, &seeded(seed, 30 + d as u64))?;
        checks.push(Check::close(
            format!("d={d} exchange projector product floor"),
            floor.value,
            0.25,
            1e-7,
        ));
        let blocked = exchange.add(&pr.antichiral)?;
        let floor = min_projector_overlap(&blocked, &seeded(seed, 40 + d as u64))?;
        checks.push(Check::close(
            format!("d={d} non-chiral projector sum product floor"),
            floor.value,
            5.0 / 9.0,
            1e-7,
        ));
        let ceil = fully_separable_max(&pr.chiral, &seeded(seed, 50 + d as u64))?;
        checks.push(Check::close(
            format!("d={d} chiral projector product ceiling"),
            ceil.value,
            4.0 / 9.0,
            1e-7,
        ));
    }
    Ok(finish("qudit product extremes", start, None, checks))
}

/// Closed-form and see-saw extremes of the phased cycle expectation, and their
/// independence of the local dimension.
pub fn cycle_phase_extremes(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let cfg = seeded(seed, 60);
    for (alpha, label, target) in
        [(0.0, "zero", -0.125), (FRAC_PI_3, "pi/3", -1.0 / 6.0)]
    {
        let analytic = extremize_eta(alpha, 2, EtaMode::Analytic, &cfg)?;
        checks.push(Check::close(format!("closed form at phase {label}"), analytic, target, 1e-9));
        let mut gap = 0.0f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for d in [2usize, 3, 4, 5] {
            let numeric = extremize_eta(alpha, d, EtaMode::Numeric, &cfg)?;
            gap = gap.max((numeric - analytic).abs());
            lo = lo.min(numeric);
            hi = hi.max(numeric);
        }
        checks.push(Check::close(format!("see-saw gap at phase {label}"), gap, 0.0, 1e-6));
        checks.push(Check::close(
            format!("dimension spread at phase {label}"),
            hi - lo,
            0.0,
            1e-6,
        ));
    }
    Ok(finish("cycle phase extremes", start, None, checks))
}

/// Maximally mixed single-party reductions of the qutrit triple sector and the
/// genuine-multiparticle measure shared by all its superpositions.
pub fn entangled_triple_sector(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let basis = chiral_triples_qutrit()?;
    let third = Operator::identity(1, 3).scale(Complex64::new(1.0 / 3.0, 0.0));
    let mut worst = 0.0f64;
    for v in &basis.vectors {
        for p in 0..3 {
            worst = worst.max(max_abs_diff(&v.reduced_density(&[p])?, &third));
        }
    }
    checks.push(Check::close("single-party reductions vs identity/3", worst, 0.0, 1e-12));
    let mut rng = rng_from(sub_seed(seed, "suite", 61));
    let mut spread = 0.0f64;
    for _ in 0..20 {
        let psi = basis.random_superposition(&mut rng);
        let mut lam2 = 0.0f64;
        for p in 0..3 {
            let s = psi.schmidt_coefficients(&[p])?;
            lam2 = lam2.max(s[0] * s[0]);
        }
        spread = spread.max((1.0 - lam2 - 2.0 / 3.0).abs());
    }
    checks.push(Check::close("split-wise measure spread", spread, 0.0, 1e-7));
    Ok(finish("entangled triple sector", start, None, checks))
}

/// Permutation-operator identities of the witness pair, their commutation, and
/// the match between spectral coefficients and the eigensolver.
pub fn witness_identities() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut cycle_dev = 0.0f64;
    let mut sector_dev = 0.0f64;
    let mut commute_dev = 0.0f64;
    let mut eig_dev = 0.0f64;
    for d in 2..=5usize {
        let pair = build_witnesses(d)?;
        let perms = build_permutations(d)?;
        let direct = perms.t.sub(&perms.t2)?.scale(Complex64::new(0.0, d as f64));
        cycle_dev = cycle_dev.max(max_abs_diff(&pair.minus, &direct));
        let spec = spectral_coefficients(d)?;
        let pr = tripartite_projectors(d)?;
        let re = |x: f64| Complex64::new(x, 0.0);
        let plus_direct = pr
            .sym
            .scale(re(spec.c_sym))
            .add(&pr.antisym.scale(re(spec.c_antisym)))?
            .add(&pr.chiral.add(&pr.antichiral)?.scale(re(spec.c_chiral)))?;
        sector_dev = sector_dev.max(max_abs_diff(&pair.plus, &plus_direct));
        let commutator = pair.plus.mul(&pair.minus)?.sub(&pair.minus.mul(&pair.plus)?)?;
        commute_dev = commute_dev.max(max_abs(commutator.matrix()));
        let tr = projector_traces(d);
        // spectrum of each witness against the sector coefficients, skipping
        // sectors of zero dimension
        let plus_levels = [
            (spec.c_sym, tr.sym),
            (spec.c_antisym, tr.antisym),
            (spec.c_chiral, 2 * tr.chiral),
        ];
        let minus_levels = [
            (spec.alpha, tr.chiral),
            (-spec.alpha, tr.chiral),
            (0.0, tr.sym + tr.antisym),
        ];
        for (w, levels) in [(&pair.plus, plus_levels), (&pair.minus, minus_levels)] {
            let values = w.eig()?.values;
            let allowed: Vec<f64> =
                levels.iter().filter(|(_, n)| *n > 0).map(|(c, _)| *c).collect();
            for v in &values {
                let nearest =
                    allowed.iter().map(|c| (v - c).abs()).fold(f64::INFINITY, f64::min);
                eig_dev = eig_dev.max(nearest);
            }
            for c in &allowed {
                let attained =
                    values.iter().map(|v| (v - c).abs()).fold(f64::INFINITY, f64::min);
                eig_dev = eig_dev.max(attained);
            }
        }
    }
    checks.push(Check::close("cycle-difference identity", cycle_dev, 0.0, 1e-10));
    checks.push(Check::close("sector decomposition identity", sector_dev, 0.0, 1e-10));
    checks.push(Check::close("witness commutator", commute_dev, 0.0, 1e-10));
    checks.push(Check::close("spectral coefficients vs eigensolver", eig_dev, 0.0, 1e-9));
    Ok(finish("witness identities", start, None, checks))
}

/// See-saw recovery of the fully separable, biseparable, and quantum ceilings
/// of both witnesses for d = 3..5.
pub fn witness_bounds(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for kind in [WitnessKind::Commutator, WitnessKind::Anticommutator] {
        let name = match kind {
            WitnessKind::Commutator => "cycle witness",
            WitnessKind::Anticommutator => "flip witness",
        };
        let mut fs_dev = 0.0f64;
        let mut bs_dev = 0.0f64;
        let mut q_dev = 0.0f64;
        for d in [3usize, 4, 5] {
            let pair = build_witnesses(d)?;
            let w = match kind {
                WitnessKind::Commutator => &pair.minus,
                WitnessKind::Anticommutator => &pair.plus,
            };
            let b = analytic_bounds(d, kind)?;
            let fs = fully_separable_max(w, &seeded(seed, 70 + d as u64))?;
            fs_dev = fs_dev.max((fs.value - b.fully_separable).abs());
            let bs = biseparable_max(w, &seeded(seed, 80 + d as u64))?;
            bs_dev = bs_dev.max((bs.value - b.biseparable).abs());
            let top = *w.eig()?.values.last().expect("nonempty spectrum");
            q_dev = q_dev.max((top - b.quantum).abs());
        }
        checks.push(Check::close(format!("{name} fully separable ceiling"), fs_dev, 0.0, 1e-7));
        checks.push(Check::close(format!("{name} biseparable ceiling"), bs_dev, 0.0, 1e-7));
        checks.push(Check::close(format!("{name} quantum ceiling"), q_dev, 0.0, 1e-7));
    }
    Ok(finish("witness bounds", start, Some(180.0), checks))
}

/// Search for states that keep every partial transpose positive while a
/// genuine-multiparticle witness detects them; empty for qubits.
pub fn bound_entangled_search() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let empty = find_ppt_gme(2, 5)?;
    checks.push(Check::holds(
        "d=2 search comes back empty",
        empty.is_empty(),
        format!("{} points", empty.len()),
    ));
    for d in [3usize, 4] {
        let points = find_ppt_gme(d, 5)?;
        let best = points
            .iter()
            .max_by(|a, b| a.a.total_cmp(&b.a))
            .ok_or_else(|| Error::NotConverged(format!("no feasible points at d={d}")))?;
        checks.push(Check::above(format!("d={d} antisymmetric weight"), best.a, 1e-4));
        checks.push(Check::above(
            format!("d={d} least partial-transpose eigenvalue"),
            best.min_pt_eig,
            -1e-9,
        ));
        let state = InvariantState::from_projector_weights(d, best.a, best.b, 0.0, best.c)?;
        let (p, _) = build_gme_witnesses(d)?;
        let detection = p.mul(&state.to_operator()?)?.trace().re;
        checks.push(Check::below(format!("d={d} witness detection value"), detection, -1e-6));
        let decision = gme_decide(&state, 1e-6)?;
        checks.push(Check::holds(
            format!("d={d} certified genuinely entangled"),
            decision.verdict == GmeVerdict::Gme,
            format!("optimum {:.3e}", decision.optimum),
        ));
    }
    Ok(finish("bound entangled search", start, Some(300.0), checks))
}

/// Flip-conjugate sector: the relaxed overlap, the contracted overlap norm,
/// and the analytic floor against the measured geometric measure.
pub fn flip_conjugate_overlaps(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut relax_dev = 0.0f64;
    for d in [3usize, 4, 5] {
        let df = d as f64;
        let target = df * df / ((df + 1.0) * (df * df - 1.0));
        let value = ppt_relaxed_overlap(&flip_conjugate_conditional(d)?)?;
        relax_dev = relax_dev.max((value - target).abs());
    }
    checks.push(Check::close("relaxed overlap vs closed form", relax_dev, 0.0, 1e-6));
    let mut norm_dev = 0.0f64;
    for d in 3..=12usize {
        let df = d as f64;
        let value = chi_norm_max(d, 0, &seeded(seed, 90 + d as u64))?.value;
        norm_dev = norm_dev.max((value - df * df / (df * df - 1.0)).abs());
    }
    checks.push(Check::close("contracted overlap norm vs closed form", norm_dev, 0.0, 1e-6));
    let mut margin = f64::INFINITY;
    let mut route_gap = 0.0f64;
    for d in 3..=8usize {
        let df = d as f64;
        let contracted = 1.0 - chi_norm_max(d, 0, &seeded(seed, 110 + d as u64))?.value / (df + 1.0);
        margin = margin.min(contracted - flip_conjugate_analytic_bound(d));
        if d <= 6 {
            // the statevector route stays under the dense size cap up to d = 6
            let psi = &flip_conjugate_basis(d, None)?.vectors[0];
            let direct = geometric_measure(psi, &seeded(seed, 120 + d as u64))?;
            route_gap = route_gap.max((direct - contracted).abs());
        }
    }
    checks.push(Check::above("analytic floor margin", margin, -1e-9));
    checks.push(Check::close("statevector vs contracted route", route_gap, 0.0, 1e-6));
    Ok(finish("flip conjugate overlaps", start, None, checks))
}

/// Geometric measures of the pinned four-party states and the phased pair
/// family.
pub fn four_party_measures(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let cfg4 = SeesawConfig::for_four_parties(sub_seed(seed, "suite", 130));
    let overlap = max_product_overlap(&four_qubit_m(), &cfg4)?;
    checks.push(Check::close("four-qubit superposition overlap", overlap.value, 2.0 / 9.0, 1e-6));
    let g = geometric_measure(&four_qutrit_chiral(), &cfg4)?;
    checks.push(Check::close("four-qutrit cycle eigenstate measure", g, 0.875, 1e-4));
    let mut dev = 0.0f64;
    for d in [3usize, 4, 5] {
        let psi = phase_state(d, FRAC_PI_2)?;
        let g = geometric_measure(&psi, &seeded(seed, 140 + d as u64))?;
        dev = dev.max((g - (1.0 - 0.5 / (d as f64 - 1.0))).abs());
    }
    checks.push(Check::close("phased pair family measure", dev, 0.0, 1e-4));
    Ok(finish("four party measures", start, Some(300.0), checks))
}

/// Vertices, family nesting, and boundary curvature of the witness-plane state
/// space at d = 3.
pub fn state_space_geometry(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let base = sub_seed(seed, "suite", 150);
    let qcfg = SweepConfig { grid: 16, seed: base, restarts: 8, overlay: None };
    let table = statespace::sweep(3, PairKind::Permutation, &[Family::Quantum], &qcfg)?;
    let named = statespace::vertices(3)?;
    let find = |label: &str| {
        named
            .iter()
            .find(|v| v.label == label)
            .map(|v| (v.wx, v.wy))
            .ok_or_else(|| Error::InvalidInput(format!("no vertex {label}")))
    };
    // angle grid of 16 puts rows 0, 4, 8 on the outward normals of the three
    // corners
    let mut vertex_dev = 0.0f64;
    for (row, label) in [(0usize, "antichiral"), (4, "antisymmetric"), (8, "chiral")] {
        let (wx, wy) = find(label)?;
        let r = &table.rows[row];
        vertex_dev = vertex_dev.max((r.wx - wx).abs().max((r.wy - wy).abs()));
    }
    checks.push(Check::close("corner support points", vertex_dev, 0.0, 1e-7));
    let ncfg = SweepConfig { grid: 24, seed: base, restarts: 24, overlay: None };
    let nested = statespace::sweep(
        3,
        PairKind::Permutation,
        &[Family::FullySeparable, Family::Biseparable, Family::PptMixture, Family::Quantum],
        &ncfg,
    )?;
    let nesting = nested.check_nesting(1e-6);
    checks.push(Check::holds(
        "family nesting on the angle grid",
        nesting.is_ok(),
        match &nesting {
            Ok(()) => "fs <= bs <= pptmix <= quantum at every angle".to_string(),
            Err(e) => format!("{e}"),
        },
    ));
    let ccfg = SweepConfig { grid: 24, seed: base, restarts: 8, overlay: None };
    let curved = statespace::sweep(3, PairKind::Transposed, &[Family::Quantum], &ccfg)?;
    let pts: Vec<(f64, f64)> = curved.rows.iter().map(|r| (r.wx, r.wy)).collect();
    let mut cross = 0.0f64;
    for k in 0..pts.len() {
        let (x0, y0) = pts[k];
        let (x1, y1) = pts[(k + 1) % pts.len()];
        let (x2, y2) = pts[(k + 2) % pts.len()];
        cross = cross.max(((x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)).abs());
    }
    checks.push(Check::above("transposed-pair boundary curvature", cross, 1e-4));
    Ok(finish("state space geometry", start, None, checks))
}

/// Ancilla-circuit outcome statistics, the cubed-trace routes, and the
/// concentratable-entanglement invariances.
pub fn permutation_test_statistics(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut exact_dev = 0.0f64;
    for d in [2usize, 3] {
        let pr = tripartite_projectors(d)?;
        let cycle = pr.sym.add(&pr.antisym)?;
        let mut rng = rng_from(sub_seed(seed, "suite", 160 + d as u64));
        for _ in 0..50 {
            let psi = random_state(3, d, &mut rng);
            let record = permutation_test(&psi, TestMode::Exact)?;
            let expected = [
                cycle.expectation(&psi)?.re,
                pr.antichiral.expectation(&psi)?.re,
                pr.chiral.expectation(&psi)?.re,
            ];
            for (p, e) in record.probabilities.iter().zip(expected) {
                exact_dev = exact_dev.max((p - e).abs());
            }
            let total: f64 = record.probabilities.iter().sum();
            exact_dev = exact_dev.max((total - 1.0).abs());
        }
    }
    checks.push(Check::close("exact outcome probabilities", exact_dev, 0.0, 1e-12));
    let shots = 100_000u64;
    let mut sigma_excess = f64::NEG_INFINITY;
    let mut rng = rng_from(sub_seed(seed, "suite", 170));
    for k in 0..4u64 {
        let psi = random_state(3, 3, &mut rng);
        let record = permutation_test(
            &psi,
            TestMode::Sampled { shots, seed: sub_seed(seed, "suite-shots", k) },
        )?;
        for (f, p) in record.frequencies().iter().zip(record.probabilities) {
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            sigma_excess = sigma_excess.max((f - p).abs() - 4.0 * sigma);
        }
    }
    checks.push(Check::below("sampled frequencies inside four sigma", sigma_excess, 1e-12));
    let mut route_dev = 0.0f64;
    for k in 0..5u64 {
        let mut rng = rng_from(sub_seed(seed, "suite", 180 + k));
        let rho = random_state(3, 3, &mut rng).reduced_density(&[0, 1])?;
        route_dev = route_dev.max((trace_cube(&rho)? - trace_power(&rho, 3)?).abs());
    }
    checks.push(Check::close("cubed-trace route agreement", route_dev, 0.0, 1e-10));
    let mut product_dev = 0.0f64;
    let mut rng = rng_from(sub_seed(seed, "suite", 190));
    for _ in 0..10 {
        let psi = ProductState::random(3, 3, &mut rng).state_vector()?;
        for k in [2u32, 3] {
            product_dev = product_dev.max(gce(&psi, &[0, 1, 2], k)?.abs());
        }
    }
    checks.push(Check::close("product states concentrate nothing", product_dev, 0.0, 1e-12));
    let mut rng = rng_from(sub_seed(seed, "suite", 191));
    let psi = random_state(3, 3, &mut rng);
    let reference = gce(&psi, &[0, 1, 2], 3)?;
    let mut lu_dev = 0.0f64;
    for _ in 0..5 {
        let mut big = haar_random_unitary(3, &mut rng);
        for _ in 0..2 {
            big = big.kron(&haar_random_unitary(3, &mut rng));
        }
        let rotated = StateVector::from_unnormalized(3, 3, big.matvec(psi.amplitudes()))?;
        lu_dev = lu_dev.max((gce(&rotated, &[0, 1, 2], 3)? - reference).abs());
    }
    checks.push(Check::close("local-unitary invariance", lu_dev, 0.0, 1e-10));
    Ok(finish("permutation test statistics", start, None, checks))
}

/// Shape of the antisymmetric-weight curve along the positive-transpose
/// boundary: rises to an interior peak, falls back, small at both ends.
pub fn mixing_curve_shape() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for d in [3usize, 4] {
        let points = find_ppt_gme(d, 13)?;
        checks.push(Check::holds(
            format!("d={d} sweep complete"),
            points.len() == 13,
            format!("{} of 13 points solved", points.len()),
        ));
        let a: Vec<f64> = points.iter().map(|p| p.a).collect();
        if a.is_empty() {
            continue;
        }
        let peak = a
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        checks.push(Check::holds(
            format!("d={d} interior peak"),
            peak > 0 && peak + 1 < a.len(),
            format!("peak at point {peak} of {}", a.len()),
        ));
        let mut wiggle = 0.0f64;
        for i in 0..a.len() - 1 {
            if i < peak {
                wiggle = wiggle.max(a[i] - a[i + 1]);
            } else {
                wiggle = wiggle.max(a[i + 1] - a[i]);
            }
        }
        checks.push(Check::below(format!("d={d} rise-then-fall violation"), wiggle, 1e-6));
        if d == 4 {
            let ends = a[0].max(*a.last().expect("nonempty"));
            checks.push(Check::below("d=4 endpoints stay small", ends, 0.25 * a[peak]));
        }
    }
    Ok(finish("mixing curve shape", start, None, checks))
}

/// Named groups of criteria for the `verify` subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Algebra,
    Bounds,
    Sdp,
    Povm,
    All,
}

impl SuiteKind {
    pub fn from_label(label: &str) -> Result<SuiteKind> {
        match label {
            "algebra" => Ok(SuiteKind::Algebra),
            "bounds" => Ok(SuiteKind::Bounds),
            "sdp" => Ok(SuiteKind::Sdp),
            "povm" => Ok(SuiteKind::Povm),
            "all" => Ok(SuiteKind::All),
            other => Err(Error::InvalidInput(format!(
                "unknown suite {other}; expected algebra, bounds, sdp, povm, or all"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SuiteKind::Algebra => "algebra",
            SuiteKind::Bounds => "bounds",
            SuiteKind::Sdp => "sdp",
            SuiteKind::Povm => "povm",
            SuiteKind::All => "all",
        }
    }
}

/// Run one suite; `All` is the concatenation of the four groups.
pub fn run_suite(kind: SuiteKind, seed: u64) -> Result<Vec<CriterionReport>> {
    let mut reports = Vec::new();
    let all = kind == SuiteKind::All;
    if all || kind == SuiteKind::Algebra {
        reports.push(projector_algebra()?);
        reports.push(entangled_triple_sector(seed)?);
        reports.push(witness_identities()?);
    }
    if all || kind == SuiteKind::Bounds {
        reports.push(qubit_product_extremes(seed)?);
        reports.push(qudit_product_extremes(seed)?);
        reports.push(cycle_phase_extremes(seed)?);
        reports.push(witness_bounds(seed)?);
        reports.push(four_party_measures(seed)?);
    }
    if all || kind == SuiteKind::Sdp {
        reports.push(bound_entangled_search()?);
        reports.push(flip_conjugate_overlaps(seed)?);
        reports.push(state_space_geometry(seed)?);
        reports.push(mixing_curve_shape()?);
    }
    if all || kind == SuiteKind::Povm {
        reports.push(permutation_test_statistics(seed)?);
    }
    Ok(reports)
}
