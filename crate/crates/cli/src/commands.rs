//! One function per subcommand. Human summaries go to stdout; machine
//! payloads are rendered through the deterministic JSON/CSV writers so equal
//! arguments produce equal bytes.

use std::path::Path;

use entlab_core::io::{fmt_f64, operator_to_json, read_state, state_to_json, JsonValue};
use entlab_core::rng::{rng_from, sub_seed};
use entlab_core::sdp::{
    find_ppt_gme, flip_conjugate_conditional, gme_decide, invariant_boundary_point,
    ppt_relaxed_overlap, GmeVerdict, PptFamily, PptGmePoint,
};
use entlab_core::seesaw::{max_product_overlap, SeesawConfig};
use entlab_core::statespace::{self, EmitFormat, Family, PairKind, SweepConfig};
use entlab_core::subspaces::{
    antichiral_basis, chiral_basis, chiral_triples_qutrit, flip_conjugate_basis, four_qubit_m,
    four_qutrit_chiral, projector_traces, tripartite_projectors, w_state,
};
use entlab_core::suite::{run_suite, SuiteKind};
use entlab_core::witness::{
    analytic_bounds, build_gme_witnesses, build_pt_witnesses, build_witnesses, WitnessKind,
};
use entlab_core::{povm, Error, Operator, Result, StateVector};

fn emit_json(payload: &JsonValue, copy: Option<&Path>) -> Result<()> {
    let text = payload.to_json_string();
    print!("{text}");
    if let Some(path) = copy {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

pub fn projectors(d: usize, out: Option<&Path>) -> Result<u8> {
    let pr = tripartite_projectors(d)?;
    let tr = projector_traces(d);
    println!(
        "sector projectors at d={d}: traces sym {} antisym {} chiral {} antichiral {}",
        tr.sym, tr.antisym, tr.chiral, tr.chiral
    );
    if let Some(path) = out {
        let basis_json = |basis: &entlab_core::subspaces::SubspaceBasis| {
            JsonValue::Array(basis.vectors.iter().map(state_to_json).collect())
        };
        let doc = JsonValue::Object(vec![
            ("local_dim".into(), JsonValue::Int(d as i64)),
            (
                "traces".into(),
                JsonValue::Object(vec![
                    ("sym".into(), JsonValue::Int(tr.sym)),
                    ("antisym".into(), JsonValue::Int(tr.antisym)),
                    ("chiral".into(), JsonValue::Int(tr.chiral)),
                    ("antichiral".into(), JsonValue::Int(tr.chiral)),
                ]),
            ),
            (
                "projectors".into(),
                JsonValue::Object(vec![
                    ("sym".into(), operator_to_json(&pr.sym)),
                    ("antisym".into(), operator_to_json(&pr.antisym)),
                    ("chiral".into(), operator_to_json(&pr.chiral)),
                    ("antichiral".into(), operator_to_json(&pr.antichiral)),
                ]),
            ),
            (
                "bases".into(),
                JsonValue::Object(vec![
                    ("chiral".into(), basis_json(&chiral_basis(d)?)),
                    ("antichiral".into(), basis_json(&antichiral_basis(d)?)),
                    ("flip_conjugate".into(), basis_json(&flip_conjugate_basis(d, None)?)),
                ]),
            ),
        ]);
        std::fs::write(path, doc.to_json_string())?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

pub fn witness(d: usize, which: &str, bounds: bool, out: Option<&Path>) -> Result<u8> {
    let (op, kind): (Operator, Option<WitnessKind>) = match which {
        "minus" => (build_witnesses(d)?.minus, Some(WitnessKind::Commutator)),
        "plus" => (build_witnesses(d)?.plus, Some(WitnessKind::Anticommutator)),
        "pt-minus" => (build_pt_witnesses(d)?.0, None),
        "pt-plus" => (build_pt_witnesses(d)?.1, None),
        "P" => (build_gme_witnesses(d)?.0, None),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown witness {other}; expected minus, plus, pt-minus, pt-plus, or P"
            )))
        }
    };
    let eig = op.eig()?;
    let lo = eig.values.first().copied().unwrap_or(0.0);
    let hi = eig.values.last().copied().unwrap_or(0.0);
    println!(
        "witness {which} at d={d}: dim {}, trace {}, spectrum [{}, {}]",
        op.dim(),
        fmt_f64(op.trace().re),
        fmt_f64(lo),
        fmt_f64(hi)
    );
    let mut bounds_fields = Vec::new();
    if bounds {
        let kind = kind.ok_or_else(|| {
            Error::InvalidInput("ceilings are defined for the plain pair: minus or plus".into())
        })?;
        let b = analytic_bounds(d, kind)?;
        println!(
            "ceilings: fully separable {}  biseparable {}  quantum {}",
            fmt_f64(b.fully_separable),
            fmt_f64(b.biseparable),
            fmt_f64(b.quantum)
        );
        bounds_fields = vec![(
            "bounds".into(),
            JsonValue::Object(vec![
                ("fully_separable".into(), JsonValue::Float(b.fully_separable)),
                ("biseparable".into(), JsonValue::Float(b.biseparable)),
                ("quantum".into(), JsonValue::Float(b.quantum)),
            ]),
        )];
    }
    if let Some(path) = out {
        let mut fields = vec![
            ("which".into(), JsonValue::Str(which.into())),
            ("local_dim".into(), JsonValue::Int(d as i64)),
            ("operator".into(), operator_to_json(&op)),
        ];
        fields.extend(bounds_fields);
        std::fs::write(path, JsonValue::Object(fields).to_json_string())?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn gm_preset(
    label: &str,
    d: Option<usize>,
    seed: u64,
) -> Result<(StateVector, String)> {
    let fix = |want: usize| -> Result<usize> {
        match d {
            None => Ok(want),
            Some(v) if v == want => Ok(want),
            Some(v) => Err(Error::InvalidInput(format!(
                "state {label} is defined at d={want}, not d={v}"
            ))),
        }
    };
    let mut rng = rng_from(sub_seed(seed, "gm-state", 0));
    match label {
        "w" => {
            fix(2)?;
            Ok((w_state(), "w".into()))
        }
        "chiral" => {
            let d = d.unwrap_or(2);
            Ok((chiral_basis(d)?.random_superposition(&mut rng), format!("chiral d={d}")))
        }
        "j2" => {
            fix(3)?;
            Ok((chiral_triples_qutrit()?.random_superposition(&mut rng), "j2".into()))
        }
        "flipconj" => {
            let d = d.unwrap_or(3);
            Ok((flip_conjugate_basis(d, None)?.vectors[0].clone(), format!("flipconj d={d}")))
        }
        "m4" => {
            fix(2)?;
            Ok((four_qubit_m(), "m4".into()))
        }
        "qutrit4" => {
            fix(3)?;
            Ok((four_qutrit_chiral(), "qutrit4".into()))
        }
        other => {
            if let Some(path) = other.strip_prefix("file:") {
                Ok((read_state(Path::new(path))?, other.into()))
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown state {other}; expected w, chiral, j2, flipconj, m4, qutrit4, or file:PATH"
                )))
            }
        }
    }
}

pub fn gm(
    state: &str,
    d: Option<usize>,
    restarts: Option<usize>,
    seed: u64,
    json: Option<&Path>,
) -> Result<u8> {
    let (psi, label) = gm_preset(state, d, seed)?;
    let shape = psi.shape();
    let mut cfg = if shape.parties == 4 {
        SeesawConfig::for_four_parties(sub_seed(seed, "gm", 0))
    } else {
        SeesawConfig::with_seed(sub_seed(seed, "gm", 0))
    };
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    let result = max_product_overlap(&psi, &cfg)?;
    let payload = JsonValue::Object(vec![
        ("state".into(), JsonValue::Str(label)),
        ("parties".into(), JsonValue::Int(shape.parties as i64)),
        ("local_dim".into(), JsonValue::Int(shape.local_dim as i64)),
        ("seed".into(), JsonValue::Int(seed as i64)),
        ("restarts".into(), JsonValue::Int(cfg.restarts as i64)),
        ("max_overlap".into(), JsonValue::Float(result.value)),
        ("geometric_measure".into(), JsonValue::Float(1.0 - result.value)),
        ("converged".into(), JsonValue::Bool(result.converged)),
    ]);
    emit_json(&payload, json)
        .map(|()| 0)
}

fn pptgme_csv(points: &[PptGmePoint]) -> String {
    let mut out = String::from("wplus,wminus,a,b,c,min_pt_eig,verdict\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(p.wplus),
            fmt_f64(p.wminus),
            fmt_f64(p.a),
            fmt_f64(p.b),
            fmt_f64(p.c),
            fmt_f64(p.min_pt_eig),
            if p.gme { "gme" } else { "inconclusive" }
        ));
    }
    out
}

pub fn sdp(
    problem: &str,
    d: usize,
    theta: f64,
    tol: f64,
    points: usize,
    csv: Option<&Path>,
    json: Option<&Path>,
) -> Result<u8> {
    match problem {
        "overlap" => {
            let value = ppt_relaxed_overlap(&flip_conjugate_conditional(d)?)?;
            let payload = JsonValue::Object(vec![
                ("problem".into(), JsonValue::Str("overlap".into())),
                ("local_dim".into(), JsonValue::Int(d as i64)),
                ("value".into(), JsonValue::Float(value)),
                ("geometric_measure".into(), JsonValue::Float(1.0 - value)),
            ]);
            emit_json(&payload, json)?;
        }
        "boundary" => {
            let (value, state) = invariant_boundary_point(d, theta, PptFamily::PptAll)?;
            let (wm, wp) = state.witness_expectations(&build_witnesses(d)?)?;
            let payload = JsonValue::Object(vec![
                ("problem".into(), JsonValue::Str("boundary".into())),
                ("local_dim".into(), JsonValue::Int(d as i64)),
                ("theta".into(), JsonValue::Float(theta)),
                ("value".into(), JsonValue::Float(value)),
                ("wminus".into(), JsonValue::Float(wm)),
                ("wplus".into(), JsonValue::Float(wp)),
            ]);
            emit_json(&payload, json)?;
        }
        "gme" => {
            let (value, state) = invariant_boundary_point(d, theta, PptFamily::PptAll)?;
            let decision = gme_decide(&state, tol)?;
            let payload = JsonValue::Object(vec![
                ("problem".into(), JsonValue::Str("gme".into())),
                ("local_dim".into(), JsonValue::Int(d as i64)),
                ("theta".into(), JsonValue::Float(theta)),
                ("boundary".into(), JsonValue::Float(value)),
                (
                    "verdict".into(),
                    JsonValue::Str(
                        match decision.verdict {
                            GmeVerdict::Gme => "gme",
                            GmeVerdict::Biseparable => "biseparable",
                        }
                        .into(),
                    ),
                ),
                ("optimum".into(), JsonValue::Float(decision.optimum)),
            ]);
            emit_json(&payload, json)?;
        }
        "pptgme" => {
            let found = find_ppt_gme(d, points)?;
            let table = pptgme_csv(&found);
            match csv {
                Some(path) => {
                    std::fs::write(path, &table)?;
                    let detected = found.iter().filter(|p| p.gme).count();
                    println!(
                        "pptgme d={d}: {} points, {detected} detected; wrote {}",
                        found.len(),
                        path.display()
                    );
                }
                None => print!("{table}"),
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown problem {other}; expected overlap, boundary, gme, or pptgme"
            )))
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn statespace(
    d: usize,
    pair: &str,
    families: &str,
    grid: usize,
    restarts: usize,
    overlay: Option<usize>,
    seed: u64,
    csv: Option<&Path>,
    svg: Option<&Path>,
) -> Result<u8> {
    let pair = PairKind::from_label(pair)
        .ok_or_else(|| Error::InvalidInput(format!("unknown pair {pair}; expected w or wpt")))?;
    let parsed: Vec<Family> = families
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            Family::from_label(s)
                .ok_or_else(|| Error::InvalidInput(format!("unknown family {s}")))
        })
        .collect::<Result<_>>()?;
    let cfg = SweepConfig { grid, seed, restarts, overlay };
    let table = statespace::sweep(d, pair, &parsed, &cfg)?;
    println!("statespace d={d} pair={} grid={grid}", table.pair.label());
    for family in &parsed {
        let values: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.family == *family)
            .map(|r| r.value)
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "  {}: {} angles, support in [{}, {}]",
            family.display_name(),
            values.len(),
            fmt_f64(lo),
            fmt_f64(hi)
        );
    }
    if !table.gme_overlay.is_empty() {
        println!("  overlay: {} PPT-GME points", table.gme_overlay.len());
    }
    if let Some(path) = csv {
        statespace::emit(&table, EmitFormat::Csv, path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = svg {
        statespace::emit(&table, EmitFormat::Svg, path)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn povm_state(label: &str, d: Option<usize>) -> Result<StateVector> {
    match label {
        "w" => match d {
            None | Some(2) => Ok(w_state()),
            Some(v) => Err(Error::InvalidInput(format!("preset w is defined at d=2, not d={v}"))),
        },
        "chiral" => Ok(chiral_basis(d.unwrap_or(2))?.vectors[0].clone()),
        "antichiral" => Ok(antichiral_basis(d.unwrap_or(2))?.vectors[0].clone()),
        "flipconj" => Ok(flip_conjugate_basis(d.unwrap_or(3), None)?.vectors[0].clone()),
        "product" => {
            let d = d.unwrap_or(2);
            StateVector::basis_state(3, d, &[0, 0, 0])
        }
        path => read_state(Path::new(path)),
    }
}

pub fn povm(
    state: &str,
    d: Option<usize>,
    shots: Option<u64>,
    gce_k: u32,
    seed: u64,
    json: Option<&Path>,
) -> Result<u8> {
    let psi = povm_state(state, d)?;
    let mode = match shots {
        Some(shots) => povm::TestMode::Sampled { shots, seed: sub_seed(seed, "povm", 0) },
        None => povm::TestMode::Exact,
    };
    let record = povm::permutation_test(&psi, mode)?;
    let first_party = psi.reduced_density(&[0])?;
    let cube = povm::trace_cube(&first_party)?;
    let parties: Vec<usize> = (0..psi.shape().parties).collect();
    let gce = povm::gce(&psi, &parties, gce_k)?;
    let payload = JsonValue::Object(vec![
        ("p".into(), JsonValue::floats(&record.probabilities)),
        (
            "counts".into(),
            JsonValue::Array(record.counts.iter().map(|&c| JsonValue::Int(c as i64)).collect()),
        ),
        ("trace_cube".into(), JsonValue::Float(cube)),
        ("gce".into(), JsonValue::Float(gce)),
    ]);
    emit_json(&payload, json).map(|()| 0)
}

pub fn verify(suite: &str, seed: u64) -> Result<u8> {
    let kind = SuiteKind::from_label(suite)?;
    let reports = run_suite(kind, seed)?;
    let mut failed = 0usize;
    for report in &reports {
        println!("{}", report.status_line());
        if !report.passed() {
            failed += 1;
            for check in report.checks.iter().filter(|c| !c.pass) {
                println!("  FAIL {}: {}", check.label, check.detail);
            }
        }
    }
    println!(
        "suite {}: {} of {} criteria passed",
        kind.label(),
        reports.len() - failed,
        reports.len()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}
