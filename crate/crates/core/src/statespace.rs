//! Boundary sweeps of the three-party state space projected onto a witness
//! plane. For each angle on a uniform grid the support function of a family
//! (fully separable, biseparable, PPT variants, quantum) is evaluated together
//! with the expectation pair of its maximizer, which traces the family's
//! boundary curve. Tables are emitted as CSV, JSON, or a self-contained SVG.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{fmt_f64, JsonValue};
use crate::linalg::{Operator, StateVector};
use crate::sdp::{
    find_ppt_gme, invariant_boundary_point, ppt_state_boundary, PptFamily, PptGmePoint,
};
use crate::seesaw::{
    biseparable_max_from, fully_separable_max, fully_separable_max_from, BiseparableResult,
    ProductState, SeesawConfig,
};
use crate::witness::{build_pt_witnesses, build_witnesses, spectral_coefficients, WitnessPair};

/// Which two commuting-or-not observables span the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// commutator / anticommutator witnesses; these commute and the quantum
    /// region is a polytope
    Permutation,
    /// the same pair transposed on the first party; no longer commuting
    Transposed,
}

impl PairKind {
    pub fn label(self) -> &'static str {
        match self {
            PairKind::Permutation => "w",
            PairKind::Transposed => "wpt",
        }
    }

    pub fn from_label(s: &str) -> Option<PairKind> {
        match s {
            "w" => Some(PairKind::Permutation),
            "wpt" => Some(PairKind::Transposed),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    FullySeparable,
    Biseparable,
    /// PPT under all three cuts
    PptAll,
    /// PPT under one marked cut
    PptSingle(usize),
    /// convex hull of the three single-cut PPT regions; its support function
    /// is the max of theirs
    PptMixture,
    Quantum,
}

impl Family {
    pub fn label(self) -> String {
        match self {
            Family::FullySeparable => "fs".into(),
            Family::Biseparable => "bs".into(),
            Family::PptAll => "ppt".into(),
            Family::PptSingle(p) => format!("ppt{p}"),
            Family::PptMixture => "pptmix".into(),
            Family::Quantum => "quantum".into(),
        }
    }

    pub fn display_name(self) -> String {
        match self {
            Family::FullySeparable => "fully separable".into(),
            Family::Biseparable => "biseparable".into(),
            Family::PptAll => "PPT all cuts".into(),
            Family::PptSingle(p) => format!("PPT cut {p}"),
            Family::PptMixture => "PPT mixture".into(),
            Family::Quantum => "quantum".into(),
        }
    }

    pub fn from_label(s: &str) -> Option<Family> {
        match s {
            "fs" => Some(Family::FullySeparable),
            "bs" => Some(Family::Biseparable),
            "ppt" => Some(Family::PptAll),
            "ppt0" => Some(Family::PptSingle(0)),
            "ppt1" => Some(Family::PptSingle(1)),
            "ppt2" => Some(Family::PptSingle(2)),
            "pptmix" => Some(Family::PptMixture),
            "quantum" => Some(Family::Quantum),
            _ => None,
        }
    }

    /// smaller regions drawn later so they stay visible
    fn draw_rank(self) -> u8 {
        match self {
            Family::Quantum => 0,
            Family::PptMixture => 1,
            Family::PptSingle(_) => 2,
            Family::PptAll => 3,
            Family::Biseparable => 4,
            Family::FullySeparable => 5,
        }
    }

    fn color(self) -> &'static str {
        match self {
            Family::FullySeparable => "#4e79a7",
            Family::Biseparable => "#f28e2b",
            Family::PptAll => "#59a14f",
            Family::PptSingle(_) => "#8cd17d",
            Family::PptMixture => "#76b7b2",
            Family::Quantum => "#bab0ac",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub theta: f64,
    pub family: Family,
    /// support value max <cos(theta) X + sin(theta) Y> over the family
    pub value: f64,
    /// expectation pair of the maximizer
    pub wx: f64,
    pub wy: f64,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub local_dim: usize,
    pub pair: PairKind,
    /// family-major, theta ascending within each family
    pub rows: Vec<SweepRow>,
    /// PPT-and-GME witness points layered on top of the regions
    pub gme_overlay: Vec<PptGmePoint>,
}

impl SweepTable {
    fn series(&self, family: Family) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.family == family).collect()
    }

    fn families(&self) -> Vec<Family> {
        let mut out = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.family) {
                out.push(r.family);
            }
        }
        out
    }

    /// Pointwise inclusion of the separability families, checked on support
    /// values: fully separable below everything, quantum above everything,
    /// biseparable and the PPT families below the PPT mixture.
    pub fn check_nesting(&self, tol: f64) -> Result<()> {
        let present = self.families();
        for &lo in &present {
            for &hi in &present {
                if lo == hi || !nests_inside(lo, hi) {
                    continue;
                }
                let below = self.series(lo);
                let above = self.series(hi);
                if below.len() != above.len() {
                    return Err(Error::InvalidInput(format!(
                        "families {} and {} sampled on different grids",
                        lo.label(),
                        hi.label()
                    )));
                }
                for (a, b) in below.iter().zip(&above) {
                    if (a.theta - b.theta).abs() > 1e-12 {
                        return Err(Error::InvalidInput("misaligned theta grids".into()));
                    }
                    if a.value > b.value + tol {
                        return Err(Error::InvalidInput(format!(
                            "nesting violated at theta {:.6}: {} = {:.9} exceeds {} = {:.9}",
                            a.theta,
                            lo.label(),
                            a.value,
                            hi.label(),
                            b.value
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn nests_inside(lo: Family, hi: Family) -> bool {
    use Family::*;
    match (lo, hi) {
        (FullySeparable, _) => true,
        (_, Quantum) => true,
        (Biseparable, PptMixture) => true,
        (PptAll, PptSingle(_)) | (PptAll, PptMixture) => true,
        (PptSingle(_), PptMixture) => true,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    /// uniform samples of [0, 2 pi); at least 16
    pub grid: usize,
    pub seed: u64,
    /// see-saw restarts per angle for the separability families
    pub restarts: usize,
    /// when set, also run the PPT-GME search with this many pin values
    pub overlay: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { grid: 360, seed: 17, restarts: 64, overlay: None }
    }
}

fn tilt(wx: &Operator, wy: &Operator, theta: f64) -> Result<Operator> {
    wx.scale(Complex64::new(theta.cos(), 0.0))
        .add(&wy.scale(Complex64::new(theta.sin(), 0.0)))
}

fn seesaw_cfg(cfg: &SweepConfig, salt: u64, k: usize) -> SeesawConfig {
    let mut s = SeesawConfig::with_seed(cfg.seed ^ (salt << 48) ^ (k as u64).wrapping_mul(0x9e3779b97f4a7c15));
    s.restarts = cfg.restarts.max(1);
    s
}

/// Support-function sweep of the requested families over a uniform angle grid.
///
/// The fully separable and biseparable rows run see-saw ascent, warm-started
/// from the neighboring angle's optimizer; the PPT rows solve semidefinite
/// programs (the 6-variable invariant form for the commuting pair, the full
/// density matrix for the transposed pair, which is why that combination is
/// limited to d = 3); the quantum rows take the top eigenvalue.
pub fn sweep(d: usize, pair: PairKind, families: &[Family], cfg: &SweepConfig) -> Result<SweepTable> {
    if !(3..=4).contains(&d) {
        return Err(Error::Unsupported("sweeps cover d in {3, 4}".into()));
    }
    if cfg.grid < 16 {
        return Err(Error::InvalidInput(format!("grid {} is below 16", cfg.grid)));
    }
    if families.is_empty() {
        return Err(Error::InvalidInput("no families requested".into()));
    }
    for (i, f) in families.iter().enumerate() {
        if families[..i].contains(f) {
            return Err(Error::InvalidInput(format!("family {} requested twice", f.label())));
        }
        if let Family::PptSingle(p) = f {
            if *p > 2 {
                return Err(Error::InvalidParty { party: *p, parties: 3 });
            }
        }
    }
    let plain = build_witnesses(d)?;
    let (wx, wy) = match pair {
        PairKind::Permutation => (plain.minus.clone(), plain.plus.clone()),
        PairKind::Transposed => build_pt_witnesses(d)?,
    };
    let ppt_requested = families.iter().any(|f| {
        matches!(f, Family::PptAll | Family::PptSingle(_) | Family::PptMixture)
    });
    if pair == PairKind::Transposed && ppt_requested && d != 3 {
        return Err(Error::Unsupported(
            "transposed-pair PPT boundaries use the full matrix variable and need d = 3".into(),
        ));
    }
    let thetas: Vec<f64> =
        (0..cfg.grid).map(|k| std::f64::consts::TAU * k as f64 / cfg.grid as f64).collect();
    let mut rows = Vec::with_capacity(cfg.grid * families.len());
    for &family in families {
        rows.extend(family_rows(d, pair, family, &wx, &wy, &plain, &thetas, cfg)?);
    }
    let gme_overlay = match cfg.overlay {
        None => Vec::new(),
        Some(points) => {
            if pair != PairKind::Permutation {
                return Err(Error::Unsupported(
                    "the PPT-GME overlay lives in the commuting pair's plane".into(),
                ));
            }
            find_ppt_gme(d, points)?
        }
    };
    Ok(SweepTable { local_dim: d, pair, rows, gme_overlay })
}

#[allow(clippy::too_many_arguments)]
fn family_rows(
    d: usize,
    pair: PairKind,
    family: Family,
    wx: &Operator,
    wy: &Operator,
    plain: &WitnessPair,
    thetas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    match family {
        Family::Quantum => thetas
            .par_iter()
            .map(|&theta| {
                let op = tilt(wx, wy, theta)?;
                let eig = op.eig()?;
                let psi = StateVector::from_unnormalized(3, d, eig.vector(op.dim() - 1))?;
                Ok(SweepRow {
                    theta,
                    family,
                    value: eig.max(),
                    wx: wx.expectation(&psi)?.re,
                    wy: wy.expectation(&psi)?.re,
                })
            })
            .collect(),
        Family::FullySeparable => {
            let mut rows = Vec::with_capacity(thetas.len());
            let mut warm: Option<ProductState> = None;
            for (k, &theta) in thetas.iter().enumerate() {
                let op = tilt(wx, wy, theta)?;
                let scfg = seesaw_cfg(cfg, 0xf5, k);
                let res = match warm.as_ref() {
                    Some(ws) => fully_separable_max_from(&op, &scfg, ws)?,
                    None => fully_separable_max(&op, &scfg)?,
                };
                let psi = res.argument.state_vector()?;
                rows.push(SweepRow {
                    theta,
                    family,
                    value: res.value,
                    wx: wx.expectation(&psi)?.re,
                    wy: wy.expectation(&psi)?.re,
                });
                warm = Some(res.argument);
            }
            Ok(rows)
        }
        Family::Biseparable => {
            let mut rows = Vec::with_capacity(thetas.len());
            let mut warm: Option<BiseparableResult> = None;
            for (k, &theta) in thetas.iter().enumerate() {
                let op = tilt(wx, wy, theta)?;
                let scfg = seesaw_cfg(cfg, 0xb5, k);
                let res = biseparable_max_from(&op, &scfg, warm.as_ref())?;
                rows.push(SweepRow {
                    theta,
                    family,
                    value: res.value,
                    wx: wx.expectation(&res.state)?.re,
                    wy: wy.expectation(&res.state)?.re,
                });
                warm = Some(res);
            }
            Ok(rows)
        }
        Family::PptAll | Family::PptSingle(_) | Family::PptMixture => match pair {
            PairKind::Permutation => {
                let specs: Vec<PptFamily> = match family {
                    Family::PptAll => vec![PptFamily::PptAll],
                    Family::PptSingle(p) => vec![PptFamily::PptSingle(p)],
                    _ => (0..3).map(PptFamily::PptSingle).collect(),
                };
                thetas
                    .par_iter()
                    .map(|&theta| {
                        let mut best: Option<SweepRow> = None;
                        for &spec in &specs {
                            let (value, state) = invariant_boundary_point(d, theta, spec)?;
                            let (px, py) = state.witness_expectations(plain)?;
                            if best.as_ref().is_none_or(|b| value > b.value) {
                                best = Some(SweepRow { theta, family, value, wx: px, wy: py });
                            }
                        }
                        Ok(best.expect("at least one cut"))
                    })
                    .collect()
            }
            PairKind::Transposed => {
                let cut_sets: Vec<Vec<usize>> = match family {
                    Family::PptAll => vec![vec![0, 1, 2]],
                    Family::PptSingle(p) => vec![vec![p]],
                    _ => (0..3).map(|p| vec![p]).collect(),
                };
                thetas
                    .par_iter()
                    .map(|&theta| {
                        let mut best: Option<SweepRow> = None;
                        for cuts in &cut_sets {
                            let (value, (px, py)) = ppt_state_boundary(wx, wy, theta, cuts)?;
                            if best.as_ref().is_none_or(|b| value > b.value) {
                                best = Some(SweepRow { theta, family, value, wx: px, wy: py });
                            }
                        }
                        Ok(best.expect("at least one cut"))
                    })
                    .collect()
            }
        },
    }
}

// ---------------------------------------------------------------------------
// polytope vertices of the commuting plane

#[derive(Clone, Copy, Debug)]
pub struct VertexPoint {
    pub label: &'static str,
    pub wx: f64,
    pub wy: f64,
}

/// Extremal points of the commuting pair's quantum region: the chiral,
/// antichiral and antisymmetric sector states span a triangle, the symmetric
/// point sits inside it.
pub fn vertices(d: usize) -> Result<Vec<VertexPoint>> {
    if d < 3 {
        return Err(Error::Unsupported("vertices need d >= 3".into()));
    }
    let sc = spectral_coefficients(d)?;
    Ok(vec![
        VertexPoint { label: "chiral", wx: -sc.alpha, wy: sc.c_chiral },
        VertexPoint { label: "antichiral", wx: sc.alpha, wy: sc.c_chiral },
        VertexPoint { label: "antisymmetric", wx: 0.0, wy: sc.c_antisym },
        VertexPoint { label: "symmetric", wx: 0.0, wy: sc.c_sym },
    ])
}

/// Support function of the quantum triangle: the commuting pair is jointly
/// diagonalizable, so the max over states is the max over the three vertices.
pub fn triangle_support(d: usize, theta: f64) -> Result<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let best = vertices(d)?[..3]
        .iter()
        .map(|v| c * v.wx + s * v.wy)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best)
}

// ---------------------------------------------------------------------------
// emission

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
    Svg,
}

/// Writes the table in the requested format. Output bytes depend only on the
/// table contents. The overlay appears in CSV under the family label `pptgme`
/// with the pin index in the theta column and the certified weight as value.
pub fn emit(table: &SweepTable, format: EmitFormat, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::InvalidInput("refusing to emit an empty sweep table".into()));
    }
    let payload = match format {
        EmitFormat::Csv => render_csv(table),
        EmitFormat::Json => render_json(table).to_json_string(),
        EmitFormat::Svg => render_svg(table),
    };
    std::fs::write(path, payload)?;
    Ok(())
}

fn render_csv(table: &SweepTable) -> String {
    let mut out = String::from("theta,family,value,wx,wy\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.theta),
            r.family.label(),
            fmt_f64(r.value),
            fmt_f64(r.wx),
            fmt_f64(r.wy)
        );
    }
    for (k, p) in table.gme_overlay.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},pptgme,{},{},{}",
            fmt_f64(k as f64),
            fmt_f64(p.a),
            fmt_f64(p.wminus),
            fmt_f64(p.wplus)
        );
    }
    out
}

pub fn render_json(table: &SweepTable) -> JsonValue {
    let rows = table
        .rows
        .iter()
        .map(|r| {
            JsonValue::Object(vec![
                ("theta".into(), JsonValue::Float(r.theta)),
                ("family".into(), JsonValue::Str(r.family.label())),
                ("value".into(), JsonValue::Float(r.value)),
                ("wx".into(), JsonValue::Float(r.wx)),
                ("wy".into(), JsonValue::Float(r.wy)),
            ])
        })
        .collect();
    let overlay = table
        .gme_overlay
        .iter()
        .map(|p| {
            JsonValue::Object(vec![
                ("wplus".into(), JsonValue::Float(p.wplus)),
                ("wminus".into(), JsonValue::Float(p.wminus)),
                ("a".into(), JsonValue::Float(p.a)),
                ("b".into(), JsonValue::Float(p.b)),
                ("c".into(), JsonValue::Float(p.c)),
                ("min_pt_eig".into(), JsonValue::Float(p.min_pt_eig)),
                ("gme".into(), JsonValue::Bool(p.gme)),
            ])
        })
        .collect();
    JsonValue::Object(vec![
        ("local_dim".into(), JsonValue::Int(table.local_dim as i64)),
        ("pair".into(), JsonValue::Str(table.pair.label().into())),
        ("rows".into(), JsonValue::Array(rows)),
        ("ppt_gme_overlay".into(), JsonValue::Array(overlay)),
    ])
}

fn render_svg(table: &SweepTable) -> String {
    const W: f64 = 720.0;
    const H: f64 = 540.0;
    const ML: f64 = 64.0;
    const MR: f64 = 18.0;
    const MT: f64 = 18.0;
    const MB: f64 = 46.0;

    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let mut grow = |x: f64, y: f64| {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    };
    for r in &table.rows {
        grow(r.wx, r.wy);
    }
    for p in &table.gme_overlay {
        grow(p.wminus, p.wplus);
    }
    let dx = (xmax - xmin).max(1e-9);
    let dy = (ymax - ymin).max(1e-9);
    let (xmin, xmax) = (xmin - 0.08 * dx, xmax + 0.08 * dx);
    let (ymin, ymax) = (ymin - 0.08 * dy, ymax + 0.08 * dy);
    let sx = |x: f64| ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    let sy = |y: f64| MT + (ymax - y) / (ymax - ymin) * (H - MT - MB);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    // frame and ticks
    let _ = writeln!(
        out,
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444444\"/>",
        W - ML - MR,
        H - MT - MB
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = xmin + f * (xmax - xmin);
        let yv = ymin + f * (ymax - ymin);
        let px = sx(xv);
        let py = sy(yv);
        let _ = writeln!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{MT}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
            H - MB
        );
        let _ = writeln!(
            out,
            "<line x1=\"{ML}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>",
            W - MR
        );
        let _ = writeln!(
            out,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.2}</text>",
            H - MB + 16.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.2}</text>",
            ML - 6.0,
            py + 4.0
        );
    }
    let (xlab, ylab) = match table.pair {
        PairKind::Permutation => ("&lt;W-&gt;", "&lt;W+&gt;"),
        PairKind::Transposed => ("&lt;PT W-&gt;", "&lt;PT W+&gt;"),
    };
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xlab}</text>",
        (ML + W - MR) / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        out,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{ylab}</text>",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    );

    let mut families = table.families();
    families.sort_by_key(|f| f.draw_rank());
    for &family in &families {
        let mut pts = String::new();
        for r in table.rows.iter().filter(|r| r.family == family) {
            let _ = write!(pts, "{:.2},{:.2} ", sx(r.wx), sy(r.wy));
        }
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.45\" stroke=\"{}\" stroke-width=\"1\"/>",
            pts.trim_end(),
            family.color(),
            family.color()
        );
    }
    for p in &table.gme_overlay {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#e15759\"/>",
            sx(p.wminus),
            sy(p.wplus)
        );
    }
    // legend, drawn last
    let mut ly = MT + 14.0;
    for &family in &families {
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\" fill-opacity=\"0.45\" stroke=\"{}\"/>",
            ML + 10.0,
            ly - 10.0,
            family.color(),
            family.color()
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{ly:.2}\">{}</text>",
            ML + 28.0,
            family.display_name()
        );
        ly += 18.0;
    }
    if !table.gme_overlay.is_empty() {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"#e15759\"/>",
            ML + 16.0,
            ly - 4.0
        );
        let _ = writeln!(out, "<text x=\"{:.2}\" y=\"{ly:.2}\">PPT &amp; GME</text>", ML + 28.0);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspaces::{chiral_basis, tripartite_projectors};
    use crate::witness::{analytic_bounds, WitnessKind};
    use num_complex::Complex64;
    use rand::Rng;

    fn small_cfg(grid: usize, restarts: usize) -> SweepConfig {
        SweepConfig { grid, seed: 23, restarts, overlay: None }
    }

    #[test]
    fn quantum_boundary_is_the_vertex_polytope() {
        for d in [3usize, 4] {
            let table =
                sweep(d, PairKind::Permutation, &[Family::Quantum], &small_cfg(24, 1)).unwrap();
            for r in &table.rows {
                let tri = triangle_support(d, r.theta).unwrap();
                assert!(
                    (r.value - tri).abs() < 1e-8,
                    "d={d} theta={}: eig {} vs polytope {}",
                    r.theta,
                    r.value,
                    tri
                );
            }
        }
    }

    #[test]
    fn vertex_points_match_sector_states() {
        for d in [3usize, 4] {
            let pair = build_witnesses(d).unwrap();
            let verts = vertices(d).unwrap();
            let projectors = tripartite_projectors(d).unwrap();
            let mut rng = crate::rng::rng_from(5 + d as u64);
            let sector_state = |proj: &Operator, rng: &mut rand_chacha::ChaCha8Rng| {
                let dim = proj.dim();
                let raw: Vec<Complex64> = (0..dim)
                    .map(|_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .collect();
                let projected = proj.matrix().matvec(&raw);
                StateVector::from_unnormalized(3, d, projected).unwrap()
            };
            let states = [
                chiral_basis(d).unwrap().random_superposition(&mut rng),
                {
                    let anti = crate::subspaces::antichiral_basis(d).unwrap();
                    anti.random_superposition(&mut rng)
                },
                sector_state(&projectors.antisym, &mut rng),
                sector_state(&projectors.sym, &mut rng),
            ];
            for (v, psi) in verts.iter().zip(&states) {
                let mx = pair.minus.expectation(psi).unwrap().re;
                let px = pair.plus.expectation(psi).unwrap().re;
                assert!(
                    (mx - v.wx).abs() < 1e-9 && (px - v.wy).abs() < 1e-9,
                    "d={d} {}: measured ({mx}, {px}) vs vertex ({}, {})",
                    v.label,
                    v.wx,
                    v.wy
                );
            }
        }
    }

    #[test]
    fn families_nest_on_a_coarse_grid() {
        let families = [
            Family::FullySeparable,
            Family::Biseparable,
            Family::PptAll,
            Family::PptMixture,
            Family::Quantum,
        ];
        let table = sweep(3, PairKind::Permutation, &families, &small_cfg(16, 16)).unwrap();
        assert_eq!(table.rows.len(), 16 * families.len());
        table.check_nesting(1e-6).unwrap();
        // the angle 0 boundary of product states reproduces the commutator bound
        let fs0 = &table.series(Family::FullySeparable)[0];
        assert!(fs0.theta.abs() < 1e-15);
        let bound = analytic_bounds(3, WitnessKind::Commutator).unwrap();
        assert!(
            (fs0.value - bound.fully_separable).abs() < 1e-7,
            "fs support at 0: {} vs {}",
            fs0.value,
            bound.fully_separable
        );
    }

    #[test]
    fn transposed_pair_boundary_is_curved() {
        let table = sweep(3, PairKind::Transposed, &[Family::Quantum], &small_cfg(24, 1)).unwrap();
        let rows = table.series(Family::Quantum);
        let mut max_cross: f64 = 0.0;
        for k in 0..rows.len() {
            let p1 = rows[k];
            let p2 = rows[(k + 1) % rows.len()];
            let p3 = rows[(k + 2) % rows.len()];
            let cross = (p2.wx - p1.wx) * (p3.wy - p1.wy) - (p2.wy - p1.wy) * (p3.wx - p1.wx);
            max_cross = max_cross.max(cross.abs());
        }
        assert!(max_cross > 1e-4, "support points look collinear: {max_cross}");
    }

    #[test]
    fn emitters_are_deterministic() {
        let cfg = SweepConfig { grid: 16, seed: 9, restarts: 8, overlay: None };
        let families = [Family::FullySeparable, Family::Quantum];
        let t1 = sweep(3, PairKind::Permutation, &families, &cfg).unwrap();
        let t2 = sweep(3, PairKind::Permutation, &families, &cfg).unwrap();
        let dir = std::env::temp_dir().join(format!("statespace-emit-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
        emit(&t1, EmitFormat::Csv, &a).unwrap();
        emit(&t2, EmitFormat::Csv, &b).unwrap();
        let bytes_a = std::fs::read(&a).unwrap();
        assert_eq!(bytes_a, std::fs::read(&b).unwrap());
        let text = String::from_utf8(bytes_a).unwrap();
        assert!(text.starts_with("theta,family,value,wx,wy\n"));
        assert_eq!(text.lines().count(), 1 + 16 * families.len());

        let j = dir.join("t.json");
        emit(&t1, EmitFormat::Json, &j).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
        assert_eq!(parsed["local_dim"], 3);
        assert_eq!(parsed["rows"].as_array().unwrap().len(), 32);

        let s = dir.join("t.svg");
        emit(&t1, EmitFormat::Svg, &s).unwrap();
        let svg = std::fs::read_to_string(&s).unwrap();
        assert!(svg.starts_with("<svg "));
        assert_eq!(svg.matches("<polygon").count(), families.len());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn empty_table_is_rejected_without_output() {
        let table = SweepTable {
            local_dim: 3,
            pair: PairKind::Permutation,
            rows: Vec::new(),
            gme_overlay: Vec::new(),
        };
        let path = std::env::temp_dir().join(format!("statespace-empty-{}.csv", std::process::id()));
        assert!(emit(&table, EmitFormat::Csv, &path).is_err());
        assert!(!path.exists());
    }
}
