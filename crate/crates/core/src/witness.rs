//! Gell-Mann operator basis, the symmetric and antisymmetric structure
//! constants of su(d), and the witness operators assembled from them: the
//! commutator and anticommutator witnesses, their partial transposes, and the
//! projector-difference witnesses for genuine multipartite entanglement.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Operator, StateVector};
use crate::subspaces::{tripartite_projectors, PermutationKind};

/// Traceless Hermitian basis of d x d operators with Tr(l_i l_j) = d delta_ij.
/// Ordering: real pair family (i<j) lexicographic, imaginary pair family (i<j)
/// lexicographic, then diagonal.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    pub local_dim: usize,
    pub matrices: Vec<Operator>,
}

impl GellMannBasis {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Sign picked up by each basis matrix under transposition: -1 for the
    /// imaginary pair family, +1 elsewhere.
    pub fn transpose_signs(&self) -> Vec<f64> {
        let d = self.local_dim;
        let np = d * (d - 1) / 2;
        (0..self.matrices.len())
            .map(|i| if (np..2 * np).contains(&i) { -1.0 } else { 1.0 })
            .collect()
    }
}

pub fn gellmann_basis(d: usize) -> Result<GellMannBasis> {
    if d < 2 {
        return Err(Error::InvalidInput("basis needs d >= 2".into()));
    }
    let s = (d as f64 / 2.0).sqrt();
    let mut matrices = Vec::with_capacity(d * d - 1);
    let mut push = |mat: CMatrix| -> Result<()> {
        matrices.push(Operator::new(1, d, mat.scale(Complex64::new(s, 0.0)))?);
        Ok(())
    };
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::ONE;
            m[(k, j)] = Complex64::ONE;
            push(m)?;
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(0.0, -1.0);
            m[(k, j)] = Complex64::new(0.0, 1.0);
            push(m)?;
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-norm * l as f64, 0.0);
        push(m)?;
    }
    Ok(GellMannBasis { local_dim: d, matrices })
}

/// Symmetric (kappa_plus) and antisymmetric (kappa_minus) structure constants
/// of the basis, stored dense over all index triples.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub local_dim: usize,
    m: usize,
    pub kappa_minus: Vec<f64>,
    pub kappa_plus: Vec<f64>,
}

impl StructureConstants {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.m + j) * self.m + k
    }

    pub fn minus(&self, i: usize, j: usize, k: usize) -> f64 {
        self.kappa_minus[self.idx(i, j, k)]
    }

    pub fn plus(&self, i: usize, j: usize, k: usize) -> f64 {
        self.kappa_plus[self.idx(i, j, k)]
    }
}

pub fn structure_constants(basis: &GellMannBasis) -> StructureConstants {
    let d = basis.local_dim;
    let m = basis.len();
    let dd = (d * d) as f64;
    let mut kappa_minus = vec![0.0; m * m * m];
    let mut kappa_plus = vec![0.0; m * m * m];
    for j in 0..m {
        for k in 0..m {
            let jk = basis.matrices[j].matrix().mul(basis.matrices[k].matrix());
            let kj = basis.matrices[k].matrix().mul(basis.matrices[j].matrix());
            let comm = jk.sub(&kj);
            let anti = jk.add(&kj);
            for i in 0..m {
                let li = basis.matrices[i].matrix();
                let tm = trace_product(li, &comm);
                let tp = trace_product(li, &anti);
                kappa_minus[(i * m + j) * m + k] = (Complex64::new(0.0, -1.0) * tm).re / dd;
                kappa_plus[(i * m + j) * m + k] = tp.re / dd;
            }
        }
    }
    StructureConstants { local_dim: d, m, kappa_minus, kappa_plus }
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::ZERO;
    for p in 0..n {
        for q in 0..n {
            acc += a[(p, q)] * b[(q, p)];
        }
    }
    acc
}

/// Sum of kappa_ijk l_i x l_j x l_k over all triples.
pub fn assemble_witness(basis: &GellMannBasis, kappa: &[f64]) -> Result<Operator> {
    let d = basis.local_dim;
    let m = basis.len();
    if kappa.len() != m * m * m {
        return Err(Error::DimensionMismatch("kappa length".into()));
    }
    let dim = d * d * d;
    let mut acc = CMatrix::zeros(dim, dim);
    for j in 0..m {
        for k in 0..m {
            // head factor of the pair (j,k): sum_i kappa_ijk l_i
            let mut head = CMatrix::zeros(d, d);
            let mut nonzero = false;
            for i in 0..m {
                let c = kappa[(i * m + j) * m + k];
                if c.abs() > 1e-15 {
                    head = head.add(&basis.matrices[i].matrix().scale(Complex64::new(c, 0.0)));
                    nonzero = true;
                }
            }
            if !nonzero {
                continue;
            }
            let tail = basis.matrices[j].matrix().kron(basis.matrices[k].matrix());
            acc = acc.add(&head.kron(&tail));
        }
    }
    Operator::new(3, d, acc)
}

/// The two invariant witnesses. For qubits the anticommutator variant is the
/// zero operator; `plus_vanishes` records that.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub minus: Operator,
    pub plus: Operator,
    pub plus_vanishes: bool,
}

pub fn build_witnesses(d: usize) -> Result<WitnessPair> {
    let basis = gellmann_basis(d)?;
    let kappa = structure_constants(&basis);
    let minus = assemble_witness(&basis, &kappa.kappa_minus)?;
    let plus = assemble_witness(&basis, &kappa.kappa_plus)?;
    let plus_vanishes = plus.matrix().max_abs() < 1e-10;
    Ok(WitnessPair { minus, plus, plus_vanishes })
}

/// Eigenvalues of the witnesses on the four permutation sectors.
#[derive(Clone, Copy, Debug)]
pub struct SpectralCoefficients {
    /// commutator witness: +alpha on the antichiral sector, -alpha on the chiral
    pub alpha: f64,
    pub c_sym: f64,
    pub c_antisym: f64,
    pub c_chiral: f64,
}

pub fn spectral_coefficients(d: usize) -> Result<SpectralCoefficients> {
    if d < 2 {
        return Err(Error::InvalidInput("spectral coefficients need d >= 2".into()));
    }
    let df = d as f64;
    Ok(SpectralCoefficients {
        alpha: df * 3f64.sqrt(),
        c_sym: 2.0 * (df - 1.0) * (df - 2.0) / df,
        c_antisym: 2.0 * (df + 1.0) * (df + 2.0) / df,
        c_chiral: -(df + 2.0) * (df - 2.0) / df,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Commutator,
    Anticommutator,
}

/// Expectation-value ceilings of a witness over the three state classes.
#[derive(Clone, Copy, Debug)]
pub struct WitnessBounds {
    pub witness: WitnessKind,
    pub fully_separable: f64,
    pub biseparable: f64,
    pub quantum: f64,
}

pub fn analytic_bounds(d: usize, witness: WitnessKind) -> Result<WitnessBounds> {
    let df = d as f64;
    let (fully_separable, biseparable, quantum) = match witness {
        WitnessKind::Commutator if d >= 2 => (df / 2.0, df, df * 3f64.sqrt()),
        WitnessKind::Anticommutator if d == 3 => (4.0 / 3.0, 10.0 / 3.0, 40.0 / 3.0),
        WitnessKind::Anticommutator if d >= 4 => {
            let c = spectral_coefficients(d)?;
            (c.c_sym, c.c_sym, c.c_antisym)
        }
        WitnessKind::Anticommutator => {
            return Err(Error::Unsupported("anticommutator witness vanishes for qubits".into()));
        }
        _ => return Err(Error::InvalidInput("bounds need d >= 2".into())),
    };
    Ok(WitnessBounds { witness, fully_separable, biseparable, quantum })
}

/// <anchor| W |anchor> on the remaining parties.
pub fn conditional_observable(w: &Operator, party: usize, anchor: &StateVector) -> Result<Operator> {
    if anchor.shape().parties != 1 || anchor.shape().local_dim != w.shape().local_dim {
        return Err(Error::DimensionMismatch("anchor must be a single-party state".into()));
    }
    w.conditional(party, anchor.amplitudes())
}

/// Partial transposes of the witness pair on the first party. Assembled twice:
/// once by transposing the built witnesses, once from scratch with the
/// structure constants evaluated against the transposed two-party flip; both
/// routes must agree (covered in tests).
pub fn build_pt_witnesses(d: usize) -> Result<(Operator, Operator)> {
    let w = build_witnesses(d)?;
    Ok((w.minus.partial_transpose(&[0])?, w.plus.partial_transpose(&[0])?))
}

/// Rebuild of the transposed witnesses from the trace formula
/// kappa~_ijk = c Tr((l_i x C_jk) F^T1) with C the (anti)commutator.
pub fn build_pt_witnesses_from_traces(d: usize) -> Result<(Operator, Operator)> {
    let basis = gellmann_basis(d)?;
    let m = basis.len();
    let dd = (d * d) as f64;
    let flip = permutation_flip_pt(d)?;
    let mut kt_minus = vec![0.0; m * m * m];
    let mut kt_plus = vec![0.0; m * m * m];
    for j in 0..m {
        for k in 0..m {
            let jk = basis.matrices[j].matrix().mul(basis.matrices[k].matrix());
            let kj = basis.matrices[k].matrix().mul(basis.matrices[j].matrix());
            let comm = jk.sub(&kj);
            let anti = jk.add(&kj);
            for i in 0..m {
                let li = basis.matrices[i].matrix();
                let tm = trace_kron_product(li, &comm, &flip);
                let tp = trace_kron_product(li, &anti, &flip);
                kt_minus[(i * m + j) * m + k] = (Complex64::new(0.0, -1.0) * tm).re / dd;
                kt_plus[(i * m + j) * m + k] = tp.re / dd;
            }
        }
    }
    Ok((assemble_witness(&basis, &kt_minus)?, assemble_witness(&basis, &kt_plus)?))
}

fn permutation_flip_pt(d: usize) -> Result<CMatrix> {
    let f = crate::subspaces::permutation_op(2, d, PermutationKind::Flip(0, 1))?;
    Ok(f.op.partial_transpose(&[0])?.matrix().clone())
}

/// Tr((A x B) M) without materializing the Kronecker product.
fn trace_kron_product(a: &CMatrix, b: &CMatrix, m: &CMatrix) -> Complex64 {
    let d = a.rows();
    let mut acc = Complex64::ZERO;
    for p in 0..d {
        for q in 0..d {
            let apq = a[(p, q)];
            if apq == Complex64::ZERO {
                continue;
            }
            for r in 0..d {
                for s in 0..d {
                    acc += apq * b[(r, s)] * m[(q * d + s, p * d + r)];
                }
            }
        }
    }
    acc
}

/// Projector-difference witnesses for genuine multipartite entanglement:
/// chiral minus antisymmetric, and its conjugate.
pub fn build_gme_witnesses(d: usize) -> Result<(Operator, Operator)> {
    if d < 3 {
        return Err(Error::InvalidInput("projector witness needs d >= 3".into()));
    }
    let pr = tripartite_projectors(d)?;
    Ok((pr.chiral.sub(&pr.antisym)?, pr.antichiral.sub(&pr.antisym)?))
}

/// Qubit witness (4/9) 1 - chiral projector; nonnegative on fully separable
/// states because 4/9 is the largest product-state overlap with the sector.
pub fn chiral_overlap_witness() -> Result<Operator> {
    let pr = tripartite_projectors(2)?;
    let scaled = Operator::identity(3, 2).scale(Complex64::new(4.0 / 9.0, 0.0));
    scaled.sub(&pr.chiral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use crate::subspaces::build_permutations;
    use rand::Rng;

    fn witness_reference_minus(d: usize) -> Operator {
        let p = build_permutations(d).unwrap();
        let id = Complex64::new(0.0, d as f64);
        p.t.sub(&p.t2).unwrap().scale(id)
    }

    fn witness_reference_plus(d: usize) -> Operator {
        let p = build_permutations(d).unwrap();
        let df = d as f64;
        let cycles = p.t.add(&p.t2).unwrap().scale(Complex64::new(df, 0.0));
        let flips = p.f01.add(&p.f02).unwrap().add(&p.f12).unwrap().scale(Complex64::new(-2.0, 0.0));
        let ident = p.identity.scale(Complex64::new(4.0 / df, 0.0));
        cycles.add(&flips).unwrap().add(&ident).unwrap()
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gellmann_basis(2).unwrap();
        assert_eq!(b.len(), 3);
        let sx = [[0.0, 1.0], [1.0, 0.0]];
        for (i, j) in [(0, 1), (1, 0)] {
            assert!((b.matrices[0].matrix()[(i, j)].re - sx[i][j]).abs() < 1e-15);
        }
        assert!((b.matrices[1].matrix()[(0, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((b.matrices[2].matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((b.matrices[2].matrix()[(1, 1)].re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_traceless_and_normalized() {
        for d in [2usize, 3, 4, 5] {
            let b = gellmann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for (i, li) in b.matrices.iter().enumerate() {
                assert!(li.trace().norm() < 1e-12);
                assert!(li.is_hermitian());
                for (j, lj) in b.matrices.iter().enumerate() {
                    let want = if i == j { d as f64 } else { 0.0 };
                    let got = trace_product(li.matrix(), lj.matrix());
                    assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn basis_completeness_identity() {
        for d in [3usize, 4] {
            let b = gellmann_basis(d).unwrap();
            for a in 0..d {
                for bb in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            let mut acc = Complex64::ZERO;
                            for li in &b.matrices {
                                acc += li.matrix()[(a, bb)] * li.matrix()[(c, e)];
                            }
                            let want = d as f64 * if a == e && bb == c { 1.0 } else { 0.0 }
                                - if a == bb && c == e { 1.0 } else { 0.0 };
                            assert!((acc.re - want).abs() < 1e-10 && acc.im.abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn structure_constant_symmetries() {
        for d in [3usize, 4] {
            let b = gellmann_basis(d).unwrap();
            let kap = structure_constants(&b);
            let m = b.len();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let km = kap.minus(i, j, k);
                        assert!((km + kap.minus(j, i, k)).abs() < 1e-12);
                        assert!((km + kap.minus(i, k, j)).abs() < 1e-12);
                        assert!((km - kap.minus(k, i, j)).abs() < 1e-12);
                        let kp = kap.plus(i, j, k);
                        assert!((kp - kap.plus(j, i, k)).abs() < 1e-12);
                        assert!((kp - kap.plus(i, k, j)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn structure_constant_resolution_identities() {
        let d = 3;
        let b = gellmann_basis(d).unwrap();
        let kap = structure_constants(&b);
        let m = b.len();
        let mut rng = rng_from(5);
        for _ in 0..6 {
            let j = rng.random_range(0..m);
            let k = rng.random_range(0..m);
            let lj = b.matrices[j].matrix();
            let lk = b.matrices[k].matrix();
            let comm = lj.mul(lk).sub(&lk.mul(lj));
            let anti = lj.mul(lk).add(&lk.mul(lj));
            let mut sum_m = CMatrix::zeros(d, d);
            let mut sum_p = CMatrix::zeros(d, d);
            for i in 0..m {
                sum_m = sum_m.add(&b.matrices[i].matrix().scale(Complex64::new(kap.minus(i, j, k), 0.0)));
                sum_p = sum_p.add(&b.matrices[i].matrix().scale(Complex64::new(kap.plus(i, j, k), 0.0)));
            }
            // sum_i k-_ijk l_i = -(i/d)[l_j, l_k]
            let want_m = comm.scale(Complex64::new(0.0, -1.0 / d as f64));
            assert!(sum_m.sub(&want_m).max_abs() < 1e-12);
            // sum_i k+_ijk l_i = ({l_j, l_k} - 2 delta_jk 1)/d
            let delta = if j == k { 2.0 } else { 0.0 };
            let want_p = anti
                .sub(&CMatrix::identity(d).scale(Complex64::new(delta, 0.0)))
                .scale(Complex64::new(1.0 / d as f64, 0.0));
            assert!(sum_p.sub(&want_p).max_abs() < 1e-12);
        }
    }

    #[test]
    fn witness_permutation_decomposition() {
        for d in [2usize, 3, 4, 5] {
            let w = build_witnesses(d).unwrap();
            assert!(w.minus.matrix().sub(witness_reference_minus(d).matrix()).max_abs() < 1e-10);
            assert!(w.plus.matrix().sub(witness_reference_plus(d).matrix()).max_abs() < 1e-10);
            assert!(w.minus.is_hermitian());
            assert_eq!(w.plus_vanishes, d == 2);
        }
    }

    #[test]
    fn witnesses_commute() {
        for d in [3usize, 4] {
            let w = build_witnesses(d).unwrap();
            let ab = w.minus.mul(&w.plus).unwrap();
            let ba = w.plus.mul(&w.minus).unwrap();
            assert!(ab.matrix().sub(ba.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_reconstruction() {
        for d in [2usize, 3, 4, 5] {
            let c = spectral_coefficients(d).unwrap();
            let pr = tripartite_projectors(d).unwrap();
            let w = build_witnesses(d).unwrap();
            let alpha = Complex64::new(c.alpha, 0.0);
            let minus = pr.antichiral.sub(&pr.chiral).unwrap().scale(alpha);
            assert!(minus.matrix().sub(w.minus.matrix()).max_abs() < 1e-10);
            let plus = pr
                .sym
                .scale(Complex64::new(c.c_sym, 0.0))
                .add(&pr.antisym.scale(Complex64::new(c.c_antisym, 0.0)))
                .unwrap()
                .add(&pr.chiral.add(&pr.antichiral).unwrap().scale(Complex64::new(c.c_chiral, 0.0)))
                .unwrap();
            assert!(plus.matrix().sub(w.plus.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_coefficients_match_eigensolver() {
        for d in [3usize, 4] {
            let c = spectral_coefficients(d).unwrap();
            let w = build_witnesses(d).unwrap();
            for v in w.minus.eig().unwrap().values {
                let best = [-c.alpha, 0.0, c.alpha]
                    .iter()
                    .map(|t| (v - t).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9);
            }
            for v in w.plus.eig().unwrap().values {
                let best = [c.c_sym, c.c_antisym, c.c_chiral]
                    .iter()
                    .map(|t| (v - t).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9);
            }
        }
        // hand-evaluated rows
        let c3 = spectral_coefficients(3).unwrap();
        assert!((c3.alpha - 3.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((c3.c_sym - 4.0 / 3.0).abs() < 1e-14);
        assert!((c3.c_antisym - 40.0 / 3.0).abs() < 1e-14);
        assert!((c3.c_chiral + 5.0 / 3.0).abs() < 1e-14);
        let c4 = spectral_coefficients(4).unwrap();
        assert!((c4.c_sym - 3.0).abs() < 1e-14);
        assert!((c4.c_antisym - 15.0).abs() < 1e-14);
        assert!((c4.c_chiral + 3.0).abs() < 1e-14);
    }

    #[test]
    fn bounds_table() {
        let b = analytic_bounds(3, WitnessKind::Commutator).unwrap();
        assert!((b.fully_separable - 1.5).abs() < 1e-14);
        assert!((b.biseparable - 3.0).abs() < 1e-14);
        assert!((b.quantum - 3.0 * 3f64.sqrt()).abs() < 1e-14);
        let b = analytic_bounds(3, WitnessKind::Anticommutator).unwrap();
        assert!((b.fully_separable - 4.0 / 3.0).abs() < 1e-14);
        assert!((b.biseparable - 10.0 / 3.0).abs() < 1e-14);
        assert!((b.quantum - 40.0 / 3.0).abs() < 1e-14);
        let b = analytic_bounds(4, WitnessKind::Anticommutator).unwrap();
        assert!((b.fully_separable - 3.0).abs() < 1e-14);
        assert!((b.biseparable - 3.0).abs() < 1e-14);
        assert!((b.quantum - 15.0).abs() < 1e-14);
        let b = analytic_bounds(2, WitnessKind::Commutator).unwrap();
        assert!((b.fully_separable - 1.0).abs() < 1e-14);
        assert!((b.biseparable - 2.0).abs() < 1e-14);
        assert!((b.quantum - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!(analytic_bounds(2, WitnessKind::Anticommutator).is_err());
        for d in 2..=6 {
            let b = analytic_bounds(d, WitnessKind::Commutator).unwrap();
            assert!(b.fully_separable <= b.biseparable && b.biseparable <= b.quantum);
        }
    }

    #[test]
    fn conditional_minus_spectrum() {
        let mut rng = rng_from(11);
        for d in [3usize, 4] {
            let w = build_witnesses(d).unwrap();
            let zero = StateVector::basis_state(1, d, &[0]).unwrap();
            let random = StateVector::new(1, d, crate::linalg::random_state_amplitudes(d, &mut rng)).unwrap();
            for anchor in [&zero, &random] {
                for party in 0..3 {
                    let y = conditional_observable(&w.minus, party, anchor).unwrap();
                    let eig = y.eig().unwrap();
                    for v in &eig.values {
                        let best = [-(d as f64), 0.0, d as f64]
                            .iter()
                            .map(|t| (v - t).abs())
                            .fold(f64::INFINITY, f64::min);
                        assert!(best < 1e-10);
                    }
                    assert!((eig.max() - d as f64).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn conditional_plus_spectrum() {
        for d in [3usize, 4, 5] {
            let w = build_witnesses(d).unwrap();
            let zero = StateVector::basis_state(1, d, &[0]).unwrap();
            let y = conditional_observable(&w.plus, 0, &zero).unwrap();
            let got = y.eig().unwrap().values;
            let df = d as f64;
            let base = 4.0 / df;
            let mut want = Vec::new();
            let npairs = (d - 1) * (d - 2) / 2;
            want.extend(std::iter::repeat_n(base - 2.0, npairs));
            want.extend(std::iter::repeat_n(base + 2.0, npairs));
            want.extend(std::iter::repeat_n(base + df - 4.0, d - 1));
            want.extend(std::iter::repeat_n(base - df, d - 1));
            want.extend(std::iter::repeat_n(base - 2.0, d - 1));
            want.push(base + 2.0 * df - 6.0);
            want.sort_by(f64::total_cmp);
            assert_eq!(got.len(), want.len());
            for (g, t) in got.iter().zip(&want) {
                assert!((g - t).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pt_witness_routes_agree() {
        for d in [2usize, 3, 4] {
            let (tm, tp) = build_pt_witnesses(d).unwrap();
            let (rm, rp) = build_pt_witnesses_from_traces(d).unwrap();
            assert!(tm.matrix().sub(rm.matrix()).max_abs() < 1e-10);
            assert!(tp.matrix().sub(rp.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn pt_witness_invariance_under_conjugated_unitaries() {
        let mut rng = rng_from(13);
        for d in [2usize, 3] {
            let (tm, tp) = build_pt_witnesses(d).unwrap();
            for _ in 0..20 {
                let u = crate::linalg::haar_random_unitary(d, &mut rng);
                let ubar = Operator::new(1, d, u.conj()).unwrap();
                let u1 = Operator::new(1, d, u).unwrap();
                let big = ubar.kron(&u1).unwrap().kron(&u1).unwrap();
                for w in [&tm, &tp] {
                    let conj = big.mul(w).unwrap().mul(&big.dagger()).unwrap();
                    assert!(conj.matrix().sub(w.matrix()).max_abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn pt_minus_eigenspaces_are_flip_conjugate_sectors() {
        for d in [2usize, 3, 4] {
            let (tm, _) = build_pt_witnesses(d).unwrap();
            let eig = tm.eig().unwrap();
            let nonzero: Vec<f64> = eig.values.iter().copied().filter(|v| v.abs() > 1e-8).collect();
            assert_eq!(nonzero.len(), 2 * d);
            let lo = nonzero[0];
            let hi = nonzero[nonzero.len() - 1];
            assert_eq!(nonzero.iter().filter(|v| (**v - lo).abs() < 1e-8).count(), d);
            assert_eq!(nonzero.iter().filter(|v| (**v - hi).abs() < 1e-8).count(), d);
            // the union of the two eigenspaces is the flip-conjugate pair
            let dim = tm.shape().dim();
            let mut span = CMatrix::zeros(dim, dim);
            for (k, v) in eig.values.iter().enumerate() {
                if v.abs() > 1e-8 {
                    let col = eig.vector(k);
                    for a in 0..dim {
                        for b in 0..dim {
                            span[(a, b)] += col[a] * col[b].conj();
                        }
                    }
                }
            }
            let (pi, pi_bar) = crate::subspaces::flip_conjugate_projectors(d).unwrap();
            let want = pi.add(&pi_bar).unwrap();
            assert!(span.sub(want.matrix()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn gme_witness_structure() {
        let d = 3;
        let (p, pbar) = build_gme_witnesses(d).unwrap();
        for (a, b) in [(0.05, 0.05), (0.0, 0.08), (0.3, 0.02)] {
            let pr = tripartite_projectors(d).unwrap();
            let tr = crate::subspaces::projector_traces(d);
            let c = (1.0 - a * tr.antisym as f64 - b * tr.sym as f64) / tr.chiral as f64;
            assert!(c >= 0.0);
            let rho = pr
                .antisym
                .scale(Complex64::new(a, 0.0))
                .add(&pr.sym.scale(Complex64::new(b, 0.0)))
                .unwrap()
                .add(&pr.antichiral.scale(Complex64::new(c, 0.0)))
                .unwrap();
            let got = p.mul(&rho).unwrap().trace().re;
            assert!((got + a * tr.antisym as f64).abs() < 1e-12);
        }
        let conj = CMatrix::from_fn(27, 27, |i, j| p.matrix()[(i, j)].conj());
        assert!(conj.sub(pbar.matrix()).max_abs() < 1e-14);
        assert!(build_gme_witnesses(2).is_err());
    }

    #[test]
    fn gme_witness_conditionals_nonnegative() {
        let mut rng = rng_from(17);
        for d in [3usize, 4] {
            let (p, _) = build_gme_witnesses(d).unwrap();
            let scaled = p.scale(Complex64::new(6.0, 0.0));
            let zero = StateVector::basis_state(1, d, &[0]).unwrap();
            let random = StateVector::new(1, d, crate::linalg::random_state_amplitudes(d, &mut rng)).unwrap();
            for anchor in [&zero, &random] {
                for party in 0..3 {
                    let y = conditional_observable(&scaled, party, anchor).unwrap();
                    assert!(y.eig().unwrap().min() >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn witness_invariance_under_collective_unitaries() {
        let mut rng = rng_from(19);
        let d = 3;
        let w = build_witnesses(d).unwrap();
        for _ in 0..20 {
            let u = crate::linalg::haar_random_unitary(d, &mut rng);
            let u1 = Operator::new(1, d, u).unwrap();
            let uuu = u1.kron(&u1).unwrap().kron(&u1).unwrap();
            for op in [&w.minus, &w.plus] {
                let conj = uuu.mul(op).unwrap().mul(&uuu.dagger()).unwrap();
                assert!(conj.matrix().sub(op.matrix()).max_abs() < 1e-9);
            }
        }
    }

    #[test]
    fn witness_independent_of_basis_recombination() {
        let d = 3;
        let reference = build_witnesses(d).unwrap();
        let basis = gellmann_basis(d).unwrap();
        let m = basis.len();
        let mut rng = rng_from(23);
        // random special orthogonal recombination via Gram-Schmidt of a real
        // Gaussian matrix
        let mut o = vec![vec![0.0f64; m]; m];
        for row in o.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.sample::<f64, _>(rand_distr::StandardNormal);
            }
        }
        for r in 0..m {
            for prev in 0..r {
                let dot: f64 = (0..m).map(|c| o[r][c] * o[prev][c]).sum();
                for c in 0..m {
                    o[r][c] -= dot * o[prev][c];
                }
            }
            let norm: f64 = (0..m).map(|c| o[r][c] * o[r][c]).sum::<f64>().sqrt();
            for c in 0..m {
                o[r][c] /= norm;
            }
        }
        let matrices: Vec<Operator> = (0..m)
            .map(|r| {
                let mut acc = CMatrix::zeros(d, d);
                for c in 0..m {
                    acc = acc.add(&basis.matrices[c].matrix().scale(Complex64::new(o[r][c], 0.0)));
                }
                Operator::new(1, d, acc).unwrap()
            })
            .collect();
        let recombined = GellMannBasis { local_dim: d, matrices };
        let kap = structure_constants(&recombined);
        let minus = assemble_witness(&recombined, &kap.kappa_minus).unwrap();
        let plus = assemble_witness(&recombined, &kap.kappa_plus).unwrap();
        assert!(minus.matrix().sub(reference.minus.matrix()).max_abs() < 1e-9);
        assert!(plus.matrix().sub(reference.plus.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn qubit_witness_product_bound_sampled() {
        let mut rng = rng_from(29);
        let w = build_witnesses(2).unwrap();
        let cw = chiral_overlap_witness().unwrap();
        for _ in 0..2000 {
            let mut psi = StateVector::new(1, 2, crate::linalg::random_state_amplitudes(2, &mut rng)).unwrap();
            for _ in 0..2 {
                let f = StateVector::new(1, 2, crate::linalg::random_state_amplitudes(2, &mut rng)).unwrap();
                psi = psi.kron(&f).unwrap();
            }
            assert!(w.minus.expectation(&psi).unwrap().re.abs() <= 1.0 + 1e-9);
            assert!(cw.expectation(&psi).unwrap().re >= -1e-9);
        }
    }
}
