//! Permutation operators on few-qudit registers and the invariant subspaces
//! they carve out: pair/tripartite symmetric and antisymmetric sectors, the two
//! cyclic sectors where the translation acts as a cube root of unity, and the
//! flip-conjugate subspace (flip of the last two parties = complex conjugation).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Operator, StateVector};

/// Primitive cube root of unity.
pub fn omega() -> Complex64 {
    Complex64::new(-0.5, 0.75_f64.sqrt())
}

/// Label for the invariant subspaces handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceLabel {
    PairSym,
    PairAntisym,
    Sym,
    Antisym,
    Chiral,
    Antichiral,
    ChiralPairs,
    ChiralTriples,
    FlipConjugate,
    FlipConjugateBar,
}

/// Orthonormal basis of a subspace together with its span projector.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    pub label: SubspaceLabel,
    pub vectors: Vec<StateVector>,
    pub projector: Operator,
}

impl SubspaceBasis {
    pub fn from_vectors(label: SubspaceLabel, vectors: Vec<StateVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let shape = vectors[0].shape();
        for (i, v) in vectors.iter().enumerate() {
            if v.shape() != shape {
                return Err(Error::DimensionMismatch("basis vectors of unequal shape".into()));
            }
            for (j, w) in vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let olap = v.inner(w);
                if (olap - want).norm() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "basis not orthonormal: |<{i}|{j}>| deviation {:.2e}",
                        (olap - want).norm()
                    )));
                }
            }
        }
        let dim = shape.dim();
        let mut mat = CMatrix::zeros(dim, dim);
        for v in &vectors {
            let a = v.amplitudes();
            for i in 0..dim {
                for j in 0..dim {
                    mat[(i, j)] += a[i] * a[j].conj();
                }
            }
        }
        let projector = Operator::new(shape.parties, shape.local_dim, mat)?;
        Ok(SubspaceBasis { label, vectors, projector })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Random normalized superposition of the basis vectors.
    pub fn random_superposition(&self, rng: &mut impl rand::Rng) -> StateVector {
        let shape = self.vectors[0].shape();
        let coeffs = crate::linalg::random_state_amplitudes(self.vectors.len(), rng);
        let mut amps = vec![Complex64::ZERO; shape.dim()];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            for (a, x) in amps.iter_mut().zip(v.amplitudes()) {
                *a += c * x;
            }
        }
        StateVector::from_unnormalized(shape.parties, shape.local_dim, amps).expect("nonzero")
    }
}

/// Operator permuting tensor slots: output slot `t` carries input slot `map[t]`.
pub fn permutation_from_map(local_dim: usize, map: &[usize]) -> Result<Operator> {
    let n = map.len();
    let shape = crate::linalg::Shape::new(n, local_dim)?;
    let dim = shape.dim();
    let mut mat = CMatrix::zeros(dim, dim);
    let mut din = vec![0usize; n];
    let mut dout = vec![0usize; n];
    for j in 0..dim {
        crate::linalg::decode_index(j, local_dim, &mut din);
        for t in 0..n {
            dout[t] = din[map[t]];
        }
        mat[(crate::linalg::encode_index(&dout, local_dim), j)] = Complex64::ONE;
    }
    Operator::new(n, local_dim, mat)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermutationKind {
    Flip(usize, usize),
    Cycle,
    Anticycle,
}

#[derive(Clone, Debug)]
pub struct PermutationOp {
    pub kind: PermutationKind,
    pub op: Operator,
}

/// Flip or cyclic translation on an n-party register. For three parties the
/// cycle sends |abc> to |cab>; for four parties it moves the first party to
/// the end (|abcd> to |bcda>).
pub fn permutation_op(parties: usize, local_dim: usize, kind: PermutationKind) -> Result<PermutationOp> {
    if !(2..=4).contains(&parties) {
        return Err(Error::InvalidInput("permutations support 2 to 4 parties".into()));
    }
    let map: Vec<usize> = match kind {
        PermutationKind::Flip(i, j) => {
            if i >= parties || j >= parties || i == j {
                return Err(Error::InvalidParty { party: i.max(j), parties });
            }
            (0..parties).map(|t| if t == i { j } else if t == j { i } else { t }).collect()
        }
        PermutationKind::Cycle => match parties {
            3 => vec![2, 0, 1],
            _ => (0..parties).map(|t| (t + 1) % parties).collect(),
        },
        PermutationKind::Anticycle => match parties {
            3 => vec![1, 2, 0],
            _ => (0..parties).map(|t| (t + parties - 1) % parties).collect(),
        },
    };
    Ok(PermutationOp { kind, op: permutation_from_map(local_dim, &map)? })
}

/// The six permutation operators of a three-qudit register.
#[derive(Clone, Debug)]
pub struct ThreePartyPermutations {
    pub local_dim: usize,
    pub identity: Operator,
    pub t: Operator,
    pub t2: Operator,
    pub f01: Operator,
    pub f02: Operator,
    pub f12: Operator,
}

pub fn build_permutations(local_dim: usize) -> Result<ThreePartyPermutations> {
    let t = permutation_op(3, local_dim, PermutationKind::Cycle)?.op;
    Ok(ThreePartyPermutations {
        local_dim,
        identity: Operator::identity(3, local_dim),
        t,
        t2: permutation_op(3, local_dim, PermutationKind::Anticycle)?.op,
        f01: permutation_op(3, local_dim, PermutationKind::Flip(0, 1))?.op,
        f02: permutation_op(3, local_dim, PermutationKind::Flip(0, 2))?.op,
        f12: permutation_op(3, local_dim, PermutationKind::Flip(1, 2))?.op,
    })
}

/// Symmetric and antisymmetric projectors on two qudits.
pub fn pair_projectors(local_dim: usize) -> Result<(Operator, Operator)> {
    let one = Operator::identity(2, local_dim);
    let f = permutation_op(2, local_dim, PermutationKind::Flip(0, 1))?.op;
    let half = Complex64::new(0.5, 0.0);
    Ok((one.add(&f)?.scale(half), one.sub(&f)?.scale(half)))
}

/// The four invariant sectors of the three-qudit permutation action.
#[derive(Clone, Debug)]
pub struct TripartiteProjectors {
    pub sym: Operator,
    pub antisym: Operator,
    pub chiral: Operator,
    pub antichiral: Operator,
}

pub fn tripartite_projectors(local_dim: usize) -> Result<TripartiteProjectors> {
    let p = build_permutations(local_dim)?;
    let w = omega();
    let w2 = w * w;
    let sixth = Complex64::new(1.0 / 6.0, 0.0);
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let flips = p.f01.add(&p.f02)?.add(&p.f12)?;
    let cycles = p.t.add(&p.t2)?;
    let sym = p.identity.add(&flips)?.add(&cycles)?.scale(sixth);
    let antisym = p.identity.sub(&flips)?.add(&cycles)?.scale(sixth);
    let chiral = p.identity.add(&p.t.scale(w2))?.add(&p.t2.scale(w))?.scale(third);
    let antichiral = p.identity.add(&p.t.scale(w))?.add(&p.t2.scale(w2))?.scale(third);
    Ok(TripartiteProjectors { sym, antisym, chiral, antichiral })
}

/// Exact integer traces of the three-qudit sector projectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectorTraces {
    pub sym: i64,
    pub antisym: i64,
    pub chiral: i64,
    pub flip_conjugate: i64,
}

pub fn projector_traces(local_dim: usize) -> ProjectorTraces {
    let d = local_dim as i64;
    ProjectorTraces {
        sym: d * (d + 1) * (d + 2) / 6,
        antisym: d * (d - 1) * (d - 2) / 6,
        chiral: (d * d * d - d) / 3,
        flip_conjugate: d,
    }
}

fn basis_state(d: usize, digits: &[usize]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::ZERO; d.pow(digits.len() as u32)];
    amps[crate::linalg::encode_index(digits, d)] = Complex64::ONE;
    amps
}

fn add_scaled(dst: &mut [Complex64], s: Complex64, src: &[Complex64]) {
    for (d, x) in dst.iter_mut().zip(src) {
        *d += s * x;
    }
}

/// (|abc> + w |a'b'c'> + w^2 |a''b''c''>)/sqrt(3) for the translation orbit of `first`.
fn chiral_vector(d: usize, first: [usize; 3]) -> StateVector {
    let w = omega();
    let [a, b, c] = first;
    let mut amps = basis_state(d, &[a, b, c]);
    // the translation sends |abc> to |cab>; weighting the orbit with the
    // conjugate phases makes the sum an eigenvector with eigenvalue w
    add_scaled(&mut amps, w * w, &basis_state(d, &[c, a, b]));
    add_scaled(&mut amps, w, &basis_state(d, &[b, c, a]));
    StateVector::from_unnormalized(3, d, amps).expect("nonzero")
}

fn chiral_pair_vectors(d: usize) -> Vec<StateVector> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(chiral_vector(d, [i, i, j]));
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(chiral_vector(d, [j, j, i]));
        }
    }
    out
}

fn chiral_triple_vectors(d: usize) -> Vec<StateVector> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                out.push(chiral_vector(d, [i, j, k]));
            }
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                out.push(chiral_vector(d, [i, k, j]));
            }
        }
    }
    out
}

/// Basis of the sector where the translation acts as multiplication by w.
/// Ordering: the four vector families in turn (pair type |iij>-rooted, pair
/// type |jji>-rooted, triple type |ijk>-rooted, triple type |ikj>-rooted),
/// index tuples lexicographic within each family.
pub fn chiral_basis(d: usize) -> Result<SubspaceBasis> {
    let mut vectors = chiral_pair_vectors(d);
    vectors.extend(chiral_triple_vectors(d));
    SubspaceBasis::from_vectors(SubspaceLabel::Chiral, vectors)
}

/// Conjugate partner sector (translation eigenvalue w^2).
pub fn antichiral_basis(d: usize) -> Result<SubspaceBasis> {
    let b = chiral_basis(d)?;
    SubspaceBasis::from_vectors(SubspaceLabel::Antichiral, b.vectors.iter().map(|v| v.conj()).collect())
}

/// Split of the chiral sector into its pair-supported and triple-supported parts.
/// The triple part is empty below d = 3.
pub fn chiral_split(d: usize) -> Result<(SubspaceBasis, Option<SubspaceBasis>)> {
    let pairs = SubspaceBasis::from_vectors(SubspaceLabel::ChiralPairs, chiral_pair_vectors(d))?;
    let triples = if d >= 3 {
        Some(SubspaceBasis::from_vectors(SubspaceLabel::ChiralTriples, chiral_triple_vectors(d))?)
    } else {
        None
    };
    Ok((pairs, triples))
}

/// The two-dimensional triple-supported chiral sector of three qutrits.
pub fn chiral_triples_qutrit() -> Result<SubspaceBasis> {
    Ok(chiral_split(3)?.1.expect("nonempty at d=3"))
}

/// Default coupling for the flip-conjugate construction.
pub fn flip_conjugate_default_z(d: usize) -> Complex64 {
    Complex64::new(0.5, 0.5 * ((d as f64 + 1.0) / (d as f64 - 1.0)).sqrt())
}

fn flip_conjugate_vector(d: usize, z: Complex64, n: usize) -> StateVector {
    let mut amps = vec![Complex64::ZERO; d * d * d];
    for i in 0..d {
        add_scaled(&mut amps, z.conj(), &basis_state(d, &[i, n, i]));
        add_scaled(&mut amps, z, &basis_state(d, &[i, i, n]));
    }
    StateVector::from_unnormalized(3, d, amps).expect("nonzero")
}

/// Basis |phi_n>, n = 0..d-1, of the subspace whose states turn into their own
/// complex conjugates under the flip of the last two parties.
pub fn flip_conjugate_basis(d: usize, z: Option<Complex64>) -> Result<SubspaceBasis> {
    if d < 2 {
        return Err(Error::InvalidInput("flip-conjugate space needs d >= 2".into()));
    }
    let z = z.unwrap_or_else(|| flip_conjugate_default_z(d));
    if z.norm() < 1e-12 {
        return Err(Error::InvalidInput("coupling z must be nonzero".into()));
    }
    let vectors = (0..d).map(|n| flip_conjugate_vector(d, z, n)).collect();
    SubspaceBasis::from_vectors(SubspaceLabel::FlipConjugate, vectors)
}

/// Conjugate partner of the flip-conjugate subspace.
pub fn flip_conjugate_bar_basis(d: usize, z: Option<Complex64>) -> Result<SubspaceBasis> {
    let b = flip_conjugate_basis(d, z)?;
    SubspaceBasis::from_vectors(
        SubspaceLabel::FlipConjugateBar,
        b.vectors.iter().map(|v| v.conj()).collect(),
    )
}

/// Closed-form projectors onto the flip-conjugate subspace and its conjugate
/// partner (default coupling): partial transposes of the two flips touching
/// the first party and of the translations, with coupling-dependent weights.
pub fn flip_conjugate_projectors(d: usize) -> Result<(Operator, Operator)> {
    let z = flip_conjugate_default_z(d);
    let p = build_permutations(d)?;
    let pt = |op: &Operator| op.partial_transpose(&[0]);
    let f01_pt = pt(&p.f01)?;
    let f02_pt = pt(&p.f02)?;
    let t_pt = pt(&p.t)?;
    let t2_pt = pt(&p.t2)?;
    let scale = Complex64::new(1.0 / (d as f64 + 1.0), 0.0);
    let abs2 = Complex64::new(z.norm_sqr(), 0.0);
    let zc2 = z.conj() * z.conj();
    let z2 = z * z;
    let flips = f01_pt.add(&f02_pt)?;
    let pi = flips.scale(abs2).add(&t_pt.scale(z2))?.add(&t2_pt.scale(zc2))?.scale(scale);
    let pi_bar = flips.scale(abs2).add(&t_pt.scale(zc2))?.add(&t2_pt.scale(z2))?.scale(scale);
    Ok((pi, pi_bar))
}

/// W state (|001> + |010> + |100>)/sqrt(3).
pub fn w_state() -> StateVector {
    let mut amps = basis_state(2, &[0, 0, 1]);
    add_scaled(&mut amps, Complex64::ONE, &basis_state(2, &[0, 1, 0]));
    add_scaled(&mut amps, Complex64::ONE, &basis_state(2, &[1, 0, 0]));
    StateVector::from_unnormalized(3, 2, amps).expect("nonzero")
}

/// Phase-twisted pair state e^{ia} sum_i |i0i> + e^{-ia} sum_i |ii0>, normalized.
/// At d = 2, a = pi/2 (mod pi) the result is biseparable and refused.
pub fn phase_state(d: usize, alpha: f64) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::InvalidInput("phase state needs d >= 2".into()));
    }
    if d == 2 && ((2.0 * alpha).cos() + 1.0).abs() < 1e-12 {
        return Err(Error::InvalidInput(
            "d = 2 with alpha = pi/2: the construction collapses to a biseparable state".into(),
        ));
    }
    let mut amps = vec![Complex64::ZERO; d * d * d];
    let x = Complex64::from_polar(1.0, alpha);
    for i in 0..d {
        add_scaled(&mut amps, x, &basis_state(d, &[i, 0, i]));
        add_scaled(&mut amps, x.conj(), &basis_state(d, &[i, i, 0]));
    }
    StateVector::from_unnormalized(3, d, amps)
}

/// Four-qubit state (|f1>|1> + |f2>|0>)/sqrt(2) built on the two chiral
/// qubit-sector vectors f1, f2.
pub fn four_qubit_m() -> StateVector {
    let basis = chiral_basis(2).expect("qubit chiral basis");
    let one = StateVector::basis_state(1, 2, &[1]).unwrap();
    let zero = StateVector::basis_state(1, 2, &[0]).unwrap();
    let t1 = basis.vectors[0].kron(&one).unwrap();
    let t2 = basis.vectors[1].kron(&zero).unwrap();
    let amps = t1
        .amplitudes()
        .iter()
        .zip(t2.amplitudes())
        .map(|(a, b)| a + b)
        .collect();
    StateVector::from_unnormalized(4, 2, amps).expect("nonzero")
}

/// Four-qutrit eigenstate of the cyclic translation with eigenvalue i: the
/// totally antisymmetric three-qutrit singlet planted on each three-party
/// subset, fourth party in |0>, with phases 1, -i, -1, i.
pub fn four_qutrit_chiral() -> StateVector {
    let eps = |p: usize, q: usize, r: usize| -> f64 {
        match (p, q, r) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let d = 3usize;
    let mut amps = vec![Complex64::ZERO; d.pow(4)];
    let mut digits = [0usize; 4];
    for idx in 0..amps.len() {
        let mut x = idx;
        for slot in (0..4).rev() {
            digits[slot] = x % d;
            x /= d;
        }
        let [p, q, r, s] = digits;
        let mut acc = Complex64::ZERO;
        if s == 0 {
            acc += phases[0] * eps(p, q, r);
        }
        if r == 0 {
            acc += phases[1] * eps(p, q, s);
        }
        if q == 0 {
            acc += phases[2] * eps(p, r, s);
        }
        if p == 0 {
            acc += phases[3] * eps(q, r, s);
        }
        amps[idx] = acc;
    }
    StateVector::from_unnormalized(4, 3, amps).expect("nonzero")
}
