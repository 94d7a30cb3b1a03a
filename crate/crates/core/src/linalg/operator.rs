use num_complex::Complex64;

use super::cmatrix::CMatrix;
use super::eig::{hermitian_eig, EigenDecomposition};
use crate::error::{Error, Result};

/// Hard cap on total Hilbert-space dimension (keeps everything dense-friendly).
pub const MAX_DIM: usize = 256;

const HERMITIAN_TOL: f64 = 1e-12;

/// Tensor factor layout: `parties` factors of equal local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub parties: usize,
    pub local_dim: usize,
}

impl Shape {
    pub fn new(parties: usize, local_dim: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidInput(format!("local dimension {local_dim} < 2")));
        }
        let shape = Shape { parties, local_dim };
        if shape.dim() > MAX_DIM {
            return Err(Error::SizeCap(format!(
                "{local_dim}^{parties} exceeds the dense cap of {MAX_DIM}"
            )));
        }
        Ok(shape)
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.parties as u32)
    }
}

pub(crate) fn decode_index(mut x: usize, d: usize, out: &mut [usize]) {
    for slot in (0..out.len()).rev() {
        out[slot] = x % d;
        x /= d;
    }
}

pub(crate) fn encode_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &v| acc * d + v)
}

fn check_party_set(set: &[usize], parties: usize) -> Result<()> {
    for (k, &p) in set.iter().enumerate() {
        if p >= parties {
            return Err(Error::InvalidParty { party: p, parties });
        }
        if set[..k].contains(&p) {
            return Err(Error::InvalidInput(format!("party {p} listed twice")));
        }
    }
    Ok(())
}

/// Square operator on `parties` qudit factors (0-indexed, slot 0 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    shape: Shape,
    mat: CMatrix,
    hermitian: bool,
}

impl Operator {
    pub fn new(parties: usize, local_dim: usize, mat: CMatrix) -> Result<Self> {
        let shape = Shape::new(parties, local_dim)?;
        if !mat.is_square() || mat.rows() != shape.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {} for {parties} parties of local dim {local_dim}",
                mat.rows(),
                mat.cols(),
                shape.dim()
            )));
        }
        let hermitian = mat.hermiticity_deviation() <= HERMITIAN_TOL * (1.0 + mat.max_abs());
        Ok(Operator { shape, mat, hermitian })
    }

    pub fn identity(parties: usize, local_dim: usize) -> Self {
        let shape = Shape::new(parties, local_dim).expect("shape within cap");
        Operator { shape, mat: CMatrix::identity(shape.dim()), hermitian: true }
    }

    pub fn zeros(parties: usize, local_dim: usize) -> Self {
        let shape = Shape::new(parties, local_dim).expect("shape within cap");
        Operator { shape, mat: CMatrix::zeros(shape.dim(), shape.dim()), hermitian: true }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// True when the entries equal the conjugate transpose within 1e-12.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    fn wrap(&self, mat: CMatrix) -> Operator {
        Operator::new(self.shape.parties, self.shape.local_dim, mat).expect("shape preserved")
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok(self.wrap(self.mat.add(&other.mat)))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok(self.wrap(self.mat.sub(&other.mat)))
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok(self.wrap(self.mat.mul(&other.mat)))
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        self.wrap(self.mat.scale(s))
    }

    pub fn dagger(&self) -> Operator {
        self.wrap(self.mat.dagger())
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        if self.shape != psi.shape {
            return Err(Error::DimensionMismatch("operator/state shapes differ".into()));
        }
        Ok(self.mat.matvec(&psi.amps))
    }

    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let av = self.apply(psi)?;
        Ok(psi.amps.iter().zip(&av).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        hermitian_eig(&self.mat)
    }

    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        if self.shape.local_dim != other.shape.local_dim {
            return Err(Error::DimensionMismatch(format!(
                "local dimensions differ: {} vs {}",
                self.shape.local_dim, other.shape.local_dim
            )));
        }
        let parties = self.shape.parties + other.shape.parties;
        Operator::new(parties, self.shape.local_dim, self.mat.kron(&other.mat))
    }

    /// Trace out the listed parties; remaining parties keep their relative order.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Operator> {
        let n = self.shape.parties;
        let d = self.shape.local_dim;
        check_party_set(traced, n)?;
        let keep: Vec<usize> = (0..n).filter(|p| !traced.contains(p)).collect();
        let nk = keep.len();
        let dim_keep = d.pow(nk as u32);
        let dim_tr = d.pow(traced.len() as u32);
        let mut out = CMatrix::zeros(dim_keep, dim_keep);
        let mut ik = vec![0usize; nk];
        let mut jk = vec![0usize; nk];
        let mut kt = vec![0usize; traced.len()];
        let mut full_i = vec![0usize; n];
        let mut full_j = vec![0usize; n];
        for i in 0..dim_keep {
            decode_index(i, d, &mut ik);
            for j in 0..dim_keep {
                decode_index(j, d, &mut jk);
                let mut acc = Complex64::ZERO;
                for k in 0..dim_tr {
                    decode_index(k, d, &mut kt);
                    for (slot, &p) in keep.iter().enumerate() {
                        full_i[p] = ik[slot];
                        full_j[p] = jk[slot];
                    }
                    for (slot, &p) in traced.iter().enumerate() {
                        full_i[p] = kt[slot];
                        full_j[p] = kt[slot];
                    }
                    acc += self.mat[(encode_index(&full_i, d), encode_index(&full_j, d))];
                }
                out[(i, j)] = acc;
            }
        }
        Operator { shape: Shape { parties: nk, local_dim: d }, hermitian: false, mat: out }
            .recheck_hermitian()
    }

    /// Transpose the listed parties in place.
    pub fn partial_transpose(&self, parties: &[usize]) -> Result<Operator> {
        let n = self.shape.parties;
        let d = self.shape.local_dim;
        check_party_set(parties, n)?;
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        let mut di = vec![0usize; n];
        let mut dj = vec![0usize; n];
        for i in 0..dim {
            for j in 0..dim {
                decode_index(i, d, &mut di);
                decode_index(j, d, &mut dj);
                for &p in parties {
                    std::mem::swap(&mut di[p], &mut dj[p]);
                }
                out[(encode_index(&di, d), encode_index(&dj, d))] = self.mat[(i, j)];
            }
        }
        Operator { shape: self.shape, hermitian: false, mat: out }.recheck_hermitian()
    }

    /// <anchor| A |anchor> on one party, leaving an operator on the rest.
    pub fn conditional(&self, party: usize, anchor: &[Complex64]) -> Result<Operator> {
        let n = self.shape.parties;
        let d = self.shape.local_dim;
        if n < 2 {
            return Err(Error::InvalidInput("conditional needs at least 2 parties".into()));
        }
        check_party_set(&[party], n)?;
        if anchor.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "anchor has length {}, local dimension is {d}",
                anchor.len()
            )));
        }
        let rest: Vec<usize> = (0..n).filter(|&p| p != party).collect();
        let dim_rest = d.pow((n - 1) as u32);
        let mut out = CMatrix::zeros(dim_rest, dim_rest);
        let mut dr = vec![0usize; n - 1];
        let mut dc = vec![0usize; n - 1];
        let mut full_i = vec![0usize; n];
        let mut full_j = vec![0usize; n];
        for r in 0..dim_rest {
            decode_index(r, d, &mut dr);
            for c in 0..dim_rest {
                decode_index(c, d, &mut dc);
                for (slot, &p) in rest.iter().enumerate() {
                    full_i[p] = dr[slot];
                    full_j[p] = dc[slot];
                }
                let mut acc = Complex64::ZERO;
                for a in 0..d {
                    full_i[party] = a;
                    let row = encode_index(&full_i, d);
                    for b in 0..d {
                        full_j[party] = b;
                        acc += anchor[a].conj()
                            * anchor[b]
                            * self.mat[(row, encode_index(&full_j, d))];
                    }
                }
                out[(r, c)] = acc;
            }
        }
        Operator { shape: Shape { parties: n - 1, local_dim: d }, hermitian: false, mat: out }
            .recheck_hermitian()
    }

    fn recheck_hermitian(mut self) -> Result<Operator> {
        self.hermitian =
            self.mat.hermiticity_deviation() <= HERMITIAN_TOL * (1.0 + self.mat.max_abs());
        Ok(self)
    }
}

/// Pure state on `parties` qudit factors.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    shape: Shape,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Amplitudes must already be normalized to 1e-12.
    pub fn new(parties: usize, local_dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        let shape = Shape::new(parties, local_dim)?;
        if amps.len() != shape.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimension {}",
                amps.len(),
                shape.dim()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { shape, amps })
    }

    pub fn from_unnormalized(parties: usize, local_dim: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let shape = Shape::new(parties, local_dim)?;
        if amps.len() != shape.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimension {}",
                amps.len(),
                shape.dim()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(StateVector { shape, amps })
    }

    pub fn basis_state(parties: usize, local_dim: usize, digits: &[usize]) -> Result<Self> {
        let shape = Shape::new(parties, local_dim)?;
        if digits.len() != parties || digits.iter().any(|&v| v >= local_dim) {
            return Err(Error::InvalidInput(format!("bad basis digits {digits:?}")));
        }
        let mut amps = vec![Complex64::ZERO; shape.dim()];
        amps[encode_index(digits, local_dim)] = Complex64::ONE;
        Ok(StateVector { shape, amps })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn conj(&self) -> StateVector {
        StateVector { shape: self.shape, amps: self.amps.iter().map(|a| a.conj()).collect() }
    }

    pub fn kron(&self, other: &StateVector) -> Result<StateVector> {
        if self.shape.local_dim != other.shape.local_dim {
            return Err(Error::DimensionMismatch("local dimensions differ".into()));
        }
        let shape = Shape::new(self.shape.parties + other.shape.parties, self.shape.local_dim)?;
        let mut amps = Vec::with_capacity(shape.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { shape, amps })
    }

    pub fn to_density(&self) -> Operator {
        let dim = self.dim();
        let mat = CMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        Operator { shape: self.shape, mat, hermitian: true }
    }

    /// Density matrix of the kept parties (everything else traced out).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<Operator> {
        let n = self.shape.parties;
        let d = self.shape.local_dim;
        check_party_set(keep, n)?;
        let rest: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
        let dim_keep = d.pow(keep.len() as u32);
        let dim_rest = d.pow(rest.len() as u32);
        let mut out = CMatrix::zeros(dim_keep, dim_keep);
        let mut ik = vec![0usize; keep.len()];
        let mut jk = vec![0usize; keep.len()];
        let mut kr = vec![0usize; rest.len()];
        let mut full_i = vec![0usize; n];
        let mut full_j = vec![0usize; n];
        for i in 0..dim_keep {
            decode_index(i, d, &mut ik);
            for j in 0..dim_keep {
                decode_index(j, d, &mut jk);
                let mut acc = Complex64::ZERO;
                for k in 0..dim_rest {
                    decode_index(k, d, &mut kr);
                    for (slot, &p) in keep.iter().enumerate() {
                        full_i[p] = ik[slot];
                        full_j[p] = jk[slot];
                    }
                    for (slot, &p) in rest.iter().enumerate() {
                        full_i[p] = kr[slot];
                        full_j[p] = kr[slot];
                    }
                    acc += self.amps[encode_index(&full_i, d)]
                        * self.amps[encode_index(&full_j, d)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        Operator::new(keep.len(), d, out)
    }

    /// Singular values of the amplitude matrix for the bipartition
    /// (left parties | rest), descending.
    pub fn schmidt_coefficients(&self, left: &[usize]) -> Result<Vec<f64>> {
        let n = self.shape.parties;
        check_party_set(left, n)?;
        if left.is_empty() || left.len() == n {
            return Err(Error::InvalidInput("bipartition needs a proper nonempty subset".into()));
        }
        let small = if left.len() * 2 <= n {
            left.to_vec()
        } else {
            (0..n).filter(|p| !left.contains(p)).collect()
        };
        let gram = self.reduced_density(&small)?;
        let eig = gram.eig()?;
        let mut coeffs: Vec<f64> =
            eig.values.iter().rev().map(|&v| v.max(0.0).sqrt()).collect();
        coeffs.sort_by(|a, b| b.total_cmp(a));
        Ok(coeffs)
    }
}
