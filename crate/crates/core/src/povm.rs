//! Generalized permutation test with a qutrit ancilla: Fourier transform,
//! controlled cyclic shifts, inverse Fourier transform, then an ancilla
//! measurement. Outcome 1 projects onto the antichiral subspace and outcome 2
//! onto the chiral one. Outcome 0 projects onto the full cycle-invariant
//! subspace; for qubits that is exactly the symmetric subspace, from d = 3 on
//! it also contains the antisymmetric sector, which keeps the three effects
//! summing to the identity. On three copies of a single state the outcome-0
//! probability encodes Tr(rho^3), the entry point to Tsallis entropies and
//! the concentratable-entanglement mean.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::rng::{rng_from, sub_seed};
use crate::subspaces::{build_permutations, omega};

/// Ancilla qutrit joined to an n-party system, amplitudes ancilla-major:
/// entry a * d^n + s is the amplitude of ancilla level a with system index s.
#[derive(Clone, Debug)]
pub struct HybridRegister {
    parties: usize,
    local_dim: usize,
    amps: Vec<Complex64>,
}

impl HybridRegister {
    /// Joint state |0>_ancilla (x) system.
    pub fn new(system: &StateVector) -> Result<Self> {
        let shape = system.shape();
        let dim = shape.dim();
        let mut amps = vec![Complex64::ZERO; 3 * dim];
        amps[..dim].copy_from_slice(system.amplitudes());
        Ok(HybridRegister { parties: shape.parties, local_dim: shape.local_dim, amps })
    }

    pub fn system_dim(&self) -> usize {
        self.local_dim.pow(self.parties as u32)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_fourier(&mut self) {
        self.fourier(false);
    }

    pub fn apply_inverse_fourier(&mut self) {
        self.fourier(true);
    }

    fn fourier(&mut self, inverse: bool) {
        let w = if inverse { omega().conj() } else { omega() };
        let s3 = 3f64.sqrt().recip();
        let w2 = w * w;
        let dim = self.system_dim();
        for s in 0..dim {
            let a0 = self.amps[s];
            let a1 = self.amps[dim + s];
            let a2 = self.amps[2 * dim + s];
            self.amps[s] = (a0 + a1 + a2) * s3;
            self.amps[dim + s] = (a0 + w * a1 + w2 * a2) * s3;
            self.amps[2 * dim + s] = (a0 + w2 * a1 + w * a2) * s3;
        }
    }

    /// The controlled shift: identity on ancilla level 0, the double cycle on
    /// level 1, the single cycle on level 2.
    pub fn apply_controlled_cycles(&mut self) -> Result<()> {
        if self.parties != 3 {
            return Err(Error::Unsupported("cyclic shifts act on three parties".into()));
        }
        let perms = build_permutations(self.local_dim)?;
        let dim = self.system_dim();
        let b1 = perms.t2.matrix().matvec(&self.amps[dim..2 * dim]);
        let b2 = perms.t.matrix().matvec(&self.amps[2 * dim..]);
        self.amps[dim..2 * dim].copy_from_slice(&b1);
        self.amps[2 * dim..].copy_from_slice(&b2);
        Ok(())
    }

    pub fn ancilla_probabilities(&self) -> [f64; 3] {
        let dim = self.system_dim();
        let mut p = [0.0; 3];
        for (a, slot) in p.iter_mut().enumerate() {
            *slot = self.amps[a * dim..(a + 1) * dim].iter().map(|x| x.norm_sqr()).sum();
        }
        p
    }
}

#[derive(Clone, Copy, Debug)]
pub enum TestMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct MeasurementRecord {
    /// exact outcome probabilities from the circuit amplitudes
    pub probabilities: [f64; 3],
    /// 0 when exact
    pub shots: u64,
    pub counts: [u64; 3],
    pub seed: u64,
    pub exact: bool,
}

impl MeasurementRecord {
    pub fn frequencies(&self) -> [f64; 3] {
        if self.shots == 0 {
            return self.probabilities;
        }
        let n = self.shots as f64;
        [0, 1, 2].map(|i| self.counts[i] as f64 / n)
    }
}

/// Runs the ancilla circuit on a three-party state. Exact mode reports the
/// outcome distribution; sampling mode additionally draws counts from it.
pub fn permutation_test(psi: &StateVector, mode: TestMode) -> Result<MeasurementRecord> {
    if psi.shape().parties != 3 {
        return Err(Error::Unsupported("the permutation test takes three parties".into()));
    }
    let mut reg = HybridRegister::new(psi)?;
    reg.apply_fourier();
    reg.apply_controlled_cycles()?;
    reg.apply_inverse_fourier();
    let probabilities = reg.ancilla_probabilities();
    match mode {
        TestMode::Exact => Ok(MeasurementRecord {
            probabilities,
            shots: 0,
            counts: [0; 3],
            seed: 0,
            exact: true,
        }),
        TestMode::Sampled { shots, seed } => Ok(MeasurementRecord {
            probabilities,
            shots,
            counts: sample_counts(&probabilities, shots, seed),
            seed,
            exact: false,
        }),
    }
}

const SHOT_CHUNK: u64 = 10_000;

fn sample_counts(p: &[f64; 3], shots: u64, seed: u64) -> [u64; 3] {
    let chunks = shots.div_ceil(SHOT_CHUNK);
    let cut0 = p[0];
    let cut1 = p[0] + p[1];
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng_from(sub_seed(seed, "povm-shots", chunk));
            let todo = SHOT_CHUNK.min(shots - chunk * SHOT_CHUNK);
            let mut counts = [0u64; 3];
            for _ in 0..todo {
                let u: f64 = rand::Rng::random(&mut rng);
                let outcome = if u < cut0 {
                    0
                } else if u < cut1 {
                    1
                } else {
                    2
                };
                counts[outcome] += 1;
            }
            counts
        })
        .reduce(|| [0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

// ---------------------------------------------------------------------------
// spectra of a single density matrix

fn validate_density(rho: &Operator) -> Result<()> {
    if !rho.is_hermitian() {
        return Err(Error::NotHermitian { dev: rho.matrix().hermiticity_deviation() });
    }
    let tr = rho.matrix().trace();
    if (tr.re - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!("trace {} is not 1", tr.re)));
    }
    let lo = rho.eig()?.min();
    if lo < -1e-9 {
        return Err(Error::InvalidInput(format!("negative eigenvalue {lo}")));
    }
    Ok(())
}

/// Tr(rho^3) through the three-copy route: the cyclic shift contracted
/// against rho (x) rho (x) rho, sum_{abc} rho[b,a] rho[c,b] rho[a,c].
pub fn trace_cube(rho: &Operator) -> Result<f64> {
    validate_density(rho)?;
    let m = rho.matrix();
    let n = m.rows();
    let mut acc = Complex64::ZERO;
    for a in 0..n {
        for b in 0..n {
            let mba = m[(b, a)];
            if mba == Complex64::ZERO {
                continue;
            }
            for c in 0..n {
                acc += mba * m[(c, b)] * m[(a, c)];
            }
        }
    }
    Ok(acc.re)
}

/// Tr(rho^k) summed over eigenvalues.
pub fn trace_power(rho: &Operator, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    validate_density(rho)?;
    Ok(rho.eig()?.values.iter().map(|l| l.powi(k as i32)).sum())
}

/// Outcome-0 probability of the test run on three copies of rho.
pub fn symmetric_outcome_probability(rho: &Operator) -> Result<f64> {
    Ok((1.0 + 2.0 * trace_cube(rho)?) / 3.0)
}

/// Tsallis entropy (1 - Tr rho^K)/(K - 1) for integer K >= 2.
pub fn tsallis(rho: &Operator, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("Tsallis order {k} must be at least 2")));
    }
    Ok((1.0 - trace_power(rho, k)?) / (k as f64 - 1.0))
}

/// Concentratable entanglement: the mean Tsallis entropy over all subsets of
/// `subset`, the empty set contributing zero.
pub fn gce(psi: &StateVector, subset: &[usize], k: u32) -> Result<f64> {
    let parties = psi.shape().parties;
    if subset.is_empty() {
        return Err(Error::InvalidInput("subsystem set is empty".into()));
    }
    for (i, &p) in subset.iter().enumerate() {
        if p >= parties {
            return Err(Error::InvalidParty { party: p, parties });
        }
        if subset[..i].contains(&p) {
            return Err(Error::InvalidInput(format!("party {p} listed twice")));
        }
    }
    let mut total = 0.0;
    for mask in 1u32..(1 << subset.len()) {
        let keep: Vec<usize> = subset
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        total += tsallis(&psi.reduced_density(&keep)?, k)?;
    }
    Ok(total / (1u64 << subset.len()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_random_unitary, random_state_amplitudes, CMatrix};
    use crate::subspaces::{
        antichiral_basis, chiral_basis, tripartite_projectors, w_state,
    };

    fn random_tripartite(d: usize, seed: u64) -> StateVector {
        let mut rng = rng_from(seed);
        StateVector::new(3, d, random_state_amplitudes(d.pow(3), &mut rng)).unwrap()
    }

    #[test]
    fn exact_probabilities_match_projector_expectations() {
        for d in [2usize, 3] {
            let proj = tripartite_projectors(d).unwrap();
            let cyc = proj.sym.add(&proj.antisym).unwrap();
            for trial in 0..50 {
                let psi = random_tripartite(d, 900 + 10 * d as u64 + trial);
                let rec = permutation_test(&psi, TestMode::Exact).unwrap();
                let expected = [
                    cyc.expectation(&psi).unwrap().re,
                    proj.antichiral.expectation(&psi).unwrap().re,
                    proj.chiral.expectation(&psi).unwrap().re,
                ];
                let total: f64 = rec.probabilities.iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "d={d}: sum {total}");
                for (p, e) in rec.probabilities.iter().zip(&expected) {
                    assert!((p - e).abs() < 1e-12, "d={d}: {p} vs {e}");
                }
            }
        }
    }

    #[test]
    fn known_states_hit_single_outcomes() {
        let rec = permutation_test(&w_state(), TestMode::Exact).unwrap();
        assert!((rec.probabilities[0] - 1.0).abs() < 1e-12);

        let mut rng = rng_from(31);
        let chiral = chiral_basis(3).unwrap().random_superposition(&mut rng);
        let rec = permutation_test(&chiral, TestMode::Exact).unwrap();
        assert!((rec.probabilities[2] - 1.0).abs() < 1e-12, "{:?}", rec.probabilities);

        // the cycle eigenvector (|001> + w|010> + w^2|100>)/sqrt(3) on qubits
        let phi1 = chiral_basis(2).unwrap().vectors[0].clone();
        let rec = permutation_test(&phi1, TestMode::Exact).unwrap();
        assert!((rec.probabilities[2] - 1.0).abs() < 1e-12, "{:?}", rec.probabilities);
        let phi1_bar = antichiral_basis(2).unwrap().vectors[0].clone();
        let rec = permutation_test(&phi1_bar, TestMode::Exact).unwrap();
        assert!((rec.probabilities[1] - 1.0).abs() < 1e-12, "{:?}", rec.probabilities);

        // three identical copies of a pure state are cycle invariant
        let mut rng = rng_from(32);
        let phi = StateVector::new(1, 2, random_state_amplitudes(2, &mut rng)).unwrap();
        let copies = phi.kron(&phi).unwrap().kron(&phi).unwrap();
        let rec = permutation_test(&copies, TestMode::Exact).unwrap();
        assert!((rec.probabilities[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_preserves_norm_and_rejects_wrong_arity() {
        let psi = random_tripartite(3, 77);
        let mut reg = HybridRegister::new(&psi).unwrap();
        reg.apply_fourier();
        reg.apply_controlled_cycles().unwrap();
        reg.apply_inverse_fourier();
        assert!((reg.norm() - 1.0).abs() < 1e-12);

        let pair = StateVector::basis_state(2, 2, &[0, 0]).unwrap();
        assert!(permutation_test(&pair, TestMode::Exact).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_tracks_probabilities() {
        let psi = random_tripartite(2, 41);
        let mode = TestMode::Sampled { shots: 100_000, seed: 7 };
        let rec = permutation_test(&psi, mode).unwrap();
        assert_eq!(rec.counts.iter().sum::<u64>(), rec.shots);
        let again = permutation_test(&psi, mode).unwrap();
        assert_eq!(rec.counts, again.counts);
        let freq = rec.frequencies();
        for i in 0..3 {
            let p = rec.probabilities[i];
            let sigma = (p * (1.0 - p) / rec.shots as f64).sqrt();
            assert!(
                (freq[i] - p).abs() <= 4.0 * sigma + 1e-12,
                "outcome {i}: freq {} vs p {p}",
                freq[i]
            );
        }
    }

    fn diag_density(probs: &[f64]) -> Operator {
        let n = probs.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Operator::new(1, n, m).unwrap()
    }

    #[test]
    fn trace_cube_routes_agree() {
        assert!((trace_cube(&diag_density(&[1.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_cube(&diag_density(&[0.5, 0.5])).unwrap() - 0.25).abs() < 1e-15);
        assert!((trace_cube(&diag_density(&[0.75, 0.25])).unwrap() - 7.0 / 16.0).abs() < 1e-15);

        // a generically mixed state from a random purification
        let mut rng = rng_from(55);
        let pure = StateVector::new(2, 3, random_state_amplitudes(9, &mut rng)).unwrap();
        let rho = pure.reduced_density(&[0]).unwrap();
        let contraction = trace_cube(&rho).unwrap();
        let spectral = trace_power(&rho, 3).unwrap();
        assert!((contraction - spectral).abs() < 1e-10);
        let p_route = symmetric_outcome_probability(&rho).unwrap();
        assert!((p_route - (1.0 + 2.0 * spectral) / 3.0).abs() < 1e-10);

        let unnormalized = diag_density(&[0.9, 0.9]);
        assert!(trace_cube(&unnormalized).is_err());
    }

    #[test]
    fn tsallis_matches_closed_forms() {
        let pure = diag_density(&[1.0, 0.0, 0.0]);
        for k in 2..=5 {
            assert!(tsallis(&pure, k).unwrap().abs() < 1e-14);
        }
        let mixed = diag_density(&[0.5, 0.5]);
        assert!((tsallis(&mixed, 3).unwrap() - 0.375).abs() < 1e-14);

        let mut rng = rng_from(66);
        let rho = StateVector::new(2, 2, random_state_amplitudes(4, &mut rng))
            .unwrap()
            .reduced_density(&[1])
            .unwrap();
        let linear = 1.0 - trace_power(&rho, 2).unwrap();
        assert!((tsallis(&rho, 2).unwrap() - linear).abs() < 1e-14);
        assert!(tsallis(&rho, 1).is_err());
    }

    #[test]
    fn gce_of_w_state_is_one_quarter() {
        let c = gce(&w_state(), &[0, 1, 2], 3).unwrap();
        assert!((c - 0.25).abs() < 1e-12, "GCE {c}");
    }

    #[test]
    fn gce_vanishes_on_products() {
        let zero = StateVector::basis_state(3, 2, &[0, 0, 0]).unwrap();
        assert!(gce(&zero, &[0, 1, 2], 3).unwrap().abs() < 1e-12);

        let mut rng = rng_from(14);
        let product = crate::seesaw::ProductState::random(3, 3, &mut rng).state_vector().unwrap();
        assert!(gce(&product, &[0, 1, 2], 3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gce_is_local_unitary_invariant() {
        let psi = random_tripartite(3, 21);
        let reference = gce(&psi, &[0, 1, 2], 3).unwrap();
        let mut rng = rng_from(22);
        for _ in 0..10 {
            let mut big = haar_random_unitary(3, &mut rng);
            for _ in 0..2 {
                big = big.kron(&haar_random_unitary(3, &mut rng));
            }
            let rotated =
                StateVector::from_unnormalized(3, 3, big.matvec(psi.amplitudes())).unwrap();
            let value = gce(&rotated, &[0, 1, 2], 3).unwrap();
            assert!((value - reference).abs() < 1e-10, "{value} vs {reference}");
        }
    }

    #[test]
    fn gce_rejects_bad_subsets() {
        let psi = w_state();
        assert!(gce(&psi, &[], 3).is_err());
        assert!(gce(&psi, &[0, 0], 3).is_err());
        assert!(gce(&psi, &[3], 3).is_err());
        assert!(gce(&psi, &[0, 1, 2], 1).is_err());
    }
}
