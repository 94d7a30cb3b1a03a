use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::cmatrix::CMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the R diagonal
/// phase-fixed to be real positive. Gram-Schmidt is run twice per column so the
/// result is unitary to machine precision.
pub fn haar_random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let mut q = vec![vec![Complex64::ZERO; d]; d]; // columns
    for j in 0..d {
        let mut v: Vec<Complex64> = (0..d).map(|i| g[(i, j)]).collect();
        for _pass in 0..2 {
            for qk in q.iter().take(j) {
                let proj: Complex64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(qk) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        q[j] = v;
    }
    CMatrix::from_fn(d, d, |i, j| q[j][i])
}

/// Normalized random vector with i.i.d. complex Gaussian amplitudes.
pub fn random_state_amplitudes(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn unitary_to_tolerance() {
        let mut rng = rng_from(0xA11CE);
        for d in [2usize, 3, 8, 64] {
            let u = haar_random_unitary(d, &mut rng);
            let dev = u.dagger().mul(&u).sub(&CMatrix::identity(d)).max_abs();
            assert!(dev < 1e-10, "d={d} dev={dev}");
        }
    }

    #[test]
    fn deterministic_per_seed_and_seed_sensitive() {
        let a = haar_random_unitary(6, &mut rng_from(42));
        let b = haar_random_unitary(6, &mut rng_from(42));
        assert_eq!(a, b);
        let c = haar_random_unitary(6, &mut rng_from(43));
        assert!(a.sub(&c).max_abs() > 0.1);
    }

    #[test]
    fn first_moment_close_to_zero() {
        // Haar mean of U is 0; 400 samples at d=2 average well below 0.2 per entry
        let mut rng = rng_from(7);
        let mut acc = CMatrix::zeros(2, 2);
        let samples = 400;
        for _ in 0..samples {
            acc = acc.add(&haar_random_unitary(2, &mut rng));
        }
        let mean = acc.max_abs() / (samples as f64);
        assert!(mean > 0.0 && mean < 0.2);
    }

    #[test]
    fn random_state_normalized() {
        let mut rng = rng_from(9);
        let v = random_state_amplitudes(17, &mut rng);
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
