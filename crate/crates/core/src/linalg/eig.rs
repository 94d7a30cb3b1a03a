use num_complex::Complex64;

use super::cmatrix::CMatrix;
use crate::error::{Error, Result};

/// Eigenvalues ascending; `vectors` holds the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

const SWEEP_THRESHOLD: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Deterministic: fixed pivot order, rotations accumulated from the identity,
/// sweeps stop once every off-diagonal entry falls below 1e-12 relative to the
/// largest input entry (at most 100 sweeps).
pub fn hermitian_eig(a: &CMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let n = a.rows();
    let scale = a.max_abs();
    let dev = a.hermiticity_deviation();
    if dev > 1e-10 * (1.0 + scale) {
        return Err(Error::NotHermitian { dev });
    }
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: CMatrix::zeros(0, 0) });
    }

    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = SWEEP_THRESHOLD * scale.max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq <= 0.1 * threshold {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let u = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = s * u;
                // columns: col_p <- c*col_p - conj(su)*col_q ; col_q <- su*col_p + c*col_q
                for r in 0..n {
                    let mp = m[(r, p)];
                    let mq = m[(r, q)];
                    m[(r, p)] = c * mp - su.conj() * mq;
                    m[(r, q)] = su * mp + c * mq;
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = c * vp - su.conj() * vq;
                    v[(r, q)] = su * vp + c * vq;
                }
                // rows: row_p <- c*row_p - su*row_q ; row_q <- conj(su)*row_p + c*row_q
                for col in 0..n {
                    let mp = m[(p, col)];
                    let mq = m[(q, col)];
                    m[(p, col)] = c * mp - su * mq;
                    m[(q, col)] = su.conj() * mp + c * mq;
                }
                m[(p, q)] = Complex64::ZERO;
                m[(q, p)] = Complex64::ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(a)?.min())
}

/// Cholesky factor L (lower triangular, A = L L^dag) of a Hermitian
/// positive-definite matrix; `None` if a pivot is not strictly positive.
pub fn cholesky(a: &CMatrix) -> Option<CMatrix> {
    assert!(a.is_square());
    let n = a.rows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

/// 2 * sum(log diag(L)), i.e. log det A for A = L L^dag.
pub fn log_det_from_cholesky(l: &CMatrix) -> f64 {
    (0..l.rows()).map(|i| l[(i, i)].re.ln()).sum::<f64>() * 2.0
}

/// Solve A x = b given the Cholesky factor of A.
pub fn cholesky_solve(l: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            y[i] = y[i] - lik * y[k];
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let lki = l[(k, i)].conj();
            y[i] = y[i] - lki * y[k];
        }
        y[i] /= l[(i, i)];
    }
    y
}

/// Inverse from a Cholesky factor.
pub fn cholesky_inverse(l: &CMatrix) -> CMatrix {
    let n = l.rows();
    let mut inv = CMatrix::zeros(n, n);
    let mut e = vec![Complex64::ZERO; n];
    for j in 0..n {
        e[j] = Complex64::ONE;
        let col = cholesky_solve(l, &e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
        e[j] = Complex64::ZERO;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        g.hermitian_part()
    }

    #[test]
    fn pauli_y_eigensystem() {
        let sy = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]);
        let e = hermitian_eig(&sy).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let v = e.vector(k);
            let av = sy.matvec(&v);
            let res: f64 = av.iter().zip(&v).map(|(a, x)| (a - e.values[k] * x).norm_sqr()).sum::<f64>().sqrt();
            assert!(res < 1e-12);
        }
    }

    #[test]
    fn fixed_3x3_with_known_spectrum() {
        // diag(1,2,5) conjugated by a fixed unitary-ish rotation, spectrum preserved
        let d = CMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ]);
        let (s, co) = (0.6_f64, 0.8_f64);
        let u = CMatrix::from_rows(vec![
            vec![c(co, 0.0), c(0.0, -s), c(0.0, 0.0)],
            vec![c(0.0, -s), c(co, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let a = u.mul(&d).mul(&u.dagger());
        let e = hermitian_eig(&a).unwrap();
        let expect = [1.0, 2.0, 5.0];
        for (got, want) in e.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_and_residual_random() {
        let mut rng = rng_from(07011);
        for n in [2usize, 5, 16, 40] {
            let a = random_hermitian(n, &mut rng);
            let e = hermitian_eig(&a).unwrap();
            let norm = a.frobenius_norm().max(1e-30);
            // residual ||A v - lambda v|| <= 1e-9 ||A||
            for k in 0..n {
                let v = e.vector(k);
                let av = a.matvec(&v);
                let res: f64 =
                    av.iter().zip(&v).map(|(x, y)| (x - e.values[k] * y).norm_sqr()).sum::<f64>().sqrt();
                assert!(res <= 1e-9 * norm, "residual {res} at n={n}, k={k}");
            }
            // V diag(w) V^dag == A
            let mut rec = CMatrix::zeros(n, n);
            for k in 0..n {
                let v = e.vector(k);
                for i in 0..n {
                    for j in 0..n {
                        rec[(i, j)] += e.values[k] * v[i] * v[j].conj();
                    }
                }
            }
            assert!(rec.sub(&a).max_abs() < 1e-10 * (1.0 + a.max_abs()));
        }
    }

    #[test]
    fn eigenvalues_sorted_and_orthonormal_vectors() {
        let mut rng = rng_from(07012);
        let a = random_hermitian(24, &mut rng);
        let e = hermitian_eig(&a).unwrap();
        for w in e.values.windows(2) {
            assert!(w[0] <= w[1] + 1e-15);
        }
        let vt_v = e.vectors.dagger().mul(&e.vectors);
        assert!(vt_v.sub(&CMatrix::identity(24)).max_abs() < 1e-11);
    }

    #[test]
    fn spectrum_invariant_under_unitary_conjugation() {
        let mut rng = rng_from(07013);
        for _ in 0..5 {
            let a = random_hermitian(12, &mut rng);
            let u = super::super::haar::haar_random_unitary(12, &mut rng);
            let b = u.mul(&a).mul(&u.dagger());
            let ea = hermitian_eig(&a).unwrap();
            let eb = hermitian_eig(&b).unwrap();
            for (x, y) in ea.values.iter().zip(&eb.values) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = CMatrix::from_rows(vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn cholesky_roundtrip_and_rejection() {
        let mut rng = rng_from(07014);
        let g = CMatrix::from_fn(9, 9, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let a = g.mul(&g.dagger()).add(&CMatrix::identity(9).scale(c(0.1, 0.0)));
        let l = cholesky(&a).expect("pd");
        assert!(l.mul(&l.dagger()).sub(&a).max_abs() < 1e-12 * (1.0 + a.max_abs()));
        let e = hermitian_eig(&a).unwrap();
        let ld = log_det_from_cholesky(&l);
        let ld_eig: f64 = e.values.iter().map(|x| x.ln()).sum();
        assert!((ld - ld_eig).abs() < 1e-9);

        let b = CMatrix::from_rows(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(1.0, 0.0)]]);
        assert!(cholesky(&b).is_none());
    }

    #[test]
    fn cholesky_solve_and_inverse() {
        let mut rng = rng_from(07015);
        let g = CMatrix::from_fn(7, 7, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let a = g.mul(&g.dagger()).add(&CMatrix::identity(7).scale(c(0.3, 0.0)));
        let l = cholesky(&a).unwrap();
        let b: Vec<Complex64> = (0..7).map(|_| c(rng.random::<f64>(), rng.random::<f64>())).collect();
        let x = cholesky_solve(&l, &b);
        let ax = a.matvec(&x);
        let err: f64 = ax.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10);
        let inv = cholesky_inverse(&l);
        assert!(a.mul(&inv).sub(&CMatrix::identity(7)).max_abs() < 1e-10);
    }
}
