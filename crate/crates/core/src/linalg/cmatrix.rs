use num_complex::Complex64;

/// Dense row-major complex matrix. Sizes in this crate stay small (<= 256 per side),
/// so everything is straightforward O(n^3) dense arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    /// self += s * other, in place.
    pub fn add_scaled(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        for (d, a) in self.data.iter_mut().zip(&other.data) {
            *d += s * a;
        }
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Hermitian part (A + A^dag)/2.
    pub fn hermitian_part(&self) -> CMatrix {
        self.add(&self.dagger()).scale(Complex64::new(0.5, 0.0))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mul_against_hand_computation() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(-1.0, 0.0)],
        ]);
        let b = CMatrix::from_rows(vec![
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, -1.0)],
        ]);
        let ab = a.mul(&b);
        assert_eq!(ab[(0, 0)], c(-1.0, 5.0));
        assert_eq!(ab[(0, 1)], c(3.0, 1.0));
        assert_eq!(ab[(1, 0)], c(-2.0, 3.0));
        assert_eq!(ab[(1, 1)], c(3.0, 1.0));
    }

    #[test]
    fn kron_mixed_product_rule() {
        let a = CMatrix::from_rows(vec![vec![c(1.0, 0.5), c(0.0, 1.0)], vec![c(2.0, 0.0), c(1.0, -1.0)]]);
        let b = CMatrix::from_rows(vec![vec![c(0.5, 0.0), c(1.0, 1.0)], vec![c(0.0, -2.0), c(3.0, 0.0)]]);
        let cc = CMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 1.0), c(2.0, 0.0)]]);
        let d = CMatrix::from_rows(vec![vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let lhs = a.kron(&b).mul(&cc.kron(&d));
        let rhs = a.mul(&cc).kron(&b.mul(&d));
        assert!(lhs.sub(&rhs).max_abs() < 1e-14);
    }

    #[test]
    fn kron_associative() {
        let a = CMatrix::from_rows(vec![vec![c(1.0, 2.0)], vec![c(0.0, 1.0)]]);
        let b = CMatrix::identity(2);
        let cc = CMatrix::from_rows(vec![vec![c(0.5, -0.5), c(2.0, 0.0)]]);
        let lhs = a.kron(&b).kron(&cc);
        let rhs = a.kron(&b.kron(&cc));
        assert!(lhs.sub(&rhs).max_abs() == 0.0);
    }

    #[test]
    fn dagger_involution_and_trace() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(-1.0, 4.0)],
        ]);
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!(a.trace(), c(0.0, 5.0));
    }
}
