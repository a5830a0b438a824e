//! Small dense complex linear algebra: 2×2 helpers and a partially pivoted
//! LU solve used by the boundary-matching oracle.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn det2(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse by the adjugate; `None` when the determinant is exactly zero.
pub fn inv2(a: &Mat2) -> Option<Mat2> {
    let d = det2(a);
    if d == ZERO {
        return None;
    }
    Some([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
}

pub fn adjoint2(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff2(a: &Mat2, b: &Mat2) -> f64 {
    let mut m = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn max_abs2(a: &Mat2) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// LU factorisation with partial (row) pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` if a zero pivot is met.
    pub fn factor(a: &DenseMatrix) -> Option<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (piv, best) = (col..n)
                .map(|r| (r, lu.get(r, col).norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    lu.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
            }
            let d = lu.get(col, col);
            for r in col + 1..n {
                let f = lu.get(r, col) / d;
                lu.set(r, col, f);
                for j in col + 1..n {
                    let v = lu.get(r, j) - f * lu.get(col, j);
                    lu.set(r, j, v);
                }
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = self.lu.get(i, j) * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = self.lu.get(i, j) * x[j];
                x[i] -= v;
            }
            x[i] /= self.lu.get(i, i);
        }
        x
    }

    /// `‖A⁻¹‖₁`, from the explicit inverse (fine for the small systems used
    /// here).
    pub fn inverse_norm1(&self) -> f64 {
        let n = self.lu.n;
        let mut worst = 0.0_f64;
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = ZERO);
            e[j] = ONE;
            let col = self.solve(&e);
            worst = worst.max(col.iter().map(|z| z.norm()).sum());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_2x2() {
        let a = [[c(1.0, 2.0), c(0.5, -1.0)], [c(-3.0, 0.1), c(2.0, 2.0)]];
        let ai = inv2(&a).unwrap();
        assert!(max_abs_diff2(&mul2(&a, &ai), &identity2()) < 1e-15);
        assert!(inv2(&[[ONE, ONE], [ONE, ONE]]).is_none());
    }

    #[test]
    fn lu_needs_pivoting() {
        // zero leading entry forces a row swap
        let mut a = DenseMatrix::zeros(3);
        let rows = [
            [c(0.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)],
            [c(1.0, -1.0), c(0.0, 3.0), c(4.0, 0.0)],
            [c(2.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                a.set(i, j, *v);
            }
        }
        let x = [c(1.0, 1.0), c(-2.0, 0.5), c(0.0, 3.0)];
        let b = a.mul_vec(&x);
        let lu = Lu::factor(&a).unwrap();
        let y = lu.solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).norm() < 1e-14);
        }
        assert!(lu.inverse_norm1() * a.norm1() < 100.0);
    }

    #[test]
    fn singular_matrix_is_detected() {
        let mut a = DenseMatrix::zeros(2);
        a.set(0, 0, ONE);
        a.set(0, 1, ONE);
        a.set(1, 0, ONE);
        a.set(1, 1, ONE);
        assert!(Lu::factor(&a).is_none());
    }
}
