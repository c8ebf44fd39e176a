//! Fixed-size dense complex matrices: partial-pivot LU and the matrix
//! exponential (Padé 13 with scaling and squaring).

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Relative pivot threshold below which a matrix is treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    data: [[C64; N]; N],
}

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Self {
            data: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(data: [[C64; N]; N]) -> Self {
        Self { data }
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.data
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (o, row) in out.iter_mut().zip(&self.data) {
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.data.iter_mut().flatten().for_each(|x| *x = x.conj());
        m
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.data[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<Lu<N>> {
        Lu::new(self)
    }

    pub fn solve(&self, b: &[C64; N]) -> Result<[C64; N]> {
        Ok(self.lu()?.solve(b))
    }

    /// `exp(self)` by Padé-13 scaling and squaring.
    pub fn expm(&self) -> Self {
        const THETA13: f64 = 5.371_920_351_148_152;
        const B: [f64; 14] = [
            64_764_752_532_480_000.0,
            32_382_376_266_240_000.0,
            7_771_770_303_897_600.0,
            1_187_353_796_428_800.0,
            129_060_195_264_000.0,
            10_559_470_521_600.0,
            670_442_572_800.0,
            33_522_128_640.0,
            1_323_241_920.0,
            40_840_800.0,
            960_960.0,
            16_380.0,
            182.0,
            1.0,
        ];
        let norm = self.norm1();
        if norm == 0.0 {
            return Self::identity();
        }
        let s = if norm > THETA13 {
            (norm / THETA13).log2().ceil() as i32
        } else {
            0
        };
        let a = self.scale(C64::from(2f64.powi(-s)));
        let id = Self::identity();
        let a2 = a * a;
        let a4 = a2 * a2;
        let a6 = a4 * a2;
        let c = |k: usize| C64::from(B[k]);

        let u_inner = a6 * (a6.scale(c(13)) + a4.scale(c(11)) + a2.scale(c(9)))
            + a6.scale(c(7))
            + a4.scale(c(5))
            + a2.scale(c(3))
            + id.scale(c(1));
        let u = a * u_inner;
        let v = a6 * (a6.scale(c(12)) + a4.scale(c(10)) + a2.scale(c(8)))
            + a6.scale(c(6))
            + a4.scale(c(4))
            + a2.scale(c(2))
            + id.scale(c(0));

        // Denominator V - U is well conditioned for ||A|| <= theta13.
        let lu = (v - u).lu().expect("Padé denominator is nonsingular");
        let mut r = lu.solve_matrix(&(v + u));
        for _ in 0..s {
            r = r * r;
        }
        r
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.data.iter_mut().flatten().zip(rhs.data.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.data.iter_mut().flatten().zip(rhs.data.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

/// LU factorization with row pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu<const N: usize> {
    lu: [[C64; N]; N],
    perm: [usize; N],
}

impl<const N: usize> Lu<N> {
    fn new(a: &Matrix<N>) -> Result<Self> {
        let threshold = PIVOT_TOLERANCE * a.max_abs();
        let mut lu = a.data;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        for k in 0..N {
            let (p, pivot) = (k..N)
                .map(|i| (i, lu[i][k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold || pivot == 0.0 {
                return Err(Error::SingularSystem { pivot, threshold });
            }
            lu.swap(k, p);
            perm.swap(k, p);
            let inv = lu[k][k].inv();
            for i in k + 1..N {
                let f = lu[i][k] * inv;
                lu[i][k] = f;
                if f != ZERO {
                    for j in k + 1..N {
                        let u = lu[k][j];
                        lu[i][j] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[C64; N]) -> [C64; N] {
        let mut x = [ZERO; N];
        for (xi, &p) in x.iter_mut().zip(&self.perm) {
            *xi = b[p];
        }
        for i in 0..N {
            for j in 0..i {
                let l = self.lu[i][j];
                x[i] -= l * x[j];
            }
        }
        for i in (0..N).rev() {
            for j in i + 1..N {
                let u = self.lu[i][j];
                x[i] -= u * x[j];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    pub fn solve_matrix(&self, b: &Matrix<N>) -> Matrix<N> {
        let mut out = Matrix::zeros();
        for j in 0..N {
            let col: [C64; N] = std::array::from_fn(|i| b.data[i][j]);
            let x = self.solve(&col);
            for i in 0..N {
                out.data[i][j] = x[i];
            }
        }
        out
    }
}

pub fn max_abs_diff<const N: usize>(a: &[C64; N], b: &[C64; N]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs<const N: usize>(a: &[C64; N]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn lu_solves_permuted_system() {
        // Zero leading entry forces a row swap.
        let a = Matrix::from_rows([
            [ZERO, c(2.0, 1.0), ONE],
            [c(1.0, -1.0), c(0.5, 0.0), c(0.0, 3.0)],
            [c(4.0, 0.0), ONE, c(-1.0, 0.0)],
        ]);
        let x = [c(1.0, 2.0), c(-0.5, 0.0), c(0.0, -1.0)];
        let b = a.mul_vec(&x);
        let got = a.solve(&b).unwrap();
        assert!(max_abs_diff(&got, &x) < 1e-14);
    }

    #[test]
    fn lu_flags_rank_deficiency() {
        let a = Matrix::from_rows([[ONE, c(2.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(matches!(a.lu(), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn expm_of_diagonal_and_rotation() {
        let d = Matrix::from_rows([[c(-3.0, 1.0), ZERO], [ZERO, c(0.25, 0.0)]]);
        let e = d.expm();
        assert!((e[(0, 0)] - c(-3.0, 1.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - c(0.25, 0.0).exp()).norm() < 1e-14);

        // exp of a large skew generator exercises the squaring phase.
        let w = 40.0;
        let g = Matrix::from_rows([[ZERO, c(-w, 0.0)], [c(w, 0.0), ZERO]]);
        let e = g.expm();
        assert!((e[(0, 0)].re - w.cos()).abs() < 1e-11);
        assert!((e[(1, 0)].re - w.sin()).abs() < 1e-11);
    }

    #[test]
    fn expm_nilpotent_is_exact_polynomial() {
        let n = Matrix::from_rows([
            [ZERO, c(1.0, 0.0), c(2.0, 0.0)],
            [ZERO, ZERO, c(3.0, 0.0)],
            [ZERO, ZERO, ZERO],
        ]);
        let e = n.expm();
        // I + N + N^2/2, with N^2 having a single entry 3 at (0, 2).
        assert!((e[(0, 2)] - c(3.5, 0.0)).norm() < 1e-13);
        assert!((e[(0, 1)] - ONE).norm() < 1e-14);
        assert!((e[(1, 2)] - c(3.0, 0.0)).norm() < 1e-14);
    }
}
