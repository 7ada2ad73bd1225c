//! Matrix polynomials with exact coefficient arithmetic.

use crate::matcore::{zeros, CMatrix, C64};

/// A polynomial `sum_k z^k C_k` whose coefficients are `rows x cols`
/// complex matrices, stored in ascending degree.
///
/// The leading coefficient may be zero, so [`MatrixPolynomial::degree_bound`]
/// is an upper bound for the true degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    rows: usize,
    cols: usize,
    coeffs: Vec<CMatrix>,
}

impl MatrixPolynomial {
    /// Polynomial from its coefficients (ascending degree).
    ///
    /// # Panics
    ///
    /// Panics when `coeffs` is empty or the shapes differ.
    pub fn new(coeffs: Vec<CMatrix>) -> Self {
        let (rows, cols) = coeffs
            .first()
            .expect("a matrix polynomial needs at least one coefficient")
            .shape();
        assert!(
            coeffs.iter().all(|c| c.shape() == (rows, cols)),
            "all coefficients must share one shape"
        );
        Self { rows, cols, coeffs }
    }

    /// Constant polynomial.
    pub fn constant(c: CMatrix) -> Self {
        Self::new(vec![c])
    }

    /// The zero polynomial of a given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::constant(zeros(rows, cols))
    }

    /// The polynomial `(z - a) I_n`.
    pub fn linear_factor(n: usize, a: C64) -> Self {
        let id = CMatrix::identity(n, n);
        Self::new(vec![id.scale(-1.0).map(|x| x * a), id])
    }

    /// Row count of every coefficient.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count of every coefficient.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficients in ascending degree.
    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Number of stored coefficients minus one.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest index with a nonzero coefficient (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.iter().any(|x| *x != C64::new(0.0, 0.0)))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> CMatrix {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.map(|x| x * z) + c;
        }
        acc
    }

    /// Sum of two polynomials of equal shape.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let mut c = zeros(self.rows, self.cols);
                if let Some(a) = self.coeffs.get(k) {
                    c += a;
                }
                if let Some(b) = other.coeffs.get(k) {
                    c += b;
                }
                c
            })
            .collect();
        Self::new(coeffs)
    }

    /// Difference of two polynomials of equal shape.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, a: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.map(|x| x * a)).collect())
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul(&self, a: &CMatrix) -> Self {
        Self::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// Right multiplication by a constant matrix.
    pub fn right_mul(&self, b: &CMatrix) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * b).collect())
    }

    /// Multiplication by the scalar polynomial `z - a`.
    pub fn mul_linear(&self, a: C64) -> Self {
        let mut coeffs = vec![zeros(self.rows, self.cols); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] += c;
            coeffs[k] -= c.map(|x| x * a);
        }
        Self::new(coeffs)
    }

    /// Copy of the `(i, j)` block of size `rows x cols` in every coefficient.
    pub fn sub_block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| c.view((i, j), (rows, cols)).into_owned())
                .collect(),
        )
    }

    /// Largest Frobenius norm of a coefficient difference.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        self.sub(other)
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}
