//! Dense complex matrix utilities.
//!
//! Everything here works on [`CMatrix`], a heap-allocated matrix of
//! `Complex64` entries. The module provides Hermitian and positive
//! semidefiniteness tests, numerical rank, the Moore-Penrose inverse,
//! Hermitian (1,2)-inverses with a prescribed range, orthonormal subspaces
//! with their projectors, and Dubovoj subspaces.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Shorthand for a complex scalar.
pub type C64 = Complex64;

/// Shorthand constructor for a complex scalar.
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Relative tolerances used by all numerical tests.
///
/// Every tolerance is relative: a test on a matrix `A` compares a residual
/// against `tol * (1 + ||A||)`, and rank decisions compare singular values
/// against `tol_rank * sigma_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Allowed deviation `||A - A*||` for Hermitian tests.
    pub tol_herm: f64,
    /// Allowed negative part of the smallest eigenvalue in PSD tests.
    pub tol_psd: f64,
    /// Relative singular-value cut-off for rank decisions.
    pub tol_rank: f64,
    /// Allowed residual for identity and range checks.
    pub tol_identity: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_herm: 1e-10,
            tol_psd: 1e-9,
            tol_rank: 1e-10,
            tol_identity: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// Checks that every tolerance is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let entries = [
            ("tol_herm", self.tol_herm),
            ("tol_psd", self.tol_psd),
            ("tol_rank", self.tol_rank),
            ("tol_identity", self.tol_identity),
        ];
        for (name, value) in entries {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {value}")));
            }
        }
        Ok(())
    }
}

/// `n x n` identity matrix.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `rows x cols` zero matrix.
pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a matrix from real row vectors, mainly for tests and examples.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::real_matrix;
/// let a = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0]]);
/// assert_eq!(a[(1, 0)].re, 3.0);
/// ```
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
}

/// Real diagonal matrix.
pub fn real_diag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c64(entries[i], 0.0) } else { c64(0.0, 0.0) })
}

/// `1 x 1` matrix holding a scalar.
pub fn scalar(z: C64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

/// Frobenius norm.
pub fn norm(a: &CMatrix) -> f64 {
    a.norm()
}

/// True when every entry is finite.
pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn ensure_finite(a: &CMatrix) -> Result<()> {
    if is_finite(a) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn ensure_square(a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

/// Hermitian part `(A + A*)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// True when `||A - A*|| <= tol_herm (1 + ||A||)`.
pub fn is_hermitian(a: &CMatrix, tol: &ToleranceConfig) -> bool {
    a.is_square() && norm(&(a - a.adjoint())) <= tol.tol_herm * (1.0 + norm(a))
}

/// Passes the Hermitian gate and returns the exactly Hermitian part.
pub fn hermitize_checked(a: &CMatrix, tol: &ToleranceConfig, what: &str) -> Result<CMatrix> {
    ensure_square(a)?;
    ensure_finite(a)?;
    if !is_hermitian(a, tol) {
        return Err(Error::NotHermitian(what.to_string()));
    }
    Ok(hermitian_part(a))
}

/// Eigenvalues of the Hermitian part of `a`, in ascending order.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let h = to_faer(&hermitian_part(a));
    let mut values = h
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .unwrap_or_else(|_| vec![f64::NAN; a.nrows()]);
    values.sort_by(|x, y| x.total_cmp(y));
    values
}

/// Smallest eigenvalue of the Hermitian part (`+inf` for an empty matrix).
pub fn lambda_min(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(f64::INFINITY)
}

/// Positive semidefiniteness test.
///
/// Returns true when `A` is Hermitian within `tol_herm` and the smallest
/// eigenvalue of its Hermitian part is at least `-tol_psd (1 + ||A||)`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{is_psd, real_matrix, ToleranceConfig};
/// let tol = ToleranceConfig::default();
/// assert!(is_psd(&real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), &tol).unwrap());
/// assert!(!is_psd(&real_matrix(&[&[1.0, 2.0], &[2.0, 1.0]]), &tol).unwrap());
/// ```
pub fn is_psd(a: &CMatrix, tol: &ToleranceConfig) -> Result<bool> {
    ensure_square(a)?;
    ensure_finite(a)?;
    if !is_hermitian(a, tol) {
        return Ok(false);
    }
    Ok(lambda_min(a) >= -tol.tol_psd * (1.0 + norm(a)))
}

fn to_faer(a: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD `A = U diag(s) V*`, or `None` if the iteration fails.
fn thin_svd(a: &CMatrix) -> Option<(CMatrix, Vec<f64>, CMatrix)> {
    let svd = to_faer(a).thin_svd().ok()?;
    let (u, v) = (svd.U(), svd.V());
    let s = svd.S().column_vector();
    let k = s.nrows();
    Some((
        CMatrix::from_fn(u.nrows(), k, |i, j| u[(i, j)]),
        (0..k).map(|i| s[i].re).collect(),
        CMatrix::from_fn(v.nrows(), k, |i, j| v[(i, j)]),
    ))
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut values = to_faer(a)
        .singular_values()
        .unwrap_or_else(|_| vec![f64::NAN; a.nrows().min(a.ncols())]);
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Largest singular value (spectral norm), zero for empty matrices.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Numerical rank: singular values above `tol_rank * sigma_max`.
pub fn rank(a: &CMatrix, tol: &ToleranceConfig) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.tol_rank * smax).count()
}

/// Rank with an externally supplied scale: singular values above
/// `tol_rank * max(sigma_max, scale)`.
///
/// Useful when a matrix is a product that may vanish up to round-off, so
/// that its own largest singular value is not a meaningful reference.
pub fn rank_with_scale(a: &CMatrix, scale: f64, tol: &ToleranceConfig) -> usize {
    let sv = singular_values(a);
    let reference = sv.first().copied().unwrap_or(0.0).max(scale);
    if reference == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.tol_rank * reference).count()
}

/// Orthonormal basis of the column space, keeping singular directions
/// whose singular value exceeds `threshold` (absolute).
pub fn range_basis_abs(a: &CMatrix, threshold: f64) -> CMatrix {
    let rows = a.nrows();
    if rows == 0 || a.ncols() == 0 {
        return zeros(rows, 0);
    }
    let Some((u, singular, _)) = thin_svd(a) else {
        return zeros(rows, 0);
    };
    let keep: Vec<usize> = singular
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > threshold)
        .map(|(i, _)| i)
        .collect();
    let mut basis = zeros(rows, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        basis.set_column(k, &u.column(i));
    }
    basis
}

/// Orthonormal basis of the column space using the relative rank cut-off.
pub fn range_basis(a: &CMatrix, tol: &ToleranceConfig) -> CMatrix {
    let smax = spectral_norm(a);
    range_basis_abs(a, tol.tol_rank * smax)
}

/// Moore-Penrose inverse.
///
/// Singular values below `tol_rank * sigma_max` are treated as zero.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{pseudo_inverse, real_matrix, ToleranceConfig};
/// let a = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
/// let p = pseudo_inverse(&a, &ToleranceConfig::default()).unwrap();
/// assert!((p[(0, 1)].re - 0.25).abs() < 1e-14);
/// ```
pub fn pseudo_inverse(a: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix> {
    ensure_finite(a)?;
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Ok(zeros(c, r));
    }
    let (u, singular, v) = thin_svd(a)
        .ok_or(Error::NonFinite)?;
    let smax = singular.iter().copied().fold(0.0, f64::max);
    let mut out = zeros(c, r);
    if smax == 0.0 {
        return Ok(out);
    }
    for (i, &s) in singular.iter().enumerate() {
        if s > tol.tol_rank * smax {
            out += (v.column(i) * u.column(i).adjoint()).scale(1.0 / s);
        }
    }
    Ok(out)
}

/// Dense inverse of a square matrix.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    ensure_square(a)?;
    if a.nrows() == 0 {
        return Ok(zeros(0, 0));
    }
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("{}x{} matrix", a.nrows(), a.ncols())))
}

/// Projector onto the null space of `a`, computed from its SVD.
///
/// This is `I - A⁺A` with exact zeros when `A` has full column rank.
pub fn null_projector(a: &CMatrix, tol: &ToleranceConfig) -> CMatrix {
    let cols = a.ncols();
    let row_space = range_basis(&a.adjoint(), tol);
    identity(cols) - &row_space * row_space.adjoint()
}

/// Range inclusion test `R(A) ⊆ R(B)`.
///
/// True iff `||A - B B⁺ A|| <= tol_identity (1 + ||A||)`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{range_included, real_matrix, ToleranceConfig};
/// let tol = ToleranceConfig::default();
/// let b = real_matrix(&[&[0.0], &[1.0]]);
/// let a = real_matrix(&[&[1.0], &[0.0]]);
/// assert!(!range_included(&b, &a, &tol).unwrap());
/// ```
pub fn range_included(b: &CMatrix, a: &CMatrix, tol: &ToleranceConfig) -> Result<bool> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "range test needs equal row counts, got {} and {}",
            b.nrows(),
            a.nrows()
        )));
    }
    ensure_finite(a)?;
    ensure_finite(b)?;
    let bp = pseudo_inverse(b, tol)?;
    let residual = a - b * (bp * a);
    Ok(norm(&residual) <= tol.tol_identity * (1.0 + norm(a)))
}

/// A linear subspace of `C^p` stored through an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis with orthonormal columns.
    ///
    /// Fails when `basis* basis` differs from the identity by more than
    /// `tol_identity`.
    pub fn from_orthonormal(basis: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        ensure_finite(&basis)?;
        let d = basis.ncols();
        let gram = basis.adjoint() * &basis;
        if norm(&(gram - identity(d))) > tol.tol_identity * (1.0 + d as f64) {
            return Err(Error::DimensionMismatch(
                "subspace basis is not orthonormal".to_string(),
            ));
        }
        Ok(Self { basis })
    }

    /// Column space of an arbitrary matrix, with the relative rank cut-off.
    pub fn span(a: &CMatrix, tol: &ToleranceConfig) -> Self {
        Self {
            basis: range_basis(a, tol),
        }
    }

    /// Column space keeping singular values above an absolute threshold.
    pub fn span_abs(a: &CMatrix, threshold: f64) -> Self {
        Self {
            basis: range_basis_abs(a, threshold),
        }
    }

    /// The zero subspace of `C^p`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: zeros(ambient_dim, 0),
        }
    }

    /// The whole space `C^p`.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: identity(ambient_dim),
        }
    }

    /// Dimension `p` of the surrounding space.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis as the columns of a `p x d` matrix.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement in `C^p`.
    pub fn orthogonal_complement(&self) -> Self {
        let p = self.ambient_dim();
        let residual = identity(p) - self.projector();
        Self {
            basis: range_basis_abs(&residual, 0.5),
        }
    }

    /// Same subspace described by the rotated basis `basis * rotation`.
    ///
    /// `rotation` must be a `d x d` unitary matrix.
    pub fn rotated(&self, rotation: &CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if rotation.shape() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "rotation must be {d}x{d}",
                d = self.dim()
            )));
        }
        Self::from_orthonormal(&self.basis * rotation, tol)
    }
}

/// Orthogonal projector `B_U B_U*` onto `U`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{projector, Subspace};
/// assert_eq!(projector(&Subspace::zero(2)).norm(), 0.0);
/// ```
pub fn projector(u: &Subspace) -> CMatrix {
    u.projector()
}

/// Hermitian (1,2)-inverse `A_U^-` with range `U` and null space `U⊥`.
///
/// Computed as `B_U (B_U* A B_U)^{-1} B_U*`. The direct-sum condition
/// `N(A) ⊕ U = C^p` is checked through `dim U = rank A` and the
/// invertibility of the compression `B_U* A B_U`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{one_two_inverse, real_matrix, Subspace, ToleranceConfig};
/// let tol = ToleranceConfig::default();
/// let a = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
/// let u = Subspace::span(&real_matrix(&[&[1.0], &[0.0]]), &tol);
/// let x = one_two_inverse(&a, &u, &tol).unwrap();
/// assert!((x[(0, 0)].re - 1.0).abs() < 1e-14 && x[(1, 1)].norm() < 1e-14);
/// ```
pub fn one_two_inverse(a: &CMatrix, u: &Subspace, tol: &ToleranceConfig) -> Result<CMatrix> {
    let a = hermitize_checked(a, tol, "(1,2)-inverse input")?;
    let p = a.nrows();
    if u.ambient_dim() != p {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in C^{} but the matrix is {p}x{p}",
            u.ambient_dim()
        )));
    }
    let r = rank(&a, tol);
    if r != u.dim() {
        return Err(Error::DirectSum(format!(
            "rank A = {r} but dim U = {}",
            u.dim()
        )));
    }
    if r == 0 {
        return Ok(zeros(p, p));
    }
    let b = u.basis();
    let compression = hermitian_part(&(b.adjoint() * &a * b));
    let sv = singular_values(&compression);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smin <= tol.tol_rank * spectral_norm(&a) {
        return Err(Error::DirectSum(
            "compression B_U* A B_U is singular".to_string(),
        ));
    }
    let inv = inverse(&compression)?;
    Ok(hermitian_part(&(b * inv * b.adjoint())))
}

/// Canonical Dubovoj subspace: the range of `diag(L_0, ..., L_n)`.
///
/// A basis of each `R(L_j)` is embedded into block `j`. Singular values of
/// the blocks are cut at `tol_rank` times the largest block norm, so that a
/// block that vanishes up to round-off contributes nothing.
pub fn dubovoj_subspace(blocks: &[CMatrix], tol: &ToleranceConfig) -> Result<Subspace> {
    let q = blocks.first().map_or(0, |b| b.nrows());
    for b in blocks {
        if b.shape() != (q, q) {
            return Err(Error::DimensionMismatch(format!(
                "Dubovoj blocks must all be {q}x{q}"
            )));
        }
        ensure_finite(b)?;
    }
    let scale = blocks.iter().map(spectral_norm).fold(0.0, f64::max);
    let threshold = tol.tol_rank * scale;
    let p = q * blocks.len();
    let pieces: Vec<CMatrix> = blocks
        .iter()
        .map(|b| {
            if scale == 0.0 {
                zeros(q, 0)
            } else {
                range_basis_abs(b, threshold)
            }
        })
        .collect();
    let d: usize = pieces.iter().map(|m| m.ncols()).sum();
    let mut basis = zeros(p, d);
    let mut col = 0;
    for (j, piece) in pieces.iter().enumerate() {
        basis
            .view_mut((j * q, col), (q, piece.ncols()))
            .copy_from(piece);
        col += piece.ncols();
    }
    Ok(Subspace { basis })
}

/// Tests whether `D` is a Dubovoj subspace for `(H, T)`.
///
/// Checks `T*(D) ⊆ D` and `N(H) ⊕ D = C^p`.
pub fn is_dubovoj(d: &Subspace, h: &CMatrix, t: &CMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let p = d.ambient_dim();
    if h.shape() != (p, p) || t.shape() != (p, p) {
        return Err(Error::DimensionMismatch(format!(
            "H and T must be {p}x{p}"
        )));
    }
    let proj = d.projector();
    let leak = (identity(p) - &proj) * t.adjoint() * &proj;
    if norm(&leak) > tol.tol_identity * (1.0 + norm(t)) {
        return Ok(false);
    }
    let null = Subspace::span_abs(&null_projector(h, tol), 0.5);
    if null.dim() + d.dim() != p {
        return Ok(false);
    }
    let mut stacked = zeros(p, p);
    stacked.view_mut((0, 0), (p, d.dim())).copy_from(d.basis());
    stacked
        .view_mut((0, d.dim()), (p, null.dim()))
        .copy_from(null.basis());
    Ok(rank_with_scale(&stacked, 1.0, tol) == p)
}

/// Horizontal concatenation of blocks with equal row counts.
pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack: row counts differ");
        out.view_mut((0, c), b.shape()).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Vertical concatenation of blocks with equal column counts.
pub fn vstack(blocks: &[&CMatrix]) -> CMatrix {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack: column counts differ");
        out.view_mut((r, 0), b.shape()).copy_from(*b);
        r += b.nrows();
    }
    out
}

/// Block matrix assembled from a row-major grid of blocks.
pub fn block(rows: &[&[&CMatrix]]) -> CMatrix {
    let assembled: Vec<CMatrix> = rows.iter().map(|row| hstack(row)).collect();
    let refs: Vec<&CMatrix> = assembled.iter().collect();
    vstack(&refs)
}

/// Block-diagonal matrix.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Copy of the `(i, j)` block of size `rows x cols`.
pub fn sub_block(a: &CMatrix, i: usize, j: usize, rows: usize, cols: usize) -> CMatrix {
    a.view((i, j), (rows, cols)).into_owned()
}
