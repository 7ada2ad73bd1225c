//! Potapov fundamental matrices and the auxiliary matrices `F_k`, `Q_k`,
//! `Psi_k`.
//!
//! For a function `f` with `q x q` values, an index `k` and a non-real `z`,
//! the Potapov matrix `P_k^[f](z)` is a Hermitian block matrix whose
//! nonnegativity for every `k` and every `z` characterizes the Stieltjes
//! transforms of solutions. Index `k = 2n` uses `H_n` and `f`, index
//! `k = 2n+1` uses `H_{alpha,n}` and `(z - alpha) f`, and `k = -1` is the
//! single block `((z-a) f - ((z-a) f)*) / (z - conj z)`.

use crate::error::{Error, Result};
use crate::matcore::{
    self, block, block_diag, c64, hstack, identity, pseudo_inverse, zeros, CMatrix,
    ToleranceConfig, C64,
};
use crate::momentseq::MomentSequence;
use crate::poly::MatrixPolynomial;
use crate::resolvent::{
    frak_v_selector, monomial_stack, resolvent_adj_at, resolvent_adj_poly, resolvent_at,
    resolvent_poly, shift_matrix, v_selector,
};

/// Smallest admissible `|Im z|` for Potapov matrices.
pub const MIN_IMAG: f64 = 1e-8;

/// A function `z -> f(z)` with `q x q` matrix values.
pub trait MatrixFunction {
    /// Size `q` of the values.
    fn dim(&self) -> usize;
    /// Value at `z`.
    fn eval(&self, z: C64) -> Result<CMatrix>;
}

/// Adapter turning a closure into a [`MatrixFunction`].
pub struct FunctionSamples<F> {
    q: usize,
    f: F,
}

impl<F> FunctionSamples<F>
where
    F: Fn(C64) -> CMatrix,
{
    /// Wraps a closure that returns `q x q` matrices.
    pub fn new(q: usize, f: F) -> Self {
        Self { q, f }
    }
}

impl<F> MatrixFunction for FunctionSamples<F>
where
    F: Fn(C64) -> CMatrix,
{
    fn dim(&self) -> usize {
        self.q
    }

    fn eval(&self, z: C64) -> Result<CMatrix> {
        let value = (self.f)(z);
        if !matcore::is_finite(&value) {
            return Err(Error::NonFinite);
        }
        Ok(value)
    }
}

/// The function `z -> f(conj z)*`.
pub struct Mirrored<'a>(pub &'a dyn MatrixFunction);

impl MatrixFunction for Mirrored<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, z: C64) -> Result<CMatrix> {
        Ok(self.0.eval(z.conj())?.adjoint())
    }
}

fn ensure_nonreal(z: C64) -> Result<()> {
    if z.im.abs() < MIN_IMAG {
        Err(Error::RealPoint(z))
    } else {
        Ok(())
    }
}

fn imaginary_quotient(a: &CMatrix, z: C64) -> CMatrix {
    let denom = z - z.conj();
    (a - a.adjoint()).map(|x| x / denom)
}

/// Hankel block, right column generator and lower block of `P_k` for `k >= 0`.
struct PotapovParts {
    hankel: CMatrix,
    /// `v f - u_n` or `v (z-a) f - (-a u_n - y_{0,n})`.
    column: CMatrix,
    /// `f` or `(z-a) f`.
    weighted: CMatrix,
    n: usize,
}

fn parts(seq: &MomentSequence, f: &CMatrix, z: C64, k: usize) -> Result<PotapovParts> {
    let q = seq.q();
    let n = k / 2;
    let v = v_selector(q, n);
    let u = seq.u_vec(n)?;
    if k.is_multiple_of(2) {
        Ok(PotapovParts {
            hankel: seq.hankel(n)?,
            column: &v * f - u,
            weighted: f.clone(),
            n,
        })
    } else {
        let a = c64(seq.alpha(), 0.0);
        let weighted = f.map(|x| x * (z - a));
        let w = -(u.scale(seq.alpha())) - seq.y_stack(0, n as isize)?;
        Ok(PotapovParts {
            hankel: seq.hankel_shifted(n)?,
            column: &v * &weighted - w,
            weighted,
            n,
        })
    }
}

/// Potapov matrix `P_k^[f](z)` for `k in {-1, 0, ..., m}`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{c64, scalar};
/// use stieltjes_core::momentseq::MomentSequence;
/// use stieltjes_core::potapov::{potapov_matrix, FunctionSamples};
/// let seq = MomentSequence::scalar(0.0, &[1.0, 1.0]).unwrap();
/// let f = FunctionSamples::new(1, |z| scalar(1.0 / (c64(1.0, 0.0) - z)));
/// let p = potapov_matrix(&seq, &f, c64(0.0, 1.0), 0).unwrap();
/// assert!((p[(1, 1)].re - 0.5).abs() < 1e-14);
/// ```
pub fn potapov_matrix(
    seq: &MomentSequence,
    f: &dyn MatrixFunction,
    z: C64,
    k: isize,
) -> Result<CMatrix> {
    ensure_nonreal(z)?;
    check_dim(seq, f)?;
    let fz = f.eval(z)?;
    potapov_from_value(seq, &fz, z, k)
}

fn check_dim(seq: &MomentSequence, f: &dyn MatrixFunction) -> Result<()> {
    if seq.q() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "sequence has q = {} but the function has {}x{} values",
            seq.q(),
            f.dim(),
            f.dim()
        )));
    }
    Ok(())
}

/// Potapov matrix from the value `f(z)` directly.
pub fn potapov_from_value(seq: &MomentSequence, fz: &CMatrix, z: C64, k: isize) -> Result<CMatrix> {
    ensure_nonreal(z)?;
    let a = c64(seq.alpha(), 0.0);
    if k == -1 {
        return Ok(imaginary_quotient(&fz.map(|x| x * (z - a)), z));
    }
    if k < -1 {
        return Err(Error::DimensionMismatch(format!("Potapov index {k}")));
    }
    let k = k as usize;
    let parts = parts(seq, fz, z, k)?;
    let q = seq.q();
    let top_right = resolvent_at(q, parts.n, z) * &parts.column;
    let corner = imaginary_quotient(&parts.weighted, z);
    Ok(block(&[
        &[&parts.hankel, &top_right],
        &[&top_right.adjoint(), &corner],
    ]))
}

fn split(p: &CMatrix, q: usize) -> (CMatrix, CMatrix, CMatrix) {
    let top = p.nrows() - q;
    (
        matcore::sub_block(p, 0, 0, top, top),
        matcore::sub_block(p, 0, top, top, q),
        matcore::sub_block(p, top, top, q, q),
    )
}

/// Schur complement `Sigma_k^[f](z) = D - B* H⁺ B` of the Potapov matrix,
/// with the Moore-Penrose inverse of the Hankel block. For `k = -1` the
/// Potapov matrix itself is returned.
pub fn sigma_matrix(
    seq: &MomentSequence,
    f: &dyn MatrixFunction,
    z: C64,
    k: isize,
    tol: &ToleranceConfig,
) -> Result<CMatrix> {
    let p = potapov_matrix(seq, f, z, k)?;
    if k == -1 {
        return Ok(p);
    }
    let (h, b, d) = split(&p, seq.q());
    let hp = pseudo_inverse(&h, tol)?;
    Ok(d - b.adjoint() * hp * b)
}

/// Schur complement with a caller-supplied generalized inverse of the
/// Hankel block in place of the Moore-Penrose inverse.
pub fn sigma_matrix_with(
    seq: &MomentSequence,
    f: &dyn MatrixFunction,
    z: C64,
    k: isize,
    generalized_inverse: &CMatrix,
) -> Result<CMatrix> {
    let p = potapov_matrix(seq, f, z, k)?;
    if k == -1 {
        return Ok(p);
    }
    let (h, b, d) = split(&p, seq.q());
    if generalized_inverse.shape() != h.shape() {
        return Err(Error::DimensionMismatch(
            "generalized inverse has the wrong shape".into(),
        ));
    }
    Ok(d - b.adjoint() * generalized_inverse * b)
}

/// The pair `(F_k(z), Q_k^[f](z))` for `k >= 0`.
///
/// `F_{2n}(z) = H_n T* R_{T*}(z) + R_T(z) (v f - u_n) v* R_{T*}(z)` and
/// `F_{2n+1}` uses `H_{alpha,n}` with the odd column generator.
/// `Q_k = [[H, F], [F*, (F - F*)/(z - conj z)]]`.
pub fn fq_matrices(
    seq: &MomentSequence,
    f: &dyn MatrixFunction,
    z: C64,
    k: usize,
) -> Result<(CMatrix, CMatrix)> {
    ensure_nonreal(z)?;
    check_dim(seq, f)?;
    let fz = f.eval(z)?;
    let parts = parts(seq, &fz, z, k)?;
    let q = seq.q();
    let n = parts.n;
    let t = shift_matrix(q, n);
    let v = v_selector(q, n);
    let rs = resolvent_adj_at(q, n, z);
    let r = resolvent_at(q, n, z);
    let big_f = &parts.hankel * t.adjoint() * &rs + r * &parts.column * v.adjoint() * &rs;
    let corner = imaginary_quotient(&big_f, z);
    let big_q = block(&[
        &[&parts.hankel, &big_f],
        &[&big_f.adjoint(), &corner],
    ]);
    Ok((big_f, big_q))
}

/// Matrix polynomial `Psi_k` with `F_k(z) = Psi_k(z) + E(z) g(z) E*(conj z)`,
/// where `g = f` for even `k` and `g = (z - alpha) f` for odd `k`.
///
/// `Psi_{2n}(z) = R_T(z) (H T* - u v* - z T H T*) R_{T*}(z)`; the odd
/// version uses `H_{alpha,n}` and `-alpha u_n - y_{0,n}` in place of `H_n`
/// and `u_n`.
pub fn psi_polynomial(seq: &MomentSequence, k: usize) -> Result<MatrixPolynomial> {
    let q = seq.q();
    let n = k / 2;
    let t = shift_matrix(q, n);
    let ts = t.adjoint();
    let v = v_selector(q, n);
    let u = seq.u_vec(n)?;
    let (h, gen) = if k.is_multiple_of(2) {
        (seq.hankel(n)?, u)
    } else {
        let w = -(u.scale(seq.alpha())) - seq.y_stack(0, n as isize)?;
        (seq.hankel_shifted(n)?, w)
    };
    let middle = MatrixPolynomial::new(vec![
        &h * &ts - &gen * v.adjoint(),
        -(&t * &h * &ts),
    ]);
    Ok(resolvent_poly(q, n)
        .mul(&middle)
        .mul(&resolvent_adj_poly(q, n)))
}

/// Residual norms of the congruence and compression identities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceResiduals {
    /// `||Q_k - Delta P_k Delta*||`.
    pub q_from_p: f64,
    /// `||P_k - Gamma Q_k Gamma*||`.
    pub p_from_q: f64,
    /// `||F_k - Psi_k - E g E*||`.
    pub psi_split: f64,
    /// Residual of the two-block compression of `P_k`.
    pub compression: f64,
    /// `||P_k^[f mirrored](z) - X P_k^[f](conj z) X*||`.
    pub mirror: f64,
    /// Scale `1 + ||P_k|| + ||Q_k||` to compare the residuals against.
    pub scale: f64,
}

impl CongruenceResiduals {
    /// Largest of the residuals.
    pub fn max(&self) -> f64 {
        self.q_from_p
            .max(self.p_from_q)
            .max(self.psi_split)
            .max(self.compression)
            .max(self.mirror)
    }
}

/// Transformations `(Gamma_k(z), Delta_k(z))` relating `P_k` and `Q_k`.
pub fn congruence_transforms(q: usize, n: usize, z: C64) -> (CMatrix, CMatrix) {
    let p = (n + 1) * q;
    let t = shift_matrix(q, n);
    let v = v_selector(q, n);
    let rs_adj = resolvent_adj_at(q, n, z).adjoint();
    let delta = block(&[
        &[&identity(p), &zeros(p, q)],
        &[&(&rs_adj * &t), &(&rs_adj * &v)],
    ]);
    let gamma = block(&[
        &[&identity(p), &zeros(p, p)],
        &[&(-(v.adjoint() * &rs_adj * &t)), &v.adjoint()],
    ]);
    (gamma, delta)
}

/// Assembles every congruence identity independently and reports the
/// residuals at one non-real point.
pub fn congruence_check(
    seq: &MomentSequence,
    f: &dyn MatrixFunction,
    z: C64,
    k: usize,
) -> Result<CongruenceResiduals> {
    ensure_nonreal(z)?;
    let q = seq.q();
    let n = k / 2;
    let a = c64(seq.alpha(), 0.0);
    let ki = k as isize;
    let p = potapov_matrix(seq, f, z, ki)?;
    let (big_f, big_q) = fq_matrices(seq, f, z, k)?;
    let (gamma, delta) = congruence_transforms(q, n, z);
    let q_from_p = (&big_q - &delta * &p * delta.adjoint()).norm();
    let p_from_q = (&p - &gamma * &big_q * gamma.adjoint()).norm();

    let fz = f.eval(z)?;
    let g = if k.is_multiple_of(2) {
        fz.clone()
    } else {
        fz.map(|x| x * (z - a))
    };
    let psi = psi_polynomial(seq, k)?.eval(z);
    let e = monomial_stack(q, n, z);
    let e_bar = monomial_stack(q, n, z.conj());
    let psi_split = (&big_f - psi - &e * &g * e_bar.adjoint()).norm();

    let selector = hstack(&[&v_selector(q, n + 1), &frak_v_selector(q, n + 1)]);
    let compressed = selector.adjoint() * &p * &selector;
    let corner = imaginary_quotient(&g, z);
    let expected = if k.is_multiple_of(2) {
        block(&[&[&seq.s(0)?, &g], &[&g.adjoint(), &corner]])
    } else {
        let head = seq.s(1)? - seq.s(0)?.scale(seq.alpha());
        let right = &g + seq.s(0)?;
        block(&[&[&head, &right], &[&right.adjoint(), &corner]])
    };
    let compression = (compressed - expected).norm();

    let mirrored = Mirrored(f);
    let p_mirror = potapov_matrix(seq, &mirrored, z, ki)?;
    let p_conj = potapov_matrix(seq, f, z.conj(), ki)?;
    let x = mirror_transform(q, n, z);
    let mirror = (p_mirror - &x * p_conj * x.adjoint()).norm();

    Ok(CongruenceResiduals {
        q_from_p,
        p_from_q,
        psi_split,
        compression,
        mirror,
        scale: 1.0 + p.norm() + big_q.norm(),
    })
}

/// The matrix `X(z)` with `P_k^[f mirrored](z) = X(z) P_k^[f](conj z) X(z)*`.
///
/// `X = diag(R_T(z), I) [[I, (z - conj z) v], [0, I]] diag(R_T(conj z)^{-1}, I)`.
pub fn mirror_transform(q: usize, n: usize, z: C64) -> CMatrix {
    let p = (n + 1) * q;
    let v = v_selector(q, n);
    let t = shift_matrix(q, n);
    let r_inv_bar = identity(p) - t.map(|x| x * z.conj());
    let a = block_diag(&[&r_inv_bar, &identity(q)]);
    let b = block(&[
        &[&identity(p), &v.map(|x| x * (z - z.conj()))],
        &[&zeros(q, p), &identity(q)],
    ]);
    let c = block_diag(&[&resolvent_at(q, n, z), &identity(q)]);
    c * b * a
}

/// Smallest eigenvalues of the Potapov matrices at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotapovPoint {
    /// Grid point.
    pub z: C64,
    /// `lambda_min(P_{2n})`.
    pub lambda_even: f64,
    /// `lambda_min(P_{2n+1})`, absent when `s_{2n+1}` is not available.
    pub lambda_odd: Option<f64>,
    /// `lambda_min(P_{-1})`.
    pub lambda_minus_one: f64,
    /// Whether all three are above their thresholds.
    pub pass: bool,
}

/// Nonnegativity table of the Potapov matrices over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotapovReport {
    /// Order `n` of the even and odd matrices checked.
    pub n: usize,
    /// One row per grid point.
    pub points: Vec<PotapovPoint>,
    /// True when every point passes.
    pub pass: bool,
}

fn lambda_pass(p: &CMatrix, tol: &ToleranceConfig) -> (f64, bool) {
    let lam = matcore::lambda_min(p);
    (lam, lam >= -tol.tol_psd * (1.0 + p.norm()))
}

/// Evaluates `P_{2n}`, `P_{2n+1}` (when `s_{2n+1}` exists) and `P_{-1}` on a
/// grid of non-real points and records their smallest eigenvalues.
pub fn potapov_report(
    seq: &MomentSequence,
    n: usize,
    f: &dyn MatrixFunction,
    grid: &[C64],
    tol: &ToleranceConfig,
) -> Result<PotapovReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_dim(seq, f)?;
    let has_odd = seq.last_index() > 2 * n;
    let mut points = Vec::with_capacity(grid.len());
    for &z in grid {
        ensure_nonreal(z)?;
        let fz = f.eval(z)?;
        let (lambda_even, ok_even) =
            lambda_pass(&potapov_from_value(seq, &fz, z, 2 * n as isize)?, tol);
        let (lambda_odd, ok_odd) = if has_odd {
            let (l, ok) = lambda_pass(&potapov_from_value(seq, &fz, z, 2 * n as isize + 1)?, tol);
            (Some(l), ok)
        } else {
            (None, true)
        };
        let (lambda_minus_one, ok_m1) = lambda_pass(&potapov_from_value(seq, &fz, z, -1)?, tol);
        points.push(PotapovPoint {
            z,
            lambda_even,
            lambda_odd,
            lambda_minus_one,
            pass: ok_even && ok_odd && ok_m1,
        });
    }
    let pass = points.iter().all(|p| p.pass);
    Ok(PotapovReport { n, points, pass })
}
