//! Shift and resolvent polynomials and the resolvent matrix `Theta`.
//!
//! `T_{q,n}` is the nilpotent block shift with identity blocks on the first
//! subdiagonal, `R_T(z) = (I - zT)^{-1} = sum_j z^j T^j`, and `J` denotes
//! the signature matrix `[[0, -iI], [iI, 0]]`. [`ResolventMatrix`] bundles
//! the `2q x 2q` matrix polynomials `Theta` and `Theta~` built from a
//! Stieltjes extendable sequence, their constant right factors `B` and `B~`,
//! and the Hankel data used to assemble them.

use crate::error::{Error, Result};
use crate::matcore::{
    self, block, block_diag, c64, dubovoj_subspace, hstack, identity, inverse, null_projector,
    one_two_inverse, zeros, CMatrix, Subspace, ToleranceConfig, C64,
};
use crate::momentseq::{class_membership, schur_ladder, MomentSequence};
use crate::poly::MatrixPolynomial;

/// Block shift `T_{q,n} = [delta_{j,k+1} I_q]`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::resolvent::shift_matrix;
/// let t = shift_matrix(1, 1);
/// assert_eq!(t[(1, 0)].re, 1.0);
/// assert_eq!(t[(0, 1)].re, 0.0);
/// ```
pub fn shift_matrix(q: usize, n: usize) -> CMatrix {
    let mut t = zeros((n + 1) * q, (n + 1) * q);
    for j in 1..=n {
        t.view_mut((j * q, (j - 1) * q), (q, q))
            .copy_from(&identity(q));
    }
    t
}

/// First block selector `v_{q,n} = col(I_q, 0, ..., 0)`.
pub fn v_selector(q: usize, n: usize) -> CMatrix {
    let mut v = zeros((n + 1) * q, q);
    v.view_mut((0, 0), (q, q)).copy_from(&identity(q));
    v
}

/// Last block selector `col(0, ..., 0, I_q)`.
pub fn frak_v_selector(q: usize, n: usize) -> CMatrix {
    let mut v = zeros((n + 1) * q, q);
    v.view_mut((n * q, 0), (q, q)).copy_from(&identity(q));
    v
}

/// Signature matrix `J = [[0, -iI_q], [iI_q, 0]]`.
pub fn signature_matrix(q: usize) -> CMatrix {
    let mut j = zeros(2 * q, 2 * q);
    for k in 0..q {
        j[(k, q + k)] = c64(0.0, -1.0);
        j[(q + k, k)] = c64(0.0, 1.0);
    }
    j
}

fn power_series(m: &CMatrix, n: usize) -> MatrixPolynomial {
    let dim = m.nrows();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut power = identity(dim);
    for _ in 0..=n {
        coeffs.push(power.clone());
        power = &power * m;
    }
    MatrixPolynomial::new(coeffs)
}

/// `R_T(z) = sum_{j=0}^n z^j T^j` as a polynomial of degree `n`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::c64;
/// use stieltjes_core::resolvent::resolvent_poly;
/// let r = resolvent_poly(1, 1).eval(c64(3.0, 0.0));
/// assert_eq!(r[(1, 0)].re, 3.0);
/// ```
pub fn resolvent_poly(q: usize, n: usize) -> MatrixPolynomial {
    power_series(&shift_matrix(q, n), n)
}

/// `R_{T*}(z) = sum_{j=0}^n z^j (T*)^j`.
pub fn resolvent_adj_poly(q: usize, n: usize) -> MatrixPolynomial {
    power_series(&shift_matrix(q, n).adjoint(), n)
}

/// Value of `R_T(z)`.
pub fn resolvent_at(q: usize, n: usize, z: C64) -> CMatrix {
    resolvent_poly(q, n).eval(z)
}

/// Value of `R_{T*}(z)`.
pub fn resolvent_adj_at(q: usize, n: usize, z: C64) -> CMatrix {
    resolvent_adj_poly(q, n).eval(z)
}

/// Monomial stack `E_{q,n}(z) = col(z^j I_q)`, equal to `R_T(z) v_{q,n}`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::c64;
/// use stieltjes_core::resolvent::monomial_stack;
/// let e = monomial_stack(1, 2, c64(2.0, 0.0));
/// assert_eq!(e[(2, 0)].re, 4.0);
/// ```
pub fn monomial_stack(q: usize, n: usize, z: C64) -> CMatrix {
    let mut e = zeros((n + 1) * q, q);
    let mut power = c64(1.0, 0.0);
    for j in 0..=n {
        e.view_mut((j * q, 0), (q, q))
            .copy_from(&identity(q).map(|x| x * power));
        power *= z;
    }
    e
}

/// Which of the J-form identities [`ResolventMatrix::j_defect`] assembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JDefectVariant {
    /// `J - Theta(z) J Theta*(w)`.
    Theta,
    /// `J - Theta~(z) J Theta~*(w)`.
    ThetaTilde,
    /// `J - Theta*(w) J Theta(z)`.
    ThetaAdjointFirst,
    /// `J - Theta~*(w) J Theta~(z)`.
    ThetaTildeAdjointFirst,
    /// `J - Theta^{-*}(z) J Theta^{-1}(w)`.
    Inverse,
    /// `J - Theta~^{-*}(z) J Theta~^{-1}(w)`.
    InverseTilde,
}

/// Residuals of the consistency checks run while building `Theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventSelfCheck {
    /// Largest coefficient residual of `Theta - U B` and `Theta~ - U~ B~`.
    pub factorization_residual: f64,
    /// Largest residual of `Theta~ = diag((z-a)I, I) Theta diag((z-a)^{-1}I, I)`
    /// over six sample points.
    pub scaling_residual: f64,
    /// Degree bound of the stored block polynomials.
    pub degree: usize,
}

/// The resolvent matrix polynomials `Theta`, `Theta~` of a sequence in the
/// Stieltjes extendable class, with the data they are built from.
#[derive(Debug, Clone)]
pub struct ResolventMatrix {
    seq: MomentSequence,
    n: usize,
    q: usize,
    alpha: f64,
    tol: ToleranceConfig,
    theta: MatrixPolynomial,
    theta_tilde: MatrixPolynomial,
    h: CMatrix,
    hs: CMatrix,
    h_minus: CMatrix,
    hs_minus: CMatrix,
    d: Subspace,
    ds: Subspace,
    b: CMatrix,
    b_tilde: CMatrix,
    self_check: ResolventSelfCheck,
}

/// Builds `Theta` and `Theta~` for the moments `s_0, ..., s_{2n+1}`.
///
/// The sequence prefix of length `2n+2` must be Stieltjes extendable. The
/// (1,2)-inverses use the canonical Dubovoj subspaces generated by the Schur
/// ladders of the sequence and of its shift.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{c64, ToleranceConfig};
/// use stieltjes_core::momentseq::MomentSequence;
/// use stieltjes_core::resolvent::build_resolvent;
/// let seq = MomentSequence::scalar(0.0, &[1.0, 1.0]).unwrap();
/// let r = build_resolvent(&seq, 0, &ToleranceConfig::default()).unwrap();
/// let theta = r.eval_theta(c64(2.0, 0.0), false);
/// assert!((theta[(1, 1)].re + 1.0).abs() < 1e-14);
/// ```
pub fn build_resolvent(
    seq: &MomentSequence,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<ResolventMatrix> {
    tol.validate()?;
    let seq = seq.prefix(2 * n + 1)?;
    let report = class_membership(&seq, tol)?;
    if !report.in_kgeq_e {
        return Err(Error::NotInClass(
            "the resolvent matrix needs a Stieltjes extendable sequence".into(),
        ));
    }
    let q = seq.q();
    let alpha = seq.alpha();
    let a = c64(alpha, 0.0);
    let ladder = schur_ladder(&seq, tol)?;
    let d = dubovoj_subspace(&ladder.l[..=n], tol)?;
    let ds = dubovoj_subspace(&ladder.ls[..=n], tol)?;
    let h = seq.hankel(n)?;
    let hs = seq.hankel_shifted(n)?;
    let h_minus = one_two_inverse(&h, &d, tol)?;
    let hs_minus = one_two_inverse(&hs, &ds, tol)?;

    let p = (n + 1) * q;
    let t = shift_matrix(q, n);
    let ts = t.adjoint();
    let id_p = identity(p);
    let v = v_selector(q, n);
    let lv = block_diag(&[&v, &v]);
    let r_alpha = resolvent_at(q, n, a);
    let rs = resolvent_adj_poly(q, n);
    let rs2 = block_diag_poly(&rs, &rs);
    let id_2q = MatrixPolynomial::constant(identity(2 * q));
    let ta = (&id_p - ts.map(|x| x * a)).clone();

    let omega = MatrixPolynomial::new(vec![
        block(&[
            &[&ts.map(|x| -x * a), &ta],
            &[&id_p.map(|x| x * a), &id_p.map(|x| x * a)],
        ]),
        block(&[&[&ts, &zeros(p, p)], &[&(-&id_p), &(-&id_p)]]),
    ])
    .mul(&rs2);
    let omega_tilde = MatrixPolynomial::new(vec![
        block(&[
            &[&ts.map(|x| -x * a), &ta.map(|x| -x * a)],
            &[&(-&id_p), &id_p.map(|x| x * a)],
        ]),
        block(&[&[&ts, &ta], &[&zeros(p, p), &(-&id_p)]]),
    ])
    .mul(&rs2);
    let left = lv.adjoint() * block_diag(&[&h, &id_p]);
    let right = block_diag(&[&h_minus, &hs_minus]) * block_diag(&[&r_alpha, &h]) * &lv;
    let theta = id_2q.add(&omega.left_mul(&left).right_mul(&right));
    let theta_tilde = id_2q.add(&omega_tilde.left_mul(&left).right_mul(&right));

    let hv = &h * &v;
    let b = block(&[
        &[&identity(q), &(v.adjoint() * &h * &hs_minus * &hv)],
        &[&zeros(q, q), &identity(q)],
    ]);
    let r_alpha_adj = resolvent_adj_at(q, n, a);
    let b_tilde = block(&[
        &[&identity(q), &zeros(q, q)],
        &[
            &(-(v.adjoint() * &r_alpha_adj * &h_minus * &r_alpha * &v)),
            &identity(q),
        ],
    ]);

    let mut out = ResolventMatrix {
        seq,
        n,
        q,
        alpha,
        tol: *tol,
        theta,
        theta_tilde,
        h,
        hs,
        h_minus,
        hs_minus,
        d,
        ds,
        b,
        b_tilde,
        self_check: ResolventSelfCheck {
            factorization_residual: 0.0,
            scaling_residual: 0.0,
            degree: 0,
        },
    };
    out.self_check = out.run_self_check()?;
    Ok(out)
}

fn block_diag_poly(a: &MatrixPolynomial, b: &MatrixPolynomial) -> MatrixPolynomial {
    let len = a.coeffs().len().max(b.coeffs().len());
    let coeffs = (0..len)
        .map(|k| {
            let ak = a.coeffs().get(k).cloned().unwrap_or_else(|| zeros(a.rows(), a.cols()));
            let bk = b.coeffs().get(k).cloned().unwrap_or_else(|| zeros(b.rows(), b.cols()));
            block_diag(&[&ak, &bk])
        })
        .collect();
    MatrixPolynomial::new(coeffs)
}

impl ResolventMatrix {
    /// Order `n` of the resolvent (the data are `s_0, ..., s_{2n+1}`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Block size.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Left end of the interval.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The sequence `s_0, ..., s_{2n+1}` the matrix was built from.
    pub fn sequence(&self) -> &MomentSequence {
        &self.seq
    }

    /// Tolerances used during the build.
    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// `Theta` (or `Theta~` when `tilde`) as a `2q x 2q` matrix polynomial.
    pub fn theta_poly(&self, tilde: bool) -> &MatrixPolynomial {
        if tilde {
            &self.theta_tilde
        } else {
            &self.theta
        }
    }

    /// Block `(i, j)` (zero-based) of `Theta` or `Theta~`.
    pub fn theta_block(&self, i: usize, j: usize, tilde: bool) -> MatrixPolynomial {
        let q = self.q;
        self.theta_poly(tilde).sub_block(i * q, j * q, q, q)
    }

    /// `H_n`.
    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    /// `H_{alpha,n}`.
    pub fn h_shifted(&self) -> &CMatrix {
        &self.hs
    }

    /// Hermitian (1,2)-inverse of `H_n` with range `D_n`.
    pub fn h_minus(&self) -> &CMatrix {
        &self.h_minus
    }

    /// Hermitian (1,2)-inverse of `H_{alpha,n}` with range `D_{alpha,n}`.
    pub fn h_shifted_minus(&self) -> &CMatrix {
        &self.hs_minus
    }

    /// Canonical Dubovoj subspace `D_n`.
    pub fn dubovoj(&self) -> &Subspace {
        &self.d
    }

    /// Canonical Dubovoj subspace of the shifted sequence.
    pub fn dubovoj_shifted(&self) -> &Subspace {
        &self.ds
    }

    /// Constant factor `B` with `Theta = U B`.
    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    /// Constant factor `B~` with `Theta~ = U~ B~`.
    pub fn b_tilde(&self) -> &CMatrix {
        &self.b_tilde
    }

    /// Residuals recorded by the build.
    pub fn self_check(&self) -> ResolventSelfCheck {
        self.self_check
    }

    fn shift(&self) -> CMatrix {
        shift_matrix(self.q, self.n)
    }

    fn v(&self) -> CMatrix {
        v_selector(self.q, self.n)
    }

    fn lv(&self) -> CMatrix {
        let v = self.v();
        block_diag(&[&v, &v])
    }

    fn a(&self) -> C64 {
        c64(self.alpha, 0.0)
    }

    fn r_alpha(&self) -> CMatrix {
        resolvent_at(self.q, self.n, self.a())
    }

    /// `[R_T(alpha)]^{-1} = I - alpha T`.
    fn r_alpha_inv(&self) -> CMatrix {
        identity((self.n + 1) * self.q) - self.shift().map(|x| x * self.a())
    }

    /// `Theta(z)` or `Theta~(z)` by Horner evaluation.
    pub fn eval_theta(&self, z: C64, tilde: bool) -> CMatrix {
        self.theta_poly(tilde).eval(z)
    }

    /// `Theta^{-1}(z) = J Theta*(conj z) J`.
    pub fn theta_inverse(&self, z: C64) -> CMatrix {
        let j = signature_matrix(self.q);
        &j * self.eval_theta(z.conj(), false).adjoint() * &j
    }

    /// `Theta~^{-1}(z) = J Theta~*(conj z) J`.
    pub fn theta_tilde_inverse(&self, z: C64) -> CMatrix {
        let j = signature_matrix(self.q);
        &j * self.eval_theta(z.conj(), true).adjoint() * &j
    }

    /// The polynomial `U` (or `U~`) with `Theta = U B` (or `Theta~ = U~ B~`).
    pub fn u_poly(&self, tilde: bool) -> MatrixPolynomial {
        let p = (self.n + 1) * self.q;
        let id_p = identity(p);
        let lv = self.lv();
        let t = self.shift();
        let (first, hm) = if tilde {
            (&self.r_alpha_inv() * &self.h, &self.hs_minus)
        } else {
            (&t * &self.h, &self.h_minus)
        };
        let left_block = hstack(&[&first, &(-&id_p)]);
        let right_block = hstack(&[&id_p, &first]);
        let left = lv.adjoint() * left_block.adjoint();
        let right = hm * self.r_alpha() * right_block * &lv;
        let core = resolvent_adj_poly(self.q, self.n)
            .left_mul(&left)
            .right_mul(&right)
            .mul_linear(self.a());
        MatrixPolynomial::constant(identity(2 * self.q)).add(&core)
    }

    fn run_self_check(&self) -> Result<ResolventSelfCheck> {
        let ub = self.u_poly(false).right_mul(&self.b);
        let ub_tilde = self.u_poly(true).right_mul(&self.b_tilde);
        let factorization_residual = self
            .theta
            .coeff_distance(&ub)
            .max(self.theta_tilde.coeff_distance(&ub_tilde));
        let mut scaling_residual: f64 = 0.0;
        for offset in [
            c64(1.0, 0.0),
            c64(-1.0, 0.0),
            c64(0.0, 1.0),
            c64(2.0, 1.0),
            c64(0.0, -3.0),
            c64(0.5, -2.0),
        ] {
            let z = self.a() + offset;
            let lhs = self.eval_theta(z, true);
            let rhs = self.scaled_theta(z)?;
            scaling_residual = scaling_residual.max((lhs - rhs).norm());
        }
        let degree = self
            .theta
            .degree_bound()
            .max(self.theta_tilde.degree_bound());
        Ok(ResolventSelfCheck {
            factorization_residual,
            scaling_residual,
            degree,
        })
    }

    /// `diag((z-alpha) I, I) Theta(z) diag((z-alpha)^{-1} I, I)` for `z != alpha`.
    pub fn scaled_theta(&self, z: C64) -> Result<CMatrix> {
        let q = self.q;
        let shift = z - self.a();
        if shift.norm() == 0.0 {
            return Err(Error::SingularAt(z));
        }
        let id = identity(q);
        let left = block_diag(&[&id.map(|x| x * shift), &id]);
        let right = block_diag(&[&id.map(|x| x / shift), &id]);
        Ok(left * self.eval_theta(z, false) * right)
    }

    /// Both sides of one of the J-form identities at `(z, w)`.
    ///
    /// The left side is built from `Theta` values, the right side from the
    /// Hankel data; the caller compares them.
    pub fn j_defect(&self, z: C64, w: C64, variant: JDefectVariant) -> Result<(CMatrix, CMatrix)> {
        let q = self.q;
        let n = self.n;
        let j = signature_matrix(q);
        let p = (n + 1) * q;
        let id_p = identity(p);
        let lv = self.lv();
        let t = self.shift();
        let i = c64(0.0, 1.0);
        let th = &t * &self.h;
        let rh = self.r_alpha_inv() * &self.h;
        let rs = |x: C64| resolvent_adj_at(q, n, x);
        let r = |x: C64| resolvent_at(q, n, x);
        match variant {
            JDefectVariant::Theta | JDefectVariant::ThetaTilde => {
                let tilde = variant == JDefectVariant::ThetaTilde;
                let (first, hm) = if tilde { (&rh, &self.hs_minus) } else { (&th, &self.h_minus) };
                let a = hstack(&[first, &(-&id_p)]) * &lv;
                let tz = self.eval_theta(z, tilde);
                let tw = self.eval_theta(w, tilde);
                let lhs = &j - &tz * &j * tw.adjoint();
                let rhs = (a.adjoint() * rs(z) * hm * rs(w).adjoint() * &a)
                    .map(|x| x * (-i * (z - w.conj())));
                Ok((lhs, rhs))
            }
            JDefectVariant::ThetaAdjointFirst | JDefectVariant::ThetaTildeAdjointFirst => {
                let tilde = variant == JDefectVariant::ThetaTildeAdjointFirst;
                let (first, hm, mid, bb) = if tilde {
                    (&rh, &self.hs_minus, &self.hs, &self.b_tilde)
                } else {
                    (&th, &self.h_minus, &self.h, &self.b)
                };
                let c = hstack(&[&id_p, first]) * &lv * bb;
                let a = self.a();
                let rs_alpha_inv = inverse(&rs(a))?;
                let middle = self.r_alpha_inv() * mid * rs_alpha_inv;
                let tz = self.eval_theta(z, tilde);
                let tw = self.eval_theta(w, tilde);
                let lhs = &j - tw.adjoint() * &j * &tz;
                let rhs = (c.adjoint()
                    * self.r_alpha().adjoint()
                    * hm
                    * rs(w).adjoint()
                    * middle
                    * rs(z)
                    * hm
                    * self.r_alpha()
                    * &c)
                    .map(|x| x * (i * (w.conj() - z)));
                Ok((lhs, rhs))
            }
            JDefectVariant::Inverse | JDefectVariant::InverseTilde => {
                let tilde = variant == JDefectVariant::InverseTilde;
                let (first, hm) = if tilde { (&rh, &self.hs_minus) } else { (&th, &self.h_minus) };
                let c = hstack(&[&id_p, first]) * &lv;
                let inv_z = inverse(&self.eval_theta(z, tilde)).map_err(|_| Error::SingularAt(z))?;
                let inv_w = inverse(&self.eval_theta(w, tilde)).map_err(|_| Error::SingularAt(w))?;
                let lhs = &j - inv_z.adjoint() * &j * inv_w;
                let rhs = (c.adjoint() * rs(z.conj()) * hm * r(w) * &c)
                    .map(|x| x * (-i * (z.conj() - w)));
                Ok((lhs, rhs))
            }
        }
    }

    /// The kernel polynomials `(P, Q, S)`.
    ///
    /// `P(z) = I + (z-a)(I - H⁺H) T R_T(z) (I - H H^-)`, `Q` is the same
    /// with the shifted Hankel matrix, and
    /// `S(z) = I - (z-a)(I - H_a⁺H_a) R_T(a) T (I - H_a H_a^-)`.
    pub fn kernel_polys(&self) -> (MatrixPolynomial, MatrixPolynomial, MatrixPolynomial) {
        let p = (self.n + 1) * self.q;
        let id_p = identity(p);
        let t = self.shift();
        let a = self.a();
        let rt = resolvent_poly(self.q, self.n);
        let n_h = null_projector(&self.h, &self.tol);
        let n_hs = null_projector(&self.hs, &self.tol);
        let c_h = &id_p - &self.h * &self.h_minus;
        let c_hs = &id_p - &self.hs * &self.hs_minus;
        let one = MatrixPolynomial::constant(id_p.clone());
        let poly_p = one.add(&rt.left_mul(&(&n_h * &t)).right_mul(&c_h).mul_linear(a));
        let poly_q = one.add(&rt.left_mul(&(&n_hs * &t)).right_mul(&c_hs).mul_linear(a));
        let s_const = n_hs * self.r_alpha() * &t * c_hs;
        let poly_s = one.sub(&MatrixPolynomial::constant(s_const).mul_linear(a));
        (poly_p, poly_q, poly_s)
    }

    /// Value of `[I, T H]` (or `[I, R_T(a)^{-1} H]` when `tilde`) times
    /// `I_2 ⊗ v`, the `(n+1)q x 2q` matrix used by the projector identities.
    pub fn column_selector(&self, tilde: bool) -> CMatrix {
        let id_p = identity((self.n + 1) * self.q);
        let first = if tilde {
            self.r_alpha_inv() * &self.h
        } else {
            self.shift() * &self.h
        };
        hstack(&[&id_p, &first]) * self.lv()
    }
}

/// Standard evaluation grid around `alpha`: `x + iy` for
/// `x in {a-2, a, a+1, a+3}`, `y in {0.1, 1, 10}`, and the conjugates.
pub fn standard_grid(alpha: f64) -> Vec<C64> {
    let mut grid = Vec::with_capacity(24);
    for dx in [-2.0, 0.0, 1.0, 3.0] {
        for y in [0.1, 1.0, 10.0] {
            grid.push(c64(alpha + dx, y));
            grid.push(c64(alpha + dx, -y));
        }
    }
    grid
}

/// Eigenvalue-based J-contractivity margin: the smallest eigenvalue of
/// `(J - M J M*) / (2 Im z)` for a `2q x 2q` value `M` at non-real `z`.
pub fn j_form_lambda_min(m: &CMatrix, z: C64) -> f64 {
    let q = m.nrows() / 2;
    let j = signature_matrix(q);
    let form = (&j - m * &j * m.adjoint()).map(|x| x / (2.0 * z.im));
    matcore::lambda_min(&form)
}
