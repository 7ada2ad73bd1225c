//! Degeneracy classification, parameter lifting, the linear fractional
//! description of the solution set and solution verification.
//!
//! For a sequence `s_0, ..., s_{2n+1}` in the Stieltjes extendable class,
//! the solutions of the odd-order moment problem are the measures whose
//! transforms are
//! `S = (Theta_11 phi + Theta_12 psi)(Theta_21 phi + Theta_22 psi)^{-1}`
//! for suitable Stieltjes pairs `(phi, psi)`. The integers `m` and `l`
//! measure how far the pair is pinned down by the data; when `m + l = q`
//! the solution is unique.

use crate::error::{Error, Result};
use crate::matcore::{
    self, c64, hermitian_part, hstack, identity, is_psd, lambda_min, null_projector,
    range_basis_abs, singular_values, zeros, CMatrix, Subspace, ToleranceConfig, C64,
};
use crate::momentseq::{class_membership, MomentSequence};
use crate::potapov::{potapov_from_value, potapov_report, MatrixFunction, PotapovReport};
use crate::resolvent::{build_resolvent, resolvent_at, v_selector, ResolventMatrix};
use crate::stieltjes::{
    moments_of, pair_eval, pair_in_restricted_class, potapov_decomposition, transform,
    AtomicMeasure, StieltjesPair,
};

/// Imaginary part used by [`recover_s0`].
pub const RECOVERY_HEIGHT: f64 = 1e6;

/// Relative tolerance for the recovery of `s_0` from a solution.
pub const RECOVERY_TOL: f64 = 1e-4;

/// Degeneracy case of an odd-order problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyCase {
    /// `m = l = 0`: every Stieltjes pair is admissible.
    NonDegenerate,
    /// `m + l > 0` and `r >= 1`: pairs of size `r` are lifted.
    Degenerate,
    /// `r = 0`: the solution is unique.
    CompletelyDegenerate,
}

/// Result of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Order `n` of the classified problem.
    pub n: usize,
    /// Block size.
    pub q: usize,
    /// `rank((I - H⁺H) R_T(alpha) v)`.
    pub m: usize,
    /// `rank((I - H_a⁺H_a) H v)`.
    pub l: usize,
    /// `q - m - l`.
    pub r: usize,
    /// Degeneracy case.
    pub case: DegeneracyCase,
    /// Subspace `U` of dimension `m`.
    pub u: Subspace,
    /// Subspace `V` of dimension `l`.
    pub v: Subspace,
    /// Unitary `[complement | basis of U | basis of V]`.
    pub w: CMatrix,
}

impl ClassificationReport {
    fn assemble(n: usize, q: usize, u: Subspace, v: Subspace) -> Result<Self> {
        let m = u.dim();
        let l = v.dim();
        if m + l > q {
            return Err(Error::Singular(format!(
                "numerical ranks m = {m} and l = {l} exceed q = {q}"
            )));
        }
        let r = q - m - l;
        let both = hstack(&[u.basis(), v.basis()]);
        let w = if r == 0 {
            both
        } else {
            let complement = Subspace::span_abs(&both, 0.5).orthogonal_complement();
            hstack(&[complement.basis(), &both])
        };
        let case = if m == 0 && l == 0 {
            DegeneracyCase::NonDegenerate
        } else if r == 0 {
            DegeneracyCase::CompletelyDegenerate
        } else {
            DegeneracyCase::Degenerate
        };
        Ok(Self {
            n,
            q,
            m,
            l,
            r,
            case,
            u,
            v,
            w,
        })
    }

    /// Same report with the bases of `U` and `V` rotated by the unitary
    /// matrices `ru` (`m x m`) and `rv` (`l x l`), and `W` rebuilt.
    pub fn with_bases(&self, ru: &CMatrix, rv: &CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let u = self.u.rotated(ru, tol)?;
        let v = self.v.rotated(rv, tol)?;
        Self::assemble(self.n, self.q, u, v)
    }
}

/// Computes `m`, `l`, `r`, the subspaces `U`, `V` and the unitary `W`.
///
/// `U` is the range of `((I - H⁺H) R_T(alpha) v)*` and `V` the range of
/// `v* H (I - H_a⁺H_a)`, both in `C^q`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::ToleranceConfig;
/// use stieltjes_core::momentseq::MomentSequence;
/// use stieltjes_core::solver::{classify, DegeneracyCase};
/// let seq = MomentSequence::scalar(0.0, &[1.0, 0.0]).unwrap();
/// let c = classify(&seq, 0, &ToleranceConfig::default()).unwrap();
/// assert_eq!((c.m, c.l, c.r), (0, 1, 0));
/// assert_eq!(c.case, DegeneracyCase::CompletelyDegenerate);
/// ```
pub fn classify(
    seq: &MomentSequence,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<ClassificationReport> {
    tol.validate()?;
    let seq = seq.prefix(2 * n + 1)?;
    if !class_membership(&seq, tol)?.in_kgeq_e {
        return Err(Error::NotInClass(
            "classification needs a Stieltjes extendable sequence".into(),
        ));
    }
    let q = seq.q();
    let h = seq.hankel(n)?;
    let hs = seq.hankel_shifted(n)?;
    let v = v_selector(q, n);
    let rv = resolvent_at(q, n, c64(seq.alpha(), 0.0)) * &v;
    let hv = &h * &v;
    let x_m = null_projector(&h, tol) * &rv;
    let x_l = hv.adjoint() * null_projector(&hs, tol);
    let u = Subspace::from_orthonormal(
        range_basis_abs(&x_m.adjoint(), cutoff(&x_m, rv.norm(), tol)),
        tol,
    )?;
    let w = Subspace::from_orthonormal(range_basis_abs(&x_l, cutoff(&x_l, hv.norm(), tol)), tol)?;
    ClassificationReport::assemble(n, q, u, w)
}

fn cutoff(a: &CMatrix, scale: f64, tol: &ToleranceConfig) -> f64 {
    let smax = singular_values(a).first().copied().unwrap_or(0.0);
    tol.tol_rank * smax.max(scale)
}

/// Turns a parameter pair into one admissible for the classified problem.
///
/// Non-degenerate problems take `inner` unchanged (size `q`). Degenerate
/// problems take an `r x r` pair and embed it through `W`. Completely
/// degenerate problems ignore `inner` and return the constant pair
/// `(W diag(0_m, I_l), W diag(I_m, 0_l))`.
pub fn lift_pair(report: &ClassificationReport, inner: StieltjesPair) -> Result<StieltjesPair> {
    match report.case {
        DegeneracyCase::NonDegenerate => {
            if inner.dim() != report.q {
                return Err(Error::DimensionMismatch(format!(
                    "the pair must have size q = {}",
                    report.q
                )));
            }
            Ok(inner)
        }
        DegeneracyCase::Degenerate => {
            if inner.dim() != report.r {
                return Err(Error::DimensionMismatch(format!(
                    "the pair must have size r = {}",
                    report.r
                )));
            }
            Ok(StieltjesPair::Lifted {
                w: report.w.clone(),
                inner: Box::new(inner),
                m: report.m,
                l: report.l,
            })
        }
        DegeneracyCase::CompletelyDegenerate => Ok(completely_degenerate_pair(report)),
    }
}

fn completely_degenerate_pair(report: &ClassificationReport) -> StieltjesPair {
    let (m, l) = (report.m, report.l);
    let phi = &report.w * matcore::block_diag(&[&zeros(m, m), &identity(l)]);
    let psi = &report.w * matcore::block_diag(&[&identity(m), &zeros(l, l)]);
    StieltjesPair::Constant { phi, psi }
}

/// The function `(Theta_11 phi + Theta_12 psi)(Theta_21 phi + Theta_22 psi)^{-1}`.
#[derive(Debug, Clone)]
pub struct SolutionFunction {
    resolvent: ResolventMatrix,
    pair: StieltjesPair,
}

impl SolutionFunction {
    /// Resolvent matrix of the description.
    pub fn resolvent(&self) -> &ResolventMatrix {
        &self.resolvent
    }

    /// Parameter pair (already lifted).
    pub fn pair(&self) -> &StieltjesPair {
        &self.pair
    }

    /// Value at `z` off the slit `[alpha, inf)`.
    ///
    /// Fails with [`Error::SingularAt`] when the denominator is numerically
    /// singular at `z`.
    pub fn value(&self, z: C64) -> Result<CMatrix> {
        if z.im.abs() < crate::stieltjes::SLIT_GUARD && z.re >= self.resolvent.alpha() {
            return Err(Error::OnSlit(z));
        }
        let q = self.resolvent.q();
        let (phi, psi) = pair_eval(&self.pair, z)?;
        let theta = self.resolvent.eval_theta(z, false);
        let top = theta.view((0, 0), (q, 2 * q)) * matcore::vstack(&[&phi, &psi]);
        let bottom = theta.view((q, 0), (q, 2 * q)) * matcore::vstack(&[&phi, &psi]);
        let sv = singular_values(&bottom);
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if smax == 0.0 || smin <= 1e-14 * smax {
            return Err(Error::SingularAt(z));
        }
        let inv = matcore::inverse(&bottom).map_err(|_| Error::SingularAt(z))?;
        Ok(top * inv)
    }
}

impl MatrixFunction for SolutionFunction {
    fn dim(&self) -> usize {
        self.resolvent.q()
    }

    fn eval(&self, z: C64) -> Result<CMatrix> {
        self.value(z)
    }
}

/// Linear fractional transformation of an admissible pair by `Theta`.
///
/// The pair must lie in the restricted class of the resolvent's sequence,
/// which holds for every output of [`lift_pair`].
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{c64, real_matrix, ToleranceConfig};
/// use stieltjes_core::momentseq::MomentSequence;
/// use stieltjes_core::resolvent::build_resolvent;
/// use stieltjes_core::solver::lft_solution;
/// use stieltjes_core::stieltjes::StieltjesPair;
/// let tol = ToleranceConfig::default();
/// let seq = MomentSequence::scalar(0.0, &[1.0, 1.0]).unwrap();
/// let r = build_resolvent(&seq, 0, &tol).unwrap();
/// let p = StieltjesPair::constant(real_matrix(&[&[0.0]]), real_matrix(&[&[1.0]]), &tol).unwrap();
/// let s = lft_solution(&r, p).unwrap();
/// let z = c64(0.0, 1.0);
/// assert!((s.value(z).unwrap()[(0, 0)] - 1.0 / (1.0 - z)).norm() < 1e-14);
/// ```
pub fn lft_solution(r: &ResolventMatrix, p: StieltjesPair) -> Result<SolutionFunction> {
    if p.dim() != r.q() {
        return Err(Error::DimensionMismatch(format!(
            "the pair must have size q = {}",
            r.q()
        )));
    }
    if !pair_in_restricted_class(&p, r.sequence(), r.n(), r.tolerances())? {
        return Err(Error::InvalidPair(
            "the pair is not admissible for this sequence; lift it first".into(),
        ));
    }
    Ok(SolutionFunction {
        resolvent: r.clone(),
        pair: p,
    })
}

/// The unique solution of a completely degenerate problem.
///
/// With orthonormal bases `U` of the first and `V` of the second
/// degeneracy subspace, the pair is `([0, V], [U, 0])`.
pub fn unique_solution(
    seq: &MomentSequence,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<SolutionFunction> {
    let report = classify(seq, n, tol)?;
    if report.case != DegeneracyCase::CompletelyDegenerate {
        return Err(Error::WrongCase(format!(
            "unique_solution needs r = 0, found r = {}",
            report.r
        )));
    }
    let q = report.q;
    let phi = hstack(&[&zeros(q, report.m), report.v.basis()]);
    let psi = hstack(&[report.u.basis(), &zeros(q, report.l)]);
    let resolvent = build_resolvent(seq, n, tol)?;
    Ok(SolutionFunction {
        resolvent,
        pair: StieltjesPair::Constant { phi, psi },
    })
}

/// Estimate `-i y S(i y)` of the total mass at `y = 1e6`, Hermitized.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{c64, scalar};
/// use stieltjes_core::potapov::FunctionSamples;
/// use stieltjes_core::solver::recover_s0;
/// let f = FunctionSamples::new(1, |z| scalar(-1.0 / z));
/// assert!((recover_s0(&f).unwrap()[(0, 0)].re - 1.0).abs() < 1e-12);
/// ```
pub fn recover_s0(s: &dyn MatrixFunction) -> Result<CMatrix> {
    let z = c64(0.0, RECOVERY_HEIGHT);
    let value = s.eval(z)?;
    Ok(hermitian_part(&value.map(|x| x * c64(0.0, -RECOVERY_HEIGHT))))
}

/// A candidate solution passed to [`verify_solution`].
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    /// A finitely atomic measure.
    Measure(&'a AtomicMeasure),
    /// A transform produced by the linear fractional description.
    Function(&'a SolutionFunction),
}

/// Outcome of [`verify_solution`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Overall verdict.
    pub valid: bool,
    /// Largest `||s_j - s_j^mu|| / (1 + ||s_j||)` over `j <= 2n` (measures).
    pub moment_residual: Option<f64>,
    /// `lambda_min(s_{2n+1} - s_{2n+1}^mu)` (measures).
    pub defect_lambda_min: Option<f64>,
    /// Largest relative residual of the exact Potapov decomposition
    /// (measures).
    pub decomposition_residual: Option<f64>,
    /// Potapov nonnegativity on the grid.
    pub potapov: PotapovReport,
    /// `-i y S(i y)` at `y = 1e6` (solution functions).
    pub s0_recovered: Option<CMatrix>,
    /// Relative error of the recovered `s_0` (solution functions).
    pub s0_relative_error: Option<f64>,
}

/// Checks a candidate against the odd-order problem for `s_0, ..., s_{2n+1}`.
///
/// A measure must reproduce `s_0, ..., s_{2n}`, have a nonnegative defect
/// at `2n+1`, satisfy the exact decomposition of its Potapov matrices and
/// pass the Potapov report. A solution function must pass the Potapov
/// report and return `s_0` from its asymptotics within [`RECOVERY_TOL`].
pub fn verify_solution(
    seq: &MomentSequence,
    n: usize,
    candidate: Candidate<'_>,
    grid: &[C64],
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    tol.validate()?;
    let seq = seq.prefix(2 * n + 1)?;
    match candidate {
        Candidate::Measure(mu) => verify_measure(&seq, n, mu, grid, tol),
        Candidate::Function(f) => {
            if f.dim() != seq.q() {
                return Err(Error::DimensionMismatch("solution and sequence differ in q".into()));
            }
            let potapov = potapov_report(&seq, n, f, grid, tol)?;
            let s0 = seq.s(0)?;
            let recovered = recover_s0(f)?;
            let err = (&recovered - &s0).norm() / s0.norm().max(f64::MIN_POSITIVE);
            let s0_ok = (&recovered - &s0).norm() <= RECOVERY_TOL * s0.norm() + tol.tol_identity;
            Ok(VerificationReport {
                valid: potapov.pass && s0_ok,
                moment_residual: None,
                defect_lambda_min: None,
                decomposition_residual: None,
                potapov,
                s0_recovered: Some(recovered),
                s0_relative_error: Some(err),
            })
        }
    }
}

fn verify_measure(
    seq: &MomentSequence,
    n: usize,
    mu: &AtomicMeasure,
    grid: &[C64],
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if mu.q() != seq.q() || mu.alpha() != seq.alpha() {
        return Err(Error::DimensionMismatch(
            "measure and sequence differ in q or alpha".into(),
        ));
    }
    let own = moments_of(mu, 2 * n + 1);
    let mut moment_residual: f64 = 0.0;
    for j in 0..=2 * n {
        let sj = &seq.moments()[j];
        let diff = (sj - &own.moments()[j]).norm() / (1.0 + sj.norm());
        moment_residual = moment_residual.max(diff);
    }
    let moments_ok = moment_residual <= tol.tol_identity;
    let defect = &seq.moments()[2 * n + 1] - &own.moments()[2 * n + 1];
    let defect_lambda = lambda_min(&hermitian_part(&defect));
    let defect_ok = is_psd(&defect, tol)?;

    let mut decomposition_residual: f64 = 0.0;
    for &z in grid {
        let sz = transform(mu, z)?;
        for k in [2 * n, 2 * n + 1] {
            let direct = potapov_from_value(seq, &sz, z, k as isize)?;
            let split = potapov_decomposition(seq, mu, z, k)?;
            let res = (&direct - split).norm() / (1.0 + direct.norm());
            decomposition_residual = decomposition_residual.max(res);
        }
    }
    let decomposition_ok = !moments_ok || decomposition_residual <= tol.tol_identity;
    let potapov = potapov_report(seq, n, mu, grid, tol)?;
    Ok(VerificationReport {
        valid: moments_ok && defect_ok && decomposition_ok && potapov.pass,
        moment_residual: Some(moment_residual),
        defect_lambda_min: Some(defect_lambda),
        decomposition_residual: Some(decomposition_residual),
        potapov,
        s0_recovered: None,
        s0_relative_error: None,
    })
}
