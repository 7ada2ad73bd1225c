//! Finitely atomic measures, Stieltjes transforms and Stieltjes parameter
//! pairs.
//!
//! A measure on `[alpha, inf)` is a finite list of atoms `(t_k, M_k)` with
//! `t_k >= alpha` and `M_k` positive semidefinite. Its Stieltjes transform
//! is `S(z) = sum_k M_k / (t_k - z)`, holomorphic off the slit
//! `[alpha, inf)`. A [`StieltjesPair`] `(phi, psi)` is the parameter that
//! the linear fractional transformation of the resolvent matrix turns into
//! a solution.

use crate::error::{Error, Result};
use crate::matcore::{
    self, c64, hermitize_checked, identity, is_psd, null_projector, rank, vstack, zeros, CMatrix,
    ToleranceConfig, C64,
};
use crate::momentseq::MomentSequence;
use crate::potapov::MatrixFunction;
use crate::resolvent::{frak_v_selector, monomial_stack, resolvent_at, signature_matrix, v_selector};

/// Minimal distance from the slit for evaluations.
pub const SLIT_GUARD: f64 = 1e-12;

/// A finitely atomic nonnegative Hermitian measure on `[alpha, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    alpha: f64,
    q: usize,
    atoms: Vec<(f64, CMatrix)>,
}

impl AtomicMeasure {
    /// Validates atoms, merges duplicate positions and sorts them.
    ///
    /// Every position must satisfy `t >= alpha` and every weight must be a
    /// positive semidefinite `q x q` matrix.
    ///
    /// # Examples
    ///
    /// ```
    /// use stieltjes_core::matcore::{real_matrix, ToleranceConfig};
    /// use stieltjes_core::stieltjes::AtomicMeasure;
    /// let one = real_matrix(&[&[1.0]]);
    /// let mu = AtomicMeasure::new(0.0, 1, vec![(2.0, one.clone()), (0.0, one)],
    ///     &ToleranceConfig::default()).unwrap();
    /// assert_eq!(mu.atoms()[0].0, 0.0);
    /// ```
    pub fn new(
        alpha: f64,
        q: usize,
        atoms: Vec<(f64, CMatrix)>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        if q == 0 {
            return Err(Error::InvalidMeasure("q must be positive".into()));
        }
        let mut clean: Vec<(f64, CMatrix)> = Vec::with_capacity(atoms.len());
        for (t, m) in atoms {
            if !t.is_finite() {
                return Err(Error::NonFinite);
            }
            if t < alpha {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {t} lies left of alpha = {alpha}"
                )));
            }
            if m.shape() != (q, q) {
                return Err(Error::InvalidMeasure(format!(
                    "weight at {t} is {}x{}, expected {q}x{q}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let m = hermitize_checked(&m, tol, "atom weight")?;
            if !is_psd(&m, tol)? {
                return Err(Error::InvalidMeasure(format!(
                    "weight at {t} is not positive semidefinite"
                )));
            }
            match clean.iter_mut().find(|(s, _)| *s == t) {
                Some((_, acc)) => *acc += m,
                None => clean.push((t, m)),
            }
        }
        clean.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            alpha,
            q,
            atoms: clean,
        })
    }

    /// Measure without atoms.
    pub fn empty(alpha: f64, q: usize) -> Self {
        Self {
            alpha,
            q,
            atoms: Vec::new(),
        }
    }

    /// Scalar measure from `(position, mass)` pairs.
    pub fn scalar(alpha: f64, atoms: &[(f64, f64)]) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|&(t, m)| (t, matcore::real_matrix(&[&[m]])))
            .collect();
        Self::new(alpha, 1, atoms, &ToleranceConfig::default())
    }

    /// Left end of the interval.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Block size.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Atoms sorted by position.
    pub fn atoms(&self) -> &[(f64, CMatrix)] {
        &self.atoms
    }

    /// Total mass `sigma([alpha, inf))`.
    pub fn total_mass(&self) -> CMatrix {
        self.atoms
            .iter()
            .fold(zeros(self.q, self.q), |acc, (_, m)| acc + m)
    }

    /// True when `z` lies on the slit or within [`SLIT_GUARD`] of an atom.
    pub fn on_slit(&self, z: C64) -> bool {
        (z.im.abs() < SLIT_GUARD && z.re >= self.alpha)
            || self.atoms.iter().any(|(t, _)| (z - t).norm() <= SLIT_GUARD)
    }
}

/// Power moments `s_j = sum_k t_k^j M_k` for `j = 0, ..., m`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::stieltjes::{moments_of, AtomicMeasure};
/// let mu = AtomicMeasure::scalar(0.0, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
/// let seq = moments_of(&mu, 2);
/// assert_eq!(seq.moments()[2][(0, 0)].re, 2.0);
/// ```
pub fn moments_of(mu: &AtomicMeasure, m: usize) -> MomentSequence {
    let q = mu.q;
    let moments: Vec<CMatrix> = (0..=m)
        .map(|j| {
            mu.atoms.iter().fold(zeros(q, q), |acc, (t, w)| {
                acc + w.scale(t.powi(j as i32))
            })
        })
        .collect();
    MomentSequence::new(mu.alpha, moments, &ToleranceConfig::default())
        .expect("moments of a valid measure are Hermitian")
}

/// Stieltjes transform `S(z) = sum_k M_k / (t_k - z)`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::c64;
/// use stieltjes_core::stieltjes::{transform, AtomicMeasure};
/// let mu = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
/// let s = transform(&mu, c64(0.0, 1.0)).unwrap();
/// assert!((s[(0, 0)] - c64(0.5, 0.5)).norm() < 1e-15);
/// ```
pub fn transform(mu: &AtomicMeasure, z: C64) -> Result<CMatrix> {
    if mu.on_slit(z) {
        return Err(Error::OnSlit(z));
    }
    Ok(mu.atoms.iter().fold(zeros(mu.q, mu.q), |acc, (t, m)| {
        let w = c64(1.0, 0.0) / (c64(*t, 0.0) - z);
        acc + m.map(|x| x * w)
    }))
}

impl MatrixFunction for AtomicMeasure {
    fn dim(&self) -> usize {
        self.q
    }

    fn eval(&self, z: C64) -> Result<CMatrix> {
        transform(self, z)
    }
}

/// The measure with weights `(t_k - alpha) M_k`.
///
/// Its moments are `s_{j+1} - alpha s_j` of the original ones.
pub fn sharp_measure(mu: &AtomicMeasure) -> AtomicMeasure {
    AtomicMeasure {
        alpha: mu.alpha,
        q: mu.q,
        atoms: mu
            .atoms
            .iter()
            .map(|(t, m)| (*t, m.scale(t - mu.alpha)))
            .collect(),
    }
}

/// Right side of the exact decomposition of `P_k^[S](z)` for the transform
/// `S` of `mu`, where `seq` agrees with the moments of `mu` up to index
/// `k - 1`.
///
/// For `k = 2n` this is
/// `sum_k c_k M_k c_k* + [w; 0] (s_{2n} - s_{2n}^mu) [w; 0]*` with
/// `c_k = [E(t_k); (t_k - conj z)^{-1} I]` and `w` the last block selector.
/// For `k = 2n+1` the weights are `(t_k - alpha) M_k` and the defect is
/// taken at index `2n+1`.
pub fn potapov_decomposition(
    seq: &MomentSequence,
    mu: &AtomicMeasure,
    z: C64,
    k: usize,
) -> Result<CMatrix> {
    if seq.q() != mu.q {
        return Err(Error::DimensionMismatch("sequence and measure differ in q".into()));
    }
    let q = mu.q;
    let n = k / 2;
    let p = (n + 2) * q;
    let mut out = zeros(p, p);
    for (t, m) in &mu.atoms {
        let weight = if k.is_multiple_of(2) {
            m.clone()
        } else {
            m.scale(t - mu.alpha)
        };
        let lower = identity(q).map(|x| x / (c64(*t, 0.0) - z.conj()));
        let c = vstack(&[&monomial_stack(q, n, c64(*t, 0.0)), &lower]);
        out += &c * weight * c.adjoint();
    }
    let own = moments_of(mu, k);
    let defect = seq.s(k as isize)? - own.s(k as isize)?;
    let sel = vstack(&[&frak_v_selector(q, n), &zeros(q, q)]);
    out += &sel * defect * sel.adjoint();
    Ok(out)
}

/// A Stieltjes function `f(z) = gamma + S_mu(z)` with `gamma >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesFunction {
    gamma: CMatrix,
    measure: AtomicMeasure,
}

impl StieltjesFunction {
    /// Validates `gamma >= 0` and the positivity of `f` left of `alpha`.
    pub fn new(gamma: CMatrix, measure: AtomicMeasure, tol: &ToleranceConfig) -> Result<Self> {
        let q = measure.q;
        if gamma.shape() != (q, q) {
            return Err(Error::DimensionMismatch(format!("gamma must be {q}x{q}")));
        }
        let gamma = hermitize_checked(&gamma, tol, "gamma")?;
        if !is_psd(&gamma, tol)? {
            return Err(Error::InvalidPair("gamma is not positive semidefinite".into()));
        }
        let f = Self { gamma, measure };
        for dx in [0.5, 2.0, 10.0] {
            let x = c64(f.measure.alpha - dx, 0.0);
            if !is_psd(&matcore::hermitian_part(&f.value(x)?), tol)? {
                return Err(Error::InvalidPair(format!(
                    "f is not positive semidefinite at {x}"
                )));
            }
        }
        Ok(f)
    }

    /// The transform of a measure, without constant term.
    pub fn from_measure(measure: AtomicMeasure) -> Self {
        let q = measure.q;
        Self {
            gamma: zeros(q, q),
            measure,
        }
    }

    /// Constant term.
    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    /// Representing measure.
    pub fn measure(&self) -> &AtomicMeasure {
        &self.measure
    }

    /// Value `gamma + S_mu(z)`.
    pub fn value(&self, z: C64) -> Result<CMatrix> {
        Ok(&self.gamma + transform(&self.measure, z)?)
    }
}

impl MatrixFunction for StieltjesFunction {
    fn dim(&self) -> usize {
        self.measure.q
    }

    fn eval(&self, z: C64) -> Result<CMatrix> {
        self.value(z)
    }
}

/// Parameter pair `(phi, psi)` of the linear fractional description.
#[derive(Debug, Clone, PartialEq)]
pub enum StieltjesPair {
    /// Constant pair `(Phi, Psi)`.
    Constant {
        /// First entry.
        phi: CMatrix,
        /// Second entry.
        psi: CMatrix,
    },
    /// The pair `(f, I)` for a Stieltjes function `f`.
    Function(StieltjesFunction),
    /// An `r x r` pair embedded into `q x q` through a unitary `W`:
    /// `(W diag(phi, 0_m, I_l), W diag(psi, I_m, 0_l))`.
    Lifted {
        /// Unitary `q x q` matrix.
        w: CMatrix,
        /// Pair of size `r = q - m - l`.
        inner: Box<StieltjesPair>,
        /// Number of directions fixed to `(0, I)`.
        m: usize,
        /// Number of directions fixed to `(I, 0)`.
        l: usize,
    },
    /// The pair `(phi g, psi g)` for a constant invertible `g`.
    Scaled {
        /// Pair to be multiplied.
        inner: Box<StieltjesPair>,
        /// Invertible right factor.
        g: CMatrix,
    },
}

impl StieltjesPair {
    /// Constant pair, checked for the full-rank condition.
    pub fn constant(phi: CMatrix, psi: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if phi.shape() != psi.shape() || !phi.is_square() {
            return Err(Error::InvalidPair("phi and psi must be square of equal size".into()));
        }
        if rank(&vstack(&[&phi, &psi]), tol) != phi.nrows() {
            return Err(Error::InvalidPair("col(phi, psi) must have full column rank".into()));
        }
        Ok(Self::Constant { phi, psi })
    }

    /// The pair `(f, I)`.
    pub fn function(f: StieltjesFunction) -> Self {
        Self::Function(f)
    }

    /// The pair `(phi g, psi g)`.
    pub fn scaled(self, g: CMatrix) -> Result<Self> {
        if g.shape() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch("scaling factor has the wrong size".into()));
        }
        matcore::inverse(&g)?;
        Ok(Self::Scaled {
            inner: Box::new(self),
            g,
        })
    }

    /// Size `q` of the pair entries.
    pub fn dim(&self) -> usize {
        match self {
            Self::Constant { phi, .. } => phi.nrows(),
            Self::Function(f) => f.measure.q,
            Self::Lifted { w, .. } => w.nrows(),
            Self::Scaled { inner, .. } => inner.dim(),
        }
    }

    /// Upper bound on the number of poles of the pair entries, used to size
    /// sampling-based identity tests.
    pub fn degree_hint(&self) -> usize {
        match self {
            Self::Constant { .. } => 0,
            Self::Function(f) => f.measure.atoms.len(),
            Self::Lifted { inner, .. } | Self::Scaled { inner, .. } => inner.degree_hint(),
        }
    }
}

/// Value `(phi(z), psi(z))` of a pair.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::{c64, real_matrix, ToleranceConfig};
/// use stieltjes_core::stieltjes::{pair_eval, StieltjesPair};
/// let p = StieltjesPair::constant(real_matrix(&[&[0.0]]), real_matrix(&[&[1.0]]),
///     &ToleranceConfig::default()).unwrap();
/// let (phi, psi) = pair_eval(&p, c64(0.0, 1.0)).unwrap();
/// assert_eq!((phi[(0, 0)].re, psi[(0, 0)].re), (0.0, 1.0));
/// ```
pub fn pair_eval(p: &StieltjesPair, z: C64) -> Result<(CMatrix, CMatrix)> {
    match p {
        StieltjesPair::Constant { phi, psi } => Ok((phi.clone(), psi.clone())),
        StieltjesPair::Function(f) => Ok((f.value(z)?, identity(f.measure.q))),
        StieltjesPair::Lifted { w, inner, m, l } => {
            let (phi_r, psi_r) = pair_eval(inner, z)?;
            let r = phi_r.nrows();
            let q = r + m + l;
            if w.shape() != (q, q) {
                return Err(Error::DimensionMismatch(format!(
                    "lifting matrix must be {q}x{q}"
                )));
            }
            let phi = matcore::block_diag(&[&phi_r, &zeros(*m, *m), &identity(*l)]);
            let psi = matcore::block_diag(&[&psi_r, &identity(*m), &zeros(*l, *l)]);
            Ok((w * phi, w * psi))
        }
        StieltjesPair::Scaled { inner, g } => {
            let (phi, psi) = pair_eval(inner, z)?;
            Ok((phi * g, psi * g))
        }
    }
}

fn j_form(phi: &CMatrix, psi: &CMatrix, z: C64) -> CMatrix {
    let q = phi.nrows();
    let stack = vstack(&[phi, psi]);
    let minus_j = -signature_matrix(q);
    (stack.adjoint() * minus_j * stack).map(|x| x / (2.0 * z.im))
}

/// Checks the defining conditions of a Stieltjes pair on a grid.
///
/// At every grid point off the slit `col(phi, psi)` must have rank `q`. At
/// non-real points both `[phi; psi]* (-J) [phi; psi] / (2 Im z)` and the
/// same form with `(z - alpha) phi` must be positive semidefinite. At real
/// points left of `alpha`, `Re(psi* phi)` must be positive semidefinite.
pub fn pair_is_valid(
    p: &StieltjesPair,
    grid: &[C64],
    alpha: f64,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let a = c64(alpha, 0.0);
    for &z in grid {
        let real = z.im.abs() < SLIT_GUARD;
        if real && z.re >= alpha {
            continue;
        }
        let (phi, psi) = match pair_eval(p, z) {
            Ok(v) => v,
            Err(Error::OnSlit(_)) => continue,
            Err(e) => return Err(e),
        };
        let q = phi.nrows();
        if rank(&vstack(&[&phi, &psi]), tol) != q {
            return Ok(false);
        }
        if real {
            let prod = psi.adjoint() * &phi;
            if !is_psd(&matcore::hermitian_part(&prod), tol)? {
                return Ok(false);
            }
        } else {
            let kd1 = j_form(&phi, &psi, z);
            let kd2 = j_form(&phi.map(|x| x * (z - a)), &psi, z);
            if !is_psd(&kd1, tol)? || !is_psd(&kd2, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Standard validity grid: the non-real standard grid plus three real
/// points left of `alpha`.
pub fn validity_grid(alpha: f64) -> Vec<C64> {
    let mut grid = crate::resolvent::standard_grid(alpha);
    for dx in [0.5, 2.0, 7.0] {
        grid.push(c64(alpha - dx, 0.0));
    }
    grid
}

/// Eight upper half-plane points used for pair comparison.
pub fn equivalence_grid(alpha: f64) -> Vec<C64> {
    [
        (-2.0, 1.0),
        (-1.0, 0.5),
        (0.0, 2.0),
        (0.5, 0.25),
        (1.0, 1.0),
        (2.0, 3.0),
        (3.5, 0.7),
        (-4.0, 5.0),
    ]
    .iter()
    .map(|&(dx, y)| c64(alpha + dx, y))
    .collect()
}

fn restricted_products(seq: &MomentSequence, n: usize, tol: &ToleranceConfig) -> Result<(CMatrix, CMatrix)> {
    let q = seq.q();
    let h = seq.hankel(n)?;
    let hs = seq.hankel_shifted(n)?;
    let v = v_selector(q, n);
    let a = c64(seq.alpha(), 0.0);
    let x_phi = null_projector(&h, tol) * resolvent_at(q, n, a) * &v;
    let x_psi = null_projector(&hs, tol) * &h * &v;
    Ok((x_phi, x_psi))
}

/// Decides whether `(I - H⁺H) R_T(alpha) v phi` and
/// `(I - H_a⁺H_a) H v psi` vanish identically, by sampling at more points
/// than the degree of the pair allows zeros.
pub fn pair_in_restricted_class(
    p: &StieltjesPair,
    seq: &MomentSequence,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let (x_phi, x_psi) = restricted_products(seq, n, tol)?;
    if x_phi.ncols() != p.dim() {
        return Err(Error::DimensionMismatch("pair and sequence differ in q".into()));
    }
    let samples = n + 2 + p.degree_hint() + 1;
    let alpha = seq.alpha();
    for k in 0..samples {
        let z = c64(alpha - 1.0 - 0.37 * k as f64, 0.5 + 0.61 * k as f64);
        let (phi, psi) = pair_eval(p, z)?;
        let r1 = (&x_phi * &phi).norm();
        let r2 = (&x_psi * &psi).norm();
        let s1 = tol.tol_identity * (1.0 + x_phi.norm()) * (1.0 + phi.norm());
        let s2 = tol.tol_identity * (1.0 + x_psi.norm()) * (1.0 + psi.norm());
        if r1 > s1 || r2 > s2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cayley value `(psi + i phi)(psi - i phi)^{-1}`.
pub fn cayley(phi: &CMatrix, psi: &CMatrix) -> Result<CMatrix> {
    let i = c64(0.0, 1.0);
    let num = psi + phi.map(|x| x * i);
    let den = psi - phi.map(|x| x * i);
    Ok(num * matcore::inverse(&den)?)
}

/// Compares two pairs through their Cayley values at the upper half-plane
/// points of `grid`; points where either value is undefined are skipped.
///
/// Returns true when `||C_1 - C_2|| <= tol (1 + ||C_1||)` at every used point.
pub fn pairs_equivalent(
    p1: &StieltjesPair,
    p2: &StieltjesPair,
    grid: &[C64],
    tol: f64,
) -> Result<bool> {
    let mut used = 0;
    for &z in grid.iter().filter(|z| z.im > 1e-6) {
        let (phi1, psi1) = pair_eval(p1, z)?;
        let (phi2, psi2) = pair_eval(p2, z)?;
        let (c1, c2) = match (cayley(&phi1, &psi1), cayley(&phi2, &psi2)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        used += 1;
        if (&c1 - c2).norm() > tol * (1.0 + c1.norm()) {
            return Ok(false);
        }
    }
    if used == 0 {
        return Err(Error::Singular("no grid point admits a Cayley value".into()));
    }
    Ok(true)
}
