//! Moment sequences, block Hankel matrices and sequence classes.
//!
//! A [`MomentSequence`] holds `q x q` Hermitian matrices `s_0, ..., s_m`
//! together with the left end `alpha` of the interval `[alpha, inf)`.
//! From it we build the block Hankel matrices `H_n`, `K_n`, `G_n` and the
//! shifted matrix `H_{alpha,n} = -alpha H_n + K_n`, the stacked vectors used
//! by the Ljapunov identities, the Schur complement ladder, and membership
//! reports for the four nonnegativity classes.

use crate::error::{Error, Result};
use crate::matcore::{
    self, hermitize_checked, identity, is_psd, pseudo_inverse, range_included, zeros, CMatrix,
    ToleranceConfig,
};
use crate::resolvent::{frak_v_selector, v_selector};

/// A finite sequence of Hermitian `q x q` moments attached to `[alpha, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    alpha: f64,
    q: usize,
    moments: Vec<CMatrix>,
}

impl MomentSequence {
    /// Validates and stores a moment sequence.
    ///
    /// Each moment must be a finite `q x q` matrix that is Hermitian within
    /// `tol_herm`; it is replaced by its exact Hermitian part.
    ///
    /// # Examples
    ///
    /// ```
    /// use stieltjes_core::matcore::{real_matrix, ToleranceConfig};
    /// use stieltjes_core::momentseq::MomentSequence;
    /// let s = vec![real_matrix(&[&[1.0]]), real_matrix(&[&[1.0]])];
    /// let seq = MomentSequence::new(0.0, s, &ToleranceConfig::default()).unwrap();
    /// assert_eq!(seq.last_index(), 1);
    /// ```
    pub fn new(alpha: f64, moments: Vec<CMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        let first = moments.first().ok_or(Error::EmptySequence)?;
        let q = first.nrows();
        if q == 0 {
            return Err(Error::DimensionMismatch("moments must be at least 1x1".into()));
        }
        let mut clean = Vec::with_capacity(moments.len());
        for (j, s) in moments.iter().enumerate() {
            if s.shape() != (q, q) {
                return Err(Error::DimensionMismatch(format!(
                    "moment s_{j} is {}x{}, expected {q}x{q}",
                    s.nrows(),
                    s.ncols()
                )));
            }
            clean.push(hermitize_checked(s, tol, &format!("moment s_{j}"))?);
        }
        Ok(Self {
            alpha,
            q,
            moments: clean,
        })
    }

    /// Scalar sequence (`q = 1`) from real numbers.
    pub fn scalar(alpha: f64, values: &[f64]) -> Result<Self> {
        let moments = values
            .iter()
            .map(|&x| matcore::real_matrix(&[&[x]]))
            .collect();
        Self::new(alpha, moments, &ToleranceConfig::default())
    }

    /// Left end of the interval.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Block size.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Index `m` of the last moment.
    pub fn last_index(&self) -> usize {
        self.moments.len() - 1
    }

    /// All moments in order.
    pub fn moments(&self) -> &[CMatrix] {
        &self.moments
    }

    /// Moment `s_j`, with the convention `s_{-1} = 0` for `j = -1`.
    pub fn s(&self, j: isize) -> Result<CMatrix> {
        if j == -1 {
            return Ok(zeros(self.q, self.q));
        }
        if j < -1 {
            return Err(Error::DimensionMismatch(format!("moment index {j}")));
        }
        self.moments
            .get(j as usize)
            .cloned()
            .ok_or(Error::InsufficientMoments {
                needed: j as usize,
                available: self.last_index(),
            })
    }

    fn require(&self, needed: usize) -> Result<()> {
        if needed > self.last_index() {
            Err(Error::InsufficientMoments {
                needed,
                available: self.last_index(),
            })
        } else {
            Ok(())
        }
    }

    /// The sequence `s_0, ..., s_m` for a smaller `m`.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        self.require(m)?;
        Ok(Self {
            alpha: self.alpha,
            q: self.q,
            moments: self.moments[..=m].to_vec(),
        })
    }

    /// The sequence extended by one more moment.
    pub fn extended(&self, next: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let mut moments = self.moments.clone();
        moments.push(next);
        Self::new(self.alpha, moments, tol)
    }

    /// Right-sided alpha-shift: `s_{alpha,j} = -alpha s_j + s_{j+1}`.
    ///
    /// # Examples
    ///
    /// ```
    /// use stieltjes_core::momentseq::MomentSequence;
    /// let seq = MomentSequence::scalar(2.0, &[1.0, 3.0]).unwrap();
    /// let shifted = seq.shift_right().unwrap();
    /// assert_eq!(shifted.moments()[0][(0, 0)].re, 1.0);
    /// ```
    pub fn shift_right(&self) -> Result<Self> {
        if self.last_index() == 0 {
            return Err(Error::InsufficientMoments {
                needed: 1,
                available: 0,
            });
        }
        let moments = self
            .moments
            .windows(2)
            .map(|w| &w[1] - w[0].scale(self.alpha))
            .collect();
        Ok(Self {
            alpha: self.alpha,
            q: self.q,
            moments,
        })
    }

    fn hankel_offset(&self, n: usize, offset: usize) -> Result<CMatrix> {
        self.require(2 * n + offset)?;
        let q = self.q;
        let mut h = zeros((n + 1) * q, (n + 1) * q);
        for j in 0..=n {
            for k in 0..=n {
                h.view_mut((j * q, k * q), (q, q))
                    .copy_from(&self.moments[j + k + offset]);
            }
        }
        Ok(h)
    }

    /// Block Hankel matrix `H_n = [s_{j+k}]`, needs `2n <= m`.
    pub fn hankel(&self, n: usize) -> Result<CMatrix> {
        self.hankel_offset(n, 0)
    }

    /// Block Hankel matrix `K_n = [s_{j+k+1}]`, needs `2n + 1 <= m`.
    pub fn hankel_k(&self, n: usize) -> Result<CMatrix> {
        self.hankel_offset(n, 1)
    }

    /// Block Hankel matrix `G_n = [s_{j+k+2}]`, needs `2n + 2 <= m`.
    pub fn hankel_g(&self, n: usize) -> Result<CMatrix> {
        self.hankel_offset(n, 2)
    }

    /// Shifted block Hankel matrix `H_{alpha,n} = -alpha H_n + K_n`.
    pub fn hankel_shifted(&self, n: usize) -> Result<CMatrix> {
        let k = self.hankel_k(n)?;
        let h = self.hankel(n)?;
        Ok(k - h.scale(self.alpha))
    }

    /// Column stack `y_{l,m} = col(s_l, ..., s_m)` for `-1 <= l <= m`.
    pub fn y_stack(&self, l: isize, m: isize) -> Result<CMatrix> {
        let blocks = (l..=m).map(|j| self.s(j)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&CMatrix> = blocks.iter().collect();
        Ok(matcore::vstack(&refs))
    }

    /// Row stack `z_{l,m} = row(s_l, ..., s_m)` for `-1 <= l <= m`.
    pub fn z_stack(&self, l: isize, m: isize) -> Result<CMatrix> {
        let blocks = (l..=m).map(|j| self.s(j)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&CMatrix> = blocks.iter().collect();
        Ok(matcore::hstack(&refs))
    }

    /// `u_n = -y_{-1,n-1}`, an `(n+1)q x q` matrix (`u_0 = 0`).
    pub fn u_vec(&self, n: usize) -> Result<CMatrix> {
        if n == 0 {
            return Ok(zeros(self.q, self.q));
        }
        Ok(-self.y_stack(-1, n as isize - 1)?)
    }

    /// `w_n = z_{-1,n-1}`, a `q x (n+1)q` matrix (`w_0 = 0`).
    pub fn w_row(&self, n: usize) -> Result<CMatrix> {
        if n == 0 {
            return Ok(zeros(self.q, self.q));
        }
        self.z_stack(-1, n as isize - 1)
    }

    /// Lower stack `[-y_{n+1,2n}; 0]` (zero for `n = 0`).
    pub fn frak_u_vec(&self, n: usize) -> Result<CMatrix> {
        self.require(2 * n)?;
        if n == 0 {
            return Ok(zeros(self.q, self.q));
        }
        let y = -self.y_stack(n as isize + 1, 2 * n as isize)?;
        Ok(matcore::vstack(&[&y, &zeros(self.q, self.q)]))
    }

    /// Lower row `[z_{n+1,2n}, 0]` (zero for `n = 0`).
    pub fn frak_w_row(&self, n: usize) -> Result<CMatrix> {
        self.require(2 * n)?;
        if n == 0 {
            return Ok(zeros(self.q, self.q));
        }
        let z = self.z_stack(n as isize + 1, 2 * n as isize)?;
        Ok(matcore::hstack(&[&z, &zeros(self.q, self.q)]))
    }
}

/// All block Hankel data of a sequence for a fixed `n`.
///
/// Lists are indexed by the Hankel order; `k`, `g` and `hs` hold only the
/// orders for which enough moments exist.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelBundle {
    /// `H_0, ..., H_n`.
    pub h: Vec<CMatrix>,
    /// `K_0, ...` while `2j + 1 <= m` and `j <= n`.
    pub k: Vec<CMatrix>,
    /// `G_0, ...` while `2j + 2 <= m` and `j <= n`.
    pub g: Vec<CMatrix>,
    /// `H_{alpha,0}, ...` while `2j + 1 <= m` and `j <= n`.
    pub hs: Vec<CMatrix>,
    /// `y_{0,n}`.
    pub y0: CMatrix,
    /// `u_n`.
    pub u: CMatrix,
    /// `w_n`.
    pub w: CMatrix,
    /// Lower stack `[-y_{n+1,2n}; 0]`.
    pub frak_u: CMatrix,
    /// Lower row `[z_{n+1,2n}, 0]`.
    pub frak_w: CMatrix,
    /// First block selector `v_{q,n}`.
    pub v: CMatrix,
    /// Last block selector.
    pub frak_v: CMatrix,
    /// Embedding `[I_{nq}; 0]` of size `(n+1)q x nq`.
    pub v_embed: CMatrix,
    /// Embedding `[0; I_{nq}]` of size `(n+1)q x nq`.
    pub frak_v_embed: CMatrix,
}

/// Assembles every block Hankel matrix and stacked vector for order `n`.
///
/// Requires `2n <= m`.
pub fn hankel_catalog(seq: &MomentSequence, n: usize) -> Result<HankelBundle> {
    seq.require(2 * n)?;
    let m = seq.last_index();
    let q = seq.q();
    let h = (0..=n).map(|j| seq.hankel(j)).collect::<Result<Vec<_>>>()?;
    let k = (0..=n)
        .take_while(|j| 2 * j < m)
        .map(|j| seq.hankel_k(j))
        .collect::<Result<Vec<_>>>()?;
    let g = (0..=n)
        .take_while(|j| 2 * j + 2 <= m)
        .map(|j| seq.hankel_g(j))
        .collect::<Result<Vec<_>>>()?;
    let hs = (0..=n)
        .take_while(|j| 2 * j < m)
        .map(|j| seq.hankel_shifted(j))
        .collect::<Result<Vec<_>>>()?;
    let mut v_embed = zeros((n + 1) * q, n * q);
    let mut frak_v_embed = zeros((n + 1) * q, n * q);
    if n > 0 {
        v_embed.view_mut((0, 0), (n * q, n * q)).copy_from(&identity(n * q));
        frak_v_embed
            .view_mut((q, 0), (n * q, n * q))
            .copy_from(&identity(n * q));
    }
    Ok(HankelBundle {
        h,
        k,
        g,
        hs,
        y0: seq.y_stack(0, n as isize)?,
        u: seq.u_vec(n)?,
        w: seq.w_row(n)?,
        frak_u: seq.frak_u_vec(n)?,
        frak_w: seq.frak_w_row(n)?,
        v: v_selector(q, n),
        frak_v: frak_v_selector(q, n),
        v_embed,
        frak_v_embed,
    })
}

/// Schur complements `L_j` of the Hankel matrices and of their shifted
/// counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurLadder {
    /// `L_0 = s_0` and `L_j = s_{2j} - z_{j,2j-1} H_{j-1}⁺ y_{j,2j-1}`.
    pub l: Vec<CMatrix>,
    /// The same complements built from the shifted sequence.
    pub ls: Vec<CMatrix>,
}

fn ladder_of(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<Vec<CMatrix>> {
    let top = seq.last_index() / 2;
    let mut out = Vec::with_capacity(top + 1);
    out.push(seq.s(0)?);
    for j in 1..=top {
        let ji = j as isize;
        let y = seq.y_stack(ji, 2 * ji - 1)?;
        let z = seq.z_stack(ji, 2 * ji - 1)?;
        let hp = pseudo_inverse(&seq.hankel(j - 1)?, tol)?;
        let l = seq.s(2 * ji)? - z * hp * y;
        out.push(matcore::hermitian_part(&l));
    }
    Ok(out)
}

/// Computes the Schur complement ladder of a sequence and of its shift.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::ToleranceConfig;
/// use stieltjes_core::momentseq::{schur_ladder, MomentSequence};
/// let seq = MomentSequence::scalar(0.0, &[1.0, 1.0, 1.0]).unwrap();
/// let ladder = schur_ladder(&seq, &ToleranceConfig::default()).unwrap();
/// assert!(ladder.l[1].norm() < 1e-14);
/// ```
pub fn schur_ladder(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<SchurLadder> {
    let l = ladder_of(seq, tol)?;
    let ls = if seq.last_index() >= 1 {
        ladder_of(&seq.shift_right()?, tol)?
    } else {
        Vec::new()
    };
    Ok(SchurLadder { l, ls })
}

/// Membership of a sequence in the four nonnegativity classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    /// Hankel nonnegative.
    pub in_hgeq: bool,
    /// Hankel nonnegative and extendable.
    pub in_hgeq_e: bool,
    /// Stieltjes nonnegative on `[alpha, inf)`.
    pub in_kgeq: bool,
    /// Stieltjes nonnegative and extendable.
    pub in_kgeq_e: bool,
    /// Canonical next moment when the sequence is Stieltjes extendable.
    pub witness_extension: Option<CMatrix>,
}

fn in_hgeq(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<bool> {
    is_psd(&seq.hankel(seq.last_index() / 2)?, tol)
}

fn in_hgeq_e(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<bool> {
    let m = seq.last_index();
    let n = m / 2;
    let h = seq.hankel(n)?;
    if !is_psd(&h, tol)? {
        return Ok(false);
    }
    if m % 2 == 1 {
        let y = seq.y_stack(n as isize + 1, m as isize)?;
        return range_included(&h, &y, tol);
    }
    if n == 0 {
        return Ok(true);
    }
    let y = seq.y_stack(n as isize + 1, 2 * n as isize)?;
    range_included(&seq.hankel(n - 1)?, &y, tol)
}

fn in_kgeq(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<bool> {
    let m = seq.last_index();
    let n = m / 2;
    if !is_psd(&seq.hankel(n)?, tol)? {
        return Ok(false);
    }
    if m == 0 {
        return Ok(true);
    }
    let shifted_order = if m % 2 == 1 { n } else { n - 1 };
    is_psd(&seq.hankel_shifted(shifted_order)?, tol)
}

fn in_kgeq_e(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<bool> {
    let m = seq.last_index();
    if m == 0 {
        return is_psd(&seq.moments[0], tol);
    }
    let shifted = seq.shift_right()?;
    if m % 2 == 1 {
        Ok(in_hgeq_e(seq, tol)? && in_hgeq(&shifted, tol)?)
    } else {
        Ok(in_hgeq(seq, tol)? && in_hgeq_e(&shifted, tol)?)
    }
}

/// Decides membership in the classes of Hankel nonnegative and Stieltjes
/// nonnegative sequences, with and without extendability.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::ToleranceConfig;
/// use stieltjes_core::momentseq::{class_membership, MomentSequence};
/// let seq = MomentSequence::scalar(0.0, &[1.0, -1.0]).unwrap();
/// let report = class_membership(&seq, &ToleranceConfig::default()).unwrap();
/// assert!(!report.in_kgeq);
/// ```
pub fn class_membership(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<ClassReport> {
    let in_kgeq_e = in_kgeq_e(seq, tol)?;
    let witness_extension = if in_kgeq_e {
        Some(canonical_extension(seq, tol)?)
    } else {
        None
    };
    Ok(ClassReport {
        in_hgeq: in_hgeq(seq, tol)?,
        in_hgeq_e: in_hgeq_e(seq, tol)?,
        in_kgeq: in_kgeq(seq, tol)?,
        in_kgeq_e,
        witness_extension,
    })
}

/// Schur-complement-zero completion of `[[A, b], [b*, x]]`: `x = b* A⁺ b`.
fn zero_schur_completion(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix> {
    let ap = pseudo_inverse(a, tol)?;
    Ok(matcore::hermitian_part(&(b.adjoint() * ap * b)))
}

/// Canonical next moment `s_{m+1}`.
///
/// For odd `m = 2n+1` the new moment `z H_n⁺ y` makes the Schur complement
/// of `H_{n+1}` vanish. For even `m = 2n` a Stieltjes extendable sequence
/// gets the moment that makes the Schur complement of `H_{alpha,n}` vanish;
/// a sequence that is only Hankel extendable gets `z H_{n-1}⁺ y` with the
/// blocks of the last column of `H_n`.
///
/// # Examples
///
/// ```
/// use stieltjes_core::matcore::ToleranceConfig;
/// use stieltjes_core::momentseq::{canonical_extension, MomentSequence};
/// let seq = MomentSequence::scalar(0.0, &[1.0, 1.0]).unwrap();
/// let next = canonical_extension(&seq, &ToleranceConfig::default()).unwrap();
/// assert!((next[(0, 0)].re - 1.0).abs() < 1e-14);
/// ```
pub fn canonical_extension(seq: &MomentSequence, tol: &ToleranceConfig) -> Result<CMatrix> {
    let m = seq.last_index();
    let n = m / 2;
    let q = seq.q();
    if m % 2 == 1 {
        if !in_hgeq_e(seq, tol)? {
            return Err(Error::NotExtendable("range condition fails".into()));
        }
        let y = seq.y_stack(n as isize + 1, m as isize)?;
        return zero_schur_completion(&seq.hankel(n)?, &y, tol);
    }
    if in_kgeq_e(seq, tol)? {
        if n == 0 {
            return Ok(seq.moments[0].scale(seq.alpha));
        }
        let shifted = seq.shift_right()?;
        let ni = n as isize;
        let y = shifted.y_stack(ni, 2 * ni - 1)?;
        let completion = zero_schur_completion(&shifted.hankel(n - 1)?, &y, tol)?;
        return Ok(completion + seq.moments[m].scale(seq.alpha));
    }
    if in_hgeq_e(seq, tol)? {
        if n == 0 {
            return Ok(zeros(q, q));
        }
        let ni = n as isize;
        let b = seq.y_stack(ni, 2 * ni - 1)?;
        let w = seq.y_stack(ni + 1, 2 * ni)?;
        let hp = pseudo_inverse(&seq.hankel(n - 1)?, tol)?;
        return Ok(matcore::hermitian_part(&(b.adjoint() * hp * w)));
    }
    Err(Error::NotExtendable("sequence is not Hankel extendable".into()))
}
