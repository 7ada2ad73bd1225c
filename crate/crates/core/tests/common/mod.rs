//! Seeded fixture generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stieltjes_core::matcore::{c64, zeros, CMatrix, ToleranceConfig, C64};
use stieltjes_core::momentseq::MomentSequence;
use stieltjes_core::stieltjes::{moments_of, AtomicMeasure, StieltjesFunction};

/// Deterministic generator for a test.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent entries uniform in the unit square.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random Hermitian matrix (not necessarily semidefinite).
pub fn random_hermitian(rng: &mut ChaCha8Rng, q: usize) -> CMatrix {
    let a = random_matrix(rng, q, q);
    (&a + a.adjoint()).scale(0.5)
}

/// Random positive semidefinite matrix of the given rank.
pub fn random_psd(rng: &mut ChaCha8Rng, q: usize, rank: usize) -> CMatrix {
    let a = random_matrix(rng, q, rank);
    &a * a.adjoint()
}

/// Random unitary matrix from the QR factorization of a random matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, q: usize) -> CMatrix {
    random_matrix(rng, q, q).qr().q()
}

/// Random Hermitian sequence `s_0, ..., s_m`.
pub fn random_hermitian_sequence(
    rng: &mut ChaCha8Rng,
    alpha: f64,
    q: usize,
    m: usize,
) -> MomentSequence {
    let moments = (0..=m).map(|_| random_hermitian(rng, q)).collect();
    MomentSequence::new(alpha, moments, &ToleranceConfig::default()).unwrap()
}

/// Measure with the given number of atoms at distinct positions in
/// `alpha + [0, 3]`; weights have random ranks in `min_rank..=q`.
/// With `include_alpha` one atom sits at `alpha` itself.
pub fn random_measure(
    rng: &mut ChaCha8Rng,
    alpha: f64,
    q: usize,
    atoms: usize,
    min_rank: usize,
    include_alpha: bool,
) -> AtomicMeasure {
    let mut offsets = [0.35, 0.8, 1.3, 1.75, 2.2, 2.6, 3.0];
    offsets.shuffle(rng);
    let mut list = Vec::with_capacity(atoms);
    for (k, offset) in offsets.iter().enumerate().take(atoms) {
        let t = if include_alpha && k == 0 {
            alpha
        } else {
            alpha + offset + rng.gen_range(-0.05..0.05)
        };
        let rank = rng.gen_range(min_rank.max(1)..=q);
        list.push((t, random_psd(rng, q, rank)));
    }
    AtomicMeasure::new(alpha, q, list, &ToleranceConfig::default()).unwrap()
}

/// A Stieltjes extendable sequence of order `n`, taken as the exact moments
/// `s_0, ..., s_{2n+1}` of a random measure.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub seq: MomentSequence,
    pub n: usize,
    pub measure: AtomicMeasure,
}

/// Mixed fixtures: generic ones and ones with few atoms, low-rank weights
/// or an atom at `alpha`, so that both Hankel matrices may be singular.
pub fn kgeq_fixtures(count: usize, seed: u64) -> Vec<Fixture> {
    let mut rng = rng(seed);
    (0..count)
        .map(|k| {
            let q = 1 + k % 3;
            let n = (k / 3) % 3;
            let alpha = [0.0, -1.5, 2.0][k % 3] + rng.gen_range(-0.5..0.5);
            let (atoms, min_rank, at_alpha) = match k % 4 {
                0 => (n + 2, q, false),
                1 => (1 + k % (n + 1), 1, false),
                2 => (n + 1, 1, true),
                _ => (1, 1, k % 2 == 0),
            };
            let measure = random_measure(&mut rng, alpha, q, atoms, min_rank, at_alpha);
            Fixture {
                seq: moments_of(&measure, 2 * n + 1),
                n,
                measure,
            }
        })
        .collect()
}

/// Fixtures with `n + 2` atoms strictly above `alpha` and full-rank
/// weights, so that both Hankel matrices are positive definite.
pub fn nondegenerate_fixtures(count: usize, seed: u64) -> Vec<Fixture> {
    let mut rng = rng(seed);
    (0..count)
        .map(|k| {
            let q = 1 + k % 2;
            let n = k % 3;
            let alpha = rng.gen_range(-1.0..1.0);
            let measure = random_measure(&mut rng, alpha, q, n + 2, q, false);
            Fixture {
                seq: moments_of(&measure, 2 * n + 1),
                n,
                measure,
            }
        })
        .collect()
}

/// Random Stieltjes function `gamma + S_mu` of size `q` on `[alpha, inf)`.
pub fn random_stieltjes_function(
    rng: &mut ChaCha8Rng,
    alpha: f64,
    q: usize,
    atoms: usize,
) -> StieltjesFunction {
    let mu = random_measure(rng, alpha, q, atoms, 1, false);
    let gamma = if rng.gen_bool(0.5) {
        random_psd(rng, q, 1).scale(0.3)
    } else {
        zeros(q, q)
    };
    StieltjesFunction::new(gamma, mu, &ToleranceConfig::default()).unwrap()
}

/// Random non-real point near `alpha`.
pub fn random_nonreal(rng: &mut ChaCha8Rng, alpha: f64) -> C64 {
    let y: f64 = rng.gen_range(0.2..3.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    c64(alpha + rng.gen_range(-3.0..4.0), sign * y)
}

/// Moments `s_0, ..., s_m` of a rational transform by contour integration:
/// `s_j = -(1/2 pi i) \oint z^j S(z) dz` over a circle enclosing all poles.
/// The trapezoidal rule converges geometrically for such integrands.
pub fn contour_moments(
    f: impl Fn(C64) -> CMatrix,
    center: f64,
    radius: f64,
    m: usize,
    nodes: usize,
) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::new();
    for k in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / nodes as f64;
        let e = c64(theta.cos(), theta.sin());
        let z = c64(center, 0.0) + e * radius;
        // dz = i r e dtheta; -(1/2 pi i) * i r e * (2 pi / N) = -r e / N
        let weight = -e * radius / nodes as f64;
        let value = f(z);
        for j in 0..=m {
            let term = value.map(|x| x * weight * z.powu(j as u32));
            if out.len() <= j {
                out.push(term);
            } else {
                out[j] += term;
            }
        }
    }
    out
}

/// Maximum of a residual list.
pub fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}
