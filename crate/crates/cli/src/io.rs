//! JSON file formats and conversions to the library types.
//!
//! Complex numbers are two-element arrays `[re, im]`, matrices are arrays
//! of rows of complex numbers.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use stieltjes_core::matcore::{c64, zeros, CMatrix, ToleranceConfig, C64};
use stieltjes_core::momentseq::MomentSequence;
use stieltjes_core::stieltjes::{AtomicMeasure, StieltjesFunction, StieltjesPair};

/// A complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];

/// A matrix as an array of rows.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// Moment file `{alpha, q, moments}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentFile {
    pub alpha: f64,
    pub q: usize,
    pub moments: Vec<JsonMatrix>,
}

/// One atom `{t, weight}` of a measure file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub t: f64,
    pub weight: JsonMatrix,
}

/// Measure file `{alpha, q, atoms}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub alpha: f64,
    pub q: usize,
    pub atoms: Vec<AtomFile>,
}

/// Pair file, tagged by `kind`.
///
/// A `stieltjes_function` pair is `(gamma + S_mu, I)` where `mu` has the
/// listed atoms on `[alpha, inf)` and `alpha` is taken from the moment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairFile {
    Constant {
        phi: JsonMatrix,
        psi: JsonMatrix,
    },
    StieltjesFunction {
        q: usize,
        #[serde(default)]
        gamma: Option<JsonMatrix>,
        #[serde(default)]
        atoms: Vec<AtomFile>,
    },
}

/// Reads and deserializes a JSON file; errors carry the path and the
/// line/column reported by the parser.
pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {what} file {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("invalid {what} file {}", path.display()))
}

/// Converts a complex number to its JSON form.
pub fn complex_to_json(z: C64) -> JsonComplex {
    [z.re, z.im]
}

/// Converts a matrix to its JSON form.
pub fn matrix_to_json(a: &CMatrix) -> JsonMatrix {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| complex_to_json(a[(i, j)])).collect())
        .collect()
}

/// Converts a JSON matrix, checking the expected shape; `field` names the
/// location for error messages.
pub fn matrix_from_json(m: &JsonMatrix, rows: usize, cols: usize, field: &str) -> Result<CMatrix> {
    if m.len() != rows {
        bail!("{field}: expected {rows} rows, found {}", m.len());
    }
    let mut out = zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            bail!("{field}[{i}]: expected {cols} entries, found {}", row.len());
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                bail!("{field}[{i}][{j}]: entry is not finite");
            }
            out[(i, j)] = c64(re, im);
        }
    }
    Ok(out)
}

impl MomentFile {
    /// Builds the validated moment sequence.
    pub fn to_sequence(&self, tol: &ToleranceConfig) -> Result<MomentSequence> {
        if self.q == 0 {
            bail!("q: must be positive");
        }
        let moments = self
            .moments
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_json(m, self.q, self.q, &format!("moments[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentSequence::new(self.alpha, moments, tol)?)
    }

    /// Moment file of a sequence.
    pub fn from_sequence(seq: &MomentSequence) -> Self {
        Self {
            alpha: seq.alpha(),
            q: seq.q(),
            moments: seq.moments().iter().map(matrix_to_json).collect(),
        }
    }
}

fn atoms_from_json(atoms: &[AtomFile], q: usize) -> Result<Vec<(f64, CMatrix)>> {
    atoms
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let w = matrix_from_json(&a.weight, q, q, &format!("atoms[{k}].weight"))?;
            Ok((a.t, w))
        })
        .collect()
}

impl MeasureFile {
    /// Builds the validated measure.
    pub fn to_measure(&self, tol: &ToleranceConfig) -> Result<AtomicMeasure> {
        if self.q == 0 {
            bail!("q: must be positive");
        }
        let atoms = atoms_from_json(&self.atoms, self.q)?;
        Ok(AtomicMeasure::new(self.alpha, self.q, atoms, tol)?)
    }
}

impl PairFile {
    /// Builds the validated pair; `alpha` is the left end of the interval.
    pub fn to_pair(&self, alpha: f64, tol: &ToleranceConfig) -> Result<StieltjesPair> {
        match self {
            Self::Constant { phi, psi } => {
                let q = phi.len();
                if q == 0 {
                    bail!("phi: must be a nonempty square matrix");
                }
                let phi = matrix_from_json(phi, q, q, "phi")?;
                let psi = matrix_from_json(psi, q, q, "psi")?;
                Ok(StieltjesPair::constant(phi, psi, tol)?)
            }
            Self::StieltjesFunction { q, gamma, atoms } => {
                let q = *q;
                if q == 0 {
                    bail!("q: must be positive");
                }
                let gamma = match gamma {
                    Some(g) => matrix_from_json(g, q, q, "gamma")?,
                    None => zeros(q, q),
                };
                let mu = AtomicMeasure::new(alpha, q, atoms_from_json(atoms, q)?, tol)?;
                Ok(StieltjesPair::function(StieltjesFunction::new(gamma, mu, tol)?))
            }
        }
    }
}
