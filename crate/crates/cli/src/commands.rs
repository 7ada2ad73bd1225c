//! Implementations of the subcommands.
//!
//! Every command returns the JSON document to print together with the exit
//! code: 0 for success or a positive verdict, 2 for a negative verdict.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use serde::Serialize;
use stieltjes_core::matcore::{lambda_min, CMatrix, ToleranceConfig, C64};
use stieltjes_core::momentseq::{class_membership, MomentSequence};
use stieltjes_core::potapov::{potapov_from_value, PotapovReport, MIN_IMAG};
use stieltjes_core::resolvent::{build_resolvent, standard_grid};
use stieltjes_core::solver::{
    classify, lft_solution, lift_pair, unique_solution, verify_solution, Candidate,
    DegeneracyCase,
};
use stieltjes_core::stieltjes::{moments_of, transform};
use stieltjes_core::Error;

use crate::io::{
    complex_to_json, matrix_to_json, read_json, JsonComplex, JsonMatrix, MeasureFile, MomentFile,
    PairFile,
};

/// JSON text and exit code of a finished command.
pub struct Outcome {
    pub json: String,
    pub code: u8,
}

fn render<T: Serialize>(value: &T, pretty: bool, code: u8) -> Result<Outcome> {
    let json = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    Ok(Outcome { json, code })
}

/// Parses `standard` or a comma-separated list such as `1+2i,-3i,0.5`.
pub fn parse_points(text: &str, alpha: f64) -> Result<Vec<C64>> {
    let text = text.trim();
    if text == "standard" {
        return Ok(standard_grid(alpha));
    }
    text.split(',')
        .map(|s| {
            let s = s.trim();
            Complex64::from_str(s).map_err(|_| anyhow!("cannot parse point '{s}' as a complex number"))
        })
        .collect()
}

fn load_sequence(path: &Path, tol: &ToleranceConfig) -> Result<MomentSequence> {
    read_json::<MomentFile>(path, "moment")?.to_sequence(tol)
}

fn load_measure(path: &Path, tol: &ToleranceConfig) -> Result<stieltjes_core::stieltjes::AtomicMeasure> {
    read_json::<MeasureFile>(path, "measure")?.to_measure(tol)
}

#[derive(Serialize)]
struct CheckOutput {
    #[serde(rename = "in_Hgeq")]
    in_hgeq: bool,
    #[serde(rename = "in_Hgeq_e")]
    in_hgeq_e: bool,
    #[serde(rename = "in_Kgeq")]
    in_kgeq: bool,
    #[serde(rename = "in_Kgeq_e")]
    in_kgeq_e: bool,
    witness_extension: Option<JsonMatrix>,
}

/// Class membership of a moment sequence; exit 2 unless Stieltjes
/// nonnegative.
pub fn check(moments: &Path, tol: &ToleranceConfig, pretty: bool) -> Result<Outcome> {
    let seq = load_sequence(moments, tol)?;
    let report = class_membership(&seq, tol)?;
    let out = CheckOutput {
        in_hgeq: report.in_hgeq,
        in_hgeq_e: report.in_hgeq_e,
        in_kgeq: report.in_kgeq,
        in_kgeq_e: report.in_kgeq_e,
        witness_extension: report.witness_extension.as_ref().map(matrix_to_json),
    };
    render(&out, pretty, if report.in_kgeq { 0 } else { 2 })
}

fn case_name(case: DegeneracyCase) -> &'static str {
    match case {
        DegeneracyCase::NonDegenerate => "NonDegenerate",
        DegeneracyCase::Degenerate => "Degenerate",
        DegeneracyCase::CompletelyDegenerate => "CompletelyDegenerate",
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    n: usize,
    q: usize,
    m: usize,
    l: usize,
    r: usize,
    case: &'static str,
    u_basis: JsonMatrix,
    v_basis: JsonMatrix,
    w: JsonMatrix,
}

/// Degeneracy integers, subspaces and the unitary `W`.
pub fn classify_cmd(moments: &Path, n: usize, tol: &ToleranceConfig, pretty: bool) -> Result<Outcome> {
    let seq = load_sequence(moments, tol)?;
    let c = classify(&seq, n, tol)?;
    let out = ClassifyOutput {
        n: c.n,
        q: c.q,
        m: c.m,
        l: c.l,
        r: c.r,
        case: case_name(c.case),
        u_basis: matrix_to_json(c.u.basis()),
        v_basis: matrix_to_json(c.v.basis()),
        w: matrix_to_json(&c.w),
    };
    render(&out, pretty, 0)
}

#[derive(Serialize)]
struct Residuals {
    factorization: f64,
    scaling: f64,
}

#[derive(Serialize)]
struct ResolventOutput {
    n: usize,
    q: usize,
    alpha: f64,
    degree: usize,
    coeffs: Vec<JsonMatrix>,
    coeffs_tilde: Vec<JsonMatrix>,
    residuals: Residuals,
}

/// Coefficients of `Theta` and `Theta~` with the build residuals.
pub fn resolvent(moments: &Path, n: usize, tol: &ToleranceConfig, pretty: bool) -> Result<Outcome> {
    let seq = load_sequence(moments, tol)?;
    let r = build_resolvent(&seq, n, tol)?;
    let check = r.self_check();
    let theta = r.theta_poly(false);
    let tilde = r.theta_poly(true);
    let degree = theta.degree().unwrap_or(0).max(tilde.degree().unwrap_or(0));
    let out = ResolventOutput {
        n,
        q: r.q(),
        alpha: r.alpha(),
        degree,
        coeffs: theta.coeffs().iter().map(matrix_to_json).collect(),
        coeffs_tilde: tilde.coeffs().iter().map(matrix_to_json).collect(),
        residuals: Residuals {
            factorization: check.factorization_residual,
            scaling: check.scaling_residual,
        },
    };
    render(&out, pretty, 0)
}

#[derive(Serialize)]
struct Lambdas {
    even: f64,
    odd: f64,
    minus_one: f64,
}

#[derive(Serialize)]
struct SolvePoint {
    z: JsonComplex,
    value: Option<JsonMatrix>,
    singular: bool,
    error: Option<String>,
    lambda_min: Option<Lambdas>,
}

#[derive(Serialize)]
struct SolveOutput {
    n: usize,
    case: &'static str,
    warning: Option<String>,
    points: Vec<SolvePoint>,
}

fn lambdas(seq: &MomentSequence, n: usize, value: &CMatrix, z: C64) -> Result<Option<Lambdas>> {
    if z.im.abs() < MIN_IMAG {
        return Ok(None);
    }
    let k = 2 * n as isize;
    Ok(Some(Lambdas {
        even: lambda_min(&potapov_from_value(seq, value, z, k)?),
        odd: lambda_min(&potapov_from_value(seq, value, z, k + 1)?),
        minus_one: lambda_min(&potapov_from_value(seq, value, z, -1)?),
    }))
}

/// Values of the solution obtained from a parameter pair.
///
/// Degenerate problems expect a pair of size `r`, which is lifted; in the
/// completely degenerate case the pair is ignored.
pub fn solve(
    moments: &Path,
    pair: Option<&Path>,
    n: usize,
    points: &[C64],
    tol: &ToleranceConfig,
    pretty: bool,
) -> Result<Outcome> {
    let seq = load_sequence(moments, tol)?;
    let report = classify(&seq, n, tol)?;
    let mut warning = None;
    let solution = if report.case == DegeneracyCase::CompletelyDegenerate {
        if pair.is_some() {
            let text = "the problem is completely degenerate; the pair is ignored".to_string();
            eprintln!("warning: {text}");
            warning = Some(text);
        }
        unique_solution(&seq, n, tol)?
    } else {
        let Some(path) = pair else {
            bail!("a pair file is required unless the problem is completely degenerate");
        };
        let inner = read_json::<PairFile>(path, "pair")?.to_pair(seq.alpha(), tol)?;
        let lifted = lift_pair(&report, inner)?;
        lft_solution(&build_resolvent(&seq, n, tol)?, lifted)?
    };
    let data = seq.prefix(2 * n + 1)?;
    let mut rows = Vec::with_capacity(points.len());
    for &z in points {
        let row = match solution.value(z) {
            Ok(v) => SolvePoint {
                z: complex_to_json(z),
                value: Some(matrix_to_json(&v)),
                singular: false,
                error: None,
                lambda_min: lambdas(&data, n, &v, z)?,
            },
            Err(e) => SolvePoint {
                z: complex_to_json(z),
                value: None,
                singular: matches!(e, Error::SingularAt(_)),
                error: Some(e.to_string()),
                lambda_min: None,
            },
        };
        rows.push(row);
    }
    let out = SolveOutput {
        n,
        case: case_name(report.case),
        warning,
        points: rows,
    };
    render(&out, pretty, 0)
}

#[derive(Serialize)]
struct PotapovPointJson {
    z: JsonComplex,
    lambda_even: f64,
    lambda_odd: Option<f64>,
    lambda_minus_one: f64,
    pass: bool,
}

#[derive(Serialize)]
struct PotapovJson {
    n: usize,
    pass: bool,
    points: Vec<PotapovPointJson>,
}

impl From<&PotapovReport> for PotapovJson {
    fn from(r: &PotapovReport) -> Self {
        Self {
            n: r.n,
            pass: r.pass,
            points: r
                .points
                .iter()
                .map(|p| PotapovPointJson {
                    z: complex_to_json(p.z),
                    lambda_even: p.lambda_even,
                    lambda_odd: p.lambda_odd,
                    lambda_minus_one: p.lambda_minus_one,
                    pass: p.pass,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    valid: bool,
    moment_residual: Option<f64>,
    defect_lambda_min: Option<f64>,
    decomposition_residual: Option<f64>,
    potapov: PotapovJson,
}

/// Checks a measure against the moment data; exit 2 when it is not a
/// solution.
pub fn verify(
    moments: &Path,
    measure: &Path,
    n: usize,
    grid: &[C64],
    tol: &ToleranceConfig,
    pretty: bool,
) -> Result<Outcome> {
    let seq = load_sequence(moments, tol)?;
    let mu = load_measure(measure, tol)?;
    let report = verify_solution(&seq, n, Candidate::Measure(&mu), grid, tol)?;
    let out = VerifyOutput {
        valid: report.valid,
        moment_residual: report.moment_residual,
        defect_lambda_min: report.defect_lambda_min,
        decomposition_residual: report.decomposition_residual,
        potapov: PotapovJson::from(&report.potapov),
    };
    render(&out, pretty, if report.valid { 0 } else { 2 })
}

#[derive(Serialize)]
struct TransformPoint {
    z: JsonComplex,
    value: Option<JsonMatrix>,
    error: Option<String>,
}

#[derive(Serialize)]
struct TransformOutput {
    points: Vec<TransformPoint>,
}

/// Stieltjes transform of a measure at the given points.
pub fn transform_cmd(measure: &Path, points: &[C64], tol: &ToleranceConfig, pretty: bool) -> Result<Outcome> {
    let mu = load_measure(measure, tol)?;
    let rows = points
        .iter()
        .map(|&z| match transform(&mu, z) {
            Ok(v) => TransformPoint {
                z: complex_to_json(z),
                value: Some(matrix_to_json(&v)),
                error: None,
            },
            Err(e) => TransformPoint {
                z: complex_to_json(z),
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    render(&TransformOutput { points: rows }, pretty, 0)
}

/// Moments `s_0, ..., s_order` of a measure, written as a moment file.
pub fn moments_cmd(measure: &Path, order: usize, tol: &ToleranceConfig, pretty: bool) -> Result<Outcome> {
    let mu = load_measure(measure, tol)?;
    render(&MomentFile::from_sequence(&moments_of(&mu, order)), pretty, 0)
}

/// Alpha of a moment file, used to resolve the `standard` grid preset.
pub fn moment_alpha(moments: &Path) -> Result<f64> {
    Ok(read_json::<MomentFile>(moments, "moment")?.alpha)
}

/// Alpha of a measure file.
pub fn measure_alpha(measure: &Path) -> Result<f64> {
    Ok(read_json::<MeasureFile>(measure, "measure")?.alpha)
}
