use std::path::{Path, PathBuf};

use opangle_core::angle::{cosine_estimate, scalar_rotation_search, AngleReport, OptimizerConfig, Rotation};
use opangle_core::numrange::{
    boundary_eigen_checks, numrange_sufficiency_check, to_csv, to_svg, trace_boundary_with, BoundaryEigenReport,
    OriginLocation, SufficiencyReport, DEFAULT_POINTS,
};
use opangle_core::sip::LpSpace;
use opangle_core::structure::{analyze as analyze_structure, gap as subspace_gap, StructureReport};
use opangle_core::verify::{run_suite, PropertyId, SuiteConfig, VerificationReport};
use opangle_core::{Error, Subspace, ToleranceConfig};
use serde::Serialize;

use crate::error::CliError;
use crate::matrix_io::{read_matrix, read_square};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct AnalysisDocument {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub seed: u64,
    pub p: f64,
    pub tolerances: ToleranceConfig,
    pub optimizer: OptimizerConfig,
    pub structure: StructureReport,
    pub angle: AngleReport,
    pub rotation: Rotation,
    pub numrange: NumrangeSection,
}

#[derive(Debug, Serialize)]
pub struct NumrangeSection {
    pub origin_location: OriginLocation,
    pub origin_distance: f64,
    pub boundary_eigen: BoundaryEigenReport,
    pub sufficiency: SufficiencyReport,
}

#[derive(Debug, Serialize)]
pub struct VerifyDocument {
    pub tool_version: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub n_max: usize,
    pub reports: Vec<VerificationReport>,
}

pub struct AnalyzeArgs {
    pub path: PathBuf,
    pub p: f64,
    pub seed: u64,
    pub starts: Option<usize>,
    pub samples: Option<usize>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<AnalysisDocument, CliError> {
    let a = read_square(&args.path)?;
    let space = LpSpace::new(a.order(), args.p).map_err(|e| CliError::Input(e.to_string()))?;
    let tol = ToleranceConfig::default();
    let mut optimizer = OptimizerConfig::default().with_seed(args.seed);
    if let Some(s) = args.starts {
        optimizer.starts = s;
    }
    if let Some(s) = args.samples {
        optimizer.random_samples = s;
    }
    optimizer.validate().map_err(|e| CliError::Input(e.to_string()))?;

    let structure = analyze_structure(&a, &tol)?;
    let angle = cosine_estimate(&a, &space, &optimizer, &tol)?;
    let rotation = scalar_rotation_search(&a, &tol)?;
    let boundary = trace_boundary_with(&a, DEFAULT_POINTS, &tol)?;
    let numrange = NumrangeSection {
        origin_location: boundary.origin_location,
        origin_distance: boundary.origin_distance,
        boundary_eigen: boundary_eigen_checks(&a, &tol)?,
        sufficiency: numrange_sufficiency_check(&a, DEFAULT_POINTS, &tol)?,
    };
    Ok(AnalysisDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        seed: args.seed,
        p: args.p,
        tolerances: tol,
        optimizer,
        structure,
        angle,
        rotation,
        numrange,
    })
}

pub struct NumrangeOutput {
    pub csv: String,
    pub svg: String,
    pub location: OriginLocation,
    pub distance: f64,
}

pub fn numrange(path: &Path, points: usize) -> Result<NumrangeOutput, CliError> {
    let a = read_square(path)?;
    let boundary = match trace_boundary_with(&a, points, &ToleranceConfig::default()) {
        Err(Error::InvalidConfig(msg)) => return Err(CliError::Input(msg)),
        other => other?,
    };
    Ok(NumrangeOutput {
        csv: to_csv(&boundary),
        svg: to_svg(&boundary),
        location: boundary.origin_location,
        distance: boundary.origin_distance,
    })
}

/// `all`, or a comma-separated list of property ids.
pub fn parse_suite(suite: &str) -> Result<Vec<PropertyId>, CliError> {
    if suite.eq_ignore_ascii_case("all") {
        return Ok(PropertyId::ALL.to_vec());
    }
    suite.split(',').map(|s| s.trim().parse::<PropertyId>().map_err(|e| CliError::Input(e.to_string()))).collect()
}

pub fn verify(ids: &[PropertyId], cfg: &SuiteConfig) -> Result<VerifyDocument, CliError> {
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let reports = run_suite(ids, cfg)?;
    Ok(VerifyDocument { tool_version: TOOL_VERSION, seed: cfg.seed, trials: cfg.trials, n_max: cfg.n_max, reports })
}

pub fn gap(path_m: &Path, path_n: &Path) -> Result<f64, CliError> {
    let tol = ToleranceConfig::default();
    let m = read_matrix(path_m)?;
    let n = read_matrix(path_n)?;
    if m.nrows() != n.nrows() {
        return Err(CliError::Input(format!("ambient dimensions differ: {} vs {}", m.nrows(), n.nrows())));
    }
    let sm = Subspace::span_of(&m, &tol)?;
    let sn = Subspace::span_of(&n, &tol)?;
    match subspace_gap(&sm, &sn) {
        Err(Error::SubspaceContained) => Err(CliError::SubspaceContained),
        other => Ok(other?),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}
