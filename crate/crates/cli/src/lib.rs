//! Command dispatch behind the `assocgen` binary.
//!
//! [`run`] never panics on bad input and never exits the process; it returns
//! an [`Outcome`] holding the exit code and the JSON document to print.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | certified associative, sample associative, or every example check held |
//! | 1 | certified non-associative, or the oracle found a witness |
//! | 2 | unknown |
//! | 3 | an example's recorded expectation did not hold |
//! | 64.. | usage and input errors, see [`CliError::exit_code`] |

use std::fs;
use std::path::{Path, PathBuf};

use assocgen::wire::{self, WireError, SCHEMA_VERSION};
use assocgen::{registry_get, Direction, GeneratorError, OpDescriptor, PiecewiseFn, Rational, Variant};
use serde::Serialize;
use thiserror::Error;

pub mod catalog;
mod commands;

pub use catalog::{examples_registry, Example};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Certify,
    Oracle,
    Eval,
    Examples,
    Report,
}

/// Where the base operation comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpSource {
    Registry(String),
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub generator_path: Option<PathBuf>,
    pub op: Option<OpSource>,
    pub variant: Variant,
    /// Each generator piece is cut into this many parts for the oracle grid.
    pub grid_density: u32,
    /// Deepest bisection level for ranges with interval components.
    pub refinement_depth: u32,
    pub output_path: Option<PathBuf>,
    /// Seeds the extra random oracle points.
    pub seed: u64,
    pub example_id: Option<String>,
    /// `eval` arguments as `"x,y"` pairs of rationals.
    pub points: Vec<String>,
    pub commutative_reduction: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            generator_path: None,
            op: None,
            variant: Variant::Plain,
            grid_density: 4,
            refinement_depth: 12,
            output_path: None,
            seed: 0,
            example_id: None,
            points: Vec::new(),
            commutative_reduction: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed generator file {path}: {source}")]
    MalformedGenerator { path: PathBuf, source: WireError },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("unknown operation `{0}` (known: {known})", known = assocgen::REGISTRY_IDS.join(", "))]
    UnknownOp(String),
    #[error("unsupported direction: {0}")]
    UnsupportedDirection(String),
    #[error("malformed operation table {path}: {source}")]
    MalformedTable { path: PathBuf, source: WireError },
    #[error("operation does not apply to this generator: {0}")]
    OpMismatch(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("malformed rational or point: {0}")]
    BadPoint(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("computation failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::MalformedGenerator { .. } => 65,
            CliError::Read { .. } => 66,
            CliError::UnknownOp(_) => 67,
            CliError::UnsupportedDirection(_) => 68,
            CliError::MalformedTable { .. } => 69,
            CliError::OpMismatch(_) => 70,
            CliError::UnknownExample(_) => 71,
            CliError::BadPoint(_) => 72,
            CliError::Write { .. } => 73,
            CliError::Internal(_) => 74,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::MalformedGenerator { .. } => "malformed_generator",
            CliError::Read { .. } => "read",
            CliError::UnknownOp(_) => "unknown_op",
            CliError::UnsupportedDirection(_) => "unsupported_direction",
            CliError::MalformedTable { .. } => "malformed_table",
            CliError::OpMismatch(_) => "op_mismatch",
            CliError::UnknownExample(_) => "unknown_example",
            CliError::BadPoint(_) => "bad_point",
            CliError::Write { .. } => "write",
            CliError::Internal(_) => "internal",
        }
    }
}

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Pretty JSON, newline terminated.
    pub report: String,
    /// Whether `report` describes an error (and belongs on stderr).
    pub is_error: bool,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    schema_version: u32,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    exit_code: i32,
    message: String,
}

pub(crate) fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn run(config: &RunConfig) -> Outcome {
    let result = commands::dispatch(config).and_then(|(code, report)| {
        if let Some(path) = &config.output_path {
            fs::write(path, &report).map_err(|source| CliError::Write { path: path.clone(), source })?;
        }
        Ok((code, report))
    });
    match result {
        Ok((exit_code, report)) => Outcome { exit_code, report, is_error: false },
        Err(e) => {
            let exit_code = e.exit_code();
            let doc = ErrorDoc {
                schema_version: SCHEMA_VERSION,
                error: ErrorBody { kind: e.kind(), exit_code, message: e.to_string() },
            };
            Outcome { exit_code, report: to_json(&doc), is_error: true }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub(crate) fn load_generator(config: &RunConfig) -> Result<PiecewiseFn, CliError> {
    let path = config
        .generator_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("--generator <file> is required".into()))?;
    let text = read(path)?;
    let f = wire::generator_from_json::<Rational>(&text).map_err(|source| match source {
        WireError::Generator(GeneratorError::UnsupportedDirection) => {
            CliError::UnsupportedDirection(format!("{}", path.display()))
        }
        source => CliError::MalformedGenerator { path: path.to_path_buf(), source },
    })?;
    if f.direction() != Direction::NonDecreasing {
        return Err(CliError::UnsupportedDirection(format!(
            "{} is non-increasing; only non-decreasing generators are supported",
            path.display()
        )));
    }
    let report = f.validate();
    if !report.monotone || !report.right_continuous {
        let why = if report.monotone { "not right-continuous" } else { "not monotone" };
        return Err(CliError::MalformedGenerator {
            path: path.to_path_buf(),
            source: WireError::Invalid(format!("generator is {why}")),
        });
    }
    Ok(f)
}

pub(crate) fn load_op(config: &RunConfig) -> Result<OpDescriptor, CliError> {
    match &config.op {
        None => Err(CliError::Usage("--op <id> or --op-table <file> is required".into())),
        Some(OpSource::Registry(id)) => registry_get(id).map_err(|_| CliError::UnknownOp(id.clone())),
        Some(OpSource::Table(path)) => {
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "table".into());
            wire::table_op_from_json(&read(path)?, &id)
                .map_err(|source| CliError::MalformedTable { path: path.clone(), source })
        }
    }
}
