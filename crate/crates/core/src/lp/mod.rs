//! Linear programs: data model, the embedded simplex solver, dual lookup and
//! standard file formats.
//!
//! Shadow prices follow the minimization convention: the dual of a row is
//! the change in optimal objective per unit increase of its right-hand side,
//! so a binding `>=` row has a nonnegative dual and a binding `<=` row a
//! nonpositive one.

mod duals;
pub mod external;
pub mod lptext;
mod lu;
pub mod mps;
mod problem;
mod scaling;
mod simplex;
mod solution;

pub use duals::{dual_series, DualSeries};
pub use problem::{Constraint, LinearProgram, RowId, Sense, VarId, Variable};
pub use simplex::solve;
pub use solution::{Solution, SolveOptions, Status};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("variable `{var}` appears more than once in row `{row}`")]
    DuplicateEntry { row: String, var: String },
    #[error("row `{row}` references column {index} but the program has {num_vars} variables")]
    DimensionMismatch { row: String, index: usize, num_vars: usize },
    #[error("invalid bounds on `{name}`: [{lower}, {upper}]")]
    InvalidBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite value in {what}")]
    NonFinite { what: String },
    #[error("invalid name `{name}`: {reason}")]
    InvalidName { name: String, reason: &'static str },
    #[error("no constraints match prefix `{0}`")]
    UnknownPrefix(String),
    #[error("solution is not optimal ({0:?})")]
    NotOptimal(Status),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("external solver: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// File format for [`mps::write`] / [`lptext::write`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FileFormat {
    Mps,
    LpText,
}

/// Serializes `lp` in the requested format.
pub fn emit_lp_file(lp: &LinearProgram, format: FileFormat) -> Result<Vec<u8>, LpError> {
    let mut out = Vec::new();
    match format {
        FileFormat::Mps => mps::write(lp, &mut out)?,
        FileFormat::LpText => lptext::write(lp, &mut out)?,
    }
    Ok(out)
}

/// Parses a file previously produced by [`emit_lp_file`].
pub fn parse_lp_file(bytes: &[u8], format: FileFormat) -> Result<LinearProgram, LpError> {
    match format {
        FileFormat::Mps => mps::parse(bytes),
        FileFormat::LpText => lptext::parse(bytes),
    }
}
