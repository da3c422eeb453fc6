//! File formats, run reports and the end-to-end command pipelines behind
//! the command-line interface.

pub mod commands;
pub mod parse;
pub mod report;

pub use commands::{run, Command, Context, MorseSource, TraceSource};
pub use parse::Source;
pub use report::{Failure, InputRecord, RunReport, Table, Verdict};

use thiserror::Error;

use crate::characters::CharacterError;
use crate::flag::FlagError;
use crate::morse::MorseError;
use crate::polytope::PolytopeError;
use crate::toric::ToricError;

/// Anything that makes a command inapplicable to its input (exit code 2).
#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("{0}")]
    Precondition(String),
}
