//! Query scripts: parsing, evaluation, JSON reports and the golden corpus.

pub mod ast;
pub mod golden;
pub mod parser;
pub mod runner;

pub use parser::{parse, ParseError};
pub use runner::{run, run_text, Record, Report, RunOptions, Status};
