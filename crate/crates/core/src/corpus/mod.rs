//! The text corpus of germs and the runner that checks them.

mod bundled;
mod emit;
mod entry;
mod expr;
mod run;

use std::fmt;

pub use bundled::{bundled_corpus, BUNDLED_CORPUS};
pub use emit::{emit_report, parse_json_report, ratio, verdict_label, Format, CSV_HEADER};
pub use entry::{parse_corpus, parse_entry, CorpusEntry, Expectations};
pub use expr::{parse_polynomial, parse_polynomial_at, Origin};
pub use run::{
    exit_code, run_corpus, run_entry, CheckSelection, ConfigError, RunConfig, RunOutcome, MAX_CRITICAL_LEVEL,
    QUASI_HOMOGENEOUS_TAG,
};

/// A syntax or validation error in corpus text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}
