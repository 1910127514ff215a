//! The corpus shipped with the library.

use super::entry::{parse_corpus, CorpusEntry};

/// Source text of the bundled corpus.
pub const BUNDLED_CORPUS: &str = include_str!("../../data/bundled.corpus");

pub fn bundled_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUNDLED_CORPUS).expect("bundled corpus parses")
}
