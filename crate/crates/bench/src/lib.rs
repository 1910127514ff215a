//! Benchmark fixtures drawn from the bundled corpus.

use milnor_core::corpus::bundled_corpus;
use milnor_core::invariants::SingularityInput;
use milnor_core::Field;

/// The bundled germ called `name`, over the rationals.
pub fn germ(name: &str) -> SingularityInput {
    let entry = bundled_corpus()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no germ {name}"));
    entry.input(Field::Rational).expect("bundled germs parse")
}
