//! The JSON document `fm test` prints, built directly from the library.

use fm_score::cli::{test_document, to_json, TestInputs};
use fm_score::Alternative;

fn main() {
    let inputs = TestInputs {
        r1: 0,
        n1: 10,
        r2: 20,
        n2: 20,
        margin: 0.5,
        level: 0.95,
        alternative: Alternative::TwoSided,
    };
    match test_document(inputs) {
        Ok(doc) => println!("{}", to_json(&doc)),
        Err(e) => eprintln!("{} ({})", e, e.code()),
    }
}
