//! Built-in example models.
//!
//! | name        | kind       | content                                                   |
//! |-------------|------------|-----------------------------------------------------------|
//! | `queue`     | simplicial | two enqueue orders sharing both vertices; `p` at `PQ0`     |
//! | `consensus` | simplicial | three critical-state successors sharing every proper face |
//! | `dining`    | simplicial | eight coin outcomes; `p` at `abc0`, `abc4`, `abc5`, `abc6` |
//! | `subworld`  | simplicial | `abc0` and its sub-simplex `ab0`; `p` at `ab0`             |
//! | `nostd`     | Kripke     | `w1`, `w2` related by `{a}` and by `{b}` only; `p` at `w1` |
//! | `fig3`      | Kripke     | three worlds; `p` at `w1`, `q` at `w3`                     |
//! | `improper`  | Kripke     | two worlds related by `{ab}`; `p` at both                  |
//!
//! The Kripke entries are generated-mode files with an `{ab}` self-loop on
//! every world. The consensus valuation makes exactly one of `move_a`,
//! `move_b`, `move_c` true per simplex.

use thiserror::Error;

use crate::io::{parse_model, AnyModel, IoError};

pub const EXAMPLES: [(&str, &str); 7] = [
    ("queue", include_str!("../corpus/queue.json")),
    ("consensus", include_str!("../corpus/consensus.json")),
    ("dining", include_str!("../corpus/dining.json")),
    ("subworld", include_str!("../corpus/subworld.json")),
    ("nostd", include_str!("../corpus/nostd.json")),
    ("fig3", include_str!("../corpus/fig3.json")),
    ("improper", include_str!("../corpus/improper.json")),
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown example {0:?}; known: queue, consensus, dining, subworld, nostd, fig3, improper")]
    Unknown(String),
    #[error("example {name:?} does not load: {source}")]
    Broken { name: String, source: IoError },
}

pub fn example_names() -> impl Iterator<Item = &'static str> {
    EXAMPLES.iter().map(|(n, _)| *n)
}

/// The canonical JSON text of an example.
pub fn example_text(name: &str) -> Result<&'static str, CorpusError> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CorpusError::Unknown(name.to_string()))
}

pub fn load_example(name: &str) -> Result<AnyModel, CorpusError> {
    parse_model(example_text(name)?).map_err(|source| CorpusError::Broken {
        name: name.to_string(),
        source,
    })
}
