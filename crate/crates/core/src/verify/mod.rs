//! Generators, formula suites, soundness scans and property suites.

pub mod axioms;
pub mod gen;
pub mod lemmas;
pub mod suite;

pub use axioms::{axiom_scan, scan_model, ScanLevel, ScanReport, Scheme};
pub use gen::{gen_complex, gen_kappa, gen_proper_delta, read_back, GenParams};
pub use lemmas::{simplicial_lemmas, LemmaReport};
pub use suite::formula_suite;
