//! Model checking for the logic of synergistic knowledge.
//!
//! Knowledge is indexed by agent patterns (sets of agent groups) and
//! interpreted either on simplicial models, whose worlds are simplices made
//! of coloured faces, or on Kripke pre-models with one relation per pattern.
//! The crate parses and prints formulas, validates both kinds of model,
//! classifies Kripke frames, unravels them into history frames, translates
//! proper frames into complexes, and ships generators and property suites for
//! checking all of this at desk scale.

pub mod agents;
pub mod corpus;
pub mod formula;
pub mod io;
pub mod kripke;
pub mod relation;
pub mod semantics;
pub mod simplicial;
pub mod syntax;
pub mod translate;
pub mod unravel;
pub mod verify;

pub use agents::{AgentPattern, AgentSet, PatternSpace, Universe};
pub use formula::{Formula, Prop};
pub use kripke::{check_frame, FrameReport, Level, PreModel, Property};
pub use relation::Per;
pub use semantics::{EvalError, Evaluator, Frame};
pub use syntax::{parse_formula, print_formula};
