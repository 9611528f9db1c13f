//! Exhaustive enumeration of small formulas.

use std::collections::HashSet;

use thiserror::Error;

use crate::agents::AgentPattern;
use crate::formula::{Formula, Prop};

/// Deepest nesting [`formula_suite`] accepts.
pub const MAX_SUITE_DEPTH: usize = 3;

/// Largest suite [`formula_suite`] will build.
pub const SUITE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("suite depth {0} exceeds the maximum of {MAX_SUITE_DEPTH}")]
    TooDeep(usize),
    #[error("suite would exceed {SUITE_BUDGET} formulas")]
    Budget,
}

/// All formulas with at most `depth` nested operators over the given atoms
/// and patterns, without duplicates, in a fixed order.
///
/// Level `k` adds to level `k - 1` the negation and each box of every
/// formula there, and the conjunction of every ordered pair.
pub fn formula_suite(
    props: &[Prop],
    patterns: &[AgentPattern],
    depth: usize,
) -> Result<Vec<Formula>, SuiteError> {
    if depth > MAX_SUITE_DEPTH {
        return Err(SuiteError::TooDeep(depth));
    }
    let mut out: Vec<Formula> = Vec::new();
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    for p in props {
        push(Formula::Atom(p.clone()), &mut out);
    }
    for _ in 0..depth {
        let prev = out.len();
        let grown = prev * (2 + patterns.len()) + prev * prev;
        if grown > SUITE_BUDGET {
            return Err(SuiteError::Budget);
        }
        let base: Vec<Formula> = out.clone();
        for f in &base {
            push(Formula::not(f.clone()), &mut out);
        }
        for g in patterns {
            for f in &base {
                push(Formula::know(g.clone(), f.clone()), &mut out);
            }
        }
        for a in &base {
            for b in &base {
                push(Formula::and(a.clone(), b.clone()), &mut out);
            }
        }
    }
    Ok(out)
}

/// Atoms for a suite: the given propositions, at most `count`, padded with
/// unused names `p`, `q`, `r`, ... up to `count`.
pub fn suite_props(known: impl IntoIterator<Item = Prop>, count: usize) -> Vec<Prop> {
    let mut out: Vec<Prop> = known.into_iter().take(count).collect();
    for name in ["p", "q", "r", "s", "t", "u"] {
        if out.len() >= count {
            break;
        }
        let p = Prop::new(name).expect("valid name");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}
