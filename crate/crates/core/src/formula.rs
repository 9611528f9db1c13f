//! Formulas of the synergistic-knowledge language.
//!
//! The AST has four primitives: atoms, negation, conjunction and the
//! pattern-indexed box `[G]φ`. Everything else is sugar that desugars into
//! these at construction time.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::agents::{is_ident, AgentPattern};

/// Name of the proposition backing `false`. Not a valid identifier, so it
/// cannot be written in formula text or model files.
pub const FALSUM: &str = "#false";

const KEYWORDS: [&str; 4] = ["true", "false", "alive", "dead"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid proposition name {0:?}")]
pub struct PropError(pub String);

/// A proposition name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(String);

impl Prop {
    pub fn new(name: &str) -> Result<Self, PropError> {
        if is_ident(name) && !KEYWORDS.contains(&name) {
            Ok(Prop(name.to_string()))
        } else {
            Err(PropError(name.to_string()))
        }
    }

    /// The reserved proposition behind `false`.
    pub fn falsum() -> Self {
        Prop(FALSUM.to_string())
    }

    pub fn is_falsum(&self) -> bool {
        self.0 == FALSUM
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(Prop),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Know(AgentPattern, Box<Formula>),
}

impl Formula {
    /// # Panics
    /// If `name` is not a valid proposition name.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Prop::new(name).expect("valid proposition name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn know(g: AgentPattern, f: Formula) -> Formula {
        Formula::Know(g, Box::new(f))
    }

    /// `¬(¬a ∧ ¬b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `¬(a ∧ ¬b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    /// `a → b` and `b → a`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// `r ∧ ¬r` for the reserved proposition `r`.
    pub fn bot() -> Formula {
        let r = Formula::Atom(Prop::falsum());
        Formula::and(r.clone(), Formula::not(r))
    }

    pub fn top() -> Formula {
        Formula::not(Formula::bot())
    }

    /// `¬[G]⊥`.
    pub fn alive(g: AgentPattern) -> Formula {
        Formula::not(Formula::know(g, Formula::bot()))
    }

    /// Conjunction of `¬alive({B})` over the groups of `g`, in canonical
    /// group order; `⊤` for the empty pattern.
    pub fn dead(g: &AgentPattern) -> Formula {
        Formula::conj(
            g.groups()
                .iter()
                .map(|b| Formula::not(Formula::alive(AgentPattern::of(*b)))),
        )
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn disj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bot)
    }

    pub fn is_bot(&self) -> bool {
        match self {
            Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                (Formula::Atom(p), Formula::Not(q)) => {
                    p.is_falsum() && matches!(q.as_ref(), Formula::Atom(q) if q.is_falsum())
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Nesting depth of boxes.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Know(_, f) => 1 + f.modal_depth(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Know(_, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Propositions occurring in the formula, excluding the reserved one.
    pub fn props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                if !p.is_falsum() {
                    out.insert(p.clone());
                }
            }
        });
        out
    }

    /// Patterns indexing some box.
    pub fn patterns(&self) -> BTreeSet<AgentPattern> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Know(g, _) = f {
                out.insert(g.clone());
            }
        });
        out
    }

    /// Whether some box is indexed by the empty pattern.
    pub fn uses_empty_pattern(&self) -> bool {
        self.patterns().iter().any(AgentPattern::is_empty)
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(a) | Formula::Know(_, a) => a.visit(f),
            Formula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}
