//! Truth of formulas over any finite frame of worlds with pattern-indexed
//! indistinguishability.

use std::collections::HashMap;

use thiserror::Error;

use crate::agents::{AgentPattern, Universe};
use crate::formula::{Formula, Prop};
use crate::relation::Per;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("proposition {0:?} does not occur in the model")]
    UnknownProp(String),
}

/// A finite model: worlds, a relation per agent pattern, and a valuation.
pub trait Frame {
    fn universe(&self) -> &Universe;
    fn world_count(&self) -> usize;
    fn world_name(&self, w: usize) -> &str;
    /// Indistinguishability under `g`. The empty pattern relates every pair
    /// of worlds.
    fn relation(&self, g: &AgentPattern) -> Per;
    fn holds(&self, w: usize, p: &Prop) -> bool;
    /// Whether `p` is true somewhere or otherwise declared by the model.
    fn knows_prop(&self, p: &Prop) -> bool;

    fn world_index(&self, name: &str) -> Option<usize> {
        (0..self.world_count()).find(|&w| self.world_name(w) == name)
    }
}

/// Evaluates formulas on a frame, caching one relation per pattern.
///
/// Unknown propositions are false everywhere unless strict mode is on.
pub struct Evaluator<'a, F: Frame + ?Sized> {
    frame: &'a F,
    strict: bool,
    cache: HashMap<AgentPattern, Per>,
}

impl<'a, F: Frame + ?Sized> Evaluator<'a, F> {
    pub fn new(frame: &'a F) -> Self {
        Evaluator {
            frame,
            strict: false,
            cache: HashMap::new(),
        }
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn frame(&self) -> &'a F {
        self.frame
    }

    pub fn relation(&mut self, g: &AgentPattern) -> &Per {
        let frame = self.frame;
        self.cache
            .entry(g.clone())
            .or_insert_with(|| frame.relation(g))
    }

    /// Truth value at every world.
    pub fn truth_set(&mut self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        let n = self.frame.world_count();
        Ok(match f {
            Formula::Atom(p) => {
                if p.is_falsum() {
                    vec![false; n]
                } else {
                    if self.strict && !self.frame.knows_prop(p) {
                        return Err(EvalError::UnknownProp(p.to_string()));
                    }
                    (0..n).map(|w| self.frame.holds(w, p)).collect()
                }
            }
            Formula::Not(a) => self.truth_set(a)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let ta = self.truth_set(a)?;
                let tb = self.truth_set(b)?;
                ta.into_iter().zip(tb).map(|(x, y)| x && y).collect()
            }
            Formula::Know(g, a) => {
                let inner = self.truth_set(a)?;
                let rel = self.relation(g);
                let mut bad = vec![false; n];
                for w in 0..n {
                    if !inner[w] {
                        if let Some(c) = rel.class_of(w) {
                            bad[c as usize] = true;
                        }
                    }
                }
                (0..n)
                    .map(|w| rel.class_of(w).map_or(true, |c| !bad[c as usize]))
                    .collect()
            }
        })
    }

    pub fn eval(&mut self, w: usize, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.truth_set(f)?[w])
    }

    pub fn eval_named(&mut self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = self
            .frame
            .world_index(world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
        self.eval(w, f)
    }

    /// `Ok(None)` if `f` holds everywhere, else the first failing world.
    pub fn first_failure(&mut self, f: &Formula) -> Result<Option<usize>, EvalError> {
        Ok(self.truth_set(f)?.iter().position(|t| !t))
    }
}

/// Worlds where `f` holds.
pub fn truth_set<F: Frame + ?Sized>(frame: &F, f: &Formula) -> Result<Vec<bool>, EvalError> {
    Evaluator::new(frame).truth_set(f)
}

/// `Ok(None)` if `f` is valid on the frame, else the first failing world.
pub fn first_failure<F: Frame + ?Sized>(frame: &F, f: &Formula) -> Result<Option<usize>, EvalError> {
    Evaluator::new(frame).first_failure(f)
}

/// Worlds related to themselves under `g`.
pub fn alive_set<F: Frame + ?Sized>(frame: &F, g: &AgentPattern) -> Vec<bool> {
    frame.relation(g).field()
}
