//! Depth-bounded unravelling of Kripke frames into frames of histories.
//!
//! A history is a chain of steps `(w, U, v)` where `U` is a maximal pattern
//! relating `w` and `v`. Extending a history by one step is the arrow `→_G`
//! for every `G ⊆ U`, and `≈_G` is the symmetric-transitive closure of
//! `→_G`. Histories form a forest under extension, so the bounded frame is
//! exact on its interior: a path between two histories never leaves the
//! lengths of its endpoints.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet};
use crate::formula::Formula;
use crate::kripke::{check_frame, Level, PreModel, Relations};
use crate::relation::Per;
use crate::semantics::Frame;

/// Depth used when none is given.
pub const DEFAULT_DEPTH: usize = 3;

/// Cap on candidate maximal patterns in generated mode and on histories.
pub const UNRAVEL_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnravelError {
    #[error("unravelling depth must be at least 1")]
    ZeroDepth,
    #[error("input is not a kappa-model: {0} fails")]
    NotKappa(&'static str),
    #[error("unravelling exceeds the budget of {0} histories or patterns")]
    Budget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub from: usize,
    pub pattern: AgentPattern,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    pub steps: Vec<Step>,
}

impl History {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `ℓ(h)`.
    pub fn last(&self) -> usize {
        self.steps.last().expect("histories are non-empty").to
    }

    pub fn extend(&self, step: Step) -> History {
        let mut steps = self.steps.clone();
        steps.push(step);
        History { steps }
    }

    pub fn is_prefix_of(&self, other: &History) -> bool {
        other.steps.starts_with(&self.steps)
    }

    /// Steps chain and every pattern relates its endpoints.
    pub fn is_well_formed(&self, m: &PreModel) -> bool {
        !self.steps.is_empty()
            && self.steps.windows(2).all(|p| p[0].to == p[1].from)
            && self
                .steps
                .iter()
                .all(|s| m.relation(&s.pattern).related(s.from, s.to))
    }

    /// E.g. `(w1,[ab,a,b],w1)(w1,[a,b],w2)`.
    pub fn name(&self, m: &PreModel) -> String {
        self.steps
            .iter()
            .map(|s| {
                format!(
                    "({},{},{})",
                    m.worlds[s.from],
                    m.universe.fmt_pattern(&s.pattern),
                    m.worlds[s.to]
                )
            })
            .collect()
    }
}

/// `h →_G h2`: `h2` extends `h` by one step whose pattern contains `g`.
pub fn arrow(h: &History, h2: &History, g: &AgentPattern) -> bool {
    h2.len() == h.len() + 1
        && h.is_prefix_of(h2)
        && h2.steps.last().is_some_and(|s| s.from == h.last() && g.is_subset(&s.pattern))
}

/// Patterns that relate some pair and may be maximal for it.
fn candidates(m: &PreModel) -> Result<Vec<AgentPattern>, UnravelError> {
    match &m.relations {
        Relations::Explicit(map) => Ok(map.keys().cloned().collect()),
        Relations::Generated(edges) => {
            // A pattern relates w and v iff it sits below every label on
            // some connecting path, so maximal ones are intersections of
            // labels.
            let mut set: BTreeSet<AgentPattern> = edges.iter().map(|e| e.label.clone()).collect();
            let mut frontier: Vec<AgentPattern> = set.iter().cloned().collect();
            let labels = frontier.clone();
            while let Some(g) = frontier.pop() {
                for l in &labels {
                    let x = g.intersection(l);
                    if !x.is_empty() && set.insert(x.clone()) {
                        if set.len() > UNRAVEL_BUDGET {
                            return Err(UnravelError::Budget(UNRAVEL_BUDGET));
                        }
                        frontier.push(x);
                    }
                }
            }
            Ok(set.into_iter().collect())
        }
    }
}

/// Maximal patterns relating each ordered pair of worlds.
pub struct MaximalPatterns {
    table: HashMap<(usize, usize), Vec<AgentPattern>>,
}

impl MaximalPatterns {
    pub fn new(m: &PreModel) -> Result<Self, UnravelError> {
        let cands = candidates(m)?;
        let rels: Vec<Per> = cands.iter().map(|g| m.relation(g)).collect();
        let mut table: HashMap<(usize, usize), Vec<AgentPattern>> = HashMap::new();
        let n = m.len();
        for w in 0..n {
            for v in 0..n {
                let relating: Vec<&AgentPattern> = cands
                    .iter()
                    .zip(&rels)
                    .filter(|(_, r)| r.related(w, v))
                    .map(|(g, _)| g)
                    .collect();
                let maximal: Vec<AgentPattern> = relating
                    .iter()
                    .filter(|g| !relating.iter().any(|h| h != *g && g.is_subset(h)))
                    .map(|g| (*g).clone())
                    .collect();
                if !maximal.is_empty() {
                    table.insert((w, v), maximal);
                }
            }
        }
        Ok(MaximalPatterns { table })
    }

    pub fn get(&self, w: usize, v: usize) -> &[AgentPattern] {
        self.table.get(&(w, v)).map_or(&[], Vec::as_slice)
    }

    /// All steps leaving `w`, ordered by target then pattern.
    pub fn steps_from(&self, w: usize, n: usize) -> Vec<Step> {
        (0..n)
            .flat_map(|v| {
                self.get(w, v).iter().map(move |g| Step {
                    from: w,
                    pattern: g.clone(),
                    to: v,
                })
            })
            .collect()
    }
}

/// Maximal patterns relating `w` and `v`.
pub fn maximal_patterns(m: &PreModel, w: usize, v: usize) -> Result<Vec<AgentPattern>, UnravelError> {
    Ok(MaximalPatterns::new(m)?.get(w, v).to_vec())
}

/// All histories of at most `d` steps, shortest first, each level in
/// lexicographic step order; prefixes precede their extensions.
pub fn histories(m: &PreModel, d: usize) -> Result<Vec<History>, UnravelError> {
    Ok(build(m, d)?.0)
}

fn build(m: &PreModel, d: usize) -> Result<(Vec<History>, Vec<Option<usize>>), UnravelError> {
    if d == 0 {
        return Err(UnravelError::ZeroDepth);
    }
    let n = m.len();
    let table = MaximalPatterns::new(m)?;
    let steps: Vec<Vec<Step>> = (0..n).map(|w| table.steps_from(w, n)).collect();
    let mut out: Vec<History> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    for w in 0..n {
        for s in &steps[w] {
            out.push(History {
                steps: vec![s.clone()],
            });
            parent.push(None);
        }
    }
    let mut level = 0..out.len();
    for _ in 1..d {
        let start = out.len();
        for i in level.clone() {
            let last = out[i].last();
            for s in &steps[last] {
                if out.len() >= UNRAVEL_BUDGET {
                    return Err(UnravelError::Budget(UNRAVEL_BUDGET));
                }
                let h = out[i].extend(s.clone());
                out.push(h);
                parent.push(Some(i));
            }
        }
        level = start..out.len();
    }
    Ok((out, parent))
}

/// A bounded unravelled model together with its history structure.
#[derive(Debug, Clone)]
pub struct Unravelled {
    /// Generated-mode model over histories: one edge from each history to
    /// each of its one-step extensions, under the extending step's pattern.
    pub model: PreModel,
    pub histories: Vec<History>,
    pub parent: Vec<Option<usize>>,
    pub depth: usize,
}

impl Unravelled {
    /// `ℓ` as a world map into the source model.
    pub fn last_map(&self) -> Vec<usize> {
        self.histories.iter().map(History::last).collect()
    }

    /// Histories with fewer than `depth` steps.
    pub fn interior(&self) -> Vec<bool> {
        self.model
            .interior
            .clone()
            .unwrap_or_else(|| vec![true; self.histories.len()])
    }
}

/// `U(M)` bounded at depth `d`.
pub fn unravel_model(m: &PreModel, d: usize) -> Result<Unravelled, UnravelError> {
    if d == 0 {
        return Err(UnravelError::ZeroDepth);
    }
    let report = check_frame(m, Level::Kappa);
    if let Some(v) = report.first_failure() {
        return Err(UnravelError::NotKappa(v.property.name()));
    }
    let (hist, parent) = build(m, d)?;
    let names: Vec<String> = hist.iter().map(|h| h.name(m)).collect();
    let edges = hist.iter().enumerate().filter_map(|(i, h)| {
        parent[i].map(|p| (p, i, h.steps.last().expect("non-empty").pattern.clone()))
    });
    let valuation = hist.iter().map(|h| m.valuation[h.last()].clone()).collect();
    let mut model = PreModel::generated(m.universe.clone(), names, edges, valuation)
        .map_err(|_| UnravelError::Budget(UNRAVEL_BUDGET))?;
    model.interior = Some(hist.iter().map(|h| h.len() < d).collect());
    Ok(Unravelled {
        model,
        histories: hist,
        parent,
        depth: d,
    })
}

/// Patterns over the agent sets occurring in either model's relations; all
/// combinations when there are at most `MAX_GROUPS` such sets, otherwise the
/// supports with their downsets and singleton patterns.
pub fn joint_patterns(models: &[&PreModel]) -> Vec<AgentPattern> {
    const MAX_GROUPS: usize = 12;
    let mut support: BTreeSet<AgentPattern> = BTreeSet::new();
    for m in models {
        for g in m.support() {
            support.insert(g.downset());
            support.insert(g);
        }
    }
    let groups: Vec<AgentSet> = support
        .iter()
        .flat_map(|g| g.groups().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if groups.len() <= MAX_GROUPS {
        (1u32..1 << groups.len())
            .map(|bits| {
                AgentPattern::new(
                    groups
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| bits & (1 << i) != 0)
                        .map(|(_, b)| *b),
                )
            })
            .collect()
    } else {
        support.extend(groups.into_iter().map(AgentPattern::of));
        support.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("world map is not total: expected {expected} entries, got {got}")]
    NotTotal { expected: usize, got: usize },
    #[error("world map sends world {0} outside the target")]
    OutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BisimViolation {
    /// `w` and `f(w)` disagree on a proposition.
    Atom { w: usize },
    /// `w ∼_G v` but not `f(w) ∼_G f(v)`.
    Forth { w: usize, v: usize, pattern: AgentPattern },
    /// `f(w) ∼_G target` but no `v ∼_G w` has `f(v) = target`.
    Back { w: usize, target: usize, pattern: AgentPattern },
}

/// Checks that `f` is a functional bisimulation from `m` to `n` for every
/// pattern in `patterns`. Back is checked only at worlds marked in
/// `back_scope` when given.
pub fn check_functional_bisim(
    m: &PreModel,
    n: &PreModel,
    f: &[usize],
    patterns: &[AgentPattern],
    back_scope: Option<&[bool]>,
) -> Result<Option<BisimViolation>, BisimError> {
    if f.len() != m.len() {
        return Err(BisimError::NotTotal {
            expected: m.len(),
            got: f.len(),
        });
    }
    if let Some(w) = f.iter().position(|&t| t >= n.len()) {
        return Err(BisimError::OutOfRange(w));
    }
    if let Some(w) = (0..m.len()).find(|&w| m.valuation[w] != n.valuation[f[w]]) {
        return Ok(Some(BisimViolation::Atom { w }));
    }
    for g in patterns {
        let rm = m.relation(g);
        let rn = n.relation(g);
        for class in rm.classes() {
            let w = class[0];
            for &v in &class {
                if !rn.related(f[w], f[v]) {
                    return Ok(Some(BisimViolation::Forth {
                        w,
                        v,
                        pattern: g.clone(),
                    }));
                }
            }
        }
        let classes = rm.classes();
        let images: Vec<BTreeSet<usize>> = classes
            .iter()
            .map(|c| c.iter().map(|&v| f[v]).collect())
            .collect();
        for w in 0..m.len() {
            if back_scope.is_some_and(|s| !s[w]) {
                continue;
            }
            let reached = rm.class_of(w).map(|c| &images[c as usize]);
            for target in rn.class_members(f[w]) {
                if !reached.is_some_and(|r| r.contains(&target)) {
                    return Ok(Some(BisimViolation::Back {
                        w,
                        target,
                        pattern: g.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Where a history sits in the unbounded unravelling, as far as formulas of
/// modal depth at most `depth` can tell.
///
/// For each pattern, `tops` records the highest ancestor reachable by steps
/// whose patterns contain it; the class of the history under that pattern
/// is that ancestor together with its descendants along such steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Position {
    world: usize,
    depth: usize,
    tops: Vec<Top>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Top {
    Here,
    Above(Rc<Position>),
}

impl Position {
    fn root(world: usize, depth: usize, patterns: usize) -> Rc<Position> {
        let tops = if depth == 0 { Vec::new() } else { vec![Top::Here; patterns] };
        Rc::new(Position { world, depth, tops })
    }

    fn truncate(self: &Rc<Self>, depth: usize) -> Rc<Position> {
        if depth == self.depth {
            return self.clone();
        }
        let tops = if depth == 0 {
            Vec::new()
        } else {
            self.tops
                .iter()
                .map(|t| match t {
                    Top::Here => Top::Here,
                    Top::Above(p) => Top::Above(p.truncate(depth - 1)),
                })
                .collect()
        };
        Rc::new(Position {
            world: self.world,
            depth,
            tops,
        })
    }

    fn extend(self: &Rc<Self>, step: &Step, patterns: &[AgentPattern]) -> Rc<Position> {
        let tops = self
            .tops
            .iter()
            .zip(patterns)
            .map(|(t, g)| {
                if !g.is_subset(&step.pattern) {
                    Top::Here
                } else {
                    match t {
                        Top::Above(p) => Top::Above(p.clone()),
                        Top::Here => Top::Above(self.truncate(self.depth - 1)),
                    }
                }
            })
            .collect();
        Rc::new(Position {
            world: step.to,
            depth: self.depth,
            tops,
        })
    }
}

/// Truth of formulas at histories of the unbounded unravelling `U(M)`.
///
/// Every class of `U(M)` is infinite, but the truth of a formula of modal
/// depth `k` at a history depends only on its last world and, for each
/// pattern, on the same data one level up at the top of its class. Classes
/// are explored over those finitely many positions, so no frontier is
/// involved.
pub struct UnboundedTruth<'a> {
    m: &'a PreModel,
    steps: Vec<Vec<Step>>,
    patterns: Vec<AgentPattern>,
    depth: usize,
    memo: HashMap<(Rc<Position>, Formula), bool>,
}

impl<'a> UnboundedTruth<'a> {
    /// Prepared for formulas of modal depth at most `depth` whose boxes use
    /// only `patterns`.
    pub fn new(m: &'a PreModel, patterns: &[AgentPattern], depth: usize) -> Result<Self, UnravelError> {
        let max = MaximalPatterns::new(m)?;
        let steps = (0..m.len()).map(|w| max.steps_from(w, m.len())).collect();
        Ok(UnboundedTruth {
            m,
            steps,
            patterns: patterns.to_vec(),
            depth,
            memo: HashMap::new(),
        })
    }

    fn position(&self, h: &History) -> Rc<Position> {
        let first = &h.steps[0];
        let mut pos = Position::root(first.to, self.depth, self.patterns.len());
        for step in &h.steps[1..] {
            pos = pos.extend(step, &self.patterns);
        }
        pos
    }

    /// `None` when the formula is too deep or boxes an unprepared pattern.
    pub fn eval(&mut self, h: &History, f: &Formula) -> Option<bool> {
        if f.modal_depth() > self.depth || !f.patterns().iter().all(|g| self.patterns.contains(g)) {
            return None;
        }
        let pos = self.position(h);
        Some(self.eval_at(&pos, f))
    }

    fn eval_at(&mut self, pos: &Rc<Position>, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.m.valuation[pos.world].contains(p),
            Formula::Not(a) => !self.eval_at(pos, a),
            Formula::And(a, b) => self.eval_at(pos, a) && self.eval_at(pos, b),
            Formula::Know(g, a) => {
                let key = (pos.clone(), f.clone());
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let v = self.eval_box(pos, g, a);
                self.memo.insert(key, v);
                v
            }
        }
    }

    fn eval_box(&mut self, pos: &Rc<Position>, g: &AgentPattern, a: &Formula) -> bool {
        let inner = pos.depth - 1;
        let gi = self.patterns.iter().position(|p| p == g).expect("checked in eval");
        let tops: Vec<Rc<Position>> = if g.is_empty() {
            // Every history is related to every other under the empty pattern.
            self.steps
                .iter()
                .flatten()
                .map(|s| Position::root(s.to, inner, self.patterns.len()))
                .collect()
        } else {
            let top = match &pos.tops[gi] {
                Top::Here => pos.truncate(inner),
                Top::Above(p) => p.clone(),
            };
            let has_child = self.steps[top.world].iter().any(|s| g.is_subset(&s.pattern));
            if !has_child {
                // Either the history has no related history at all, or it
                // hangs below `top` on such a step.
                debug_assert!(matches!(pos.tops[gi], Top::Here));
                return true;
            }
            vec![top]
        };
        let mut seen: HashSet<Rc<Position>> = tops.iter().cloned().collect();
        let mut queue: Vec<Rc<Position>> = tops;
        while let Some(x) = queue.pop() {
            if !self.eval_at(&x, a) {
                return false;
            }
            let world = x.world;
            for i in 0..self.steps[world].len() {
                let step = &self.steps[world][i];
                if g.is_subset(&step.pattern) {
                    let child = x.extend(step, &self.patterns);
                    if seen.insert(child.clone()) {
                        queue.push(child);
                    }
                }
            }
        }
        true
    }
}

/// A related interior pair without a common prefix reaching both along
/// `→_G` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixViolation {
    pub h1: usize,
    pub h2: usize,
    pub pattern: AgentPattern,
}

/// For every pattern and every `≈_G`-related pair of interior histories,
/// recovers the common prefix by walking up `→_G` steps from both ends.
pub fn check_common_prefix(u: &Unravelled, patterns: &[AgentPattern]) -> Option<PrefixViolation> {
    let interior = u.interior();
    for g in patterns {
        let rel = u.model.relation(g);
        // Highest ancestor reachable by walking up steps whose pattern
        // contains g.
        let top = |mut h: usize| {
            while let Some(p) = u.parent[h] {
                let step = u.histories[h].steps.last().expect("non-empty");
                if !g.is_subset(&step.pattern) {
                    break;
                }
                h = p;
            }
            h
        };
        let mut seen: HashMap<u32, (usize, usize)> = HashMap::new();
        for h in (0..u.histories.len()).filter(|&h| interior[h]) {
            let Some(c) = rel.class_of(h) else { continue };
            let t = top(h);
            match seen.get(&c) {
                None => {
                    seen.insert(c, (h, t));
                }
                Some(&(first, ft)) => {
                    let common = ft == t && u.histories[t].is_prefix_of(&u.histories[h]);
                    if !common {
                        return Some(PrefixViolation {
                            h1: first,
                            h2: h,
                            pattern: g.clone(),
                        });
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::Universe;
    use crate::kripke::check_delta_within;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("w{i}")).collect()
    }

    fn fig3() -> PreModel {
        let u = Universe::letters(2);
        let p = |s: &str| u.parse_pattern(s).unwrap();
        let edges = vec![
            (0, 1, p("a,b")),
            (1, 2, p("b")),
            (0, 2, p("b")),
            (0, 0, p("ab")),
            (1, 1, p("ab")),
            (2, 2, p("ab")),
        ];
        PreModel::generated(u.clone(), names(3), edges, vec![]).unwrap()
    }

    fn nostd() -> PreModel {
        let u = Universe::letters(2);
        let p = |s: &str| u.parse_pattern(s).unwrap();
        let edges = vec![(0, 1, p("a")), (0, 1, p("b")), (0, 0, p("ab")), (1, 1, p("ab"))];
        PreModel::generated(u.clone(), names(2), edges, vec![]).unwrap()
    }

    #[test]
    fn maximal_patterns_of_fig3() {
        let m = fig3();
        let p = |s: &str| m.universe.parse_pattern(s).unwrap();
        assert_eq!(maximal_patterns(&m, 0, 1).unwrap(), vec![p("a,b")]);
        assert_eq!(maximal_patterns(&m, 0, 0).unwrap(), vec![p("ab,a,b")]);
        assert_eq!(maximal_patterns(&m, 1, 2).unwrap(), vec![p("b")]);
        let h = histories(&m, 1).unwrap();
        assert!(h.iter().all(|h| h.len() == 1));
        let step = |w, g: &str, v| History {
            steps: vec![Step {
                from: w,
                pattern: p(g),
                to: v,
            }],
        };
        assert!(h.contains(&step(0, "a,b", 1)));
        assert!(h.contains(&step(0, "ab,a,b", 0)));
        assert!(!h.contains(&step(0, "a", 1)));
        // Three self-steps, two steps out of every world.
        assert_eq!(h.len(), 9);
        assert_eq!(h[0].name(&m), "(w1,[ab,a,b],w1)");
    }

    #[test]
    fn two_maximal_patterns_for_one_pair() {
        let m = nostd();
        let p = |s: &str| m.universe.parse_pattern(s).unwrap();
        assert_eq!(maximal_patterns(&m, 0, 1).unwrap(), vec![p("a"), p("b")]);
    }

    #[test]
    fn empty_relations_have_no_histories() {
        let u = Universe::letters(2);
        let m = PreModel::generated(u, names(2), [], vec![]).unwrap();
        assert!(histories(&m, 2).unwrap().is_empty());
        assert_eq!(histories(&m, 0), Err(UnravelError::ZeroDepth));
    }

    #[test]
    fn arrows() {
        let m = fig3();
        let p = |s: &str| m.universe.parse_pattern(s).unwrap();
        let h = History {
            steps: vec![Step {
                from: 0,
                pattern: p("ab,a,b"),
                to: 0,
            }],
        };
        let ext = |g: &str, v| h.extend(Step {
            from: 0,
            pattern: p(g),
            to: v,
        });
        assert!(arrow(&h, &ext("a,b", 1), &p("a")));
        assert!(!arrow(&h, &ext("a", 1), &p("a,b")));
        assert!(!arrow(&ext("a", 1), &h, &p("a")));
    }

    #[test]
    fn unravelling_restores_d_and_is_bisimilar() {
        for (m, d) in [(fig3(), 2), (nostd(), 3)] {
            let u = unravel_model(&m, d).unwrap();
            let interior = u.interior();
            assert!(interior.iter().any(|&i| i));
            assert_eq!(check_delta_within(&u.model, &interior), None);
            let pats = joint_patterns(&[&u.model, &m]);
            let f = u.last_map();
            assert_eq!(
                check_functional_bisim(&u.model, &m, &f, &pats, Some(&interior)).unwrap(),
                None
            );
            assert_eq!(check_common_prefix(&u, &pats), None);
        }
        let u = unravel_model(&fig3(), 1).unwrap();
        assert!(u.interior().iter().all(|&i| !i));
    }

    #[test]
    fn bisim_violations() {
        let m = fig3();
        let id: Vec<usize> = (0..3).collect();
        let pats = joint_patterns(&[&m]);
        assert_eq!(check_functional_bisim(&m, &m, &id, &pats, None).unwrap(), None);
        let mut v = m.clone();
        v.valuation[1].insert(crate::formula::Prop::new("p").unwrap());
        let collapse = vec![0, 0, 2];
        assert_eq!(
            check_functional_bisim(&v, &v, &collapse, &pats, None).unwrap(),
            Some(BisimViolation::Atom { w: 1 })
        );
        assert!(check_functional_bisim(&m, &m, &[0], &pats, None).is_err());
    }
}
