//! Kripke pre-models with one relation per agent pattern.
//!
//! Relations come in two storage modes. Explicit models list pairs per
//! pattern; the listed relation (after symmetric-transitive closure) is the
//! whole relation and unlisted patterns relate nothing. Generated models list
//! generator edges, each under a pattern `H`; an edge contributes to `∼_G`
//! exactly when `G` is contained in the downward closure of `H`, and `∼_G` is
//! the symmetric-transitive closure of the contributing edges. That is the
//! least family closed under inclusion reversal (`∼_H ⊆ ∼_G` for `G ⊆ H`) and
//! under adding groups below existing ones, computed lazily per pattern.
//!
//! In both modes the empty pattern relates every pair of worlds.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, PatternSpace, Universe};
use crate::formula::Prop;
use crate::relation::Per;
use crate::semantics::Frame;

/// Cap on the number of patterns [`close_relations`] may materialise.
pub const CLOSURE_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("invalid or duplicate world name {0:?}")]
    BadWorld(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldIndex(usize),
    #[error("relations cannot be listed under the empty pattern")]
    EmptyPattern,
    #[error("pattern mentions agents outside the universe")]
    ForeignAgents,
    #[error("closing the relations would need more than {0} patterns")]
    Budget(usize),
    #[error("world order is not a permutation of the worlds")]
    BadOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorEdge {
    pub from: usize,
    pub to: usize,
    pub pattern: AgentPattern,
    /// Downward closure of `pattern`: the edge belongs to `∼_G` iff
    /// `G ⊆ label`.
    pub label: AgentPattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relations {
    Explicit(BTreeMap<AgentPattern, Per>),
    Generated(Vec<GeneratorEdge>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreModel {
    pub universe: Universe,
    pub worlds: Vec<String>,
    pub relations: Relations,
    pub valuation: Vec<BTreeSet<Prop>>,
    /// Worlds away from the frontier of a bounded construction, when the
    /// model is one.
    pub interior: Option<Vec<bool>>,
}

fn check_worlds(worlds: &[String]) -> Result<(), KripkeError> {
    if worlds.is_empty() {
        return Err(KripkeError::NoWorlds);
    }
    for (i, w) in worlds.iter().enumerate() {
        if w.is_empty() || worlds[..i].contains(w) {
            return Err(KripkeError::BadWorld(w.clone()));
        }
    }
    Ok(())
}

fn check_pattern(u: &Universe, g: &AgentPattern) -> Result<(), KripkeError> {
    if g.is_empty() {
        return Err(KripkeError::EmptyPattern);
    }
    if !g.agents().is_subset(u.full()) {
        return Err(KripkeError::ForeignAgents);
    }
    Ok(())
}

impl PreModel {
    /// A model given by generator edges `(from, to, pattern)`.
    pub fn generated(
        universe: Universe,
        worlds: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, AgentPattern)>,
        valuation: Vec<BTreeSet<Prop>>,
    ) -> Result<Self, KripkeError> {
        check_worlds(&worlds)?;
        let n = worlds.len();
        let mut out = Vec::new();
        for (from, to, pattern) in edges {
            check_pattern(&universe, &pattern)?;
            if from >= n || to >= n {
                return Err(KripkeError::WorldIndex(from.max(to)));
            }
            let (from, to) = (from.min(to), from.max(to));
            let label = pattern.downset();
            let edge = GeneratorEdge {
                from,
                to,
                pattern,
                label,
            };
            if !out.contains(&edge) {
                out.push(edge);
            }
        }
        let mut valuation = valuation;
        valuation.resize(n, BTreeSet::new());
        Ok(PreModel {
            universe,
            worlds,
            relations: Relations::Generated(out),
            valuation,
            interior: None,
        })
    }

    /// A model given by pairs per pattern; each list is closed under symmetry
    /// and transitivity.
    pub fn explicit(
        universe: Universe,
        worlds: Vec<String>,
        pairs: impl IntoIterator<Item = (AgentPattern, Vec<(usize, usize)>)>,
        valuation: Vec<BTreeSet<Prop>>,
    ) -> Result<Self, KripkeError> {
        check_worlds(&worlds)?;
        let n = worlds.len();
        let mut lists: BTreeMap<AgentPattern, Vec<(usize, usize)>> = BTreeMap::new();
        for (g, ps) in pairs {
            check_pattern(&universe, &g)?;
            if let Some(&(a, b)) = ps.iter().find(|(a, b)| *a >= n || *b >= n) {
                return Err(KripkeError::WorldIndex(a.max(b)));
            }
            lists.entry(g).or_default().extend(ps);
        }
        let map = lists
            .into_iter()
            .map(|(g, ps)| (g, Per::from_pairs(n, ps)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        let mut valuation = valuation;
        valuation.resize(n, BTreeSet::new());
        Ok(PreModel {
            universe,
            worlds,
            relations: Relations::Explicit(map),
            valuation,
            interior: None,
        })
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.relations, Relations::Generated(_))
    }

    pub fn index(&self, name: &str) -> Result<usize, KripkeError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    pub fn props(&self) -> BTreeSet<Prop> {
        self.valuation.iter().flatten().cloned().collect()
    }

    /// Patterns with a non-empty stored relation (explicit mode) or with a
    /// generator edge (generated mode).
    pub fn support(&self) -> BTreeSet<AgentPattern> {
        match &self.relations {
            Relations::Explicit(map) => map.keys().cloned().collect(),
            Relations::Generated(edges) => edges.iter().map(|e| e.pattern.clone()).collect(),
        }
    }

    /// `w̄`: agent sets occurring in some pattern alive at `w`.
    pub fn bar(&self, w: usize) -> AgentPattern {
        match &self.relations {
            Relations::Explicit(map) => map
                .iter()
                .filter(|(_, r)| r.in_field(w))
                .fold(AgentPattern::empty(), |acc, (g, _)| acc.union(g)),
            // Any pattern alive at w sits below the label of an edge at w,
            // and every such label is alive there.
            Relations::Generated(edges) => edges
                .iter()
                .filter(|e| e.from == w || e.to == w)
                .fold(AgentPattern::empty(), |acc, e| acc.union(&e.label)),
        }
    }

    /// `w ≡ v`: equal `w̄` and related under it.
    pub fn equiv(&self, w: usize, v: usize) -> bool {
        let bw = self.bar(w);
        bw == self.bar(v) && self.relation(&bw).related(w, v)
    }

    /// Worlds related to themselves under `g`.
    pub fn alive_set(&self, g: &AgentPattern) -> Vec<bool> {
        self.relation(g).field()
    }

    /// The same model with worlds listed in `order` (old indices).
    pub fn permuted(&self, order: &[usize]) -> Result<PreModel, KripkeError> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &o in order {
            if o >= n || std::mem::replace(&mut seen[o], true) {
                return Err(KripkeError::BadOrder);
            }
        }
        if order.len() != n {
            return Err(KripkeError::BadOrder);
        }
        let mut new_of = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let worlds = order.iter().map(|&o| self.worlds[o].clone()).collect();
        let valuation = order.iter().map(|&o| self.valuation[o].clone()).collect();
        let mut out = match &self.relations {
            Relations::Generated(edges) => PreModel::generated(
                self.universe.clone(),
                worlds,
                edges
                    .iter()
                    .map(|e| (new_of[e.from], new_of[e.to], e.pattern.clone())),
                valuation,
            )?,
            Relations::Explicit(map) => PreModel::explicit(
                self.universe.clone(),
                worlds,
                map.iter().map(|(g, r)| {
                    let ps = r.pairs().into_iter().map(|(a, b)| (new_of[a], new_of[b])).collect();
                    (g.clone(), ps)
                }),
                valuation,
            )?,
        };
        out.interior = self
            .interior
            .as_ref()
            .map(|int| order.iter().map(|&o| int[o]).collect());
        Ok(out)
    }
}

impl Frame for PreModel {
    fn universe(&self) -> &Universe {
        &self.universe
    }

    fn world_count(&self) -> usize {
        self.worlds.len()
    }

    fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    fn relation(&self, g: &AgentPattern) -> Per {
        let n = self.worlds.len();
        if g.is_empty() {
            return Per::universal(n);
        }
        match &self.relations {
            Relations::Explicit(map) => map.get(g).cloned().unwrap_or_else(|| Per::empty(n)),
            Relations::Generated(edges) => Per::from_pairs(
                n,
                edges
                    .iter()
                    .filter(|e| g.is_subset(&e.label))
                    .map(|e| (e.from, e.to)),
            ),
        }
    }

    fn holds(&self, w: usize, p: &Prop) -> bool {
        self.valuation[w].contains(p)
    }

    fn knows_prop(&self, p: &Prop) -> bool {
        self.valuation.iter().any(|v| v.contains(p))
    }
}

/// Materialises a generated model as an explicit one: every non-empty
/// pattern below some generator label gets its (non-empty) relation.
pub fn close_relations(m: &PreModel) -> Result<PreModel, KripkeError> {
    let edges = match &m.relations {
        Relations::Explicit(_) => return Ok(m.clone()),
        Relations::Generated(edges) => edges,
    };
    let mut patterns: BTreeSet<AgentPattern> = BTreeSet::new();
    let labels: BTreeSet<&AgentPattern> = edges.iter().map(|e| &e.label).collect();
    for label in labels {
        let k = label.len();
        if k >= 20 || patterns.len() + (1usize << k) > CLOSURE_BUDGET {
            return Err(KripkeError::Budget(CLOSURE_BUDGET));
        }
        for bits in 1u32..(1 << k) {
            patterns.insert(AgentPattern::new(
                (0..k)
                    .filter(|i| bits & (1 << i) != 0)
                    .map(|i| label.groups()[i]),
            ));
        }
    }
    let map = patterns
        .into_iter()
        .map(|g| {
            let r = m.relation(&g);
            (g, r)
        })
        .filter(|(_, r)| !r.is_empty())
        .collect();
    Ok(PreModel {
        relations: Relations::Explicit(map),
        ..m.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Kappa,
    Delta,
    Proper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Symmetry,
    Transitivity,
    K1,
    K2,
    K3,
    K4,
    NE,
    D,
    Proper,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Symmetry => "symmetry",
            Property::Transitivity => "transitivity",
            Property::K1 => "K1",
            Property::K2 => "K2",
            Property::K3 => "K3",
            Property::K4 => "K4",
            Property::NE => "NE",
            Property::D => "D",
            Property::Proper => "proper",
        }
    }
}

/// Worlds and patterns exhibiting a violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub worlds: Vec<usize>,
    pub patterns: Vec<AgentPattern>,
}

impl Witness {
    fn new(worlds: Vec<usize>, patterns: Vec<AgentPattern>) -> Self {
        Witness { worlds, patterns }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    /// `None` when the property holds.
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameReport {
    pub level: Level,
    /// Whether every non-empty pattern was examined (small universes) or
    /// only the model's support.
    pub exhaustive: bool,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl FrameReport {
    pub fn verdict(&self, p: Property) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.property == p)
    }

    pub fn holds(&self, p: Property) -> bool {
        self.verdict(p).is_some_and(Verdict::holds)
    }

    pub fn passes(&self) -> bool {
        self.verdicts.iter().all(Verdict::holds)
    }

    /// First failing property, in check order.
    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.holds())
    }

    pub fn is_kappa(&self) -> bool {
        [
            Property::Symmetry,
            Property::Transitivity,
            Property::K1,
            Property::K2,
            Property::K3,
            Property::K4,
            Property::NE,
        ]
        .iter()
        .all(|p| self.holds(*p))
    }

    pub fn render<'a>(&'a self, m: &'a PreModel) -> ReportShown<'a> {
        ReportShown(self, m)
    }
}

pub struct ReportShown<'a>(&'a FrameReport, &'a PreModel);

impl fmt::Display for ReportShown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, m) = (self.0, self.1);
        for v in &r.verdicts {
            match &v.witness {
                None => writeln!(f, "{:<12} ok", v.property.name())?,
                Some(w) => writeln!(
                    f,
                    "{:<12} FAILS at {}",
                    v.property.name(),
                    render_witness(m, w)
                )?,
            }
        }
        for w in &r.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn render_witness(m: &PreModel, w: &Witness) -> String {
    let worlds: Vec<&str> = w.worlds.iter().map(|&i| m.worlds[i].as_str()).collect();
    let mut s = format!("({})", worlds.join(","));
    for g in &w.patterns {
        s.push(' ');
        s.push_str(&m.universe.fmt_pattern(g));
    }
    s
}

/// Patterns examined by the frame checks, with their relations.
struct Domain {
    exhaustive: bool,
    patterns: Vec<AgentPattern>,
    rels: Vec<Per>,
    index: HashMap<AgentPattern, usize>,
}

impl Domain {
    fn new(m: &PreModel) -> (Self, Vec<String>) {
        let mut warnings = Vec::new();
        let (exhaustive, patterns): (bool, Vec<AgentPattern>) =
            match PatternSpace::new(m.universe.len()) {
                Some(space) => (true, space.codes().map(|c| space.decode(c)).collect()),
                None => {
                    warnings.push(format!(
                        "{} agents: pattern quantifiers range over the model's support only",
                        m.universe.len()
                    ));
                    let mut set: BTreeSet<AgentPattern> = m.support();
                    let groups: BTreeSet<AgentSet> =
                        set.iter().flat_map(|g| g.downset().groups().to_vec()).collect();
                    set.extend(groups.into_iter().map(AgentPattern::of));
                    (false, set.into_iter().collect())
                }
            };
        let rels = patterns.iter().map(|g| m.relation(g)).collect();
        let index = patterns
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        (
            Domain {
                exhaustive,
                patterns,
                rels,
                index,
            },
            warnings,
        )
    }

    fn rel(&self, m: &PreModel, g: &AgentPattern) -> Per {
        match self.index.get(g) {
            Some(&i) => self.rels[i].clone(),
            None => m.relation(g),
        }
    }

    fn alive(&self, m: &PreModel, g: &AgentPattern, w: usize) -> bool {
        match self.index.get(g) {
            Some(&i) => self.rels[i].in_field(w),
            None => m.relation(g).in_field(w),
        }
    }
}

/// Largest number of alive patterns per world for which K1 is checked
/// pairwise when K3 fails.
const K1_PAIRWISE_CAP: usize = 4096;

/// Checks the frame conditions up to `level`, in order: symmetry,
/// transitivity, K1-K4, NE, then D, then properness.
pub fn check_frame(m: &PreModel, level: Level) -> FrameReport {
    let (dom, mut warnings) = Domain::new(m);
    let n = m.len();
    let mut verdicts = Vec::new();
    let mut push = |property, witness| verdicts.push(Verdict { property, witness });

    // Relations are stored as partial equivalences, so these two hold by
    // construction; they are reported for completeness.
    push(Property::Symmetry, None);
    push(Property::Transitivity, None);

    let k3 = check_k3(&dom);
    let alive_lists: Vec<Vec<usize>> = (0..n)
        .map(|w| (0..dom.patterns.len()).filter(|&i| dom.rels[i].in_field(w)).collect())
        .collect();
    let (k1, k1_warning) = check_k1(m, &dom, &alive_lists, k3.is_none());
    if let Some(wn) = k1_warning {
        warnings.push(wn);
    }
    push(Property::K1, k1);
    push(Property::K2, check_k2(m, &dom, &alive_lists));
    push(Property::K3, k3);
    push(Property::K4, check_k4(&dom));
    push(
        Property::NE,
        (0..n)
            .find(|&w| alive_lists[w].is_empty())
            .map(|w| Witness::new(vec![w], vec![])),
    );
    if level >= Level::Delta {
        push(Property::D, check_d(m, &dom, None));
    }
    if level >= Level::Proper {
        push(Property::Proper, check_proper(m));
    }
    FrameReport {
        level,
        exhaustive: dom.exhaustive,
        verdicts,
        warnings,
    }
}

fn check_k1(
    m: &PreModel,
    dom: &Domain,
    alive: &[Vec<usize>],
    downward_closed: bool,
) -> (Option<Witness>, Option<String>) {
    for (w, list) in alive.iter().enumerate() {
        if list.is_empty() {
            continue;
        }
        if downward_closed || list.len() > K1_PAIRWISE_CAP {
            // With alive patterns closed under subsets, union-closure reduces
            // to the union of everything alive being alive. Accumulating
            // that union keeps the running pattern alive, so the first
            // failure is a genuine witness.
            let mut acc = dom.patterns[list[0]].clone();
            for &i in &list[1..] {
                let g = &dom.patterns[i];
                let u = acc.union(g);
                if !dom.alive(m, &u, w) {
                    return (Some(Witness::new(vec![w], vec![acc, g.clone()])), None);
                }
                acc = u;
            }
            if !downward_closed {
                return (
                    None,
                    Some(format!(
                        "K1 checked by accumulation only at world {}",
                        m.worlds[w]
                    )),
                );
            }
        } else {
            for (a, &i) in list.iter().enumerate() {
                for &j in &list[a + 1..] {
                    let u = dom.patterns[i].union(&dom.patterns[j]);
                    if !dom.alive(m, &u, w) {
                        return (
                            Some(Witness::new(
                                vec![w],
                                vec![dom.patterns[i].clone(), dom.patterns[j].clone()],
                            )),
                            None,
                        );
                    }
                }
            }
        }
    }
    (None, None)
}

fn check_k2(m: &PreModel, dom: &Domain, alive: &[Vec<usize>]) -> Option<Witness> {
    let mut single_alive: HashMap<(AgentSet, usize), bool> = HashMap::new();
    for (w, list) in alive.iter().enumerate() {
        for &i in list {
            let g = &dom.patterns[i];
            let groups = g.groups();
            for (x, &a) in groups.iter().enumerate() {
                for &b in &groups[x + 1..] {
                    let ab = a.union(b);
                    let ok = *single_alive
                        .entry((ab, w))
                        .or_insert_with(|| dom.alive(m, &AgentPattern::of(ab), w));
                    if !ok {
                        return Some(Witness::new(vec![w], vec![g.clone(), AgentPattern::of(ab)]));
                    }
                }
            }
        }
    }
    None
}

fn check_k3(dom: &Domain) -> Option<Witness> {
    let check = |hi: usize, lo: usize| {
        dom.rels[hi].subset_witness(&dom.rels[lo]).map(|(w, v)| {
            Witness::new(vec![w, v], vec![dom.patterns[hi].clone(), dom.patterns[lo].clone()])
        })
    };
    for (hi, h) in dom.patterns.iter().enumerate() {
        if dom.exhaustive {
            // Covering pairs suffice: every inclusion is a chain of them.
            for &b in h.groups() {
                let g = h.without(b);
                if let Some(&lo) = dom.index.get(&g) {
                    if let Some(w) = check(hi, lo) {
                        return Some(w);
                    }
                }
            }
        } else {
            for (lo, g) in dom.patterns.iter().enumerate() {
                if lo != hi && g.is_subset(h) {
                    if let Some(w) = check(hi, lo) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn check_k4(dom: &Domain) -> Option<Witness> {
    for (i, g) in dom.patterns.iter().enumerate() {
        for b in g.downset().groups() {
            if g.contains(*b) {
                continue;
            }
            let gb = g.with(*b);
            if let Some(&j) = dom.index.get(&gb) {
                if let Some((w, v)) = dom.rels[i].subset_witness(&dom.rels[j]) {
                    return Some(Witness::new(vec![w, v], vec![g.clone(), gb]));
                }
            }
        }
    }
    None
}

/// `∼_G = ⋂_{B∈G} ∼_{{B}}` for every examined pattern with two or more
/// groups, restricted to pairs inside `scope` when given.
fn check_d(m: &PreModel, dom: &Domain, scope: Option<&[bool]>) -> Option<Witness> {
    let mut singles: HashMap<AgentSet, Per> = HashMap::new();
    let mut order: Vec<usize> = (0..dom.patterns.len()).collect();
    if dom.exhaustive {
        // Code order lists patterns by their encoding, which puts small
        // patterns over few agents first; witnesses are then minimal.
        let space = PatternSpace::new(m.universe.len()).expect("exhaustive domain");
        order.sort_by_key(|&i| space.encode(&dom.patterns[i]));
    }
    for i in order {
        let g = &dom.patterns[i];
        if g.len() < 2 {
            continue;
        }
        let mut meet: Option<Per> = None;
        for &b in g.groups() {
            let r = singles
                .entry(b)
                .or_insert_with(|| dom.rel(m, &AgentPattern::of(b)))
                .clone();
            meet = Some(match meet {
                None => r,
                Some(acc) => acc.intersect(&r),
            });
        }
        let meet = meet.expect("pattern has groups");
        let (rel, meet) = match scope {
            Some(s) => (dom.rels[i].restrict(s), meet.restrict(s)),
            None => (dom.rels[i].clone(), meet),
        };
        if rel != meet {
            let (w, v) = rel.first_difference(&meet).expect("relations differ");
            return Some(Witness::new(vec![w, v], vec![g.clone()]));
        }
    }
    None
}

fn check_proper(m: &PreModel) -> Option<Witness> {
    let n = m.len();
    let bars: Vec<AgentPattern> = (0..n).map(|w| m.bar(w)).collect();
    let mut rels: HashMap<&AgentPattern, Per> = HashMap::new();
    for w in 0..n {
        for v in w + 1..n {
            if bars[w] == bars[v] {
                let r = rels.entry(&bars[w]).or_insert_with(|| m.relation(&bars[w]));
                if r.related(w, v) {
                    return Some(Witness::new(vec![w, v], vec![bars[w].clone()]));
                }
            }
        }
    }
    None
}

/// D restricted to pairs of worlds inside `scope`.
pub fn check_delta_within(m: &PreModel, scope: &[bool]) -> Option<Witness> {
    let (dom, _) = Domain::new(m);
    check_d(m, &dom, Some(scope))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("input is not a delta-model: {property} fails")]
    NotDelta { property: &'static str, witness: Witness },
    #[error("equivalent worlds disagree on a proposition")]
    IllDefined { w: usize, v: usize, prop: Prop },
    #[error("lifted relation depends on the choice of representatives")]
    RepresentativeDependent { pattern: AgentPattern, w: usize, v: usize },
}

/// Result of collapsing `≡`-classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub model: PreModel,
    /// Class index of every input world.
    pub class_of: Vec<usize>,
}

/// `M^ρ`: worlds are `≡`-classes, named by their least member.
pub fn quotient(m: &PreModel) -> Result<Quotient, QuotientError> {
    let report = check_frame(m, Level::Delta);
    if let Some(v) = report.first_failure() {
        return Err(QuotientError::NotDelta {
            property: v.property.name(),
            witness: v.witness.clone().expect("failing verdict has a witness"),
        });
    }
    let n = m.len();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for w in 0..n {
        if class_of[w] != usize::MAX {
            continue;
        }
        class_of[w] = reps.len();
        for v in w + 1..n {
            if class_of[v] == usize::MAX && m.equiv(w, v) {
                class_of[v] = reps.len();
            }
        }
        reps.push(w);
    }
    for v in 0..n {
        let w = reps[class_of[v]];
        if m.valuation[w] != m.valuation[v] {
            let prop = m.valuation[w]
                .symmetric_difference(&m.valuation[v])
                .next()
                .expect("valuations differ")
                .clone();
            return Err(QuotientError::IllDefined { w, v, prop });
        }
    }
    let k = reps.len();
    let worlds: Vec<String> = reps.iter().map(|&w| m.worlds[w].clone()).collect();
    let valuation: Vec<BTreeSet<Prop>> = reps.iter().map(|&w| m.valuation[w].clone()).collect();
    let model = match &m.relations {
        Relations::Generated(edges) => PreModel::generated(
            m.universe.clone(),
            worlds,
            edges
                .iter()
                .map(|e| (class_of[e.from], class_of[e.to], e.pattern.clone())),
            valuation,
        ),
        Relations::Explicit(map) => PreModel::explicit(
            m.universe.clone(),
            worlds,
            map.iter().map(|(g, r)| {
                let ps = r
                    .pairs()
                    .into_iter()
                    .map(|(a, b)| (class_of[a], class_of[b]))
                    .collect();
                (g.clone(), ps)
            }),
            valuation,
        ),
    }
    .expect("lifting preserves well-formedness");
    // The lifted model must relate classes exactly when some members are
    // related, for every examined pattern.
    let (dom, _) = Domain::new(m);
    for (g, r) in dom.patterns.iter().zip(&dom.rels) {
        let lifted = model.relation(g);
        let mut direct = vec![vec![false; k]; k];
        for (a, b) in r.pairs() {
            direct[class_of[a]][class_of[b]] = true;
            direct[class_of[b]][class_of[a]] = true;
        }
        for x in 0..k {
            for y in 0..k {
                if lifted.related(x, y) != direct[x][y] {
                    return Err(QuotientError::RepresentativeDependent {
                        pattern: g.clone(),
                        w: reps[x],
                        v: reps[y],
                    });
                }
            }
        }
    }
    Ok(Quotient { model, class_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn world_names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("w{i}")).collect()
    }

    fn pat(u: &Universe, s: &str) -> AgentPattern {
        u.parse_pattern(s).unwrap()
    }

    /// Two worlds related by `{a}` and by `{b}` separately, both fully
    /// alive.
    fn no_std() -> PreModel {
        let u = Universe::letters(2);
        let edges = vec![
            (0, 1, pat(&u, "a")),
            (0, 1, pat(&u, "b")),
            (0, 0, pat(&u, "ab")),
            (1, 1, pat(&u, "ab")),
        ];
        let mut val = vec![BTreeSet::new(); 2];
        val[0].insert(Prop::new("q").unwrap());
        PreModel::generated(u, world_names(2), edges, val).unwrap()
    }

    fn three_worlds() -> PreModel {
        let u = Universe::letters(2);
        let edges = vec![
            (0, 1, pat(&u, "a,b")),
            (1, 2, pat(&u, "b")),
            (0, 2, pat(&u, "b")),
            (0, 0, pat(&u, "ab")),
            (1, 1, pat(&u, "ab")),
            (2, 2, pat(&u, "ab")),
        ];
        PreModel::generated(u, world_names(3), edges, vec![]).unwrap()
    }

    fn improper() -> PreModel {
        let u = Universe::letters(2);
        let edges = vec![(0, 1, pat(&u, "ab")), (0, 0, pat(&u, "ab")), (1, 1, pat(&u, "ab"))];
        PreModel::generated(u, world_names(2), edges, vec![]).unwrap()
    }

    #[test]
    fn closure_of_single_generator() {
        let u = Universe::letters(2);
        let m = PreModel::generated(u.clone(), world_names(2), [(0, 1, pat(&u, "ab"))], vec![]).unwrap();
        let c = close_relations(&m).unwrap();
        let Relations::Explicit(map) = &c.relations else { panic!() };
        let keys: Vec<String> = map.keys().map(|g| u.fmt_pattern(g)).collect();
        let mut expected = vec!["[ab]", "[ab,a]", "[ab,b]", "[ab,a,b]", "[a]", "[b]", "[a,b]"];
        let mut got = keys.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        for g in map.keys() {
            assert!(c.relation(g).related(0, 1));
        }
        let empty = PreModel::generated(u, world_names(2), [], vec![]).unwrap();
        let Relations::Explicit(map) = close_relations(&empty).unwrap().relations else { panic!() };
        assert!(map.is_empty());
    }

    #[test]
    fn closure_preserves_relations() {
        let m = three_worlds();
        let c = close_relations(&m).unwrap();
        let space = PatternSpace::new(2).unwrap();
        for code in space.codes() {
            let g = space.decode(code);
            assert_eq!(m.relation(&g), c.relation(&g));
        }
        assert!(c.relation(&pat(&m.universe, "a")).related(0, 1));
        assert!(c.relation(&pat(&m.universe, "b")).related(0, 1));
    }

    #[test]
    fn classification_of_small_frames() {
        let r = check_frame(&no_std(), Level::Delta);
        assert!(r.is_kappa(), "{}", r.render(&no_std()));
        let d = r.verdict(Property::D).unwrap();
        let w = d.witness.as_ref().unwrap();
        assert_eq!(w.worlds, vec![0, 1]);
        assert_eq!(w.patterns, vec![pat(&no_std().universe, "a,b")]);

        let r = check_frame(&improper(), Level::Proper);
        assert!(r.is_kappa() && r.holds(Property::D));
        assert_eq!(r.verdict(Property::Proper).unwrap().witness.as_ref().unwrap().worlds, vec![0, 1]);

        let r = check_frame(&three_worlds(), Level::Proper);
        assert!(r.passes(), "{}", r.render(&three_worlds()));
        assert!(r.exhaustive);
    }

    #[test]
    fn k_conditions_detect_violations() {
        let u = Universe::letters(2);
        // {a} and {b} alive at w1 but not {a,b}: K1 fails.
        let m = PreModel::generated(
            u.clone(),
            world_names(1),
            [(0, 0, pat(&u, "a")), (0, 0, pat(&u, "b"))],
            vec![],
        )
        .unwrap();
        let r = check_frame(&m, Level::Kappa);
        assert!(!r.holds(Property::K1));
        assert!(!r.holds(Property::K2) || !r.holds(Property::K1));
        // A relation under [ab,a] alone breaks inclusion reversal; under [ab]
        // alone it is not propagated to [ab,a].
        let m = PreModel::explicit(u.clone(), world_names(1), [(pat(&u, "ab,a"), vec![(0, 0)])], vec![])
            .unwrap();
        let r = check_frame(&m, Level::Kappa);
        assert!(!r.holds(Property::K3));
        let m = PreModel::explicit(u.clone(), world_names(1), [(pat(&u, "ab"), vec![(0, 0)])], vec![])
            .unwrap();
        let r = check_frame(&m, Level::Kappa);
        assert!(r.holds(Property::K3) && !r.holds(Property::K4));
        // No alive pattern.
        let m = PreModel::generated(u, world_names(1), [], vec![]).unwrap();
        let r = check_frame(&m, Level::Kappa);
        assert_eq!(r.verdict(Property::NE).unwrap().witness.as_ref().unwrap().worlds, vec![0]);
    }

    #[test]
    fn bar_and_equiv() {
        let m = three_worlds();
        assert_eq!(m.bar(0), pat(&m.universe, "ab,a,b"));
        assert!(!m.equiv(0, 1));
        assert!(m.equiv(0, 0));
        let i = improper();
        assert!(i.equiv(0, 1));
        let u = Universe::letters(2);
        let lone = PreModel::generated(u.clone(), world_names(1), [(0, 0, pat(&u, "a"))], vec![]).unwrap();
        assert_eq!(lone.bar(0), pat(&u, "a"));
        assert_eq!(no_std().bar(0), pat(&u, "ab,a,b"));
    }

    #[test]
    fn alive_sets() {
        let m = three_worlds();
        assert_eq!(m.alive_set(&pat(&m.universe, "ab")), vec![true; 3]);
        let n = no_std();
        assert_eq!(n.alive_set(&pat(&n.universe, "ab")), vec![true, true]);
        let u = Universe::letters(2);
        let e = PreModel::generated(u.clone(), world_names(2), [], vec![]).unwrap();
        assert_eq!(e.alive_set(&pat(&u, "a")), vec![false, false]);
    }

    #[test]
    fn quotient_collapses_improper_pair() {
        let q = quotient(&improper()).unwrap();
        assert_eq!(q.model.worlds, vec!["w1"]);
        assert_eq!(q.class_of, vec![0, 0]);
        assert!(check_frame(&q.model, Level::Proper).passes());

        let mut bad = improper();
        bad.valuation[0].insert(Prop::new("p").unwrap());
        match quotient(&bad) {
            Err(QuotientError::IllDefined { w, v, prop }) => {
                assert_eq!((w, v, prop.as_str()), (0, 1, "p"));
            }
            other => panic!("{other:?}"),
        }

        let q = quotient(&three_worlds()).unwrap();
        assert_eq!(q.model.len(), 3);
        assert!(matches!(quotient(&no_std()), Err(QuotientError::NotDelta { property: "D", .. })));
    }

    #[test]
    fn permutation_relabels_worlds() {
        let m = three_worlds();
        let p = m.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.worlds, vec!["w3", "w1", "w2"]);
        let b = pat(&m.universe, "b");
        assert!(p.relation(&b).related(0, 1));
        assert!(m.permuted(&[0, 0, 1]).is_err());
    }
}
