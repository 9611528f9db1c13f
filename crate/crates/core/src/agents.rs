//! Agents, agent sets and agent patterns.
//!
//! Agent sets are bitmasks over the universe's agent list, so a universe holds
//! at most [`MAX_AGENTS`] agents. Patterns are kept sorted and deduplicated;
//! the canonical order puts larger groups first and breaks ties by the
//! position of their members in the universe, which is how patterns print
//! (`[ab,a,b]`).

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Hard cap on the number of agents in one universe.
pub const MAX_AGENTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("agent universe is empty")]
    Empty,
    #[error("too many agents ({0}, at most {MAX_AGENTS})")]
    TooMany(usize),
    #[error("invalid agent name {0:?}")]
    BadName(String),
    #[error("duplicate agent name {0:?}")]
    Duplicate(String),
}

/// A set of agents, as a bitmask over the universe's agent list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AgentSet(u16);

impl AgentSet {
    pub const EMPTY: AgentSet = AgentSet(0);

    pub fn from_bits(bits: u16) -> Self {
        AgentSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn single(agent: usize) -> Self {
        assert!(agent < MAX_AGENTS, "agent index out of range");
        AgentSet(1 << agent)
    }

    /// The set of the first `n` agents.
    pub fn first(n: usize) -> Self {
        assert!(n <= MAX_AGENTS, "agent count out of range");
        if n == MAX_AGENTS {
            AgentSet(u16::MAX)
        } else {
            AgentSet((1u16 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, agent: usize) -> bool {
        agent < MAX_AGENTS && self.0 & (1 << agent) != 0
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & other.0)
    }

    pub fn difference(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & !other.0)
    }

    /// Member indices in ascending order.
    pub fn agents(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_AGENTS).filter(move |i| bits & (1 << i) != 0)
    }

    /// All non-empty subsets, in ascending bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = AgentSet> {
        let full = self.0;
        (1..=full as u32)
            .map(|b| b as u16)
            .filter(move |b| b & !full == 0)
            .map(AgentSet)
    }
}

impl Ord for AgentSet {
    /// Larger sets first; equal sizes compare lexicographically by member
    /// index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        match other.len().cmp(&self.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for AgentSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.agents().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A set of non-empty agent sets.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AgentPattern {
    groups: SmallVec<[AgentSet; 8]>,
}

impl AgentPattern {
    pub fn empty() -> Self {
        AgentPattern::default()
    }

    /// Builds a pattern, dropping duplicates.
    ///
    /// # Panics
    /// If one of the groups is empty.
    pub fn new(groups: impl IntoIterator<Item = AgentSet>) -> Self {
        let mut groups: SmallVec<[AgentSet; 8]> = groups.into_iter().collect();
        assert!(
            groups.iter().all(|g| !g.is_empty()),
            "agent patterns cannot contain the empty set"
        );
        groups.sort_unstable();
        groups.dedup();
        AgentPattern { groups }
    }

    /// The pattern `{a}` for a single group.
    pub fn of(group: AgentSet) -> Self {
        AgentPattern::new([group])
    }

    pub fn groups(&self) -> &[AgentSet] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn contains(&self, group: AgentSet) -> bool {
        self.groups.binary_search(&group).is_ok()
    }

    pub fn is_subset(&self, other: &AgentPattern) -> bool {
        self.groups.iter().all(|g| other.contains(*g))
    }

    pub fn union(&self, other: &AgentPattern) -> AgentPattern {
        AgentPattern::new(self.groups.iter().chain(other.groups.iter()).copied())
    }

    pub fn intersection(&self, other: &AgentPattern) -> AgentPattern {
        AgentPattern {
            groups: self
                .groups
                .iter()
                .copied()
                .filter(|g| other.contains(*g))
                .collect(),
        }
    }

    pub fn with(&self, group: AgentSet) -> AgentPattern {
        AgentPattern::new(self.groups.iter().copied().chain([group]))
    }

    pub fn without(&self, group: AgentSet) -> AgentPattern {
        AgentPattern {
            groups: self.groups.iter().copied().filter(|g| *g != group).collect(),
        }
    }

    /// All agents occurring in some group.
    pub fn agents(&self) -> AgentSet {
        self.groups
            .iter()
            .fold(AgentSet::EMPTY, |acc, g| acc.union(*g))
    }

    /// Whether some group of the pattern contains `set`.
    pub fn covers(&self, set: AgentSet) -> bool {
        self.groups.iter().any(|g| set.is_subset(*g))
    }

    /// `G^C`: the non-empty subsets of `universe` not contained in any group.
    pub fn complement(&self, universe: AgentSet) -> AgentPattern {
        AgentPattern::new(universe.subsets().filter(|h| !self.covers(*h)))
    }

    /// `G*`: one singleton per agent occurring in the pattern.
    pub fn star(&self) -> AgentPattern {
        AgentPattern::singletons(self.agents())
    }

    /// The inclusion-maximal groups.
    pub fn maximal(&self) -> AgentPattern {
        AgentPattern {
            groups: self
                .groups
                .iter()
                .copied()
                .filter(|g| {
                    !self
                        .groups
                        .iter()
                        .any(|h| h != g && g.is_subset(*h))
                })
                .collect(),
        }
    }

    /// `{{a} | a ∈ set}`.
    pub fn singletons(set: AgentSet) -> AgentPattern {
        AgentPattern::new(set.agents().map(AgentSet::single))
    }

    /// Downward closure: every non-empty subset of every group.
    pub fn downset(&self) -> AgentPattern {
        AgentPattern::new(self.groups.iter().flat_map(|g| g.subsets()))
    }

    pub fn is_downward_closed(&self) -> bool {
        self.groups
            .iter()
            .all(|g| g.subsets().all(|s| self.contains(s)))
    }
}

impl Ord for AgentPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.groups
            .len()
            .cmp(&other.groups.len())
            .then_with(|| self.groups.as_slice().cmp(other.groups.as_slice()))
    }
}

impl PartialOrd for AgentPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AgentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.groups.iter()).finish()
    }
}

impl FromIterator<AgentSet> for AgentPattern {
    fn from_iter<T: IntoIterator<Item = AgentSet>>(iter: T) -> Self {
        AgentPattern::new(iter)
    }
}

/// Free-function forms of the pattern operations.
pub fn pattern_complement(g: &AgentPattern, universe: AgentSet) -> AgentPattern {
    g.complement(universe)
}

pub fn pattern_star(g: &AgentPattern) -> AgentPattern {
    g.star()
}

pub fn pattern_max(g: &AgentPattern) -> AgentPattern {
    g.maximal()
}

pub fn singleton_pattern(a: AgentSet) -> AgentPattern {
    AgentPattern::singletons(a)
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// The agents of a model, in declaration order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    names: Vec<String>,
    single_char: bool,
}

impl Universe {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, UniverseError> {
        let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(UniverseError::Empty);
        }
        if names.len() > MAX_AGENTS {
            return Err(UniverseError::TooMany(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_ident(n) {
                return Err(UniverseError::BadName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(UniverseError::Duplicate(n.clone()));
            }
        }
        let single_char = names.iter().all(|n| n.chars().count() == 1);
        Ok(Universe { names, single_char })
    }

    /// Agents named `a`, `b`, `c`, ... .
    pub fn letters(n: usize) -> Self {
        assert!((1..=MAX_AGENTS).contains(&n), "agent count out of range");
        Universe::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
            .expect("letters are valid agent names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, agent: usize) -> &str {
        &self.names[agent]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full(&self) -> AgentSet {
        AgentSet::first(self.names.len())
    }

    /// Whether every agent name is one character, so groups can be written
    /// by juxtaposition.
    pub fn single_char(&self) -> bool {
        self.single_char
    }

    pub fn set<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Option<AgentSet> {
        names.into_iter().try_fold(AgentSet::EMPTY, |acc, n| {
            self.index(n.as_ref()).map(|i| acc.union(AgentSet::single(i)))
        })
    }

    /// Parses a group in pattern-literal form (`ab` or `{p1,p2}`).
    pub fn parse_set(&self, text: &str) -> Option<AgentSet> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let set = self.set(inner.split(',').map(str::trim))?;
            return (!set.is_empty()).then_some(set);
        }
        if let Some(i) = self.index(text) {
            return Some(AgentSet::single(i));
        }
        if self.single_char && !text.is_empty() {
            return self.set(text.chars().map(|c| c.to_string()));
        }
        None
    }

    /// Parses a comma-separated pattern, with or without surrounding brackets.
    pub fn parse_pattern(&self, text: &str) -> Option<AgentPattern> {
        let text = text.trim();
        let text = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(text)
            .trim();
        if text.is_empty() {
            return Some(AgentPattern::empty());
        }
        let mut groups = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, c) in text.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    groups.push(self.parse_set(&text[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        groups.push(self.parse_set(&text[start..])?);
        Some(AgentPattern::new(groups))
    }

    pub fn fmt_set(&self, set: AgentSet) -> String {
        if self.single_char {
            set.agents().map(|a| self.names[a].as_str()).collect()
        } else {
            let inner: Vec<&str> = set.agents().map(|a| self.names[a].as_str()).collect();
            format!("{{{}}}", inner.join(","))
        }
    }

    /// Comma-separated groups without brackets, e.g. `ab,a,b`.
    pub fn fmt_groups(&self, pattern: &AgentPattern) -> String {
        let parts: Vec<String> = pattern.groups().iter().map(|g| self.fmt_set(*g)).collect();
        parts.join(",")
    }

    /// Bracketed pattern literal, e.g. `[ab,a,b]`.
    pub fn fmt_pattern(&self, pattern: &AgentPattern) -> String {
        format!("[{}]", self.fmt_groups(pattern))
    }

    pub fn set_names(&self, set: AgentSet) -> Vec<&str> {
        set.agents().map(|a| self.names[a].as_str()).collect()
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// Exhaustive enumeration of patterns over a small universe.
///
/// A pattern over `n` agents is encoded as a bitmask over the `2^n - 1`
/// non-empty agent sets, bit `m - 1` standing for the set with bitmask `m`.
/// Union, inclusion and membership become word operations, which is what
/// makes lattice-wide frame checks affordable for up to four agents.
#[derive(Debug, Clone)]
pub struct PatternSpace {
    n: usize,
    down: Vec<u32>,
}

/// Largest universe for which [`PatternSpace`] is available.
pub const MAX_EXHAUSTIVE_AGENTS: usize = 4;

impl PatternSpace {
    pub fn new(n: usize) -> Option<Self> {
        if n == 0 || n > MAX_EXHAUSTIVE_AGENTS {
            return None;
        }
        let sets = (1usize << n) - 1;
        let down = (0..=sets)
            .map(|m| {
                if m == 0 {
                    0
                } else {
                    AgentSet(m as u16)
                        .subsets()
                        .fold(0u32, |acc, s| acc | 1 << (s.0 - 1))
                }
            })
            .collect();
        Some(PatternSpace { n, down })
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    /// Number of non-empty agent sets.
    pub fn set_count(&self) -> usize {
        (1 << self.n) - 1
    }

    /// Number of non-empty patterns.
    pub fn pattern_count(&self) -> u32 {
        ((1u64 << self.set_count()) - 1) as u32
    }

    /// All non-empty pattern codes in ascending order.
    pub fn codes(&self) -> impl Iterator<Item = u32> {
        1..=self.pattern_count()
    }

    pub fn bit(set: AgentSet) -> u32 {
        debug_assert!(!set.is_empty());
        1 << (set.0 - 1)
    }

    pub fn encode(&self, pattern: &AgentPattern) -> u32 {
        pattern.groups().iter().fold(0, |acc, g| {
            assert!(
                g.0 as usize <= self.set_count(),
                "pattern outside the enumerated universe"
            );
            acc | Self::bit(*g)
        })
    }

    pub fn decode(&self, code: u32) -> AgentPattern {
        AgentPattern::new(Self::sets(code))
    }

    /// Members of an encoded pattern in ascending bitmask order.
    pub fn sets(code: u32) -> impl Iterator<Item = AgentSet> {
        (0..32u32)
            .filter(move |i| code & (1 << i) != 0)
            .map(|i| AgentSet((i + 1) as u16))
    }

    /// Code of the downward closure.
    pub fn downset(&self, code: u32) -> u32 {
        Self::sets(code).fold(0, |acc, s| acc | self.down[s.0 as usize])
    }

    /// Code of all non-empty subsets of `set`.
    pub fn down_of(&self, set: AgentSet) -> u32 {
        self.down[set.0 as usize]
    }
}
