//! Simplices and complexes built from coloured faces, and simplicial models.
//!
//! A face `(A, i)` pairs a non-empty agent set with an opaque colour. A
//! simplex has a unique largest face, exactly one colour for every subset of
//! each face, and nothing outside its largest face. A complex glues
//! simplices: sharing a face forces agreement on everything below it. Two
//! simplices are indistinguishable for a pattern `G` when every group of `G`
//! labels a face they share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, Universe};
use crate::formula::{Formula, Prop};
use crate::relation::Per;
use crate::semantics::{EvalError, Evaluator, Frame};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Face {
    pub agents: AgentSet,
    pub color: u32,
}

impl Face {
    pub fn new(agents: AgentSet, color: u32) -> Self {
        Face { agents, color }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Simplex {
    pub name: String,
    pub faces: BTreeSet<Face>,
}

impl Simplex {
    pub fn new(name: impl Into<String>, faces: impl IntoIterator<Item = Face>) -> Self {
        Simplex {
            name: name.into(),
            faces: faces.into_iter().collect(),
        }
    }

    /// A simplex named after its largest face, e.g. `abc0`.
    pub fn auto(universe: &Universe, faces: impl IntoIterator<Item = Face>) -> Self {
        let mut s = Simplex::new("", faces);
        s.name = s
            .max_face()
            .map(|m| format!("{}{}", universe.fmt_set(m.agents), m.color))
            .unwrap_or_default();
        s
    }

    /// The full simplex over `agents` with one colour everywhere.
    pub fn uniform(universe: &Universe, agents: AgentSet, color: u32) -> Self {
        Simplex::auto(universe, agents.subsets().map(|a| Face::new(a, color)))
    }

    /// The largest face, if the simplex is valid.
    pub fn max_face(&self) -> Option<Face> {
        // Faces iterate largest agent set first.
        self.faces.iter().next().copied()
    }

    pub fn color_of(&self, agents: AgentSet) -> Option<u32> {
        let lo = Face::new(agents, 0);
        self.faces
            .range(lo..)
            .next()
            .filter(|f| f.agents == agents)
            .map(|f| f.color)
    }

    /// `S°`.
    pub fn projection(&self) -> AgentPattern {
        AgentPattern::new(self.faces.iter().map(|f| f.agents))
    }

    /// The agent set of the largest face.
    pub fn alive_agents(&self) -> AgentSet {
        self.faces
            .iter()
            .fold(AgentSet::EMPTY, |acc, f| acc.union(f.agents))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexViolation {
    #[error("simplex has no faces")]
    Empty,
    #[error("face with empty agent set (colour {0})")]
    EmptyFace(u32),
    #[error("S1: no unique largest face ({0:?} and {1:?} are both largest)")]
    NoUniqueMax(Face, Face),
    #[error("S3: face {face:?} is not below the largest face {max:?}")]
    OutsideMax { face: Face, max: Face },
    #[error("S2: subset {subset:?} of face {face:?} has no colour")]
    MissingSubface { face: Face, subset: AgentSet },
    #[error("S2: agent set {agents:?} has several colours ({first} and {second})")]
    DuplicateColor { agents: AgentSet, first: u32, second: u32 },
}

impl SimplexViolation {
    /// Condition label: `S1`, `S2`, `S3`, or `face`.
    pub fn condition(&self) -> &'static str {
        match self {
            SimplexViolation::Empty | SimplexViolation::EmptyFace(_) => "face",
            SimplexViolation::NoUniqueMax(..) => "S1",
            SimplexViolation::OutsideMax { .. } => "S3",
            SimplexViolation::MissingSubface { .. } | SimplexViolation::DuplicateColor { .. } => "S2",
        }
    }
}

/// Checks conditions S1-S3 on one simplex.
pub fn validate_simplex(s: &Simplex) -> Result<(), SimplexViolation> {
    if s.faces.is_empty() {
        return Err(SimplexViolation::Empty);
    }
    if let Some(f) = s.faces.iter().find(|f| f.agents.is_empty()) {
        return Err(SimplexViolation::EmptyFace(f.color));
    }
    let faces: Vec<Face> = s.faces.iter().copied().collect();
    let max = faces[0];
    if let Some(other) = faces[1..].iter().find(|f| f.agents.len() == max.agents.len()) {
        return Err(SimplexViolation::NoUniqueMax(max, *other));
    }
    if let Some(f) = faces.iter().find(|f| !f.agents.is_subset(max.agents)) {
        return Err(SimplexViolation::OutsideMax { face: *f, max });
    }
    for w in faces.windows(2) {
        if w[0].agents == w[1].agents {
            return Err(SimplexViolation::DuplicateColor {
                agents: w[0].agents,
                first: w[0].color,
                second: w[1].color,
            });
        }
    }
    for f in &faces {
        if let Some(sub) = f.agents.subsets().find(|b| s.color_of(*b).is_none()) {
            return Err(SimplexViolation::MissingSubface {
                face: *f,
                subset: sub,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexViolation {
    #[error("simplex {name:?} is invalid: {violation}")]
    Simplex {
        name: String,
        violation: SimplexViolation,
    },
    #[error("duplicate simplex name {0:?}")]
    DuplicateName(String),
    #[error("simplices {0:?} and {1:?} are equal")]
    DuplicateSimplex(String, String),
    #[error("C: {s:?} and {t:?} share {shared:?} but disagree on {below:?}")]
    Gluing {
        s: String,
        t: String,
        shared: Face,
        below: Face,
    },
}

/// A list of simplices; the order is the world enumeration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    pub universe: Universe,
    pub simplices: Vec<Simplex>,
}

impl Complex {
    pub fn new(universe: Universe, simplices: Vec<Simplex>) -> Self {
        Complex {
            universe,
            simplices,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.simplices.iter().position(|s| s.name == name)
    }

    pub fn simplex(&self, name: &str) -> Option<&Simplex> {
        self.simplices.iter().find(|s| s.name == name)
    }
}

/// Checks every simplex, name uniqueness, and the gluing condition C.
pub fn validate_complex(c: &Complex) -> Result<(), ComplexViolation> {
    for s in &c.simplices {
        validate_simplex(s).map_err(|violation| ComplexViolation::Simplex {
            name: s.name.clone(),
            violation,
        })?;
    }
    for (i, s) in c.simplices.iter().enumerate() {
        for t in &c.simplices[..i] {
            if s.name == t.name {
                return Err(ComplexViolation::DuplicateName(s.name.clone()));
            }
            if s.faces == t.faces {
                return Err(ComplexViolation::DuplicateSimplex(t.name.clone(), s.name.clone()));
            }
        }
    }
    for (i, s) in c.simplices.iter().enumerate() {
        for t in &c.simplices[i + 1..] {
            for shared in s.faces.intersection(&t.faces) {
                for b in shared.agents.subsets() {
                    let (cs, ct) = (s.color_of(b), t.color_of(b));
                    if cs != ct {
                        let color = cs.or(ct).expect("differing colours are not both absent");
                        return Err(ComplexViolation::Gluing {
                            s: s.name.clone(),
                            t: t.name.clone(),
                            shared: *shared,
                            below: Face::new(b, color),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(S ∩ T)°`: agent sets of the faces two simplices share.
pub fn shared_projection(s: &Simplex, t: &Simplex) -> AgentPattern {
    AgentPattern::new(s.faces.intersection(&t.faces).map(|f| f.agents))
}

/// `S ∼_G T`, i.e. `G ⊆ (S ∩ T)°`.
pub fn indist(s: &Simplex, t: &Simplex, g: &AgentPattern) -> bool {
    g.groups()
        .iter()
        .all(|b| matches!((s.color_of(*b), t.color_of(*b)), (Some(x), Some(y)) if x == y))
}

/// A validated complex with a valuation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialModel {
    pub complex: Complex,
    /// Propositions true at each simplex, aligned with `complex.simplices`.
    pub valuation: Vec<BTreeSet<Prop>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Invalid(#[from] ComplexViolation),
    #[error("valuation names unknown simplex {0:?}")]
    UnknownSimplex(String),
}

impl SimplicialModel {
    /// Validates the complex and attaches the valuation.
    pub fn new(
        complex: Complex,
        valuation: &BTreeMap<String, BTreeSet<Prop>>,
    ) -> Result<Self, ModelError> {
        validate_complex(&complex)?;
        let mut val = vec![BTreeSet::new(); complex.len()];
        for (name, props) in valuation {
            let i = complex
                .index(name)
                .ok_or_else(|| ModelError::UnknownSimplex(name.clone()))?;
            val[i] = props.clone();
        }
        Ok(SimplicialModel {
            complex,
            valuation: val,
        })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.complex.simplices
    }

    pub fn props(&self) -> BTreeSet<Prop> {
        self.valuation.iter().flatten().cloned().collect()
    }

    /// Truth of `f` at the named simplex.
    pub fn eval(&self, simplex: &str, f: &Formula) -> Result<bool, EvalError> {
        Evaluator::new(self).eval_named(simplex, f)
    }

    /// `Ok(None)` when `f` holds at every simplex, else the first failing
    /// simplex name.
    pub fn valid(&self, f: &Formula) -> Result<Option<&str>, EvalError> {
        Ok(Evaluator::new(self)
            .first_failure(f)?
            .map(|i| self.complex.simplices[i].name.as_str()))
    }
}

impl Frame for SimplicialModel {
    fn universe(&self) -> &Universe {
        &self.complex.universe
    }

    fn world_count(&self) -> usize {
        self.complex.len()
    }

    fn world_name(&self, w: usize) -> &str {
        &self.complex.simplices[w].name
    }

    fn relation(&self, g: &AgentPattern) -> Per {
        let keys: Vec<Option<Vec<u32>>> = self
            .complex
            .simplices
            .iter()
            .map(|s| g.groups().iter().map(|b| s.color_of(*b)).collect())
            .collect();
        Per::from_keys(&keys)
    }

    fn holds(&self, w: usize, p: &Prop) -> bool {
        self.valuation[w].contains(p)
    }

    fn knows_prop(&self, p: &Prop) -> bool {
        self.valuation.iter().any(|v| v.contains(p))
    }
}

/// Free-function forms matching the operation names.
pub fn projection(s: &Simplex) -> AgentPattern {
    s.projection()
}

pub fn eval_simplicial(m: &SimplicialModel, simplex: &str, f: &Formula) -> Result<bool, EvalError> {
    m.eval(simplex, f)
}

pub fn valid_on_simplicial<'m>(
    m: &'m SimplicialModel,
    f: &Formula,
) -> Result<Option<&'m str>, EvalError> {
    m.valid(f)
}

/// Renders faces in row notation, e.g. `{ab1,a1,b1}`.
pub struct FacesShown<'a>(pub &'a Simplex, pub &'a Universe);

impl fmt::Display for FacesShown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .faces
            .iter()
            .map(|x| format!("{}{}", self.1.fmt_set(x.agents), x.color))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
