//! Translating proper delta-models into simplicial models.
//!
//! World `w_i` (1-based, in model order) starts as the full simplex over the
//! agents alive there, every face coloured `i`. Then for each pair `i < j`
//! and each agent set `B` with `w_i ∼_{B} w_j`, the face `(B, j)` of `S_j`
//! is replaced by `(B, k)`, where `k` is the least index with
//! `w_k ∼_{B} w_i`. Taking the least index lets a face shared along a chain
//! of worlds keep one colour throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, PatternSpace};
use crate::formula::Prop;
use crate::kripke::{check_frame, render_witness, FrameReport, KripkeError, Level, PreModel};
use crate::relation::Per;
use crate::semantics::{EvalError, Evaluator, Frame};
use crate::simplicial::{
    shared_projection, validate_complex, validate_simplex, Complex, Face, FacesShown,
    ModelError, Simplex, SimplicialModel,
};
use crate::syntax::print_formula;
use crate::verify::suite::{formula_suite, suite_props, SuiteError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("input is not a proper delta-model: {property} fails at {witness}")]
    NotProper {
        property: &'static str,
        witness: String,
        report: Box<FrameReport>,
    },
    #[error("world {0} has no alive agent set")]
    NothingAlive(String),
    #[error("world {world} has no unique largest alive agent set")]
    NoLargestAlive { world: String },
    #[error(transparent)]
    Order(#[from] KripkeError),
    #[error("translated complex is invalid: {0}")]
    Invalid(#[from] ModelError),
}

/// One face replacement performed by the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replacement {
    /// 1-based indices of the pair being glued.
    pub i: usize,
    pub j: usize,
    pub agents: AgentSet,
    /// Colours `S_j` carried for `agents` before the step.
    pub before: Vec<u32>,
    pub color: u32,
}

impl Replacement {
    /// Whether the step overwrote a face that an earlier step had already
    /// recoloured to something else.
    pub fn is_chained(&self) -> bool {
        self.before
            .iter()
            .any(|&c| c != self.j as u32 && c != self.color)
    }
}

/// Raw output of the construction, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub complex: Complex,
    pub trace: Vec<Replacement>,
}

#[derive(Debug, Clone)]
pub struct TranslateOptions {
    /// World enumeration, as indices into the input model; model order when
    /// absent.
    pub order: Option<Vec<usize>>,
    /// Refuse inputs that are not proper delta-models.
    pub require_proper: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            order: None,
            require_proper: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    /// The input in the enumeration used.
    pub source: PreModel,
    pub target: SimplicialModel,
    /// `mapping[i]` is the simplex index of world `i`; always the identity,
    /// kept explicit so loaded translations can differ.
    pub mapping: Vec<usize>,
    pub trace: Vec<Replacement>,
}

impl Translation {
    /// `(world, simplex)` name pairs.
    pub fn mapping_names(&self) -> Vec<(&str, &str)> {
        self.mapping
            .iter()
            .enumerate()
            .map(|(w, &s)| {
                (
                    self.source.worlds[w].as_str(),
                    self.target.complex.simplices[s].name.as_str(),
                )
            })
            .collect()
    }
}

/// Runs the construction on the frame of `m` in model order, without
/// checking the frame conditions.
pub fn construct(m: &PreModel) -> Result<Construction, TranslateError> {
    let n = m.len();
    let full = m.universe.full();
    let singles: BTreeMap<AgentSet, Per> = full
        .subsets()
        .map(|b| (b, m.relation(&AgentPattern::of(b))))
        .collect();

    let mut faces: Vec<BTreeSet<Face>> = Vec::with_capacity(n);
    for i in 0..n {
        let alive: Vec<AgentSet> = singles
            .iter()
            .filter(|(_, r)| r.in_field(i))
            .map(|(b, _)| *b)
            .collect();
        let Some(&star) = alive.iter().max_by_key(|b| b.len()) else {
            return Err(TranslateError::NothingAlive(m.worlds[i].clone()));
        };
        if !alive.iter().all(|b| b.is_subset(star)) || !singles[&star].in_field(i) {
            return Err(TranslateError::NoLargestAlive {
                world: m.worlds[i].clone(),
            });
        }
        let color = (i + 1) as u32;
        faces.push(star.subsets().map(|a| Face::new(a, color)).collect());
    }

    let mut trace = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (&b, rel) in &singles {
                if !rel.related(i, j) {
                    continue;
                }
                let k = (0..n)
                    .find(|&l| rel.related(l, i))
                    .expect("w_i is related to itself");
                let (jc, kc) = ((j + 1) as u32, (k + 1) as u32);
                let before: Vec<u32> = faces[j]
                    .iter()
                    .filter(|f| f.agents == b)
                    .map(|f| f.color)
                    .collect();
                faces[j].remove(&Face::new(b, jc));
                faces[j].insert(Face::new(b, kc));
                trace.push(Replacement {
                    i: i + 1,
                    j: j + 1,
                    agents: b,
                    before,
                    color: kc,
                });
            }
        }
    }

    let simplices = faces
        .into_iter()
        .enumerate()
        .map(|(i, f)| Simplex {
            name: format!("S{}", i + 1),
            faces: f,
        })
        .collect();
    Ok(Construction {
        complex: Complex::new(m.universe.clone(), simplices),
        trace,
    })
}

/// Translates a proper delta-model.
pub fn delta_translate(m: &PreModel) -> Result<Translation, TranslateError> {
    delta_translate_with(m, &TranslateOptions::default())
}

pub fn delta_translate_with(
    m: &PreModel,
    opts: &TranslateOptions,
) -> Result<Translation, TranslateError> {
    let source = match &opts.order {
        Some(order) => m.permuted(order)?,
        None => m.clone(),
    };
    if opts.require_proper {
        let report = check_frame(&source, Level::Proper);
        if let Some(v) = report.first_failure() {
            return Err(TranslateError::NotProper {
                property: v.property.name(),
                witness: render_witness(&source, v.witness.as_ref().expect("failure has witness")),
                report: Box::new(report),
            });
        }
    }
    let Construction { complex, trace } = construct(&source)?;
    let valuation: BTreeMap<String, BTreeSet<Prop>> = complex
        .simplices
        .iter()
        .zip(&source.valuation)
        .map(|(s, v)| (s.name.clone(), v.clone()))
        .collect();
    let target = SimplicialModel::new(complex, &valuation)?;
    Ok(Translation {
        mapping: (0..source.len()).collect(),
        source,
        target,
        trace,
    })
}

/// Outcome of one certification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    pub witness: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationReport {
    pub checks: Vec<Check>,
    pub formulas: usize,
    pub patterns: usize,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "({}) {:<44} ok", c.id, c.description)?,
                Some(w) => writeln!(f, "({}) {:<44} FAILS: {w}", c.id, c.description)?,
            }
        }
        writeln!(
            f,
            "{} patterns, {} formulas compared",
            self.patterns, self.formulas
        )
    }
}

/// Patterns for the truth-agreement suite: `{B}` for every agent set and
/// the pattern of all agent sets.
pub fn suite_patterns(universe_agents: AgentSet) -> Vec<AgentPattern> {
    let mut out: Vec<AgentPattern> = universe_agents.subsets().map(AgentPattern::of).collect();
    out.push(AgentPattern::new(universe_agents.subsets()));
    out
}

/// Certifies a translation: simplex and complex conditions, the two
/// transformation invariants, agreement of indistinguishability, the
/// translation conditions, and truth agreement on the formula suite of the
/// given depth.
pub fn verify_translation(t: &Translation, depth: usize) -> Result<TranslationReport, SuiteError> {
    let m = &t.source;
    let c = &t.target.complex;
    let u = &m.universe;
    let n = m.len();
    let simplex = |w: usize| &c.simplices[t.mapping[w]];
    let mut checks = Vec::new();
    let mut push = |id, description, witness| {
        checks.push(Check {
            id,
            description,
            witness,
        })
    };

    push(
        "a",
        "every simplex is well formed",
        c.simplices
            .iter()
            .find_map(|s| validate_simplex(s).err().map(|e| format!("{}: {e}", s.name))),
    );
    push("b", "simplices form a complex", validate_complex(c).err().map(|e| e.to_string()));

    let t1 = c.simplices.iter().find_map(|s| {
        s.faces
            .iter()
            .zip(s.faces.iter().skip(1))
            .find(|(x, y)| x.agents == y.agents)
            .map(|(x, y)| {
                format!(
                    "{} carries {}{} and {}{}",
                    s.name,
                    u.fmt_set(x.agents),
                    x.color,
                    u.fmt_set(y.agents),
                    y.color
                )
            })
    });
    push("c", "one colour per agent set in each simplex", t1);

    let sets: Vec<AgentSet> = u.full().subsets().collect();
    let mut t2 = None;
    'outer: for &b in &sets {
        let rel = m.relation(&AgentPattern::of(b));
        for i in 0..n {
            for j in i..n {
                let (si, sj) = (simplex(i), simplex(j));
                let shared = match (si.color_of(b), sj.color_of(b)) {
                    (Some(x), Some(y)) => x == y,
                    _ => false,
                };
                if shared != rel.related(i, j) {
                    t2 = Some(format!(
                        "{} and {} on {}: shared face {shared}, related {}",
                        si.name,
                        sj.name,
                        u.fmt_set(b),
                        !shared
                    ));
                    break 'outer;
                }
            }
        }
    }
    push("d", "shared faces match single-set relations", t2);

    let domain: Vec<AgentPattern> = match PatternSpace::new(u.len()) {
        Some(space) => space.codes().map(|code| space.decode(code)).collect(),
        None => {
            let mut s: BTreeSet<AgentPattern> = m.support();
            s.extend(sets.iter().map(|b| AgentPattern::of(*b)));
            s.into_iter().collect()
        }
    };
    let mut eq7 = None;
    for g in &domain {
        let a = t.target.relation(g);
        let b = m.relation(g);
        let (am, bm) = (reindex(&a, &t.mapping), b);
        if let Some((w, v)) = am.first_difference(&bm) {
            eq7 = Some(format!(
                "{} {}",
                render_witness(m, &crate::kripke::Witness {
                    worlds: vec![w, v],
                    patterns: vec![],
                }),
                u.fmt_pattern(g)
            ));
            break;
        }
    }
    push("e", "indistinguishability agrees on every pattern", eq7);

    let mut cond1 = None;
    'c1: for i in 0..n {
        for j in 0..n {
            let shared = shared_projection(simplex(i), simplex(j));
            // Patterns below the shared projection are exactly the
            // patterns relating the pair.
            for g in &domain {
                let inside = g.is_subset(&shared);
                if inside != m.relation(g).related(i, j) {
                    cond1 = Some(format!(
                        "({},{}) {}",
                        m.worlds[i],
                        m.worlds[j],
                        u.fmt_pattern(g)
                    ));
                    break 'c1;
                }
            }
        }
    }
    let mut distinct = BTreeSet::new();
    let bij = t
        .mapping
        .iter()
        .find(|&&s| !distinct.insert(s))
        .map(|&s| format!("two worlds map to {}", c.simplices[s].name));
    let val = (0..n)
        .find(|&w| t.target.valuation[t.mapping[w]] != m.valuation[w])
        .map(|w| format!("valuation differs at {}", m.worlds[w]));
    push("f", "translation conditions and bijectivity", cond1.or(bij).or(val));

    let props = suite_props(m.props().into_iter().chain(t.target.props()), 2);
    let patterns = suite_patterns(u.full());
    let suite = formula_suite(&props, &patterns, depth)?;
    let mut em = Evaluator::new(m);
    let mut es = Evaluator::new(&t.target);
    let mut truth = None;
    for f in &suite {
        let (a, b) = match (em.truth_set(f), es.truth_set(f)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                truth = Some(eval_error(e));
                break;
            }
        };
        if let Some(w) = (0..n).find(|&w| a[w] != b[t.mapping[w]]) {
            truth = Some(format!(
                "{} at {} / {}",
                print_formula(f, u),
                m.worlds[w],
                simplex(w).name
            ));
            break;
        }
    }
    push("g", "truth agrees on the formula suite", truth);

    Ok(TranslationReport {
        checks,
        formulas: suite.len(),
        patterns: domain.len(),
    })
}

fn eval_error(e: EvalError) -> String {
    format!("evaluation failed: {e}")
}

/// The relation pulled back along `mapping` (world -> simplex).
fn reindex(r: &Per, mapping: &[usize]) -> Per {
    let keys: Vec<Option<u32>> = mapping.iter().map(|&s| r.class_of(s)).collect();
    Per::from_keys(&keys)
}

/// Renders a translated complex one simplex per line.
pub fn render_complex(c: &Complex) -> String {
    c.simplices
        .iter()
        .map(|s| format!("{} = {}\n", s.name, FacesShown(s, &c.universe)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::Universe;

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

    fn rows(t: &Translation) -> Vec<String> {
        t.target
            .complex
            .simplices
            .iter()
            .map(|s| FacesShown(s, &t.source.universe).to_string())
            .collect()
    }

    #[test]
    fn fig3_translation() {
        let t = delta_translate(&fig3()).unwrap();
        assert_eq!(rows(&t), vec!["{ab1,a1,b1}", "{ab2,a1,b1}", "{ab3,a3,b1}"]);
        assert!(t.trace.iter().all(|r| !r.is_chained()));
        let report = verify_translation(&t, 2).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn isolated_world() {
        let u = Universe::letters(2);
        let a = u.parse_pattern("a").unwrap();
        let m = PreModel::generated(u, names(1), [(0, 0, a)], vec![]).unwrap();
        let t = delta_translate(&m).unwrap();
        assert_eq!(rows(&t), vec!["{a1}"]);
        assert!(t.trace.is_empty());
    }

    #[test]
    fn improper_input_is_gated() {
        let u = Universe::letters(2);
        let ab = u.parse_pattern("ab").unwrap();
        let m = PreModel::generated(
            u,
            names(2),
            [(0, 1, ab.clone()), (0, 0, ab.clone()), (1, 1, ab)],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            delta_translate(&m),
            Err(TranslateError::NotProper { property: "proper", .. })
        ));
        let raw = construct(&m).unwrap();
        assert_eq!(raw.complex.simplices[0].faces, raw.complex.simplices[1].faces);
    }

    #[test]
    fn corrupted_target_is_caught() {
        let mut t = delta_translate(&fig3()).unwrap();
        let s3 = &mut t.target.complex.simplices[2];
        let b = t.source.universe.parse_set("b").unwrap();
        s3.faces.remove(&Face::new(b, 1));
        s3.faces.insert(Face::new(b, 3));
        let report = verify_translation(&t, 1).unwrap();
        assert!(!report.passed());
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
        assert!(failed.contains(&"d"), "{report}");
    }

    #[test]
    fn permuted_enumeration_still_certifies() {
        let t = delta_translate_with(
            &fig3(),
            &TranslateOptions {
                order: Some(vec![2, 1, 0]),
                require_proper: true,
            },
        )
        .unwrap();
        assert_eq!(t.source.worlds, vec!["w3", "w2", "w1"]);
        assert!(verify_translation(&t, 2).unwrap().passed());
    }
}
