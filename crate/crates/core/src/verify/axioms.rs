//! Soundness scanning: instantiate axiom schemes at random and look for a
//! world where the instance fails.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::{AgentPattern, AgentSet, PatternSpace};
use crate::formula::{Formula, Prop};
use crate::semantics::{Evaluator, Frame};
use crate::verify::gen::{gen_complex, gen_kappa, random_pattern, GenParams, GEN_PROPS};
use crate::verify::suite::formula_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Taut,
    K,
    B,
    Four,
    T,
    P,
    NE,
    Mono,
    Equiv,
    Union,
    Clo,
    /// `alive(G) ∧ dead(G^C) ∧ φ → [G]φ`, which is not valid.
    Eq2,
}

impl Scheme {
    /// The schemes of the axiom system.
    pub const AXIOMS: [Scheme; 11] = [
        Scheme::Taut,
        Scheme::K,
        Scheme::B,
        Scheme::Four,
        Scheme::T,
        Scheme::P,
        Scheme::NE,
        Scheme::Mono,
        Scheme::Equiv,
        Scheme::Union,
        Scheme::Clo,
    ];

    /// The axioms without P, sound on kappa-models.
    pub const KAPPA_AXIOMS: [Scheme; 10] = [
        Scheme::Taut,
        Scheme::K,
        Scheme::B,
        Scheme::Four,
        Scheme::T,
        Scheme::NE,
        Scheme::Mono,
        Scheme::Equiv,
        Scheme::Union,
        Scheme::Clo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Taut => "Taut",
            Scheme::K => "K",
            Scheme::B => "B",
            Scheme::Four => "4",
            Scheme::T => "T",
            Scheme::P => "P",
            Scheme::NE => "NE",
            Scheme::Mono => "Mono",
            Scheme::Equiv => "Equiv",
            Scheme::Union => "Union",
            Scheme::Clo => "Clo",
            Scheme::Eq2 => "Eq2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::AXIOMS
            .iter()
            .chain([Scheme::Eq2].iter())
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Formula slots for an instance.
pub struct Slots<'a> {
    pub phi: &'a Formula,
    pub psi: &'a Formula,
    pub chi: &'a Formula,
}

/// Propositional tautology shapes used for `Taut`.
const TAUTOLOGIES: usize = 6;

fn tautology(shape: usize, s: &Slots) -> Formula {
    let (a, b, c) = (s.phi.clone(), s.psi.clone(), s.chi.clone());
    use Formula as F;
    match shape {
        0 => F::implies(a.clone(), a),
        1 => F::implies(a.clone(), F::implies(b, a)),
        2 => F::implies(
            F::implies(a.clone(), F::implies(b.clone(), c.clone())),
            F::implies(F::implies(a.clone(), b), F::implies(a, c)),
        ),
        3 => F::implies(F::implies(F::not(a.clone()), F::not(b.clone())), F::implies(b, a)),
        4 => F::or(a.clone(), F::not(a)),
        _ => F::iff(F::not(F::and(a.clone(), b.clone())), F::or(F::not(a), F::not(b))),
    }
}

/// `⋁ alive(G)` over non-empty patterns: all of them up to three agents,
/// those with at most two groups for larger universes.
pub fn ne_instance(universe: AgentSet) -> Formula {
    let patterns: Vec<AgentPattern> = match PatternSpace::new(universe.len()).filter(|_| universe.len() <= 3) {
        Some(space) => space.codes().map(|c| space.decode(c)).collect(),
        None => {
            let sets: Vec<AgentSet> = universe.subsets().collect();
            let mut out: Vec<AgentPattern> = sets.iter().map(|b| AgentPattern::of(*b)).collect();
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    out.push(AgentPattern::new([*a, *b]));
                }
            }
            out
        }
    };
    Formula::disj(patterns.into_iter().map(Formula::alive))
}

/// One random instance of `scheme` over `universe`, respecting its side
/// condition.
pub fn instantiate(
    scheme: Scheme,
    universe: AgentSet,
    rng: &mut impl Rng,
    s: &Slots,
) -> Formula {
    use Formula as F;
    let g = random_pattern(rng, universe);
    let phi = s.phi.clone();
    match scheme {
        Scheme::Taut => tautology(rng.gen_range(0..TAUTOLOGIES), s),
        Scheme::K => F::implies(
            F::know(g.clone(), F::implies(phi.clone(), s.psi.clone())),
            F::implies(F::know(g.clone(), phi), F::know(g, s.psi.clone())),
        ),
        Scheme::B => F::implies(
            phi.clone(),
            F::know(g.clone(), F::not(F::know(g, F::not(phi)))),
        ),
        Scheme::Four => F::implies(
            F::know(g.clone(), phi.clone()),
            F::know(g.clone(), F::know(g, phi)),
        ),
        Scheme::T => F::implies(
            F::alive(g.clone()),
            F::implies(F::know(g, phi.clone()), phi),
        ),
        Scheme::P | Scheme::Eq2 => {
            let dead = F::dead(&g.complement(universe));
            let lhs = F::conj([F::alive(g.clone()), dead.clone(), phi.clone()]);
            let rhs = if scheme == Scheme::P {
                F::know(g, F::implies(dead, phi))
            } else {
                F::know(g, phi)
            };
            F::implies(lhs, rhs)
        }
        Scheme::NE => ne_instance(universe),
        Scheme::Mono => {
            let h = g.union(&random_pattern(rng, universe));
            F::implies(F::know(g, phi.clone()), F::know(h, phi))
        }
        Scheme::Equiv => {
            let a = g.groups()[rng.gen_range(0..g.len())];
            let subs: Vec<AgentSet> = a.subsets().collect();
            let b = subs[rng.gen_range(0..subs.len())];
            F::implies(F::know(g.with(b), phi.clone()), F::know(g, phi))
        }
        Scheme::Union => {
            let h = random_pattern(rng, universe);
            F::implies(
                F::and(F::alive(g.clone()), F::alive(h.clone())),
                F::alive(g.union(&h)),
            )
        }
        Scheme::Clo => {
            let a = g.groups()[rng.gen_range(0..g.len())];
            let b = g.groups()[rng.gen_range(0..g.len())];
            F::implies(F::alive(g), F::alive(AgentPattern::of(a.union(b))))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanLevel {
    /// Generated simplicial models.
    Simplicial,
    /// Generated kappa-models.
    Kappa,
}

/// A falsified instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub scheme: Scheme,
    pub trial: u64,
    pub params: GenParams,
    pub world: String,
    pub instance: Formula,
}

/// Result of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub scheme: Scheme,
    pub level: ScanLevel,
    pub trials: u64,
    pub counterexample: Option<Counterexample>,
}

/// Checks `trials` instances of `scheme`, each on a freshly generated
/// model; stops at the first counterexample.
///
/// Formula slots are drawn from the depth-1 suite over two atoms and three
/// random patterns.
pub fn axiom_scan(scheme: Scheme, level: ScanLevel, seed: u64, trials: u64) -> ScanReport {
    let props: Vec<Prop> = GEN_PROPS[..2].iter().map(|p| Prop::new(p).expect("valid")).collect();
    for trial in 0..trials {
        let params = GenParams::sample(seed, trial, 4, 8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed);
        let universe = AgentSet::first(params.agents);
        let patterns: Vec<AgentPattern> = (0..3).map(|_| random_pattern(&mut rng, universe)).collect();
        let suite = formula_suite(&props, &patterns, 1).expect("depth 1 is within budget");
        let pick = |rng: &mut ChaCha8Rng| &suite[rng.gen_range(0..suite.len())];
        let (phi, psi, chi) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let instance = instantiate(scheme, universe, &mut rng, &Slots { phi, psi, chi });
        let failure = match level {
            ScanLevel::Simplicial => {
                let m = gen_complex(&params).expect("sampled params are valid");
                first_failing_world(&m, &instance)
            }
            ScanLevel::Kappa => {
                let m = gen_kappa(&params).expect("sampled params are valid");
                first_failing_world(&m, &instance)
            }
        };
        if let Some(world) = failure {
            return ScanReport {
                scheme,
                level,
                trials: trial + 1,
                counterexample: Some(Counterexample {
                    scheme,
                    trial,
                    params,
                    world,
                    instance,
                }),
            };
        }
    }
    ScanReport {
        scheme,
        level,
        trials,
        counterexample: None,
    }
}

fn first_failing_world<F: Frame>(m: &F, f: &Formula) -> Option<String> {
    Evaluator::new(m)
        .first_failure(f)
        .expect("lenient evaluation cannot fail")
        .map(|w| m.world_name(w).to_string())
}

/// Checks `instances` random instances of `scheme` on one given model.
/// Returns the first failing `(world, instance)`.
pub fn scan_model<F: Frame>(
    scheme: Scheme,
    m: &F,
    seed: u64,
    instances: u64,
) -> Option<(String, Formula)> {
    let universe = m.universe().full();
    let mut props: Vec<Prop> = GEN_PROPS[..2].iter().map(|p| Prop::new(p).expect("valid")).collect();
    props.retain(|p| m.knows_prop(p));
    if props.is_empty() {
        props.push(Prop::new("p").expect("valid"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let patterns: Vec<AgentPattern> = (0..3).map(|_| random_pattern(&mut rng, universe)).collect();
    let suite = formula_suite(&props, &patterns, 1).expect("depth 1 is within budget");
    let mut ev = Evaluator::new(m);
    for _ in 0..instances {
        let pick = |rng: &mut ChaCha8Rng| &suite[rng.gen_range(0..suite.len())];
        let (phi, psi, chi) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let f = instantiate(scheme, universe, &mut rng, &Slots { phi, psi, chi });
        if let Some(w) = ev.first_failure(&f).expect("lenient evaluation cannot fail") {
            return Some((m.world_name(w).to_string(), f));
        }
    }
    None
}

/// Evaluates one explicit instance of the Eq2 shape on a model.
pub fn eq2_instance(g: &AgentPattern, universe: AgentSet, phi: Formula) -> Formula {
    let dead = Formula::dead(&g.complement(universe));
    Formula::implies(
        Formula::conj([Formula::alive(g.clone()), dead, phi.clone()]),
        Formula::know(g.clone(), phi),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::AXIOMS.iter().chain([Scheme::Eq2].iter()) {
            assert_eq!(s.name().parse::<Scheme>(), Ok(*s));
        }
        assert!("X".parse::<Scheme>().is_err());
    }

    #[test]
    fn small_scans_find_nothing() {
        for s in Scheme::AXIOMS {
            let r = axiom_scan(s, ScanLevel::Simplicial, 1, 60);
            assert_eq!(r.counterexample, None, "{s}");
        }
        for s in Scheme::KAPPA_AXIOMS {
            let r = axiom_scan(s, ScanLevel::Kappa, 1, 60);
            assert_eq!(r.counterexample, None, "{s}");
        }
    }

    #[test]
    fn ne_instance_sizes() {
        let f = ne_instance(AgentSet::first(2));
        assert_eq!(f.patterns().len(), 7);
        let f = ne_instance(AgentSet::first(4));
        assert_eq!(f.patterns().len(), 15 + 105);
    }
}
