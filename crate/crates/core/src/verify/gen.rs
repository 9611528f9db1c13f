//! Seeded generators for complexes, proper delta-models and kappa-models.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, Universe};
use crate::formula::Prop;
use crate::kripke::PreModel;
use crate::simplicial::{shared_projection, Complex, Face, Simplex, SimplicialModel};

pub const MAX_GEN_AGENTS: usize = 4;
pub const MAX_GEN_WORLDS: usize = 8;
pub const MAX_GEN_PROPS: usize = 3;

/// Proposition names used by the generators, in order.
pub const GEN_PROPS: [&str; MAX_GEN_PROPS] = ["p", "q", "r"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("agent count must be between 1 and {MAX_GEN_AGENTS}, got {0}")]
    Agents(usize),
    #[error("world count must be between 1 and {MAX_GEN_WORLDS}, got {0}")]
    Worlds(usize),
    #[error("proposition count must be at most {MAX_GEN_PROPS}, got {0}")]
    Props(usize),
    #[error("glue probability {0}/{1} is not in [0, 1]")]
    Glue(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub agents: usize,
    pub worlds: usize,
    pub props: usize,
    pub seed: u64,
    /// Gluing probability as `numerator / denominator`.
    pub glue: (u32, u32),
}

impl GenParams {
    pub fn new(agents: usize, worlds: usize, props: usize, seed: u64) -> Self {
        GenParams {
            agents,
            worlds,
            props,
            seed,
            glue: (2, 3),
        }
    }

    pub fn with_glue(mut self, num: u32, den: u32) -> Self {
        self.glue = (num, den);
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if !(1..=MAX_GEN_AGENTS).contains(&self.agents) {
            return Err(GenError::Agents(self.agents));
        }
        if !(1..=MAX_GEN_WORLDS).contains(&self.worlds) {
            return Err(GenError::Worlds(self.worlds));
        }
        if self.props > MAX_GEN_PROPS {
            return Err(GenError::Props(self.props));
        }
        let (num, den) = self.glue;
        if den == 0 || num > den {
            return Err(GenError::Glue(num, den));
        }
        Ok(())
    }

    /// Parameters for the `index`-th sample of a seeded batch: sizes drawn
    /// uniformly up to the given caps, seed derived from `seed` and `index`.
    pub fn sample(seed: u64, index: u64, max_agents: usize, max_worlds: usize, props: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        GenParams::new(
            rng.gen_range(1..=max_agents),
            rng.gen_range(1..=max_worlds),
            props,
            rng.gen(),
        )
    }

    fn universe(&self) -> Universe {
        Universe::letters(self.agents)
    }

    fn props(&self) -> Vec<Prop> {
        GEN_PROPS[..self.props]
            .iter()
            .map(|p| Prop::new(p).expect("valid name"))
            .collect()
    }
}

fn random_set(rng: &mut ChaCha8Rng, within: AgentSet) -> AgentSet {
    let subsets: Vec<AgentSet> = within.subsets().collect();
    subsets[rng.gen_range(0..subsets.len())]
}

fn random_valuation(rng: &mut ChaCha8Rng, props: &[Prop]) -> BTreeSet<Prop> {
    props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// A random valid complex built by gluing each new simplex onto at most one
/// earlier one.
///
/// Each simplex picks a non-empty alive set. With the glue probability it
/// also picks an earlier simplex and a non-empty agent set `D` inside both
/// alive sets, and reuses that simplex's colours for every face below `D`.
/// All other faces get fresh colours. A simplex that would coincide with
/// an earlier one gets a fresh colour on its largest face.
pub fn gen_complex(p: &GenParams) -> Result<SimplicialModel, GenError> {
    p.validate()?;
    let u = p.universe();
    let props = p.props();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut next_color = 0u32;
    let mut fresh = || {
        next_color += 1;
        next_color - 1
    };
    let mut simplices: Vec<Simplex> = Vec::with_capacity(p.worlds);
    for i in 0..p.worlds {
        let alive = random_set(&mut rng, u.full());
        let glue = i > 0 && rng.gen_ratio(p.glue.0, p.glue.1);
        let mut parent: Option<(usize, AgentSet)> = None;
        if glue {
            let k = rng.gen_range(0..i);
            let common = alive.intersection(simplices[k].alive_agents());
            if !common.is_empty() {
                parent = Some((k, random_set(&mut rng, common)));
            }
        }
        let mut faces: Vec<Face> = alive
            .subsets()
            .map(|c| match parent {
                Some((k, d)) if c.is_subset(d) => Face::new(
                    c,
                    simplices[k].color_of(c).expect("parent has every face below D"),
                ),
                _ => Face::new(c, fresh()),
            })
            .collect();
        let mut s = Simplex::auto(&u, faces.clone());
        if simplices.iter().any(|t| t.faces == s.faces) {
            let top = faces.iter_mut().find(|f| f.agents == alive).expect("top face");
            top.color = fresh();
            s = Simplex::auto(&u, faces);
        }
        simplices.push(s);
    }
    let valuation: BTreeMap<String, BTreeSet<Prop>> = simplices
        .iter()
        .map(|s| (s.name.clone(), random_valuation(&mut rng, &props)))
        .collect();
    Ok(SimplicialModel::new(Complex::new(u, simplices), &valuation)
        .unwrap_or_else(|e| panic!("tree gluing yields valid complexes: {e}")))
}

/// The Kripke model whose relations are a simplicial model's
/// indistinguishability: one generator per pair under the maximal agent
/// sets the two simplices share.
pub fn read_back(m: &SimplicialModel) -> PreModel {
    let s = m.simplices();
    let mut edges = Vec::new();
    for i in 0..s.len() {
        for j in i..s.len() {
            let shared = shared_projection(&s[i], &s[j]);
            if !shared.is_empty() {
                edges.push((i, j, shared.maximal()));
            }
        }
    }
    PreModel::generated(
        m.complex.universe.clone(),
        s.iter().map(|x| x.name.clone()).collect(),
        edges,
        m.valuation.clone(),
    )
    .expect("simplex names are unique and patterns are non-empty")
}

/// A proper delta-model read back from [`gen_complex`].
pub fn gen_proper_delta(p: &GenParams) -> Result<PreModel, GenError> {
    Ok(read_back(&gen_complex(p)?))
}

/// A random kappa-model, usually neither delta nor proper.
///
/// Every world gets an alive set `A_w` and a self-loop under `{A_w}`. Each
/// pair of worlds gets up to two extra generators, with the glue
/// probability each, under random patterns over `A_w ∩ A_v`. All labels at
/// `w` then sit below `{A_w}`, which keeps K1 and K2; generated relations
/// give K3, K4 and NE.
pub fn gen_kappa(p: &GenParams) -> Result<PreModel, GenError> {
    p.validate()?;
    let u = p.universe();
    let props = p.props();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let alive: Vec<AgentSet> = (0..p.worlds).map(|_| random_set(&mut rng, u.full())).collect();
    let mut edges: Vec<(usize, usize, AgentPattern)> = (0..p.worlds)
        .map(|w| (w, w, AgentPattern::of(alive[w])))
        .collect();
    for w in 0..p.worlds {
        for v in w + 1..p.worlds {
            let common = alive[w].intersection(alive[v]);
            if common.is_empty() {
                continue;
            }
            for _ in 0..2 {
                if rng.gen_ratio(p.glue.0, p.glue.1) {
                    let groups = rng.gen_range(1..=2);
                    let g = AgentPattern::new((0..groups).map(|_| random_set(&mut rng, common)));
                    edges.push((w, v, g));
                }
            }
        }
    }
    let valuation = (0..p.worlds).map(|_| random_valuation(&mut rng, &props)).collect();
    let worlds = (1..=p.worlds).map(|i| format!("w{i}")).collect();
    Ok(PreModel::generated(u, worlds, edges, valuation).expect("generated edges are well formed"))
}

/// A random non-empty pattern over the universe's agent sets.
pub fn random_pattern(rng: &mut impl Rng, universe: AgentSet) -> AgentPattern {
    let sets: Vec<AgentSet> = universe.subsets().collect();
    loop {
        let g = AgentPattern::new(sets.iter().copied().filter(|_| rng.gen_bool(0.3)));
        if !g.is_empty() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{check_frame, Level};
    use crate::simplicial::validate_complex;

    #[test]
    fn deterministic() {
        let p = GenParams::new(3, 6, 2, 7);
        assert_eq!(gen_complex(&p).unwrap(), gen_complex(&p).unwrap());
        assert_eq!(gen_kappa(&p).unwrap(), gen_kappa(&p).unwrap());
        assert_ne!(gen_complex(&p).unwrap(), gen_complex(&GenParams { seed: 8, ..p }).unwrap());
    }

    #[test]
    fn bad_params() {
        assert_eq!(GenParams::new(5, 1, 0, 0).validate(), Err(GenError::Agents(5)));
        assert_eq!(GenParams::new(1, 9, 0, 0).validate(), Err(GenError::Worlds(9)));
        assert_eq!(GenParams::new(1, 1, 4, 0).validate(), Err(GenError::Props(4)));
        assert_eq!(GenParams::new(1, 1, 0, 0).with_glue(3, 2).validate(), Err(GenError::Glue(3, 2)));
    }

    #[test]
    fn no_glue_means_disjoint() {
        let m = gen_proper_delta(&GenParams::new(3, 5, 1, 3).with_glue(0, 1)).unwrap();
        for g in m.support() {
            let r = crate::semantics::Frame::relation(&m, &g);
            for (w, v) in r.pairs() {
                assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn samples_are_valid() {
        for i in 0..40 {
            let p = GenParams::sample(11, i, 4, 8, 2);
            let c = gen_complex(&p).unwrap();
            assert_eq!(validate_complex(&c.complex), Ok(()));
            let d = read_back(&c);
            let r = check_frame(&d, Level::Proper);
            assert!(r.passes(), "sample {i}: {}", r.render(&d));
            let k = gen_kappa(&p).unwrap();
            assert!(check_frame(&k, Level::Kappa).passes());
        }
    }
}
