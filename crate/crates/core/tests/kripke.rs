use std::collections::BTreeSet;

use proptest::prelude::*;
use synergy::agents::pattern_complement;
use synergy::corpus::{example_names, load_example};
use synergy::io::AnyModel;
use synergy::kripke::{check_frame, quotient, Level, PreModel, QuotientError};
use synergy::semantics::{alive_set, truth_set};
use synergy::translate::suite_patterns;
use synergy::verify::gen::{gen_kappa, gen_proper_delta, read_back, GenParams};
use synergy::verify::suite::{formula_suite, suite_props};
use synergy::{AgentPattern, AgentSet, Formula, Frame, PatternSpace};

const SEED: u64 = 2024;

fn every_pattern(agents: usize) -> Vec<AgentPattern> {
    let space = PatternSpace::new(agents).unwrap();
    space.codes().map(|c| space.decode(c)).collect()
}

fn kappa_models() -> Vec<(String, PreModel)> {
    let mut out = Vec::new();
    for name in example_names() {
        let m = match load_example(name).unwrap() {
            AnyModel::Kripke(m) => m,
            AnyModel::Simplicial(s) => read_back(&s),
        };
        if check_frame(&m, Level::Kappa).passes() {
            out.push((name.to_string(), m));
        }
    }
    for i in 0..30 {
        out.push((format!("kappa sample {i}"), gen_kappa(&GenParams::sample(SEED, i, 3, 4, 2)).unwrap()));
    }
    out
}

/// Checks the alive/dead facts that hold in every kappa-model.
fn alive_facts(name: &str, m: &PreModel) {
    let n = m.universe.len();
    let full = m.universe.full();
    let pats = every_pattern(n);
    for g in &pats {
        // Semantic alive agrees with the field of the relation.
        let sem = truth_set(m, &Formula::alive(g.clone())).unwrap();
        assert_eq!(sem, m.alive_set(g), "{name}: alive {}", m.universe.fmt_pattern(g));
        assert_eq!(sem, alive_set(m, g), "{name}");

        let r = m.relation(g);
        for group in g.groups() {
            for b in group.subsets().filter(|b| !b.is_empty()) {
                let single = AgentPattern::of(b);
                assert!(r.is_subset(&m.relation(&single)), "{name}: {} not below {}", m.universe.fmt_pattern(g), m.universe.fmt_set(b));
                let imp = Formula::implies(Formula::alive(g.clone()), Formula::alive(single));
                assert!(truth_set(m, &imp).unwrap().iter().all(|&t| t), "{name}");
            }
        }

        // alive(G) and dead(G^C) single out the worlds whose alive sets
        // have the same maximal groups as G.
        let exact = Formula::and(Formula::alive(g.clone()), Formula::dead(&pattern_complement(g, full)));
        let sem = truth_set(m, &exact).unwrap();
        for w in 0..m.len() {
            let same = g.maximal() == m.bar(w).maximal();
            assert_eq!(sem[w], same, "{name}: {} at {}", m.universe.fmt_pattern(g), m.worlds[w]);
        }
    }
    for w in 0..m.len() {
        let bar = m.bar(w);
        let f = Formula::and(Formula::alive(bar.clone()), Formula::dead(&pattern_complement(&bar, full)));
        assert!(truth_set(m, &f).unwrap()[w], "{name}: own alive set at {}", m.worlds[w]);
    }
}

#[test]
fn alive_and_dead_in_kappa_models() {
    let models = kappa_models();
    assert!(models.len() > 30);
    for (name, m) in &models {
        alive_facts(name, m);
    }
}

/// Adds a copy of world `w` that no formula can tell apart from it.
fn with_twin(m: &PreModel, w: usize) -> PreModel {
    let synergy::kripke::Relations::Generated(edges) = &m.relations else {
        panic!("generated model expected");
    };
    let twin = m.len();
    let mut out: Vec<(usize, usize, AgentPattern)> = Vec::new();
    for e in edges {
        out.push((e.from, e.to, e.pattern.clone()));
        for (a, b) in [(e.from, e.to), (e.to, e.from)] {
            if a == w {
                out.push((twin, if b == w { twin } else { b }, e.pattern.clone()));
            }
        }
    }
    out.push((w, twin, m.bar(w).maximal()));
    let mut worlds = m.worlds.clone();
    worlds.push(format!("{}'", m.worlds[w]));
    let mut valuation = m.valuation.clone();
    valuation.push(m.valuation[w].clone());
    PreModel::generated(m.universe.clone(), worlds, out, valuation).unwrap()
}

fn suite_for(m: &PreModel, depth: usize) -> Vec<Formula> {
    let props = suite_props(m.props(), 2);
    let pats = suite_patterns(AgentSet::first(m.universe.len()));
    formula_suite(&props, &pats, depth).unwrap()
}

#[test]
fn quotient_of_twinned_models() {
    for i in 0..20 {
        let base = gen_proper_delta(&GenParams::sample(SEED, i, 3, 4, 2)).unwrap();
        let w = (i as usize) % base.len();
        let m = with_twin(&base, w);
        assert!(check_frame(&m, Level::Delta).passes(), "sample {i}");
        assert!(!check_frame(&m, Level::Proper).passes(), "sample {i}");

        let q = quotient(&m).unwrap();
        assert_eq!(q.model.len(), base.len(), "sample {i}");
        assert_eq!(q.class_of[m.len() - 1], q.class_of[w]);
        assert!(check_frame(&q.model, Level::Proper).passes(), "sample {i}");

        for f in suite_for(&m, 2) {
            let before = truth_set(&m, &f).unwrap();
            let after = truth_set(&q.model, &f).unwrap();
            for x in 0..m.len() {
                assert_eq!(before[x], after[q.class_of[x]], "sample {i}");
            }
        }
    }
}

#[test]
fn quotient_of_corpus_models() {
    let kripke = |name| match load_example(name).unwrap() {
        AnyModel::Kripke(m) => m,
        AnyModel::Simplicial(_) => panic!("{name} is a Kripke example"),
    };
    assert!(matches!(quotient(&kripke("nostd")), Err(QuotientError::NotDelta { property: "D", .. })));
    for name in ["fig3", "improper"] {
        let m = kripke(name);
        let q = quotient(&m).unwrap();
        assert!(check_frame(&q.model, Level::Proper).passes(), "{name}");
        let classes: BTreeSet<usize> = q.class_of.iter().copied().collect();
        assert_eq!(classes.len(), q.model.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_kappa_models_satisfy_alive_facts(seed in any::<u64>(), agents in 1usize..=3, worlds in 1usize..=4) {
        let m = gen_kappa(&GenParams::new(agents, worlds, 1, seed)).unwrap();
        prop_assert!(check_frame(&m, Level::Kappa).passes());
        alive_facts(&format!("seed {seed}"), &m);
    }

    #[test]
    fn generated_proper_models_are_fixed_by_quotient(seed in any::<u64>(), agents in 1usize..=3, worlds in 1usize..=4) {
        let m = gen_proper_delta(&GenParams::new(agents, worlds, 1, seed)).unwrap();
        prop_assert!(check_frame(&m, Level::Proper).passes());
        let q = quotient(&m).unwrap();
        prop_assert_eq!(q.model.len(), m.len());
    }
}
