use synergy::{AgentPattern, Frame};
use synergy::kripke::{check_delta_within, check_frame, Level};
use synergy::semantics::truth_set;
use synergy::translate::suite_patterns;
use synergy::unravel::{arrow, check_common_prefix, check_functional_bisim, joint_patterns, unravel_model, UnboundedTruth};
use synergy::verify::gen::{gen_kappa, GenParams};
use synergy::verify::suite::{formula_suite, suite_props};

const SEED: u64 = 2024;

fn sample(i: u64) -> synergy::PreModel {
    gen_kappa(&GenParams::sample(SEED, i, 3, 4, 2)).unwrap()
}

#[test]
fn interior_satisfies_d_bisim_and_prefix() {
    for i in 0..40 {
        let m = sample(i);
        let u = unravel_model(&m, 3).unwrap();
        let interior = u.interior();
        assert_eq!(check_delta_within(&u.model, &interior), None, "sample {i}");
        let pats = joint_patterns(&[&u.model, &m]);
        let v = check_functional_bisim(&u.model, &m, &u.last_map(), &pats, Some(&interior)).unwrap();
        assert_eq!(v, None, "sample {i}");
        assert_eq!(check_common_prefix(&u, &pats), None, "sample {i}");
    }
}

#[test]
fn unbounded_truth_matches_last_world() {
    for i in 0..60 {
        let m = sample(i);
        let u = unravel_model(&m, 3).unwrap();
        let pats = suite_patterns(m.universe.full());
        let suite = formula_suite(&suite_props(m.props(), 2), &pats, 2).unwrap();
        let mut ut = UnboundedTruth::new(&m, &pats, 2).unwrap();
        let last = u.last_map();
        for f in &suite {
            let tm = truth_set(&m, f).unwrap();
            for (h, hist) in u.histories.iter().enumerate() {
                assert_eq!(ut.eval(hist, f), Some(tm[last[h]]), "sample {i}, history {}", hist.name(&m));
            }
        }
    }
}

// A frontier history has no extensions, so a box evaluated there in the
// bounded model can be vacuously true. Sample 36 hits this at an interior
// history for a depth-2 formula.
#[test]
fn bounded_frontier_can_change_truth() {
    let m = sample(36);
    assert!(check_frame(&m, Level::Kappa).passes());
    let u = unravel_model(&m, 3).unwrap();
    let pats = suite_patterns(m.universe.full());
    let suite = formula_suite(&suite_props(m.props(), 2), &pats, 2).unwrap();
    let interior = u.interior();
    let last = u.last_map();
    let differs = suite.iter().any(|f| {
        let tm = truth_set(&m, f).unwrap();
        let tu = truth_set(&u.model, f).unwrap();
        (0..u.histories.len()).any(|h| interior[h] && tu[h] != tm[last[h]])
    });
    assert!(differs);
}

#[test]
fn arrows_are_monotone() {
    for i in 0..20 {
        let m = sample(i);
        let u = unravel_model(&m, 2).unwrap();
        let pats = suite_patterns(m.universe.full());
        for (c, child) in u.histories.iter().enumerate() {
            let Some(p) = u.parent[c] else { continue };
            let parent = &u.histories[p];
            for g in &pats {
                if !arrow(parent, child, g) {
                    continue;
                }
                for h in pats.iter().filter(|h| h.is_subset(g)) {
                    assert!(arrow(parent, child, h), "sample {i}");
                }
                for group in g.groups() {
                    for b in group.subsets().filter(|b| !b.is_empty()) {
                        assert!(arrow(parent, child, &AgentPattern::of(b)), "sample {i}");
                    }
                }
                for h in pats.iter().filter(|h| arrow(parent, child, h)) {
                    assert!(arrow(parent, child, &g.union(h)), "sample {i}");
                }
            }
            assert!(!arrow(child, parent, &pats[0]));
        }
    }
}

#[test]
fn related_histories_end_in_related_worlds() {
    for i in 0..30 {
        let m = sample(i);
        let u = unravel_model(&m, 3).unwrap();
        let last = u.last_map();
        for g in joint_patterns(&[&u.model, &m]) {
            let src = m.relation(&g);
            for (h, k) in u.model.relation(&g).pairs() {
                assert!(src.related(last[h], last[k]), "sample {i}");
            }
        }
    }
}
