use proptest::prelude::*;
use synergy::corpus::{example_names, load_example};
use synergy::io::AnyModel;
use synergy::kripke::{check_frame, Level};
use synergy::simplicial::validate_complex;
use synergy::verify::gen::{gen_complex, read_back, GenParams};
use synergy::verify::lemmas::{simplicial_lemmas, simplicial_lemmas_with, LemmaTables};

const SEED: u64 = 2024;

#[test]
fn generated_complexes_at_three_agents() {
    let tables = LemmaTables::new(3).unwrap();
    for i in 0..200 {
        let m = gen_complex(&GenParams::new(3, 1 + (i as usize) % 5, 2, SEED.wrapping_add(i))).unwrap();
        assert_eq!(validate_complex(&m.complex), Ok(()), "sample {i}");
        let report = simplicial_lemmas_with(&tables, &m);
        assert!(report.passed(), "sample {i}: {:?}", report.violations().collect::<Vec<_>>());
        assert!(check_frame(&read_back(&m), Level::Proper).passes(), "sample {i}");
    }
}

#[test]
fn corpus_examples_meet_their_level() {
    for name in example_names() {
        let expected = match name {
            "nostd" => Level::Kappa,
            "improper" => Level::Delta,
            _ => Level::Proper,
        };
        match load_example(name).unwrap() {
            AnyModel::Simplicial(s) => {
                assert!(simplicial_lemmas(&s).unwrap().passed(), "{name}");
                assert!(check_frame(&read_back(&s), expected).passes(), "{name}");
            }
            AnyModel::Kripke(m) => {
                assert!(check_frame(&m, expected).passes(), "{name}");
                let stricter = match expected {
                    Level::Kappa => Some(Level::Delta),
                    Level::Delta => Some(Level::Proper),
                    Level::Proper => None,
                };
                if let Some(level) = stricter {
                    assert!(!check_frame(&m, level).passes(), "{name}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_complexes_pass_every_lemma(seed in any::<u64>(), agents in 1usize..=4, worlds in 1usize..=5) {
        let m = gen_complex(&GenParams::new(agents, worlds, 1, seed)).unwrap();
        prop_assert_eq!(validate_complex(&m.complex), Ok(()));
        let report = simplicial_lemmas(&m).unwrap();
        prop_assert!(report.passed());
    }
}
