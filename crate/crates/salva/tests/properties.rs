use proptest::prelude::*;

use salva::checkers::{check_ic, check_sst, IcVariant};
use salva::congruence::{sst_closure, ClosureOutcome, Normalizer};
use salva::harness::{generate, GenKind, GenSpec};
use salva::naive::{naive_check_ic, naive_check_sst};

fn explicit_spec(seed: u64) -> GenSpec {
    GenSpec {
        kind: GenKind::ExplicitRandom {
            alphabet_size: 1 + (seed % 3) as usize,
            horizon: 2 + (seed % 4) as usize,
            density: 0.5,
            meaning_count: 1 + (seed % 5) as usize,
        },
        rng_seed: seed,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimized_checkers_agree_with_naive(seed in any::<u64>()) {
        let lang = generate(&explicit_spec(seed)).unwrap();
        let h = lang.horizon();
        let fast = check_sst(&lang, h).unwrap();
        let slow = naive_check_sst(&lang, h).unwrap();
        prop_assert_eq!(fast.holds, slow.holds);
        prop_assert_eq!(fast.witness, slow.witness);
        for variant in [IcVariant::Exists, IcVariant::AllPositions, IcVariant::RightExtension] {
            let f = check_ic(&lang, h, variant).unwrap();
            let s = naive_check_ic(&lang, h, variant).unwrap();
            prop_assert_eq!(f.holds, s.holds);
            prop_assert_eq!(f.witness, s.witness);
        }
    }

    #[test]
    fn transform_languages_satisfy_invariants(seed in any::<u64>()) {
        let spec = GenSpec {
            kind: GenKind::TransformRandom {
                alphabet_size: 1 + (seed % 3) as usize,
                state_count: 1 + (seed % 4) as usize,
                horizon: 6,
            },
            rng_seed: seed,
        };
        let lang = generate(&spec).unwrap();
        prop_assert!(check_sst(&lang, 6).unwrap().holds);
        prop_assert!(check_ic(&lang, 6, IcVariant::AllPositions).unwrap().holds);

        let norm = Normalizer::new(&lang, 6).unwrap();
        for w in lang.enumerate_strings(6).unwrap() {
            let r = norm.apply(&lang, &w).unwrap();
            prop_assert!(r.len() <= w.len());
            prop_assert_eq!(lang.interpret(&r).unwrap(), lang.interpret(&w).unwrap());
            prop_assert_eq!(norm.apply(&lang, &r).unwrap(), r);
        }
    }

    #[test]
    fn completed_closures_extend_seed_and_pass_check(seed in any::<u64>()) {
        let lang = generate(&explicit_spec(seed)).unwrap();
        let h = lang.horizon();
        if let ClosureOutcome::Completed { language, added } = sst_closure(&lang, h).unwrap() {
            prop_assert!(check_sst(&language, h).unwrap().holds);
            let seed_table = lang.explicit_entries().unwrap();
            let full_table = language.explicit_entries().unwrap();
            prop_assert_eq!(seed_table.len() + added.len(), full_table.len());
            for (s, m) in seed_table {
                prop_assert_eq!(full_table.get(s), Some(m));
            }
            for (s, m) in &added {
                prop_assert_eq!(full_table.get(s), Some(m));
                prop_assert!(!seed_table.contains_key(s));
            }
        }
    }
}
