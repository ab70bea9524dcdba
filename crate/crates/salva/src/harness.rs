//! Seed-driven random language generation, differential testing against the
//! naive oracle, theorem stress search, and counterexample minimization.
//! Everything here is a pure function of (spec, seed, budget).

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::checkers::{check_ic, check_sst, validate_witness, IcVariant};
use crate::congruence::{sst_closure, ClosureOutcome, Normalizer};
use crate::error::Error;
use crate::expressivity::{certify_saturation, expressivity_curve, CertifyOutcome};
use crate::io::{language_to_file, LanguageFile};
use crate::model::{
    all_strings_upto, mk_explicit, mk_transform_semantics, Alphabet, Language, MeaningId, Str,
};
use crate::naive::{naive_check_ic, naive_check_sst};

const CLOSURE_SEED_ATTEMPTS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenKind {
    /// Include each string up to the horizon independently with probability
    /// `density`, with a uniform meaning among `meaning_count` labels.
    ExplicitRandom {
        alphabet_size: usize,
        horizon: usize,
        density: f64,
        meaning_count: usize,
    },
    /// Draw each symbol's state function uniformly.
    TransformRandom {
        alphabet_size: usize,
        state_count: usize,
        horizon: usize,
    },
    /// Draw a random seed table and complete it under substitution closure,
    /// retrying on conflicts. Produces substitution-true languages that are
    /// not free monoids, where the constructibility variants genuinely
    /// diverge.
    ClosureSeeded {
        alphabet_size: usize,
        horizon: usize,
        seed_entries: usize,
        meaning_count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub kind: GenKind,
    pub rng_seed: u64,
}

/// splitmix64, used to derive independent per-sample seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic function of the spec: same seed, same language.
pub fn generate(spec: &GenSpec) -> Result<Language, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(spec.rng_seed);
    match &spec.kind {
        GenKind::ExplicitRandom {
            alphabet_size,
            horizon,
            density,
            meaning_count,
        } => {
            if *alphabet_size == 0 || *horizon == 0 || *meaning_count == 0 {
                return Err(Error::Parse("generator parameters must be positive".into()));
            }
            if !(*density > 0.0 && *density <= 1.0) {
                return Err(Error::Parse("density must be in (0, 1]".into()));
            }
            let alphabet = Alphabet::lowercase(*alphabet_size)?;
            let mut entries = Vec::new();
            for w in all_strings_upto(*alphabet_size, *horizon) {
                if rng.gen_bool(*density) {
                    let m = rng.gen_range(0..*meaning_count);
                    entries.push((w, MeaningId::new(format!("m{m}"))));
                }
            }
            mk_explicit(alphabet, entries, *horizon)
        }
        GenKind::TransformRandom {
            alphabet_size,
            state_count,
            horizon,
        } => {
            if *alphabet_size == 0 || *state_count == 0 || *horizon == 0 {
                return Err(Error::Parse("generator parameters must be positive".into()));
            }
            let alphabet = Alphabet::lowercase(*alphabet_size)?;
            let actions: Vec<Vec<usize>> = (0..*alphabet_size)
                .map(|_| (0..*state_count).map(|_| rng.gen_range(0..*state_count)).collect())
                .collect();
            mk_transform_semantics(alphabet, *state_count, actions, *horizon)
        }
        GenKind::ClosureSeeded {
            alphabet_size,
            horizon,
            seed_entries,
            meaning_count,
        } => {
            if *alphabet_size == 0 || *horizon == 0 || *seed_entries == 0 || *meaning_count == 0 {
                return Err(Error::Parse("generator parameters must be positive".into()));
            }
            let alphabet = Alphabet::lowercase(*alphabet_size)?;
            for _ in 0..CLOSURE_SEED_ATTEMPTS {
                let mut table: BTreeMap<Str, MeaningId> = BTreeMap::new();
                for _ in 0..*seed_entries {
                    let len = rng.gen_range(1..=*horizon);
                    let idx: Vec<u8> =
                        (0..len).map(|_| rng.gen_range(0..*alphabet_size) as u8).collect();
                    let m = rng.gen_range(0..*meaning_count);
                    table
                        .entry(Str::from_indices(idx))
                        .or_insert_with(|| MeaningId::new(format!("m{m}")));
                }
                let seed = mk_explicit(alphabet.clone(), table, *horizon)?;
                if let ClosureOutcome::Completed { language, .. } = sst_closure(&seed, *horizon)? {
                    return Ok(language);
                }
            }
            Err(Error::GenerationExhausted(CLOSURE_SEED_ATTEMPTS))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteCheck {
    /// Optimized checkers agree with the naive brute-force oracle.
    OracleAgreement,
    /// Transformation-semantics languages pass all structural checks.
    CorrectByConstruction,
    /// A plateau within the horizon means no longer string reaches a new
    /// meaning (for languages passing the structural preconditions).
    PlateauSaturation,
    /// Strict growth up to H forces at least H distinct meanings.
    BackwardGrowth,
    /// Idempotence, meaning preservation, length non-increase, canonicity.
    NormalizationLaws,
    /// Completed closures satisfy bounded substitutability.
    ClosureLaws,
}

impl SuiteCheck {
    pub fn name(self) -> &'static str {
        match self {
            SuiteCheck::OracleAgreement => "oracle-agreement",
            SuiteCheck::CorrectByConstruction => "correct-by-construction",
            SuiteCheck::PlateauSaturation => "plateau-saturation",
            SuiteCheck::BackwardGrowth => "backward-growth",
            SuiteCheck::NormalizationLaws => "normalization-laws",
            SuiteCheck::ClosureLaws => "closure-laws",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteFailure {
    pub sample_index: usize,
    pub rng_seed: u64,
    pub spec: GenSpec,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub total_samples: usize,
    pub checks: Vec<String>,
    pub checks_passed: usize,
    pub checks_failed: usize,
    pub failures: Vec<SuiteFailure>,
}

/// Run the selected invariant checks over a generated family. Failures are
/// data, not panics; each carries the seed needed to replay it.
pub fn run_property_suite(
    family: &[GenSpec],
    checks: &[SuiteCheck],
) -> Result<SuiteReport, Error> {
    let mut passed = 0usize;
    let mut failures = Vec::new();
    for (index, spec) in family.iter().enumerate() {
        let lang = generate(spec)?;
        for &check in checks {
            match run_check(&lang, spec, check)? {
                None => passed += 1,
                Some(detail) => failures.push(SuiteFailure {
                    sample_index: index,
                    rng_seed: spec.rng_seed,
                    spec: spec.clone(),
                    check: check.name().to_string(),
                    detail,
                }),
            }
        }
    }
    Ok(SuiteReport {
        total_samples: family.len(),
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        checks_passed: passed,
        checks_failed: failures.len(),
        failures,
    })
}

fn run_check(lang: &Language, spec: &GenSpec, check: SuiteCheck) -> Result<Option<String>, Error> {
    let h = lang.horizon();
    match check {
        SuiteCheck::OracleAgreement => {
            let fast = check_sst(lang, h)?;
            let slow = naive_check_sst(lang, h)?;
            if fast.holds != slow.holds {
                return Ok(Some(format!(
                    "sst verdicts disagree: optimized={} naive={}",
                    fast.holds, slow.holds
                )));
            }
            for (label, report) in [("optimized", &fast), ("naive", &slow)] {
                if let Some(w) = &report.witness {
                    if !validate_witness(lang, w) {
                        return Ok(Some(format!("{label} sst witness fails validation")));
                    }
                }
            }
            for variant in [IcVariant::Exists, IcVariant::AllPositions, IcVariant::RightExtension]
            {
                let f = check_ic(lang, h, variant)?;
                let s = naive_check_ic(lang, h, variant)?;
                if f.holds != s.holds {
                    return Ok(Some(format!("{} verdicts disagree", variant.property_name())));
                }
                for (label, report) in [("optimized", &f), ("naive", &s)] {
                    if let Some(w) = &report.witness {
                        if !validate_witness(lang, w) {
                            return Ok(Some(format!(
                                "{label} {} witness fails validation",
                                variant.property_name()
                            )));
                        }
                    }
                }
            }
            Ok(None)
        }
        SuiteCheck::CorrectByConstruction => {
            if !matches!(spec.kind, GenKind::TransformRandom { .. }) {
                return Ok(None);
            }
            if !check_sst(lang, h)?.holds {
                return Ok(Some("sst fails on a transform language".into()));
            }
            if !check_ic(lang, h, IcVariant::Exists)?.holds {
                return Ok(Some("ic-exists fails on a transform language".into()));
            }
            if !check_ic(lang, h, IcVariant::AllPositions)?.holds {
                return Ok(Some("ic-all-positions fails on a transform language".into()));
            }
            Ok(None)
        }
        SuiteCheck::PlateauSaturation => {
            let curve = expressivity_curve(lang, h)?;
            if curve.first_plateau.is_none() {
                return Ok(None);
            }
            match certify_saturation(lang, h) {
                Ok(CertifyOutcome::Refused(r)) => Ok(Some(format!(
                    "plateau {} but \"{}\" reaches a new meaning",
                    r.plateau,
                    lang.render(&r.offending)
                ))),
                Ok(_) => Ok(None),
                // languages outside the structural preconditions are not in
                // scope for this check
                Err(Error::PreconditionNotMet { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        }
        SuiteCheck::BackwardGrowth => {
            let curve = expressivity_curve(lang, h)?;
            if curve.strictly_growing && curve.distinct_meanings[h - 1] < h {
                return Ok(Some(format!(
                    "strict growth but only {} meanings at horizon {}",
                    curve.distinct_meanings[h - 1],
                    h
                )));
            }
            Ok(None)
        }
        SuiteCheck::NormalizationLaws => {
            let strings = lang.enumerate_strings(h)?;
            if strings.is_empty() {
                return Ok(None);
            }
            let norm = Normalizer::new(lang, h)?;
            let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(spec.rng_seed, 0x6e6f726d));
            let mut sample = Vec::with_capacity(24);
            for _ in 0..24 {
                sample.push(&strings[rng.gen_range(0..strings.len())]);
            }
            for &w in &sample {
                let r = norm.apply(lang, w)?;
                if r.len() > w.len() {
                    return Ok(Some(format!("|normalize({})| grew", lang.render(w))));
                }
                if lang.interpret(&r)? != lang.interpret(w)? {
                    return Ok(Some(format!("normalize({}) changed meaning", lang.render(w))));
                }
                if norm.apply(lang, &r)? != r {
                    return Ok(Some(format!("normalize({}) not idempotent", lang.render(w))));
                }
            }
            for &x in &sample {
                for &y in &sample {
                    let same_nf = norm.apply(lang, x)? == norm.apply(lang, y)?;
                    let synonymous = lang.interpret(x)? == lang.interpret(y)?;
                    if same_nf != synonymous {
                        return Ok(Some(format!(
                            "canonicity breaks on ({}, {})",
                            lang.render(x),
                            lang.render(y)
                        )));
                    }
                }
            }
            Ok(None)
        }
        SuiteCheck::ClosureLaws => {
            if lang.explicit_entries().is_none() {
                return Ok(None);
            }
            match sst_closure(lang, h)? {
                ClosureOutcome::Completed { language, .. } => {
                    if !check_sst(&language, h)?.holds {
                        return Ok(Some("completed closure fails sst".into()));
                    }
                    Ok(None)
                }
                ClosureOutcome::Conflict(_) => Ok(None),
            }
        }
    }
}

/// Replayable evidence that a plateau did not saturate: a language passing
/// bounded SST and existential constructibility (but not the all-positions
/// variant) in which some longer string reaches a fresh meaning.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StressFinding {
    pub sample_index: usize,
    pub rng_seed: u64,
    pub language: LanguageFile,
    pub plateau: usize,
    pub horizon: usize,
    pub offending: String,
    pub offending_meaning: String,
    pub sst_verified: bool,
    pub ic_variant_verified: String,
}

/// Sample languages from the template (per-sample seeds derived from its
/// seed), keep those where the existential and all-positions readings
/// diverge, and record every saturation refusal. An empty result is a valid
/// outcome.
pub fn search_counterexample(
    template: &GenSpec,
    budget: usize,
) -> Result<Vec<StressFinding>, Error> {
    if budget < 1 {
        return Err(Error::PreconditionNotMet {
            property: "budget >= 1".to_string(),
            report: None,
        });
    }
    let mut findings = Vec::new();
    for index in 0..budget {
        let spec = GenSpec {
            kind: template.kind.clone(),
            rng_seed: derive_seed(template.rng_seed, index as u64),
        };
        let lang = match generate(&spec) {
            Ok(l) => l,
            // a dry spell in closure-seeded generation is not a finding
            Err(Error::GenerationExhausted(_)) => continue,
            Err(e) => return Err(e),
        };
        let h = lang.horizon();
        if !check_sst(&lang, h)?.holds
            || !check_ic(&lang, h, IcVariant::Exists)?.holds
            || check_ic(&lang, h, IcVariant::AllPositions)?.holds
        {
            continue;
        }
        if let CertifyOutcome::Refused(r) = certify_saturation(&lang, h)? {
            findings.push(StressFinding {
                sample_index: index,
                rng_seed: spec.rng_seed,
                language: language_to_file(&lang)?,
                plateau: r.plateau,
                horizon: h,
                offending: lang.render(&r.offending),
                offending_meaning: r.offending_meaning.to_string(),
                sst_verified: true,
                ic_variant_verified: "exists".to_string(),
            });
        }
    }
    Ok(findings)
}

/// Re-verify every fact a finding claims from its serialized form alone.
pub fn verify_finding(finding: &StressFinding) -> Result<bool, Error> {
    let lang = crate::io::language_from_file(&finding.language)?;
    let h = finding.horizon;
    if !check_sst(&lang, h)?.holds || !check_ic(&lang, h, IcVariant::Exists)?.holds {
        return Ok(false);
    }
    match certify_saturation(&lang, h)? {
        CertifyOutcome::Refused(r) => Ok(r.plateau == finding.plateau
            && lang.render(&r.offending) == finding.offending
            && r.offending_meaning.to_string() == finding.offending_meaning),
        _ => Ok(false),
    }
}

/// Greedily remove table entries (canonical order) and shorten the horizon
/// while the predicate keeps failing. `predicate` returns true when the
/// property under investigation fails on the language. The result is
/// 1-minimal: removing any single remaining entry makes the predicate pass.
pub fn minimize<P>(lang: &Language, predicate: P) -> Result<Language, Error>
where
    P: Fn(&Language) -> bool,
{
    let table = lang
        .explicit_entries()
        .ok_or(Error::ExplicitBackendRequired)?;
    if !predicate(lang) {
        return Err(Error::PredicatePassesOnInput);
    }
    let mut entries: Vec<(Str, MeaningId)> =
        table.iter().map(|(s, m)| (s.clone(), m.clone())).collect();
    let mut horizon = lang.horizon();

    let build = |entries: &[(Str, MeaningId)], horizon: usize| -> Result<Language, Error> {
        let kept: Vec<_> = entries
            .iter()
            .filter(|(s, _)| s.len() <= horizon)
            .cloned()
            .collect();
        mk_explicit(lang.alphabet().clone(), kept, horizon)
    };

    loop {
        let mut changed = false;
        let mut i = 0;
        while i < entries.len() {
            let mut candidate = entries.clone();
            candidate.remove(i);
            let cand_lang = build(&candidate, horizon)?;
            if predicate(&cand_lang) {
                entries = candidate;
                changed = true;
            } else {
                i += 1;
            }
        }
        while horizon > 1 {
            let cand_lang = build(&entries, horizon - 1)?;
            if predicate(&cand_lang) {
                horizon -= 1;
                entries.retain(|(s, _)| s.len() <= horizon);
                changed = true;
            } else {
                break;
            }
        }
        if !changed {
            break;
        }
    }
    build(&entries, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::model::mk_explicit;

    fn explicit_spec(seed: u64) -> GenSpec {
        GenSpec {
            kind: GenKind::ExplicitRandom {
                alphabet_size: 2,
                horizon: 3,
                density: 0.5,
                meaning_count: 3,
            },
            rng_seed: seed,
        }
    }

    #[test]
    fn generate_is_deterministic() {
        for seed in [0u64, 1, 42] {
            let a = generate(&explicit_spec(seed)).unwrap();
            let b = generate(&explicit_spec(seed)).unwrap();
            assert_eq!(a.explicit_entries(), b.explicit_entries());
        }
        let spec = GenSpec {
            kind: GenKind::TransformRandom {
                alphabet_size: 2,
                state_count: 3,
                horizon: 4,
            },
            rng_seed: 7,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.transform_parts().unwrap().1, b.transform_parts().unwrap().1);
    }

    #[test]
    fn density_one_includes_everything() {
        let spec = GenSpec {
            kind: GenKind::ExplicitRandom {
                alphabet_size: 1,
                horizon: 2,
                density: 1.0,
                meaning_count: 1,
            },
            rng_seed: 5,
        };
        let l = generate(&spec).unwrap();
        let rendered: Vec<String> = l
            .explicit_entries()
            .unwrap()
            .keys()
            .map(|w| l.render(w))
            .collect();
        assert_eq!(rendered, vec!["a", "aa"]);
        let meanings: std::collections::HashSet<_> =
            l.explicit_entries().unwrap().values().collect();
        assert_eq!(meanings.len(), 1);
    }

    #[test]
    fn one_state_transform_has_one_meaning() {
        let spec = GenSpec {
            kind: GenKind::TransformRandom {
                alphabet_size: 2,
                state_count: 1,
                horizon: 3,
            },
            rng_seed: 11,
        };
        let l = generate(&spec).unwrap();
        let ms: std::collections::HashSet<_> = l
            .enumerate_strings(3)
            .unwrap()
            .iter()
            .map(|w| l.interpret(w).unwrap())
            .collect();
        assert_eq!(ms.len(), 1);
    }

    #[test]
    fn closure_seeded_languages_pass_sst() {
        for seed in 0..10u64 {
            let spec = GenSpec {
                kind: GenKind::ClosureSeeded {
                    alphabet_size: 2,
                    horizon: 4,
                    seed_entries: 3,
                    meaning_count: 2,
                },
                rng_seed: seed,
            };
            match generate(&spec) {
                Ok(l) => assert!(check_sst(&l, l.horizon()).unwrap().holds),
                Err(Error::GenerationExhausted(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn suite_on_empty_family_is_empty() {
        let report = run_property_suite(&[], &[SuiteCheck::OracleAgreement]).unwrap();
        assert_eq!(report.total_samples, 0);
        assert_eq!(report.checks_failed, 0);
    }

    #[test]
    fn suite_oracle_agreement_on_small_family() {
        let family: Vec<GenSpec> = (0..20).map(|i| explicit_spec(derive_seed(3, i))).collect();
        let report = run_property_suite(&family, &[SuiteCheck::OracleAgreement]).unwrap();
        assert_eq!(report.checks_failed, 0, "{:?}", report.failures);
    }

    #[test]
    fn suite_transform_checks_pass() {
        let family: Vec<GenSpec> = (0..20)
            .map(|i| GenSpec {
                kind: GenKind::TransformRandom {
                    alphabet_size: 2,
                    state_count: 2,
                    horizon: 5,
                },
                rng_seed: derive_seed(9, i),
            })
            .collect();
        let report = run_property_suite(
            &family,
            &[
                SuiteCheck::CorrectByConstruction,
                SuiteCheck::PlateauSaturation,
                SuiteCheck::BackwardGrowth,
                SuiteCheck::NormalizationLaws,
            ],
        )
        .unwrap();
        assert_eq!(report.checks_failed, 0, "{:?}", report.failures);
    }

    #[test]
    fn stress_search_rejects_zero_budget() {
        let t = explicit_spec(0);
        assert!(matches!(
            search_counterexample(&t, 0),
            Err(Error::PreconditionNotMet { .. })
        ));
    }

    #[test]
    fn stress_search_on_transform_family_finds_nothing() {
        // all-positions always holds on transform languages, so the filter
        // is empty
        let t = GenSpec {
            kind: GenKind::TransformRandom {
                alphabet_size: 2,
                state_count: 2,
                horizon: 4,
            },
            rng_seed: 1,
        };
        assert!(search_counterexample(&t, 10).unwrap().is_empty());
    }

    #[test]
    fn stress_search_findings_replay() {
        let t = GenSpec {
            kind: GenKind::ClosureSeeded {
                alphabet_size: 2,
                horizon: 5,
                seed_entries: 4,
                meaning_count: 2,
            },
            rng_seed: 2024,
        };
        for finding in search_counterexample(&t, 40).unwrap() {
            assert!(verify_finding(&finding).unwrap());
        }
    }

    #[test]
    fn minimize_e1_is_already_minimal() {
        let e1 = builtins::e1();
        let fails_sst = |l: &Language| !check_sst(l, l.horizon()).unwrap().holds;
        let min = minimize(&e1, fails_sst).unwrap();
        assert_eq!(min.explicit_entries().unwrap().len(), 3);
        assert!(fails_sst(&min));
    }

    #[test]
    fn minimize_drops_irrelevant_entry() {
        let e1 = builtins::e1();
        let mut entries: Vec<_> = e1
            .explicit_entries()
            .unwrap()
            .iter()
            .map(|(s, m)| (s.clone(), m.clone()))
            .collect();
        entries.push((e1.parse("d").unwrap(), MeaningId::new("m9")));
        let padded = mk_explicit(e1.alphabet().clone(), entries, 3).unwrap();
        let fails_sst = |l: &Language| !check_sst(l, l.horizon()).unwrap().holds;
        let min = minimize(&padded, fails_sst).unwrap();
        assert_eq!(min.explicit_entries().unwrap().len(), 3);
        assert!(!min
            .explicit_entries()
            .unwrap()
            .contains_key(&e1.parse("d").unwrap()));
    }

    #[test]
    fn minimize_rejects_passing_predicate() {
        let t1 = builtins::t1();
        let fails_sst = |l: &Language| !check_sst(l, l.horizon()).unwrap().holds;
        assert!(matches!(
            minimize(&t1, fails_sst),
            Err(Error::PredicatePassesOnInput)
        ));
    }
}
