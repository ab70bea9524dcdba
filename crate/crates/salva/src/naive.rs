//! Literal brute-force re-implementations of the checkers, kept deliberately
//! separate from the optimized code path. These follow the definitions word
//! for word (all synonym pairs against all factorizations) and serve as the
//! differential-testing oracle for `checkers`.

use std::collections::HashMap;

use crate::checkers::{
    CheckReport, IcVariant, IcViolation, IcWitnessKind, SstKind, SstViolation, Violation,
};
use crate::error::Error;
use crate::model::{concat3, Language, MeaningId, Str};

/// Quadruple loop straight from the definition: every ordered synonym pair
/// `(u, v)`, every member `w`, every occurrence of `u` in `w`.
pub fn naive_check_sst(lang: &Language, horizon: usize) -> Result<CheckReport, Error> {
    if horizon < 1 || horizon > lang.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: horizon,
            horizon: lang.horizon(),
        });
    }
    let strings = lang.enumerate_strings(horizon)?;
    let mut meaning: HashMap<&Str, MeaningId> = HashMap::new();
    for w in &strings {
        meaning.insert(w, lang.interpret(w)?);
    }

    let mut pairs: u64 = 0;
    let mut best: Option<((usize, Str, Str, Str, Str, Str), SstViolation)> = None;

    for u in &strings {
        for v in &strings {
            if u == v || meaning[u] != meaning[v] {
                continue;
            }
            for w in &strings {
                if w.len() < u.len() {
                    continue;
                }
                for i in 0..=(w.len() - u.len()) {
                    let j = i + u.len();
                    if w.indices()[i..j] != *u.indices() {
                        continue;
                    }
                    let (alpha, _, beta) = w.split3(i, j);
                    let result = concat3(&alpha, v, &beta);
                    if result.len() > horizon {
                        continue;
                    }
                    pairs += 1;
                    let violation = if !lang.is_wellformed(&result)? {
                        Some(SstViolation {
                            u: u.clone(),
                            v: v.clone(),
                            alpha,
                            beta,
                            context: w.clone(),
                            result,
                            kind: SstKind::IllFormed,
                            context_meaning: meaning[w].clone(),
                            result_meaning: None,
                        })
                    } else {
                        let mr = lang.interpret(&result)?;
                        if mr != meaning[w] {
                            Some(SstViolation {
                                u: u.clone(),
                                v: v.clone(),
                                alpha,
                                beta,
                                context: w.clone(),
                                result,
                                kind: SstKind::MeaningChanged,
                                context_meaning: meaning[w].clone(),
                                result_meaning: Some(mr),
                            })
                        } else {
                            None
                        }
                    };
                    if let Some(viol) = violation {
                        let key = (
                            viol.context.len() + viol.result.len(),
                            viol.context.clone(),
                            viol.result.clone(),
                            viol.u.clone(),
                            viol.v.clone(),
                            viol.alpha.clone(),
                        );
                        match &best {
                            Some((k, _)) if *k <= key => {}
                            _ => best = Some((key, viol)),
                        }
                    }
                }
            }
        }
    }

    let witness = best.map(|(_, v)| Violation::Sst(v));
    Ok(CheckReport {
        property: "sst".to_string(),
        holds: witness.is_none(),
        horizon,
        witness,
        pairs_examined: pairs,
    })
}

/// Constructibility by scanning splits with linear membership lookups.
pub fn naive_check_ic(
    lang: &Language,
    horizon: usize,
    variant: IcVariant,
) -> Result<CheckReport, Error> {
    if horizon < 1 || horizon > lang.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: horizon,
            horizon: lang.horizon(),
        });
    }
    let strings = lang.enumerate_strings(horizon)?;
    let is_member = |s: &Str| strings.contains(s);
    let mut pairs: u64 = 0;
    let mut witness = None;

    for w in &strings {
        if w.len() < 2 {
            continue;
        }
        let fail = match variant {
            IcVariant::Exists => {
                let mut ok = false;
                for j in 1..w.len() {
                    pairs += 1;
                    if is_member(&w.slice(0, j)) && is_member(&w.slice(j, w.len())) {
                        ok = true;
                        break;
                    }
                }
                if ok {
                    None
                } else {
                    Some(IcWitnessKind::Exists)
                }
            }
            IcVariant::AllPositions => {
                let mut bad = None;
                for j in 1..w.len() {
                    pairs += 1;
                    if !(is_member(&w.slice(0, j)) && is_member(&w.slice(j, w.len()))) {
                        bad = Some(IcWitnessKind::AtPosition(j));
                        break;
                    }
                }
                bad
            }
            IcVariant::RightExtension => {
                pairs += 1;
                let prefix = w.slice(0, w.len() - 1);
                let last = w.slice(w.len() - 1, w.len());
                if is_member(&prefix) && is_member(&last) {
                    None
                } else {
                    Some(IcWitnessKind::RightExtension)
                }
            }
        };
        if let Some(kind) = fail {
            witness = Some(IcViolation { w: w.clone(), kind });
            break;
        }
    }

    Ok(CheckReport {
        property: variant.property_name().to_string(),
        holds: witness.is_none(),
        horizon,
        witness: witness.map(Violation::Ic),
        pairs_examined: pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::checkers::{check_ic, check_sst, validate_witness};

    #[test]
    fn agrees_with_optimized_on_builtins() {
        for lang in [builtins::e1(), builtins::t1(), builtins::tr1()] {
            let h = lang.horizon();
            let fast = check_sst(&lang, h).unwrap();
            let slow = naive_check_sst(&lang, h).unwrap();
            assert_eq!(fast.holds, slow.holds);
            if let Some(w) = &fast.witness {
                assert!(validate_witness(&lang, w));
            }
            if let Some(w) = &slow.witness {
                assert!(validate_witness(&lang, w));
            }
            for variant in [
                IcVariant::Exists,
                IcVariant::AllPositions,
                IcVariant::RightExtension,
            ] {
                let f = check_ic(&lang, h, variant).unwrap();
                let s = naive_check_ic(&lang, h, variant).unwrap();
                assert_eq!(f.holds, s.holds);
                assert_eq!(f.witness, s.witness);
            }
        }
    }

    #[test]
    fn same_minimal_witness_on_e1() {
        let e1 = builtins::e1();
        let fast = check_sst(&e1, 3).unwrap();
        let slow = naive_check_sst(&e1, 3).unwrap();
        assert_eq!(fast.witness, slow.witness);
    }
}
