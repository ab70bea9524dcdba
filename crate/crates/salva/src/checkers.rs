//! Deciders for the two structural constraints over a horizon, with minimal
//! witnesses on failure.
//!
//! `check_sst` decides bounded substitutability: for every synonym pair
//! `(u, v)` and every factorization `alpha·u·beta` in `S`, the substituted
//! string must be well-formed with the same meaning. Substitutions whose
//! result exceeds the horizon are not judged.
//!
//! `check_ic` decides inductive constructibility in three strengths:
//! existence of one split, splittability at every position, and
//! right-extension by a single symbol.

use std::collections::HashMap;

use crate::error::Error;
use crate::model::{concat3, Language, MeaningId, Str};

/// How a substitution witness fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SstKind {
    /// The substituted string falls outside `S`.
    IllFormed,
    /// The substituted string is in `S` but carries a different meaning.
    MeaningChanged,
}

/// Minimal evidence that substitutability fails: synonyms `u, v`, the context
/// split `alpha·u·beta`, and the offending result `alpha·v·beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SstViolation {
    pub u: Str,
    pub v: Str,
    pub alpha: Str,
    pub beta: Str,
    pub context: Str,
    pub result: Str,
    pub kind: SstKind,
    pub context_meaning: MeaningId,
    pub result_meaning: Option<MeaningId>,
}

/// Which constructibility reading a witness refutes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IcWitnessKind {
    /// No split of `w` into two members exists.
    Exists,
    /// The split at this position fails.
    AtPosition(usize),
    /// `w` is not a member followed by a single-symbol member.
    RightExtension,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcViolation {
    pub w: Str,
    pub kind: IcWitnessKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Sst(SstViolation),
    Ic(IcViolation),
}

/// Outcome of a property check. `holds` is true exactly when no witness was
/// found; `pairs_examined` counts the substitution instances (or splits)
/// actually judged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub property: String,
    pub holds: bool,
    pub horizon: usize,
    pub witness: Option<Violation>,
    pub pairs_examined: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcVariant {
    Exists,
    AllPositions,
    RightExtension,
}

impl IcVariant {
    pub fn property_name(self) -> &'static str {
        match self {
            IcVariant::Exists => "ic-exists",
            IcVariant::AllPositions => "ic-all-positions",
            IcVariant::RightExtension => "ic-right-extension",
        }
    }
}

/// Total order on substitution witnesses: result-plus-context length first,
/// then canonical string order, so failing runs reproduce bit for bit.
fn witness_key(v: &SstViolation) -> (usize, Str, Str, Str, Str, Str) {
    (
        v.context.len() + v.result.len(),
        v.context.clone(),
        v.result.clone(),
        v.u.clone(),
        v.v.clone(),
        v.alpha.clone(),
    )
}

struct MinWitness {
    best: Option<((usize, Str, Str, Str, Str, Str), SstViolation)>,
}

impl MinWitness {
    fn new() -> Self {
        MinWitness { best: None }
    }

    fn offer(&mut self, v: SstViolation) {
        let key = witness_key(&v);
        match &self.best {
            Some((k, _)) if *k <= key => {}
            _ => self.best = Some((key, v)),
        }
    }
}

/// Decide bounded substitutability of synonymous terms up to `horizon`.
///
/// Groups factorizations of members by `(alpha, beta, meaning-of-u)`: within
/// a bucket, every synonym that fits the horizon must occur (else some
/// substitution leaves `S`) and all occurrences must share the context's
/// meaning. This judges exactly the per-occurrence substitution instances
/// without enumerating synonym pairs against every context.
pub fn check_sst(lang: &Language, horizon: usize) -> Result<CheckReport, Error> {
    if horizon < 1 || horizon > lang.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: horizon,
            horizon: lang.horizon(),
        });
    }
    let strings = lang.enumerate_strings(horizon)?;
    let mut meaning: HashMap<Str, MeaningId> = HashMap::with_capacity(strings.len());
    let mut classes: HashMap<MeaningId, Vec<Str>> = HashMap::new();
    for w in &strings {
        let m = lang.interpret(w)?;
        classes.entry(m.clone()).or_default().push(w.clone());
        meaning.insert(w.clone(), m);
    }

    // (alpha, beta, meaning of the replaced part) -> occupants (u, h(alpha u beta))
    let mut buckets: HashMap<(Str, Str, MeaningId), Vec<(Str, MeaningId)>> = HashMap::new();
    for w in &strings {
        let mw = &meaning[w];
        for i in 0..w.len() {
            for j in (i + 1)..=w.len() {
                let (alpha, u, beta) = w.split3(i, j);
                if let Some(mu) = meaning.get(&u) {
                    if classes[mu].len() < 2 {
                        continue;
                    }
                    buckets
                        .entry((alpha, beta, mu.clone()))
                        .or_default()
                        .push((u, mw.clone()));
                }
            }
        }
    }

    let mut pairs: u64 = 0;
    let mut min = MinWitness::new();
    for ((alpha, beta, mu), present) in &buckets {
        let fit = horizon - alpha.len() - beta.len();
        // class members are in canonical (length-major) order
        let class = &classes[mu];
        let required: &[Str] = {
            let cut = class.partition_point(|v| v.len() <= fit);
            &class[..cut]
        };
        if required.len() < 2 {
            continue;
        }
        pairs += present.len() as u64 * (required.len() as u64 - 1);

        let uniform = present
            .iter()
            .all(|(_, m)| *m == present[0].1);
        if present.len() == required.len() && uniform {
            continue;
        }

        let have: HashMap<&Str, &MeaningId> =
            present.iter().map(|(u, m)| (u, m)).collect();
        for (u, mw) in present {
            let context = concat3(alpha, u, beta);
            for v in required {
                if v == u {
                    continue;
                }
                match have.get(v) {
                    None => {
                        min.offer(SstViolation {
                            u: u.clone(),
                            v: v.clone(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            context: context.clone(),
                            result: concat3(alpha, v, beta),
                            kind: SstKind::IllFormed,
                            context_meaning: mw.clone(),
                            result_meaning: None,
                        });
                    }
                    Some(mv) if **mv != *mw => {
                        min.offer(SstViolation {
                            u: u.clone(),
                            v: v.clone(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            context: context.clone(),
                            result: concat3(alpha, v, beta),
                            kind: SstKind::MeaningChanged,
                            context_meaning: mw.clone(),
                            result_meaning: Some((*mv).clone()),
                        });
                    }
                    _ => {}
                }
            }
        }
    }

    let witness = min.best.map(|(_, v)| Violation::Sst(v));
    Ok(CheckReport {
        property: "sst".to_string(),
        holds: witness.is_none(),
        horizon,
        witness,
        pairs_examined: pairs,
    })
}

/// Decide an inductive-constructibility variant up to `horizon`. The witness,
/// when present, is the canonically least failing string.
pub fn check_ic(lang: &Language, horizon: usize, variant: IcVariant) -> Result<CheckReport, Error> {
    if horizon < 1 || horizon > lang.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: horizon,
            horizon: lang.horizon(),
        });
    }
    let strings = lang.enumerate_strings(horizon)?;
    let member: std::collections::HashSet<&Str> = strings.iter().collect();
    let mut pairs: u64 = 0;
    let mut witness: Option<IcViolation> = None;

    'outer: for w in &strings {
        if w.len() < 2 {
            continue;
        }
        match variant {
            IcVariant::Exists => {
                let mut found = false;
                for j in 1..w.len() {
                    pairs += 1;
                    if member.contains(&w.slice(0, j)) && member.contains(&w.slice(j, w.len())) {
                        found = true;
                        break;
                    }
                }
                if !found {
                    witness = Some(IcViolation {
                        w: w.clone(),
                        kind: IcWitnessKind::Exists,
                    });
                    break 'outer;
                }
            }
            IcVariant::AllPositions => {
                for j in 1..w.len() {
                    pairs += 1;
                    if !(member.contains(&w.slice(0, j)) && member.contains(&w.slice(j, w.len())))
                    {
                        witness = Some(IcViolation {
                            w: w.clone(),
                            kind: IcWitnessKind::AtPosition(j),
                        });
                        break 'outer;
                    }
                }
            }
            IcVariant::RightExtension => {
                pairs += 1;
                let prefix = w.slice(0, w.len() - 1);
                let last = w.slice(w.len() - 1, w.len());
                if !(member.contains(&prefix) && member.contains(&last)) {
                    witness = Some(IcViolation {
                        w: w.clone(),
                        kind: IcWitnessKind::RightExtension,
                    });
                    break 'outer;
                }
            }
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

/// Re-verify every fact a witness claims against the language backend.
pub fn validate_witness(lang: &Language, witness: &Violation) -> bool {
    match witness {
        Violation::Sst(v) => validate_sst(lang, v).unwrap_or(false),
        Violation::Ic(v) => validate_ic(lang, v).unwrap_or(false),
    }
}

fn validate_sst(lang: &Language, v: &SstViolation) -> Result<bool, Error> {
    if v.u.is_empty() || v.v.is_empty() || v.u == v.v {
        return Ok(false);
    }
    if v.context != concat3(&v.alpha, &v.u, &v.beta) || v.result != concat3(&v.alpha, &v.v, &v.beta)
    {
        return Ok(false);
    }
    if v.result.len() > lang.horizon() {
        return Ok(false);
    }
    if !(lang.is_wellformed(&v.u)? && lang.is_wellformed(&v.v)?) {
        return Ok(false);
    }
    if lang.interpret(&v.u)? != lang.interpret(&v.v)? {
        return Ok(false);
    }
    if !lang.is_wellformed(&v.context)? {
        return Ok(false);
    }
    if lang.interpret(&v.context)? != v.context_meaning {
        return Ok(false);
    }
    match v.kind {
        SstKind::IllFormed => Ok(!lang.is_wellformed(&v.result)? && v.result_meaning.is_none()),
        SstKind::MeaningChanged => {
            if !lang.is_wellformed(&v.result)? {
                return Ok(false);
            }
            let mr = lang.interpret(&v.result)?;
            Ok(mr != v.context_meaning && v.result_meaning.as_ref() == Some(&mr))
        }
    }
}

fn validate_ic(lang: &Language, v: &IcViolation) -> Result<bool, Error> {
    if v.w.len() < 2 || !lang.is_wellformed(&v.w)? {
        return Ok(false);
    }
    let w = &v.w;
    let split_ok = |j: usize| -> Result<bool, Error> {
        Ok(lang.is_wellformed(&w.slice(0, j))? && lang.is_wellformed(&w.slice(j, w.len()))?)
    };
    match v.kind {
        IcWitnessKind::Exists => {
            for j in 1..w.len() {
                if split_ok(j)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        IcWitnessKind::AtPosition(j) => {
            if j < 1 || j >= w.len() {
                return Ok(false);
            }
            Ok(!split_ok(j)?)
        }
        IcWitnessKind::RightExtension => Ok(!split_ok(w.len() - 1)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::model::{mk_explicit, Alphabet, MeaningId};

    fn explicit(alpha: &str, pairs: &[(&str, &str)], horizon: usize) -> Language {
        let alphabet = Alphabet::new(alpha.chars()).unwrap();
        let entries: Vec<_> = pairs
            .iter()
            .map(|(s, m)| (alphabet.parse(s).unwrap(), MeaningId::new(*m)))
            .collect();
        mk_explicit(alphabet, entries, horizon).unwrap()
    }

    #[test]
    fn e1_sst_witness_is_minimal_ill_formed() {
        let e1 = builtins::e1();
        let report = check_sst(&e1, 3).unwrap();
        assert!(!report.holds);
        let Some(Violation::Sst(v)) = &report.witness else {
            panic!("expected substitution witness");
        };
        assert_eq!(e1.render(&v.u), "ab");
        assert_eq!(e1.render(&v.v), "cb");
        assert_eq!(e1.render(&v.alpha), "");
        assert_eq!(e1.render(&v.beta), "d");
        assert_eq!(e1.render(&v.context), "abd");
        assert_eq!(e1.render(&v.result), "cbd");
        assert_eq!(v.kind, SstKind::IllFormed);
        assert!(validate_witness(&e1, report.witness.as_ref().unwrap()));
    }

    #[test]
    fn meaning_changed_witness() {
        let l = explicit("ab", &[("a", "m1"), ("b", "m1"), ("aa", "m2"), ("ab", "m3")], 2);
        let report = check_sst(&l, 2).unwrap();
        assert!(!report.holds);
        let Some(Violation::Sst(v)) = &report.witness else {
            panic!()
        };
        assert_eq!(l.render(&v.u), "a");
        assert_eq!(l.render(&v.v), "b");
        assert_eq!(l.render(&v.alpha), "a");
        assert_eq!(l.render(&v.beta), "");
        assert_eq!(l.render(&v.context), "aa");
        assert_eq!(l.render(&v.result), "ab");
        assert_eq!(v.kind, SstKind::MeaningChanged);
        assert!(validate_witness(&l, report.witness.as_ref().unwrap()));
    }

    #[test]
    fn mod3_sst_holds() {
        let l = builtins::mod3();
        let report = check_sst(&l, 5).unwrap();
        assert!(report.holds);
        assert!(report.witness.is_none());
    }

    #[test]
    fn e1_ic_exists_fails_on_ab() {
        let e1 = builtins::e1();
        let report = check_ic(&e1, 3, IcVariant::Exists).unwrap();
        assert!(!report.holds);
        let Some(Violation::Ic(v)) = &report.witness else {
            panic!()
        };
        assert_eq!(e1.render(&v.w), "ab");
        assert!(validate_witness(&e1, report.witness.as_ref().unwrap()));
    }

    #[test]
    fn mod3_all_positions_holds() {
        let l = builtins::mod3();
        assert!(check_ic(&l, 6, IcVariant::AllPositions).unwrap().holds);
    }

    #[test]
    fn unary_right_extension_holds() {
        let l = builtins::unary();
        assert!(check_ic(&l, 8, IcVariant::RightExtension).unwrap().holds);
    }

    #[test]
    fn validate_rejects_tampered_witness() {
        let e1 = builtins::e1();
        let report = check_sst(&e1, 3).unwrap();
        let Some(Violation::Sst(v)) = report.witness else {
            panic!()
        };
        let mut tampered = v;
        tampered.result = e1.parse("abd").unwrap();
        assert!(!validate_witness(&e1, &Violation::Sst(tampered)));
    }

    #[test]
    fn validate_rejects_short_ic_witness() {
        let e1 = builtins::e1();
        let v = IcViolation {
            w: e1.parse("ab").unwrap().slice(0, 1),
            kind: IcWitnessKind::Exists,
        };
        assert!(!validate_witness(&e1, &Violation::Ic(v)));
    }

    #[test]
    fn failure_is_monotone_in_horizon() {
        // E1's entries re-hosted at a larger horizon keep failing, and the
        // original witness stays valid.
        let l = explicit("abcd", &[("ab", "m1"), ("cb", "m1"), ("abd", "m2")], 5);
        let w3 = check_sst(&l, 3).unwrap();
        assert!(!w3.holds);
        for h in 3..=5 {
            let r = check_sst(&l, h).unwrap();
            assert!(!r.holds, "expected failure at horizon {h}");
            assert!(validate_witness(&l, w3.witness.as_ref().unwrap()));
        }
    }

    #[test]
    fn transform_languages_pass_by_construction() {
        let tr1 = builtins::tr1();
        for h in 1..=4 {
            assert!(check_sst(&tr1, h).unwrap().holds);
            assert!(check_ic(&tr1, h, IcVariant::Exists).unwrap().holds);
            assert!(check_ic(&tr1, h, IcVariant::AllPositions).unwrap().holds);
        }
    }

    #[test]
    fn all_positions_implies_weaker_variants() {
        // a language satisfying the all-positions reading must satisfy both
        // the existential and right-extension readings
        let samples = [
            explicit("ab", &[("a", "x"), ("b", "x"), ("ab", "y"), ("aa", "y"), ("ba", "y"), ("bb", "y")], 2),
            explicit("a", &[("a", "x"), ("aa", "y"), ("aaa", "z")], 3),
        ];
        for l in &samples {
            let h = l.horizon();
            if check_ic(l, h, IcVariant::AllPositions).unwrap().holds {
                assert!(check_ic(l, h, IcVariant::Exists).unwrap().holds);
                assert!(check_ic(l, h, IcVariant::RightExtension).unwrap().holds);
            }
        }
    }
}
