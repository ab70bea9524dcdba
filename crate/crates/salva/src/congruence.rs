//! Synonymy classes, canonical shortest representatives, shortest-synonym
//! normalization, and substitution closure of partial explicit languages.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::model::{concat3, mk_explicit, Language, MeaningId, Str};

/// Partition of the members up to a horizon by meaning. Classes are reported
/// in canonical order of their representatives; the representative is the
/// least member (length-major, then declared symbol order).
#[derive(Clone, Debug)]
pub struct SynonymClass {
    pub meaning: MeaningId,
    pub representative: Str,
    pub members: Vec<Str>,
}

#[derive(Clone, Debug)]
pub struct SynonymyClasses {
    pub horizon: usize,
    pub classes: Vec<SynonymClass>,
}

pub fn synonym_classes(lang: &Language, h: usize) -> Result<SynonymyClasses, Error> {
    let strings = lang.enumerate_strings(h)?;
    let mut by_meaning: HashMap<MeaningId, Vec<Str>> = HashMap::new();
    for w in strings {
        let m = lang.interpret(&w)?;
        by_meaning.entry(m).or_default().push(w);
    }
    let mut classes: Vec<SynonymClass> = by_meaning
        .into_iter()
        .map(|(meaning, members)| SynonymClass {
            meaning,
            representative: members[0].clone(),
            members,
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(SynonymyClasses { horizon: h, classes })
}

/// Precomputed meaning-to-representative map for bulk normalization.
pub struct Normalizer {
    map: HashMap<MeaningId, Str>,
}

impl Normalizer {
    pub fn new(lang: &Language, h: usize) -> Result<Self, Error> {
        let classes = synonym_classes(lang, h)?;
        Ok(Normalizer {
            map: classes
                .classes
                .into_iter()
                .map(|c| (c.meaning, c.representative))
                .collect(),
        })
    }

    pub fn apply(&self, lang: &Language, w: &Str) -> Result<Str, Error> {
        if !lang.is_wellformed(w)? {
            return Err(Error::NotWellFormed(lang.render(w)));
        }
        let m = lang.interpret(w)?;
        Ok(self
            .map
            .get(&m)
            .cloned()
            .expect("member meaning must have a class"))
    }
}

/// Canonical shortest synonym of `w` at the language horizon.
pub fn normalize(lang: &Language, w: &Str) -> Result<Str, Error> {
    Normalizer::new(lang, lang.horizon())?.apply(lang, w)
}

/// One substitution application in a derivation chain: inside `source`
/// (= alpha·u·beta), the synonym `v` replaced `u`, forcing `derived`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub alpha: Str,
    pub u: Str,
    pub v: Str,
    pub beta: Str,
    pub source: Str,
    pub derived: Str,
}

/// A string forced to two distinct meanings, with the chains that force each.
#[derive(Clone, Debug)]
pub struct ConflictCertificate {
    pub string: Str,
    pub meanings: (MeaningId, MeaningId),
    pub chains: (Vec<DerivationStep>, Vec<DerivationStep>),
    /// Every conflicted string at the fixpoint, canonical order.
    pub all_conflicts: Vec<Str>,
}

#[derive(Clone, Debug)]
pub enum ClosureOutcome {
    Completed {
        language: Language,
        added: Vec<(Str, MeaningId)>,
    },
    Conflict(ConflictCertificate),
}

/// Least fixpoint of the completion rule: whenever two strings share a forced
/// meaning and one occurs inside a forced context, the substituted string is
/// forced to the context's meaning (results beyond the horizon are not
/// forced). Conflicts are outcomes, not errors.
pub fn sst_closure(seed: &Language, h: usize) -> Result<ClosureOutcome, Error> {
    sst_closure_with_order(seed, h, None)
}

/// Closure with a shuffled rule-application order inside each round. The
/// fixpoint is monotone, so the completed set and the conflict string set do
/// not depend on the order; this entry point exists so tests can verify that.
pub fn sst_closure_with_order(
    seed: &Language,
    h: usize,
    shuffle_seed: Option<u64>,
) -> Result<ClosureOutcome, Error> {
    let table = seed
        .explicit_entries()
        .ok_or(Error::ExplicitBackendRequired)?;
    if h < 1 || h > seed.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: h,
            horizon: seed.horizon(),
        });
    }
    let mut rng = shuffle_seed.map(ChaCha12Rng::seed_from_u64);

    // forced: string -> meaning -> first derivation chain seen
    let mut forced: BTreeMap<Str, BTreeMap<MeaningId, Vec<DerivationStep>>> = BTreeMap::new();
    for (w, m) in table {
        if w.len() <= h {
            forced.entry(w.clone()).or_default().insert(m.clone(), Vec::new());
        }
    }

    loop {
        let mut classes: BTreeMap<MeaningId, Vec<Str>> = BTreeMap::new();
        for (w, ms) in &forced {
            for m in ms.keys() {
                classes.entry(m.clone()).or_default().push(w.clone());
            }
        }

        let mut pending: Vec<(Str, MeaningId, Vec<DerivationStep>)> = Vec::new();
        for (w, wms) in &forced {
            for i in 0..w.len() {
                for j in (i + 1)..=w.len() {
                    let (alpha, u, beta) = w.split3(i, j);
                    let Some(ums) = forced.get(&u) else { continue };
                    for mu in ums.keys() {
                        for v in &classes[mu] {
                            if *v == u || alpha.len() + v.len() + beta.len() > h {
                                continue;
                            }
                            let result = concat3(&alpha, v, &beta);
                            for (mw, chain_w) in wms {
                                let known = forced
                                    .get(&result)
                                    .map_or(false, |ms| ms.contains_key(mw));
                                if known {
                                    continue;
                                }
                                let mut chain = chain_w.clone();
                                chain.push(DerivationStep {
                                    alpha: alpha.clone(),
                                    u: u.clone(),
                                    v: v.clone(),
                                    beta: beta.clone(),
                                    source: w.clone(),
                                    derived: result.clone(),
                                });
                                pending.push((result.clone(), mw.clone(), chain));
                            }
                        }
                    }
                }
            }
        }

        if let Some(rng) = rng.as_mut() {
            pending.shuffle(rng);
        }
        let mut grew = false;
        for (s, m, chain) in pending {
            let entry = forced.entry(s).or_default();
            if !entry.contains_key(&m) {
                entry.insert(m, chain);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let conflicts: Vec<Str> = forced
        .iter()
        .filter(|(_, ms)| ms.len() >= 2)
        .map(|(s, _)| s.clone())
        .collect();
    if let Some(string) = conflicts.first().cloned() {
        let ms = &forced[&string];
        let mut it = ms.iter();
        let (m1, c1) = it.next().expect("two meanings");
        let (m2, c2) = it.next().expect("two meanings");
        return Ok(ClosureOutcome::Conflict(ConflictCertificate {
            string,
            meanings: (m1.clone(), m2.clone()),
            chains: (c1.clone(), c2.clone()),
            all_conflicts: conflicts,
        }));
    }

    let entries: Vec<(Str, MeaningId)> = forced
        .iter()
        .map(|(s, ms)| (s.clone(), ms.keys().next().expect("one meaning").clone()))
        .collect();
    let added: Vec<(Str, MeaningId)> = entries
        .iter()
        .filter(|(s, _)| !table.contains_key(s))
        .cloned()
        .collect();
    let language = mk_explicit(seed.alphabet().clone(), entries, h)?;
    Ok(ClosureOutcome::Completed { language, added })
}
