//! Generation-by-generation expressive power: curves, plateau detection,
//! saturation certification, and the shortest-synonym shrinking procedure.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::checkers::{check_ic, check_sst, IcVariant};
use crate::error::Error;
use crate::model::{Language, MeaningId, Str};

/// The n-th generation: all members of length at most `n`, with their
/// distinct meanings.
#[derive(Clone, Debug)]
pub struct Generation {
    pub n: usize,
    pub strings: Vec<Str>,
    pub meanings: BTreeSet<MeaningId>,
}

pub fn generation(lang: &Language, n: usize) -> Result<Generation, Error> {
    let strings = lang.enumerate_strings(n)?;
    let mut meanings = BTreeSet::new();
    for w in &strings {
        meanings.insert(lang.interpret(w)?);
    }
    Ok(Generation { n, strings, meanings })
}

/// Per-length distinct-meaning counts. `distinct_meanings[k]` and
/// `new_meanings[k]` describe generation `k + 1`. The plateau is the least
/// `n` whose meaning set equals generation `n + 1`'s (set equality; with
/// monotone meaning sets this is exactly "no new meaning at `n + 1`").
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressivityCurve {
    pub horizon: usize,
    pub distinct_meanings: Vec<usize>,
    pub new_meanings: Vec<usize>,
    pub strictly_growing: bool,
    pub first_plateau: Option<usize>,
}

pub fn expressivity_curve(lang: &Language, h: usize) -> Result<ExpressivityCurve, Error> {
    if h < 1 || h > lang.horizon() {
        return Err(Error::LengthExceedsHorizon {
            len: h,
            horizon: lang.horizon(),
        });
    }
    let strings = lang.enumerate_strings(h)?;
    let mut by_len: Vec<Vec<&Str>> = vec![Vec::new(); h + 1];
    for w in &strings {
        by_len[w.len()].push(w);
    }
    let mut seen: HashSet<MeaningId> = HashSet::new();
    let mut distinct = Vec::with_capacity(h);
    let mut fresh = Vec::with_capacity(h);
    for n in 1..=h {
        let before = seen.len();
        for w in &by_len[n] {
            seen.insert(lang.interpret(w)?);
        }
        distinct.push(seen.len());
        fresh.push(seen.len() - before);
    }
    let strictly_growing = fresh.iter().all(|&k| k >= 1);
    // fresh[n] (0-based) counts meanings first reached at length n + 1
    let first_plateau = (1..h).find(|&n| fresh[n] == 0);
    Ok(ExpressivityCurve {
        horizon: h,
        distinct_meanings: distinct,
        new_meanings: fresh,
        strictly_growing,
        first_plateau,
    })
}

/// Which structural properties were verified before certifying.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Assumptions {
    pub bounded_sst: bool,
    pub ic_exists: bool,
    pub ic_all_positions: bool,
}

/// Horizon-stamped evidence that every string up to the horizon means
/// something already expressible at the plateau generation.
#[derive(Clone, Debug)]
pub struct SaturationCertificate {
    pub plateau: usize,
    pub inventory: BTreeSet<MeaningId>,
    pub horizon: usize,
    pub assumptions: Assumptions,
}

/// A longer string carrying a meaning outside the plateau inventory. Not an
/// error: it is evidence about the plateau-implies-saturation question.
#[derive(Clone, Debug)]
pub struct SaturationRefusal {
    pub plateau: usize,
    pub offending: Str,
    pub offending_meaning: MeaningId,
    pub horizon: usize,
    pub assumptions: Assumptions,
}

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(SaturationCertificate),
    /// No generation's meaning set stabilizes within the horizon; no
    /// finite-expressivity certificate can be issued at this horizon.
    NoPlateau { horizon: usize, assumptions: Assumptions },
    Refused(SaturationRefusal),
}

/// Certify finite expressivity at horizon `h`: require bounded SST and
/// existential constructibility, find the plateau, and verify exhaustively
/// that no longer string reaches a meaning outside the plateau inventory.
pub fn certify_saturation(lang: &Language, h: usize) -> Result<CertifyOutcome, Error> {
    let sst = check_sst(lang, h)?;
    if !sst.holds {
        return Err(Error::PreconditionNotMet {
            property: "sst".to_string(),
            report: Some(Box::new(sst)),
        });
    }
    let ic = check_ic(lang, h, IcVariant::Exists)?;
    if !ic.holds {
        return Err(Error::PreconditionNotMet {
            property: "ic-exists".to_string(),
            report: Some(Box::new(ic)),
        });
    }
    let ic_all = check_ic(lang, h, IcVariant::AllPositions)?;
    let assumptions = Assumptions {
        bounded_sst: true,
        ic_exists: true,
        ic_all_positions: ic_all.holds,
    };

    let curve = expressivity_curve(lang, h)?;
    let Some(plateau) = curve.first_plateau else {
        return Ok(CertifyOutcome::NoPlateau { horizon: h, assumptions });
    };
    let inventory = generation(lang, plateau)?.meanings;
    for w in lang.enumerate_strings(h)? {
        let m = lang.interpret(&w)?;
        if !inventory.contains(&m) {
            return Ok(CertifyOutcome::Refused(SaturationRefusal {
                plateau,
                offending: w,
                offending_meaning: m,
                horizon: h,
                assumptions,
            }));
        }
    }
    Ok(CertifyOutcome::Certified(SaturationCertificate {
        plateau,
        inventory,
        horizon: h,
        assumptions,
    }))
}

/// Shrink `w` by repeatedly splitting it into two members and replacing one
/// side with a strictly shorter synonym from generation `n`. Breadth-first,
/// splits left to right, replacement synonyms in canonical order; returns the
/// canonically least string reachable. Requires bounded SST at the language
/// horizon so every replacement stays meaning-preserving.
pub fn reduce_to_generation(lang: &Language, w: &Str, n: usize) -> Result<Str, Error> {
    if !lang.is_wellformed(w)? {
        return Err(Error::NotWellFormed(lang.render(w)));
    }
    let sst = check_sst(lang, lang.horizon())?;
    if !sst.holds {
        return Err(Error::PreconditionNotMet {
            property: "sst".to_string(),
            report: Some(Box::new(sst)),
        });
    }

    let strings = lang.enumerate_strings(lang.horizon())?;
    let member: HashSet<&Str> = strings.iter().collect();
    let mut classes: HashMap<MeaningId, Vec<Str>> = HashMap::new();
    let mut meaning: HashMap<Str, MeaningId> = HashMap::new();
    for s in &strings {
        let m = lang.interpret(s)?;
        classes.entry(m.clone()).or_default().push(s.clone());
        meaning.insert(s.clone(), m);
    }

    let mut queue: VecDeque<Str> = VecDeque::new();
    let mut visited: HashSet<Str> = HashSet::new();
    queue.push_back(w.clone());
    visited.insert(w.clone());
    let mut best = w.clone();

    while let Some(s) = queue.pop_front() {
        for j in 1..s.len() {
            let left = s.slice(0, j);
            let right = s.slice(j, s.len());
            if !(member.contains(&left) && member.contains(&right)) {
                continue;
            }
            let mut push = |cand: Str, visited: &mut HashSet<Str>, queue: &mut VecDeque<Str>| {
                if member.contains(&cand) && visited.insert(cand.clone()) {
                    if cand < best {
                        best = cand.clone();
                    }
                    queue.push_back(cand);
                }
            };
            for rep in &classes[&meaning[&left]] {
                if rep.len() >= left.len() || rep.len() > n {
                    continue;
                }
                push(rep.concat(&right), &mut visited, &mut queue);
            }
            for rep in &classes[&meaning[&right]] {
                if rep.len() >= right.len() || rep.len() > n {
                    continue;
                }
                push(left.concat(rep), &mut visited, &mut queue);
            }
        }
    }
    Ok(best)
}
