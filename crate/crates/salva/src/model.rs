//! Interpreted languages `(X, S, h, M)` in three finitely checkable backends.
//!
//! A [`Language`] is immutable after construction. All analysis is relative to
//! its horizon: membership and interpretation are only defined for strings of
//! length `1..=horizon`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Ordered finite set of single-character symbols. The declared order fixes
/// canonical string enumeration everywhere downstream.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self, Error> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = HashSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Self { symbols })
    }

    /// First `n` lowercase letters, a convenience for generators and tests.
    pub fn lowercase(n: usize) -> Result<Self, Error> {
        Self::new((0..n).map(|i| (b'a' + i as u8) as char))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    /// Parse a text string into symbol indices.
    pub fn parse(&self, s: &str) -> Result<Str, Error> {
        let mut idx = Vec::with_capacity(s.chars().count());
        for c in s.chars() {
            match self.index_of(c) {
                Some(i) => idx.push(i),
                None => return Err(Error::SymbolOutsideAlphabet(c)),
            }
        }
        Ok(Str(idx))
    }

    pub fn render(&self, w: &Str) -> String {
        w.0.iter()
            .map(|&i| self.symbols.get(i as usize).copied().unwrap_or('?'))
            .collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.symbols.iter().collect::<String>())
    }
}

/// A finite string over some alphabet, stored as symbol indices.
///
/// `Ord` is the canonical order used everywhere: length-major, then
/// lexicographic by declared symbol order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Str(Vec<u8>);

impl Str {
    pub fn from_indices(indices: Vec<u8>) -> Self {
        Str(indices)
    }

    pub fn empty() -> Self {
        Str(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Str) -> Str {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Str(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Str {
        Str(self.0[start..end].to_vec())
    }

    /// Split into `(alpha, mid, beta)` at positions `i..j`.
    pub fn split3(&self, i: usize, j: usize) -> (Str, Str, Str) {
        (self.slice(0, i), self.slice(i, j), self.slice(j, self.len()))
    }
}

pub(crate) fn concat3(alpha: &Str, mid: &Str, beta: &Str) -> Str {
    let mut v = Vec::with_capacity(alpha.len() + mid.len() + beta.len());
    v.extend_from_slice(&alpha.0);
    v.extend_from_slice(&mid.0);
    v.extend_from_slice(&beta.0);
    Str(v)
}

impl Ord for Str {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Str {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Str{:?}", self.0)
    }
}

/// Opaque semantic label. Equality and hashing are the only structure the
/// analyses rely on; the `Ord` impl exists solely for canonical reporting.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct MeaningId(String);

impl MeaningId {
    pub fn new<S: Into<String>>(label: S) -> Self {
        MeaningId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MeaningId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for MeaningId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m\"{}\"", self.0)
    }
}

pub type MemberFn = Arc<dyn Fn(&str) -> bool + Send + Sync>;
pub type InterpFn = Arc<dyn Fn(&str) -> Option<MeaningId> + Send + Sync>;

#[derive(Clone)]
pub enum Backend {
    Explicit(BTreeMap<Str, MeaningId>),
    Oracle { member: MemberFn, interp: InterpFn },
    Transform { states: usize, actions: Vec<Vec<usize>> },
}

/// An interpreted language presentation: alphabet, backend, and the horizon
/// up to which membership and interpretation are defined.
#[derive(Clone)]
pub struct Language {
    alphabet: Alphabet,
    horizon: usize,
    backend: Backend,
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.backend {
            Backend::Explicit(t) => format!("Explicit({} entries)", t.len()),
            Backend::Oracle { .. } => "Oracle".to_string(),
            Backend::Transform { states, .. } => format!("Transform({} states)", states),
        };
        write!(
            f,
            "Language {{ alphabet: {:?}, horizon: {}, backend: {} }}",
            self.alphabet, self.horizon, kind
        )
    }
}

/// Build an explicit-table language. Every listed string must be over the
/// alphabet with length in `1..=horizon`, and no string may be listed twice
/// with different meanings.
pub fn mk_explicit<I>(alphabet: Alphabet, entries: I, horizon: usize) -> Result<Language, Error>
where
    I: IntoIterator<Item = (Str, MeaningId)>,
{
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let mut table = BTreeMap::new();
    for (w, m) in entries {
        if w.is_empty() {
            return Err(Error::EmptyString);
        }
        if w.len() > horizon {
            return Err(Error::LengthExceedsHorizon {
                len: w.len(),
                horizon,
            });
        }
        for &i in w.indices() {
            if (i as usize) >= alphabet.len() {
                return Err(Error::SymbolIndexOutOfRange(i));
            }
        }
        if let Some(prev) = table.get(&w) {
            if *prev != m {
                return Err(Error::DuplicateStringConflict {
                    s: alphabet.render(&w),
                    first: format!("{prev}"),
                    second: format!("{m}"),
                });
            }
        } else {
            table.insert(w, m);
        }
    }
    Ok(Language {
        alphabet,
        horizon,
        backend: Backend::Explicit(table),
    })
}

/// Build an oracle-backed language from a membership predicate and a partial
/// interpretation over rendered strings. `interp` must be defined wherever
/// `member` is true; breaches surface as `OracleInconsistent` at query time.
pub fn mk_oracle<M, I>(
    alphabet: Alphabet,
    member: M,
    interp: I,
    horizon: usize,
) -> Result<Language, Error>
where
    M: Fn(&str) -> bool + Send + Sync + 'static,
    I: Fn(&str) -> Option<MeaningId> + Send + Sync + 'static,
{
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    Ok(Language {
        alphabet,
        horizon,
        backend: Backend::Oracle {
            member: Arc::new(member),
            interp: Arc::new(interp),
        },
    })
}

/// Build a transformation-semantics language: `S` is every nonempty string up
/// to the horizon and `h(w)` is the state transformation the symbols of `w`
/// induce, applied left to right. Interpretation factors through
/// concatenation, so substitution constraints hold by construction.
pub fn mk_transform_semantics(
    alphabet: Alphabet,
    state_count: usize,
    actions: Vec<Vec<usize>>,
    horizon: usize,
) -> Result<Language, Error> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    if state_count == 0 {
        return Err(Error::InvalidAction("state count must be positive".into()));
    }
    if actions.len() != alphabet.len() {
        return Err(Error::InvalidAction(format!(
            "expected {} actions, got {}",
            alphabet.len(),
            actions.len()
        )));
    }
    for (i, a) in actions.iter().enumerate() {
        if a.len() != state_count {
            return Err(Error::InvalidAction(format!(
                "action for symbol '{}' must map all {} states",
                alphabet.symbols()[i],
                state_count
            )));
        }
        if let Some(&q) = a.iter().find(|&&q| q >= state_count) {
            return Err(Error::InvalidAction(format!(
                "action for symbol '{}' targets state {} out of {}",
                alphabet.symbols()[i],
                q,
                state_count
            )));
        }
    }
    Ok(Language {
        alphabet,
        horizon,
        backend: Backend::Transform {
            states: state_count,
            actions,
        },
    })
}

impl Language {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Explicit table, when this is a table-backed language.
    pub fn explicit_entries(&self) -> Option<&BTreeMap<Str, MeaningId>> {
        match &self.backend {
            Backend::Explicit(t) => Some(t),
            _ => None,
        }
    }

    pub fn transform_parts(&self) -> Option<(usize, &[Vec<usize>])> {
        match &self.backend {
            Backend::Transform { states, actions } => Some((*states, actions)),
            _ => None,
        }
    }

    /// Parse a text string against this language's alphabet.
    pub fn parse(&self, s: &str) -> Result<Str, Error> {
        self.alphabet.parse(s)
    }

    pub fn render(&self, w: &Str) -> String {
        self.alphabet.render(w)
    }

    fn check_in_range(&self, w: &Str) -> Result<(), Error> {
        if w.len() > self.horizon {
            return Err(Error::LengthExceedsHorizon {
                len: w.len(),
                horizon: self.horizon,
            });
        }
        for &i in w.indices() {
            if (i as usize) >= self.alphabet.len() {
                return Err(Error::SymbolIndexOutOfRange(i));
            }
        }
        Ok(())
    }

    /// `true` iff `w` is a member of `S`. The empty string never is.
    pub fn is_wellformed(&self, w: &Str) -> Result<bool, Error> {
        self.check_in_range(w)?;
        if w.is_empty() {
            return Ok(false);
        }
        Ok(match &self.backend {
            Backend::Explicit(t) => t.contains_key(w),
            Backend::Oracle { member, .. } => member(&self.alphabet.render(w)),
            Backend::Transform { .. } => true,
        })
    }

    /// `h(w)`. Fails with `NotWellFormed` outside `S`.
    pub fn interpret(&self, w: &Str) -> Result<MeaningId, Error> {
        if !self.is_wellformed(w)? {
            return Err(Error::NotWellFormed(self.alphabet.render(w)));
        }
        match &self.backend {
            Backend::Explicit(t) => Ok(t.get(w).cloned().expect("membership checked")),
            Backend::Oracle { interp, .. } => {
                let rendered = self.alphabet.render(w);
                interp(&rendered).ok_or(Error::OracleInconsistent(rendered))
            }
            Backend::Transform { states, actions } => {
                let mut t: Vec<usize> = (0..*states).collect();
                for &sym in w.indices() {
                    let f = &actions[sym as usize];
                    for q in t.iter_mut() {
                        *q = f[*q];
                    }
                }
                Ok(transform_meaning(&t))
            }
        }
    }

    /// All members of `S` with length in `1..=n`, in canonical order.
    pub fn enumerate_strings(&self, n: usize) -> Result<Vec<Str>, Error> {
        if n < 1 || n > self.horizon {
            return Err(Error::LengthExceedsHorizon {
                len: n,
                horizon: self.horizon,
            });
        }
        match &self.backend {
            Backend::Explicit(t) => Ok(t.keys().filter(|w| w.len() <= n).cloned().collect()),
            Backend::Oracle { member, .. } => {
                let mut out = Vec::new();
                for w in all_strings_upto(self.alphabet.len(), n) {
                    if member(&self.alphabet.render(&w)) {
                        out.push(w);
                    }
                }
                Ok(out)
            }
            Backend::Transform { .. } => Ok(all_strings_upto(self.alphabet.len(), n)),
        }
    }
}

/// Canonical label for a state transformation given as a result vector.
pub(crate) fn transform_meaning(t: &[usize]) -> MeaningId {
    let body: Vec<String> = t.iter().map(|q| q.to_string()).collect();
    MeaningId::new(format!("t{}", body.join(".")))
}

/// Every string of length `1..=n` over a `k`-symbol alphabet, canonical order.
pub(crate) fn all_strings_upto(k: usize, n: usize) -> Vec<Str> {
    let mut out = Vec::new();
    for len in 1..=n {
        let mut idx = vec![0u8; len];
        'strings: loop {
            out.push(Str::from_indices(idx.clone()));
            let mut pos = len;
            loop {
                if pos == 0 {
                    break 'strings;
                }
                pos -= 1;
                if (idx[pos] as usize) + 1 < k {
                    idx[pos] += 1;
                    for p in idx.iter_mut().skip(pos + 1) {
                        *p = 0;
                    }
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn m(l: &str) -> MeaningId {
        MeaningId::new(l)
    }

    fn explicit(alpha: &str, pairs: &[(&str, &str)], horizon: usize) -> Result<Language, Error> {
        let alphabet = Alphabet::new(alpha.chars())?;
        let entries: Vec<(Str, MeaningId)> = pairs
            .iter()
            .map(|(s, mm)| (alphabet.parse(s).unwrap(), m(mm)))
            .collect();
        mk_explicit(alphabet, entries, horizon)
    }

    #[test]
    fn t1_constructs() {
        let t1 = explicit("a", &[("a", "m0"), ("aa", "m0"), ("aaa", "m0")], 3).unwrap();
        assert_eq!(t1.interpret(&t1.parse("aa").unwrap()).unwrap(), m("m0"));
    }

    #[test]
    fn duplicate_string_conflict() {
        let err = explicit("ab", &[("ab", "m1"), ("ab", "m2")], 2).unwrap_err();
        assert!(matches!(err, Error::DuplicateStringConflict { .. }));
    }

    #[test]
    fn duplicate_entry_same_meaning_is_fine() {
        explicit("ab", &[("ab", "m1"), ("ab", "m1")], 2).unwrap();
    }

    #[test]
    fn e1_constructs_and_membership() {
        let e1 = builtins::e1();
        assert!(e1.is_wellformed(&e1.parse("abd").unwrap()).unwrap());
        assert!(!e1.is_wellformed(&e1.parse("cbd").unwrap()).unwrap());
        assert_eq!(
            e1.enumerate_strings(2)
                .unwrap()
                .iter()
                .map(|w| e1.render(w))
                .collect::<Vec<_>>(),
            vec!["ab", "cb"]
        );
    }

    #[test]
    fn entry_beyond_horizon_rejected() {
        let err = explicit("a", &[("aaaa", "m0")], 3).unwrap_err();
        assert!(matches!(err, Error::LengthExceedsHorizon { .. }));
    }

    #[test]
    fn unary_counter() {
        let u = builtins::unary();
        let aaa = u.parse("aaa").unwrap();
        assert!(u.is_wellformed(&aaa).unwrap());
        assert_eq!(u.interpret(&aaa).unwrap(), m("3"));
        assert_eq!(
            u.enumerate_strings(3)
                .unwrap()
                .iter()
                .map(|w| u.render(w))
                .collect::<Vec<_>>(),
            vec!["a", "aa", "aaa"]
        );
    }

    #[test]
    fn mod3_totality_and_interpretation() {
        let l = builtins::mod3();
        let all = l.enumerate_strings(6).unwrap();
        assert_eq!(all.len(), 126);
        for w in &all {
            l.interpret(w).unwrap();
        }
        assert_eq!(l.interpret(&l.parse("baab").unwrap()).unwrap(), m("2"));
        assert_eq!(
            l.enumerate_strings(1)
                .unwrap()
                .iter()
                .map(|w| l.render(w))
                .collect::<Vec<_>>(),
            vec!["a", "b"]
        );
    }

    #[test]
    fn oracle_inconsistent_at_query_time() {
        let alphabet = Alphabet::new("ab".chars()).unwrap();
        let l = mk_oracle(
            alphabet,
            |s| !s.is_empty(),
            |s| if s == "ab" { None } else { Some(MeaningId::new("x")) },
            3,
        )
        .unwrap();
        let ab = l.parse("ab").unwrap();
        assert!(matches!(l.interpret(&ab), Err(Error::OracleInconsistent(_))));
    }

    #[test]
    fn transform_tr1_compositions() {
        let tr1 = builtins::tr1();
        let h = |s: &str| tr1.interpret(&tr1.parse(s).unwrap()).unwrap();
        assert_eq!(h("ab"), m("t1.1")); // const 1
        assert_eq!(h("ba"), h("a")); // both const 0
        assert_eq!(h("bb"), m("t0.1")); // swap twice = identity
    }

    #[test]
    fn transform_one_state_collapses_meanings() {
        let alphabet = Alphabet::new("ab".chars()).unwrap();
        let l = mk_transform_semantics(alphabet, 1, vec![vec![0], vec![0]], 3).unwrap();
        let all = l.enumerate_strings(3).unwrap();
        let ms: std::collections::HashSet<_> =
            all.iter().map(|w| l.interpret(w).unwrap()).collect();
        assert_eq!(ms.len(), 1);
    }

    #[test]
    fn transform_identity_actions_make_all_strings_synonymous() {
        let alphabet = Alphabet::new("ab".chars()).unwrap();
        let l = mk_transform_semantics(alphabet, 2, vec![vec![0, 1], vec![0, 1]], 3).unwrap();
        let all = l.enumerate_strings(3).unwrap();
        for w in &all {
            assert_eq!(l.interpret(w).unwrap(), m("t0.1"));
        }
    }

    #[test]
    fn transform_homomorphism() {
        let tr1 = builtins::tr1();
        let all = tr1.enumerate_strings(2).unwrap();
        for u in &all {
            for v in &all {
                if u.len() + v.len() > tr1.horizon() {
                    continue;
                }
                let uv = u.concat(v);
                // composite of the parts equals the whole
                let (states, actions) = tr1.transform_parts().unwrap();
                let apply = |w: &Str| {
                    let mut t: Vec<usize> = (0..states).collect();
                    for &sym in w.indices() {
                        for q in t.iter_mut() {
                            *q = actions[sym as usize][*q];
                        }
                    }
                    t
                };
                let mut composed = apply(u);
                let fv = apply(v);
                for q in composed.iter_mut() {
                    *q = fv[*q];
                }
                assert_eq!(transform_meaning(&composed), tr1.interpret(&uv).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_prefix_and_bound() {
        let l = builtins::mod3();
        let mut prev: Vec<Str> = Vec::new();
        for n in 1..=6usize {
            let cur = l.enumerate_strings(n).unwrap();
            let seg: Vec<Str> = cur.iter().filter(|w| w.len() < n + 1).cloned().collect();
            assert_eq!(seg, cur);
            let shorter: Vec<Str> = cur.iter().filter(|w| w.len() <= n.saturating_sub(1)).cloned().collect();
            if n > 1 {
                assert_eq!(shorter, prev);
            }
            let bound: usize = (1..=n).map(|i| 2usize.pow(i as u32)).sum();
            assert!(cur.len() <= bound);
            prev = cur;
        }
    }

    #[test]
    fn empty_string_not_wellformed() {
        let l = builtins::mod3();
        assert!(!l.is_wellformed(&Str::empty()).unwrap());
    }

    #[test]
    fn horizon_guard() {
        let l = builtins::mod3();
        let w = Str::from_indices(vec![0; 7]);
        assert!(matches!(
            l.is_wellformed(&w),
            Err(Error::LengthExceedsHorizon { .. })
        ));
        assert!(matches!(
            l.enumerate_strings(7),
            Err(Error::LengthExceedsHorizon { .. })
        ));
    }

    #[test]
    fn canonical_order_is_length_major() {
        let a = Str::from_indices(vec![1]);
        let b = Str::from_indices(vec![0, 0]);
        assert!(a < b);
        let c = Str::from_indices(vec![0, 1]);
        assert!(b < c);
    }
}
