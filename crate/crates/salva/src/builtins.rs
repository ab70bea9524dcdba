//! Named example languages, addressable from the CLI via `--builtin`.

use crate::error::Error;
use crate::model::{mk_explicit, mk_oracle, mk_transform_semantics, Alphabet, Language, MeaningId};

pub const NAMES: &[&str] = &["mod3", "unary", "t1", "e1", "tr1"];

/// Strings over {a,b}, meaning = number of `a`s mod 3, horizon 6.
pub fn mod3() -> Language {
    let alphabet = Alphabet::new("ab".chars()).unwrap();
    mk_oracle(
        alphabet,
        |s| !s.is_empty(),
        |s| {
            let n = s.chars().filter(|&c| c == 'a').count() % 3;
            Some(MeaningId::new(n.to_string()))
        },
        6,
    )
    .unwrap()
}

/// Unary counter: every nonempty string over {a}, meaning = length, horizon 8.
pub fn unary() -> Language {
    let alphabet = Alphabet::new("a".chars()).unwrap();
    mk_oracle(
        alphabet,
        |s| !s.is_empty(),
        |s| Some(MeaningId::new(s.len().to_string())),
        8,
    )
    .unwrap()
}

/// Smallest nontrivial closed table: {a, aa, aaa} all meaning m0.
pub fn t1() -> Language {
    explicit("a", &[("a", "m0"), ("aa", "m0"), ("aaa", "m0")], 3)
}

/// Three-entry table over {a,b,c,d} whose substitution constraint fails.
pub fn e1() -> Language {
    explicit("abcd", &[("ab", "m1"), ("cb", "m1"), ("abd", "m2")], 3)
}

/// Two-state transformation semantics: `a` resets to 0, `b` swaps. Horizon 4.
pub fn tr1() -> Language {
    let alphabet = Alphabet::new("ab".chars()).unwrap();
    mk_transform_semantics(alphabet, 2, vec![vec![0, 0], vec![1, 0]], 4).unwrap()
}

pub fn builtin(name: &str) -> Result<Language, Error> {
    match name {
        "mod3" => Ok(mod3()),
        "unary" => Ok(unary()),
        "t1" => Ok(t1()),
        "e1" => Ok(e1()),
        "tr1" => Ok(tr1()),
        other => Err(Error::Parse(format!(
            "unknown builtin \"{other}\" (available: {})",
            NAMES.join(", ")
        ))),
    }
}

fn explicit(alpha: &str, pairs: &[(&str, &str)], horizon: usize) -> Language {
    let alphabet = Alphabet::new(alpha.chars()).unwrap();
    let entries: Vec<_> = pairs
        .iter()
        .map(|(s, m)| (alphabet.parse(s).unwrap(), MeaningId::new(*m)))
        .collect();
    mk_explicit(alphabet, entries, horizon).unwrap()
}
