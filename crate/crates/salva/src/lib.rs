//! Analysis toolkit for finitely presented interpreted languages.
//!
//! A language couples a finite alphabet, a set of well-formed strings, and an
//! interpretation assigning each member an opaque meaning, all presented up
//! to a finite horizon. The toolkit decides whether synonym substitution
//! preserves well-formedness and meaning, whether longer strings decompose
//! into well-formed parts, how the stock of expressible meanings grows with
//! string length, and whether that growth saturates. It also normalizes
//! strings to shortest synonyms, completes partial languages under the
//! substitution rule, and stress-tests the growth/saturation connection on
//! randomly generated languages.

pub mod builtins;
pub mod checkers;
pub mod congruence;
pub mod error;
pub mod expressivity;
pub mod harness;
pub mod io;
pub mod model;
pub mod naive;

pub use error::Error;
pub use model::{Alphabet, Language, MeaningId, Str};
