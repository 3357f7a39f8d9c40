//! Pregroup types with iterated adjoints and their grammatical reductions.
//!
//! A pregroup type is a sequence of atomic types, each an alphabet symbol
//! with an integer adjoint order: order 0 is the plain type, +1 the right
//! adjoint (`n^r`), -1 the left adjoint (`n^l`), -2 the doubled left
//! adjoint (`n^ll`), and so on without bound. Juxtaposition of types is
//! concatenation; the empty sequence is the monoidal unit.

mod lexicon;
mod reduce;

pub use lexicon::{check_grammatical, Lexicon, LexiconEntry};
pub use reduce::{reduce_greedy, search_reduction, ReductionPlan};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// The set of base symbols a grammar may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    bases: BTreeSet<String>,
}

impl Alphabet {
    pub fn new<I, S>(bases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet {
            bases: bases.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, base: &str) -> bool {
        self.bases.contains(base)
    }

    pub fn bases(&self) -> impl Iterator<Item = &str> {
        self.bases.iter().map(String::as_str)
    }
}

/// The default grammar alphabet: `n` (noun) and `s` (sentence).
impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::new(["n", "s"])
    }
}

/// One atomic type: a base symbol plus an adjoint order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType {
    pub base: String,
    pub order: i32,
}

impl AtomicType {
    pub fn new(base: impl Into<String>, order: i32) -> Self {
        AtomicType {
            base: base.into(),
            order,
        }
    }

    /// The right adjoint (order + 1).
    pub fn right(&self) -> Self {
        AtomicType::new(self.base.clone(), self.order + 1)
    }

    /// The left adjoint (order - 1).
    pub fn left(&self) -> Self {
        AtomicType::new(self.base.clone(), self.order - 1)
    }

    /// Whether `self` immediately followed by `other` cancels:
    /// equal bases and `other.order == self.order + 1`.
    pub fn cancels_with(&self, other: &AtomicType) -> bool {
        self.base == other.base && other.order == self.order + 1
    }
}

impl fmt::Display for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if self.order > 0 {
            write!(f, "^{}", "r".repeat(self.order as usize))?;
        } else if self.order < 0 {
            write!(f, "^{}", "l".repeat((-self.order) as usize))?;
        }
        Ok(())
    }
}

/// A (possibly empty) juxtaposition of atomic types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PregroupType {
    pub atoms: Vec<AtomicType>,
}

impl PregroupType {
    pub fn new(atoms: Vec<AtomicType>) -> Self {
        PregroupType { atoms }
    }

    /// The monoidal unit: the empty sequence.
    pub fn unit() -> Self {
        PregroupType { atoms: Vec::new() }
    }

    pub fn is_unit(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Juxtaposition: concatenation of the two atom sequences.
    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        PregroupType { atoms }
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for atom in &self.atoms {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{atom}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parse caret notation into a [`PregroupType`].
///
/// Tokens are whitespace-separated. Each token is a base symbol with an
/// optional adjoint suffix: `n`, `n^r`, `n^l`, `n^rr`, `n^ll`, ... Braces
/// around the suffix are accepted (`n^{ll}` is the same as `n^ll`). The
/// empty string parses to the unit type.
pub fn parse_type(text: &str, alphabet: &Alphabet) -> Result<PregroupType> {
    let mut atoms = Vec::new();
    for token in text.split_whitespace() {
        atoms.push(parse_atom(token, alphabet)?);
    }
    Ok(PregroupType::new(atoms))
}

fn parse_atom(token: &str, alphabet: &Alphabet) -> Result<AtomicType> {
    let (base, suffix) = match token.split_once('^') {
        Some((b, s)) => (b, Some(s)),
        None => (token, None),
    };
    if base.is_empty() {
        return Err(Error::TypeNotation(format!("empty base in token `{token}`")));
    }
    if !alphabet.contains(base) {
        let declared: Vec<&str> = alphabet.bases().collect();
        return Err(Error::UnknownBase(base.to_string(), declared.join(", ")));
    }
    let order = match suffix {
        None => 0,
        Some(raw) => {
            let raw = raw
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .unwrap_or(raw);
            if raw.is_empty() {
                return Err(Error::TypeNotation(format!(
                    "empty adjoint suffix in token `{token}`"
                )));
            }
            if raw.chars().all(|c| c == 'r') {
                raw.len() as i32
            } else if raw.chars().all(|c| c == 'l') {
                -(raw.len() as i32)
            } else {
                return Err(Error::TypeNotation(format!(
                    "malformed adjoint suffix `{raw}` in token `{token}` (expected all `r` or all `l`)"
                )));
            }
        }
    };
    Ok(AtomicType::new(base, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Alphabet {
        Alphabet::default()
    }

    #[test]
    fn parses_possessive_subject_pronoun_type() {
        let t = parse_type("n^r n s^l n n^l", &alpha()).unwrap();
        let orders: Vec<i32> = t.atoms.iter().map(|a| a.order).collect();
        let bases: Vec<&str> = t.atoms.iter().map(|a| a.base.as_str()).collect();
        assert_eq!(bases, ["n", "n", "s", "n", "n"]);
        assert_eq!(orders, [1, 0, -1, 0, -1]);
    }

    #[test]
    fn parses_possessive_object_pronoun_type_with_braces() {
        let braced = parse_type("n^r n n^{ll} s^l n^l", &alpha()).unwrap();
        let plain = parse_type("n^r n n^ll s^l n^l", &alpha()).unwrap();
        assert_eq!(braced, plain);
        assert_eq!(braced.atoms[2], AtomicType::new("n", -2));
    }

    #[test]
    fn empty_string_is_unit() {
        let t = parse_type("", &alpha()).unwrap();
        assert!(t.is_unit());
        assert_eq!(t, PregroupType::unit());
        // whitespace-only is also unit
        assert!(parse_type("   ", &alpha()).unwrap().is_unit());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "n^r n s^l n n^l",
            "n^r n n^ll s^l n^l",
            "n n^l",
            "n^rr s^ll",
            "",
            "s",
        ] {
            let t = parse_type(text, &alpha()).unwrap();
            let printed = t.to_string();
            let back = parse_type(&printed, &alpha()).unwrap();
            assert_eq!(back, t, "round trip failed for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn unknown_base_is_rejected() {
        assert!(matches!(
            parse_type("q", &alpha()),
            Err(Error::UnknownBase(..))
        ));
    }

    #[test]
    fn malformed_suffix_is_rejected() {
        for bad in ["n^x", "n^rl", "n^", "n^{l"] {
            assert!(
                matches!(parse_type(bad, &alpha()), Err(Error::TypeNotation(_))),
                "expected notation error for `{bad}`"
            );
        }
    }

    #[test]
    fn concat_is_associative_with_unit() {
        let a = parse_type("n n^l", &alpha()).unwrap();
        let b = parse_type("s", &alpha()).unwrap();
        let c = parse_type("n^r", &alpha()).unwrap();
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(a.concat(&PregroupType::unit()), a);
        assert_eq!(PregroupType::unit().concat(&a), a);
    }
}
