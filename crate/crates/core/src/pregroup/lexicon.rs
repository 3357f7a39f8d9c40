//! Word-to-type lexicon and grammaticality checking.
//!
//! Lexicon files are UTF-8, one entry per line:
//! `word <TAB> type-notation <TAB> semantic-tag`. Lines starting with `#`
//! are comments. A word may carry several entries (e.g. a relative
//! pronoun used in both subject and object roles); the checker tries the
//! alternatives in file order.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use super::{parse_type, reduce_greedy, search_reduction, Alphabet, PregroupType, ReductionPlan};
use crate::error::{Error, Result};

/// One lexicon line: a pregroup type plus the tag the semantic layer
/// interprets (`vector`, `matrix-verb`, `rel-subj`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub ty: PregroupType,
    pub tag: String,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Vec<LexiconEntry>>,
    order: Vec<String>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn insert(&mut self, word: impl Into<String>, ty: PregroupType, tag: impl Into<String>) {
        let word = word.into();
        if !self.entries.contains_key(&word) {
            self.order.push(word.clone());
        }
        self.entries
            .entry(word)
            .or_default()
            .push(LexiconEntry { ty, tag: tag.into() });
    }

    /// All entries for a word, in insertion order.
    pub fn entries(&self, word: &str) -> Option<&[LexiconEntry]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    /// Parse the tab-separated lexicon format.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Lexicon> {
        let mut lexicon = Lexicon::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let word = parts.next().unwrap_or_default();
            let ty_text = parts.next();
            let tag = parts.next();
            let (ty_text, tag) = match (ty_text, tag) {
                (Some(t), Some(g)) => (t, g),
                _ => {
                    return Err(Error::FileFormat {
                        file: "lexicon".into(),
                        message: format!(
                            "line {}: expected `word<TAB>type<TAB>tag`, got `{line}`",
                            lineno + 1
                        ),
                    })
                }
            };
            let ty = parse_type(ty_text, alphabet)?;
            lexicon.insert(word, ty, tag.trim());
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>, alphabet: &Alphabet) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path)?;
        Lexicon::parse(&text, alphabet)
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for word in &self.order {
            for entry in &self.entries[word] {
                writeln!(f, "{word}\t{}\t{}", entry.ty, entry.tag)?;
            }
        }
        Ok(())
    }
}

/// Decide whether `words` reduce to `target` under the lexicon.
///
/// Concatenates one type choice per word, tries the greedy reduction
/// first and falls back to the backtracking search; when words are
/// ambiguous, every combination of entries is tried in order. Returns
/// the first successful plan over the flattened atom sequence, or the
/// greedy plan of the first combination when none succeeds.
pub fn check_grammatical(
    words: &[&str],
    lexicon: &Lexicon,
    target: &PregroupType,
) -> Result<(bool, ReductionPlan)> {
    let mut choices: Vec<&[LexiconEntry]> = Vec::with_capacity(words.len());
    for &word in words {
        choices.push(
            lexicon
                .entries(word)
                .ok_or_else(|| Error::MissingWord(word.to_string()))?,
        );
    }
    let mut fallback: Option<ReductionPlan> = None;
    let mut picks = vec![0usize; words.len()];
    loop {
        let sentence = picks
            .iter()
            .zip(&choices)
            .fold(PregroupType::unit(), |acc, (&p, entries)| {
                acc.concat(&entries[p].ty)
            });
        let (plan, residual) = reduce_greedy(&sentence);
        if &residual == target {
            return Ok((true, plan));
        }
        if let Some(plan) = search_reduction(&sentence, target) {
            return Ok((true, plan));
        }
        if fallback.is_none() {
            fallback = Some(plan);
        }
        // advance the odometer over entry choices
        let mut i = picks.len();
        loop {
            if i == 0 {
                return Ok((false, fallback.unwrap_or_default()));
            }
            i -= 1;
            picks[i] += 1;
            if picks[i] < choices[i].len() {
                break;
            }
            picks[i] = 0;
        }
    }
}
