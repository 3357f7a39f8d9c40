//! Corpus-driven vectors: co-occurrence counting, probability-ratio noun
//! vectors, relational verb matrices and the learned ownership map.
//!
//! Counting is symmetric over a `±window` neighbourhood and never
//! crosses sentence boundaries (one sentence per corpus line). Totals
//! are derived from the count matrix itself — row sums for words, column
//! sums for basis lemmas — so a coordinate of a context vector is
//!
//! ```text
//! grand * count(word, basis) / (row(word) * col(basis))
//! ```
//!
//! the ratio of the probability of seeing the word next to the basis
//! lemma to the probability of seeing it at all, with `0/0` read as 0.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::functor::OwnershipMap;
use crate::tensor::{outer, Space, Tensor, VectorStore};

#[derive(Debug, Clone)]
pub struct CooccurrenceStats {
    basis: Vec<String>,
    basis_index: HashMap<String, usize>,
    counts: BTreeMap<String, Vec<u64>>,
    window: usize,
}

impl CooccurrenceStats {
    /// Count co-occurrences over tokenized sentences. The basis is the
    /// `basis_size` most frequent lemmas (ties broken alphabetically).
    pub fn build(sentences: &[Vec<String>], window: usize, basis_size: usize) -> Result<Self> {
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for sentence in sentences {
            for token in sentence {
                *freq.entry(token.as_str()).or_default() += 1;
            }
        }
        if basis_size > freq.len() {
            return Err(Error::BasisTooLarge {
                requested: basis_size,
                vocabulary: freq.len(),
            });
        }
        let mut by_freq: Vec<(&str, u64)> = freq.iter().map(|(w, c)| (*w, *c)).collect();
        by_freq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let basis: Vec<String> = by_freq[..basis_size]
            .iter()
            .map(|(w, _)| w.to_string())
            .collect();
        let basis_index: HashMap<String, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();

        let mut counts: BTreeMap<String, Vec<u64>> = freq
            .keys()
            .map(|w| (w.to_string(), vec![0; basis_size]))
            .collect();
        for sentence in sentences {
            for (i, token) in sentence.iter().enumerate() {
                let lo = i.saturating_sub(window);
                let hi = (i + window).min(sentence.len().saturating_sub(1));
                let row = counts.get_mut(token).expect("token in vocabulary");
                for j in lo..=hi {
                    if j == i {
                        continue;
                    }
                    if let Some(&b) = basis_index.get(&sentence[j]) {
                        row[b] += 1;
                    }
                }
            }
        }
        Ok(CooccurrenceStats {
            basis,
            basis_index,
            counts,
            window,
        })
    }

    /// Assemble stats from raw rows (mainly for tests and merging).
    pub fn from_counts(
        basis: Vec<String>,
        counts: BTreeMap<String, Vec<u64>>,
        window: usize,
    ) -> Result<Self> {
        for (word, row) in &counts {
            if row.len() != basis.len() {
                return Err(Error::ShapeMismatch(format!(
                    "count row for `{word}` has {} entries, basis has {}",
                    row.len(),
                    basis.len()
                )));
            }
        }
        let basis_index = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(CooccurrenceStats {
            basis,
            basis_index,
            counts,
            window,
        })
    }

    /// Exact integer merge of two shards counted with the same basis and
    /// window.
    pub fn merge(&self, other: &CooccurrenceStats) -> Result<CooccurrenceStats> {
        if self.basis != other.basis || self.window != other.window {
            return Err(Error::ShapeMismatch(
                "cannot merge stats with different basis or window".into(),
            ));
        }
        let mut counts = self.counts.clone();
        for (word, row) in &other.counts {
            let entry = counts
                .entry(word.clone())
                .or_insert_with(|| vec![0; self.basis.len()]);
            for (a, b) in entry.iter_mut().zip(row) {
                *a += *b;
            }
        }
        Ok(CooccurrenceStats {
            basis: self.basis.clone(),
            basis_index: self.basis_index.clone(),
            counts,
            window: self.window,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn count(&self, word: &str, basis: &str) -> u64 {
        match (self.counts.get(word), self.basis_index.get(basis)) {
            (Some(row), Society) => row[*Society],
            _ => 0,
        }
    }

    pub fn word_total(&self, word: &str) -> Option<u64> {
        self.counts.get(word).map(|row| row.iter().sum())
    }

    fn basis_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.basis.len()];
        for row in self.counts.values() {
            for (t, c) in totals.iter_mut().zip(row) {
                *t += *c;
            }
        }
        totals
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.values().flatten().sum()
    }

    /// The probability-ratio context vector of a word, one coordinate
    /// per basis lemma.
    pub fn context_vector(&self, word: &str) -> Result<Tensor> {
        let row = self
            .counts
            .get(word)
            .ok_or_else(|| Error::UnseenWord(word.to_string()))?;
        let word_total: u64 = row.iter().sum();
        let basis_totals = self.basis_totals();
        let grand = self.grand_total() as f64;
        let data: Vec<f64> = row
            .iter()
            .zip(&basis_totals)
            .map(|(&c, &bt)| {
                if c == 0 {
                    0.0
                } else {
                    grand * c as f64 / (word_total as f64 * bt as f64)
                }
            })
            .collect();
        Tensor::vector(Space::noun(self.basis.len()), data)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "#cooc-stats v1 window={} basis={}", self.window, self.basis.len())?;
        for lemma in &self.basis {
            writeln!(f, "basis\t{lemma}")?;
        }
        for (word, row) in &self.counts {
            for (b, &c) in row.iter().enumerate() {
                if c != 0 {
                    writeln!(f, "count\t{word}\t{}\t{c}", self.basis[b])?;
                }
            }
            if row.iter().all(|&c| c == 0) {
                writeln!(f, "seen\t{word}")?;
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<CooccurrenceStats> {
        let text = std::fs::read_to_string(&path)?;
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).unwrap_or_default();
        let window = header
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix("window="))
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::FileFormat {
                file: "cooc-stats".into(),
                message: format!("bad header `{header}`"),
            })?;
        if !header.starts_with("#cooc-stats v1") {
            return Err(Error::FileFormat {
                file: "cooc-stats".into(),
                message: format!("unrecognized header `{header}`"),
            });
        }
        let mut basis = Vec::new();
        let mut rows: Vec<(String, String, u64)> = Vec::new();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, line) in lines {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            let err = |message: String| Error::FileFormat {
                file: "cooc-stats".into(),
                message: format!("line {}: {message}", lineno + 1),
            };
            match parts.as_slice() {
                ["basis", lemma] => basis.push(lemma.to_string()),
                ["seen", word] => seen.push(word.to_string()),
                ["count", word, b, c] => {
                    let c: u64 = c.parse().map_err(|_| err(format!("bad count `{c}`")))?;
                    rows.push((word.to_string(), b.to_string(), c));
                }
                _ => return Err(err(format!("unrecognized line `{line}`"))),
            }
        }
        let basis_index: HashMap<String, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut counts: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for word in seen {
            counts.entry(word).or_insert_with(|| vec![0; basis.len()]);
        }
        for (word, b, c) in rows {
            let idx = *basis_index.get(&b).ok_or_else(|| Error::FileFormat {
                file: "cooc-stats".into(),
                message: format!("count references unknown basis lemma `{b}`"),
            })?;
            counts.entry(word).or_insert_with(|| vec![0; basis.len()])[idx] = c;
        }
        CooccurrenceStats::from_counts(basis, counts, window)
    }
}

/// Read a lemmatized corpus: one sentence per line, whitespace-separated
/// tokens. Empty lines are skipped.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_corpus(&text))
}

pub fn parse_corpus(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|line| line.split_whitespace().map(str::to_string).collect())
        .filter(|s: &Vec<String>| !s.is_empty())
        .collect()
}

/// One subject-verb-object occurrence with a count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvoTriple {
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub count: u64,
}

/// One `owner's possessed` occurrence with a count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossPair {
    pub owner: String,
    pub possessed: String,
    pub count: u64,
}

/// Parse `subject<TAB>verb<TAB>object<TAB>count` lines.
pub fn parse_triples(text: &str) -> Result<Vec<SvoTriple>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        let err = |message: String| Error::FileFormat {
            file: "triples".into(),
            message: format!("line {}: {message}", lineno + 1),
        };
        if parts.len() != 4 {
            return Err(err("expected `subject<TAB>verb<TAB>object<TAB>count`".into()));
        }
        let count: u64 = parts[3]
            .parse()
            .map_err(|_| err(format!("bad count `{}`", parts[3])))?;
        if count == 0 {
            return Err(err("count must be at least 1".into()));
        }
        out.push(SvoTriple {
            subject: parts[0].to_string(),
            verb: parts[1].to_string(),
            object: parts[2].to_string(),
            count,
        });
    }
    Ok(out)
}

/// Parse `owner<TAB>possessed<TAB>count` lines.
pub fn parse_pairs(text: &str) -> Result<Vec<PossPair>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        let err = |message: String| Error::FileFormat {
            file: "pairs".into(),
            message: format!("line {}: {message}", lineno + 1),
        };
        if parts.len() != 3 {
            return Err(err("expected `owner<TAB>possessed<TAB>count`".into()));
        }
        let count: u64 = parts[2]
            .parse()
            .map_err(|_| err(format!("bad count `{}`", parts[2])))?;
        if count == 0 {
            return Err(err("count must be at least 1".into()));
        }
        out.push(PossPair {
            owner: parts[0].to_string(),
            possessed: parts[1].to_string(),
            count,
        });
    }
    Ok(out)
}

pub fn load_triples(path: impl AsRef<Path>) -> Result<Vec<SvoTriple>> {
    parse_triples(&std::fs::read_to_string(path)?)
}

pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<PossPair>> {
    parse_pairs(&std::fs::read_to_string(path)?)
}

fn lookup<'s>(store: &'s VectorStore, lemma: &str) -> Result<&'s Tensor> {
    store
        .vector(lemma)
        .ok_or_else(|| Error::UnseenWord(lemma.to_string()))
}

/// The relational verb matrix: the count-weighted sum of subject⊗object
/// context-vector outer products over the verb's occurrences.
pub fn build_verb_matrix(triples: &[SvoTriple], store: &VectorStore) -> Result<Tensor> {
    let n = store.space().clone();
    let mut m = Tensor::zeros(vec![n.clone(), n]);
    for t in triples {
        let s = lookup(store, &t.subject)?;
        let o = lookup(store, &t.object)?;
        m = m.add(&outer(s, o)?.scale(t.count as f64))?;
    }
    Ok(m)
}

/// Group triples by their verb lemma, preserving encounter order within
/// each group.
pub fn triples_by_verb(triples: &[SvoTriple]) -> BTreeMap<String, Vec<SvoTriple>> {
    let mut groups: BTreeMap<String, Vec<SvoTriple>> = BTreeMap::new();
    for t in triples {
        groups.entry(t.verb.clone()).or_default().push(t.clone());
    }
    groups
}

/// The ownership map. Identity mode ignores the pairs; learned mode sums
/// owner⊗possessed outer products with the possessed side normalized, so
/// applying the map to a possessed noun's unit vector returns the
/// count-weighted sum of its owners.
pub fn build_ownership_map(
    pairs: &[PossPair],
    store: &VectorStore,
    learned: bool,
) -> Result<OwnershipMap> {
    if !learned {
        return Ok(OwnershipMap::Identity);
    }
    if pairs.is_empty() {
        return Err(Error::EmptyOwnershipPairs);
    }
    let n = store.space().clone();
    let mut m = Tensor::zeros(vec![n.clone(), n]);
    for p in pairs {
        let owner = lookup(store, &p.owner)?;
        let possessed = lookup(store, &p.possessed)?;
        let norm = possessed.norm();
        if norm == 0.0 {
            continue;
        }
        let unit = possessed.scale(1.0 / norm);
        m = m.add(&outer(owner, &unit)?.scale(p.count as f64))?;
    }
    OwnershipMap::learned(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentences(lines: &[&str]) -> Vec<Vec<String>> {
        parse_corpus(&lines.join("\n"))
    }

    #[test]
    fn window_one_hand_count() {
        let s = sentences(&["a b a"]);
        let stats = CooccurrenceStats::build(&s, 1, 2).unwrap();
        assert_eq!(stats.count("a", "b"), 2);
        assert_eq!(stats.count("b", "a"), 2);
        assert_eq!(stats.count("a", "a"), 0);
        assert_eq!(stats.count("b", "b"), 0);
    }

    #[test]
    fn single_token_has_zero_counts() {
        let s = sentences(&["hello"]);
        let stats = CooccurrenceStats::build(&s, 5, 1).unwrap();
        assert_eq!(stats.count("hello", "hello"), 0);
        assert_eq!(stats.grand_total(), 0);
        // the word is still known, with an all-zero vector
        let v = stats.context_vector("hello").unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn windows_do_not_cross_sentence_boundaries() {
        let joined = sentences(&["x y", "y x"]);
        let stats = CooccurrenceStats::build(&joined, 5, 2).unwrap();
        assert_eq!(stats.count("x", "y"), 2);
        let one_line = sentences(&["x y y x"]);
        let merged = CooccurrenceStats::build(&one_line, 5, 2).unwrap();
        assert!(merged.count("x", "y") > stats.count("x", "y"));
    }

    #[test]
    fn planted_isolation_keeps_other_counts_zero() {
        let s = sentences(&[
            "boys like",
            "boys like",
            "girls prefer dolls",
            "girls prefer games",
        ]);
        let stats = CooccurrenceStats::build(&s, 5, 5).unwrap();
        for basis in ["girls", "prefer", "dolls", "games"] {
            assert_eq!(stats.count("boys", basis), 0, "boys x {basis}");
        }
        assert_eq!(stats.count("boys", "like"), 2);
    }

    #[test]
    fn uniform_counts_give_unit_coordinates() {
        let mut counts = BTreeMap::new();
        counts.insert("a".to_string(), vec![3, 3]);
        counts.insert("b".to_string(), vec![3, 3]);
        let stats =
            CooccurrenceStats::from_counts(vec!["a".into(), "b".into()], counts, 5).unwrap();
        let v = stats.context_vector("a").unwrap();
        assert_eq!(v.data(), &[1.0, 1.0]);
    }

    #[test]
    fn zero_count_coordinate_is_zero() {
        let mut counts = BTreeMap::new();
        counts.insert("a".to_string(), vec![4, 0]);
        counts.insert("b".to_string(), vec![0, 4]);
        let stats =
            CooccurrenceStats::from_counts(vec!["a".into(), "b".into()], counts, 5).unwrap();
        let v = stats.context_vector("a").unwrap();
        assert_eq!(v.data()[1], 0.0);
        assert!(v.data()[0] > 0.0);
    }

    #[test]
    fn unseen_word_is_an_error() {
        let s = sentences(&["a b"]);
        let stats = CooccurrenceStats::build(&s, 1, 2).unwrap();
        assert!(matches!(
            stats.context_vector("zebra"),
            Err(Error::UnseenWord(_))
        ));
    }

    #[test]
    fn basis_larger_than_vocabulary_is_an_error() {
        let s = sentences(&["a b"]);
        assert!(matches!(
            CooccurrenceStats::build(&s, 1, 3),
            Err(Error::BasisTooLarge { .. })
        ));
    }

    #[test]
    fn merge_is_exact_addition() {
        let left = CooccurrenceStats::build(&sentences(&["a b", "b c a"]), 2, 3).unwrap();
        let right = CooccurrenceStats::build(&sentences(&["c c a"]), 2, 3).unwrap();
        // build over the concatenation equals the merge of shard counts
        let both =
            CooccurrenceStats::build(&sentences(&["a b", "b c a", "c c a"]), 2, 3).unwrap();
        let merged = left.merge(&right).unwrap();
        for w in ["a", "b", "c"] {
            for b in ["a", "b", "c"] {
                assert_eq!(merged.count(w, b), both.count(w, b), "{w} x {b}");
            }
        }
    }

    #[test]
    fn stats_round_trip_through_disk() {
        let s = sentences(&["dog bite cat", "dog chase cat cat"]);
        let stats = CooccurrenceStats::build(&s, 2, 3).unwrap();
        let path = std::env::temp_dir().join(format!("relclause-cooc-{}", std::process::id()));
        stats.save(&path).unwrap();
        let loaded = CooccurrenceStats::load(&path).unwrap();
        assert_eq!(loaded.basis(), stats.basis());
        for w in stats.vocabulary() {
            assert_eq!(loaded.word_total(w), stats.word_total(w), "{w}");
        }
        std::fs::remove_file(&path).ok();
    }

    fn toy_store() -> VectorStore {
        let mut store = VectorStore::new(2);
        let n = Space::noun(2);
        for (w, v) in [
            ("dog", vec![1.0, 0.0]),
            ("cat", vec![0.0, 1.0]),
            ("man", vec![2.0, 1.0]),
            ("bone", vec![0.5, 0.5]),
        ] {
            store
                .insert_vector(w, Tensor::vector(n.clone(), v).unwrap())
                .unwrap();
        }
        store
    }

    #[test]
    fn verb_matrix_is_summed_outer_products() {
        let store = toy_store();
        let one = vec![SvoTriple {
            subject: "dog".into(),
            verb: "chew".into(),
            object: "bone".into(),
            count: 1,
        }];
        let m = build_verb_matrix(&one, &store).unwrap();
        assert_eq!(m.data(), &[0.5, 0.5, 0.0, 0.0]);

        let doubled = vec![SvoTriple { count: 2, ..one[0].clone() }];
        let m2 = build_verb_matrix(&doubled, &store).unwrap();
        assert_eq!(m2, m.scale(2.0));

        let mixed = vec![
            one[0].clone(),
            SvoTriple {
                subject: "man".into(),
                verb: "chew".into(),
                object: "cat".into(),
                count: 3,
            },
        ];
        let got = build_verb_matrix(&mixed, &store).unwrap();
        // loop-accumulated oracle
        let mut want = Tensor::zeros(vec![Space::noun(2), Space::noun(2)]);
        for t in &mixed {
            let s = store.vector(&t.subject).unwrap();
            let o = store.vector(&t.object).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let cur = want.get(&[i, j]);
                    want.set(&[i, j], cur + t.count as f64 * s.data()[i] * o.data()[j]);
                }
            }
        }
        assert!(got.max_abs_diff(&want).unwrap() <= 1e-15);
    }

    #[test]
    fn ownership_identity_and_learned() {
        let store = toy_store();
        let pairs = vec![PossPair {
            owner: "man".into(),
            possessed: "dog".into(),
            count: 1,
        }];
        let id = build_ownership_map(&pairs, &store, false).unwrap();
        assert!(matches!(id, OwnershipMap::Identity));

        // dog is a unit basis vector, so M . dog = man exactly
        let learned = build_ownership_map(&pairs, &store, true).unwrap();
        let dog = store.vector("dog").unwrap();
        let man = store.vector("man").unwrap();
        let routed = learned.apply(dog).unwrap();
        assert!(routed.max_abs_diff(man).unwrap() <= 1e-15);

        // two owners of the same possessed sum
        let both = vec![
            pairs[0].clone(),
            PossPair {
                owner: "cat".into(),
                possessed: "dog".into(),
                count: 1,
            },
        ];
        let learned2 = build_ownership_map(&both, &store, true).unwrap();
        let routed2 = learned2.apply(dog).unwrap();
        let want = man.add(store.vector("cat").unwrap()).unwrap();
        assert!(routed2.max_abs_diff(&want).unwrap() <= 1e-15);

        assert!(matches!(
            build_ownership_map(&[], &store, true),
            Err(Error::EmptyOwnershipPairs)
        ));
    }

    #[test]
    fn duplicated_corpus_leaves_vectors_unchanged() {
        let once = sentences(&["dog bite cat", "cat flee dog", "dog chew bone"]);
        let twice: Vec<Vec<String>> = once.iter().chain(once.iter()).cloned().collect();
        let a = CooccurrenceStats::build(&once, 2, 3).unwrap();
        let b = CooccurrenceStats::build(&twice, 2, 3).unwrap();
        for w in ["dog", "cat", "bite"] {
            let va = a.context_vector(w).unwrap();
            let vb = b.context_vector(w).unwrap();
            assert!(va.max_abs_diff(&vb).unwrap() <= 1e-15, "{w}");
        }
    }
}
