//! Set-theoretic semantics over a finite universe, and its exact
//! embedding into vector spaces.
//!
//! Sets are bitsets so the 0/1 equivalence with the truth-theoretic
//! model needs no floating-point tolerance: a set embeds as a 0/1 sum of
//! basis vectors, a relation as a 0/1 matrix, membership and
//! intersection are pointwise merges, and relation application is
//! matrix application.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tensor::{frob_mu, matvec, vecmat, Space, Tensor};
use crate::truth::RelationalModel;

/// A subset of a fixed-size universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
    size: usize,
}

impl BitSet {
    pub fn empty(size: usize) -> Self {
        BitSet {
            words: vec![0; size.div_ceil(64)],
            size,
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(size: usize, members: I) -> Self {
        let mut s = BitSet::empty(size);
        for m in members {
            s.insert(m);
        }
        s
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.size, "bit {i} outside universe of {}", self.size);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.size && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        assert_eq!(self.size, other.size);
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            size: self.size,
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        assert_eq!(self.size, other.size);
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
            size: self.size,
        }
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&i| self.contains(i))
    }
}

/// The 0/1 shadow of a [`RelationalModel`]: unary predicates for common
/// nouns, binary predicates for verbs, and the ownership predicate.
#[derive(Debug, Clone)]
pub struct SetModel {
    universe_size: usize,
    unary: BTreeMap<String, BitSet>,
    binary: BTreeMap<String, Vec<(usize, usize)>>,
    has: Vec<(usize, usize)>,
}

impl SetModel {
    pub fn new(universe_size: usize) -> Self {
        SetModel {
            universe_size,
            unary: BTreeMap::new(),
            binary: BTreeMap::new(),
            has: Vec::new(),
        }
    }

    /// Read nonzero weights as membership.
    pub fn from_relational(model: &RelationalModel) -> Self {
        let size = model.universe_size();
        let mut set = SetModel::new(size);
        for name in model.noun_names() {
            let members = model.noun_members(name).expect("declared noun");
            set.unary
                .insert(name.to_string(), BitSet::from_members(size, members.iter().copied()));
        }
        for name in model.verb_names() {
            let pairs: Vec<(usize, usize)> = model
                .verb_pairs(name)
                .expect("declared verb")
                .iter()
                .filter(|&&(_, _, w)| w != 0.0)
                .map(|&(i, j, _)| (i, j))
                .collect();
            set.binary.insert(name.to_string(), pairs);
        }
        set.has = model
            .ownership_pairs()
            .iter()
            .filter(|&&(_, _, w)| w != 0.0)
            .map(|&(o, p, _)| (o, p))
            .collect();
        set
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn space(&self) -> Space {
        Space::noun(self.universe_size)
    }

    pub fn declare_unary(&mut self, name: impl Into<String>, set: BitSet) {
        self.unary.insert(name.into(), set);
    }

    pub fn declare_binary(&mut self, name: impl Into<String>, pairs: Vec<(usize, usize)>) {
        self.binary.insert(name.into(), pairs);
    }

    pub fn declare_has(&mut self, pairs: Vec<(usize, usize)>) {
        self.has = pairs;
    }

    pub fn unary(&self, name: &str) -> Result<&BitSet> {
        self.unary
            .get(name)
            .ok_or_else(|| Error::UndeclaredName(name.to_string()))
    }

    pub fn binary(&self, name: &str) -> Result<&[(usize, usize)]> {
        self.binary
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UndeclaredName(name.to_string()))
    }

    pub fn has_pairs(&self) -> &[(usize, usize)] {
        &self.has
    }

    /// `Possessor ∩ Has⁻¹[Verb⁻¹[Object] ∩ Subject]` — the subject
    /// possessive clause as one intersection.
    pub fn poss_subj_intersection(
        &self,
        possessor: &str,
        subject: &str,
        verb: &str,
        object: &str,
    ) -> Result<BitSet> {
        let poss = self.unary(possessor)?;
        let sbj = self.unary(subject)?;
        let obj = self.unary(object)?;
        let rel = self.binary(verb)?;
        let modified = inverse_image(rel, obj, self.universe_size).intersection(sbj);
        Ok(inverse_image(&self.has, &modified, self.universe_size).intersection(poss))
    }

    /// `Possessor ∩ Has⁻¹[Verb[Subject] ∩ Object]` — the object form.
    pub fn poss_obj_intersection(
        &self,
        possessor: &str,
        object: &str,
        subject: &str,
        verb: &str,
    ) -> Result<BitSet> {
        let poss = self.unary(possessor)?;
        let sbj = self.unary(subject)?;
        let obj = self.unary(object)?;
        let rel = self.binary(verb)?;
        let modified = relational_image(rel, sbj, self.universe_size).intersection(obj);
        Ok(inverse_image(&self.has, &modified, self.universe_size).intersection(poss))
    }

    /// The nested form the pronoun-free paraphrase induces:
    /// `Possessor ∩ Has⁻¹[Subject ∩ Verb⁻¹[Object]]`. Equal to
    /// [`poss_subj_intersection`](Self::poss_subj_intersection) because
    /// intersection commutes.
    pub fn decomposed_poss_subj(
        &self,
        possessor: &str,
        subject: &str,
        verb: &str,
        object: &str,
    ) -> Result<BitSet> {
        let poss = self.unary(possessor)?;
        let sbj = self.unary(subject)?;
        let obj = self.unary(object)?;
        let rel = self.binary(verb)?;
        let inner = sbj.intersection(&inverse_image(rel, obj, self.universe_size));
        Ok(poss.intersection(&inverse_image(&self.has, &inner, self.universe_size)))
    }

    /// Embed a named unary predicate as a 0/1 vector.
    pub fn embed_unary(&self, name: &str) -> Result<Tensor> {
        Ok(embed_set(self.unary(name)?))
    }

    /// Embed a named binary predicate as a 0/1 matrix.
    pub fn embed_binary(&self, name: &str) -> Result<Tensor> {
        Ok(embed_relation(self.binary(name)?, self.universe_size))
    }

    pub fn embed_has(&self) -> Tensor {
        embed_relation(&self.has, self.universe_size)
    }

    /// The subject intersection form interpreted in vector space: every
    /// predicate embedded, relation application as matrix application,
    /// intersection as pointwise merge. Multiplicities accumulate
    /// exactly as in the truth-theoretic evaluation.
    pub fn embedded_poss_subj(
        &self,
        possessor: &str,
        subject: &str,
        verb: &str,
        object: &str,
    ) -> Result<Tensor> {
        let poss = self.embed_unary(possessor)?;
        let sbj = self.embed_unary(subject)?;
        let obj = self.embed_unary(object)?;
        let rel = self.embed_binary(verb)?;
        let has = self.embed_has();
        let modified = frob_mu(&matvec(&rel, &obj)?, &sbj)?;
        frob_mu(&matvec(&has, &modified)?, &poss)
    }

    /// The object intersection form in vector space.
    pub fn embedded_poss_obj(
        &self,
        possessor: &str,
        object: &str,
        subject: &str,
        verb: &str,
    ) -> Result<Tensor> {
        let poss = self.embed_unary(possessor)?;
        let sbj = self.embed_unary(subject)?;
        let obj = self.embed_unary(object)?;
        let rel = self.embed_binary(verb)?;
        let has = self.embed_has();
        let modified = frob_mu(&vecmat(&sbj, &rel)?, &obj)?;
        frob_mu(&matvec(&has, &modified)?, &poss)
    }
}

/// Forward image `R[T] = { y | (x, y) ∈ R for some x ∈ T }`.
pub fn relational_image(rel: &[(usize, usize)], t: &BitSet, size: usize) -> BitSet {
    let mut out = BitSet::empty(size);
    for &(x, y) in rel {
        if t.contains(x) {
            out.insert(y);
        }
    }
    out
}

/// Preimage `R⁻¹[T] = { x | (x, y) ∈ R for some y ∈ T }`.
pub fn inverse_image(rel: &[(usize, usize)], t: &BitSet, size: usize) -> BitSet {
    let mut out = BitSet::empty(size);
    for &(x, y) in rel {
        if t.contains(y) {
            out.insert(x);
        }
    }
    out
}

/// A set as the 0/1 sum of its members' basis vectors.
pub fn embed_set(set: &BitSet) -> Tensor {
    let mut data = vec![0.0; set.size()];
    for i in set.iter() {
        data[i] = 1.0;
    }
    Tensor::vector(Space::noun(set.size()), data).expect("0/1 data is finite")
}

/// A relation as a 0/1 matrix.
pub fn embed_relation(rel: &[(usize, usize)], size: usize) -> Tensor {
    let n = Space::noun(size);
    let mut m = Tensor::zeros(vec![n.clone(), n]);
    for &(i, j) in rel {
        m.set(&[i, j], 1.0);
    }
    m
}
