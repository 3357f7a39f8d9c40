//! Truth-theoretic instantiation: the noun space is spanned by a
//! universe of individuals, the sentence space is one-dimensional, and
//! verbs are weighted relations. Clause meanings come out as weighted
//! sums of possessor basis vectors, computable both by the generic
//! composers and by a direct closed form over the relation lists.
//!
//! Model file format (1-based indices, `#` comments):
//!
//! ```text
//! [universe] john n2 n3 n4 a5 a6 a7 n8
//! [noun authors] 5 6 7
//! [verb entertain] 2 1 1.0
//! [ownership] 5 2
//! [ownership] 8 4 0.5
//! ```
//!
//! Verb and ownership weights default to 1 when omitted and must lie in
//! `[0, 1]`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::functor::OwnershipMap;
use crate::tensor::{Space, Tensor};

#[derive(Debug, Clone, Default)]
pub struct RelationalModel {
    universe: Vec<String>,
    common_nouns: BTreeMap<String, Vec<usize>>,
    verbs: BTreeMap<String, Vec<(usize, usize, f64)>>,
    ownership: Vec<(usize, usize, f64)>,
}

impl RelationalModel {
    pub fn new<I, S>(universe: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        RelationalModel {
            universe: universe.into_iter().map(Into::into).collect(),
            ..RelationalModel::default()
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    pub fn individual_names(&self) -> &[String] {
        &self.universe
    }

    pub fn noun_space(&self) -> Space {
        Space::noun(self.universe.len())
    }

    /// The one-dimensional sentence space of this model.
    pub fn sentence_space(&self) -> Space {
        Space::sentence(1)
    }

    fn check_index(&self, index: usize) -> Result<usize> {
        if index == 0 || index > self.universe.len() {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.universe.len(),
            });
        }
        Ok(index - 1)
    }

    fn check_weight(w: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::ShapeMismatch(format!(
                "truth weight {w} outside [0, 1]"
            )));
        }
        Ok(w)
    }

    /// Declare a common noun as a set of 1-based individual indices.
    pub fn declare_noun<I: IntoIterator<Item = usize>>(
        &mut self,
        name: impl Into<String>,
        members: I,
    ) -> Result<()> {
        let members: Vec<usize> = members
            .into_iter()
            .map(|i| self.check_index(i))
            .collect::<Result<_>>()?;
        self.common_nouns.insert(name.into(), members);
        Ok(())
    }

    /// Add one weighted pair to a verb relation (1-based indices).
    pub fn declare_verb_pair(
        &mut self,
        name: impl Into<String>,
        subject: usize,
        object: usize,
        weight: f64,
    ) -> Result<()> {
        let i = self.check_index(subject)?;
        let j = self.check_index(object)?;
        let w = Self::check_weight(weight)?;
        self.verbs.entry(name.into()).or_default().push((i, j, w));
        Ok(())
    }

    /// Add one weighted ownership pair (owner, possessed; 1-based).
    pub fn declare_ownership(&mut self, owner: usize, possessed: usize, weight: f64) -> Result<()> {
        let o = self.check_index(owner)?;
        let p = self.check_index(possessed)?;
        let w = Self::check_weight(weight)?;
        self.ownership.push((o, p, w));
        Ok(())
    }

    pub fn noun_members(&self, name: &str) -> Result<&[usize]> {
        self.common_nouns
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UndeclaredName(name.to_string()))
    }

    pub fn verb_pairs(&self, name: &str) -> Result<&[(usize, usize, f64)]> {
        self.verbs
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UndeclaredName(name.to_string()))
    }

    pub fn ownership_pairs(&self) -> &[(usize, usize, f64)] {
        &self.ownership
    }

    pub fn noun_names(&self) -> impl Iterator<Item = &str> {
        self.common_nouns.keys().map(String::as_str)
    }

    pub fn verb_names(&self) -> impl Iterator<Item = &str> {
        self.verbs.keys().map(String::as_str)
    }

    /// Sum of basis vectors over the noun's member set.
    pub fn noun_vector(&self, name: &str) -> Result<Tensor> {
        let members = self.noun_members(name)?;
        let mut data = vec![0.0; self.universe.len()];
        for &i in members {
            data[i] = 1.0;
        }
        Tensor::vector(self.noun_space(), data)
    }

    /// The verb as a weighted matrix: entry `(i, j)` is the degree with
    /// which individual `i` relates to individual `j`. Duplicate pairs
    /// accumulate.
    pub fn verb_matrix(&self, name: &str) -> Result<Tensor> {
        let pairs = self.verb_pairs(name)?;
        let n = self.noun_space();
        let mut m = Tensor::zeros(vec![n.clone(), n]);
        for &(i, j, w) in pairs {
            let cur = m.get(&[i, j]);
            m.set(&[i, j], cur + w);
        }
        Ok(m)
    }

    /// The ownership relation as a matrix: entry `(owner, possessed)`.
    /// Applying it to a possessed-noun vector yields the owners.
    pub fn ownership_matrix(&self) -> Tensor {
        let n = self.noun_space();
        let mut m = Tensor::zeros(vec![n.clone(), n]);
        for &(o, p, w) in &self.ownership {
            let cur = m.get(&[o, p]);
            m.set(&[o, p], cur + w);
        }
        m
    }

    pub fn ownership_map(&self) -> OwnershipMap {
        OwnershipMap::Learned(self.ownership_matrix())
    }

    /// Closed form of `Possessor whose Subject Verb Object`, computed by
    /// direct iteration over the relation lists: possessors owning
    /// subject individuals, weighted by how the verb relates those
    /// subjects to the object.
    pub fn eval_poss_subj(
        &self,
        possessor: &str,
        subject: &str,
        verb: &str,
        object: &str,
    ) -> Result<Tensor> {
        let poss = self.noun_members(possessor)?;
        let sbj = self.noun_members(subject)?;
        let obj = self.noun_members(object)?;
        let pairs = self.verb_pairs(verb)?;

        let mut verb_applied = vec![0.0; self.universe.len()];
        for &(i, j, w) in pairs {
            if obj.contains(&j) {
                verb_applied[i] += w;
            }
        }
        let mut data = vec![0.0; self.universe.len()];
        for &(owner, possessed, w) in &self.ownership {
            if poss.contains(&owner) && sbj.contains(&possessed) {
                data[owner] += w * verb_applied[possessed];
            }
        }
        Tensor::vector(self.noun_space(), data)
    }

    /// Closed form of `Possessor whose Object Subject Verb`: the merge
    /// and cancelation swap sides, so the verb applies to the subject
    /// set from the left and ownership routes the clause object.
    pub fn eval_poss_obj(
        &self,
        possessor: &str,
        object: &str,
        subject: &str,
        verb: &str,
    ) -> Result<Tensor> {
        let poss = self.noun_members(possessor)?;
        let sbj = self.noun_members(subject)?;
        let obj = self.noun_members(object)?;
        let pairs = self.verb_pairs(verb)?;

        let mut verb_applied = vec![0.0; self.universe.len()];
        for &(i, j, w) in pairs {
            if sbj.contains(&i) {
                verb_applied[j] += w;
            }
        }
        let mut data = vec![0.0; self.universe.len()];
        for &(owner, possessed, w) in &self.ownership {
            if poss.contains(&owner) && obj.contains(&possessed) {
                data[owner] += w * verb_applied[possessed];
            }
        }
        Tensor::vector(self.noun_space(), data)
    }

    /// Parse the sectioned model format.
    pub fn parse(text: &str) -> Result<RelationalModel> {
        let mut model: Option<RelationalModel> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::FileFormat {
                file: "model".into(),
                message: format!("line {}: {message}", lineno + 1),
            };
            if !line.starts_with('[') {
                return Err(err(format!("expected a section line, got `{line}`")));
            }
            let close = line
                .find(']')
                .ok_or_else(|| err("unterminated section header".into()))?;
            let header: Vec<&str> = line[1..close].split_whitespace().collect();
            let rest: Vec<&str> = line[close + 1..].split_whitespace().collect();
            match header.as_slice() {
                ["universe"] => {
                    if model.is_some() {
                        return Err(err("duplicate [universe] section".into()));
                    }
                    if rest.is_empty() {
                        return Err(err("empty universe".into()));
                    }
                    model = Some(RelationalModel::new(rest));
                }
                ["noun", name] => {
                    let m = model
                        .as_mut()
                        .ok_or_else(|| err("[universe] must come first".into()))?;
                    let members: Vec<usize> = rest
                        .iter()
                        .map(|t| {
                            t.parse::<usize>().map_err(|_| err(format!("bad index `{t}`")))
                        })
                        .collect::<Result<_>>()?;
                    m.declare_noun(*name, members)?;
                }
                ["verb", name] => {
                    let m = model
                        .as_mut()
                        .ok_or_else(|| err("[universe] must come first".into()))?;
                    if rest.len() != 2 && rest.len() != 3 {
                        return Err(err("verb line needs `i j` or `i j weight`".into()));
                    }
                    let i: usize = rest[0]
                        .parse()
                        .map_err(|_| err(format!("bad index `{}`", rest[0])))?;
                    let j: usize = rest[1]
                        .parse()
                        .map_err(|_| err(format!("bad index `{}`", rest[1])))?;
                    let w: f64 = match rest.get(2) {
                        Some(t) => t.parse().map_err(|_| err(format!("bad weight `{t}`")))?,
                        None => 1.0,
                    };
                    m.declare_verb_pair(*name, i, j, w)?;
                }
                ["ownership"] => {
                    let m = model
                        .as_mut()
                        .ok_or_else(|| err("[universe] must come first".into()))?;
                    if rest.len() != 2 && rest.len() != 3 {
                        return Err(err(
                            "ownership line needs `owner possessed [weight]`".into(),
                        ));
                    }
                    let o: usize = rest[0]
                        .parse()
                        .map_err(|_| err(format!("bad index `{}`", rest[0])))?;
                    let p: usize = rest[1]
                        .parse()
                        .map_err(|_| err(format!("bad index `{}`", rest[1])))?;
                    let w: f64 = match rest.get(2) {
                        Some(t) => t.parse().map_err(|_| err(format!("bad weight `{t}`")))?,
                        None => 1.0,
                    };
                    m.declare_ownership(o, p, w)?;
                }
                other => {
                    return Err(err(format!("unknown section `{other:?}`")));
                }
            }
        }
        model.ok_or_else(|| Error::FileFormat {
            file: "model".into(),
            message: "missing [universe] section".into(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RelationalModel> {
        let text = std::fs::read_to_string(path)?;
        RelationalModel::parse(&text)
    }
}
