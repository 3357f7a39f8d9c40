//! Closed-form clause composers.
//!
//! These are the yanked normal forms of the pronoun diagrams, written as
//! plain linear algebra: pointwise products for merge, matrix-vector
//! application for the verb, and an ownership map routing a possessed
//! noun to its owners. Equivalence with the full diagrams is checked by
//! the network-based code in [`super::pronoun`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::{frob_mu, matvec, vecmat, Space, Tensor};

/// The ownership map `'s : N -> N`, sending a possessed noun to its
/// owners.
#[derive(Debug, Clone)]
pub enum OwnershipMap {
    /// The exact identity matrix (the strongest variant in practice).
    Identity,
    /// A learned matrix, e.g. summed owner/possessed vector outer
    /// products.
    Learned(Tensor),
}

impl OwnershipMap {
    pub fn learned(matrix: Tensor) -> Result<Self> {
        if matrix.rank() != 2 || matrix.shape()[0] != matrix.shape()[1] {
            return Err(Error::ShapeMismatch(format!(
                "ownership map must be a square matrix, got dims {:?}",
                matrix.dims()
            )));
        }
        Ok(OwnershipMap::Learned(matrix))
    }

    pub fn apply(&self, v: &Tensor) -> Result<Tensor> {
        match self {
            OwnershipMap::Identity => Ok(v.clone()),
            OwnershipMap::Learned(m) => matvec(m, v),
        }
    }

    /// Materialize as a matrix on `space`.
    pub fn matrix(&self, space: &Space) -> Tensor {
        match self {
            OwnershipMap::Identity => Tensor::identity(space.clone()),
            OwnershipMap::Learned(m) => m.clone(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            OwnershipMap::Identity => "identity",
            OwnershipMap::Learned(_) => "learned",
        }
    }
}

/// A verb meaning: either a matrix on `N ⊗ N` or a cube on `N ⊗ S ⊗ N`.
#[derive(Debug, Clone)]
pub enum Verb {
    Matrix(Tensor),
    Cube(Tensor),
}

impl Verb {
    pub fn matrix(t: Tensor) -> Result<Self> {
        if t.rank() != 2 || t.shape()[0] != t.shape()[1] {
            return Err(Error::ShapeMismatch(format!(
                "matrix verb must be square rank 2, got dims {:?}",
                t.dims()
            )));
        }
        Ok(Verb::Matrix(t))
    }

    pub fn cube(t: Tensor) -> Result<Self> {
        if t.rank() != 3 || t.shape()[0] != t.shape()[2] {
            return Err(Error::ShapeMismatch(format!(
                "cube verb must be rank 3 with equal outer legs, got dims {:?}",
                t.dims()
            )));
        }
        Ok(Verb::Cube(t))
    }

    pub fn noun_space(&self) -> &Space {
        match self {
            Verb::Matrix(t) | Verb::Cube(t) => &t.shape()[0],
        }
    }

    /// The matrix the composers consume: a cube has its sentence leg
    /// discarded (summed out), a matrix is returned as-is.
    pub fn collapsed(&self) -> Tensor {
        match self {
            Verb::Matrix(t) => t.clone(),
            Verb::Cube(t) => {
                let n = t.shape()[0].clone();
                let (dn, ds) = (t.shape()[0].dim, t.shape()[1].dim);
                let mut out = Tensor::zeros(vec![n.clone(), n]);
                for i in 0..dn {
                    for j in 0..dn {
                        let mut acc = 0.0;
                        for s in 0..ds {
                            acc += t.get(&[i, s, j]);
                        }
                        out.set(&[i, j], acc);
                    }
                }
                out
            }
        }
    }
}

/// The four supported relative-clause shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClausePattern {
    /// Head that Verb Object — head is the clause subject.
    SubjRel,
    /// Head that Subject Verb — head is the clause object.
    ObjRel,
    /// Possessor whose Subject Verb Object.
    PossSubj,
    /// Possessor whose Object Subject Verb.
    PossObj,
}

impl ClausePattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClausePattern::SubjRel => "SUBJ_REL",
            ClausePattern::ObjRel => "OBJ_REL",
            ClausePattern::PossSubj => "POSS_SUBJ",
            ClausePattern::PossObj => "POSS_OBJ",
        }
    }

    pub fn is_possessive(&self) -> bool {
        matches!(self, ClausePattern::PossSubj | ClausePattern::PossObj)
    }
}

impl FromStr for ClausePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SUBJ_REL" => Ok(ClausePattern::SubjRel),
            "OBJ_REL" => Ok(ClausePattern::ObjRel),
            "POSS_SUBJ" => Ok(ClausePattern::PossSubj),
            "POSS_OBJ" => Ok(ClausePattern::PossObj),
            other => Err(Error::UndeclaredName(format!("clause pattern `{other}`"))),
        }
    }
}

impl fmt::Display for ClausePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A clause with its role fillers.
#[derive(Debug, Clone)]
pub struct ClauseSpec {
    pub pattern: ClausePattern,
    pub possessor: Option<Tensor>,
    pub subject: Option<Tensor>,
    pub object: Option<Tensor>,
    pub verb: Verb,
}

impl ClauseSpec {
    pub fn poss_subj(possessor: Tensor, subject: Tensor, verb: Verb, object: Tensor) -> Self {
        ClauseSpec {
            pattern: ClausePattern::PossSubj,
            possessor: Some(possessor),
            subject: Some(subject),
            object: Some(object),
            verb,
        }
    }

    pub fn poss_obj(possessor: Tensor, object: Tensor, subject: Tensor, verb: Verb) -> Self {
        ClauseSpec {
            pattern: ClausePattern::PossObj,
            possessor: Some(possessor),
            subject: Some(subject),
            object: Some(object),
            verb,
        }
    }

    pub fn subj_rel(head: Tensor, verb: Verb, object: Tensor) -> Self {
        ClauseSpec {
            pattern: ClausePattern::SubjRel,
            possessor: None,
            subject: Some(head),
            object: Some(object),
            verb,
        }
    }

    pub fn obj_rel(head: Tensor, subject: Tensor, verb: Verb) -> Self {
        ClauseSpec {
            pattern: ClausePattern::ObjRel,
            possessor: None,
            subject: Some(subject),
            object: Some(head),
            verb,
        }
    }

    pub fn role(&self, name: &str) -> Result<&Tensor> {
        let field = match name {
            "possessor" => &self.possessor,
            "subject" => &self.subject,
            "object" => &self.object,
            other => return Err(Error::UndeclaredName(format!("clause role `{other}`"))),
        };
        field.as_ref().ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "pattern {} requires the {name} role",
                self.pattern
            ))
        })
    }
}

fn check_noun_vector(v: &Tensor, space: &Space, what: &str) -> Result<()> {
    if v.rank() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be a vector, got rank {}",
            v.rank()
        )));
    }
    if &v.shape()[0] != space {
        return Err(Error::SpaceMismatch {
            expected: space.to_string(),
            got: v.shape()[0].to_string(),
        });
    }
    Ok(())
}

/// Subject relative clause `head that Verb Object`:
/// `head ⊙ (V̄ × object)`.
pub fn compose_subj_rel(head: &Tensor, verb: &Verb, object: &Tensor) -> Result<Tensor> {
    let n = verb.noun_space();
    check_noun_vector(head, n, "head")?;
    check_noun_vector(object, n, "object")?;
    frob_mu(head, &matvec(&verb.collapsed(), object)?)
}

/// Object relative clause `head that Subject Verb`:
/// `head ⊙ (subjectᵀ × V̄)`.
pub fn compose_obj_rel(head: &Tensor, subject: &Tensor, verb: &Verb) -> Result<Tensor> {
    let n = verb.noun_space();
    check_noun_vector(head, n, "head")?;
    check_noun_vector(subject, n, "subject")?;
    frob_mu(head, &vecmat(subject, &verb.collapsed())?)
}

/// Possessive subject clause `Possessor whose Subject Verb Object`:
/// `possessor ⊙ 's(subject ⊙ (V̄ × object))`.
pub fn compose_poss_subj(
    possessor: &Tensor,
    subject: &Tensor,
    verb: &Verb,
    object: &Tensor,
    ownership: &OwnershipMap,
) -> Result<Tensor> {
    let n = verb.noun_space();
    check_noun_vector(possessor, n, "possessor")?;
    check_noun_vector(subject, n, "subject")?;
    check_noun_vector(object, n, "object")?;
    let modified = frob_mu(subject, &matvec(&verb.collapsed(), object)?)?;
    frob_mu(possessor, &ownership.apply(&modified)?)
}

/// Possessive object clause `Possessor whose Object Subject Verb`:
/// `possessor ⊙ 's(object ⊙ (subjectᵀ × V̄))`.
pub fn compose_poss_obj(
    possessor: &Tensor,
    object: &Tensor,
    subject: &Tensor,
    verb: &Verb,
    ownership: &OwnershipMap,
) -> Result<Tensor> {
    let n = verb.noun_space();
    check_noun_vector(possessor, n, "possessor")?;
    check_noun_vector(subject, n, "subject")?;
    check_noun_vector(object, n, "object")?;
    let modified = frob_mu(object, &vecmat(subject, &verb.collapsed())?)?;
    frob_mu(possessor, &ownership.apply(&modified)?)
}

/// Dispatch on the clause pattern.
pub fn compose_clause(spec: &ClauseSpec, ownership: &OwnershipMap) -> Result<Tensor> {
    match spec.pattern {
        ClausePattern::SubjRel => {
            compose_subj_rel(spec.role("subject")?, &spec.verb, spec.role("object")?)
        }
        ClausePattern::ObjRel => {
            compose_obj_rel(spec.role("object")?, spec.role("subject")?, &spec.verb)
        }
        ClausePattern::PossSubj => compose_poss_subj(
            spec.role("possessor")?,
            spec.role("subject")?,
            &spec.verb,
            spec.role("object")?,
            ownership,
        ),
        ClausePattern::PossObj => compose_poss_obj(
            spec.role("possessor")?,
            spec.role("object")?,
            spec.role("subject")?,
            &spec.verb,
            ownership,
        ),
    }
}

/// Plain transitive sentence `Subject Verb Object`. A cube verb returns
/// a sentence-space vector; a matrix verb returns a scalar tensor.
pub fn compose_svo(subject: &Tensor, verb: &Verb, object: &Tensor) -> Result<Tensor> {
    let n = verb.noun_space();
    check_noun_vector(subject, n, "subject")?;
    check_noun_vector(object, n, "object")?;
    match verb {
        Verb::Matrix(m) => {
            let applied = matvec(m, object)?;
            let value = crate::tensor::epsilon(subject, &applied)?;
            Ok(Tensor::scalar(value))
        }
        Verb::Cube(t) => {
            let s_space = t.shape()[1].clone();
            let (dn, ds) = (t.shape()[0].dim, t.shape()[1].dim);
            let mut out = vec![0.0; ds];
            for s in 0..ds {
                for i in 0..dn {
                    for j in 0..dn {
                        out[s] += subject.data()[i] * t.get(&[i, s, j]) * object.data()[j];
                    }
                }
            }
            Tensor::vector(s_space, out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nvec(data: &[f64]) -> Tensor {
        Tensor::vector(Space::noun(data.len()), data.to_vec()).unwrap()
    }

    fn nmat(d: usize, data: &[f64]) -> Verb {
        Verb::matrix(Tensor::matrix(Space::noun(d), Space::noun(d), data.to_vec()).unwrap())
            .unwrap()
    }

    #[test]
    fn possessive_subject_worked_numbers() {
        // men (1,2), dog (1,1), bites = identity, cats (3,4), 's = Id
        let men = nvec(&[1.0, 2.0]);
        let dog = nvec(&[1.0, 1.0]);
        let bites = nmat(2, &[1.0, 0.0, 0.0, 1.0]);
        let cats = nvec(&[3.0, 4.0]);
        let out =
            compose_poss_subj(&men, &dog, &bites, &cats, &OwnershipMap::Identity).unwrap();
        assert_eq!(out.data(), &[3.0, 8.0]);
    }

    #[test]
    fn all_ones_fillers_reduce_to_verb_application() {
        let ones = nvec(&[1.0, 1.0, 1.0]);
        let verb = nmat(3, &[1.0, 2.0, 0.0, 0.5, 0.0, 1.0, 0.0, 3.0, 0.25]);
        let obj = nvec(&[2.0, 1.0, 4.0]);
        let out =
            compose_poss_subj(&ones, &ones, &verb, &obj, &OwnershipMap::Identity).unwrap();
        let direct = matvec(&verb.collapsed(), &obj).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn possessive_object_with_symmetric_verb_matches_subject_case() {
        let men = nvec(&[1.0, 2.0]);
        let dog = nvec(&[1.0, 1.0]);
        let sym = nmat(2, &[1.0, 0.0, 0.0, 1.0]);
        let cats = nvec(&[3.0, 4.0]);
        let out =
            compose_poss_obj(&men, &dog, &cats, &sym, &OwnershipMap::Identity).unwrap();
        assert_eq!(out.data(), &[3.0, 8.0]);
    }

    #[test]
    fn transposed_application_for_object_clause() {
        // men whose dogs cats bite: men ⊙ 's(dogs ⊙ (catsᵀ × B))
        let men = nvec(&[1.0, 1.0]);
        let dogs = nvec(&[1.0, 1.0]);
        let cats = nvec(&[5.0, 6.0]);
        let bites = nmat(2, &[1.0, 2.0, 3.0, 4.0]);
        let out =
            compose_poss_obj(&men, &dogs, &cats, &bites, &OwnershipMap::Identity).unwrap();
        assert_eq!(out.data(), &[23.0, 34.0]);
    }

    #[test]
    fn object_relative_clause_hand_example() {
        // game that boys like: game ⊙ (boysᵀ × like)
        let game = nvec(&[1.0, 1.0]);
        let like = nmat(2, &[2.0, 0.0, 0.0, 3.0]);
        let boys = nvec(&[1.0, 0.0]);
        let out = compose_obj_rel(&game, &boys, &like).unwrap();
        assert_eq!(out.data(), &[2.0, 0.0]);
    }

    #[test]
    fn subject_relative_basis_cases() {
        let e1 = nvec(&[1.0, 0.0]);
        let e2 = nvec(&[0.0, 1.0]);
        let id = nmat(2, &[1.0, 0.0, 0.0, 1.0]);
        let same = compose_subj_rel(&e1, &id, &e1).unwrap();
        assert_eq!(same.data(), &[1.0, 0.0]);
        let disjoint = compose_subj_rel(&e1, &id, &e2).unwrap();
        assert_eq!(disjoint.data(), &[0.0, 0.0]);
    }

    #[test]
    fn cube_collapse_matches_pre_collapsed_matrix() {
        let n = Space::noun(2);
        let s = Space::sentence(3);
        let cube = Tensor::from_fn(vec![n.clone(), s, n.clone()], |idx| {
            (idx[0] * 9 + idx[1] * 3 + idx[2] + 1) as f64 * 0.5
        });
        let verb = Verb::cube(cube.clone()).unwrap();
        let collapsed = verb.collapsed();
        for i in 0..2 {
            for j in 0..2 {
                let want: f64 = (0..3).map(|s| cube.get(&[i, s, j])).sum();
                assert!((collapsed.get(&[i, j]) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn missing_role_is_reported() {
        let verb = nmat(2, &[1.0, 0.0, 0.0, 1.0]);
        let spec = ClauseSpec {
            pattern: ClausePattern::PossSubj,
            possessor: None,
            subject: Some(nvec(&[1.0, 0.0])),
            object: Some(nvec(&[1.0, 0.0])),
            verb,
        };
        assert!(compose_clause(&spec, &OwnershipMap::Identity).is_err());
    }

    #[test]
    fn svo_sentence_with_cube_and_matrix() {
        let n = Space::noun(2);
        let s = Space::sentence(2);
        let men = nvec(&[1.0, 2.0]);
        let cats = nvec(&[3.0, 4.0]);
        let cube = Tensor::from_fn(vec![n.clone(), s, n.clone()], |idx| {
            (idx[0] + 2 * idx[1] + 4 * idx[2]) as f64
        });
        let v = Verb::cube(cube.clone()).unwrap();
        let got = compose_svo(&men, &v, &cats).unwrap();
        let mut hand = vec![0.0; 2];
        for si in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    hand[si] += men.data()[i] * cube.get(&[i, si, j]) * cats.data()[j];
                }
            }
        }
        assert_eq!(got.data(), hand.as_slice());

        let m = nmat(2, &[1.0, 0.0, 0.0, 1.0]);
        let scalar = compose_svo(&men, &m, &cats).unwrap();
        assert_eq!(scalar.as_scalar().unwrap(), 11.0);
    }
}
