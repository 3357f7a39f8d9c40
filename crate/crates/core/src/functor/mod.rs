//! The structure-preserving map from pregroup types to tensor spaces,
//! and the clause semantics built on top of it.
//!
//! Atomic types go to registered spaces, juxtaposition to tensor
//! product, and both adjoints are forgotten (every space carries a fixed
//! basis, so a space is isomorphic to its dual). Grammatical reductions
//! become contractions; relative pronouns become spider fragments.

mod clause;
mod pronoun;

pub use clause::{
    compose_clause, compose_obj_rel, compose_poss_obj, compose_poss_subj, compose_subj_rel,
    compose_svo, ClausePattern, ClauseSpec, OwnershipMap, Verb,
};
pub use pronoun::{
    add_pronoun_fragment, clause_network, compose_clause_network, compose_lambek_whose,
    decomposition_network, materialize_pronoun, pronoun_network, verify_decomposition,
    DecompositionCheck, RestClause,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pregroup::PregroupType;
use crate::tensor::Space;

/// Maps base symbols of the grammar alphabet to spaces.
#[derive(Debug, Clone, Default)]
pub struct SpaceRegistry {
    spaces: BTreeMap<String, Space>,
}

impl SpaceRegistry {
    pub fn new() -> Self {
        SpaceRegistry::default()
    }

    /// The standard registry: `n` to the noun space, `s` to the sentence
    /// space.
    pub fn with_dims(dim_n: usize, dim_s: usize) -> Self {
        let mut r = SpaceRegistry::new();
        r.insert("n", Space::noun(dim_n));
        r.insert("s", Space::sentence(dim_s));
        r
    }

    pub fn insert(&mut self, base: impl Into<String>, space: Space) {
        self.spaces.insert(base.into(), space);
    }

    pub fn space_for(&self, base: &str) -> Result<&Space> {
        self.spaces
            .get(base)
            .ok_or_else(|| Error::UndeclaredName(format!("no space registered for base `{base}`")))
    }

    pub fn noun_space(&self) -> Result<&Space> {
        self.space_for("n")
    }

    pub fn sentence_space(&self) -> Result<&Space> {
        self.space_for("s")
    }
}

/// The tensor shape a word of type `ty` lives in: one leg per atom,
/// adjoints forgotten. The unit type yields the empty (scalar) shape.
pub fn interpret_type(ty: &PregroupType, registry: &SpaceRegistry) -> Result<Vec<Space>> {
    ty.atoms
        .iter()
        .map(|atom| registry.space_for(&atom.base).cloned())
        .collect()
}

/// Semantic classification a lexicon entry carries alongside its type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticTag {
    Vector,
    MatrixVerb,
    CubeVerb,
    RelSubj,
    RelObj,
    RelPossSubj,
    RelPossObj,
    HasPredicate,
}

impl SemanticTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SemanticTag::Vector => "vector",
            SemanticTag::MatrixVerb => "matrix-verb",
            SemanticTag::CubeVerb => "cube-verb",
            SemanticTag::RelSubj => "rel-subj",
            SemanticTag::RelObj => "rel-obj",
            SemanticTag::RelPossSubj => "rel-poss-subj",
            SemanticTag::RelPossObj => "rel-poss-obj",
            SemanticTag::HasPredicate => "has-predicate",
        }
    }

    pub fn is_pronoun(&self) -> bool {
        matches!(
            self,
            SemanticTag::RelSubj
                | SemanticTag::RelObj
                | SemanticTag::RelPossSubj
                | SemanticTag::RelPossObj
        )
    }
}

impl FromStr for SemanticTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector" => Ok(SemanticTag::Vector),
            "matrix-verb" => Ok(SemanticTag::MatrixVerb),
            "cube-verb" => Ok(SemanticTag::CubeVerb),
            "rel-subj" => Ok(SemanticTag::RelSubj),
            "rel-obj" => Ok(SemanticTag::RelObj),
            "rel-poss-subj" => Ok(SemanticTag::RelPossSubj),
            "rel-poss-obj" => Ok(SemanticTag::RelPossObj),
            "has-predicate" => Ok(SemanticTag::HasPredicate),
            other => Err(Error::UndeclaredName(format!("semantic tag `{other}`"))),
        }
    }
}

impl fmt::Display for SemanticTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pregroup::{parse_type, Alphabet};

    #[test]
    fn transitive_verb_type_maps_to_nsn() {
        let r = SpaceRegistry::with_dims(4, 2);
        let ty = parse_type("n^r s n^l", &Alphabet::default()).unwrap();
        let shape = interpret_type(&ty, &r).unwrap();
        assert_eq!(shape, vec![Space::noun(4), Space::sentence(2), Space::noun(4)]);
    }

    #[test]
    fn unit_type_maps_to_scalar_shape() {
        let r = SpaceRegistry::with_dims(4, 2);
        let shape = interpret_type(&PregroupType::unit(), &r).unwrap();
        assert!(shape.is_empty());
    }

    #[test]
    fn possessive_pronoun_type_maps_to_five_legs() {
        let r = SpaceRegistry::with_dims(3, 2);
        let ty = parse_type("n^r n s^l n n^l", &Alphabet::default()).unwrap();
        let shape = interpret_type(&ty, &r).unwrap();
        let names: Vec<&str> = shape.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["N", "N", "S", "N", "N"]);
    }

    #[test]
    fn unregistered_base_is_an_error() {
        let r = SpaceRegistry::with_dims(3, 2);
        let ty = PregroupType::new(vec![crate::pregroup::AtomicType::new("q", 0)]);
        assert!(interpret_type(&ty, &r).is_err());
    }

    #[test]
    fn tags_round_trip() {
        for tag in [
            "vector",
            "matrix-verb",
            "cube-verb",
            "rel-subj",
            "rel-obj",
            "rel-poss-subj",
            "rel-poss-obj",
            "has-predicate",
        ] {
            let parsed: SemanticTag = tag.parse().unwrap();
            assert_eq!(parsed.as_str(), tag);
        }
        assert!("adverb".parse::<SemanticTag>().is_err());
    }
}
