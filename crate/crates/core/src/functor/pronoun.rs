//! Relative pronouns as contraction-network fragments.
//!
//! A pronoun is never stored as a tensor. Its meaning is a small wiring
//! of caps, merge/copy spiders, a sentence-space unit and (for the
//! possessive forms) the ownership matrix. Materializing the fragment is
//! possible at small dimensions for testing, but at corpus scale the
//! fragment stays symbolic and the closed-form composers in
//! [`super::clause`] are used instead; the tests in this crate check the
//! two routes agree.
//!
//! Port order follows the pregroup types:
//!
//! - subject pronoun `n^r n s^l n` — head-in, out, sentence, verb-subject;
//! - object pronoun `n^r n n^ll s^l` — head-in, out, verb-object, sentence;
//! - possessive subject `n^r n s^l n n^l` — possessor-in, out, sentence,
//!   verb-subject, possessed-subject;
//! - possessive object `n^r n n^ll s^l n^l` — possessor-in, out,
//!   verb-object, sentence, possessed-object.

use super::clause::{compose_clause, ClausePattern, ClauseSpec, OwnershipMap, Verb};
use super::SemanticTag;
use crate::error::{Error, Result};
use crate::tensor::{ContractionNetwork, PortRef, Space, Spider, Tensor};

/// Append the wiring for a relative pronoun to `net`. Returns the open
/// ports of the fragment in the order of the pronoun's pregroup type.
pub fn add_pronoun_fragment(
    net: &mut ContractionNetwork,
    tag: SemanticTag,
    ownership: &OwnershipMap,
    noun: &Space,
    sentence: &Space,
) -> Result<Vec<PortRef>> {
    match tag {
        SemanticTag::RelSubj | SemanticTag::RelObj => {
            let eta1 = net.add_spider(Spider::cap(noun.clone()));
            let eta2 = net.add_spider(Spider::cap(noun.clone()));
            let mu = net.add_spider(Spider::mu(noun.clone()));
            let zeta = net.add_spider(Spider::zeta(sentence.clone()));
            net.connect(PortRef::new(eta1, 1), PortRef::new(mu, 0));
            net.connect(PortRef::new(eta2, 0), PortRef::new(mu, 1));
            let head_in = PortRef::new(eta1, 0);
            let out = PortRef::new(mu, 2);
            let verb_leg = PortRef::new(eta2, 1);
            let sentence_leg = PortRef::new(zeta, 0);
            Ok(match tag {
                SemanticTag::RelSubj => vec![head_in, out, sentence_leg, verb_leg],
                _ => vec![head_in, out, verb_leg, sentence_leg],
            })
        }
        SemanticTag::RelPossSubj | SemanticTag::RelPossObj => {
            let eta1 = net.add_spider(Spider::cap(noun.clone()));
            let eta2 = net.add_spider(Spider::cap(noun.clone()));
            let eta3 = net.add_spider(Spider::cap(noun.clone()));
            let mu = net.add_spider(Spider::mu(noun.clone()));
            let eps = net.add_spider(Spider::cup(noun.clone()));
            let delta = net.add_spider(Spider::delta(noun.clone()));
            let zeta = net.add_spider(Spider::zeta(sentence.clone()));
            let own = net.add_tensor(ownership.matrix(noun));
            net.connect(PortRef::new(eta1, 1), PortRef::new(mu, 0));
            net.connect(PortRef::new(eta2, 0), PortRef::new(own, 1));
            net.connect(PortRef::new(own, 0), PortRef::new(mu, 1));
            net.connect(PortRef::new(eta2, 1), PortRef::new(eps, 0));
            net.connect(PortRef::new(eta3, 0), PortRef::new(eps, 1));
            net.connect(PortRef::new(eta3, 1), PortRef::new(delta, 0));
            let possessor_in = PortRef::new(eta1, 0);
            let out = PortRef::new(mu, 2);
            let sentence_leg = PortRef::new(zeta, 0);
            let verb_leg = PortRef::new(delta, 1);
            let possessed_leg = PortRef::new(delta, 2);
            Ok(match tag {
                SemanticTag::RelPossSubj => {
                    vec![possessor_in, out, sentence_leg, verb_leg, possessed_leg]
                }
                _ => vec![possessor_in, out, verb_leg, sentence_leg, possessed_leg],
            })
        }
        other => Err(Error::UndeclaredName(format!(
            "`{other}` is not a relative-pronoun tag"
        ))),
    }
}

/// A standalone network whose outputs are the pronoun's ports, for
/// inspection and materialization.
pub fn pronoun_network(
    tag: SemanticTag,
    ownership: &OwnershipMap,
    noun: &Space,
    sentence: &Space,
) -> Result<ContractionNetwork> {
    let mut net = ContractionNetwork::new();
    let ports = add_pronoun_fragment(&mut net, tag, ownership, noun, sentence)?;
    net.set_outputs(ports);
    Ok(net)
}

/// Materialize a pronoun fragment as a dense tensor. Refuses when the
/// result would exceed `budget` entries; meant for small dimensions.
pub fn materialize_pronoun(
    tag: SemanticTag,
    ownership: &OwnershipMap,
    noun: &Space,
    sentence: &Space,
    budget: usize,
) -> Result<Tensor> {
    pronoun_network(tag, ownership, noun, sentence)?
        .with_budget(budget)
        .contract()
}

fn pronoun_tag_for(pattern: ClausePattern) -> SemanticTag {
    match pattern {
        ClausePattern::SubjRel => SemanticTag::RelSubj,
        ClausePattern::ObjRel => SemanticTag::RelObj,
        ClausePattern::PossSubj => SemanticTag::RelPossSubj,
        ClausePattern::PossObj => SemanticTag::RelPossObj,
    }
}

/// A cube with the same collapsed matrix: matrices are lifted onto a
/// one-dimensional sentence space so the full diagram (which wires the
/// pronoun's sentence leg to the verb) applies uniformly.
fn cube_form(verb: &Verb) -> Tensor {
    match verb {
        Verb::Cube(t) => t.clone(),
        Verb::Matrix(m) => {
            let n = m.shape()[0].clone();
            let s = Space::sentence(1);
            let d = n.dim;
            let mut t = Tensor::zeros(vec![n.clone(), s, n]);
            for i in 0..d {
                for j in 0..d {
                    t.set(&[i, 0, j], m.get(&[i, j]));
                }
            }
            t
        }
    }
}

/// The full, unyanked diagram of a clause: word tensors wired against
/// the pronoun fragment exactly as the grammatical reduction links them.
/// The single output is the clause meaning in the noun space.
pub fn clause_network(spec: &ClauseSpec, ownership: &OwnershipMap) -> Result<ContractionNetwork> {
    let cube = cube_form(&spec.verb);
    let noun = cube.shape()[0].clone();
    let sentence = cube.shape()[1].clone();
    let mut net = ContractionNetwork::new();
    let ports = add_pronoun_fragment(
        &mut net,
        pronoun_tag_for(spec.pattern),
        ownership,
        &noun,
        &sentence,
    )?;
    let verb = net.add_tensor(cube);
    match spec.pattern {
        ClausePattern::SubjRel => {
            let head = net.add_tensor(spec.role("subject")?.clone());
            let obj = net.add_tensor(spec.role("object")?.clone());
            net.connect(PortRef::new(head, 0), ports[0]);
            net.connect(ports[2], PortRef::new(verb, 1));
            net.connect(ports[3], PortRef::new(verb, 0));
            net.connect(PortRef::new(verb, 2), PortRef::new(obj, 0));
        }
        ClausePattern::ObjRel => {
            let head = net.add_tensor(spec.role("object")?.clone());
            let sbj = net.add_tensor(spec.role("subject")?.clone());
            net.connect(PortRef::new(head, 0), ports[0]);
            net.connect(ports[2], PortRef::new(verb, 2));
            net.connect(ports[3], PortRef::new(verb, 1));
            net.connect(PortRef::new(sbj, 0), PortRef::new(verb, 0));
        }
        ClausePattern::PossSubj => {
            let poss = net.add_tensor(spec.role("possessor")?.clone());
            let sbj = net.add_tensor(spec.role("subject")?.clone());
            let obj = net.add_tensor(spec.role("object")?.clone());
            net.connect(PortRef::new(poss, 0), ports[0]);
            net.connect(ports[2], PortRef::new(verb, 1));
            net.connect(ports[3], PortRef::new(verb, 0));
            net.connect(ports[4], PortRef::new(sbj, 0));
            net.connect(PortRef::new(verb, 2), PortRef::new(obj, 0));
        }
        ClausePattern::PossObj => {
            let poss = net.add_tensor(spec.role("possessor")?.clone());
            let sbj = net.add_tensor(spec.role("subject")?.clone());
            let obj = net.add_tensor(spec.role("object")?.clone());
            net.connect(PortRef::new(poss, 0), ports[0]);
            net.connect(ports[2], PortRef::new(verb, 2));
            net.connect(ports[3], PortRef::new(verb, 1));
            net.connect(ports[4], PortRef::new(obj, 0));
            net.connect(PortRef::new(sbj, 0), PortRef::new(verb, 0));
        }
    }
    net.set_outputs(vec![ports[1]]);
    Ok(net)
}

/// Contract the full clause diagram; agrees with
/// [`compose_clause`](super::compose_clause) up to floating point.
pub fn compose_clause_network(spec: &ClauseSpec, ownership: &OwnershipMap) -> Result<Tensor> {
    clause_network(spec, ownership)?.contract()
}

/// The pronoun-free paraphrase of a possessive clause, as one network:
/// `Possessor that has Subject that Verb Object` for the subject form,
/// `Possessor that has Object that Subject Verb` for the object form.
/// The `has` predicate sits where an ordinary transitive verb would and
/// its object slot receives the whole inner clause.
pub fn decomposition_network(spec: &ClauseSpec, has: &Verb) -> Result<ContractionNetwork> {
    if !spec.pattern.is_possessive() {
        return Err(Error::UndeclaredName(format!(
            "decomposition applies to possessive clauses, not {}",
            spec.pattern
        )));
    }
    let has_cube = cube_form(has);
    let verb_cube = cube_form(&spec.verb);
    if has_cube.shape()[0] != verb_cube.shape()[0] {
        return Err(Error::SpaceMismatch {
            expected: verb_cube.shape()[0].to_string(),
            got: has_cube.shape()[0].to_string(),
        });
    }
    let noun = verb_cube.shape()[0].clone();
    let has_sentence = has_cube.shape()[1].clone();
    let verb_sentence = verb_cube.shape()[1].clone();

    let mut net = ContractionNetwork::new();
    // outer clause: Possessor that has <inner>
    let outer = add_pronoun_fragment(
        &mut net,
        SemanticTag::RelSubj,
        &OwnershipMap::Identity,
        &noun,
        &has_sentence,
    )?;
    // inner clause: Subject that Verb Object / Object that Subject Verb
    let inner_tag = match spec.pattern {
        ClausePattern::PossSubj => SemanticTag::RelSubj,
        _ => SemanticTag::RelObj,
    };
    let inner = add_pronoun_fragment(
        &mut net,
        inner_tag,
        &OwnershipMap::Identity,
        &noun,
        &verb_sentence,
    )?;
    let has_node = net.add_tensor(has_cube);
    let verb_node = net.add_tensor(verb_cube);
    let poss = net.add_tensor(spec.role("possessor")?.clone());
    let sbj = net.add_tensor(spec.role("subject")?.clone());
    let obj = net.add_tensor(spec.role("object")?.clone());

    net.connect(PortRef::new(poss, 0), outer[0]);
    net.connect(outer[2], PortRef::new(has_node, 1));
    net.connect(outer[3], PortRef::new(has_node, 0));
    net.connect(PortRef::new(has_node, 2), inner[1]);

    match spec.pattern {
        ClausePattern::PossSubj => {
            net.connect(PortRef::new(sbj, 0), inner[0]);
            net.connect(inner[2], PortRef::new(verb_node, 1));
            net.connect(inner[3], PortRef::new(verb_node, 0));
            net.connect(PortRef::new(verb_node, 2), PortRef::new(obj, 0));
        }
        _ => {
            net.connect(PortRef::new(obj, 0), inner[0]);
            net.connect(inner[2], PortRef::new(verb_node, 2));
            net.connect(inner[3], PortRef::new(verb_node, 1));
            net.connect(PortRef::new(sbj, 0), PortRef::new(verb_node, 0));
        }
    }
    net.set_outputs(vec![outer[1]]);
    Ok(net)
}

/// Result of comparing a possessive clause against its pronoun-free
/// paraphrase.
#[derive(Debug, Clone)]
pub struct DecompositionCheck {
    /// Contraction of the `that ... has ... that ...` network.
    pub network_value: Tensor,
    /// The closed-form composer with `'s` taken to be the collapsed
    /// `has` predicate.
    pub composer_value: Tensor,
    pub max_abs_diff: f64,
}

/// Evaluate both routes for a possessive clause: the decomposed network
/// and the normal-form composer with `'s := has` (sentence leg
/// discarded). The two must agree for the decomposition to be sound.
pub fn verify_decomposition(spec: &ClauseSpec, has: &Verb) -> Result<DecompositionCheck> {
    let network_value = decomposition_network(spec, has)?.contract()?;
    let ownership = OwnershipMap::learned(has.collapsed())?;
    let composer_value = compose_clause(spec, &ownership)?;
    let max_abs_diff = network_value.max_abs_diff(&composer_value)?;
    Ok(DecompositionCheck {
        network_value,
        composer_value,
        max_abs_diff,
    })
}

/// The remainder of a possessive clause once the possessor and the
/// possessed noun are fixed.
#[derive(Debug, Clone)]
pub enum RestClause {
    /// `... whose <possessed> Verb Object`.
    SubjectGap { verb: Verb, object: Tensor },
    /// `... whose <possessed> Subject Verb`.
    ObjectGap { subject: Tensor, verb: Verb },
}

/// Compose a possessive clause through the composite type of
/// `whose <possessed noun>`.
///
/// The possessed noun is contracted into the possessive-pronoun fragment
/// first, leaving a four-port tensor with the same type as a plain
/// subject/object relative pronoun; the clause is then evaluated as an
/// ordinary relative clause around that composite. Must agree with the
/// direct composers.
pub fn compose_lambek_whose(
    head_possessor: &Tensor,
    possessed: &Tensor,
    rest: &RestClause,
    ownership: &OwnershipMap,
) -> Result<Tensor> {
    let (verb, tag) = match rest {
        RestClause::SubjectGap { verb, .. } => (verb, SemanticTag::RelPossSubj),
        RestClause::ObjectGap { verb, .. } => (verb, SemanticTag::RelPossObj),
    };
    let cube = cube_form(verb);
    let noun = cube.shape()[0].clone();
    let sentence = cube.shape()[1].clone();

    // composite pronoun: whose + possessed, a four-leg tensor
    let mut frag = ContractionNetwork::new();
    let ports = add_pronoun_fragment(&mut frag, tag, ownership, &noun, &sentence)?;
    let possessed_node = frag.add_tensor(possessed.clone());
    net_connect_last(&mut frag, ports[4], possessed_node);
    frag.set_outputs(vec![ports[0], ports[1], ports[2], ports[3]]);
    let composite = frag.contract()?;

    // the composite now plays the part of `that`
    let mut net = ContractionNetwork::new();
    let c = net.add_tensor(composite);
    let v = net.add_tensor(cube);
    let head = net.add_tensor(head_possessor.clone());
    net.connect(PortRef::new(head, 0), PortRef::new(c, 0));
    match rest {
        RestClause::SubjectGap { object, .. } => {
            let obj = net.add_tensor(object.clone());
            net.connect(PortRef::new(c, 2), PortRef::new(v, 1));
            net.connect(PortRef::new(c, 3), PortRef::new(v, 0));
            net.connect(PortRef::new(v, 2), PortRef::new(obj, 0));
        }
        RestClause::ObjectGap { subject, .. } => {
            let sbj = net.add_tensor(subject.clone());
            net.connect(PortRef::new(c, 2), PortRef::new(v, 2));
            net.connect(PortRef::new(c, 3), PortRef::new(v, 1));
            net.connect(PortRef::new(sbj, 0), PortRef::new(v, 0));
        }
    }
    net.set_outputs(vec![PortRef::new(c, 1)]);
    net.contract()
}

fn net_connect_last(net: &mut ContractionNetwork, port: PortRef, node: usize) {
    net.connect(port, PortRef::new(node, 0));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DEFAULT_SPIDER_BUDGET;

    fn nvec(data: &[f64]) -> Tensor {
        Tensor::vector(Space::noun(data.len()), data.to_vec()).unwrap()
    }

    #[test]
    fn subject_pronoun_materializes_to_shared_index_tensor() {
        let n = Space::noun(2);
        let s = Space::sentence(2);
        let t = materialize_pronoun(
            SemanticTag::RelSubj,
            &OwnershipMap::Identity,
            &n,
            &s,
            DEFAULT_SPIDER_BUDGET,
        )
        .unwrap();
        assert_eq!(t.dims(), vec![2, 2, 2, 2]);
        for a in 0..2 {
            for b in 0..2 {
                for si in 0..2 {
                    for k in 0..2 {
                        let want = if a == b && b == k { 1.0 } else { 0.0 };
                        assert_eq!(t.get(&[a, b, si, k]), want);
                    }
                }
            }
        }
    }

    #[test]
    fn possessive_pronoun_with_identity_ownership() {
        let n = Space::noun(2);
        let s = Space::sentence(2);
        let t = materialize_pronoun(
            SemanticTag::RelPossSubj,
            &OwnershipMap::Identity,
            &n,
            &s,
            DEFAULT_SPIDER_BUDGET,
        )
        .unwrap();
        assert_eq!(t.dims(), vec![2, 2, 2, 2, 2]);
        for a in 0..2 {
            for b in 0..2 {
                for si in 0..2 {
                    for k in 0..2 {
                        for m in 0..2 {
                            let want = if a == b && b == k && k == m { 1.0 } else { 0.0 };
                            assert_eq!(t.get(&[a, b, si, k, m]), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn possessive_pronoun_routes_through_ownership_matrix() {
        let n = Space::noun(2);
        let s = Space::sentence(1);
        let m =
            Tensor::matrix(n.clone(), n.clone(), vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let own = OwnershipMap::learned(m.clone()).unwrap();
        let t = materialize_pronoun(
            SemanticTag::RelPossObj,
            &own,
            &n,
            &s,
            DEFAULT_SPIDER_BUDGET,
        )
        .unwrap();
        // ports: possessor-in, out, verb-object, sentence, possessed
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    for mm in 0..2 {
                        let want = if a == b && k == mm { m.get(&[a, k]) } else { 0.0 };
                        assert_eq!(t.get(&[a, b, k, 0, mm]), want);
                    }
                }
            }
        }
    }

    #[test]
    fn materialization_respects_budget() {
        let n = Space::noun(40);
        let s = Space::sentence(40);
        let out = materialize_pronoun(
            SemanticTag::RelPossSubj,
            &OwnershipMap::Identity,
            &n,
            &s,
            DEFAULT_SPIDER_BUDGET,
        );
        assert!(matches!(out, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn non_pronoun_tag_is_rejected() {
        let mut net = ContractionNetwork::new();
        let got = add_pronoun_fragment(
            &mut net,
            SemanticTag::Vector,
            &OwnershipMap::Identity,
            &Space::noun(2),
            &Space::sentence(1),
        );
        assert!(got.is_err());
    }

    #[test]
    fn clause_network_matches_composer_on_a_small_case() {
        let poss = nvec(&[1.0, 2.0]);
        let sbj = nvec(&[0.5, 1.5]);
        let obj = nvec(&[3.0, 4.0]);
        let verb = Verb::matrix(
            Tensor::matrix(Space::noun(2), Space::noun(2), vec![1.0, 0.5, 0.25, 2.0]).unwrap(),
        )
        .unwrap();
        let spec = ClauseSpec::poss_subj(poss.clone(), sbj.clone(), verb.clone(), obj.clone());
        let by_net = compose_clause_network(&spec, &OwnershipMap::Identity).unwrap();
        let by_formula =
            compose_clause(&spec, &OwnershipMap::Identity).unwrap();
        assert!(by_net.max_abs_diff(&by_formula).unwrap() <= 1e-12);
    }

    #[test]
    fn decomposition_matches_composer_with_identity_has() {
        let poss = nvec(&[1.0, 2.0]);
        let sbj = nvec(&[0.5, 1.5]);
        let obj = nvec(&[3.0, 4.0]);
        let verb = Verb::matrix(
            Tensor::matrix(Space::noun(2), Space::noun(2), vec![1.0, 0.5, 0.25, 2.0]).unwrap(),
        )
        .unwrap();
        let has = Verb::matrix(Tensor::identity(Space::noun(2))).unwrap();
        let spec = ClauseSpec::poss_subj(poss, sbj, verb, obj);
        let check = verify_decomposition(&spec, &has).unwrap();
        assert!(check.max_abs_diff <= 1e-12);
        // identity has means 's = Id
        let direct = compose_clause(&spec, &OwnershipMap::Identity).unwrap();
        assert!(check.network_value.max_abs_diff(&direct).unwrap() <= 1e-12);
    }

    #[test]
    fn lambek_composite_agrees_with_composer() {
        let head = nvec(&[1.0, 3.0]);
        let possessed = nvec(&[2.0, 0.5]);
        let obj = nvec(&[1.0, 4.0]);
        let verb = Verb::matrix(
            Tensor::matrix(Space::noun(2), Space::noun(2), vec![0.5, 1.0, 2.0, 0.25]).unwrap(),
        )
        .unwrap();
        let own = OwnershipMap::learned(
            Tensor::matrix(Space::noun(2), Space::noun(2), vec![1.0, 2.0, 0.5, 0.0]).unwrap(),
        )
        .unwrap();
        let got = compose_lambek_whose(
            &head,
            &possessed,
            &RestClause::SubjectGap {
                verb: verb.clone(),
                object: obj.clone(),
            },
            &own,
        )
        .unwrap();
        let want = super::super::compose_poss_subj(&head, &possessed, &verb, &obj, &own).unwrap();
        assert!(got.max_abs_diff(&want).unwrap() <= 1e-12);
    }
}
