//! Contraction networks: tensors and spiders wired port-to-port, with
//! lazy evaluation.
//!
//! Evaluation first fuses connected spider clusters (a connected cluster
//! on one space is determined by its boundary legs; a fully closed
//! cluster contributes a factor of the space dimension), then
//! materializes the few surviving spiders and contracts edges pairwise.
//! The edge order is deterministic by default so results are
//! reproducible bit for bit; a seeded order is available for checking
//! order independence.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{advance, Space, Spider, Tensor, DEFAULT_SPIDER_BUDGET};
use crate::error::{Error, Result};

/// A leg of a node in a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortRef {
    pub node: usize,
    pub leg: usize,
}

impl PortRef {
    pub fn new(node: usize, leg: usize) -> Self {
        PortRef { node, leg }
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Tensor(Tensor),
    Spider(Spider),
}

impl Node {
    fn legs(&self) -> usize {
        match self {
            Node::Tensor(t) => t.rank(),
            Node::Spider(s) => s.legs(),
        }
    }

    fn space_of(&self, leg: usize) -> &Space {
        match self {
            Node::Tensor(t) => &t.shape()[leg],
            Node::Spider(s) => &s.space,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ContractionNetwork {
    nodes: Vec<Node>,
    edges: Vec<(PortRef, PortRef)>,
    outputs: Vec<PortRef>,
    budget: usize,
}

impl ContractionNetwork {
    pub fn new() -> Self {
        ContractionNetwork {
            nodes: Vec::new(),
            edges: Vec::new(),
            outputs: Vec::new(),
            budget: DEFAULT_SPIDER_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn add_tensor(&mut self, t: Tensor) -> usize {
        self.nodes.push(Node::Tensor(t));
        self.nodes.len() - 1
    }

    pub fn add_spider(&mut self, s: Spider) -> usize {
        self.nodes.push(Node::Spider(s));
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, a: PortRef, b: PortRef) {
        self.edges.push((a, b));
    }

    /// Declare the open ports, in the leg order the result should have.
    pub fn set_outputs(&mut self, outputs: Vec<PortRef>) {
        self.outputs = outputs;
    }

    /// Set the outputs to all unmatched ports in `(node, leg)` order.
    pub fn auto_outputs(&mut self) {
        let mut used: Vec<PortRef> = Vec::new();
        for (a, b) in &self.edges {
            used.push(*a);
            used.push(*b);
        }
        let mut outs = Vec::new();
        for (n, node) in self.nodes.iter().enumerate() {
            for leg in 0..node.legs() {
                let p = PortRef::new(n, leg);
                if !used.contains(&p) {
                    outs.push(p);
                }
            }
        }
        self.outputs = outs;
    }

    pub fn outputs(&self) -> &[PortRef] {
        &self.outputs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn port_space(&self, p: PortRef) -> Result<&Space> {
        let node = self
            .nodes
            .get(p.node)
            .ok_or_else(|| Error::InvalidNetwork(format!("port references node {}", p.node)))?;
        if p.leg >= node.legs() {
            return Err(Error::InvalidNetwork(format!(
                "port references leg {} of node {} which has {} legs",
                p.leg,
                p.node,
                node.legs()
            )));
        }
        Ok(node.space_of(p.leg))
    }

    /// Check the structural invariants: ports in range, each port in at
    /// most one edge, edge endpoints on the same space, and the declared
    /// outputs exactly the unmatched ports.
    pub fn validate(&self) -> Result<()> {
        let total_legs: usize = self.nodes.iter().map(Node::legs).sum();
        let mut seen = vec![0u8; total_legs];
        let flat = |p: PortRef| -> usize {
            self.nodes[..p.node].iter().map(Node::legs).sum::<usize>() + p.leg
        };
        for (a, b) in &self.edges {
            let sa = self.port_space(*a)?;
            let sb = self.port_space(*b)?;
            if sa != sb {
                return Err(Error::InvalidNetwork(format!(
                    "edge joins {} at ({},{}) to {} at ({},{})",
                    sa, a.node, a.leg, sb, b.node, b.leg
                )));
            }
            for p in [*a, *b] {
                let f = flat(p);
                if seen[f] != 0 {
                    return Err(Error::InvalidNetwork(format!(
                        "port ({},{}) used more than once",
                        p.node, p.leg
                    )));
                }
                seen[f] = 1;
            }
        }
        for p in &self.outputs {
            self.port_space(*p)?;
            let f = flat(*p);
            if seen[f] != 0 {
                return Err(Error::InvalidNetwork(format!(
                    "output port ({},{}) is matched or repeated",
                    p.node, p.leg
                )));
            }
            seen[f] = 2;
        }
        if seen.iter().any(|&c| c == 0) {
            return Err(Error::InvalidNetwork(
                "some ports are neither matched nor declared as outputs".into(),
            ));
        }
        Ok(())
    }

    /// Evaluate with the deterministic default edge order.
    pub fn contract(&self) -> Result<Tensor> {
        self.contract_impl(None)
    }

    /// Evaluate with a seeded shuffle of the edge order. Any seed must
    /// produce the same tensor as [`contract`](Self::contract) up to
    /// floating-point reassociation.
    pub fn contract_seeded(&self, seed: u64) -> Result<Tensor> {
        self.contract_impl(Some(seed))
    }

    fn contract_impl(&self, seed: Option<u64>) -> Result<Tensor> {
        self.validate()?;
        let (mut tensors, mut edges, mut outputs, factor) = self.fused_and_materialized()?;

        if let Some(seed) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            edges.shuffle(&mut rng);
        } else {
            edges.sort_unstable();
        }

        while let Some(&(a, b)) = edges.first() {
            if a.node == b.node {
                let node = a.node;
                let pairs: Vec<(usize, usize)> = edges
                    .iter()
                    .filter(|(x, y)| x.node == node && y.node == node)
                    .map(|(x, y)| (x.leg, y.leg))
                    .collect();
                let t = tensors[node].take().expect("live node");
                let traced = trace_pairs(&t, &pairs);
                check_finite(&traced)?;
                let new_node = tensors.len();
                tensors.push(Some(traced));
                let removed: Vec<usize> =
                    pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
                let remap = leg_remap(t.rank(), &removed);
                edges.retain(|(x, y)| !(x.node == node && y.node == node));
                rewrite_ports(&mut edges, &mut outputs, |p| {
                    if p.node == node {
                        PortRef::new(new_node, remap[p.leg])
                    } else {
                        p
                    }
                });
            } else {
                let (na, nb) = (a.node, b.node);
                let pairs: Vec<(usize, usize)> = edges
                    .iter()
                    .filter_map(|(x, y)| {
                        if x.node == na && y.node == nb {
                            Some((x.leg, y.leg))
                        } else if x.node == nb && y.node == na {
                            Some((y.leg, x.leg))
                        } else {
                            None
                        }
                    })
                    .collect();
                let ta = tensors[na].take().expect("live node");
                let tb = tensors[nb].take().expect("live node");
                let result_entries = (ta.len() / contracted_len(&ta, pairs.iter().map(|p| p.0)))
                    as u128
                    * (tb.len() / contracted_len(&tb, pairs.iter().map(|p| p.1))) as u128;
                if result_entries > self.budget as u128 {
                    return Err(Error::BudgetExceeded {
                        entries: result_entries,
                        budget: self.budget,
                    });
                }
                let result = contract_pair(&ta, &tb, &pairs);
                check_finite(&result)?;
                let new_node = tensors.len();
                tensors.push(Some(result));
                let removed_a: Vec<usize> = pairs.iter().map(|&(x, _)| x).collect();
                let removed_b: Vec<usize> = pairs.iter().map(|&(_, y)| y).collect();
                let remap_a = leg_remap(ta.rank(), &removed_a);
                let remap_b = leg_remap(tb.rank(), &removed_b);
                let a_free = ta.rank() - pairs.len();
                edges.retain(|(x, y)| {
                    !((x.node == na && y.node == nb) || (x.node == nb && y.node == na))
                });
                rewrite_ports(&mut edges, &mut outputs, |p| {
                    if p.node == na {
                        PortRef::new(new_node, remap_a[p.leg])
                    } else if p.node == nb {
                        PortRef::new(new_node, a_free + remap_b[p.leg])
                    } else {
                        p
                    }
                });
            }
        }

        // fold the remaining disconnected pieces into one tensor
        let live: Vec<usize> = (0..tensors.len()).filter(|&i| tensors[i].is_some()).collect();
        let mut result = Tensor::scalar(factor);
        for &i in &live {
            let t = tensors[i].take().expect("live node");
            let prior_rank = result.rank();
            let result_entries = result.len() as u128 * t.len() as u128;
            if result_entries > self.budget as u128 {
                return Err(Error::BudgetExceeded {
                    entries: result_entries,
                    budget: self.budget,
                });
            }
            result = outer_general(&result, &t);
            rewrite_ports(&mut edges, &mut outputs, |p| {
                if p.node == i {
                    PortRef::new(usize::MAX, prior_rank + p.leg)
                } else {
                    p
                }
            });
        }
        check_finite(&result)?;

        // order the legs as declared
        let perm: Vec<usize> = outputs.iter().map(|p| p.leg).collect();
        debug_assert_eq!(perm.len(), result.rank());
        Ok(result.permute(&perm))
    }

    /// Fuse connected spider clusters, materialize what remains, and
    /// return plain tensors plus the rewritten edges/outputs and the
    /// scalar factor contributed by closed clusters.
    #[allow(clippy::type_complexity)]
    fn fused_and_materialized(
        &self,
    ) -> Result<(Vec<Option<Tensor>>, Vec<(PortRef, PortRef)>, Vec<PortRef>, f64)> {
        let n = self.nodes.len();
        let is_spider = |i: usize| matches!(self.nodes[i], Node::Spider(_));

        // union-find over spider nodes
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for (a, b) in &self.edges {
            if is_spider(a.node) && is_spider(b.node) {
                let ra = find(&mut parent, a.node);
                let rb = find(&mut parent, b.node);
                parent[ra] = rb;
            }
        }

        // ports of spiders consumed by spider-spider edges are internal
        let mut internal: std::collections::HashSet<PortRef> = std::collections::HashSet::new();
        for (a, b) in &self.edges {
            if is_spider(a.node) && is_spider(b.node) {
                internal.insert(*a);
                internal.insert(*b);
            }
        }

        let mut tensors: Vec<Option<Tensor>> = Vec::new();
        let mut port_map: std::collections::HashMap<PortRef, PortRef> =
            std::collections::HashMap::new();
        let mut factor = 1.0;

        // tensors keep their legs
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Tensor(t) = node {
                let id = tensors.len();
                tensors.push(Some(t.clone()));
                for leg in 0..t.rank() {
                    port_map.insert(PortRef::new(i, leg), PortRef::new(id, leg));
                }
            }
        }

        // one materialized spider per cluster, over its boundary ports
        let mut cluster_boundary: std::collections::BTreeMap<usize, Vec<PortRef>> =
            std::collections::BTreeMap::new();
        for i in 0..n {
            if !is_spider(i) {
                continue;
            }
            let root = find(&mut parent, i);
            let entry = cluster_boundary.entry(root).or_default();
            for leg in 0..self.nodes[i].legs() {
                let p = PortRef::new(i, leg);
                if !internal.contains(&p) {
                    entry.push(p);
                }
            }
        }
        for (root, boundary) in cluster_boundary {
            let space = match &self.nodes[root] {
                Node::Spider(s) => s.space.clone(),
                Node::Tensor(_) => unreachable!("cluster root is a spider"),
            };
            if boundary.is_empty() {
                // fully closed cluster: a free loop worth dim
                factor *= space.dim as f64;
                continue;
            }
            let fused = Spider::new(space, 0, boundary.len());
            let t = fused.materialize_with_budget(self.budget)?;
            let id = tensors.len();
            tensors.push(Some(t));
            for (leg, p) in boundary.into_iter().enumerate() {
                port_map.insert(p, PortRef::new(id, leg));
            }
        }

        let edges: Vec<(PortRef, PortRef)> = self
            .edges
            .iter()
            .filter(|(a, b)| !(internal.contains(a) && internal.contains(b)))
            .map(|(a, b)| (port_map[a], port_map[b]))
            .collect();
        let outputs: Vec<PortRef> = self.outputs.iter().map(|p| port_map[p]).collect();
        Ok((tensors, edges, outputs, factor))
    }
}

/// Product of the dims a contraction will sum out of a tensor.
fn contracted_len(t: &Tensor, legs: impl Iterator<Item = usize>) -> usize {
    legs.map(|l| t.shape()[l].dim).product::<usize>().max(1)
}

fn check_finite(t: &Tensor) -> Result<()> {
    if t.data().iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("network contraction".into()))
    }
}

/// New leg index for each surviving leg after `removed` legs are dropped.
fn leg_remap(rank: usize, removed: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; rank];
    let mut next = 0;
    for leg in 0..rank {
        if !removed.contains(&leg) {
            map[leg] = next;
            next += 1;
        }
    }
    map
}

fn rewrite_ports(
    edges: &mut [(PortRef, PortRef)],
    outputs: &mut [PortRef],
    f: impl Fn(PortRef) -> PortRef,
) {
    for (a, b) in edges.iter_mut() {
        *a = f(*a);
        *b = f(*b);
    }
    for p in outputs.iter_mut() {
        *p = f(*p);
    }
}

/// Contract `a` and `b` along the given leg pairs. Result legs are the
/// free legs of `a` in order, then the free legs of `b`.
fn contract_pair(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> Tensor {
    let a_free: Vec<usize> = (0..a.rank()).filter(|l| !pairs.iter().any(|p| p.0 == *l)).collect();
    let b_free: Vec<usize> = (0..b.rank()).filter(|l| !pairs.iter().any(|p| p.1 == *l)).collect();
    let mut shape: Vec<Space> = a_free.iter().map(|&l| a.shape()[l].clone()).collect();
    shape.extend(b_free.iter().map(|&l| b.shape()[l].clone()));
    let out_dims: Vec<usize> = shape.iter().map(|s| s.dim).collect();
    let sum_dims: Vec<usize> = pairs.iter().map(|&(l, _)| a.shape()[l].dim).collect();

    let mut out = Tensor::zeros(shape);
    let mut out_idx = vec![0usize; out_dims.len()];
    let mut a_idx = vec![0usize; a.rank()];
    let mut b_idx = vec![0usize; b.rank()];
    for off in 0..out.len() {
        for (k, &l) in a_free.iter().enumerate() {
            a_idx[l] = out_idx[k];
        }
        for (k, &l) in b_free.iter().enumerate() {
            b_idx[l] = out_idx[a_free.len() + k];
        }
        let mut sum_idx = vec![0usize; pairs.len()];
        let mut acc = 0.0;
        let steps: usize = sum_dims.iter().product::<usize>().max(1);
        for _ in 0..steps {
            for (k, &(la, lb)) in pairs.iter().enumerate() {
                a_idx[la] = sum_idx[k];
                b_idx[lb] = sum_idx[k];
            }
            acc += a.get(&a_idx) * b.get(&b_idx);
            advance(&mut sum_idx, &sum_dims);
        }
        out.data_mut()[off] = acc;
        advance(&mut out_idx, &out_dims);
    }
    out
}

/// Trace out pairs of legs of a single tensor.
fn trace_pairs(t: &Tensor, pairs: &[(usize, usize)]) -> Tensor {
    let bound: Vec<usize> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    let free: Vec<usize> = (0..t.rank()).filter(|l| !bound.contains(l)).collect();
    let shape: Vec<Space> = free.iter().map(|&l| t.shape()[l].clone()).collect();
    let out_dims: Vec<usize> = shape.iter().map(|s| s.dim).collect();
    let sum_dims: Vec<usize> = pairs.iter().map(|&(l, _)| t.shape()[l].dim).collect();

    let mut out = Tensor::zeros(shape);
    let mut out_idx = vec![0usize; out_dims.len()];
    let mut t_idx = vec![0usize; t.rank()];
    for off in 0..out.len() {
        for (k, &l) in free.iter().enumerate() {
            t_idx[l] = out_idx[k];
        }
        let mut sum_idx = vec![0usize; pairs.len()];
        let mut acc = 0.0;
        let steps: usize = sum_dims.iter().product::<usize>().max(1);
        for _ in 0..steps {
            for (k, &(x, y)) in pairs.iter().enumerate() {
                t_idx[x] = sum_idx[k];
                t_idx[y] = sum_idx[k];
            }
            acc += t.get(&t_idx);
            advance(&mut sum_idx, &sum_dims);
        }
        out.data_mut()[off] = acc;
        advance(&mut out_idx, &out_dims);
    }
    out
}

/// Outer product for arbitrary ranks; legs of `a` first.
fn outer_general(a: &Tensor, b: &Tensor) -> Tensor {
    let mut shape = a.shape().to_vec();
    shape.extend(b.shape().iter().cloned());
    let mut data = Vec::with_capacity(a.len() * b.len());
    for x in a.data() {
        for y in b.data() {
            data.push(x * y);
        }
    }
    Tensor::new(shape, data).expect("outer product of finite tensors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{epsilon, Space};

    fn v(space: &Space, data: &[f64]) -> Tensor {
        Tensor::vector(space.clone(), data.to_vec()).unwrap()
    }

    #[test]
    fn single_cup_equals_inner_product() {
        let n = Space::noun(3);
        let a = v(&n, &[1.0, 2.0, 3.0]);
        let b = v(&n, &[4.0, 5.0, 6.0]);
        let expect = epsilon(&a, &b).unwrap();

        let mut net = ContractionNetwork::new();
        let ia = net.add_tensor(a);
        let ib = net.add_tensor(b);
        net.connect(PortRef::new(ia, 0), PortRef::new(ib, 0));
        net.set_outputs(vec![]);
        let got = net.contract().unwrap();
        assert_eq!(got.as_scalar().unwrap(), expect);
    }

    #[test]
    fn yanking_wire_contracts_to_identity() {
        for d in 1..=8 {
            let n = Space::noun(d);
            let mut net = ContractionNetwork::new();
            let cup = net.add_spider(Spider::cup(n.clone()));
            let cap = net.add_spider(Spider::cap(n.clone()));
            net.connect(PortRef::new(cup, 1), PortRef::new(cap, 0));
            net.set_outputs(vec![PortRef::new(cup, 0), PortRef::new(cap, 1)]);
            let got = net.contract().unwrap();
            let id = Tensor::identity(n);
            assert!(got.max_abs_diff(&id).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn closed_loop_counts_the_dimension() {
        let n = Space::noun(5);
        let mut net = ContractionNetwork::new();
        let cup = net.add_spider(Spider::cup(n.clone()));
        let cap = net.add_spider(Spider::cap(n));
        net.connect(PortRef::new(cup, 0), PortRef::new(cap, 0));
        net.connect(PortRef::new(cup, 1), PortRef::new(cap, 1));
        net.set_outputs(vec![]);
        let got = net.contract().unwrap();
        assert_eq!(got.as_scalar().unwrap(), 5.0);
    }

    #[test]
    fn validation_catches_space_mismatch_and_reuse() {
        let n = Space::noun(2);
        let s = Space::sentence(3);
        let mut net = ContractionNetwork::new();
        let a = net.add_tensor(Tensor::vector(n.clone(), vec![1.0, 2.0]).unwrap());
        let b = net.add_tensor(Tensor::vector(s, vec![1.0, 2.0, 3.0]).unwrap());
        net.connect(PortRef::new(a, 0), PortRef::new(b, 0));
        net.set_outputs(vec![]);
        assert!(matches!(net.contract(), Err(Error::InvalidNetwork(_))));

        let mut net2 = ContractionNetwork::new();
        let a = net2.add_tensor(Tensor::vector(n.clone(), vec![1.0, 2.0]).unwrap());
        let b = net2.add_tensor(Tensor::vector(n.clone(), vec![1.0, 2.0]).unwrap());
        let c = net2.add_tensor(Tensor::vector(n, vec![1.0, 2.0]).unwrap());
        net2.connect(PortRef::new(a, 0), PortRef::new(b, 0));
        net2.connect(PortRef::new(a, 0), PortRef::new(c, 0));
        net2.set_outputs(vec![]);
        assert!(matches!(net2.contract(), Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn transitive_sentence_matches_hand_loop() {
        // subject and object vectors against a verb cube
        let n = Space::noun(2);
        let s = Space::sentence(2);
        let men = v(&n, &[0.3, 0.9]);
        let cats = v(&n, &[0.7, 0.1]);
        let like = Tensor::from_fn(vec![n.clone(), s.clone(), n.clone()], |idx| {
            (idx[0] * 4 + idx[1] * 2 + idx[2]) as f64 / 7.0
        });

        let mut hand = vec![0.0; 2];
        for si in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    hand[si] += men.data()[i] * like.get(&[i, si, j]) * cats.data()[j];
                }
            }
        }

        let mut net = ContractionNetwork::new();
        let im = net.add_tensor(men);
        let il = net.add_tensor(like);
        let ic = net.add_tensor(cats);
        net.connect(PortRef::new(im, 0), PortRef::new(il, 0));
        net.connect(PortRef::new(il, 2), PortRef::new(ic, 0));
        net.set_outputs(vec![PortRef::new(il, 1)]);
        let got = net.contract().unwrap();
        let expect = Tensor::vector(s, hand).unwrap();
        assert!(got.max_abs_diff(&expect).unwrap() <= 1e-12);
    }

    #[test]
    fn output_order_permutes_result_legs() {
        let n = Space::noun(2);
        let s = Space::sentence(3);
        let t = Tensor::from_fn(vec![n.clone(), s.clone()], |idx| (idx[0] * 3 + idx[1]) as f64);
        let mut net = ContractionNetwork::new();
        let i = net.add_tensor(t.clone());
        net.set_outputs(vec![PortRef::new(i, 1), PortRef::new(i, 0)]);
        let got = net.contract().unwrap();
        assert_eq!(got, t.permute(&[1, 0]));
    }

    #[test]
    fn seeded_orders_agree_with_default() {
        let n = Space::noun(3);
        let m1 = Tensor::from_fn(vec![n.clone(), n.clone()], |i| (i[0] * 3 + i[1]) as f64 * 0.1);
        let m2 = Tensor::from_fn(vec![n.clone(), n.clone()], |i| (i[0] as f64 - i[1] as f64) * 0.4);
        let w = v(&n, &[0.2, 0.5, 0.8]);

        let mut net = ContractionNetwork::new();
        let a = net.add_tensor(m1);
        let b = net.add_tensor(m2);
        let c = net.add_tensor(w);
        let sp = net.add_spider(Spider::mu(n));
        net.connect(PortRef::new(a, 1), PortRef::new(b, 0));
        net.connect(PortRef::new(b, 1), PortRef::new(sp, 0));
        net.connect(PortRef::new(c, 0), PortRef::new(sp, 1));
        net.set_outputs(vec![PortRef::new(a, 0), PortRef::new(sp, 2)]);

        let base = net.contract().unwrap();
        for seed in [1u64, 7, 42] {
            let other = net.contract_seeded(seed).unwrap();
            assert!(base.max_abs_diff(&other).unwrap() <= 1e-10);
        }
    }
}
