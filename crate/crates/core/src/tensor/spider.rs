//! Spiders: generalized-diagonal tensors.
//!
//! Every connected composite of the Frobenius maps on one space is
//! determined by its open leg counts alone, so the whole family
//! (epsilon, eta, delta, mu, iota, zeta, identity) is represented by a
//! single `Spider { space, inputs, outputs }`. Materialized, a spider is
//! the tensor with a 1 wherever all indices coincide.

use super::{advance, Space, Tensor};
use crate::error::{Error, Result};

/// Refuse to materialize tensors above this many entries unless the
/// caller raises the budget explicitly.
pub const DEFAULT_SPIDER_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spider {
    pub space: Space,
    pub inputs: usize,
    pub outputs: usize,
}

impl Spider {
    pub fn new(space: Space, inputs: usize, outputs: usize) -> Self {
        assert!(inputs + outputs >= 1, "spider needs at least one leg");
        Spider {
            space,
            inputs,
            outputs,
        }
    }

    /// Copy map Δ: one input, two outputs.
    pub fn delta(space: Space) -> Self {
        Spider::new(space, 1, 2)
    }

    /// Merge map μ: two inputs, one output.
    pub fn mu(space: Space) -> Self {
        Spider::new(space, 2, 1)
    }

    /// Discard ι: one input, no output.
    pub fn iota(space: Space) -> Self {
        Spider::new(space, 1, 0)
    }

    /// Merge unit ζ: no input, one output.
    pub fn zeta(space: Space) -> Self {
        Spider::new(space, 0, 1)
    }

    /// Cup ε: two inputs.
    pub fn cup(space: Space) -> Self {
        Spider::new(space, 2, 0)
    }

    /// Cap η: two outputs.
    pub fn cap(space: Space) -> Self {
        Spider::new(space, 0, 2)
    }

    pub fn identity(space: Space) -> Self {
        Spider::new(space, 1, 1)
    }

    /// Total number of legs; in a contraction network the input legs come
    /// first, then the outputs.
    pub fn legs(&self) -> usize {
        self.inputs + self.outputs
    }

    fn entries(&self) -> u128 {
        (self.space.dim as u128).pow(self.legs() as u32)
    }

    pub fn materialize(&self) -> Result<Tensor> {
        self.materialize_with_budget(DEFAULT_SPIDER_BUDGET)
    }

    /// Dense form: entry 1 iff all indices are equal.
    pub fn materialize_with_budget(&self, budget: usize) -> Result<Tensor> {
        let entries = self.entries();
        if entries > budget as u128 {
            return Err(Error::BudgetExceeded { entries, budget });
        }
        let shape = vec![self.space.clone(); self.legs()];
        let dims: Vec<usize> = shape.iter().map(|s| s.dim).collect();
        let mut t = Tensor::zeros(shape);
        let mut idx = vec![0usize; dims.len()];
        for off in 0..t.len() {
            if idx.iter().all(|&i| i == idx[0]) {
                t.data_mut()[off] = 1.0;
            }
            advance(&mut idx, &dims);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_spider_is_the_pointwise_merge_tensor() {
        let t = Spider::mu(Space::noun(2)).materialize().unwrap();
        assert_eq!(t.dims(), vec![2, 2, 2]);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let want = if i == j && j == k { 1.0 } else { 0.0 };
                    assert_eq!(t.get(&[i, j, k]), want);
                }
            }
        }
    }

    #[test]
    fn two_output_spider_is_the_identity_matrix() {
        let t = Spider::cap(Space::noun(2)).materialize().unwrap();
        assert_eq!(t, Tensor::identity(Space::noun(2)));
    }

    #[test]
    fn unary_spider_is_identity_any_dim() {
        for d in 1..=5 {
            let t = Spider::identity(Space::noun(d)).materialize().unwrap();
            assert_eq!(t, Tensor::identity(Space::noun(d)));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = Spider::new(Space::noun(300), 2, 3);
        assert!(matches!(
            s.materialize(),
            Err(Error::BudgetExceeded { .. })
        ));
        // raising the budget admits small spiders
        assert!(Spider::new(Space::noun(4), 2, 3)
            .materialize_with_budget(2000)
            .is_ok());
    }
}
