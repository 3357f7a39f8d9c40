//! Dense real tensors over named finite-dimensional spaces, the
//! compact-closed and Frobenius structure maps, and a contraction-network
//! evaluator with spider fusion.

mod network;
mod ops;
mod spider;
mod store;

pub use network::{ContractionNetwork, Node, PortRef};
pub use ops::{
    cosine, epsilon, eta, frob_delta, frob_iota, frob_mu, frob_zeta, matvec, outer, vecmat,
};
pub use spider::{Spider, DEFAULT_SPIDER_BUDGET};
pub use store::{VectorStore, MATRICES_FILE, OWNERSHIP_LABEL, VECTORS_FILE};

use std::fmt;

use crate::error::{Error, Result};

/// A named real vector space with a fixed orthonormal basis.
///
/// Left and right duals are identified with the space itself, so a leg of
/// a tensor is described by its space alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    pub name: String,
    pub dim: usize,
}

impl Space {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        assert!(dim >= 1, "space dimension must be at least 1");
        Space {
            name: name.into(),
            dim,
        }
    }

    /// The conventional noun space `N`.
    pub fn noun(dim: usize) -> Self {
        Space::new("N", dim)
    }

    /// The conventional sentence space `S`.
    pub fn sentence(dim: usize) -> Self {
        Space::new("S", dim)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.dim)
    }
}

/// Dense row-major tensor. Rank 0 is a scalar, rank 1 a vector, rank 2 a
/// matrix; higher ranks appear in pronoun fragments and tests only.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<Space>,
    data: Vec<f64>,
}

impl Tensor {
    /// Build a tensor, checking length and finiteness.
    pub fn new(shape: Vec<Space>, data: Vec<f64>) -> Result<Self> {
        let want: usize = shape.iter().map(|s| s.dim).product();
        if data.len() != want {
            return Err(Error::DataLength {
                got: data.len(),
                want,
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("tensor construction".into()));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: Vec<Space>) -> Self {
        let len: usize = shape.iter().map(|s| s.dim).product();
        Tensor {
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Tensor {
            shape: Vec::new(),
            data: vec![value],
        }
    }

    pub fn vector(space: Space, data: Vec<f64>) -> Result<Self> {
        Tensor::new(vec![space], data)
    }

    /// Basis vector `e_i` of `space`.
    pub fn basis(space: Space, i: usize) -> Self {
        let mut data = vec![0.0; space.dim];
        data[i] = 1.0;
        Tensor {
            shape: vec![space],
            data,
        }
    }

    /// Row-major matrix on `rows ⊗ cols`.
    pub fn matrix(rows: Space, cols: Space, data: Vec<f64>) -> Result<Self> {
        Tensor::new(vec![rows, cols], data)
    }

    pub fn identity(space: Space) -> Self {
        let d = space.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            data[i * d + i] = 1.0;
        }
        Tensor {
            shape: vec![space.clone(), space],
            data,
        }
    }

    pub fn from_fn(shape: Vec<Space>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Tensor::zeros(shape);
        let dims = t.dims();
        let mut idx = vec![0usize; dims.len()];
        for off in 0..t.data.len() {
            t.data[off] = f(&idx);
            advance(&mut idx, &dims);
        }
        t
    }

    pub fn shape(&self) -> &[Space] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.shape.iter().map(|s| s.dim).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        for (i, s) in idx.iter().zip(&self.shape) {
            debug_assert!(*i < s.dim);
            off = off * s.dim + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    pub fn as_scalar(&self) -> Option<f64> {
        if self.shape.is_empty() {
            Some(self.data[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: f64) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "add: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest absolute entry difference; errors on shape mismatch.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(format!(
                "max_abs_diff: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Reorder legs by `perm`: leg `k` of the result is leg `perm[k]` of
    /// `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank());
        let shape: Vec<Space> = perm.iter().map(|&p| self.shape[p].clone()).collect();
        let dims_out: Vec<usize> = shape.iter().map(|s| s.dim).collect();
        let mut out = Tensor::zeros(shape);
        let mut idx_out = vec![0usize; perm.len()];
        let mut idx_in = vec![0usize; perm.len()];
        for off in 0..out.data.len() {
            for (k, &p) in perm.iter().enumerate() {
                idx_in[p] = idx_out[k];
            }
            out.data[off] = self.get(&idx_in);
            advance(&mut idx_out, &dims_out);
        }
        out
    }

    /// Euclidean norm (any rank).
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Row-major odometer step over `dims`.
pub(crate) fn advance(idx: &mut [usize], dims: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return;
        }
        idx[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let n = Space::noun(2);
        let m = Tensor::matrix(n.clone(), n, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.get(&[0, 1]), 2.0);
        assert_eq!(m.get(&[1, 0]), 3.0);
    }

    #[test]
    fn construction_checks_length_and_finiteness() {
        let n = Space::noun(2);
        assert!(matches!(
            Tensor::vector(n.clone(), vec![1.0]),
            Err(Error::DataLength { .. })
        ));
        assert!(matches!(
            Tensor::vector(n, vec![1.0, f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn permute_transposes_a_matrix() {
        let n = Space::noun(2);
        let m = Tensor::matrix(n.clone(), n, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let t = m.permute(&[1, 0]);
        assert_eq!(t.data(), &[1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn from_fn_visits_indices_in_row_major_order() {
        let n = Space::noun(2);
        let s = Space::sentence(3);
        let t = Tensor::from_fn(vec![n, s], |idx| (idx[0] * 10 + idx[1]) as f64);
        assert_eq!(t.data(), &[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
    }
}
