//! Structure maps of the compact-closed category of spaces and the
//! Frobenius algebra carried by each space's fixed basis.
//!
//! With a fixed orthonormal basis the two cups collapse to the inner
//! product and the two caps to a scaled identity matrix. The Frobenius
//! maps are the basis-diagonal copy/merge family: `delta` embeds a vector
//! as a diagonal matrix, `mu` multiplies pointwise, `iota` sums the
//! coordinates and `zeta` produces a constant vector.

use super::{Space, Tensor};
use crate::error::{Error, Result};

fn expect_vector<'t>(t: &'t Tensor, what: &str) -> Result<&'t Space> {
    if t.rank() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "{what} expects a rank-1 tensor, got rank {}",
            t.rank()
        )));
    }
    Ok(&t.shape()[0])
}

fn expect_same_space(v: &Tensor, w: &Tensor, what: &str) -> Result<Space> {
    let sv = expect_vector(v, what)?;
    let sw = expect_vector(w, what)?;
    if sv != sw {
        return Err(Error::SpaceMismatch {
            expected: sv.to_string(),
            got: sw.to_string(),
        });
    }
    Ok(sv.clone())
}

/// Cup: the inner product of two vectors in the same space.
pub fn epsilon(v: &Tensor, w: &Tensor) -> Result<f64> {
    expect_same_space(v, w, "epsilon")?;
    Ok(v.data().iter().zip(w.data()).map(|(a, b)| a * b).sum())
}

/// Cap: `k` times the identity matrix on `space`.
pub fn eta(k: f64, space: &Space) -> Tensor {
    Tensor::identity(space.clone()).scale(k)
}

/// Copy: embed a vector as the diagonal of a matrix.
pub fn frob_delta(v: &Tensor) -> Result<Tensor> {
    let space = expect_vector(v, "delta")?.clone();
    let d = space.dim;
    let mut out = Tensor::zeros(vec![space.clone(), space]);
    for i in 0..d {
        out.set(&[i, i], v.data()[i]);
    }
    Ok(out)
}

/// Merge: pointwise multiplication of two vectors in the same space.
pub fn frob_mu(v: &Tensor, w: &Tensor) -> Result<Tensor> {
    let space = expect_same_space(v, w, "mu")?;
    Tensor::vector(
        space,
        v.data().iter().zip(w.data()).map(|(a, b)| a * b).collect(),
    )
}

/// Discard: the sum of a vector's coordinates.
pub fn frob_iota(v: &Tensor) -> Result<f64> {
    expect_vector(v, "iota")?;
    Ok(v.data().iter().sum())
}

/// Unit of merge: the constant-`k` vector on `space`.
pub fn frob_zeta(k: f64, space: &Space) -> Tensor {
    Tensor::vector(space.clone(), vec![k; space.dim]).expect("constant vector is well-formed")
}

/// Cosine of the angle between two vectors; 0 when either is the zero
/// vector.
pub fn cosine(v: &Tensor, w: &Tensor) -> Result<f64> {
    expect_same_space(v, w, "cosine")?;
    let nv = v.norm();
    let nw = w.norm();
    if nv == 0.0 || nw == 0.0 {
        return Ok(0.0);
    }
    Ok(epsilon(v, w)? / (nv * nw))
}

/// Matrix-vector application `M x` (contract the second leg).
pub fn matvec(m: &Tensor, x: &Tensor) -> Result<Tensor> {
    if m.rank() != 2 || x.rank() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "matvec expects rank-2 x rank-1, got {} x {}",
            m.rank(),
            x.rank()
        )));
    }
    if m.shape()[1] != x.shape()[0] {
        return Err(Error::SpaceMismatch {
            expected: m.shape()[1].to_string(),
            got: x.shape()[0].to_string(),
        });
    }
    let (r, c) = (m.shape()[0].dim, m.shape()[1].dim);
    let mut out = vec![0.0; r];
    for i in 0..r {
        let row = &m.data()[i * c..(i + 1) * c];
        out[i] = row.iter().zip(x.data()).map(|(a, b)| a * b).sum();
    }
    Tensor::vector(m.shape()[0].clone(), out)
}

/// Row-vector application `xᵀ M` (contract the first leg).
pub fn vecmat(x: &Tensor, m: &Tensor) -> Result<Tensor> {
    if m.rank() != 2 || x.rank() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "vecmat expects rank-1 x rank-2, got {} x {}",
            x.rank(),
            m.rank()
        )));
    }
    if m.shape()[0] != x.shape()[0] {
        return Err(Error::SpaceMismatch {
            expected: m.shape()[0].to_string(),
            got: x.shape()[0].to_string(),
        });
    }
    let (r, c) = (m.shape()[0].dim, m.shape()[1].dim);
    let mut out = vec![0.0; c];
    for i in 0..r {
        let xi = x.data()[i];
        for j in 0..c {
            out[j] += xi * m.data()[i * c + j];
        }
    }
    Tensor::vector(m.shape()[1].clone(), out)
}

/// Outer product of two vectors.
pub fn outer(v: &Tensor, w: &Tensor) -> Result<Tensor> {
    let sv = expect_vector(v, "outer")?.clone();
    let sw = expect_vector(w, "outer")?.clone();
    let mut data = Vec::with_capacity(sv.dim * sw.dim);
    for a in v.data() {
        for b in w.data() {
            data.push(a * b);
        }
    }
    Tensor::new(vec![sv, sw], data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(a: f64, b: f64) -> Tensor {
        Tensor::vector(Space::noun(2), vec![a, b]).unwrap()
    }

    #[test]
    fn epsilon_is_the_inner_product() {
        assert_eq!(epsilon(&v2(1.0, 0.0), &v2(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(epsilon(&v2(1.0, 0.0), &v2(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(epsilon(&v2(1.0, 2.0), &v2(3.0, 4.0)).unwrap(), 11.0);
    }

    #[test]
    fn epsilon_rejects_space_mismatch() {
        let v = Tensor::vector(Space::noun(2), vec![1.0, 0.0]).unwrap();
        let w = Tensor::vector(Space::sentence(2), vec![1.0, 0.0]).unwrap();
        assert!(matches!(epsilon(&v, &w), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn eta_scales_the_identity() {
        let n = Space::noun(2);
        let t = eta(3.0, &n);
        assert_eq!(t.data(), &[3.0, 0.0, 0.0, 3.0]);
        assert_eq!(eta(0.0, &n).data(), &[0.0; 4]);
        let id3 = eta(1.0, &Space::noun(3));
        assert_eq!(id3, Tensor::identity(Space::noun(3)));
    }

    #[test]
    fn frobenius_maps_match_their_closed_forms() {
        let v = v2(5.0, 7.0);
        let w = v2(2.0, 3.0);
        assert_eq!(frob_delta(&v).unwrap().data(), &[5.0, 0.0, 0.0, 7.0]);
        assert_eq!(frob_mu(&v, &w).unwrap().data(), &[10.0, 21.0]);
        assert_eq!(frob_iota(&v).unwrap(), 12.0);
        assert_eq!(frob_zeta(4.0, &Space::noun(2)).data(), &[4.0, 4.0]);
    }

    #[test]
    fn cosine_examples() {
        assert_eq!(cosine(&v2(1.0, 0.0), &v2(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(cosine(&v2(1.0, 0.0), &v2(0.0, 1.0)).unwrap(), 0.0);
        let c = cosine(&v2(1.0, 1.0), &v2(1.0, 0.0)).unwrap();
        assert!((c - 0.5f64.sqrt()).abs() < 1e-15);
        // zero-vector convention
        assert_eq!(cosine(&v2(0.0, 0.0), &v2(1.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn matvec_and_vecmat() {
        let n = Space::noun(2);
        let m = Tensor::matrix(n.clone(), n, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let x = v2(5.0, 6.0);
        assert_eq!(matvec(&m, &x).unwrap().data(), &[17.0, 39.0]);
        assert_eq!(vecmat(&x, &m).unwrap().data(), &[23.0, 34.0]);
    }
}
