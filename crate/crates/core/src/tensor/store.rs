//! On-disk store for labeled vectors and matrices.
//!
//! A store is a directory holding two TSV files, each with a versioned
//! header line:
//!
//! - `vectors.tsv` — header `#tensor-store v1 rank1 dim=D`, then one row
//!   per vector: `label<TAB>v1<TAB>...<TAB>vD`.
//! - `matrices.tsv` — header `#tensor-store v1 rank2 dim=D`, then sparse
//!   triplets `label<TAB>i<TAB>j<TAB>value` with 0-based indices; omitted
//!   entries are zero.
//!
//! All tensors in one store live on the same noun space `N` of dimension
//! `D`. Matrix labels and vector labels are independent namespaces, so a
//! verb may have both a context vector and a relational matrix.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{Space, Tensor};
use crate::error::{Error, Result};

pub const VECTORS_FILE: &str = "vectors.tsv";
pub const MATRICES_FILE: &str = "matrices.tsv";

/// The reserved matrix label under which the learned ownership map is
/// stored.
pub const OWNERSHIP_LABEL: &str = "_ownership";

#[derive(Debug, Clone)]
pub struct VectorStore {
    space: Space,
    vectors: BTreeMap<String, Tensor>,
    matrices: BTreeMap<String, Tensor>,
}

impl VectorStore {
    pub fn new(dim: usize) -> Self {
        VectorStore {
            space: Space::noun(dim),
            vectors: BTreeMap::new(),
            matrices: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn insert_vector(&mut self, label: impl Into<String>, t: Tensor) -> Result<()> {
        if t.rank() != 1 || t.shape()[0].dim != self.space.dim {
            return Err(Error::Store(format!(
                "vector must be rank 1 of dim {}, got dims {:?}",
                self.space.dim,
                t.dims()
            )));
        }
        self.vectors.insert(label.into(), t);
        Ok(())
    }

    pub fn insert_matrix(&mut self, label: impl Into<String>, t: Tensor) -> Result<()> {
        if t.rank() != 2 || t.dims() != vec![self.space.dim; 2] {
            return Err(Error::Store(format!(
                "matrix must be rank 2 of dim {0}x{0}, got dims {1:?}",
                self.space.dim,
                t.dims()
            )));
        }
        self.matrices.insert(label.into(), t);
        Ok(())
    }

    pub fn vector(&self, label: &str) -> Option<&Tensor> {
        self.vectors.get(label)
    }

    pub fn matrix(&self, label: &str) -> Option<&Tensor> {
        self.matrices.get(label)
    }

    pub fn vector_labels(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(String::as_str)
    }

    pub fn matrix_labels(&self) -> impl Iterator<Item = &str> {
        self.matrices.keys().map(String::as_str)
    }

    pub fn len_vectors(&self) -> usize {
        self.vectors.len()
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        self.save_vectors(&dir.join(VECTORS_FILE))?;
        self.save_matrices(&dir.join(MATRICES_FILE))?;
        Ok(())
    }

    fn save_vectors(&self, path: &PathBuf) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "#tensor-store v1 rank1 dim={}", self.space.dim)?;
        for (label, t) in &self.vectors {
            write!(f, "{label}")?;
            for x in t.data() {
                write!(f, "\t{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }

    fn save_matrices(&self, path: &PathBuf) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "#tensor-store v1 rank2 dim={}", self.space.dim)?;
        let d = self.space.dim;
        for (label, t) in &self.matrices {
            for i in 0..d {
                for j in 0..d {
                    let x = t.get(&[i, j]);
                    if x != 0.0 {
                        writeln!(f, "{label}\t{i}\t{j}\t{x}")?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<VectorStore> {
        let dir = dir.as_ref();
        let vec_path = dir.join(VECTORS_FILE);
        let vec_text = std::fs::read_to_string(&vec_path)?;
        let dim = parse_header(&vec_text, "rank1", VECTORS_FILE)?;
        let mut store = VectorStore::new(dim);
        for (lineno, line) in vec_text.lines().enumerate().skip(1) {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let label = parts.next().unwrap_or_default().to_string();
            let coords: Vec<f64> = parts
                .map(|p| {
                    p.parse::<f64>().map_err(|_| Error::FileFormat {
                        file: VECTORS_FILE.into(),
                        message: format!("line {}: bad number `{p}`", lineno + 1),
                    })
                })
                .collect::<Result<_>>()?;
            if coords.len() != dim {
                return Err(Error::FileFormat {
                    file: VECTORS_FILE.into(),
                    message: format!(
                        "line {}: expected {dim} coordinates, got {}",
                        lineno + 1,
                        coords.len()
                    ),
                });
            }
            let t = Tensor::vector(store.space.clone(), coords)?;
            store.vectors.insert(label, t);
        }

        let mat_path = dir.join(MATRICES_FILE);
        if mat_path.exists() {
            let mat_text = std::fs::read_to_string(&mat_path)?;
            let mdim = parse_header(&mat_text, "rank2", MATRICES_FILE)?;
            if mdim != dim {
                return Err(Error::FileFormat {
                    file: MATRICES_FILE.into(),
                    message: format!("matrix dim {mdim} disagrees with vector dim {dim}"),
                });
            }
            let mut entries: BTreeMap<String, Tensor> = BTreeMap::new();
            for (lineno, line) in mat_text.lines().enumerate().skip(1) {
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let parts: Vec<&str> = line.split('\t').collect();
                if parts.len() != 4 {
                    return Err(Error::FileFormat {
                        file: MATRICES_FILE.into(),
                        message: format!("line {}: expected `label i j value`", lineno + 1),
                    });
                }
                let bad = |what: &str| Error::FileFormat {
                    file: MATRICES_FILE.into(),
                    message: format!("line {}: bad {what}", lineno + 1),
                };
                let i: usize = parts[1].parse().map_err(|_| bad("row index"))?;
                let j: usize = parts[2].parse().map_err(|_| bad("column index"))?;
                let x: f64 = parts[3].parse().map_err(|_| bad("value"))?;
                if i >= dim || j >= dim {
                    return Err(bad("index (out of range)"));
                }
                let t = entries.entry(parts[0].to_string()).or_insert_with(|| {
                    Tensor::zeros(vec![store.space.clone(), store.space.clone()])
                });
                t.set(&[i, j], x);
            }
            store.matrices = entries;
        }
        Ok(store)
    }
}

fn parse_header(text: &str, rank: &str, file: &str) -> Result<usize> {
    let header = text.lines().next().unwrap_or_default();
    let mut words = header.split_whitespace();
    let magic = words.next();
    let version = words.next();
    let got_rank = words.next();
    let dim_kv = words.next();
    if magic != Some("#tensor-store") || version != Some("v1") {
        return Err(Error::FileFormat {
            file: file.into(),
            message: format!("unrecognized header `{header}`"),
        });
    }
    if got_rank != Some(rank) {
        return Err(Error::FileFormat {
            file: file.into(),
            message: format!("expected {rank} store, header says `{header}`"),
        });
    }
    dim_kv
        .and_then(|kv| kv.strip_prefix("dim="))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::FileFormat {
            file: file.into(),
            message: format!("missing dim= in header `{header}`"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_vectors_and_matrices() {
        let dir = std::env::temp_dir().join(format!("relclause-store-{}", std::process::id()));
        let mut store = VectorStore::new(3);
        store
            .insert_vector(
                "dog",
                Tensor::vector(Space::noun(3), vec![1.0, 0.25, 0.0]).unwrap(),
            )
            .unwrap();
        store
            .insert_matrix(
                "bite",
                Tensor::matrix(
                    Space::noun(3),
                    Space::noun(3),
                    vec![0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 1.0],
                )
                .unwrap(),
            )
            .unwrap();
        store.save(&dir).unwrap();
        let loaded = VectorStore::load(&dir).unwrap();
        assert_eq!(loaded.vector("dog"), store.vector("dog"));
        assert_eq!(loaded.matrix("bite"), store.matrix("bite"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn header_is_checked() {
        let dir = std::env::temp_dir().join(format!("relclause-badstore-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join(VECTORS_FILE), "no header\n").unwrap();
        assert!(matches!(
            VectorStore::load(&dir),
            Err(Error::FileFormat { .. })
        ));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dimension_is_enforced_on_insert() {
        let mut store = VectorStore::new(3);
        let short = Tensor::vector(Space::noun(2), vec![1.0, 2.0]).unwrap();
        assert!(store.insert_vector("x", short).is_err());
    }
}
