use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::operators::{SparseOperator, MAX_DENSE_SITES};
use crate::{Error, Result};

/// Complete eigensystem of a real symmetric matrix; `vectors` holds the
/// eigenvectors as columns in the order of `energies` (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSpectrum {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl DenseSpectrum {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn top_energy(&self) -> f64 {
        self.energies[self.dim() - 1]
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `U diag(E) U^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (k, e) in self.energies.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*e);
        }
        scaled * self.vectors.transpose()
    }
}

/// Diagonalizes a dense symmetric matrix, block by block.
pub fn dense_eigensystem(m: &DMatrix<f64>) -> Result<DenseSpectrum> {
    if !m.is_square() {
        return Err(Error::structure("matrix is not square"));
    }
    let d = m.nrows();
    let mut entries = Vec::new();
    for j in 0..d {
        for i in 0..d {
            let v = m[(i, j)];
            if v != 0.0 {
                entries.push((i, j, v));
            }
        }
    }
    Ok(block_eigensystem(d, &entries))
}

/// Diagonalizes a sparse spin operator without building it densely first.
pub fn sparse_eigensystem(op: &SparseOperator) -> Result<DenseSpectrum> {
    if op.n_sites() > MAX_DENSE_SITES {
        return Err(Error::Capability {
            what: "dense eigensystem (sites)",
            requested: op.n_sites(),
            limit: MAX_DENSE_SITES,
        });
    }
    let entries: Vec<_> = op.entries().collect();
    Ok(block_eigensystem(op.dim(), &entries))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The nonzero pattern splits the basis into connected components (for the
/// spin chains these are the parity sectors); each is diagonalized alone.
fn block_eigensystem(d: usize, entries: &[(usize, usize, f64)]) -> DenseSpectrum {
    let mut parent: Vec<usize> = (0..d).collect();
    for &(i, j, _) in entries {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut block_of = vec![usize::MAX; d];
    let mut position = vec![0usize; d];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..d {
        let root = find(&mut parent, i);
        if block_of[root] == usize::MAX {
            block_of[root] = blocks.len();
            blocks.push(Vec::new());
        }
        let b = block_of[root];
        block_of[i] = b;
        position[i] = blocks[b].len();
        blocks[b].push(i);
    }
    let mut mats: Vec<DMatrix<f64>> = blocks
        .iter()
        .map(|b| DMatrix::zeros(b.len(), b.len()))
        .collect();
    for &(i, j, v) in entries {
        mats[block_of[i]][(position[i], position[j])] += v;
    }

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(d);
    let mut solved = Vec::with_capacity(blocks.len());
    for (b, m) in mats.into_iter().enumerate() {
        // Symmetrize against rounding in accumulated entries.
        let m = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(m);
        for (k, e) in eig.eigenvalues.iter().enumerate() {
            pairs.push((*e, b, k));
        }
        solved.push(eig.eigenvectors);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut vectors = DMatrix::zeros(d, d);
    let mut energies = Vec::with_capacity(d);
    for (col, &(e, b, k)) in pairs.iter().enumerate() {
        energies.push(e);
        for (r, &basis) in blocks[b].iter().enumerate() {
            vectors[(basis, col)] = solved[b][(r, k)];
        }
    }
    DenseSpectrum { energies, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{isolated_spin_group, IsingParams};

    #[test]
    fn single_spin_levels() {
        let h = isolated_spin_group(IsingParams::new(1.0, 0.3), 1).unwrap();
        let s = sparse_eigensystem(&h).unwrap();
        assert_eq!(s.energies, vec![-1.0, 1.0]);
    }

    #[test]
    fn two_spin_levels_match_characteristic_polynomial() {
        let (b, j) = (1.0, 0.1);
        let h = isolated_spin_group(IsingParams::new(b, j), 2).unwrap();
        let s = sparse_eigensystem(&h).unwrap();
        // The |uu>,|dd> block is [[-2B, -J], [-J, 2B]]; |ud>,|du> are at 0.
        let r = (4.0 * b * b + j * j).sqrt();
        let expect = [-r, 0.0, 0.0, r];
        for (e, x) in s.energies.iter().zip(expect) {
            assert!((e - x).abs() < 1e-14);
        }
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let h = isolated_spin_group(IsingParams::new(1.0, 2.5), 6).unwrap();
        let dense = h.to_dense().unwrap();
        let s = sparse_eigensystem(&h).unwrap();
        let err = (s.reconstruct() - &dense).abs().max();
        assert!(err <= 1e-10 * dense.abs().max());
        let gram = s.vectors.transpose() * &s.vectors;
        assert!((gram - DMatrix::identity(64, 64)).abs().max() < 1e-12);
        let via_dense = dense_eigensystem(&dense).unwrap();
        for (a, b) in s.energies.iter().zip(&via_dense.energies) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
