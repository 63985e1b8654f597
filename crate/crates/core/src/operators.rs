//! Sparse real operators on spin-1/2 chains built from Pauli strings.
//!
//! Basis convention: a basis index is a bit string with site 0 as the most
//! significant bit; bit value 0 is spin up (`sigma_z = +1`). This makes the
//! Kronecker product of single-site factors follow site order.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Largest spin count for which a state vector or sparse operator is built.
pub const MAX_SPARSE_SITES: usize = 20;
/// Largest spin count for which a dense matrix is built.
pub const MAX_DENSE_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `coeff * prod(sigma^{op}_{site})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coeff: f64,
    pub factors: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(coeff: f64, factors: &[(usize, Pauli)]) -> Self {
        Self {
            coeff,
            factors: factors.to_vec(),
        }
    }

    /// Image of basis state `col`: returns the target index and the phase as
    /// a power of `i`.
    fn act(&self, col: usize, n_sites: usize) -> (usize, u8) {
        let mut idx = col;
        let mut phase = 0u8;
        for &(site, op) in &self.factors {
            let bit = 1usize << (n_sites - 1 - site);
            let down = idx & bit != 0;
            match op {
                Pauli::X => idx ^= bit,
                Pauli::Y => {
                    // Y|up> = i|down>, Y|down> = -i|up>
                    phase += if down { 3 } else { 1 };
                    idx ^= bit;
                }
                Pauli::Z => {
                    if down {
                        phase += 2;
                    }
                }
            }
        }
        (idx, phase % 4)
    }
}

/// Real sparse operator stored by columns: `columns[j]` lists `(i, O_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n_sites: usize,
    columns: Vec<Vec<(usize, f64)>>,
}

impl SparseOperator {
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_sparse_sites(n_sites)?;
        Ok(Self {
            n_sites,
            columns: vec![Vec::new(); 1 << n_sites],
        })
    }

    /// Sums Pauli strings; fails if the result has an imaginary part.
    pub fn from_terms(n_sites: usize, terms: &[PauliString]) -> Result<Self> {
        check_sparse_sites(n_sites)?;
        for t in terms {
            if t.factors.iter().any(|&(s, _)| s >= n_sites) {
                return Err(Error::structure("Pauli factor outside the chain"));
            }
        }
        let dim = 1usize << n_sites;
        let mut columns = Vec::with_capacity(dim);
        let mut scratch: Vec<(usize, f64, f64)> = Vec::new();
        for col in 0..dim {
            scratch.clear();
            for t in terms {
                let (row, phase) = t.act(col, n_sites);
                let (re, im) = match phase {
                    0 => (t.coeff, 0.0),
                    1 => (0.0, t.coeff),
                    2 => (-t.coeff, 0.0),
                    _ => (0.0, -t.coeff),
                };
                scratch.push((row, re, im));
            }
            scratch.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::new();
            let mut i = 0;
            while i < scratch.len() {
                let row = scratch[i].0;
                let (mut re, mut im, mut scale) = (0.0, 0.0, 0.0f64);
                while i < scratch.len() && scratch[i].0 == row {
                    re += scratch[i].1;
                    im += scratch[i].2;
                    scale = scale.max(scratch[i].1.abs()).max(scratch[i].2.abs());
                    i += 1;
                }
                if im.abs() > 1e-13 * scale.max(1.0) {
                    return Err(Error::structure("operator is not real in the spin basis"));
                }
                if re != 0.0 {
                    merged.push((row, re));
                }
            }
            columns.push(merged);
        }
        Ok(Self { n_sites, columns })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    /// `O x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        let mut y = vec![0.0; x.len()];
        for (j, col) in self.columns.iter().enumerate() {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for &(i, v) in col {
                y[i] += v * xj;
            }
        }
        y
    }

    /// `<x|O|x>` for a real vector.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        dot(x, &self.apply(x))
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        if self.n_sites != other.n_sites {
            return Err(Error::structure("operators act on different chains"));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut all: Vec<(usize, f64)> = a.iter().chain(b).copied().collect();
                all.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(all.len());
                for (i, v) in all {
                    match merged.last_mut() {
                        Some(last) if last.0 == i => last.1 += v,
                        _ => merged.push((i, v)),
                    }
                }
                merged.retain(|e| e.1 != 0.0);
                merged
            })
            .collect();
        Ok(SparseOperator {
            n_sites: self.n_sites,
            columns,
        })
    }

    pub fn sum<'a>(
        n_sites: usize,
        ops: impl IntoIterator<Item = &'a SparseOperator>,
    ) -> Result<Self> {
        let mut acc = SparseOperator::zero(n_sites)?;
        for op in ops {
            acc = acc.add(op)?;
        }
        Ok(acc)
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.n_sites > MAX_DENSE_SITES {
            return Err(Error::Capability {
                what: "dense spin operator (sites)",
                requested: self.n_sites,
                limit: MAX_DENSE_SITES,
            });
        }
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (i, j, v) in self.entries() {
            m[(i, j)] += v;
        }
        Ok(m)
    }

    /// Largest `|O_ij - O_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, j, v) in self.entries() {
            let t = self.columns[i]
                .binary_search_by_key(&j, |e| e.0)
                .map(|k| self.columns[i][k].1)
                .unwrap_or(0.0);
            worst = worst.max((v - t).abs());
        }
        worst
    }
}

fn check_sparse_sites(n_sites: usize) -> Result<()> {
    if n_sites > MAX_SPARSE_SITES {
        return Err(Error::Capability {
            what: "sparse spin operator (sites)",
            requested: n_sites,
            limit: MAX_SPARSE_SITES,
        });
    }
    Ok(())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Kronecker product of real vectors, first factor most significant.
pub fn kron_vectors(factors: &[DVector<f64>]) -> DVector<f64> {
    let mut out = DVector::from_element(1, 1.0);
    for f in factors {
        let mut next = DVector::zeros(out.len() * f.len());
        for (i, a) in out.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                next[i * f.len() + j] = a * b;
            }
        }
        out = next;
    }
    out
}

/// Computational basis state with the given spins (`true` = down).
pub fn basis_index(down: &[bool]) -> usize {
    down.iter().fold(0usize, |acc, &d| (acc << 1) | d as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra_on_one_site() {
        // XY = iZ, so XY - YX = 2iZ is imaginary and must be rejected, while
        // X X = 1 is real.
        let xy = PauliString::new(1.0, &[(0, Pauli::X), (0, Pauli::Y)]);
        let yx = PauliString::new(-1.0, &[(0, Pauli::Y), (0, Pauli::X)]);
        assert!(SparseOperator::from_terms(1, &[xy, yx]).is_err());
        let xx = PauliString::new(1.0, &[(0, Pauli::X), (0, Pauli::X)]);
        let id = SparseOperator::from_terms(1, &[xx])
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));
    }

    #[test]
    fn yy_is_real_and_matches_hand_matrix() {
        let yy = PauliString::new(1.0, &[(0, Pauli::Y), (1, Pauli::Y)]);
        let m = SparseOperator::from_terms(2, &[yy])
            .unwrap()
            .to_dense()
            .unwrap();
        // sigma_y (x) sigma_y in the basis |uu>, |ud>, |du>, |dd>
        #[rustfmt::skip]
        let expect = DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 0.0, -1.0,
            0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
        ]);
        assert_eq!(m, expect);
    }

    #[test]
    fn site_zero_is_most_significant() {
        let z0 = SparseOperator::from_terms(3, &[PauliString::new(1.0, &[(0, Pauli::Z)])]).unwrap();
        let mut v = vec![0.0; 8];
        v[basis_index(&[true, false, false])] = 1.0;
        assert_eq!(z0.expectation(&v), -1.0);
    }
}
