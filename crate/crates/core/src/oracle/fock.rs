use alloc::collections::BTreeMap;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, SymmetricEigen};

use super::moments_from_vectors;
use crate::chain::{
    isolated_quadratic_group, partition, ChainSpec, ModelParams, PartitionedHamiltonian,
};
use crate::moments::MomentSet;
use crate::{Error, Result};

/// Sparse vector in the occupation-number basis of all group modes.
type FockVector = BTreeMap<Vec<u32>, f64>;

/// Exact interaction moments of oscillator chains in Fock states of the
/// group normal modes, by applying ladder operators explicitly.
#[derive(Debug, Clone)]
pub struct HarmonicFockOracle {
    partition: PartitionedHamiltonian,
    mass: f64,
    omega0: f64,
    /// Normal-mode frequencies of one group, ascending.
    pub frequencies: Vec<f64>,
    /// `amplitudes[(site, mode)]` of one group.
    pub amplitudes: DMatrix<f64>,
}

impl HarmonicFockOracle {
    pub fn new(chain: &ChainSpec) -> Result<Self> {
        let ModelParams::Harmonic(p) = chain.params else {
            return Err(Error::structure(
                "the Fock oracle handles oscillator chains",
            ));
        };
        let v = isolated_quadratic_group(p, chain.group_size)? / p.mass;
        let eig = SymmetricEigen::new(v);
        // Modes in ascending frequency, the order of the mode spectra.
        let mut order: Vec<usize> = (0..chain.group_size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        Ok(Self {
            partition: partition(chain),
            mass: p.mass,
            omega0: p.omega0,
            frequencies: order.iter().map(|&j| eig.eigenvalues[j].sqrt()).collect(),
            amplitudes: eig.eigenvectors.select_columns(order.iter()),
        })
    }

    fn group_size(&self) -> usize {
        self.partition.chain.group_size
    }

    /// Group energy of Fock state `occ` for group `mu`.
    fn group_energy(&self, occ: &[u32], mu: usize) -> f64 {
        let n = self.group_size();
        (0..n)
            .map(|j| self.frequencies[j] * (occ[mu * n + j] as f64 + 0.5))
            .sum()
    }

    /// `q_site |v>`.
    fn apply_position(&self, site: usize, v: &FockVector) -> FockVector {
        let n = self.group_size();
        let (mu, i) = (site / n, site % n);
        let mut out = FockVector::new();
        for (occ, amp) in v {
            for j in 0..n {
                let c = self.amplitudes[(i, j)] / (2.0 * self.mass * self.frequencies[j]).sqrt();
                let g = mu * n + j;
                if occ[g] > 0 {
                    let mut lowered = occ.clone();
                    lowered[g] -= 1;
                    *out.entry(lowered).or_insert(0.0) += amp * c * (occ[g] as f64).sqrt();
                }
                let mut raised = occ.clone();
                raised[g] += 1;
                *out.entry(raised).or_insert(0.0) += amp * c * (occ[g] as f64 + 1.0).sqrt();
            }
        }
        out
    }

    fn apply_bond(&self, b: usize, v: &FockVector) -> FockVector {
        let (l, r) = self.partition.bonds[b];
        let k = -self.mass * self.omega0 * self.omega0;
        let mut out = self.apply_position(l, &self.apply_position(r, v));
        for x in out.values_mut() {
            *x *= k;
        }
        out
    }

    /// Exact moments for group occupations `occupations[mu][mode]`.
    pub fn exact_moments(&self, occupations: &[Vec<u32>]) -> Result<MomentSet> {
        let ng = self.partition.n_groups();
        let n = self.group_size();
        if occupations.len() != ng || occupations.iter().any(|o| o.len() != n) {
            return Err(Error::structure(
                "occupations must give one entry per group mode",
            ));
        }
        let key: Vec<u32> = occupations.iter().flatten().copied().collect();
        let mut a = FockVector::new();
        a.insert(key, 1.0);
        let bond_vecs: Vec<FockVector> = (0..ng).map(|b| self.apply_bond(b, &a)).collect();
        let group_terms: Vec<FockVector> = (0..ng)
            .map(|mu| {
                let mut h = bond_vecs[mu].clone();
                for (occ, amp) in &a {
                    *h.entry(occ.clone()).or_insert(0.0) += amp * self.group_energy(occ, mu);
                }
                h
            })
            .collect();
        Ok(moments_from_vectors(&a, &bond_vecs, &group_terms, fock_dot))
    }
}

fn fock_dot(x: &FockVector, y: &FockVector) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small
        .iter()
        .filter_map(|(k, v)| large.get(k).map(|w| v * w))
        .sum()
}
