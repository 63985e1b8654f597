//! Brute-force reference path for small chains.
//!
//! Everything here is dense and deterministic: exact Gibbs states from a
//! full eigendecomposition, exact interaction moments from explicit state
//! vectors, and the comparisons that test the Gaussian/erfc description of
//! the thermal state in the product basis.

mod erfc;
mod fock;
mod reduced;

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::DMatrix;

pub use erfc::{
    diagonal_vs_erfc, erfc_log_diagonal, off_diagonal_profile, ErfcComparison, OffDiagonalBin,
    OffDiagonalReport,
};
pub use fock::HarmonicFockOracle;
pub use reduced::{
    canonical_state, reduced_state, reduced_vs_canonical, trace_distance, ReducedComparison,
};

use crate::chain::{partition, ChainSpec, ModelParams, PartitionedHamiltonian};
use crate::moments::{BondKind, GroupMoments, MomentSet, MIN_CLOSED_FORM_GROUPS};
use crate::numerics::log_sum_exp;
use crate::operators::{dot, Pauli, PauliString, SparseOperator, MAX_SPARSE_SITES};
use crate::spectra::{sparse_eigensystem, DenseSpectrum};
use crate::{Error, Result};

/// `exp(-beta H) / Z` held in the eigenbasis of `H`.
#[derive(Debug, Clone)]
pub struct GibbsState<'a> {
    pub spectrum: &'a DenseSpectrum,
    pub beta: f64,
    /// Eigenstate populations `exp(-beta E_k) / Z`.
    pub weights: Vec<f64>,
    pub ln_z: f64,
    /// Ground energy.
    pub e0: f64,
    /// Top of the spectrum.
    pub e1: f64,
}

/// Gibbs state from a complete eigensystem; exponentials are shifted by
/// the ground energy so no overflow occurs at any `beta >= 0`.
pub fn exact_gibbs(spectrum: &DenseSpectrum, beta: f64) -> Result<GibbsState<'_>> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::domain("beta must be finite and non-negative"));
    }
    let e0 = spectrum.ground_energy();
    let logs: Vec<f64> = spectrum.energies.iter().map(|e| -beta * (e - e0)).collect();
    let ln_shifted = log_sum_exp(&logs);
    let weights = logs.iter().map(|l| (l - ln_shifted).exp()).collect();
    Ok(GibbsState {
        spectrum,
        beta,
        weights,
        ln_z: ln_shifted - beta * e0,
        e0,
        e1: spectrum.top_energy(),
    })
}

impl GibbsState<'_> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn trace(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Tr(H rho)`.
    pub fn mean_energy(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.spectrum.energies)
            .map(|(w, e)| w * e)
            .sum()
    }

    /// Dense density matrix `U diag(w) U^T`.
    pub fn density_matrix(&self) -> DMatrix<f64> {
        let u = &self.spectrum.vectors;
        let mut scaled = u.clone();
        for (k, w) in self.weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*w);
        }
        scaled * u.transpose()
    }

    /// `<a|rho|a>` for a sparse vector `a`.
    pub fn diagonal(&self, a: &[(usize, f64)]) -> f64 {
        let u = &self.spectrum.vectors;
        (0..self.dim())
            .map(|k| {
                let overlap: f64 = a.iter().map(|&(i, v)| u[(i, k)] * v).sum();
                self.weights[k] * overlap * overlap
            })
            .sum()
    }

    /// `<phi|O|phi>` averaged over the state.
    pub fn expectation(&self, op: &SparseOperator) -> f64 {
        (0..self.dim())
            .filter(|&k| self.weights[k] > 0.0)
            .map(|k| self.weights[k] * op.expectation(&self.spectrum.vector(k)))
            .sum()
    }
}

/// Product basis state of a spin chain with its interaction moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductEntry {
    /// Group eigenstate index per group.
    pub labels: Vec<usize>,
    /// Nonzero amplitudes of the full-chain vector.
    pub vector: Vec<(usize, f64)>,
    /// `E_a`.
    pub energy: f64,
    /// `eps_a`.
    pub mean: f64,
    /// `Delta_a^2`.
    pub variance: f64,
}

/// Dense realization of a small spin chain with its partition.
#[derive(Debug, Clone)]
pub struct SpinChainOracle {
    pub partition: PartitionedHamiltonian,
    pub hamiltonian: SparseOperator,
    pub free: SparseOperator,
    pub groups: Vec<SparseOperator>,
    pub bonds: Vec<SparseOperator>,
    /// Eigensystem of one isolated group on its own sites.
    pub group_spectrum: DenseSpectrum,
    bond: BondKind,
}

impl SpinChainOracle {
    pub fn new(chain: &ChainSpec) -> Result<Self> {
        if !matches!(chain.params, ModelParams::Ising(_)) {
            return Err(Error::structure("the dense oracle handles spin chains"));
        }
        if chain.sites() > MAX_SPARSE_SITES {
            return Err(Error::Capability {
                what: "spin oracle (sites)",
                requested: chain.sites(),
                limit: MAX_SPARSE_SITES,
            });
        }
        let partition = partition(chain);
        let groups = (0..chain.n_groups)
            .map(|mu| partition.spin_group(mu))
            .collect::<Result<Vec<_>>>()?;
        let bonds = (0..chain.n_groups)
            .map(|b| partition.spin_bond(b))
            .collect::<Result<Vec<_>>>()?;
        let free = SparseOperator::sum(chain.sites(), &groups)?;
        let hamiltonian = chain.spin_hamiltonian()?;
        let group_spectrum = sparse_eigensystem(&partition.spin_isolated_group()?)?;
        Ok(Self {
            bond: BondKind::of(&chain.params),
            partition,
            hamiltonian,
            free,
            groups,
            bonds,
            group_spectrum,
        })
    }

    pub fn sites(&self) -> usize {
        self.partition.chain.sites()
    }

    pub fn n_groups(&self) -> usize {
        self.partition.n_groups()
    }

    /// Eigensystem of the full chain.
    pub fn eigensystem(&self) -> Result<DenseSpectrum> {
        sparse_eigensystem(&self.hamiltonian)
    }

    /// Full-chain vector of a product of group eigenstates.
    pub fn product_vector(&self, labels: &[usize]) -> Result<Vec<(usize, f64)>> {
        if labels.len() != self.n_groups() {
            return Err(Error::structure("one label per group is needed"));
        }
        let n = self.partition.chain.group_size;
        let gdim = 1usize << n;
        let mut acc: Vec<(usize, f64)> = vec![(0, 1.0)];
        for &l in labels {
            if l >= gdim {
                return Err(Error::structure("group eigenstate index out of range"));
            }
            let col = self.group_spectrum.vectors.column(l);
            let factor: Vec<(usize, f64)> = col
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() > 1e-15)
                .map(|(i, v)| (i, *v))
                .collect();
            let mut next = Vec::with_capacity(acc.len() * factor.len());
            for &(i, a) in &acc {
                for &(j, b) in &factor {
                    next.push((i * gdim + j, a * b));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn dense_vector(&self, sparse: &[(usize, f64)]) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.sites()];
        for &(i, a) in sparse {
            v[i] = a;
        }
        v
    }

    /// Exact moments from explicit vectors.
    pub fn exact_moments(&self, labels: &[usize]) -> Result<MomentSet> {
        let a = self.dense_vector(&self.product_vector(labels)?);
        let ng = self.n_groups();
        let bond_vecs: Vec<Vec<f64>> = self.bonds.iter().map(|b| b.apply(&a)).collect();
        let group_terms: Vec<Vec<f64>> = (0..ng)
            .map(|mu| {
                let mut g = self.groups[mu].apply(&a);
                for (x, y) in g.iter_mut().zip(&bond_vecs[mu]) {
                    *x += y;
                }
                g
            })
            .collect();
        Ok(moments_from_vectors(
            &a,
            &bond_vecs,
            &group_terms,
            |x, y| dot(x, y),
        ))
    }

    /// Closed-form moments from the end-site magnetizations.
    pub fn closed_form_moments(&self, labels: &[usize]) -> Result<(f64, f64)> {
        self.check_closed_form()?;
        let n = self.partition.chain.group_size;
        let ends: Vec<(f64, f64)> = labels
            .iter()
            .map(|&l| self.group_end_magnetization(l, n))
            .collect::<Result<_>>()?;
        let ng = ends.len();
        let var = (0..ng)
            .map(|mu| self.bond.variance(ends[mu].1, ends[(mu + 1) % ng].0))
            .sum();
        Ok((0.0, var))
    }

    fn check_closed_form(&self) -> Result<()> {
        if self.n_groups() < MIN_CLOSED_FORM_GROUPS {
            return Err(Error::structure(
                "closed-form moments need at least three groups",
            ));
        }
        Ok(())
    }

    fn group_end_magnetization(&self, label: usize, n: usize) -> Result<(f64, f64)> {
        let v = self.group_spectrum.vector(label);
        let z = |s: usize| -> Result<f64> {
            Ok(
                SparseOperator::from_terms(n, &[PauliString::new(1.0, &[(s, Pauli::Z)])])?
                    .expectation(&v),
            )
        };
        Ok((z(0)?, z(n - 1)?))
    }

    /// Every product state with closed-form moments, in label order.
    pub fn product_basis(&self) -> Result<Vec<ProductEntry>> {
        self.check_closed_form()?;
        let n = self.partition.chain.group_size;
        let gdim = 1usize << n;
        let ng = self.n_groups();
        let ends: Vec<(f64, f64)> = (0..gdim)
            .map(|l| self.group_end_magnetization(l, n))
            .collect::<Result<_>>()?;
        let total = gdim.pow(ng as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut labels = vec![0usize; ng];
            let mut rest = idx;
            for mu in (0..ng).rev() {
                labels[mu] = rest % gdim;
                rest /= gdim;
            }
            let energy = labels
                .iter()
                .map(|&l| self.group_spectrum.energies[l])
                .sum();
            let variance = (0..ng)
                .map(|mu| {
                    self.bond
                        .variance(ends[labels[mu]].1, ends[labels[(mu + 1) % ng]].0)
                })
                .sum();
            let vector = self.product_vector(&labels)?;
            out.push(ProductEntry {
                labels,
                vector,
                energy,
                mean: 0.0,
                variance,
            });
        }
        Ok(out)
    }

    /// Spectral distribution of `H` in a product state.
    pub fn clt_moments(&self, labels: &[usize]) -> Result<SpectralDistribution> {
        let a = self.dense_vector(&self.product_vector(labels)?);
        let e_a: f64 = labels
            .iter()
            .map(|&l| self.group_spectrum.energies[l])
            .sum();
        Ok(spectral_distribution(&self.hamiltonian, &a, e_a))
    }
}

/// `eps_a`, `Delta_a^2` and group moments from the vectors `I_mu |a>` and
/// `(H_mu) |a>` (group term including its right bond).
pub(crate) fn moments_from_vectors<V>(
    a: &V,
    bond_vecs: &[V],
    group_terms: &[V],
    dot: impl Fn(&V, &V) -> f64,
) -> MomentSet {
    let ng = bond_vecs.len();
    let bond_means: Vec<f64> = bond_vecs.iter().map(|b| dot(a, b)).collect();
    let bond_variances: Vec<f64> = bond_vecs
        .iter()
        .zip(&bond_means)
        .map(|(b, m)| dot(b, b) - m * m)
        .collect();
    let mean: f64 = bond_means.iter().sum();
    let mut i2 = 0.0;
    for x in 0..ng {
        for y in 0..ng {
            i2 += dot(&bond_vecs[x], &bond_vecs[y]);
        }
    }
    let h_means: Vec<f64> = group_terms.iter().map(|h| dot(a, h)).collect();
    let cov = |x: usize, y: usize| {
        2.0 * dot(&group_terms[x], &group_terms[y]) - 2.0 * h_means[x] * h_means[y]
    };
    let wrap = |k: isize| k.rem_euclid(ng as isize) as usize;
    let groups = (0..ng)
        .map(|mu| {
            let variance = dot(&group_terms[mu], &group_terms[mu]) - h_means[mu] * h_means[mu];
            let covariance = (-1isize..=1)
                .map(|d| {
                    let nu = mu as isize + d;
                    cov(wrap(nu - 1), wrap(nu))
                })
                .sum();
            GroupMoments {
                mean: bond_means[mu],
                variance,
                covariance,
            }
        })
        .collect();
    MomentSet {
        mean,
        variance: i2 - mean * mean,
        bond_means,
        bond_variances,
        groups,
    }
}

/// Moments of the energy distribution `w_a(E)` of a product state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDistribution {
    /// `<a|H^k|a>` for `k = 0..=4`.
    pub raw: [f64; 5],
    /// `<a|H|a> - E_a`.
    pub mean_offset: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub fn spectral_distribution(h: &SparseOperator, a: &[f64], e_a: f64) -> SpectralDistribution {
    let v1 = h.apply(a);
    let v2 = h.apply(&v1);
    let raw = [
        dot(a, a),
        dot(a, &v1),
        dot(&v1, &v1),
        dot(&v1, &v2),
        dot(&v2, &v2),
    ];
    let m = raw[1];
    let var = (raw[2] - m * m).max(0.0);
    let mu3 = raw[3] - 3.0 * m * raw[2] + 2.0 * m * m * m;
    let mu4 = raw[4] - 4.0 * m * raw[3] + 6.0 * m * m * raw[2] - 3.0 * m * m * m * m;
    let scale = raw[2].abs().max(1.0);
    let (skewness, excess_kurtosis) = if var <= 1e-14 * scale {
        (0.0, 0.0)
    } else {
        (mu3 / (var * var.sqrt()), mu4 / (var * var) - 3.0)
    };
    SpectralDistribution {
        raw,
        mean_offset: m - e_a,
        variance: var,
        skewness,
        excess_kurtosis,
    }
}
