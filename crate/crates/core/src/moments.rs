//! First two moments of the inter-group interaction in product states.
//!
//! In a product of group eigenstates every bond has zero mean (a lone
//! boundary operator `q` or `sigma^+-` has vanishing expectation) and its
//! variance only involves the end-site observables of the two groups it
//! joins:
//!
//! * oscillators: `Var = m^2 omega0^4 <q_L^2> <q_R^2>`,
//! * spins: `Var = (J^2/2) (1 + <sigma^z_L> <sigma^z_R>)`.
//!
//! With at least three groups different bonds are uncorrelated, so the
//! total variance is the sum over bonds. With one or two groups the same
//! pair of groups is joined twice and the closed forms do not apply. These
//! identities are checked against brute-force evaluation in the oracle
//! tests.

use alloc::format;
use alloc::vec::Vec;

use crate::chain::{ModelParams, PartitionedHamiltonian};
use crate::operators::{Pauli, PauliString, SparseOperator};
use crate::spectra::{GroupLabel, GroupSpectrum, ModeSpectrum, ProductState, TypicalState};
use crate::{Error, Result};

/// Fewest groups for which every inter-group bond joins a distinct pair of
/// groups, so that different bonds are uncorrelated in product states.
pub const MIN_CLOSED_FORM_GROUPS: usize = 3;

/// Moments of one group's share of the interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupMoments {
    /// Mean of the bond leaving the group to the right.
    pub mean: f64,
    /// Variance of the group term including that bond.
    pub variance: f64,
    /// Covariance sum of neighbouring group terms around the group.
    pub covariance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    /// `<a|I|a>`.
    pub mean: f64,
    /// `<a|I^2|a> - <a|I|a>^2`.
    pub variance: f64,
    pub bond_means: Vec<f64>,
    pub bond_variances: Vec<f64>,
    pub groups: Vec<GroupMoments>,
}

/// How an inter-group bond turns end-site observables into a variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BondKind {
    Oscillator { omega0: f64 },
    Spin { coupling: f64 },
}

impl BondKind {
    pub fn of(params: &ModelParams) -> Self {
        match params {
            ModelParams::Harmonic(p) => BondKind::Oscillator { omega0: p.omega0 },
            ModelParams::Ising(p) => BondKind::Spin {
                coupling: p.coupling,
            },
        }
    }

    /// Bond variance from the end-site observables (unit-mass `<q^2>` for
    /// oscillators, `<sigma^z>` for spins) of the two joined groups.
    pub fn variance(&self, left: f64, right: f64) -> f64 {
        match *self {
            BondKind::Oscillator { omega0 } => {
                let w2 = omega0 * omega0;
                w2 * w2 * left * right
            }
            BondKind::Spin { coupling } => 0.5 * coupling * coupling * (1.0 + left * right),
        }
    }
}

/// End-site observables `(first site, last site)` of one group state.
fn end_observables(spectrum: &GroupSpectrum, label: &GroupLabel) -> Result<(f64, f64)> {
    match (spectrum, label) {
        (GroupSpectrum::Modes(m), GroupLabel::Occupations(occ)) => {
            let (_, b) = m.evaluate_occupations(occ)?;
            Ok((b, b))
        }
        (GroupSpectrum::ManyBody { sites, spectrum }, GroupLabel::Eigen(k)) => {
            if *k >= spectrum.dim() {
                return Err(Error::structure("eigenstate index out of range"));
            }
            let v = spectrum.vector(*k);
            let z = |s: usize| -> Result<f64> {
                let op =
                    SparseOperator::from_terms(*sites, &[PauliString::new(1.0, &[(s, Pauli::Z)])])?;
                Ok(op.expectation(&v))
            };
            Ok((z(0)?, z(sites - 1)?))
        }
        _ => Err(Error::structure(
            "state label does not fit the spectrum kind",
        )),
    }
}

/// `eps_a`, `Delta_a^2` and the per-group moments of a product of group
/// eigenstates (or canonical-typical occupations).
pub fn interaction_moments(
    state: &ProductState,
    spectrum: &GroupSpectrum,
    partition: &PartitionedHamiltonian,
) -> Result<MomentSet> {
    let ng = partition.n_groups();
    if state.n_groups() != ng {
        return Err(Error::structure(format!(
            "product state has {} groups, chain has {ng}",
            state.n_groups()
        )));
    }
    if ng < MIN_CLOSED_FORM_GROUPS {
        return Err(Error::structure(format!(
            "closed-form moments need at least {MIN_CLOSED_FORM_GROUPS} groups, chain has {ng}"
        )));
    }
    let kind = BondKind::of(&partition.chain.params);
    match (spectrum, kind) {
        (GroupSpectrum::ManyBody { .. }, BondKind::Oscillator { .. }) => {
            return Err(Error::structure(
                "many-body spectra are only built for spin groups",
            ))
        }
        (GroupSpectrum::ManyBody { sites, .. }, _) if *sites != partition.chain.group_size => {
            return Err(Error::structure(
                "group spectrum size differs from the chain's group size",
            ))
        }
        (GroupSpectrum::Modes(m), _) if m.n_modes() != partition.chain.group_size as u64 => {
            return Err(Error::structure(
                "group spectrum size differs from the chain's group size",
            ))
        }
        _ => {}
    }
    let ends = state
        .labels
        .iter()
        .map(|l| end_observables(spectrum, l))
        .collect::<Result<Vec<_>>>()?;
    let bond_variances: Vec<f64> = (0..ng)
        .map(|mu| kind.variance(ends[mu].1, ends[(mu + 1) % ng].0))
        .collect();
    let bond_means = alloc::vec![0.0; ng];
    let groups = bond_variances
        .iter()
        .map(|&v| GroupMoments {
            mean: 0.0,
            variance: v,
            covariance: 0.0,
        })
        .collect();
    Ok(MomentSet {
        mean: 0.0,
        variance: bond_variances.iter().sum(),
        bond_means,
        bond_variances,
        groups,
    })
}

/// `(eps_mu, Delta_mu^2, tilde Delta_mu^2)` for group `mu`.
pub fn group_moments(
    state: &ProductState,
    spectrum: &GroupSpectrum,
    partition: &PartitionedHamiltonian,
    mu: usize,
) -> Result<GroupMoments> {
    let set = interaction_moments(state, spectrum, partition)?;
    set.groups
        .get(mu)
        .copied()
        .ok_or_else(|| Error::structure("group index out of range"))
}

/// Canonical-typical group state with total group energy `energy`.
pub fn typical_state(spectrum: &ModeSpectrum, energy: f64) -> Result<TypicalState> {
    spectrum.typical_state(energy - spectrum.ground_energy())
}

/// Empirical stand-ins for the bounded group energy and the linear growth
/// of the interaction variance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport {
    /// Largest excitation energy per site of any group in the sample.
    pub max_energy_density: f64,
    /// Smallest `Delta_a^2 / N_G` in the sample.
    pub min_variance_per_group: f64,
    /// Some group exceeded the allowed excitation.
    pub energy_flag: bool,
    /// Some state had a variance per group below the floor.
    pub variance_flag: bool,
    /// The spectrum is unbounded, so the energy bound holds only because
    /// states are restricted to the energy window.
    pub bounded_by_window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessLimits {
    /// Largest excitation one group may carry (the window's upper edge
    /// above the group ground energy).
    pub max_group_excitation: f64,
    /// Smallest acceptable `Delta_a^2 / N_G`.
    pub min_variance_per_group: f64,
}

pub fn boundedness_diagnostics(
    spectrum: &GroupSpectrum,
    group_size: usize,
    samples: &[(ProductState, MomentSet)],
    limits: BoundednessLimits,
) -> Result<BoundednessReport> {
    if samples.is_empty() {
        return Err(Error::structure(
            "boundedness diagnostics need at least one state",
        ));
    }
    let (ground, top) = match spectrum {
        GroupSpectrum::ManyBody { spectrum, .. } => {
            (spectrum.ground_energy(), spectrum.top_energy())
        }
        GroupSpectrum::Modes(m) => (m.ground_energy(), m.max_energy()),
    };
    let bounded_by_window = !top.is_finite();
    let mut max_excitation = 0.0f64;
    let mut min_var = f64::INFINITY;
    for (state, moments) in samples {
        for e in &state.group_energies {
            max_excitation = max_excitation.max(e - ground);
        }
        min_var = min_var.min(moments.variance / state.n_groups() as f64);
    }
    Ok(BoundednessReport {
        max_energy_density: max_excitation / group_size as f64,
        min_variance_per_group: min_var,
        // A finite spectrum bounds every group a priori.
        energy_flag: bounded_by_window && max_excitation > limits.max_group_excitation,
        variance_flag: min_var < limits.min_variance_per_group,
        bounded_by_window,
    })
}
