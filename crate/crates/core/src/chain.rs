//! Chain Hamiltonians and their split into isolated groups plus the bonds
//! that connect neighbouring groups.
//!
//! Both models live on a ring of `N = n_groups * group_size` sites. Site `i`
//! carries the on-site term `H_i` and the bond `I_{i,i+1}` couples it to its
//! right neighbour (indices modulo `N`). Group `mu` owns the sites
//! `mu * n .. (mu + 1) * n` and the `n - 1` bonds between them; the bond
//! leaving its last site is an inter-group bond.
//!
//! * Harmonic chain (`hbar = 1`): `H_i = p_i^2 / (2m) + m omega0^2 q_i^2`,
//!   `I_{i,i+1} = -m omega0^2 q_i q_{i+1}`. The potential quadratic form has
//!   diagonal `2 m omega0^2` and `-m omega0^2` per bond, so every isolated
//!   group is stable.
//! * Transverse-field spin chain: `H_i = -B sigma^z_i`,
//!   `I_{i,i+1} = -(J/2)(sigma^x_i sigma^x_{i+1} - sigma^y_i sigma^y_{i+1})`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::operators::{Pauli, PauliString, SparseOperator, MAX_DENSE_SITES};
use crate::{Error, Result};

/// Largest oscillator count for which dense quadratic forms are built.
pub const MAX_DENSE_OSCILLATORS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicParams {
    pub mass: f64,
    pub omega0: f64,
    /// Lattice spacing (length unit chosen by the caller).
    pub spacing: f64,
    /// Debye energy `k_B Theta`; `None` means the band edge `2 omega0`.
    pub debye: Option<f64>,
}

impl HarmonicParams {
    pub fn new(omega0: f64) -> Self {
        Self {
            mass: 1.0,
            omega0,
            spacing: 1.0,
            debye: None,
        }
    }

    pub fn debye_energy(&self) -> f64 {
        self.debye.unwrap_or(2.0 * self.omega0)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("omega0", self.omega0)?;
        positive("lattice spacing", self.spacing)?;
        if let Some(t) = self.debye {
            positive("Debye temperature", t)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingParams {
    pub field: f64,
    pub coupling: f64,
}

impl IsingParams {
    pub fn new(field: f64, coupling: f64) -> Self {
        Self { field, coupling }
    }

    pub fn validate(&self) -> Result<()> {
        positive("field B", self.field)?;
        if !self.coupling.is_finite() {
            return Err(Error::domain("coupling J must be finite"));
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Harmonic(HarmonicParams),
    Ising(IsingParams),
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Harmonic(p) => p.validate(),
            ModelParams::Ising(p) => p.validate(),
        }
    }
}

/// A periodic chain of `n_groups` groups with `group_size` sites each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub params: ModelParams,
    pub n_groups: usize,
    pub group_size: usize,
}

pub fn build_chain(params: ModelParams, n_groups: usize, group_size: usize) -> Result<ChainSpec> {
    params.validate()?;
    if n_groups == 0 || group_size == 0 {
        return Err(Error::domain(
            "group count and group size must be at least 1",
        ));
    }
    let sites = n_groups
        .checked_mul(group_size)
        .ok_or_else(|| Error::domain("site count overflows"))?;
    if sites < 2 {
        return Err(Error::domain("a chain with bonds needs at least 2 sites"));
    }
    Ok(ChainSpec {
        params,
        n_groups,
        group_size,
    })
}

/// `H` split into isolated groups and inter-group bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedHamiltonian {
    pub chain: ChainSpec,
    /// Site ranges of the isolated groups.
    pub groups: Vec<core::ops::Range<usize>>,
    /// Inter-group bonds as `(left site, right site)`; bond `mu` leaves group
    /// `mu` to the right.
    pub bonds: Vec<(usize, usize)>,
}

pub fn partition(chain: &ChainSpec) -> PartitionedHamiltonian {
    let n = chain.group_size;
    let sites = chain.sites();
    let groups = (0..chain.n_groups).map(|mu| mu * n..(mu + 1) * n).collect();
    let bonds = (0..chain.n_groups)
        .map(|mu| ((mu + 1) * n - 1, ((mu + 1) * n) % sites))
        .collect();
    PartitionedHamiltonian {
        chain: *chain,
        groups,
        bonds,
    }
}

impl ChainSpec {
    pub fn sites(&self) -> usize {
        self.n_groups * self.group_size
    }

    /// All bonds of the ring, `(i, i + 1 mod N)`.
    pub fn all_bonds(&self) -> Vec<(usize, usize)> {
        let n = self.sites();
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    fn ising(&self) -> Result<IsingParams> {
        match self.params {
            ModelParams::Ising(p) => Ok(p),
            ModelParams::Harmonic(_) => {
                Err(Error::structure("spin realization of a harmonic chain"))
            }
        }
    }

    fn harmonic(&self) -> Result<HarmonicParams> {
        match self.params {
            ModelParams::Harmonic(p) => Ok(p),
            ModelParams::Ising(_) => Err(Error::structure("quadratic form of a spin chain")),
        }
    }

    /// Full Hamiltonian as a sparse spin operator.
    pub fn spin_hamiltonian(&self) -> Result<SparseOperator> {
        let p = self.ising()?;
        let mut terms = spin_site_terms(p, 0..self.sites());
        for (l, r) in self.all_bonds() {
            terms.extend(spin_bond_terms(p, l, r));
        }
        SparseOperator::from_terms(self.sites(), &terms)
    }

    /// Dense spin Hamiltonian; capability error above the dense limit.
    pub fn dense_spin_hamiltonian(&self) -> Result<DMatrix<f64>> {
        if self.sites() > MAX_DENSE_SITES {
            return Err(Error::Capability {
                what: "dense spin chain (sites)",
                requested: self.sites(),
                limit: MAX_DENSE_SITES,
            });
        }
        self.spin_hamiltonian()?.to_dense()
    }

    /// Potential matrix `V` of `H = sum p^2/(2m) + q^T V q / 2`.
    pub fn potential_matrix(&self) -> Result<DMatrix<f64>> {
        let p = self.harmonic()?;
        check_oscillators(self.sites())?;
        let mut v = DMatrix::zeros(self.sites(), self.sites());
        for i in 0..self.sites() {
            add_site_potential(&mut v, p, i);
        }
        for (l, r) in self.all_bonds() {
            add_bond_potential(&mut v, p, l, r);
        }
        Ok(v)
    }
}

fn check_oscillators(n: usize) -> Result<()> {
    if n > MAX_DENSE_OSCILLATORS {
        return Err(Error::Capability {
            what: "dense oscillator chain (sites)",
            requested: n,
            limit: MAX_DENSE_OSCILLATORS,
        });
    }
    Ok(())
}

fn add_site_potential(v: &mut DMatrix<f64>, p: HarmonicParams, i: usize) {
    v[(i, i)] += 2.0 * p.mass * p.omega0 * p.omega0;
}

fn add_bond_potential(v: &mut DMatrix<f64>, p: HarmonicParams, l: usize, r: usize) {
    let k = p.mass * p.omega0 * p.omega0;
    v[(l, r)] -= k;
    v[(r, l)] -= k;
}

/// `-B sigma^z_i` for every site in `sites`.
pub fn spin_site_terms(p: IsingParams, sites: core::ops::Range<usize>) -> Vec<PauliString> {
    sites
        .map(|i| PauliString::new(-p.field, &[(i, Pauli::Z)]))
        .collect()
}

/// `-(J/2)(sigma^x_l sigma^x_r - sigma^y_l sigma^y_r)`.
pub fn spin_bond_terms(p: IsingParams, l: usize, r: usize) -> [PauliString; 2] {
    let h = 0.5 * p.coupling;
    [
        PauliString::new(-h, &[(l, Pauli::X), (r, Pauli::X)]),
        PauliString::new(h, &[(l, Pauli::Y), (r, Pauli::Y)]),
    ]
}

impl PartitionedHamiltonian {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    fn internal_bonds(&self, mu: usize) -> impl Iterator<Item = (usize, usize)> {
        let g = self.groups[mu].clone();
        (g.start..g.end - 1).map(|i| (i, i + 1))
    }

    /// Isolated group `mu` embedded in the full chain.
    pub fn spin_group(&self, mu: usize) -> Result<SparseOperator> {
        let p = self.chain.ising()?;
        let mut terms = spin_site_terms(p, self.groups[mu].clone());
        for (l, r) in self.internal_bonds(mu) {
            terms.extend(spin_bond_terms(p, l, r));
        }
        SparseOperator::from_terms(self.chain.sites(), &terms)
    }

    pub fn spin_bond(&self, b: usize) -> Result<SparseOperator> {
        let p = self.chain.ising()?;
        let (l, r) = self.bonds[b];
        SparseOperator::from_terms(self.chain.sites(), &spin_bond_terms(p, l, r))
    }

    /// `H_0`, the sum of isolated groups.
    pub fn spin_free(&self) -> Result<SparseOperator> {
        let ops = (0..self.n_groups())
            .map(|mu| self.spin_group(mu))
            .collect::<Result<Vec<_>>>()?;
        SparseOperator::sum(self.chain.sites(), &ops)
    }

    /// `I`, the sum of inter-group bonds.
    pub fn spin_interaction(&self) -> Result<SparseOperator> {
        let ops = (0..self.n_groups())
            .map(|b| self.spin_bond(b))
            .collect::<Result<Vec<_>>>()?;
        SparseOperator::sum(self.chain.sites(), &ops)
    }

    /// Group `mu` on its own `n` sites (site 0 = first site of the group).
    pub fn spin_isolated_group(&self) -> Result<SparseOperator> {
        isolated_spin_group(self.chain.ising()?, self.chain.group_size)
    }

    pub fn quadratic_group(&self, mu: usize) -> Result<DMatrix<f64>> {
        let p = self.chain.harmonic()?;
        check_oscillators(self.chain.sites())?;
        let mut v = DMatrix::zeros(self.chain.sites(), self.chain.sites());
        for i in self.groups[mu].clone() {
            add_site_potential(&mut v, p, i);
        }
        for (l, r) in self.internal_bonds(mu) {
            add_bond_potential(&mut v, p, l, r);
        }
        Ok(v)
    }

    pub fn quadratic_bond(&self, b: usize) -> Result<DMatrix<f64>> {
        let p = self.chain.harmonic()?;
        check_oscillators(self.chain.sites())?;
        let mut v = DMatrix::zeros(self.chain.sites(), self.chain.sites());
        let (l, r) = self.bonds[b];
        add_bond_potential(&mut v, p, l, r);
        Ok(v)
    }

    pub fn quadratic_free(&self) -> Result<DMatrix<f64>> {
        let mut acc = self.quadratic_group(0)?;
        for mu in 1..self.n_groups() {
            acc += self.quadratic_group(mu)?;
        }
        Ok(acc)
    }

    pub fn quadratic_interaction(&self) -> Result<DMatrix<f64>> {
        let mut acc = self.quadratic_bond(0)?;
        for b in 1..self.n_groups() {
            acc += self.quadratic_bond(b)?;
        }
        Ok(acc)
    }
}

/// Open spin group of `n` sites with `n - 1` internal bonds.
pub fn isolated_spin_group(p: IsingParams, n: usize) -> Result<SparseOperator> {
    let mut terms = spin_site_terms(p, 0..n);
    for i in 0..n.saturating_sub(1) {
        terms.extend(spin_bond_terms(p, i, i + 1));
    }
    SparseOperator::from_terms(n, &terms)
}

/// Potential matrix of an open oscillator group of `n` sites.
pub fn isolated_quadratic_group(p: HarmonicParams, n: usize) -> Result<DMatrix<f64>> {
    check_oscillators(n)?;
    let mut v = DMatrix::zeros(n, n);
    for i in 0..n {
        add_site_potential(&mut v, p, i);
    }
    for i in 0..n.saturating_sub(1) {
        add_bond_potential(&mut v, p, i, i + 1);
    }
    Ok(v)
}
