use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::modes::{Mode, ModeSpectrum, Statistics};
use crate::{Error, Result};

/// Largest group solved through the numeric pairing matrix.
pub const MAX_PAIRING_SITES: usize = 512;

/// Quasiparticles of an open spin group from its `2n x 2n` pairing matrix.
///
/// With `n_s = (1 + sigma^z_s)/2` the group maps onto fermions with
/// on-site energy `-2B` and pairing `-J (c_s^+ c_{s+1}^+ + h.c.)`. The matrix
/// `[[A, P], [-P, -A]]` is real symmetric; each positive eigenvalue is a
/// quasiparticle energy and its eigenvector `(u, v)` fixes the end-site
/// magnetization through `|v_1|^2 - |u_1|^2`.
pub fn ising_group_free_fermion(n: usize, field: f64, coupling: f64) -> Result<ModeSpectrum> {
    if n == 0 {
        return Err(Error::domain("group size must be at least 1"));
    }
    if n > MAX_PAIRING_SITES {
        return Err(Error::Capability {
            what: "pairing matrix (sites)",
            requested: n,
            limit: MAX_PAIRING_SITES,
        });
    }
    let m = pairing_matrix(n, field, coupling);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let modes = order[..n]
        .iter()
        .map(|&k| {
            let col = eig.eigenvectors.column(k);
            let (u, v) = (col[0], col[n]);
            Mode::quasiparticle(eig.eigenvalues[k], v * v - u * u)
        })
        .collect();
    ModeSpectrum::from_modes(Statistics::Fermi, modes)
}

fn pairing_matrix(n: usize, field: f64, coupling: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for s in 0..n {
        m[(s, s)] = -2.0 * field;
        m[(n + s, n + s)] = 2.0 * field;
    }
    for s in 0..n.saturating_sub(1) {
        // P is antisymmetric with P[s][s+1] = -J.
        let p = -coupling;
        m[(s, n + s + 1)] = p;
        m[(s + 1, n + s)] = -p;
        m[(n + s, s + 1)] = -p;
        m[(n + s + 1, s)] = p;
    }
    m
}

/// All `2^n` many-body levels `E_g + sum of occupied mode energies`,
/// ascending.
pub fn many_body_levels(spectrum: &ModeSpectrum) -> Option<Vec<f64>> {
    let modes = spectrum.modes()?;
    if modes.len() > 20 {
        return None;
    }
    let mut levels = Vec::with_capacity(1 << modes.len());
    for mask in 0u32..(1 << modes.len()) {
        let e: f64 = modes
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, m)| m.energy)
            .sum();
        levels.push(spectrum.ground_energy() + e);
    }
    levels.sort_by(f64::total_cmp);
    Some(levels)
}
