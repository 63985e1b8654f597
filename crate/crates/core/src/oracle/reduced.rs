use alloc::vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, SymmetricEigen};

use super::GibbsState;
use crate::numerics::log_sum_exp;
use crate::spectra::DenseSpectrum;
use crate::{Error, Result};

/// Reduced state of the contiguous sites `first .. first + count` of an
/// `n_sites` spin chain.
pub fn reduced_state(
    gibbs: &GibbsState<'_>,
    n_sites: usize,
    first: usize,
    count: usize,
) -> Result<DMatrix<f64>> {
    if first + count > n_sites || count == 0 || gibbs.dim() != 1 << n_sites {
        return Err(Error::structure("site range does not fit the chain"));
    }
    let right = n_sites - first - count;
    let (nl, ng, nr) = (1usize << first, 1usize << count, 1usize << right);
    let u = &gibbs.spectrum.vectors;
    let mut rho = DMatrix::zeros(ng, ng);
    let mut slice = vec![0.0; ng];
    for (k, &w) in gibbs.weights.iter().enumerate() {
        if w < 1e-300 {
            continue;
        }
        for l in 0..nl {
            for r in 0..nr {
                for (g, s) in slice.iter_mut().enumerate() {
                    *s = u[((l * ng + g) * nr + r, k)];
                }
                for g in 0..ng {
                    let a = w * slice[g];
                    if a == 0.0 {
                        continue;
                    }
                    for h in 0..ng {
                        rho[(g, h)] += a * slice[h];
                    }
                }
            }
        }
    }
    Ok(rho)
}

/// `exp(-beta H_group) / Z` for an isolated group.
pub fn canonical_state(group: &DenseSpectrum, beta: f64) -> DMatrix<f64> {
    let logs: alloc::vec::Vec<f64> = group.energies.iter().map(|e| -beta * e).collect();
    let ln_z = log_sum_exp(&logs);
    let mut scaled = group.vectors.clone();
    for (k, l) in logs.iter().enumerate() {
        scaled.column_mut(k).scale_mut((l - ln_z).exp());
    }
    scaled * group.vectors.transpose()
}

/// `||a - b||_1 / 2` for symmetric matrices.
pub fn trace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let diff = a - b;
    let diff = (&diff + diff.transpose()) * 0.5;
    0.5 * SymmetricEigen::new(diff)
        .eigenvalues
        .iter()
        .map(|e| e.abs())
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedComparison {
    /// Distance to the canonical state at the requested `beta`.
    pub distance: f64,
    /// `beta` that minimizes the distance.
    pub best_beta: f64,
    pub best_distance: f64,
}

/// Distance between a group's reduced state and the canonical state of the
/// isolated group, plus the best-fitting local `beta`.
pub fn reduced_vs_canonical(
    gibbs: &GibbsState<'_>,
    n_sites: usize,
    first: usize,
    group: &DenseSpectrum,
    beta_test: f64,
) -> Result<ReducedComparison> {
    let count = group.dim().trailing_zeros() as usize;
    if 1usize << count != group.dim() {
        return Err(Error::structure("group spectrum is not a spin group"));
    }
    let reduced = reduced_state(gibbs, n_sites, first, count)?;
    let distance = trace_distance(&reduced, &canonical_state(group, beta_test));
    let f = |b: f64| trace_distance(&reduced, &canonical_state(group, b));
    let hi = 4.0 * beta_test.max(gibbs.beta).max(0.25);
    let (best_beta, best_distance) = golden_section(f, 0.0, hi, 1e-10);
    Ok(ReducedComparison {
        distance,
        best_beta,
        best_distance,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
