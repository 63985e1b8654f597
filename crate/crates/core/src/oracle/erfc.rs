use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::DMatrix;

use super::{GibbsState, ProductEntry};
use crate::numerics::{ln_erfc, median};

/// `ln <a|rho|a>` predicted from the Gaussian energy distribution of `|a>`
/// (`mean` = `<a|H|a>`, `variance` = its spread); `upper` includes the term
/// from the top of the spectrum.
pub fn erfc_log_diagonal(
    beta: f64,
    ln_z: f64,
    e0: f64,
    e1: f64,
    mean: f64,
    variance: f64,
    upper: bool,
) -> f64 {
    if variance <= 0.0 {
        // Point mass at `mean`: the integral over [E0, E1] picks up the full
        // Boltzmann factor.
        return if mean >= e0 - 1e-12 && mean <= e1 + 1e-12 {
            -beta * mean - ln_z
        } else {
            f64::NEG_INFINITY
        };
    }
    let sd = variance.sqrt();
    let x0 = (e0 - mean + beta * variance) / (core::f64::consts::SQRT_2 * sd);
    let ln_first = ln_erfc(x0);
    let ln_bracket = if upper {
        let x1 = (e1 - mean + beta * variance) / (core::f64::consts::SQRT_2 * sd);
        let ratio = (ln_erfc(x1) - ln_first).exp();
        ln_first + libm::log1p(-ratio)
    } else {
        ln_first
    };
    -core::f64::consts::LN_2 - ln_z - beta * mean + 0.5 * beta * beta * variance + ln_bracket
}

/// Exact diagonal elements against the erfc prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ErfcComparison {
    pub exact_ln: Vec<f64>,
    pub predicted_ln: Vec<f64>,
    /// `|predicted - exact| / |exact|` per state.
    pub relative_errors: Vec<f64>,
    pub median_relative_error: f64,
    /// Largest change of a predicted log-diagonal when the upper-edge term
    /// is dropped.
    pub upper_term_effect: f64,
    /// Median of the same change over all states.
    pub upper_term_median: f64,
}

pub fn diagonal_vs_erfc(gibbs: &GibbsState<'_>, basis: &[ProductEntry]) -> ErfcComparison {
    let mut exact_ln = Vec::with_capacity(basis.len());
    let mut predicted_ln = Vec::with_capacity(basis.len());
    let mut relative_errors = Vec::with_capacity(basis.len());
    let mut upper_effects = Vec::with_capacity(basis.len());
    for entry in basis {
        let exact = gibbs.diagonal(&entry.vector).ln();
        let mean = entry.energy + entry.mean;
        let args = (
            gibbs.beta,
            gibbs.ln_z,
            gibbs.e0,
            gibbs.e1,
            mean,
            entry.variance,
        );
        let full = erfc_log_diagonal(args.0, args.1, args.2, args.3, args.4, args.5, true);
        let lower_only = erfc_log_diagonal(args.0, args.1, args.2, args.3, args.4, args.5, false);
        upper_effects.push((full - lower_only).abs());
        let rel = if exact == 0.0 {
            (full - exact).abs()
        } else {
            ((full - exact) / exact).abs()
        };
        exact_ln.push(exact);
        predicted_ln.push(full);
        relative_errors.push(rel);
    }
    let median_relative_error = median(&relative_errors).unwrap_or(0.0);
    ErfcComparison {
        exact_ln,
        predicted_ln,
        relative_errors,
        median_relative_error,
        upper_term_effect: upper_effects.iter().copied().fold(0.0, f64::max),
        upper_term_median: median(&upper_effects).unwrap_or(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagonalBin {
    /// Lower edge of `|E_a - E_b| / (Delta_a + Delta_b)`.
    pub ratio_from: f64,
    pub ratio_to: f64,
    pub pairs: usize,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagonalReport {
    pub bins: Vec<OffDiagonalBin>,
    pub median_diagonal: f64,
    /// Largest `|<a|rho|b>|` among pairs with ratio above 1.
    pub max_beyond_one: f64,
    /// Largest `|<a|rho|b>|` among pairs with ratio above 2.
    pub max_beyond_two: f64,
    /// Largest `|<a|rho|b>| / min(<a|rho|a>, <b|rho|b>)` for ratio below 1.
    pub max_relative_below_one: f64,
    /// Largest `|<a|rho|b>| / sqrt(<a|rho|a> <b|rho|b>)` for ratio above 2.
    pub max_coherence_beyond_two: f64,
}

const BIN_EDGES: [f64; 7] = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, f64::INFINITY];

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits the rows of `a` into groups that share no nonzero column, so that
/// `a a^T` is block diagonal. Returns each row's block, its position inside
/// the block, and per block its rows and the columns they use.
#[allow(clippy::type_complexity)]
fn row_blocks(a: &DMatrix<f64>) -> (Vec<usize>, Vec<usize>, Vec<(Vec<usize>, Vec<usize>)>) {
    let (m, d) = a.shape();
    let mut parent: Vec<usize> = (0..m).collect();
    for k in 0..d {
        let mut first = None;
        for r in 0..m {
            if a[(r, k)] != 0.0 {
                match first {
                    None => first = Some(r),
                    Some(f) => {
                        let (x, y) = (find(&mut parent, f), find(&mut parent, r));
                        if x != y {
                            parent[x.max(y)] = x.min(y);
                        }
                    }
                }
            }
        }
    }
    let mut block_of = vec![usize::MAX; m];
    let mut position = vec![0; m];
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut root_block = vec![usize::MAX; m];
    for r in 0..m {
        let root = find(&mut parent, r);
        if root_block[root] == usize::MAX {
            root_block[root] = blocks.len();
            blocks.push((Vec::new(), Vec::new()));
        }
        let b = root_block[root];
        block_of[r] = b;
        position[r] = blocks[b].0.len();
        blocks[b].0.push(r);
    }
    for k in 0..d {
        if let Some(r) = (0..m).find(|&r| a[(r, k)] != 0.0) {
            blocks[block_of[r]].1.push(k);
        }
    }
    (block_of, position, blocks)
}

/// Magnitudes of off-diagonal elements in the product basis, binned by the
/// energy separation in units of the combined widths.
pub fn off_diagonal_profile(gibbs: &GibbsState<'_>, basis: &[ProductEntry]) -> OffDiagonalReport {
    let d = gibbs.dim();
    let m = basis.len();
    // Rows of A are basis states expressed in the eigenbasis, scaled by
    // sqrt(weight); rho_ab = A_a . A_b.
    let u = &gibbs.spectrum.vectors;
    let mut a = DMatrix::zeros(m, d);
    for (r, entry) in basis.iter().enumerate() {
        for k in 0..d {
            let overlap: f64 = entry.vector.iter().map(|&(i, v)| u[(i, k)] * v).sum();
            a[(r, k)] = overlap * gibbs.weights[k].sqrt();
        }
    }
    let (block_of, position, blocks) = row_blocks(&a);
    let products: Vec<DMatrix<f64>> = blocks
        .iter()
        .map(|(rows, cols)| {
            let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]);
            &sub * sub.transpose()
        })
        .collect();
    let rho = |x: usize, y: usize| {
        if block_of[x] == block_of[y] {
            products[block_of[x]][(position[x], position[y])]
        } else {
            0.0
        }
    };
    let diag: Vec<f64> = (0..m).map(|r| rho(r, r)).collect();
    let mut bins: Vec<OffDiagonalBin> = BIN_EDGES
        .windows(2)
        .map(|w| OffDiagonalBin {
            ratio_from: w[0],
            ratio_to: w[1],
            pairs: 0,
            max_abs: 0.0,
        })
        .collect();
    let mut max_beyond_one = 0.0f64;
    let mut max_beyond_two = 0.0f64;
    let mut max_relative_below_one = 0.0f64;
    let mut max_coherence_beyond_two = 0.0f64;
    let widths: Vec<f64> = basis.iter().map(|e| e.variance.max(0.0).sqrt()).collect();
    for x in 0..m {
        for y in (x + 1)..m {
            let gap = (basis[x].energy - basis[y].energy).abs();
            let width = widths[x] + widths[y];
            let ratio = if width > 0.0 {
                gap / width
            } else if gap > 1e-12 {
                f64::INFINITY
            } else {
                0.0
            };
            let v = rho(x, y).abs();
            let slot = bins
                .iter_mut()
                .find(|b| {
                    ratio >= b.ratio_from && (ratio < b.ratio_to || b.ratio_to == f64::INFINITY)
                })
                .unwrap_or_else(|| unreachable!());
            slot.pairs += 1;
            slot.max_abs = slot.max_abs.max(v);
            if ratio > 1.0 {
                max_beyond_one = max_beyond_one.max(v);
            } else {
                let floor = diag[x].min(diag[y]);
                if floor > 0.0 {
                    max_relative_below_one = max_relative_below_one.max(v / floor);
                }
            }
            if ratio > 2.0 {
                max_beyond_two = max_beyond_two.max(v);
                let scale = (diag[x] * diag[y]).max(0.0).sqrt();
                if scale > 0.0 {
                    max_coherence_beyond_two = max_coherence_beyond_two.max(v / scale);
                }
            }
        }
    }
    OffDiagonalReport {
        bins,
        median_diagonal: median(&diag).unwrap_or(0.0),
        max_beyond_one,
        max_beyond_two,
        max_relative_below_one,
        max_coherence_beyond_two,
    }
}
