//! Dense checks of the product-basis description on a small spin chain.

use loctemp_core::moments::MIN_CLOSED_FORM_GROUPS;
use loctemp_core::numerics::fit_line;
use loctemp_core::operators::MAX_DENSE_SITES;
use loctemp_core::oracle::{
    diagonal_vs_erfc, exact_gibbs, off_diagonal_profile, reduced_vs_canonical, SpinChainOracle,
};
use loctemp_core::{build_chain, Error, IsingParams, ModelParams};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Largest group size used when comparing reduced states across sizes.
const LARGEST_COMPARED_SIZE: usize = 4;
/// Smallest ring used for the skewness sweep.
const FIRST_SWEEP_RING: usize = 4;
/// Every this many groups one group is excited in the sweep state.
const PATTERN_PERIOD: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub field: f64,
    pub coupling: f64,
    pub beta: f64,
    pub groups: usize,
    pub size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            field: 1.0,
            coupling: 0.1,
            beta: 0.5,
            groups: 12,
            size: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyProperty {
    pub name: &'static str,
    pub status: PropertyStatus,
    /// Measured quantity the status is based on.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl VerifyProperty {
    fn bound(name: &'static str, value: f64, threshold: f64, detail: String) -> Self {
        let status = if value <= threshold {
            PropertyStatus::Pass
        } else {
            PropertyStatus::Fail
        };
        Self {
            name,
            status,
            value,
            threshold,
            detail,
        }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Self {
            name,
            status: PropertyStatus::Skipped,
            value: f64::NAN,
            threshold: f64::NAN,
            detail: detail.to_string(),
        }
    }
}

/// Reduced-state distance for one group size on a ring with the same
/// number of sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeDistance {
    pub size: usize,
    pub groups: usize,
    pub distance: f64,
    pub best_beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkewnessPoint {
    pub groups: usize,
    pub skewness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub sites: usize,
    pub properties: Vec<VerifyProperty>,
    pub distances: Vec<SizeDistance>,
    pub skewness: Vec<SkewnessPoint>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.properties
            .iter()
            .all(|p| p.status != PropertyStatus::Fail)
    }

    pub fn property(&self, name: &str) -> Option<&VerifyProperty> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn oracle(cfg: &VerifyConfig, groups: usize, size: usize) -> Result<SpinChainOracle> {
    let chain = build_chain(
        ModelParams::Ising(IsingParams::new(cfg.field, cfg.coupling)),
        groups,
        size,
    )?;
    Ok(SpinChainOracle::new(&chain)?)
}

fn sweep_labels(groups: usize) -> Vec<usize> {
    (0..groups)
        .map(|mu| usize::from(mu % PATTERN_PERIOD == PATTERN_PERIOD - 1))
        .collect()
}

/// Runs every dense comparison. The site count is checked before anything
/// is allocated.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let sites = cfg.groups.saturating_mul(cfg.size);
    if sites > MAX_DENSE_SITES {
        return Err(Error::Capability {
            what: "dense eigensystem (sites)",
            requested: sites,
            limit: MAX_DENSE_SITES,
        }
        .into());
    }
    if cfg.size == 0 || cfg.groups < MIN_CLOSED_FORM_GROUPS {
        return Err(CliError::input(format!(
            "verification needs at least {MIN_CLOSED_FORM_GROUPS} groups of at least one spin"
        )));
    }
    if !(cfg.beta >= 0.0 && cfg.beta.is_finite()) {
        return Err(CliError::input("beta must be finite and non-negative"));
    }
    IsingParams::new(cfg.field, cfg.coupling).validate()?;

    let main = oracle(cfg, cfg.groups, cfg.size)?;
    let spectrum = main.eigensystem()?;
    let gibbs = exact_gibbs(&spectrum, cfg.beta)?;
    let basis = main.product_basis()?;
    let mut properties = Vec::new();

    let trace_error = (gibbs.trace() - 1.0).abs();
    let negative = gibbs.weights.iter().copied().fold(0.0f64, f64::min);
    properties.push(VerifyProperty::bound(
        "gibbs_trace",
        trace_error.max(-negative),
        1e-12,
        format!("|Tr rho - 1| = {trace_error:.3e}, smallest population {negative:.3e}"),
    ));

    let erfc = diagonal_vs_erfc(&gibbs, &basis);
    properties.push(VerifyProperty::bound(
        "erfc_diagonal_median",
        erfc.median_relative_error,
        0.05,
        "median relative error of ln<a|rho|a> against the erfc form".into(),
    ));
    properties.push(VerifyProperty::bound(
        "upper_edge_term_median",
        erfc.upper_term_median,
        1e-3,
        format!("largest single effect {:.3e}", erfc.upper_term_effect),
    ));

    let off = off_diagonal_profile(&gibbs, &basis);
    properties.push(VerifyProperty::bound(
        "off_diagonal_within_width",
        off.max_relative_below_one,
        1.0,
        "largest |rho_ab| / min(rho_aa, rho_bb) for separations below one width".into(),
    ));
    properties.push(VerifyProperty::bound(
        "off_diagonal_beyond_two_widths",
        10.0 * off.max_beyond_two,
        off.median_diagonal,
        format!(
            "10 x largest |rho_ab| beyond two widths against the median diagonal; coherence {:.3e}",
            off.max_coherence_beyond_two
        ),
    ));

    if cfg.beta == 0.0 {
        let uniform = 1.0 / gibbs.dim() as f64;
        let worst = basis
            .iter()
            .map(|e| (gibbs.diagonal(&e.vector) - uniform).abs())
            .fold(0.0, f64::max);
        properties.push(VerifyProperty::bound(
            "uniform_diagonal",
            worst / uniform,
            1e-10,
            "relative deviation of <a|rho|a> from 1/dim".into(),
        ));
    } else {
        properties.push(VerifyProperty::skipped(
            "uniform_diagonal",
            "only checked at beta = 0",
        ));
    }

    let mut skewness = Vec::new();
    for groups in FIRST_SWEEP_RING..=cfg.groups {
        let d = oracle(cfg, groups, cfg.size)?.clt_moments(&sweep_labels(groups))?;
        skewness.push(SkewnessPoint {
            groups,
            skewness: d.skewness,
        });
    }
    let usable: Vec<_> = skewness.iter().filter(|p| p.skewness.abs() > 0.0).collect();
    if usable.len() >= 3 {
        let xs: Vec<f64> = usable.iter().map(|p| (p.groups as f64).ln()).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.skewness.abs().ln()).collect();
        let slope = fit_line(&xs, &ys).map_or(f64::NAN, |f| f.slope);
        let mut p = VerifyProperty::bound(
            "skewness_decay_exponent",
            (slope + 0.5).abs(),
            0.1,
            format!("fitted exponent {slope:.4}, expected -0.5"),
        );
        if slope.is_nan() {
            p.status = PropertyStatus::Fail;
        }
        properties.push(p);
    } else {
        properties.push(VerifyProperty::skipped(
            "skewness_decay_exponent",
            "needs at least three rings with nonzero skewness",
        ));
    }

    let mut distances = Vec::new();
    for size in 1..=LARGEST_COMPARED_SIZE {
        if !sites.is_multiple_of(size) || sites / size < MIN_CLOSED_FORM_GROUPS {
            continue;
        }
        let groups = sites / size;
        let o = oracle(cfg, groups, size)?;
        let (s, g);
        let gibbs_here = if groups == cfg.groups && size == cfg.size {
            &gibbs
        } else {
            s = o.eigensystem()?;
            g = exact_gibbs(&s, cfg.beta)?;
            &g
        };
        let r = reduced_vs_canonical(gibbs_here, sites, 0, &o.group_spectrum, cfg.beta)?;
        distances.push(SizeDistance {
            size,
            groups,
            distance: r.distance,
            best_beta: r.best_beta,
        });
    }
    if distances.len() >= 2 {
        let worst_rise = distances
            .windows(2)
            .map(|w| w[1].distance - w[0].distance)
            .fold(f64::NEG_INFINITY, f64::max);
        properties.push(VerifyProperty::bound(
            "reduced_distance_nonincreasing",
            worst_rise,
            0.0,
            "largest increase of the trace distance to the canonical group state between successive group sizes".into(),
        ));
    } else {
        properties.push(VerifyProperty::skipped(
            "reduced_distance_nonincreasing",
            "the site count admits fewer than two group sizes",
        ));
    }
    Ok(VerifyReport {
        config: *cfg,
        sites,
        properties,
        distances,
        skewness,
    })
}
