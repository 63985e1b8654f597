//! Conditions for a group of `n` sites to be locally canonical and the
//! search for the smallest such `n`.
//!
//! All groups are taken to be in the same canonical-typical state, so the
//! extensive quantities of the positivity condition are `N_G` times their
//! per-group values and the `N_G -> infinity` limit needs no finite `N_G`.
//! For a group energy `E` the two conditions read
//!
//! * positivity: `(E - E_g + eps - beta Delta^2) / Delta > 0`,
//! * linearity: `-eps + (beta/2) Delta^2 + (beta/6) tilde Delta^2` is a
//!   straight line `c1 E + c2` across the energy window with `|c1| <= delta`
//!   and largest deviation from the line at most `delta (E_max - E_min)`.
//!
//! The local inverse temperature is `beta (1 - c1)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::chain::ModelParams;
use crate::moments::BondKind;
use crate::numerics::{fit_line, LineFit};
use crate::spectra::{
    debye_group_modes, harmonic_group_modes, ising_group_closed_form, ising_group_free_fermion,
    ModeSpectrum,
};
use crate::{Error, Result};

/// Default ceiling of the group-size search.
pub const DEFAULT_CAP: u64 = 1_000_000_000_000;
/// Default number of energies sampled across the window.
pub const DEFAULT_SAMPLES: usize = 24;
/// Spin groups up to this size use the numeric pairing solve.
const NUMERIC_SPIN_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyParams {
    /// Width factor of the energy window, `> 1`.
    pub alpha: f64,
    /// Tolerated relative deviation, in `(0, 1)`.
    pub delta: f64,
}

impl AccuracyParams {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::domain("alpha must exceed 1"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::domain("delta must lie in (0, 1)"));
        }
        Ok(Self { alpha, delta })
    }
}

/// How oscillator groups are diagonalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupTreatment {
    /// Linear dispersion up to the Debye energy with long-wavelength end
    /// weights.
    #[default]
    Debye,
    /// Exact normal modes of the open group.
    ExactModes,
}

/// One isolated group of a given model and size with its spectrum.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub params: ModelParams,
    pub size: u64,
    pub spectrum: ModeSpectrum,
    pub bond: BondKind,
}

impl GroupModel {
    pub fn new(params: ModelParams, size: u64, treatment: GroupTreatment) -> Result<Self> {
        params.validate()?;
        let spectrum = match params {
            ModelParams::Harmonic(p) => match treatment {
                GroupTreatment::Debye => debye_group_modes(size, p.debye_energy(), p.omega0)?,
                GroupTreatment::ExactModes => harmonic_group_modes(size, p.omega0)?,
            },
            ModelParams::Ising(p) if size <= NUMERIC_SPIN_LIMIT => {
                ising_group_free_fermion(size as usize, p.field, p.coupling)?
            }
            ModelParams::Ising(p) => ising_group_closed_form(size, p.field, p.coupling)?,
        };
        Ok(Self {
            params,
            size,
            spectrum,
            bond: BondKind::of(&params),
        })
    }
}

/// Range of group energies over which the conditions must hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    pub e_min: f64,
    pub e_max: f64,
    /// Mean thermal excitation per group at the global temperature.
    pub mean_excitation: f64,
    /// Ground energy per group.
    pub ground: f64,
}

impl EnergyWindow {
    pub fn is_degenerate(&self) -> bool {
        !(self.e_max > self.e_min)
    }

    /// `count` equally spaced energies from `e_min` to `e_max`.
    pub fn samples(&self, count: usize) -> Vec<f64> {
        let count = count.max(2);
        (0..count)
            .map(|k| {
                if k + 1 == count {
                    self.e_max
                } else {
                    self.e_min + (self.e_max - self.e_min) * k as f64 / (count - 1) as f64
                }
            })
            .collect()
    }
}

pub fn energy_window(model: &GroupModel, beta: f64, alpha: f64) -> Result<EnergyWindow> {
    if !(beta >= 0.0) {
        return Err(Error::domain("beta must be non-negative"));
    }
    if !(alpha > 1.0) {
        return Err(Error::domain("alpha must exceed 1"));
    }
    let s = &model.spectrum;
    let mean_excitation = s.state_at(beta).excitation;
    let ground = s.ground_energy();
    let e_min = ground + mean_excitation / alpha;
    let e_max = if alpha * mean_excitation >= s.max_excitation() {
        s.max_energy()
    } else {
        ground + alpha * mean_excitation
    };
    Ok(EnergyWindow {
        e_min,
        e_max,
        mean_excitation,
        ground,
    })
}

/// Moments of the interaction at one window energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSample {
    pub energy: f64,
    pub excitation: f64,
    /// Bond mean `eps`.
    pub mean: f64,
    /// Bond variance `Delta^2`.
    pub variance: f64,
    /// Neighbour covariance `tilde Delta^2`.
    pub covariance: f64,
}

impl WindowSample {
    /// Left side of the linearity condition for a homogeneous state.
    pub fn linearity_lhs(&self, beta: f64) -> f64 {
        -self.mean + 0.5 * beta * self.variance + beta / 6.0 * self.covariance
    }

    /// Positivity margin; infinite without interaction.
    pub fn positivity_margin(&self, beta: f64) -> f64 {
        if self.variance <= 0.0 {
            return f64::INFINITY;
        }
        let delta = self.variance.sqrt();
        (self.excitation + self.mean - beta * self.variance) / delta
    }
}

pub fn window_samples(
    model: &GroupModel,
    window: &EnergyWindow,
    count: usize,
) -> Result<Vec<WindowSample>> {
    window
        .samples(count)
        .into_iter()
        .map(|e| {
            let excitation = (e - window.ground).max(0.0);
            let st = model.spectrum.typical_state(excitation)?;
            Ok(WindowSample {
                energy: e,
                excitation,
                mean: 0.0,
                variance: model.bond.variance(st.boundary, st.boundary),
                covariance: 0.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityCheck {
    /// Smallest margin over the window.
    pub margin: f64,
    pub pass: bool,
}

pub fn check_positivity(samples: &[WindowSample], beta: f64) -> PositivityCheck {
    let margin = samples
        .iter()
        .map(|s| s.positivity_margin(beta))
        .fold(f64::INFINITY, f64::min);
    PositivityCheck {
        margin,
        pass: margin > 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearityFit {
    pub c1: f64,
    pub c2: f64,
    pub residual: f64,
    /// `|c1| <= delta`.
    pub intensive: bool,
    pub pass: bool,
    pub beta_loc: f64,
}

/// Least-squares line through `(E, lhs)`; `None` for a degenerate window.
pub fn fit_linearity(energies: &[f64], lhs: &[f64], beta: f64, delta: f64) -> Option<LinearityFit> {
    let LineFit {
        slope,
        intercept,
        max_residual,
    } = fit_line(energies, lhs)?;
    let span = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - energies.iter().copied().fold(f64::INFINITY, f64::min);
    let intensive = slope.abs() <= delta;
    Some(LinearityFit {
        c1: slope,
        c2: intercept,
        residual: max_residual,
        intensive,
        pass: intensive && max_residual <= delta * span,
        beta_loc: beta * (1.0 - slope),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub size: u64,
    pub beta: f64,
    pub window: EnergyWindow,
    pub samples: Vec<WindowSample>,
    pub positivity: PositivityCheck,
    /// `None` when the window is degenerate and no fit was made.
    pub linearity: Option<LinearityFit>,
}

impl CriteriaReport {
    pub fn pass_positivity(&self) -> bool {
        self.positivity.pass
    }

    pub fn pass_linearity(&self) -> bool {
        self.linearity.is_some_and(|c| c.pass)
    }

    pub fn pass(&self) -> bool {
        self.pass_positivity() && self.pass_linearity()
    }

    pub fn beta_loc(&self) -> Option<f64> {
        self.linearity.map(|c| c.beta_loc)
    }
}

pub fn evaluate_criteria(
    model: &GroupModel,
    beta: f64,
    accuracy: AccuracyParams,
    sample_count: usize,
) -> Result<CriteriaReport> {
    if sample_count < 2 {
        return Err(Error::domain("at least two window samples are needed"));
    }
    let window = energy_window(model, beta, accuracy.alpha)?;
    let samples = if window.is_degenerate() {
        window_samples(model, &window, 1)?
    } else {
        window_samples(model, &window, sample_count)?
    };
    let positivity = check_positivity(&samples, beta);
    let linearity = if window.is_degenerate() {
        None
    } else {
        let e: Vec<f64> = samples.iter().map(|s| s.energy).collect();
        let lhs: Vec<f64> = samples.iter().map(|s| s.linearity_lhs(beta)).collect();
        fit_linearity(&e, &lhs, beta, accuracy.delta)
    };
    Ok(CriteriaReport {
        size: model.size,
        beta,
        window,
        samples,
        positivity,
        linearity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub cap: u64,
    pub samples: usize,
    pub treatment: GroupTreatment,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            samples: DEFAULT_SAMPLES,
            treatment: GroupTreatment::Debye,
        }
    }
}

/// Which condition sets the minimal group size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Positivity,
    Linearity,
    Both,
    AboveCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NminReport {
    /// Smallest size passing the positivity condition alone.
    pub nmin_positivity: Option<u64>,
    /// Smallest size passing the linearity condition alone.
    pub nmin_linearity: Option<u64>,
    /// Smallest size passing both; `None` above the cap.
    pub nmin: Option<u64>,
    pub binding: Binding,
    /// A size at or above `nmin` (`nmin`, `2 nmin`, `4 nmin` within the cap)
    /// failed again.
    pub non_monotone: bool,
    /// Report at `nmin`.
    pub report: Option<CriteriaReport>,
}

struct Prober<'a> {
    params: ModelParams,
    beta: f64,
    accuracy: AccuracyParams,
    config: &'a SearchConfig,
    cache: BTreeMap<u64, (bool, bool)>,
}

impl Prober<'_> {
    fn probe(&mut self, n: u64) -> Result<(bool, bool)> {
        if let Some(r) = self.cache.get(&n) {
            return Ok(*r);
        }
        let model = GroupModel::new(self.params, n, self.config.treatment)?;
        let rep = evaluate_criteria(&model, self.beta, self.accuracy, self.config.samples)?;
        let r = (rep.pass_positivity(), rep.pass_linearity());
        self.cache.insert(n, r);
        Ok(r)
    }

    /// Doubling then bisection for the first size where `pick` holds.
    fn search(&mut self, pick: fn((bool, bool)) -> bool) -> Result<Option<u64>> {
        let cap = self.config.cap;
        let mut hi = 1u64;
        let mut lo = 0u64;
        loop {
            if pick(self.probe(hi)?) {
                break;
            }
            if hi >= cap {
                return Ok(None);
            }
            lo = hi;
            hi = hi.saturating_mul(2).min(cap);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if pick(self.probe(mid)?) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(hi))
    }
}

pub fn minimal_group_size(
    params: &ModelParams,
    beta: f64,
    accuracy: AccuracyParams,
    config: &SearchConfig,
) -> Result<NminReport> {
    params.validate()?;
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::domain("beta must be positive and finite"));
    }
    if config.cap == 0 {
        return Err(Error::domain("the size cap must be at least 1"));
    }
    let mut prober = Prober {
        params: *params,
        beta,
        accuracy,
        config,
        cache: BTreeMap::new(),
    };
    let n_pos = prober.search(|r| r.0)?;
    let n_lin = prober.search(|r| r.1)?;
    let nmin = prober.search(|r| r.0 && r.1)?;
    let binding = match (n_pos, n_lin, nmin) {
        (_, _, None) => Binding::AboveCap,
        (Some(a), Some(b), _) if a == b => Binding::Both,
        (Some(a), Some(b), _) if a > b => Binding::Positivity,
        _ => Binding::Linearity,
    };
    let mut non_monotone = false;
    let mut report = None;
    if let Some(n) = nmin {
        for k in [2u64, 4] {
            if let Some(m) = n.checked_mul(k).filter(|&m| m <= config.cap) {
                let (a, b) = prober.probe(m)?;
                non_monotone |= !(a && b);
            }
        }
        let model = GroupModel::new(*params, n, config.treatment)?;
        report = Some(evaluate_criteria(&model, beta, accuracy, config.samples)?);
    }
    Ok(NminReport {
        nmin_positivity: n_pos,
        nmin_linearity: n_lin,
        nmin,
        binding,
        non_monotone,
        report,
    })
}

/// Closed-form estimate of the minimal size of an oscillator group:
/// `2 alpha / delta` above the Debye temperature and
/// `(3 alpha / (2 pi^2)) (Theta / T)^3` below.
pub fn asymptotic_group_size(t_over_debye: f64, alpha: f64, delta: f64) -> Result<f64> {
    if !(t_over_debye > 0.0 && alpha > 0.0 && delta > 0.0) {
        return Err(Error::domain(
            "temperature, alpha and delta must be positive",
        ));
    }
    Ok(if t_over_debye > 1.0 {
        2.0 * alpha / delta
    } else {
        3.0 * alpha / (2.0 * PI * PI) / (t_over_debye * t_over_debye * t_over_debye)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{HarmonicParams, IsingParams};

    fn acc() -> AccuracyParams {
        AccuracyParams::new(10.0, 0.01).unwrap()
    }

    fn ising(j: f64) -> ModelParams {
        ModelParams::Ising(IsingParams::new(1.0, j))
    }

    fn harmonic() -> ModelParams {
        ModelParams::Harmonic(HarmonicParams::new(1.0))
    }

    #[test]
    fn accuracy_domain() {
        assert!(AccuracyParams::new(1.0, 0.1).is_err());
        assert!(AccuracyParams::new(2.0, 1.0).is_err());
        assert!(AccuracyParams::new(2.0, 0.0).is_err());
    }

    #[test]
    fn window_collapses_at_zero_temperature() {
        let m = GroupModel::new(harmonic(), 10, GroupTreatment::Debye).unwrap();
        let w = energy_window(&m, f64::INFINITY, 10.0).unwrap();
        assert_eq!(w.mean_excitation, 0.0);
        assert_eq!(w.e_min, w.ground);
        assert!(w.is_degenerate());
        let r = evaluate_criteria(&m, f64::INFINITY, acc(), 24).unwrap();
        assert!(r.linearity.is_none());
    }

    #[test]
    fn single_spin_window_is_clipped_to_the_spectrum() {
        let m = GroupModel::new(ising(0.0), 1, GroupTreatment::Debye).unwrap();
        let beta = 1.0;
        let w = energy_window(&m, beta, 10.0).unwrap();
        let expect = 2.0 / ((2.0 * beta).exp() + 1.0);
        assert!((w.mean_excitation - expect).abs() < 1e-14);
        assert!((w.e_max - 1.0).abs() < 1e-14);
        assert!((w.ground + 1.0).abs() < 1e-14);
    }

    #[test]
    fn harmonic_equipartition_plateau() {
        // At T = 10 Theta the thermal energy plus zero point is within 2% of
        // n k_B T.
        let m = GroupModel::new(harmonic(), 100, GroupTreatment::ExactModes).unwrap();
        let t = 10.0 * 2.0;
        let w = energy_window(&m, 1.0 / t, 10.0).unwrap();
        let total = w.mean_excitation + w.ground;
        assert!((total / (100.0 * t) - 1.0).abs() < 0.02);
    }

    #[test]
    fn decoupled_chain_passes_trivially() {
        let m = GroupModel::new(ising(0.0), 3, GroupTreatment::Debye).unwrap();
        for beta in [0.1, 1.0] {
            let r = evaluate_criteria(&m, beta, acc(), 24).unwrap();
            assert_eq!(r.positivity.margin, f64::INFINITY);
            let c = r.linearity.unwrap();
            assert_eq!((c.c1, c.c2, c.residual), (0.0, 0.0, 0.0));
            assert!(r.pass());
            assert_eq!(c.beta_loc, beta);
        }
    }

    #[test]
    fn strong_coupling_at_low_temperature_fails_positivity() {
        let m = GroupModel::new(ising(10.0), 1, GroupTreatment::Debye).unwrap();
        let beta = 100.0;
        let r = evaluate_criteria(&m, beta, acc(), 24).unwrap();
        assert!(!r.pass_positivity());
        // Direct evaluation at the lower window edge.
        let s = r.samples[0];
        assert!(s.excitation + s.mean < beta * s.variance);
    }

    #[test]
    fn infinite_temperature_passes_positivity() {
        let m = GroupModel::new(ising(0.5), 2, GroupTreatment::Debye).unwrap();
        let r = evaluate_criteria(&m, 0.0, acc(), 24).unwrap();
        assert!(r.pass_positivity());
    }

    #[test]
    fn eight_spin_group_at_high_temperature_is_intensive() {
        let m = GroupModel::new(ising(0.1), 8, GroupTreatment::Debye).unwrap();
        let r = evaluate_criteria(&m, 0.1, acc(), 24).unwrap();
        let c = r.linearity.unwrap();
        assert!(r.pass() && c.c1.abs() < 0.01);
    }

    #[test]
    fn single_spins_suffice_at_very_high_temperature() {
        let r = minimal_group_size(&ising(0.1), 0.01, acc(), &SearchConfig::default()).unwrap();
        assert_eq!(r.nmin, Some(1));
    }

    #[test]
    fn linearity_flips_at_the_threshold() {
        let cfg = SearchConfig::default();
        let beta = 1.0 / 20.0;
        let r = minimal_group_size(&harmonic(), beta, acc(), &cfg).unwrap();
        let n = r.nmin.unwrap();
        let at = GroupModel::new(harmonic(), n, cfg.treatment).unwrap();
        let below = GroupModel::new(harmonic(), n - 1, cfg.treatment).unwrap();
        assert!(evaluate_criteria(&at, beta, acc(), 24).unwrap().pass());
        assert!(!evaluate_criteria(&below, beta, acc(), 24).unwrap().pass());
    }

    #[test]
    fn cap_is_reported_not_raised() {
        let cfg = SearchConfig {
            cap: 100,
            ..SearchConfig::default()
        };
        let r = minimal_group_size(&harmonic(), 1.0 / 20.0, acc(), &cfg).unwrap();
        assert_eq!(r.nmin, None);
        assert_eq!(r.binding, Binding::AboveCap);
    }

    #[test]
    fn asymptotic_branches() {
        assert_eq!(asymptotic_group_size(2.0, 10.0, 0.01).unwrap(), 2000.0);
        let low = asymptotic_group_size(0.1, 10.0, 0.01).unwrap();
        assert!((low - 1519.817754).abs() < 1e-5);
        let si = asymptotic_group_size(1.0 / 645.0, 10.0, 0.01).unwrap();
        assert!((si / 4.08e8 - 1.0).abs() < 0.01);
    }
}
