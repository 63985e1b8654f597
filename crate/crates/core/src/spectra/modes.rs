use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numerics::{bose, bose_energy, decreasing_root, fermi, GradedQuadrature};
use crate::{Error, Result};

/// Mode sums are carried out term by term up to this many modes; larger
/// groups switch to quadrature with endpoint corrections.
pub const DISCRETE_LIMIT: u64 = 10_000;

/// Exponent beyond which a Bose occupation is treated as zero.
const OCCUPATION_CUTOFF: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Bose,
    Fermi,
}

/// One normal mode or quasiparticle of an isolated group.
///
/// With occupation `m` the mode adds `zero_point + energy * m` to the group
/// energy and `boundary_ground + boundary_thermal * m` to the boundary
/// observable: `<q^2>` at an end site for oscillators, `<sigma^z>` at an end
/// site for spins. The groups are mirror symmetric, so both ends share the
/// same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub energy: f64,
    pub zero_point: f64,
    pub boundary_ground: f64,
    pub boundary_thermal: f64,
}

impl Mode {
    /// Oscillator of frequency `omega` with squared end-site amplitude
    /// `weight` (unit mass).
    pub fn oscillator(omega: f64, weight: f64) -> Self {
        Self {
            energy: omega,
            zero_point: 0.5 * omega,
            boundary_ground: weight / (2.0 * omega),
            boundary_thermal: weight / omega,
        }
    }

    /// Quasiparticle of energy `eps` whose ground-state contribution to the
    /// end-site magnetization is `ground`; occupying it reverses that.
    pub fn quasiparticle(eps: f64, ground: f64) -> Self {
        Self {
            energy: eps,
            zero_point: -0.5 * eps,
            boundary_ground: ground,
            boundary_thermal: -2.0 * ground,
        }
    }
}

/// Closed-form mode families, evaluated at a continuous mode coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeFamily {
    /// Exact normal modes of an open oscillator group:
    /// `omega = 2 omega0 sin(theta/2)`, weight `2 sin^2(theta) / (n+1)`,
    /// `theta = k pi / (n+1)`.
    Oscillators { omega0: f64 },
    /// Debye treatment: `omega_j = debye * j / n` with the long-wavelength
    /// end-site weight `2 (omega / omega0)^2 / (n+1)`.
    Debye { debye: f64, omega0: f64 },
    /// Quasiparticles of an open spin group:
    /// `eps = 2 sqrt(B^2 + J^2 cos^2 theta)`, `theta = k pi / (n+1)`, with
    /// end-site ground magnetization `2 sin^2(theta) / (n+1) * 2B / eps`.
    Spins { field: f64, coupling: f64 },
}

impl ModeFamily {
    pub fn statistics(&self) -> Statistics {
        match self {
            ModeFamily::Spins { .. } => Statistics::Fermi,
            _ => Statistics::Bose,
        }
    }

    /// Grid step `h` and interval length: modes sit at `x_k = k h`,
    /// `k = 1..=n`. Returns whether `x = length` is itself a mode.
    fn grid(&self, n: u64) -> (f64, f64, bool) {
        match self {
            ModeFamily::Debye { .. } => (1.0 / n as f64, 1.0, true),
            _ => (PI / (n as f64 + 1.0), PI, false),
        }
    }

    fn mode_at(&self, n: u64, x: f64) -> Mode {
        let norm = 2.0 / (n as f64 + 1.0);
        match *self {
            ModeFamily::Oscillators { omega0 } => {
                let omega = 2.0 * omega0 * (0.5 * x).sin();
                let s = x.sin();
                Mode::oscillator(omega, norm * s * s)
            }
            ModeFamily::Debye { debye, omega0 } => {
                let omega = debye * x;
                let r = omega / omega0;
                Mode::oscillator(omega, norm * r * r)
            }
            ModeFamily::Spins { field, coupling } => {
                let c = x.cos();
                let eps = 2.0 * (field * field + coupling * coupling * c * c).sqrt();
                let s = x.sin();
                Mode::quasiparticle(eps, norm * s * s * 2.0 * field / eps)
            }
        }
    }

    pub fn mode(&self, n: u64, k: u64) -> Mode {
        let (h, _, _) = self.grid(n);
        self.mode_at(n, k as f64 * h)
    }

    /// Mode coordinate at which the dispersion reaches `energy` (Bose
    /// families; clipped to the interval).
    fn coordinate_of(&self, energy: f64) -> f64 {
        match *self {
            ModeFamily::Oscillators { omega0 } => {
                let s = (energy / (2.0 * omega0)).min(1.0);
                2.0 * s.asin()
            }
            ModeFamily::Debye { debye, .. } => (energy / debye).min(1.0),
            ModeFamily::Spins { .. } => PI,
        }
    }
}

/// Group energy and boundary observable at one effective inverse
/// temperature of the group's own modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalState {
    /// Effective inverse temperature; `+inf` is the ground state, negative
    /// values occur above the middle of a bounded spectrum.
    pub beta_prime: f64,
    /// Energy above the group ground state.
    pub excitation: f64,
    /// Total group energy.
    pub energy: f64,
    /// End-site observable (`<q^2>` or `<sigma^z>`).
    pub boundary: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Table(Vec<Mode>),
    Family(ModeFamily),
}

/// Modes of one isolated group together with their ground-state sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    statistics: Statistics,
    n_modes: u64,
    source: Source,
    ground_energy: f64,
    boundary_ground: f64,
    max_excitation: f64,
    min_energy: f64,
    quadrature: GradedQuadrature,
}

impl ModeSpectrum {
    pub fn from_modes(statistics: Statistics, modes: Vec<Mode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::structure("a group needs at least one mode"));
        }
        if modes
            .iter()
            .any(|m| !(m.energy > 0.0) || !m.energy.is_finite())
        {
            return Err(Error::structure(
                "mode energies must be positive and finite",
            ));
        }
        let mut modes = modes;
        modes.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let ground_energy = modes.iter().map(|m| m.zero_point).sum();
        let boundary_ground = modes.iter().map(|m| m.boundary_ground).sum();
        let max_excitation = match statistics {
            Statistics::Bose => f64::INFINITY,
            Statistics::Fermi => modes.iter().map(|m| m.energy).sum(),
        };
        let min_energy = modes[0].energy;
        Ok(Self {
            statistics,
            n_modes: modes.len() as u64,
            source: Source::Table(modes),
            ground_energy,
            boundary_ground,
            max_excitation,
            min_energy,
            quadrature: GradedQuadrature::default(),
        })
    }

    /// Family spectrum for `n` modes; tabulated up to [`DISCRETE_LIMIT`].
    pub fn from_family(family: ModeFamily, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("group size must be at least 1"));
        }
        if n <= DISCRETE_LIMIT {
            let modes = (1..=n).map(|k| family.mode(n, k)).collect();
            return Self::from_modes(family.statistics(), modes);
        }
        let quadrature = GradedQuadrature::default();
        let ground = continuum_sum(&quadrature, &family, n, 0.0, None, |m| {
            [m.zero_point, m.boundary_ground]
        });
        let max_excitation = match family.statistics() {
            Statistics::Bose => f64::INFINITY,
            Statistics::Fermi => {
                continuum_sum(&quadrature, &family, n, 0.0, None, |m| [m.energy, 0.0])[0]
            }
        };
        let (h, len, _) = family.grid(n);
        let min_energy = (1..=n.min(3))
            .map(|k| family.mode_at(n, k as f64 * h).energy)
            .chain(core::iter::once(family.mode_at(n, len - h).energy))
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            statistics: family.statistics(),
            n_modes: n,
            source: Source::Family(family),
            ground_energy: ground[0],
            boundary_ground: ground[1],
            max_excitation,
            min_energy,
            quadrature,
        })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_modes(&self) -> u64 {
        self.n_modes
    }

    /// Tabulated modes, ascending in energy (`None` for continuum groups).
    pub fn modes(&self) -> Option<&[Mode]> {
        match &self.source {
            Source::Table(m) => Some(m),
            Source::Family(_) => None,
        }
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn boundary_ground(&self) -> f64 {
        self.boundary_ground
    }

    /// Largest excitation energy (`inf` for oscillators).
    pub fn max_excitation(&self) -> f64 {
        self.max_excitation
    }

    pub fn max_energy(&self) -> f64 {
        self.ground_energy + self.max_excitation
    }

    fn occupation(&self, beta_prime: f64, energy: f64) -> f64 {
        match self.statistics {
            Statistics::Bose => bose(beta_prime * energy),
            Statistics::Fermi => fermi(beta_prime * energy),
        }
    }

    /// Thermal parts at `beta_prime`: `(sum eps m, sum boundary_thermal m)`.
    pub fn thermal(&self, beta_prime: f64) -> (f64, f64) {
        if beta_prime == f64::INFINITY {
            return (0.0, 0.0);
        }
        let term = |m: &Mode| {
            let occ = self.occupation(beta_prime, m.energy);
            let e = match self.statistics {
                Statistics::Bose => bose_energy(beta_prime, m.energy),
                Statistics::Fermi => m.energy * occ,
            };
            [e, m.boundary_thermal * occ]
        };
        let out = match &self.source {
            Source::Table(modes) => {
                let mut acc = [0.0, 0.0];
                for m in modes {
                    if self.statistics == Statistics::Bose && beta_prime * m.energy > 700.0 {
                        break;
                    }
                    let t = term(m);
                    acc[0] += t[0];
                    acc[1] += t[1];
                }
                acc
            }
            Source::Family(family) => self.family_thermal(family, beta_prime, term),
        };
        (out[0], out[1])
    }

    fn family_thermal(
        &self,
        family: &ModeFamily,
        beta_prime: f64,
        term: impl Fn(&Mode) -> [f64; 2],
    ) -> [f64; 2] {
        let n = self.n_modes;
        match self.statistics {
            Statistics::Fermi => continuum_sum(&self.quadrature, family, n, 0.0, None, term),
            Statistics::Bose => {
                let (h, _, _) = family.grid(n);
                let x_cut = family.coordinate_of(OCCUPATION_CUTOFF / beta_prime);
                let k_cut = (x_cut / h).floor();
                if k_cut <= DISCRETE_LIMIT as f64 {
                    let mut acc = [0.0, 0.0];
                    for k in 1..=(k_cut as u64 + 1).min(n) {
                        let t = term(&family.mode_at(n, k as f64 * h));
                        acc[0] += t[0];
                        acc[1] += t[1];
                    }
                    acc
                } else {
                    let scale = family.coordinate_of(1.0 / beta_prime);
                    continuum_sum(&self.quadrature, family, n, scale, Some(x_cut), term)
                }
            }
        }
    }

    /// Group state at a given effective inverse temperature.
    pub fn state_at(&self, beta_prime: f64) -> TypicalState {
        let (excitation, boundary_thermal) = self.thermal(beta_prime);
        TypicalState {
            beta_prime,
            excitation,
            energy: self.ground_energy + excitation,
            boundary: self.boundary_ground + boundary_thermal,
        }
    }

    /// Canonical-typical state whose energy lies `excitation` above the
    /// group ground state.
    pub fn typical_state(&self, excitation: f64) -> Result<TypicalState> {
        let scale = self.ground_energy.abs().max(self.min_energy);
        let tol = 1e-13 * scale;
        if !(excitation >= -tol) || excitation > self.max_excitation + tol || excitation.is_nan() {
            return Err(Error::domain("target energy outside the group spectrum"));
        }
        if excitation <= 0.0 {
            return Ok(self.state_at(f64::INFINITY));
        }
        if excitation >= self.max_excitation {
            return Ok(self.state_at(f64::NEG_INFINITY));
        }
        let beta_prime = match self.statistics {
            Statistics::Bose => self.solve_bose(excitation),
            Statistics::Fermi => self.solve_fermi(excitation),
        };
        let mut state = self.state_at(beta_prime);
        state.excitation = excitation;
        state.energy = self.ground_energy + excitation;
        Ok(state)
    }

    fn solve_bose(&self, target: f64) -> f64 {
        // ln(excitation) against ln(beta') is close to a straight line.
        let ln_target = target.ln();
        let f = |t: f64| self.thermal(t.exp()).0.ln() - ln_target;
        let guess = (self.n_modes as f64 / target).ln();
        let (lo, hi) = expand_bracket(&f, guess, 1.0, 800.0);
        decreasing_root(f, lo, hi, 1e-15).exp()
    }

    fn solve_fermi(&self, target: f64) -> f64 {
        let half = 0.5 * self.max_excitation;
        let span = 1.0 / self.min_energy;
        if target <= half {
            let ln_target = target.ln();
            let f = |b: f64| self.thermal(b).0.ln() - ln_target;
            let (lo, hi) = expand_bracket(&f, span, span, 1e300);
            decreasing_root(f, lo, hi, 1e-15)
        } else {
            let ln_gap = (self.max_excitation - target).ln();
            let f = |b: f64| ln_gap - (self.max_excitation - self.thermal(b).0).ln();
            let (lo, hi) = expand_bracket(&f, -span, span, 1e300);
            decreasing_root(f, lo, hi, 1e-15)
        }
    }

    /// Occupation numbers of a tabulated spectrum at `beta_prime`.
    pub fn occupations(&self, beta_prime: f64) -> Option<Vec<f64>> {
        self.modes().map(|modes| {
            modes
                .iter()
                .map(|m| {
                    if beta_prime == f64::INFINITY {
                        0.0
                    } else if beta_prime == f64::NEG_INFINITY {
                        1.0
                    } else {
                        self.occupation(beta_prime, m.energy)
                    }
                })
                .collect()
        })
    }

    /// Energy and boundary observable for explicit occupations.
    pub fn evaluate_occupations(&self, occupations: &[f64]) -> Result<(f64, f64)> {
        let modes = self
            .modes()
            .ok_or_else(|| Error::structure("occupations need a tabulated spectrum"))?;
        if modes.len() != occupations.len() {
            return Err(Error::structure(
                "occupation vector does not match the mode count",
            ));
        }
        let mut energy = self.ground_energy;
        let mut boundary = self.boundary_ground;
        for (m, occ) in modes.iter().zip(occupations) {
            energy += m.energy * occ;
            boundary += m.boundary_thermal * occ;
        }
        Ok((energy, boundary))
    }
}

/// Widens `[lo, hi]` around `center` until `f(lo) >= 0 >= f(hi)`.
fn expand_bracket(f: &impl Fn(f64) -> f64, center: f64, step: f64, limit: f64) -> (f64, f64) {
    let mut lo = center - step;
    let mut hi = center + step;
    let mut width = step;
    while f(lo) < 0.0 && lo.abs() < limit {
        width *= 2.0;
        lo -= width;
    }
    width = step;
    while f(hi) > 0.0 && hi.abs() < limit {
        width *= 2.0;
        hi += width;
    }
    (lo, hi)
}

/// `sum_{k=1..n} g(k h)` by quadrature plus the leading endpoint
/// corrections. With `cut` the integrand is taken as negligible beyond it.
fn continuum_sum(
    quadrature: &GradedQuadrature,
    family: &ModeFamily,
    n: u64,
    scale: f64,
    cut: Option<f64>,
    g: impl Fn(&Mode) -> [f64; 2],
) -> [f64; 2] {
    let (h, len, right_is_mode) = family.grid(n);
    let upper = cut.map_or(len, |c| c.min(len));
    let eval = |x: f64| g(&family.mode_at(n, x));
    let mut out = [0.0; 2];
    for (c, slot) in out.iter_mut().enumerate() {
        let integral = quadrature.integrate(|x| eval(x)[c], 0.0, upper, scale);
        // The end point itself carries no mode; approach it from inside.
        let g0 = eval(1e-12 * h)[c];
        let mut total = integral / h - 0.5 * g0;
        if upper >= len {
            let gl = eval(len)[c];
            total += if right_is_mode { 0.5 * gl } else { -0.5 * gl };
        }
        *slot = total;
    }
    out
}
