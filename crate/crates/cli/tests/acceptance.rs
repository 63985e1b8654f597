//! Acceptance run: one PASS/FAIL line per criterion with the measured
//! numbers and wall-clock time. Every tolerance is a named constant below.
//!
//! The process exits successfully once every criterion has been evaluated;
//! a FAIL line is a measured outcome, not a crash.

use std::time::{Duration, Instant};

use loctemp::commands::{material_table, ReferenceCheck};
use loctemp::materials;
use loctemp_core::chain::{build_chain, partition, HarmonicParams, IsingParams, ModelParams};
use loctemp_core::criteria::{evaluate_criteria, GroupModel, SearchConfig};
use loctemp_core::moments::interaction_moments;
use loctemp_core::numerics::fit_line;
use loctemp_core::oracle::{
    diagonal_vs_erfc, exact_gibbs, reduced_vs_canonical, HarmonicFockOracle, SpinChainOracle,
};
use loctemp_core::spectra::{
    dense_oscillator_group, dense_spin_group, sparse_eigensystem, DenseSpectrum, GroupLabel,
    GroupSpectrum, ProductState,
};
use loctemp_core::{minimal_group_size, AccuracyParams, GroupTreatment};

const ALPHA: f64 = 10.0;
const DELTA: f64 = 0.01;

// 1: high-temperature plateau.
const PLATEAU_T: f64 = 10.0;
const PLATEAU_TARGET: f64 = 2000.0;
const PLATEAU_TOLERANCE: f64 = 0.30;
const PLATEAU_BUDGET: Duration = Duration::from_secs(60);

// 2: low-temperature scaling.
const LOW_T_RANGE: (f64, f64) = (1e-3, 1e-2);
const LOW_T_POINTS: usize = 5;
const LOW_T_SLOPE: f64 = -3.0;
const LOW_T_SLOPE_TOLERANCE: f64 = 0.15;
const LOW_T_PREFACTOR_FACTOR: f64 = 2.0;
const LOW_T_BUDGET: Duration = Duration::from_secs(300);

// 3: silicon.
const SILICON_T_K: f64 = 1.0;
const SILICON_LENGTH_M: f64 = 0.10;
const SILICON_FACTOR: f64 = 2.0;

// 4: erfc description of the diagonal.
const ERFC_RINGS: [usize; 4] = [6, 8, 10, 12];
const ERFC_BETA: f64 = 0.5;
const ERFC_LIMIT: f64 = 0.05;
const ERFC_BUDGET: Duration = Duration::from_secs(600);

// 5: decay of the skewness.
const SKEW_RINGS: std::ops::RangeInclusive<usize> = 4..=12;
const SKEW_EXPONENT: f64 = -0.5;
const SKEW_TOLERANCE: f64 = 0.1;

// 7: locality in the dense oracle.
const ORACLE_SITES: usize = 12;
const COUPLING: f64 = 0.1;
const HOT_BETA: f64 = 0.01;
const HOT_DISTANCE: f64 = 1e-3;
const UNIT_BETA: f64 = 1.0;
const LARGEST_SIZE: usize = 4;

// 9: structural checks.
const STRUCTURE_TOLERANCE: f64 = 1e-12;
const EQUIVALENCE_TOLERANCE: f64 = 1e-9;
const EQUIVALENCE_SIZES: std::ops::RangeInclusive<usize> = 1..=5;
const EQUIVALENCE_GROUPS: usize = 3;
const STRUCTURE_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    detail: String,
}

fn accuracy() -> AccuracyParams {
    AccuracyParams::new(ALPHA, DELTA).unwrap()
}

/// Harmonic chain with `omega0 = 1`; `t` is `T / Theta`.
fn harmonic_nmin(t: f64) -> Option<u64> {
    let p = HarmonicParams::new(1.0);
    let beta = 1.0 / (t * p.debye_energy());
    minimal_group_size(
        &ModelParams::Harmonic(p),
        beta,
        accuracy(),
        &SearchConfig::default(),
    )
    .unwrap()
    .nmin
}

fn spin_oracle(groups: usize, size: usize) -> SpinChainOracle {
    let chain = build_chain(
        ModelParams::Ising(IsingParams::new(1.0, COUPLING)),
        groups,
        size,
    )
    .unwrap();
    SpinChainOracle::new(&chain).unwrap()
}

fn plateau() -> Outcome {
    let start = Instant::now();
    let n = harmonic_nmin(PLATEAU_T);
    let took = start.elapsed();
    let rel = n.map_or(f64::INFINITY, |n| {
        (n as f64 - PLATEAU_TARGET).abs() / PLATEAU_TARGET
    });
    Outcome {
        pass: rel <= PLATEAU_TOLERANCE && took < PLATEAU_BUDGET,
        detail: format!(
            "n_min(T = {PLATEAU_T} Theta) = {n:?}, {:.1}% from {PLATEAU_TARGET}, {took:.2?}",
            100.0 * rel
        ),
    }
}

fn low_temperature() -> Outcome {
    let start = Instant::now();
    let (lo, hi) = LOW_T_RANGE;
    let ts: Vec<f64> = (0..LOW_T_POINTS)
        .map(|k| lo * (hi / lo).powf(k as f64 / (LOW_T_POINTS - 1) as f64))
        .collect();
    let ns: Vec<Option<u64>> = ts.iter().map(|&t| harmonic_nmin(t)).collect();
    let took = start.elapsed();
    if ns.iter().any(Option::is_none) {
        return Outcome {
            pass: false,
            detail: format!("a grid point exceeded the cap: {ns:?}"),
        };
    }
    let ns: Vec<f64> = ns.into_iter().map(|n| n.unwrap() as f64).collect();
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let slope = fit_line(&xs, &ys).unwrap().slope;
    let expected = 3.0 * ALPHA / (2.0 * std::f64::consts::PI.powi(2));
    let prefactor = (ts
        .iter()
        .zip(&ns)
        .map(|(t, n)| (n * t.powi(3)).ln())
        .sum::<f64>()
        / ns.len() as f64)
        .exp();
    let ratio = prefactor / expected;
    Outcome {
        pass: (slope - LOW_T_SLOPE).abs() <= LOW_T_SLOPE_TOLERANCE
            && (1.0 / LOW_T_PREFACTOR_FACTOR..=LOW_T_PREFACTOR_FACTOR).contains(&ratio)
            && took < LOW_T_BUDGET,
        detail: format!(
            "slope {slope:.4}, prefactor {prefactor:.4} vs {expected:.4} (ratio {ratio:.4}), {took:.2?}"
        ),
    }
}

fn silicon() -> Outcome {
    let table = materials::parse(materials::BUILTIN).unwrap();
    let report = material_table(&table, SILICON_T_K, accuracy(), &SearchConfig::default()).unwrap();
    let si = report.rows.iter().find(|r| r.name == "silicon").unwrap();
    let l = si.lmin_m.unwrap_or(f64::INFINITY);
    let ratio = l / SILICON_LENGTH_M;
    Outcome {
        pass: (1.0 / SILICON_FACTOR..=SILICON_FACTOR).contains(&ratio),
        detail: format!(
            "l_min = {l:.4e} m (asymptotic {:.4e} m), ratio to {SILICON_LENGTH_M} m is {ratio:.3}",
            si.lmin_asymptotic_m
        ),
    }
}

fn erfc_convergence(largest: &(SpinChainOracle, DenseSpectrum)) -> Outcome {
    let start = Instant::now();
    let mut medians = Vec::new();
    let mut means = Vec::new();
    for &groups in &ERFC_RINGS {
        let owned;
        let (oracle, spectrum) = if groups == ORACLE_SITES {
            (&largest.0, &largest.1)
        } else {
            let o = spin_oracle(groups, 1);
            let s = o.eigensystem().unwrap();
            owned = (o, s);
            (&owned.0, &owned.1)
        };
        let gibbs = exact_gibbs(spectrum, ERFC_BETA).unwrap();
        let c = diagonal_vs_erfc(&gibbs, &oracle.product_basis().unwrap());
        medians.push(c.median_relative_error);
        means.push(c.relative_errors.iter().sum::<f64>() / c.relative_errors.len() as f64);
    }
    let took = start.elapsed();
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let last = *medians.last().unwrap();
    let listed: Vec<String> = medians.iter().map(|m| format!("{m:.3e}")).collect();
    let listed_means: Vec<String> = means.iter().map(|m| format!("{m:.3e}")).collect();
    Outcome {
        pass: decreasing && last < ERFC_LIMIT && took < ERFC_BUDGET,
        detail: format!(
            "median relative errors over N_G {ERFC_RINGS:?}: [{}], decreasing {decreasing}; means [{}], {took:.2?}",
            listed.join(", "),
            listed_means.join(", ")
        ),
    }
}

fn skewness_decay() -> Outcome {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for groups in SKEW_RINGS {
        // One group in four excited: a fixed pattern repeated along the ring.
        let labels: Vec<usize> = (0..groups).map(|mu| usize::from(mu % 4 == 3)).collect();
        let d = spin_oracle(groups, 1).clt_moments(&labels).unwrap();
        xs.push((groups as f64).ln());
        ys.push(d.skewness.abs().ln());
    }
    let slope = fit_line(&xs, &ys).unwrap().slope;
    Outcome {
        pass: (slope - SKEW_EXPONENT).abs() <= SKEW_TOLERANCE,
        detail: format!("fitted exponent {slope:.4} over N_G {SKEW_RINGS:?}"),
    }
}

fn intensivity() -> Outcome {
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    let models = [
        (
            ModelParams::Harmonic(HarmonicParams::new(1.0)),
            GroupTreatment::Debye,
        ),
        (
            ModelParams::Harmonic(HarmonicParams::new(1.0)),
            GroupTreatment::ExactModes,
        ),
        (
            ModelParams::Ising(IsingParams::new(1.0, COUPLING)),
            GroupTreatment::Debye,
        ),
        (
            ModelParams::Ising(IsingParams::new(1.0, 1.0)),
            GroupTreatment::Debye,
        ),
    ];
    for (params, treatment) in models {
        let largest_log = if treatment == GroupTreatment::ExactModes {
            7
        } else {
            24
        };
        for log_n in (0..=largest_log).step_by(2) {
            let model = GroupModel::new(params, 1u64 << log_n, treatment).unwrap();
            for k in -8..=8 {
                let beta = 10f64.powf(k as f64 / 4.0);
                for (alpha, delta) in [(5.0, 0.05), (ALPHA, DELTA), (20.0, 0.005)] {
                    let acc = AccuracyParams::new(alpha, delta).unwrap();
                    let r = evaluate_criteria(&model, beta, acc, 24).unwrap();
                    if r.pass() {
                        checked += 1;
                        let rel = (r.beta_loc().unwrap() - beta).abs() / beta;
                        worst = worst.max(rel / delta);
                        if rel > delta {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Outcome {
        pass: checked > 0 && violations == 0,
        detail: format!(
            "{checked} passing instances, {violations} with |beta_loc - beta|/beta > delta, worst ratio to delta {worst:.3}"
        ),
    }
}

fn locality(largest: &(SpinChainOracle, DenseSpectrum)) -> Outcome {
    let hot = exact_gibbs(&largest.1, HOT_BETA).unwrap();
    let hot_worst = (0..ORACLE_SITES)
        .map(|site| {
            reduced_vs_canonical(
                &hot,
                ORACLE_SITES,
                site,
                &largest.0.group_spectrum,
                HOT_BETA,
            )
            .unwrap()
            .distance
        })
        .fold(0.0, f64::max);
    let part_a = hot_worst < HOT_DISTANCE;

    let mut distances = Vec::new();
    for size in 1..=LARGEST_SIZE {
        let groups = ORACLE_SITES / size;
        let owned;
        let (oracle, spectrum) = if size == 1 {
            (&largest.0, &largest.1)
        } else {
            let o = spin_oracle(groups, size);
            let s = o.eigensystem().unwrap();
            owned = (o, s);
            (&owned.0, &owned.1)
        };
        let g = exact_gibbs(spectrum, UNIT_BETA).unwrap();
        let r =
            reduced_vs_canonical(&g, ORACLE_SITES, 0, &oracle.group_spectrum, UNIT_BETA).unwrap();
        distances.push(r.distance);
    }
    let part_b = distances.windows(2).all(|w| w[1] <= w[0]);
    let listed: Vec<String> = distances.iter().map(|d| format!("{d:.10e}")).collect();
    Outcome {
        pass: part_a && part_b,
        detail: format!(
            "(a) largest single-spin distance at T = 100 B: {hot_worst:.3e} [{}]; (b) distances for n = 1..{LARGEST_SIZE} at T = B: [{}] [{}]",
            if part_a { "ok" } else { "fails" },
            listed.join(", "),
            if part_b { "non-increasing" } else { "increases" }
        ),
    }
}

fn documented_discrepancy() -> Outcome {
    let table = materials::parse(materials::BUILTIN).unwrap();
    let report = material_table(&table, 1.0, accuracy(), &SearchConfig::default()).unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    for name in ["iron", "carbon"] {
        match report.rows.iter().find(|r| r.name == name) {
            Some(r)
                if r.reference_lmin_m.is_some()
                    && r.reference_check == ReferenceCheck::Deviates =>
            {
                notes.push(format!(
                    "{name}: stated {:.1e} m, computed {:.3e} m, flagged {}",
                    r.reference_lmin_m.unwrap(),
                    r.computed_at_reference_m.unwrap_or(f64::NAN),
                    r.reference_check.name()
                ))
            }
            Some(r) => {
                pass = false;
                notes.push(format!("{name}: flag {}", r.reference_check.name()));
            }
            None => {
                pass = false;
                notes.push(format!("{name}: missing"));
            }
        }
    }
    Outcome {
        pass,
        detail: notes.join("; "),
    }
}

fn structure() -> Outcome {
    let start = Instant::now();
    let mut worst_reconstruction = 0.0f64;
    let mut worst_asymmetry = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut lowest_eigenvalue = f64::INFINITY;
    let mut lowest_variance = f64::INFINITY;
    let mut worst_equivalence = 0.0f64;

    for (b, j) in [(1.0, 0.1), (0.7, -1.3), (2.0, 3.0)] {
        for (groups, size) in [(3, 1), (4, 2), (3, 3), (5, 2), (2, 4)] {
            let chain =
                build_chain(ModelParams::Ising(IsingParams::new(b, j)), groups, size).unwrap();
            let part = partition(&chain);
            let h = chain.dense_spin_hamiltonian().unwrap();
            let rebuilt = part
                .spin_free()
                .unwrap()
                .add(&part.spin_interaction().unwrap())
                .unwrap();
            worst_reconstruction =
                worst_reconstruction.max((rebuilt.to_dense().unwrap() - &h).abs().max());
            worst_asymmetry = worst_asymmetry.max((&h - h.transpose()).abs().max());
            let spectrum = sparse_eigensystem(&chain.spin_hamiltonian().unwrap()).unwrap();
            for beta in [0.0, 0.3, 2.0, 50.0] {
                let g = exact_gibbs(&spectrum, beta).unwrap();
                worst_trace = worst_trace.max((g.trace() - 1.0).abs());
                lowest_eigenvalue =
                    lowest_eigenvalue.min(g.density_matrix().symmetric_eigenvalues().min());
            }
        }
    }
    for (w, groups, size) in [(1.0, 3, 4), (0.4, 5, 3), (2.5, 2, 7)] {
        let chain =
            build_chain(ModelParams::Harmonic(HarmonicParams::new(w)), groups, size).unwrap();
        let part = partition(&chain);
        let v = chain.potential_matrix().unwrap();
        let rebuilt = part.quadratic_free().unwrap() + part.quadratic_interaction().unwrap();
        worst_reconstruction = worst_reconstruction.max((rebuilt - &v).abs().max());
        worst_asymmetry = worst_asymmetry.max((&v - v.transpose()).abs().max());
    }

    for size in EQUIVALENCE_SIZES {
        for coupling in [0.1, 1.0, 3.0] {
            let p = IsingParams::new(1.0, coupling);
            let chain = build_chain(ModelParams::Ising(p), EQUIVALENCE_GROUPS, size).unwrap();
            let part = partition(&chain);
            let oracle = SpinChainOracle::new(&chain).unwrap();
            let spectrum = dense_spin_group(p, size).unwrap();
            let gdim = 1usize << size;
            for k in 0..16usize {
                let labels: Vec<usize> = (0..EQUIVALENCE_GROUPS)
                    .map(|mu| (k * 7 + mu * 5) % gdim)
                    .collect();
                let exact = oracle.exact_moments(&labels).unwrap();
                let state = ProductState::new(
                    &spectrum,
                    labels.iter().map(|&l| GroupLabel::Eigen(l)).collect(),
                )
                .unwrap();
                let closed = interaction_moments(&state, &spectrum, &part).unwrap();
                lowest_variance = lowest_variance.min(closed.variance);
                worst_equivalence = worst_equivalence
                    .max((exact.variance - closed.variance).abs())
                    .max((exact.mean - closed.mean).abs());
            }
        }
        let p = HarmonicParams::new(1.3);
        let chain = build_chain(ModelParams::Harmonic(p), EQUIVALENCE_GROUPS, size).unwrap();
        let part = partition(&chain);
        let oracle = HarmonicFockOracle::new(&chain).unwrap();
        let spectrum = GroupSpectrum::Modes(dense_oscillator_group(p, size).unwrap());
        for occ in [
            vec![vec![0u32; size]; 3],
            vec![
                (0..size as u32).collect(),
                vec![2; size],
                (0..size as u32).rev().collect(),
            ],
            vec![vec![5; size], vec![0; size], vec![1; size]],
        ] {
            let exact = oracle.exact_moments(&occ).unwrap();
            let labels = occ
                .iter()
                .map(|o| GroupLabel::Occupations(o.iter().map(|&k| k as f64).collect()))
                .collect();
            let state = ProductState::new(&spectrum, labels).unwrap();
            let closed = interaction_moments(&state, &spectrum, &part).unwrap();
            lowest_variance = lowest_variance.min(closed.variance);
            let scale = exact.variance.abs().max(1.0);
            worst_equivalence =
                worst_equivalence.max((exact.variance - closed.variance).abs() / scale);
        }
    }
    let took = start.elapsed();
    let pass = worst_reconstruction <= STRUCTURE_TOLERANCE
        && worst_asymmetry <= STRUCTURE_TOLERANCE
        && worst_trace <= STRUCTURE_TOLERANCE
        && lowest_eigenvalue >= -STRUCTURE_TOLERANCE
        && lowest_variance >= -STRUCTURE_TOLERANCE
        && worst_equivalence <= EQUIVALENCE_TOLERANCE
        && took < STRUCTURE_BUDGET;
    Outcome {
        pass,
        detail: format!(
            "reconstruction {worst_reconstruction:.1e}, asymmetry {worst_asymmetry:.1e}, trace {worst_trace:.1e}, \
             lowest rho eigenvalue {lowest_eigenvalue:.1e}, lowest Delta^2 {lowest_variance:.1e}, \
             closed form vs dense {worst_equivalence:.1e} (n <= 5, N_G = 3), {took:.2?}"
        ),
    }
}

fn report(id: usize, title: &str, outcome: Outcome, tally: &mut (usize, usize)) {
    let verdict = if outcome.pass { "PASS" } else { "FAIL" };
    tally.1 += 1;
    if outcome.pass {
        tally.0 += 1;
    }
    println!("criterion {id} {verdict}: {title}: {}", outcome.detail);
}

fn main() {
    // `cargo test -- --list` and filters are not meaningful for this runner.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut tally = (0, 0);
    report(1, "high-temperature plateau", plateau(), &mut tally);
    report(2, "low-temperature scaling", low_temperature(), &mut tally);
    report(3, "silicon length", silicon(), &mut tally);
    let oracle = spin_oracle(ORACLE_SITES, 1);
    let spectrum = oracle.eigensystem().unwrap();
    let largest = (oracle, spectrum);
    report(
        4,
        "erfc description of the diagonal",
        erfc_convergence(&largest),
        &mut tally,
    );
    report(5, "skewness decay", skewness_decay(), &mut tally);
    report(6, "intensive local temperature", intensivity(), &mut tally);
    report(7, "oracle locality", locality(&largest), &mut tally);
    report(
        8,
        "documented discrepancy",
        documented_discrepancy(),
        &mut tally,
    );
    report(9, "structural invariants", structure(), &mut tally);
    println!("acceptance: {} of {} criteria pass", tally.0, tally.1);
}
