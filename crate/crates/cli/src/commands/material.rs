use loctemp_core::criteria::{asymptotic_group_size, SearchConfig};
use loctemp_core::{minimal_group_size, AccuracyParams, HarmonicParams, ModelParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{finish, CliError, Result};
use crate::materials::{MaterialRecord, MaterialTable, RowError};
use crate::output::{binding_name, count, sci};

/// A literature value "for T much above Theta" is compared at this multiple
/// of the Debye temperature.
pub const HOT_FACTOR: f64 = 10.0;

/// Largest factor between a computed and a literature length that still
/// counts as agreement.
const AGREEMENT_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceCheck {
    /// No literature value in the table.
    None,
    Consistent,
    Deviates,
}

impl ReferenceCheck {
    pub fn name(&self) -> &'static str {
        match self {
            ReferenceCheck::None => "none",
            ReferenceCheck::Consistent => "consistent",
            ReferenceCheck::Deviates => "deviates",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialRow {
    pub name: String,
    pub debye_temperature_k: f64,
    pub lattice_spacing_angstrom: f64,
    pub temperature_k: f64,
    pub t_over_theta: f64,
    pub nmin_asymptotic: f64,
    pub lmin_asymptotic_m: f64,
    /// Full-condition group size; `None` above the cap.
    pub nmin: Option<u64>,
    pub lmin_m: Option<f64>,
    pub binding: &'static str,
    pub reference_lmin_m: Option<f64>,
    /// Temperature of the literature value; `None` for the hot limit.
    pub reference_temperature_k: Option<f64>,
    /// This tool's full-condition length at the literature temperature.
    pub computed_at_reference_m: Option<f64>,
    /// `computed_at_reference_m / reference_lmin_m`.
    pub reference_ratio: Option<f64>,
    pub reference_check: ReferenceCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialReport {
    pub alpha: f64,
    pub delta: f64,
    pub rows: Vec<MaterialRow>,
    pub errors: Vec<RowError>,
}

fn full_condition(
    theta: f64,
    t: f64,
    accuracy: AccuracyParams,
    search: &SearchConfig,
) -> Result<(Option<u64>, &'static str)> {
    let p = HarmonicParams::new(1.0);
    let beta = 1.0 / (t / theta * p.debye_energy());
    let r = minimal_group_size(&ModelParams::Harmonic(p), beta, accuracy, search)?;
    Ok((r.nmin, binding_name(r.binding)))
}

fn row(
    m: &MaterialRecord,
    t: f64,
    accuracy: AccuracyParams,
    search: &SearchConfig,
) -> Result<MaterialRow> {
    let theta = m.debye_temperature_k;
    let a0 = m.lattice_spacing_m();
    let reduced = t / theta;
    let nmin_asymptotic = asymptotic_group_size(reduced, accuracy.alpha, accuracy.delta)?;
    let (nmin, binding) = full_condition(theta, t, accuracy, search)?;
    let (mut computed, mut ratio, mut check) = (None, None, ReferenceCheck::None);
    if let Some(r) = &m.reference {
        let t_ref = r.temperature_k.unwrap_or(HOT_FACTOR * theta);
        let (n_ref, _) = full_condition(theta, t_ref, accuracy, search)?;
        if let Some(n) = n_ref {
            let l = n as f64 * a0;
            let q = l / r.lmin_m;
            computed = Some(l);
            ratio = Some(q);
            check = if (1.0 / AGREEMENT_FACTOR..=AGREEMENT_FACTOR).contains(&q) {
                ReferenceCheck::Consistent
            } else {
                ReferenceCheck::Deviates
            };
        } else {
            check = ReferenceCheck::Deviates;
        }
    }
    Ok(MaterialRow {
        name: m.name.clone(),
        debye_temperature_k: theta,
        lattice_spacing_angstrom: m.lattice_spacing_angstrom,
        temperature_k: t,
        t_over_theta: reduced,
        nmin_asymptotic,
        lmin_asymptotic_m: nmin_asymptotic * a0,
        nmin,
        lmin_m: nmin.map(|n| n as f64 * a0),
        binding,
        reference_lmin_m: m.reference.as_ref().map(|r| r.lmin_m),
        reference_temperature_k: m.reference.as_ref().and_then(|r| r.temperature_k),
        computed_at_reference_m: computed,
        reference_ratio: ratio,
        reference_check: check,
    })
}

/// Minimal lengths for every usable row of `table` at temperature `t`
/// (kelvin). Rows the table rejected are passed through as errors.
pub fn material_table(
    table: &MaterialTable,
    t: f64,
    accuracy: AccuracyParams,
    search: &SearchConfig,
) -> Result<MaterialReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::input("the temperature must be positive"));
    }
    let rows = table
        .records
        .par_iter()
        .map(|m| row(m, t, accuracy, search))
        .collect::<Result<Vec<_>>>()?;
    Ok(MaterialReport {
        alpha: accuracy.alpha,
        delta: accuracy.delta,
        rows,
        errors: table.errors.clone(),
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub fn render_material_csv(report: &MaterialReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "debye_temperature_K",
        "lattice_spacing_angstrom",
        "temperature_K",
        "T_over_theta",
        "nmin_asymptotic",
        "lmin_asymptotic_m",
        "nmin",
        "lmin_m",
        "binding_condition",
        "reference_lmin_m",
        "reference_temperature_K",
        "computed_at_reference_m",
        "reference_ratio",
        "reference_check",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.name.clone(),
            sci(r.debye_temperature_k),
            sci(r.lattice_spacing_angstrom),
            sci(r.temperature_k),
            sci(r.t_over_theta),
            sci(r.nmin_asymptotic),
            sci(r.lmin_asymptotic_m),
            count(r.nmin),
            opt(r.lmin_m),
            r.binding.to_string(),
            opt(r.reference_lmin_m),
            match (r.reference_lmin_m, r.reference_temperature_k) {
                (Some(_), None) => "hot".to_string(),
                (_, t) => opt(t),
            },
            opt(r.computed_at_reference_m),
            opt(r.reference_ratio),
            r.reference_check.name().to_string(),
        ])?;
    }
    finish(w)
}
