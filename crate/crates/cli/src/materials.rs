//! Material tables: `name,debye_temperature_K,lattice_spacing_angstrom`,
//! optionally followed by a literature length scale and the temperature it
//! refers to (empty meaning the high-temperature limit).

use serde::Serialize;

use crate::error::{CliError, Result};

/// The table shipped with the tool.
pub const BUILTIN: &str = include_str!("../data/materials.csv");

const REQUIRED: [&str; 3] = ["name", "debye_temperature_K", "lattice_spacing_angstrom"];
const REFERENCE: [&str; 2] = ["reference_lmin_m", "reference_temperature_K"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reference {
    pub lmin_m: f64,
    /// `None` for the high-temperature limit.
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialRecord {
    pub name: String,
    pub debye_temperature_k: f64,
    pub lattice_spacing_angstrom: f64,
    pub reference: Option<Reference>,
}

impl MaterialRecord {
    pub fn lattice_spacing_m(&self) -> f64 {
        self.lattice_spacing_angstrom * 1e-10
    }
}

/// A row that could not be used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MaterialTable {
    pub records: Vec<MaterialRecord>,
    pub errors: Vec<RowError>,
}

/// Parses a table; bad rows are collected with their line numbers and the
/// remaining rows are still returned. A bad header is a hard error.
pub fn parse(text: &str) -> Result<MaterialTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::input(format!("materials header: {e}")))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    if names.len() < 3 || names[..3] != REQUIRED {
        return Err(CliError::input(format!(
            "materials header must start with {}",
            REQUIRED.join(",")
        )));
    }
    let with_reference = match &names[3..] {
        [] => false,
        rest if rest == REFERENCE => true,
        _ => {
            return Err(CliError::input(format!(
                "optional materials columns are {}",
                REFERENCE.join(",")
            )))
        }
    };
    let width = if with_reference { 5 } else { 3 };

    let mut table = MaterialTable::default();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                table.errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        match record(&row, width) {
            Ok(r) => table.records.push(r),
            Err(message) => table.errors.push(RowError { line, message }),
        }
    }
    Ok(table)
}

fn positive(field: &str, what: &str) -> std::result::Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("{what} '{field}' is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be positive, got {v}"))
    }
}

fn record(row: &csv::StringRecord, width: usize) -> std::result::Result<MaterialRecord, String> {
    if row.len() != width {
        return Err(format!("expected {width} fields, found {}", row.len()));
    }
    let name = row[0].to_string();
    if name.is_empty() {
        return Err("material name is empty".into());
    }
    let reference = if width == 5 && !row[3].is_empty() {
        Some(Reference {
            lmin_m: positive(&row[3], "reference length")?,
            temperature_k: if row[4].is_empty() {
                None
            } else {
                Some(positive(&row[4], "reference temperature")?)
            },
        })
    } else {
        None
    };
    Ok(MaterialRecord {
        name,
        debye_temperature_k: positive(&row[1], "Debye temperature")?,
        lattice_spacing_angstrom: positive(&row[2], "lattice spacing")?,
        reference,
    })
}
