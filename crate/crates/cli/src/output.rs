//! Fixed, locale-free formatting shared by all CSV and JSON outputs.

use std::io::Write;
use std::path::Path;

use loctemp_core::criteria::Binding;

use crate::error::{CliError, Result};

/// Sentinel for a group size that exceeds the configured cap.
pub const ABOVE_CAP: &str = "above_cap";

/// Scientific notation with 9 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn count(n: Option<u64>) -> String {
    match n {
        Some(n) => n.to_string(),
        None => ABOVE_CAP.to_string(),
    }
}

pub fn binding_name(b: Binding) -> &'static str {
    match b {
        Binding::Positivity => "positivity",
        Binding::Linearity => "linearity",
        Binding::Both => "both",
        Binding::AboveCap => ABOVE_CAP,
    }
}

/// Writes `bytes` to `path`, or to standard output without a path.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
