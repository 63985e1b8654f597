use loctemp_core::criteria::asymptotic_group_size;
use serde::Serialize;

use crate::error::{finish, CliError, Result};
use crate::output::sci;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub t_over_theta: f64,
    pub alpha: f64,
    pub delta: f64,
    pub nmin: f64,
}

/// Closed-form `n_min` estimate; `theta` turns `t` into kelvin.
pub fn asymptotic(t: f64, theta: Option<f64>, alpha: f64, delta: f64) -> Result<AsymptoticRow> {
    let reduced = match theta {
        Some(th) if th > 0.0 => t / th,
        Some(_) => return Err(CliError::input("the Debye temperature must be positive")),
        None => t,
    };
    Ok(AsymptoticRow {
        t_over_theta: reduced,
        alpha,
        delta,
        nmin: asymptotic_group_size(reduced, alpha, delta)?,
    })
}

pub fn render_asymptotic_csv(row: &AsymptoticRow) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["T_over_theta", "alpha", "delta", "nmin_asymptotic"])?;
    w.write_record([
        sci(row.t_over_theta),
        sci(row.alpha),
        sci(row.delta),
        sci(row.nmin),
    ])?;
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_branches() {
        assert_eq!(asymptotic(2.0, None, 10.0, 0.01).unwrap().nmin, 2000.0);
        let low = asymptotic(0.1, None, 10.0, 0.01).unwrap().nmin;
        assert!((low / 1519.8177546 - 1.0).abs() < 1e-9);
        let si = asymptotic(1.0, Some(645.0), 10.0, 0.01).unwrap();
        assert!((si.nmin / 4.08e8 - 1.0).abs() < 0.01);
        assert!(asymptotic(-1.0, None, 10.0, 0.01).is_err());
    }
}
