use loctemp_core::criteria::Binding;
use loctemp_core::minimal_group_size;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{finish, Result};
use crate::output::{binding_name, count, sci};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    /// Temperature in units of the model's scale.
    pub t_over_scale: f64,
    pub nmin_positivity: Option<u64>,
    pub nmin_linearity: Option<u64>,
    pub nmin: Option<u64>,
    pub binding: Binding,
}

/// `n_min` at every grid temperature, in grid order.
pub fn nmin_curve(cfg: &RunConfig) -> Result<Vec<CurveRow>> {
    let params = cfg.params();
    let search = cfg.search();
    cfg.grid
        .values()
        .par_iter()
        .map(|&t| {
            let reduced = cfg.reduced_temperature(t);
            let r = minimal_group_size(&params, cfg.beta(reduced), cfg.accuracy, &search)?;
            Ok(CurveRow {
                t_over_scale: reduced,
                nmin_positivity: r.nmin_positivity,
                nmin_linearity: r.nmin_linearity,
                nmin: r.nmin,
                binding: r.binding,
            })
        })
        .collect()
}

pub fn render_curve_csv(rows: &[CurveRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "T_over_scale",
        "nmin_cond16",
        "nmin_cond18",
        "nmin",
        "binding_condition",
    ])?;
    for r in rows {
        w.write_record([
            sci(r.t_over_scale),
            count(r.nmin_positivity),
            count(r.nmin_linearity),
            count(r.nmin),
            binding_name(r.binding).to_string(),
        ])?;
    }
    finish(w)
}
