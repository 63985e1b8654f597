//! The four subcommands as library functions returning structured results,
//! plus their CSV/JSON renderings.

mod asymptotic;
mod curve;
mod material;
mod verify;

pub use asymptotic::{asymptotic, render_asymptotic_csv, AsymptoticRow};
pub use curve::{nmin_curve, render_curve_csv, CurveRow};
pub use material::{
    material_table, render_material_csv, MaterialReport, MaterialRow, ReferenceCheck, HOT_FACTOR,
};
pub use verify::{verify, PropertyStatus, VerifyConfig, VerifyProperty, VerifyReport};
