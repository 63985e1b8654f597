//! Command-line layer over `loctemp-core`: run configuration, material
//! tables, the subcommands and their CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod materials;
pub mod output;
