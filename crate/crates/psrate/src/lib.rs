//! Command-line front end, file formats and parallel drivers for
//! `psrate-core`.

pub mod cli;
pub mod drivers;
pub mod formats;
pub mod scenario;
