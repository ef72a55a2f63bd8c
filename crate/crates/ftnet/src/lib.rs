//! Instance and solution files, run reports and the command-line front end
//! over `ftnet-core`.

pub mod cli;
pub mod format;
pub mod report;
