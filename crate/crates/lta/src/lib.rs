//! File formats, corpus storage, reports and the command-line interface around
//! [`lta_core`].

pub mod cli;
pub mod corpus;
pub mod error;
pub mod format;
pub mod plot;
pub mod report;

pub use cli::run_from_args;
pub use error::{CliError, CliResult};
