//! Command-line front-end for `otfs-core`: BER sweeps, modem equivalence
//! checks and the complexity audit.

pub mod cli;
pub mod commands;
pub mod config;

pub use cli::{run, Cli};
pub use commands::{Failure, Summary};
pub use config::RunConfig;
