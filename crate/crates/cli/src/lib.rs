//! Configuration, check drivers and persistence formats behind the
//! `helical-ns` command-line tool. Kept as a library so integration tests
//! can exercise the exact code paths of the binary.

pub mod checks;
pub mod config;
pub mod error;
pub mod output;
pub mod snapshot;

pub use config::ConfigDocument;
pub use error::CliError;
