//! Std companion to `quintic-core`: spectral simulation of the quintic NLS,
//! JSON/CSV serialization and the `quintic` command-line front end.

pub mod cli;
pub mod config;
pub mod json;
pub mod nls_sim;
