//! Companion crate around the `hypergreen` core: configuration
//! parsing, boundary-data families, mode runners, and the verification
//! suites shared between the `verify` subcommand and the acceptance
//! test target.

pub mod boundary;
pub mod config;
pub mod runner;
pub mod verify;
