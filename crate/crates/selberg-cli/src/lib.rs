//! Command implementations behind the `selberg` binary.

pub mod commands;
pub mod report;
pub mod suites;
