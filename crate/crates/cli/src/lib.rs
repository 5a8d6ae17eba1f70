//! Command implementations behind the `lvm` binary.

pub mod commands;
pub mod dataset;
