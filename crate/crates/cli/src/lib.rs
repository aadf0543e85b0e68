//! Report types and command implementations behind the `sgl` binary, split
//! out as a library so integration tests can parse what the binary prints.

pub mod commands;
pub mod report;
