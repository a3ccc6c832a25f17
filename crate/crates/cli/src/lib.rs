//! Library side of the `bpqm` command-line tool.

pub mod commands;
pub mod config;
