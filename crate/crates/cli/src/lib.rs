//! Experiment runner library behind the `qcert` command-line tool.

pub mod config;
pub mod experiments;
pub mod files;
pub mod output;
