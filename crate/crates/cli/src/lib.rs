//! Configuration-driven front end for `moprl`: TOML system definitions in,
//! JSON-lines result records (and CSV scans) out.

pub mod commands;
pub mod config;
pub mod record;
pub mod run;
