//! Formats, parallel scans and the command line over `cft-nvm-core`.

pub mod cli;
pub mod format;
pub mod scan;
