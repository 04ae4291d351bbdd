//! Batch verification of 3D Veronese webs driven by JSON job files.

pub mod checks;
pub mod config;
pub mod plot;
pub mod report;
pub mod run;
