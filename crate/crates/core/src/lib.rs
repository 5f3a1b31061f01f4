//! Weak signal cultivation: positions emerging risks on a two-axis field,
//! updates them from committee assessments, and keeps an auditable journal.

pub mod canonical;
pub mod cli;
pub mod engine;
pub mod model;
pub mod persistence;
pub mod service;
