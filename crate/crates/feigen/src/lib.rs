//! Orchestration layer over `feigen-core`: suite files, conjecture
//! harness, report serialization and diagram sweeps.

pub mod diagram;
pub mod harness;
pub mod report;
pub mod suite;
