//! Scenario runner producing CSV datasets for the emitter observables.

pub mod output;
pub mod run;
pub mod scenario;
