//! Definition files, the workspace they describe and task reports for the
//! `sesq` binary.

pub mod build;
pub mod format;
pub mod tasks;
