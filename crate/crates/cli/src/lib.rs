//! Instance file handling and report emission for the `opframe` binary.

pub mod error;
pub mod instance;
pub mod report;
