//! Experiment drivers and tabular output for the cyclewalk binary.

pub mod experiment;
pub mod output;
