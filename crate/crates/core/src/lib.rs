//! Punctuation-delimited segment statistics for plain-text corpora.
//!
//! The pipeline cleans a document ([`corpus`]), splits it by punctuation mark
//! class ([`segmentation`]), turns segments and words into series
//! ([`series`]), ranks them ([`ranking`]) and fits rank-size models
//! ([`fitting`]). [`analysis`] strings the stages together and [`output`]
//! writes the CSV, plot-data and JSON files.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod fitting;
pub mod output;
pub mod ranking;
pub mod segmentation;
pub mod series;

pub use error::{Error, Result};
pub use exec::Execution;
