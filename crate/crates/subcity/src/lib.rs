//! File formats, parallel drivers and the `subcity` command line on top of
//! `subcity-core`.

#![forbid(unsafe_code)]

pub mod cli;
pub mod export;
pub mod ingest;
pub mod parallel;
