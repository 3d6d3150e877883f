//! File formats, CSV/SVG export, a thread-pool executor and the `reo`
//! command line on top of [`reo_core`].

pub mod cli;
pub mod error;
pub mod exec;
pub mod ingest;
pub mod svg;

pub use error::{RejectKind, ReoError, Result};
