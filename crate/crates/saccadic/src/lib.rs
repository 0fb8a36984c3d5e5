//! Saccade-contingent rendering toolkit.
//!
//! Builds on [`saccadic_core`] with Fourier-domain image filtering, the
//! frame-sequence renderer, the end-to-end pipeline, file formats, and the
//! `saccadic` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod fig3;
pub mod fmt;
pub mod io;
pub mod output;
pub mod pipeline;
pub mod sequence;
pub mod spectral;

pub use error::Error;
pub use saccadic_core as core;

pub type Result<T, E = Error> = std::result::Result<T, E>;
