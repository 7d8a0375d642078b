//! Infrared polarization thermography for non-destructive testing.
//!
//! The crate is organised along the processing chain:
//!
//! * [`radiometry`] models the degree of linear polarization (DoLP) emitted by a
//!   heated rough surface as a function of the environment/object intensity
//!   ratio `alpha`, and fits that model to measured DoLP-vs-angle samples.
//! * [`dofp`] turns division-of-focal-plane mosaic frames into polarization
//!   channels, Stokes frames and (guided-filtered) DoLP images.
//! * [`detection`] computes pulsed-phase (DFT) and principal-component maps
//!   from an image stack.
//! * [`synth`] renders synthetic cooling specimens as mosaic sequences with
//!   ground truth.
//! * [`eval`] scores detection maps against label masks.
//! * [`io`] holds the on-disk bundle, float-map and sidecar formats.

pub mod detection;
pub mod dofp;
mod error;
pub mod eval;
mod image;
pub mod io;
pub mod radiometry;
pub mod synth;

pub use error::{Error, Result};
pub use image::{Image, LabelMask};

/// Version string recorded in bundle manifests.
pub const TOOL_VERSION: &str = concat!("polarndt ", env!("CARGO_PKG_VERSION"));
