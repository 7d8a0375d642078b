//! Synthetic cooling specimens rendered as DoFP mosaic sequences with
//! ground truth.

mod render;
mod spec;

pub use render::{alpha_timeline, render_mosaic_sequence, render_truth, SynthOutput, TruthFrame, TruthSequence};
pub use spec::{DefectRegion, Rect, SpecimenSpec, SynthConfig, SynthFile, ThermalParams};
