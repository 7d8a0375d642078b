//! Defect-detection maps from image stacks: pulsed-phase DFT images and
//! principal-component images.

mod fft;
mod pca;
mod report;
mod stack;

pub use fft::{bin_frequency, default_bins, fft_phase, fft_phase_bins, PhaseResult, REFERENCE_FREQUENCIES_HZ};
pub use pca::{pca_components, PcaResult};
pub use report::{detection_report, DetectionMap, MapMetadata, MapMethod, ReportConfig};
pub use stack::{ImageStack, StackOrigin};
