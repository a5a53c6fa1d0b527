//! Post-processing: vacuum-decay series, exponential fits and peak finding.

mod decay;
mod peaks;

pub use decay::{decay_series, default_window, fit_exponential, DecaySeries, ExponentialFit, FitWindow};
pub use peaks::{find_peaks, find_peaks_2d, Peak, Peak2};
