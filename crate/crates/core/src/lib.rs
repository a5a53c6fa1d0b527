//! Numerical core for simulating electron-positron multipair creation from
//! the vacuum by a localized, smoothly switched supercritical potential well
//! in one spatial dimension.
//!
//! The pipeline is:
//!
//! 1. [`grid`] and [`basis`]: a periodic lattice and the free Dirac
//!    eigenmodes on it, tagged by energy sign and momentum.
//! 2. [`hamiltonian`]: the potential well, its temporal ramp, the discretized
//!    Dirac Hamiltonian, its spectrum and the count of bound levels that have
//!    dived into the negative-energy continuum.
//! 3. [`propagator`]: unitary evolution of single fields and of whole basis
//!    sets through the switching schedule.
//! 4. [`bogoliubov`]: transition amplitudes between free and evolved modes and
//!    the Hermitian correlation matrices for electrons and positrons.
//! 5. [`observables`]: pair-number moments, n-pair probabilities, spatial
//!    densities and momentum spectra.
//! 6. [`analysis`]: vacuum-decay series, exponential fits and peak finding.
//!
//! All quantities are dimensionless in natural units, see [`units`].

pub mod analysis;
pub mod basis;
pub mod bogoliubov;
mod error;
pub mod grid;
pub mod hamiltonian;
pub mod observables;
pub mod propagator;
pub mod spinor;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use basis::{DiracRepresentation, EnergySign, FreeBasis, FreeMode};
pub use grid::Grid;
pub use spinor::SpinorField;

/// Hex fingerprint (first 16 hex digits of a SHA-256) over a sequence of `f64`s
/// and tags. Used to key persisted matrices to the grid and schedule that
/// produced them.
pub(crate) fn fingerprint(tag: &str, values: &[f64]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(tag.as_bytes());
    for v in values {
        hasher.update(v.to_bits().to_le_bytes());
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
