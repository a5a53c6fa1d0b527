//! Unit convention.
//!
//! Everything in this crate is expressed in natural units with
//! `ħ = m_e = c = 1`:
//!
//! | quantity | unit |
//! |----------|------|
//! | length   | Compton wavelength `λ_C = ħ/(m_e c)` |
//! | time     | `ħ/(m_e c²)` |
//! | momentum | `m_e c` |
//! | energy   | `m_e c²` |
//!
//! No function accepts SI values. The electron charge `q = -e` only enters
//! through the potential energy `qφ`, which is specified directly as an
//! energy (see [`crate::hamiltonian::PotentialSpec`]).

/// Electron rest energy.
pub const REST_ENERGY: f64 = 1.0;

/// Relativistic energy `√(p² + 1)` of a free particle with momentum `p`.
pub fn free_energy(momentum: f64) -> f64 {
    momentum.hypot(REST_ENERGY)
}
