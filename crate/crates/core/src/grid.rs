//! Uniform periodic lattice in position space and its discrete Fourier
//! partner in momentum space.

use std::f64::consts::PI;

use crate::{Error, Result};

/// A uniform periodic grid `x_k = x_min + k·dx`, `k = 0..n_points`, with
/// `dx = (x_max - x_min) / n_points`.
///
/// The paired momentum lattice is `p_j = 2πj/L` for
/// `j = -n_points/2, …, n_points/2 - 1`. Throughout the crate momentum
/// arrays are stored in this ascending *lattice order*; the FFT order used by
/// the transforms is reached through [`Grid::fft_index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    /// Smallest accepted number of grid points.
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Config(format!(
                "grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < Self::MIN_POINTS || n_points % 2 != 0 {
            return Err(Error::Config(format!(
                "n_points must be even and at least {}, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// The lattice used for the energy spectra: 512 points on
    /// `[-34.25, 34.25)`.
    pub fn spectrum_default() -> Self {
        Self {
            x_min: -34.25,
            x_max: 34.25,
            n_points: 512,
        }
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Box length `L`.
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn position(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.position(k)).collect()
    }

    /// Momentum spacing `2π/L`.
    pub fn dp(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Integer wave number `j` of lattice index `i`.
    pub fn wave_number(&self, i: usize) -> i64 {
        i as i64 - (self.n_points / 2) as i64
    }

    /// Momentum of lattice index `i` (ascending order).
    pub fn momentum(&self, i: usize) -> f64 {
        self.wave_number(i) as f64 * self.dp()
    }

    pub fn momenta(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.momentum(i)).collect()
    }

    /// Position of lattice index `i` in the FFT output (`j mod n`).
    pub fn fft_index(&self, i: usize) -> usize {
        (i + self.n_points / 2) % self.n_points
    }

    /// Momenta in FFT order.
    pub fn fft_momenta(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_points];
        for i in 0..self.n_points {
            out[self.fft_index(i)] = self.momentum(i);
        }
        out
    }

    /// Stable short identifier of the grid parameters.
    pub fn fingerprint(&self) -> String {
        crate::fingerprint("grid", &[self.x_min, self.x_max, self.n_points as f64])
    }
}

/// Builds a validated [`Grid`].
pub fn make_grid(x_min: f64, x_max: f64, n_points: usize) -> Result<Grid> {
    Grid::new(x_min, x_max, n_points)
}
