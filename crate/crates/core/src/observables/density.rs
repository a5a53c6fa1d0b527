//! One- and two-particle position densities of created electrons.

use faer::Mat;
use rayon::prelude::*;

use crate::bogoliubov::{OverlapMatrix, Species};
use crate::{EnergySign, Error, FreeBasis, Grid, Result, C64};

/// `K_{ab}(x, y) = Σ_{p,p'} S_{pp'} ψ⁺_p(x)_a^* ψ⁺_{p'}(y)_b`, stored as a
/// `2N × 2N` matrix with component-major rows and columns.
#[derive(Debug, Clone)]
pub struct SpatialKernel {
    grid: Grid,
    kernel: Mat<C64>,
}

impl SpatialKernel {
    pub fn new(s: &OverlapMatrix, basis: &FreeBasis) -> Result<Self> {
        if s.species != Species::Electron {
            return Err(Error::Config("spatial densities are defined for electrons only".into()));
        }
        let n = basis.modes_per_sign();
        if s.dim() != n {
            return Err(Error::Ordering {
                expected: n,
                found: s.dim(),
            });
        }
        let phi = basis.field_matrix(EnergySign::Positive);
        let phi_conj = Mat::from_fn(phi.nrows(), phi.ncols(), |i, j| phi[(i, j)].conj());
        let left = &phi_conj * &s.matrix;
        let kernel = &left * phi.transpose();
        Ok(Self {
            grid: *basis.grid(),
            kernel,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `K_{ab}(x_i, x_j)`.
    pub fn entry(&self, a: usize, i: usize, b: usize, j: usize) -> C64 {
        let n = self.grid.len();
        self.kernel[(a * n + i, b * n + j)]
    }

    /// `ρ₁(x_i) = Σ_a K_aa(x_i, x_i)`.
    pub fn rho1(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| self.entry(0, i, 0, i).re + self.entry(1, i, 1, i).re)
            .collect()
    }

    /// `Σ_ab K_ab(x_i, x_j) K_ba(x_j, x_i) = Σ_ab |K_ab(x_i, x_j)|²`.
    fn exchange(&self, i: usize, j: usize) -> f64 {
        let mut total = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                total += (self.entry(a, i, b, j) * self.entry(b, j, a, i)).re;
            }
        }
        total
    }

    /// `ρ₂(x_i, x_j) = ½[ρ₁(x_i)ρ₁(x_j) − Σ_ab K_ab(x_i,x_j) K_ba(x_j,x_i)]`
    /// on every `stride`-th grid point.
    pub fn rho2(&self, stride: usize) -> Result<PairDensity> {
        if stride == 0 {
            return Err(Error::Config("decimation factor must be at least 1".into()));
        }
        let rho1 = self.rho1();
        let points: Vec<usize> = (0..self.grid.len()).step_by(stride).collect();
        let rows: Vec<Vec<f64>> = points
            .par_iter()
            .map(|&i| {
                points
                    .iter()
                    .map(|&j| 0.5 * (rho1[i] * rho1[j] - self.exchange(i, j)))
                    .collect()
            })
            .collect();
        let m = points.len();
        // Symmetrize exactly; the two triangles differ only by rounding.
        let values = Mat::from_fn(m, m, |i, j| 0.5 * (rows[i][j] + rows[j][i]));
        Ok(PairDensity {
            positions: points.iter().map(|&i| self.grid.position(i)).collect(),
            values,
        })
    }
}

/// `ρ₂` on a (possibly decimated) square of grid points.
#[derive(Debug, Clone)]
pub struct PairDensity {
    pub positions: Vec<f64>,
    pub values: Mat<f64>,
}

/// Electron densities `ρ₁` on the full grid and `ρ₂` on a decimated grid.
#[derive(Debug, Clone)]
pub struct DensityTable {
    pub species: Species,
    pub positions: Vec<f64>,
    pub rho1: Vec<f64>,
    pub rho2: PairDensity,
}

impl DensityTable {
    pub fn new(s: &OverlapMatrix, basis: &FreeBasis, stride: usize) -> Result<Self> {
        let kernel = SpatialKernel::new(s, basis)?;
        Ok(Self {
            species: s.species,
            positions: basis.grid().positions(),
            rho1: kernel.rho1(),
            rho2: kernel.rho2(stride)?,
        })
    }
}

/// `ρ₁` on the grid.
pub fn density_one(s: &OverlapMatrix, basis: &FreeBasis) -> Result<Vec<f64>> {
    Ok(SpatialKernel::new(s, basis)?.rho1())
}

/// `ρ₂` on every `stride`-th grid point.
pub fn density_two(s: &OverlapMatrix, basis: &FreeBasis, stride: usize) -> Result<PairDensity> {
    SpatialKernel::new(s, basis)?.rho2(stride)
}
