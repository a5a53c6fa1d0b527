//! Two-component spinor fields sampled on a [`Grid`].

use crate::{Error, Grid, Result, C64};

/// A two-component complex field `(u₁(x), u₂(x))` on a grid.
///
/// Values are stored component-major: the first `n` entries hold `u₁` and the
/// next `n` hold `u₂`. The same layout is used for the rows of every dense
/// position-space operator in the crate. The `L²` norm is
/// `Σ_x dx (|u₁|² + |u₂|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    grid: Grid,
    values: Vec<C64>,
}

impl SpinorField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); 2 * grid.len()],
        }
    }

    /// Samples `f(x) -> [u₁, u₂]` at every grid point.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> [C64; 2]) -> Self {
        let n = grid.len();
        let mut values = vec![C64::new(0.0, 0.0); 2 * n];
        for k in 0..n {
            let [a, b] = f(grid.position(k));
            values[k] = a;
            values[n + k] = b;
        }
        Self { grid, values }
    }

    /// Wraps raw component-major values.
    pub fn from_values(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != 2 * grid.len() {
            return Err(Error::Ordering {
                expected: 2 * grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn upper(&self) -> &[C64] {
        &self.values[..self.grid.len()]
    }

    pub fn lower(&self) -> &[C64] {
        &self.values[self.grid.len()..]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.dx() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. A zero field is left untouched.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= norm);
        }
    }

    pub fn scale(&mut self, factor: C64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    /// Probability inside `|x| ≤ radius`.
    pub fn weight_within(&self, radius: f64) -> f64 {
        let n = self.grid.len();
        let dx = self.grid.dx();
        (0..n)
            .filter(|&k| self.grid.position(k).abs() <= radius)
            .map(|k| dx * (self.values[k].norm_sqr() + self.values[n + k].norm_sqr()))
            .sum()
    }
}

/// `⟨a|b⟩ = Σ_x dx (u₁*(x) v₁(x) + u₂*(x) v₂(x))`.
pub fn inner_product(a: &SpinorField, b: &SpinorField) -> Result<C64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let sum: C64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| u.conj() * v)
        .sum();
    Ok(sum * a.grid.dx())
}
