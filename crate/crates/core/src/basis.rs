//! Free Dirac eigenmodes on the periodic lattice.
//!
//! In one dimension the Dirac equation acts on two-component fields and has
//! no spin. The free symbol is `h(p) = α p + β` with `β = σ₃` and `α` one of
//! the off-diagonal Pauli matrices (see [`DiracRepresentation`]). Each lattice
//! momentum carries one positive-energy mode `+√(p²+1)` and one
//! negative-energy mode `-√(p²+1)`, both plane waves `χ e^{ipx}/√L`.

use std::fmt;
use std::sync::Arc;

use faer::Mat;
use rustfft::{Fft, FftPlanner};

use crate::{units::free_energy, Error, Grid, Result, SpinorField, C64};

/// Choice of the 1D Dirac matrix `α`; `β = σ₃` in both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiracRepresentation {
    /// `α = σ₁`.
    #[default]
    Sigma1,
    /// `α = σ₂`.
    Sigma2,
}

impl DiracRepresentation {
    /// Coefficient `c` with `h(p)₁₂ = c·p` and `h(p)₂₁ = c*·p`.
    pub fn coupling(self) -> C64 {
        match self {
            DiracRepresentation::Sigma1 => C64::new(1.0, 0.0),
            DiracRepresentation::Sigma2 => C64::new(0.0, -1.0),
        }
    }

    /// The 2×2 free symbol `h(p)`.
    pub fn symbol(self, momentum: f64) -> [[C64; 2]; 2] {
        let c = self.coupling();
        [
            [C64::new(1.0, 0.0), c * momentum],
            [c.conj() * momentum, C64::new(-1.0, 0.0)],
        ]
    }

    /// Normalized eigenspinor of `h(p)` for the given energy sign.
    pub fn eigenspinor(self, momentum: f64, sign: EnergySign) -> [C64; 2] {
        let c = self.coupling();
        let e = free_energy(momentum);
        let norm = (2.0 * e * (e + 1.0)).sqrt();
        let big = C64::new((e + 1.0) / norm, 0.0);
        match sign {
            EnergySign::Positive => [big, c.conj() * (momentum / norm)],
            EnergySign::Negative => [-c * (momentum / norm), big],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub fn factor(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EnergySign::Positive => '+',
            EnergySign::Negative => '-',
        }
    }
}

/// One free eigenmode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeMode {
    pub sign: EnergySign,
    /// Index into the ascending momentum lattice.
    pub lattice_index: usize,
    pub momentum: f64,
    pub energy: f64,
    pub spinor: [C64; 2],
}

/// Unitary pair of transforms between component-major position values and
/// lattice-ordered momentum amplitudes.
///
/// Momentum amplitudes are normalized so that `Σ_j |φ(p_j)|² = Σ_x dx |ψ(x)|²`.
#[derive(Clone)]
pub(crate) struct FourierPair {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `e^{-i p_j x_min}·dx/√L`, lattice order.
    phase_out: Vec<C64>,
    /// `e^{+i p_j x_min}/√L`, lattice order.
    phase_in: Vec<C64>,
}

impl FourierPair {
    pub(crate) fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        let scale = grid.dx() / grid.length().sqrt();
        let phase_out = (0..n)
            .map(|i| C64::from_polar(scale, -grid.momentum(i) * grid.x_min()))
            .collect();
        let phase_in = (0..n)
            .map(|i| C64::from_polar(1.0 / grid.length().sqrt(), grid.momentum(i) * grid.x_min()))
            .collect();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            phase_out,
            phase_in,
        }
    }

    /// Position values (component-major) to momentum amplitudes
    /// `[φ₁, φ₂]` in lattice order.
    pub(crate) fn to_momentum(&self, values: &[C64]) -> [Vec<C64>; 2] {
        let n = self.grid.len();
        let mut out = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for (a, dst) in out.iter_mut().enumerate() {
            let mut buf = values[a * n..(a + 1) * n].to_vec();
            self.forward.process(&mut buf);
            dst.extend((0..n).map(|i| buf[self.grid.fft_index(i)] * self.phase_out[i]));
        }
        out
    }

    /// Inverse of [`FourierPair::to_momentum`].
    pub(crate) fn to_position(&self, amplitudes: &[Vec<C64>; 2]) -> Vec<C64> {
        let n = self.grid.len();
        let mut values = Vec::with_capacity(2 * n);
        for amp in amplitudes {
            let mut buf = vec![C64::new(0.0, 0.0); n];
            for i in 0..n {
                buf[self.grid.fft_index(i)] = amp[i] * self.phase_in[i];
            }
            self.inverse.process(&mut buf);
            values.extend(buf);
        }
        values
    }
}

/// The complete set of `2n` free modes on a grid.
///
/// Flat mode index is sign-major: positive-energy modes occupy `0..n` and
/// negative-energy modes `n..2n`, each block in ascending momentum.
#[derive(Clone)]
pub struct FreeBasis {
    grid: Grid,
    representation: DiracRepresentation,
    modes: Vec<FreeMode>,
    fourier: FourierPair,
}

impl fmt::Debug for FreeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeBasis")
            .field("grid", &self.grid)
            .field("representation", &self.representation)
            .field("modes", &self.modes.len())
            .finish()
    }
}

impl FreeBasis {
    pub fn new(grid: Grid) -> Self {
        Self::with_representation(grid, DiracRepresentation::default())
    }

    pub fn with_representation(grid: Grid, representation: DiracRepresentation) -> Self {
        let n = grid.len();
        let mut modes = Vec::with_capacity(2 * n);
        for sign in [EnergySign::Positive, EnergySign::Negative] {
            for i in 0..n {
                let p = grid.momentum(i);
                modes.push(FreeMode {
                    sign,
                    lattice_index: i,
                    momentum: p,
                    energy: sign.factor() * free_energy(p),
                    spinor: representation.eigenspinor(p, sign),
                });
            }
        }
        Self {
            grid,
            representation,
            modes,
            fourier: FourierPair::new(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn representation(&self) -> DiracRepresentation {
        self.representation
    }

    /// Total number of modes, `2n`.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Number of modes of each sign, `n`.
    pub fn modes_per_sign(&self) -> usize {
        self.grid.len()
    }

    pub fn modes(&self) -> &[FreeMode] {
        &self.modes
    }

    pub fn mode(&self, index: usize) -> &FreeMode {
        &self.modes[index]
    }

    pub fn index_of(&self, sign: EnergySign, lattice_index: usize) -> usize {
        match sign {
            EnergySign::Positive => lattice_index,
            EnergySign::Negative => self.grid.len() + lattice_index,
        }
    }

    /// Flat indices of all modes of one sign.
    pub fn indices(&self, sign: EnergySign) -> std::ops::Range<usize> {
        let n = self.grid.len();
        match sign {
            EnergySign::Positive => 0..n,
            EnergySign::Negative => n..2 * n,
        }
    }

    /// Position-space field of a mode, normalized to one.
    pub fn field(&self, index: usize) -> SpinorField {
        let mode = self.modes[index];
        let amp = 1.0 / self.grid.length().sqrt();
        let [s1, s2] = mode.spinor;
        SpinorField::from_fn(self.grid, |x| {
            let wave = C64::from_polar(amp, mode.momentum * x);
            [s1 * wave, s2 * wave]
        })
    }

    /// Expansion coefficients `⟨mode|ψ⟩` for all modes, in flat order.
    pub fn coefficients(&self, field: &SpinorField) -> Result<Vec<C64>> {
        if field.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self.coefficients_of_values(field.values()))
    }

    pub(crate) fn coefficients_of_values(&self, values: &[C64]) -> Vec<C64> {
        let n = self.grid.len();
        let [phi1, phi2] = self.fourier.to_momentum(values);
        let mut out = vec![C64::new(0.0, 0.0); 2 * n];
        for (idx, mode) in self.modes.iter().enumerate() {
            let i = mode.lattice_index;
            out[idx] = mode.spinor[0].conj() * phi1[i] + mode.spinor[1].conj() * phi2[i];
        }
        out
    }

    /// Field `Σ c_k |mode_k⟩` from flat-ordered coefficients.
    pub fn synthesize(&self, coefficients: &[C64]) -> Result<SpinorField> {
        let n = self.grid.len();
        if coefficients.len() != 2 * n {
            return Err(Error::Ordering {
                expected: 2 * n,
                found: coefficients.len(),
            });
        }
        let mut amp = [vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n]];
        for (mode, c) in self.modes.iter().zip(coefficients) {
            let i = mode.lattice_index;
            amp[0][i] += mode.spinor[0] * c;
            amp[1][i] += mode.spinor[1] * c;
        }
        SpinorField::from_values(self.grid, self.fourier.to_position(&amp))
    }

    /// Matrix whose columns are the position-space fields (component-major
    /// rows) of all modes of one sign, in lattice order.
    pub fn field_matrix(&self, sign: EnergySign) -> Mat<C64> {
        let n = self.grid.len();
        let amp = 1.0 / self.grid.length().sqrt();
        let offset = self.indices(sign).start;
        Mat::from_fn(2 * n, n, |row, col| {
            let mode = &self.modes[offset + col];
            let (a, k) = (row / n, row % n);
            mode.spinor[a] * C64::from_polar(amp, mode.momentum * self.grid.position(k))
        })
    }
}

/// Builds the free eigenbasis with the default representation.
pub fn build_free_basis(grid: Grid) -> FreeBasis {
    FreeBasis::new(grid)
}
