//! Potential well, temporal switching profile and the discretized Dirac
//! Hamiltonian.

mod spectrum;

pub use spectrum::{
    count_supercritical, spectrum_sweep, supercritical_counts, track_gap_levels, GapTrajectory, SpectrumRow,
    SpectrumTable, SupercriticalCount, CLUSTER_WEIGHT, ENHANCED_LOCALIZATION, REFERENCE_LENGTH,
};

use std::f64::consts::PI;

use faer::{Mat, Side};
use rustfft::FftPlanner;

use crate::{DiracRepresentation, Error, Grid, Result, C64};

/// Smooth square well `qφ(x) = V₀ (S(x + D/2) − S(x − D/2))` built from the
/// Sauter steps `S(x) = ½(1 + tanh(x/W))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    /// Depth `V₀`; negative values attract electrons.
    pub depth: f64,
    /// Width `D`.
    pub width: f64,
    /// Edge extent `W`.
    pub edge: f64,
}

impl PotentialSpec {
    pub fn new(depth: f64, width: f64, edge: f64) -> Result<Self> {
        let spec = Self { depth, width, edge };
        spec.validate()?;
        Ok(spec)
    }

    /// `D = 3.2`, `W = 0.3` with the given depth.
    pub fn paper_well(depth: f64) -> Self {
        Self {
            depth,
            width: 3.2,
            edge: 0.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.edge > 0.0 && self.edge.is_finite()) {
            return Err(Error::Config(format!("edge W must be positive, got {}", self.edge)));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::Config(format!("width D must be positive, got {}", self.width)));
        }
        if !self.depth.is_finite() {
            return Err(Error::Config("depth V0 must be finite".into()));
        }
        Ok(())
    }

    pub fn with_depth(&self, depth: f64) -> Self {
        Self { depth, ..*self }
    }

    fn step(&self, x: f64) -> f64 {
        0.5 * (1.0 + (x / self.edge).tanh())
    }

    /// Unit-depth profile `S(x + D/2) − S(x − D/2)`, in `[0, 1]`.
    pub fn shape(&self, x: f64) -> f64 {
        let half = 0.5 * self.width;
        (self.step(x + half) - self.step(x - half)).clamp(0.0, 1.0)
    }

    pub fn profile(&self, x: f64) -> f64 {
        self.depth * self.shape(x)
    }

    /// Radius of the region used to decide whether a state is localized in
    /// the well: `D/2 + 3W`.
    pub fn localization_radius(&self) -> f64 {
        0.5 * self.width + 3.0 * self.edge
    }

    pub fn fingerprint(&self) -> String {
        crate::fingerprint("potential", &[self.depth, self.width, self.edge])
    }
}

/// Potential energy at `x`.
pub fn potential_profile(x: f64, spec: &PotentialSpec) -> f64 {
    spec.profile(x)
}

/// Switching profile `f(t)`: a `sin²` turn-on over `[-ΔT, 0]`, a plateau
/// `f = 1` on `[0, T]` and a `cos²` turn-off over `[T, T + ΔT]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampSpec {
    /// Turn-on and turn-off duration `ΔT`.
    pub ramp: f64,
    /// Plateau duration `T`.
    pub plateau: f64,
}

impl RampSpec {
    pub fn new(ramp: f64, plateau: f64) -> Result<Self> {
        let spec = Self { ramp, plateau };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ramp > 0.0 && self.ramp.is_finite()) {
            return Err(Error::Config(format!("ramp duration must be positive, got {}", self.ramp)));
        }
        if !(self.plateau >= 0.0 && self.plateau.is_finite()) {
            return Err(Error::Config(format!(
                "plateau duration must be non-negative, got {}",
                self.plateau
            )));
        }
        Ok(())
    }

    pub fn with_plateau(&self, plateau: f64) -> Self {
        Self { plateau, ..*self }
    }

    pub fn start(&self) -> f64 {
        -self.ramp
    }

    pub fn end(&self) -> f64 {
        self.plateau + self.ramp
    }

    /// Length of the whole window, `T + 2ΔT`.
    pub fn total(&self) -> f64 {
        self.plateau + 2.0 * self.ramp
    }

    pub fn profile(&self, t: f64) -> f64 {
        let (dt, t_end) = (self.ramp, self.plateau);
        if t < -dt || t > t_end + dt {
            0.0
        } else if t < 0.0 {
            (PI * (t - dt) / (2.0 * dt)).sin().powi(2)
        } else if t <= t_end {
            1.0
        } else {
            (PI * (t - t_end) / (2.0 * dt)).cos().powi(2)
        }
    }

    /// `∫_{-ΔT}^{t} f(s) ds`.
    fn cumulative(&self, t: f64) -> f64 {
        let (dt, t_end) = (self.ramp, self.plateau);
        let k = dt / (2.0 * PI);
        if t <= -dt {
            0.0
        } else if t <= 0.0 {
            0.5 * (t + dt) - k * (PI * (t - dt) / dt).sin()
        } else if t <= t_end {
            0.5 * dt + t
        } else if t <= t_end + dt {
            let s = t - t_end;
            0.5 * dt + t_end + 0.5 * s + k * (PI * s / dt).sin()
        } else {
            dt + t_end
        }
    }

    /// Exact `∫_{t0}^{t1} f(s) ds` (negative for `t1 < t0`).
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        // Ramp segments are integrated relative to their own start so the
        // result does not lose digits to the plateau offset.
        let dt = self.ramp;
        let t_end = self.plateau;
        if t0 >= t_end && t1 >= t_end && t_end > 0.0 {
            let shifted = RampSpec { ramp: dt, plateau: 0.0 };
            return shifted.cumulative(t1 - t_end) - shifted.cumulative(t0 - t_end);
        }
        self.cumulative(t1) - self.cumulative(t0)
    }

    pub fn fingerprint(&self) -> String {
        crate::fingerprint("ramp", &[self.ramp, self.plateau])
    }
}

/// Switching profile at time `t`.
pub fn ramp_profile(t: f64, spec: &RampSpec) -> f64 {
    spec.profile(t)
}

/// A dense Hermitian matrix acting on component-major spinor vectors.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: Mat<C64>,
}

impl HermitianOperator {
    /// Wraps `matrix` after checking `‖H − H†‖_max ≤ 1e-12·max(1, ‖H‖_max)`.
    pub fn new(matrix: Mat<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Config("operator must be square".into()));
        }
        let defect = hermiticity_defect(&matrix);
        let scale = matrix.norm_max().max(1.0);
        if defect > 1e-12 * scale {
            return Err(Error::Contract(format!("operator is not Hermitian: defect {defect:.3e}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Adds a real constant to the diagonal.
    pub fn shifted(&self, constant: f64) -> Self {
        let mut matrix = self.matrix.clone();
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += C64::new(constant, 0.0);
        }
        Self { matrix }
    }
}

/// `max |H_ij − conj(H_ji)|`.
pub fn hermiticity_defect(matrix: &Mat<C64>) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in j..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    worst
}

/// First column of the circulant spectral momentum operator:
/// `c(m) = (1/n) Σ_j p_j e^{2πi j m / n}`.
fn momentum_kernel(grid: &Grid) -> Vec<C64> {
    let n = grid.len();
    let mut buf: Vec<C64> = grid.fft_momenta().into_iter().map(|p| C64::new(p, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter_mut().for_each(|v| *v /= n as f64);
    buf
}

/// Dirac Hamiltonian `α p + β + scale·qφ(x)` in the default representation.
pub fn build_hamiltonian(grid: &Grid, spec: &PotentialSpec, scale: f64) -> HermitianOperator {
    build_hamiltonian_in(DiracRepresentation::default(), grid, spec, scale)
}

/// Dirac Hamiltonian with an explicit choice of `α`.
///
/// The kinetic term is applied spectrally: `p` is diagonal on the momentum
/// lattice, so its position-space matrix is circulant.
pub fn build_hamiltonian_in(
    representation: DiracRepresentation,
    grid: &Grid,
    spec: &PotentialSpec,
    scale: f64,
) -> HermitianOperator {
    let n = grid.len();
    let kernel = momentum_kernel(grid);
    let c = representation.coupling();
    let potential: Vec<f64> = grid.positions().iter().map(|&x| scale * spec.profile(x)).collect();
    let matrix = Mat::from_fn(2 * n, 2 * n, |row, col| {
        let (a, k) = (row / n, row % n);
        let (b, l) = (col / n, col % n);
        let p_kl = kernel[(k + n - l) % n];
        match (a, b) {
            (0, 0) | (1, 1) => {
                let mass = if a == 0 { 1.0 } else { -1.0 };
                if k == l {
                    C64::new(mass + potential[k], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            (0, 1) => c * p_kl,
            _ => c.conj() * p_kl,
        }
    });
    // The kernel is Hermitian up to FFT rounding; symmetrize exactly.
    let sym = Mat::from_fn(2 * n, 2 * n, |i, j| {
        if i >= j {
            matrix[(i, j)]
        } else {
            matrix[(j, i)].conj()
        }
    });
    HermitianOperator { matrix: sym }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Mat<C64>,
}

impl Eigensystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Probability of eigenvector `k` inside `|x| ≤ radius`.
    pub fn localization(&self, grid: &Grid, k: usize, radius: f64) -> f64 {
        let n = grid.len();
        let col = self.vectors.col_as_slice(k);
        (0..n)
            .filter(|&i| grid.position(i).abs() <= radius)
            .map(|i| col[i].norm_sqr() + col[n + i].norm_sqr())
            .sum()
    }

    pub fn localizations(&self, grid: &Grid, radius: f64) -> Vec<f64> {
        (0..self.dim()).map(|k| self.localization(grid, k, radius)).collect()
    }

    /// `Q diag(g(λ)) Q†`.
    pub fn function_of(&self, g: impl Fn(f64) -> C64) -> Mat<C64> {
        let weights: Vec<C64> = self.values.iter().map(|&l| g(l)).collect();
        let scaled = Mat::from_fn(self.dim(), self.dim(), |i, j| self.vectors[(i, j)] * weights[j]);
        &scaled * self.vectors.adjoint()
    }
}

/// Full Hermitian eigendecomposition.
pub fn eigenspectrum(operator: &HermitianOperator) -> Result<Eigensystem> {
    let evd = operator
        .matrix
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let values = (0..operator.dim()).map(|i| evd.S()[i].re).collect();
    Ok(Eigensystem {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(operator: &HermitianOperator) -> Result<Vec<f64>> {
    let values = operator
        .matrix
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::free_energy;

    fn reference_step(x: f64, w: f64) -> f64 {
        1.0 / (1.0 + (-2.0 * x / w).exp())
    }

    #[test]
    fn potential_profile_values() {
        let spec = PotentialSpec::paper_well(-3.6);
        // oracle: logistic form of the tanh step, evaluated independently
        let expected = -3.6 * (reference_step(1.6, 0.3) - reference_step(-1.6, 0.3));
        assert!((potential_profile(0.0, &spec) - expected).abs() < 1e-14);
        assert!((potential_profile(0.0, &spec) + 3.5998321783835423).abs() < 1e-12);
        assert!(potential_profile(40.0, &spec).abs() < 1e-40);
        assert!(potential_profile(-40.0, &spec).abs() < 1e-40);
        let wide = PotentialSpec::new(-2.0, 20.0, 0.1).unwrap();
        assert!((potential_profile(10.0, &wide) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn potential_validation() {
        assert!(PotentialSpec::new(-1.0, 3.2, 0.0).is_err());
        assert!(PotentialSpec::new(-1.0, -3.2, 0.3).is_err());
        assert!(PotentialSpec::new(f64::NAN, 3.2, 0.3).is_err());
    }

    #[test]
    fn ramp_endpoints() {
        let ramp = RampSpec::new(4.7, 20.0).unwrap();
        assert!(ramp_profile(-4.7, &ramp).abs() < 1e-15);
        assert!((ramp_profile(0.0, &ramp) - 1.0).abs() < 1e-15);
        assert!((ramp_profile(20.0, &ramp) - 1.0).abs() < 1e-15);
        assert!(ramp_profile(24.7, &ramp).abs() < 1e-15);
        assert!((ramp_profile(-2.35, &ramp) - 0.5).abs() < 1e-15);
        assert_eq!(ramp_profile(-5.0, &ramp), 0.0);
        assert_eq!(ramp_profile(25.0, &ramp), 0.0);
        assert!(RampSpec::new(0.0, 1.0).is_err());
        assert!(RampSpec::new(1.0, -1.0).is_err());
    }

    #[test]
    fn ramp_integral_matches_quadrature() {
        let ramp = RampSpec::new(4.7, 3.0).unwrap();
        let piece = |a: f64, b: f64| {
            let m = 2000;
            let h = (b - a) / m as f64;
            let mut s = ramp.profile(a) + ramp.profile(b);
            for i in 1..m {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * ramp.profile(a + i as f64 * h);
            }
            s * h / 3.0
        };
        // the profile's second derivative jumps at the breakpoints
        let simpson = |a: f64, b: f64| {
            let mut cuts = vec![a];
            cuts.extend([-4.7, 0.0, 3.0, 7.7].into_iter().filter(|&c| c > a && c < b));
            cuts.push(b);
            cuts.windows(2).map(|w| piece(w[0], w[1])).sum::<f64>()
        };
        for &(a, b) in &[(-4.7, 0.0), (-3.0, -1.0), (0.0, 3.0), (3.0, 7.7), (-2.0, 5.0), (4.0, 4.5), (-6.0, 9.0)] {
            assert!((ramp.integral(a, b) - simpson(a, b)).abs() < 1e-10, "[{a}, {b}]");
        }
        assert!((ramp.integral(-4.7, 7.7) - (3.0 + 4.7)).abs() < 1e-13);
        assert!((ramp.integral(1.0, -1.0) + ramp.integral(-1.0, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn free_hamiltonian_spectrum() {
        let grid = Grid::new(-5.0, 5.0, 16).unwrap();
        let h = build_hamiltonian(&grid, &PotentialSpec::paper_well(-3.0), 0.0);
        let eig = eigenspectrum(&h).unwrap();
        let mut expected: Vec<f64> = grid
            .momenta()
            .iter()
            .flat_map(|&p| [free_energy(p), -free_energy(p)])
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in eig.values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let grid = Grid::new(-8.0, 8.0, 32).unwrap();
        for &scale in &[0.0, 0.3, 1.0] {
            let h = build_hamiltonian(&grid, &PotentialSpec::paper_well(-3.6), scale);
            assert!(hermiticity_defect(h.matrix()) <= 1e-12);
            assert!(HermitianOperator::new(h.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn eigen_reconstruction_and_orthonormality() {
        let grid = Grid::new(-8.0, 8.0, 32).unwrap();
        let h = build_hamiltonian(&grid, &PotentialSpec::paper_well(-3.6), 1.0);
        let eig = eigenspectrum(&h).unwrap();
        let rebuilt = eig.function_of(|l| C64::new(l, 0.0));
        let diff = (h.matrix() - &rebuilt).norm_max();
        assert!(diff <= 1e-8 * h.matrix().norm_max());
        let gram = eig.vectors.adjoint() * &eig.vectors;
        let eye = Mat::<C64>::identity(gram.nrows(), gram.ncols());
        assert!((&gram - &eye).norm_max() < 1e-9);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn constant_shift_moves_every_level() {
        let grid = Grid::new(-8.0, 8.0, 32).unwrap();
        let h = build_hamiltonian(&grid, &PotentialSpec::paper_well(-2.0), 1.0);
        let base = eigenvalues(&h).unwrap();
        let shifted = eigenvalues(&h.shifted(0.37)).unwrap();
        for (a, b) in base.iter().zip(&shifted) {
            assert!((b - a - 0.37).abs() < 1e-9);
        }
    }

    #[test]
    fn representation_independent_spectrum() {
        let grid = Grid::new(-10.0, 10.0, 64).unwrap();
        let spec = PotentialSpec::paper_well(-2.85);
        let a = eigenvalues(&build_hamiltonian_in(DiracRepresentation::Sigma1, &grid, &spec, 1.0)).unwrap();
        let b = eigenvalues(&build_hamiltonian_in(DiracRepresentation::Sigma2, &grid, &spec, 1.0)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn free_spectrum_is_symmetric() {
        let grid = Grid::new(-10.0, 10.0, 64).unwrap();
        let e = eigenvalues(&build_hamiltonian(&grid, &PotentialSpec::paper_well(0.0), 1.0)).unwrap();
        let m = e.len();
        for k in 0..m {
            assert!((e[k] + e[m - 1 - k]).abs() < 1e-10);
        }
    }
}
