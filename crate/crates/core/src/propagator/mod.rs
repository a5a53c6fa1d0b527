//! Time evolution through the switching schedule.
//!
//! Ramps are stepped with a split-operator method; the plateau is a single
//! exact exponential through the eigendecomposition of the static
//! Hamiltonian.

mod split;
mod sweep;

pub use split::Scheme;
pub use sweep::TransitionSweep;

use faer::Mat;
use rayon::prelude::*;

use crate::hamiltonian::{build_hamiltonian_in, eigenspectrum, Eigensystem, HermitianOperator, PotentialSpec, RampSpec};
use crate::{DiracRepresentation, EnergySign, Error, FreeBasis, Grid, Result, SpinorField, C64};
use split::SplitStepper;

/// Default ramp step in `ħ/(m c²)`.
pub const DEFAULT_RAMP_STEP: f64 = 0.01;
/// Norm change above which an evolution is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Column-orthonormality tolerance of an evolved basis block.
pub const BASIS_UNITARITY_LIMIT: f64 = 1e-8;

/// A potential switched on over `[−ΔT, 0]`, held on `[0, T]` and switched
/// off over `[T, T + ΔT]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub potential: PotentialSpec,
    pub ramp: RampSpec,
    /// Nominal step through each ramp; the ramp is split into
    /// `⌈ΔT / ramp_step⌉` equal steps.
    pub ramp_step: f64,
    pub scheme: Scheme,
}

impl Schedule {
    pub fn new(potential: PotentialSpec, ramp: RampSpec) -> Result<Self> {
        let schedule = Self {
            potential,
            ramp,
            ramp_step: DEFAULT_RAMP_STEP,
            scheme: Scheme::default(),
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn with_step(self, ramp_step: f64) -> Result<Self> {
        let schedule = Self { ramp_step, ..self };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn with_plateau(self, plateau: f64) -> Result<Self> {
        let schedule = Self {
            ramp: self.ramp.with_plateau(plateau),
            ..self
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        self.ramp.validate()?;
        if !(self.ramp_step > 0.0 && self.ramp_step <= self.ramp.ramp / 50.0) {
            return Err(Error::Config(format!(
                "ramp step {} must be positive and at most ΔT/50 = {}",
                self.ramp_step,
                self.ramp.ramp / 50.0
            )));
        }
        Ok(())
    }

    /// Number of steps per ramp.
    pub fn ramp_steps(&self) -> usize {
        (self.ramp.ramp / self.ramp_step - 1e-9).ceil() as usize
    }

    /// `(start, end)` of the whole schedule.
    pub fn window(&self) -> (f64, f64) {
        (self.ramp.start(), self.ramp.end())
    }

    /// Identifies everything except the plateau length.
    pub(crate) fn ramp_fingerprint(&self) -> String {
        let scheme = match self.scheme {
            Scheme::Strang => 2.0,
            Scheme::Yoshida4 => 4.0,
            Scheme::Chin4 => 5.0,
        };
        crate::fingerprint(
            "schedule",
            &[
                self.potential.depth,
                self.potential.width,
                self.potential.edge,
                self.ramp.ramp,
                self.ramp_step,
                scheme,
            ],
        )
    }

    pub fn fingerprint(&self) -> String {
        crate::fingerprint(&self.ramp_fingerprint(), &[self.ramp.plateau])
    }
}

/// A dense unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    matrix: Mat<C64>,
}

impl UnitaryOperator {
    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    /// `max |U U† − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    pub fn apply(&self, psi: &SpinorField) -> Result<SpinorField> {
        let n = psi.values().len();
        if n != self.matrix.nrows() {
            return Err(Error::Ordering {
                expected: self.matrix.nrows(),
                found: n,
            });
        }
        let x = Mat::from_fn(n, 1, |i, _| psi.values()[i]);
        let y = &self.matrix * &x;
        SpinorField::from_values(*psi.grid(), y.col_as_slice(0).to_vec())
    }

    pub fn compose(&self, other: &UnitaryOperator) -> UnitaryOperator {
        UnitaryOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// `max |A†A − I|` for a matrix with orthonormal columns.
pub fn unitarity_defect(matrix: &Mat<C64>) -> f64 {
    let gram = matrix.adjoint() * matrix;
    let mut worst = 0.0f64;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `exp(−iH·duration)` via `Q e^{−iΛ·duration} Q†`.
pub fn plateau_propagator(h: &HermitianOperator, duration: f64) -> Result<UnitaryOperator> {
    let eig = eigenspectrum(h)?;
    let matrix = eig.function_of(|l| C64::from_polar(1.0, -l * duration));
    let op = UnitaryOperator { matrix };
    let defect = op.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::Contract(format!("plateau propagator unitarity defect {defect:.3e}")));
    }
    Ok(op)
}

/// Evolver for one grid, representation and schedule. Building it
/// diagonalizes the plateau Hamiltonian and tabulates both ramps.
pub struct Propagator {
    grid: Grid,
    representation: DiracRepresentation,
    schedule: Schedule,
    on: SplitStepper,
    off: SplitStepper,
    plateau: Eigensystem,
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("grid", &self.grid)
            .field("representation", &self.representation)
            .field("schedule", &self.schedule)
            .finish_non_exhaustive()
    }
}

impl Propagator {
    pub fn new(grid: Grid, representation: DiracRepresentation, schedule: Schedule) -> Result<Self> {
        schedule.validate()?;
        let h = build_hamiltonian_in(representation, &grid, &schedule.potential, 1.0);
        let plateau = eigenspectrum(&h)?;
        let (on, off) = ramp_steppers(&grid, representation, &schedule);
        Ok(Self {
            grid,
            representation,
            schedule,
            on,
            off,
            plateau,
        })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Eigenvalues of the plateau Hamiltonian.
    pub fn plateau_energies(&self) -> &[f64] {
        &self.plateau.values
    }

    /// Evolves a normalized field from `−ΔT` to `T + ΔT`.
    pub fn evolve(&self, psi0: &SpinorField) -> Result<SpinorField> {
        if psi0.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let mut states = vec![psi0.values().to_vec()];
        self.evolve_states(&mut states)?;
        let out = SpinorField::from_values(self.grid, states.pop().expect("one state"))?;
        check_norm(psi0.norm_sqr(), out.norm_sqr())?;
        Ok(out)
    }

    fn evolve_states(&self, states: &mut [Vec<C64>]) -> Result<()> {
        run_stepper(&self.on, states);
        apply_plateau(&self.plateau, states, self.schedule.ramp.plateau);
        run_stepper(&self.off, states);
        Ok(())
    }

    /// Evolves the selected free modes (`None` selects all) and records their
    /// final coefficients in the free basis.
    pub fn evolve_basis(&self, basis: &FreeBasis, which: Option<EnergySign>) -> Result<EvolvedBasis> {
        if basis.grid() != &self.grid || basis.representation() != self.representation {
            return Err(Error::GridMismatch);
        }
        let modes: Vec<usize> = match which {
            Some(sign) => basis.indices(sign).collect(),
            None => (0..basis.len()).collect(),
        };
        let mut states: Vec<Vec<C64>> = modes.par_iter().map(|&i| basis.field(i).into_values()).collect();
        self.evolve_states(&mut states)?;
        let dx = self.grid.dx();
        let columns = modes
            .par_iter()
            .zip(states.par_iter())
            .map(|(&mode, values)| {
                let norm = dx * values.iter().map(|v| v.norm_sqr()).sum::<f64>();
                check_norm(1.0, norm).map_err(|e| Error::Evolution {
                    mode,
                    source: Box::new(e),
                })?;
                Ok(basis.coefficients_of_values(values))
            })
            .collect::<Result<Vec<_>>>()?;
        let coefficients = Mat::from_fn(basis.len(), modes.len(), |i, j| columns[j][i]);
        let evolved = EvolvedBasis {
            coefficients,
            modes,
            grid_fingerprint: self.grid.fingerprint(),
            schedule_fingerprint: self.schedule.fingerprint(),
        };
        let defect = evolved.unitarity_defect();
        if defect > BASIS_UNITARITY_LIMIT {
            return Err(Error::Contract(format!("evolved basis unitarity defect {defect:.3e}")));
        }
        Ok(evolved)
    }
}

fn ramp_steppers(grid: &Grid, representation: DiracRepresentation, schedule: &Schedule) -> (SplitStepper, SplitStepper) {
    let steps = schedule.ramp_steps();
    let dt = schedule.ramp.ramp;
    // The turn-off does not depend on T, so it is tabulated on a
    // zero-length plateau starting at t = 0.
    let ramp = schedule.ramp.with_plateau(0.0);
    let on = SplitStepper::new(grid, representation, &schedule.potential, &ramp, -dt, 0.0, steps, schedule.scheme);
    let off = SplitStepper::new(grid, representation, &schedule.potential, &ramp, 0.0, dt, steps, schedule.scheme);
    (on, off)
}

fn run_stepper(stepper: &SplitStepper, states: &mut [Vec<C64>]) {
    let scratch_len = stepper.scratch_len();
    states.par_iter_mut().for_each_init(
        || vec![C64::new(0.0, 0.0); scratch_len],
        |scratch, state| stepper.apply(state, scratch),
    );
}

fn apply_plateau(eig: &Eigensystem, states: &mut [Vec<C64>], duration: f64) {
    if states.is_empty() || duration == 0.0 {
        return;
    }
    let dim = eig.dim();
    let x = Mat::from_fn(dim, states.len(), |i, j| states[j][i]);
    let mut y = eig.vectors.adjoint() * &x;
    for (i, &l) in eig.values.iter().enumerate() {
        let phase = C64::from_polar(1.0, -l * duration);
        for j in 0..y.ncols() {
            y[(i, j)] *= phase;
        }
    }
    let z = &eig.vectors * &y;
    for (j, state) in states.iter_mut().enumerate() {
        state.copy_from_slice(z.col_as_slice(j));
    }
}

fn check_norm(before: f64, after: f64) -> Result<()> {
    let drift = (after - before).abs();
    if drift > NORM_DRIFT_LIMIT || !drift.is_finite() {
        return Err(Error::NormDrift {
            drift,
            limit: NORM_DRIFT_LIMIT,
        });
    }
    Ok(())
}

/// Evolves one normalized field through the whole schedule.
pub fn evolve_state(psi0: &SpinorField, schedule: &Schedule) -> Result<SpinorField> {
    Propagator::new(*psi0.grid(), DiracRepresentation::default(), *schedule)?.evolve(psi0)
}

/// Evolves the selected modes of `basis` through the schedule.
pub fn evolve_basis(basis: &FreeBasis, which: Option<EnergySign>, schedule: &Schedule) -> Result<EvolvedBasis> {
    Propagator::new(*basis.grid(), basis.representation(), *schedule)?.evolve_basis(basis, which)
}

/// Final-time free-basis coefficients of a set of evolved modes.
#[derive(Debug, Clone)]
pub struct EvolvedBasis {
    /// `2n × m`: row = free mode (flat index), column = evolved mode.
    pub coefficients: Mat<C64>,
    /// Flat indices of the evolved initial modes, one per column.
    pub modes: Vec<usize>,
    pub grid_fingerprint: String,
    pub schedule_fingerprint: String,
}

impl EvolvedBasis {
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.coefficients)
    }
}
