//! Transition matrices for many plateau durations at the cost of one.
//!
//! With `U(T) = U_off · e^{−iHT} · U_on` and `H = Q Λ Q†`,
//! `G(T) = A · e^{−iΛT} · B` where `B = Q† U_on Φ` and `A = Φ† U_off Q`,
//! `Φ` being the free modes. Only the diagonal phase depends on `T`.

use std::io::{Read, Write};

use faer::Mat;
use rayon::prelude::*;

use super::{ramp_steppers, run_stepper, unitarity_defect, Schedule};
use crate::bogoliubov::TransitionBlocks;
use crate::hamiltonian::{build_hamiltonian_in, eigenspectrum};
use crate::{Error, FreeBasis, Result, C64};

/// Tolerance on the unitarity of the `A` and `B` factors.
const FACTOR_UNITARITY_LIMIT: f64 = 1e-9;
const FACTOR_MAGIC: &[u8; 8] = b"VFSWEEP1";

pub struct TransitionSweep {
    basis: FreeBasis,
    schedule: Schedule,
    energies: Vec<f64>,
    a: Mat<C64>,
    b: Mat<C64>,
}

impl std::fmt::Debug for TransitionSweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransitionSweep")
            .field("schedule", &self.schedule)
            .field("dim", &self.energies.len())
            .finish_non_exhaustive()
    }
}

impl TransitionSweep {
    /// Tabulates both ramps for `schedule`; its plateau length is ignored.
    pub fn new(basis: &FreeBasis, schedule: &Schedule) -> Result<Self> {
        schedule.validate()?;
        let grid = *basis.grid();
        let representation = basis.representation();
        let h = build_hamiltonian_in(representation, &grid, &schedule.potential, 1.0);
        let eig = eigenspectrum(&h)?;
        let (on, off) = ramp_steppers(&grid, representation, schedule);
        let dim = basis.len();
        let root_dx = grid.dx().sqrt();

        let mut turned_on: Vec<Vec<C64>> = (0..dim).into_par_iter().map(|i| basis.field(i).into_values()).collect();
        run_stepper(&on, &mut turned_on);
        let x = Mat::from_fn(dim, dim, |i, j| turned_on[j][i] * root_dx);
        drop(turned_on);
        let b = eig.vectors.adjoint() * &x;
        drop(x);

        let mut turned_off: Vec<Vec<C64>> = (0..dim)
            .into_par_iter()
            .map(|k| eig.vectors.col_as_slice(k).iter().map(|v| v / root_dx).collect())
            .collect();
        run_stepper(&off, &mut turned_off);
        let columns: Vec<Vec<C64>> = turned_off
            .par_iter()
            .map(|values| basis.coefficients_of_values(values))
            .collect();
        drop(turned_off);
        let a = Mat::from_fn(dim, dim, |i, j| columns[j][i]);

        for (name, m) in [("turn-on", &b), ("turn-off", &a)] {
            let defect = unitarity_defect(m);
            if defect > FACTOR_UNITARITY_LIMIT {
                return Err(Error::Contract(format!("{name} factor unitarity defect {defect:.3e}")));
            }
        }
        Ok(Self {
            basis: basis.clone(),
            schedule: *schedule,
            energies: eig.values,
            a,
            b,
        })
    }

    pub fn basis(&self) -> &FreeBasis {
        &self.basis
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Eigenvalues of the plateau Hamiltonian.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `2n × 2n` transition matrix `G(T)` in flat mode order.
    pub fn matrix(&self, plateau: f64) -> Result<Mat<C64>> {
        if !(plateau >= 0.0 && plateau.is_finite()) {
            return Err(Error::Config(format!("plateau duration must be non-negative, got {plateau}")));
        }
        let phases: Vec<C64> = self.energies.iter().map(|&l| C64::from_polar(1.0, -l * plateau)).collect();
        let scaled = Mat::from_fn(self.b.nrows(), self.b.ncols(), |i, j| self.b[(i, j)] * phases[i]);
        Ok(&self.a * &scaled)
    }

    /// Key of the persisted factors: grid and schedule without its plateau.
    pub fn key(&self) -> String {
        format!("{}_{}", self.basis.grid().fingerprint(), self.schedule.ramp_fingerprint())
    }

    /// Persists the plateau energies and both factors.
    ///
    /// Layout: magic, dimension (`u64`), the 33-byte [`key`](Self::key),
    /// then energies, `A` and `B` column-major as little-endian `f64`
    /// (complex entries as re, im).
    pub fn write_factors<W: Write>(&self, mut out: W) -> Result<()> {
        let dim = self.energies.len();
        out.write_all(FACTOR_MAGIC)?;
        out.write_all(&(dim as u64).to_le_bytes())?;
        out.write_all(self.key().as_bytes())?;
        let mut buf = Vec::with_capacity(8 * dim * (1 + 4 * dim));
        for e in &self.energies {
            buf.extend_from_slice(&e.to_le_bytes());
        }
        for m in [&self.a, &self.b] {
            for j in 0..dim {
                for z in m.col_as_slice(j) {
                    buf.extend_from_slice(&z.re.to_le_bytes());
                    buf.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
        out.write_all(&buf)?;
        Ok(())
    }

    /// Restores factors written by [`write_factors`](Self::write_factors) for
    /// the same basis and schedule.
    pub fn read_factors<R: Read>(basis: &FreeBasis, schedule: &Schedule, mut input: R) -> Result<Self> {
        schedule.validate()?;
        let dim = basis.len();
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != FACTOR_MAGIC {
            return Err(Error::Config("not a transition factor file".into()));
        }
        let mut word = [0u8; 8];
        input.read_exact(&mut word)?;
        let stored = u64::from_le_bytes(word) as usize;
        if stored != dim {
            return Err(Error::Ordering {
                expected: dim,
                found: stored,
            });
        }
        let expected = format!("{}_{}", basis.grid().fingerprint(), schedule.ramp_fingerprint());
        let mut key = vec![0u8; expected.len()];
        input.read_exact(&mut key)?;
        if key != expected.as_bytes() {
            return Err(Error::GridMismatch);
        }
        let mut read_f64 = || -> Result<f64> {
            input.read_exact(&mut word)?;
            Ok(f64::from_le_bytes(word))
        };
        let energies = (0..dim).map(|_| read_f64()).collect::<Result<Vec<_>>>()?;
        let mut factors = Vec::with_capacity(2);
        for _ in 0..2 {
            let mut m = Mat::zeros(dim, dim);
            for j in 0..dim {
                for i in 0..dim {
                    let re = read_f64()?;
                    m[(i, j)] = C64::new(re, read_f64()?);
                }
            }
            factors.push(m);
        }
        let b = factors.pop().expect("two factors");
        let a = factors.pop().expect("two factors");
        Ok(Self {
            basis: basis.clone(),
            schedule: *schedule,
            energies,
            a,
            b,
        })
    }

    /// Transition blocks after a plateau of length `plateau`.
    pub fn blocks(&self, plateau: f64) -> Result<TransitionBlocks> {
        let schedule = self.schedule.with_plateau(plateau)?;
        TransitionBlocks::from_matrix(
            self.matrix(plateau)?,
            self.basis.grid().fingerprint(),
            schedule.fingerprint(),
        )
    }
}
