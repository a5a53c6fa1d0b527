//! One module per subcommand.

pub mod decay;
pub mod evolve;
pub mod observables;
pub mod spectrum;

use std::time::Instant;

use vacuumforge_core::bogoliubov::{
    build_s, build_s_minus, check_charge_balance, OverlapMatrix, TRANSITION_UNITARITY_LIMIT,
};
use vacuumforge_core::propagator::TransitionSweep;
use vacuumforge_core::FreeBasis;

use crate::{OutputDir, Plan, Result};

/// Propagates the free basis through both ramps of the plan's schedule and
/// persists the factors when requested.
pub fn transition_sweep(plan: &Plan, out: &mut OutputDir) -> Result<TransitionSweep> {
    let started = Instant::now();
    let basis = FreeBasis::new(plan.grid);
    let sweep = TransitionSweep::new(&basis, &plan.schedule(0.0)?)?;
    log::info!(
        "propagated {} modes through the ramps in {:.1} s",
        basis.len(),
        started.elapsed().as_secs_f64()
    );
    if plan.save_matrices {
        let mut bytes = Vec::new();
        sweep.write_factors(&mut bytes)?;
        out.write(&format!("matrices/factors_{}.bin", sweep.key()), &bytes)?;
    }
    Ok(sweep)
}

/// Electron and positron correlation matrices after a plateau of length
/// `plateau`, with the unitarity, Pauli and charge-balance contracts checked.
pub fn correlations(sweep: &TransitionSweep, plateau: f64) -> Result<(OverlapMatrix, OverlapMatrix)> {
    let blocks = sweep.blocks(plateau)?;
    blocks.check_unitarity(TRANSITION_UNITARITY_LIMIT)?;
    let s = build_s(&blocks);
    let s_minus = build_s_minus(&blocks);
    s.check()?;
    s_minus.check()?;
    check_charge_balance(&s, &s_minus)?;
    Ok((s, s_minus))
}
