//! `spectrum`: eigenvalues and localization across well depths, and the
//! number of dived levels at each depth.

use vacuumforge_core::hamiltonian::{spectrum_sweep, supercritical_counts};

use crate::output::{Cell, Csv};
use crate::{svg, OutputDir, Plan, Result};

pub fn run(plan: &Plan, out: &mut OutputDir) -> Result<()> {
    let table = spectrum_sweep(&plan.grid, &plan.potential, &plan.depths)?;
    let counts = supercritical_counts(&table, plan.continuation_step)?;

    let mut spectrum = Csv::new(&["V0", "eigen_index", "energy", "localization"]);
    for row in &table.rows {
        for (k, (&e, &l)) in row.energies.iter().zip(&row.localization).enumerate() {
            spectrum.row([Cell::Float(row.depth), Cell::Int(k as i64), Cell::Float(e), Cell::Float(l)]);
        }
    }
    out.write_csv("spectrum.csv", &spectrum)?;

    let mut supercritical = Csv::new(&["V0", "b", "b_localization", "ambiguous"]);
    for (row, count) in table.rows.iter().zip(&counts) {
        if count.ambiguous {
            log::warn!(
                "V0 = {}: continuation gives b = {}, localization gives {}",
                row.depth,
                count.by_continuation,
                count.by_localization
            );
        }
        supercritical.row([
            Cell::Float(row.depth),
            Cell::from(count.value()),
            Cell::from(count.by_localization),
            Cell::Int(count.ambiguous as i64),
        ]);
    }
    out.write_csv("supercritical.csv", &supercritical)?;

    if plan.svg {
        let points: Vec<(f64, f64)> = table
            .rows
            .iter()
            .flat_map(|row| row.energies.iter().map(move |&e| (row.depth, e)))
            .collect();
        let plot = svg::scatter_plot("energy eigenvalues", "V0", "energy", &points, (-3.0, 3.0), Some((-1.0, 1.0)));
        out.write("spectrum.svg", plot.as_bytes())?;
    }
    Ok(())
}
