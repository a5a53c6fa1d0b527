//! `evolve`: pair numbers and n-pair probabilities for each interaction time.

use vacuumforge_core::observables::pair_statistics;

use crate::commands::{correlations, transition_sweep};
use crate::output::Csv;
use crate::{svg, OutputDir, Plan, Result};

pub fn run(plan: &Plan, out: &mut OutputDir) -> Result<()> {
    let sweep = transition_sweep(plan, out)?;
    let nmax = plan.nmax;

    let mut header = vec!["T".to_string()];
    header.extend((1..=nmax).map(|n| format!("N{n}")));
    header.extend((0..=nmax).map(|n| format!("C{n}")));
    header.extend(["trS".to_string(), "trS_minus".to_string()]);
    let mut table = Csv::new(&header);

    let mut curves = vec![Vec::with_capacity(plan.plateaus.len()); nmax + 1];
    for &t in &plan.plateaus {
        let (s, s_minus) = correlations(&sweep, t)?;
        let stats = pair_statistics(&s, nmax)?;
        stats.check()?;
        log::info!("T = {t}: N1 = {:.6}, C = {:?}", stats.mean_pairs(), &stats.probabilities[..nmax.min(3) + 1]);
        let mut row = vec![t];
        row.extend(&stats.numbers);
        row.extend(&stats.probabilities);
        row.extend([s.trace(), s_minus.trace()]);
        table.row(row);
        for (curve, &c) in curves.iter_mut().zip(&stats.probabilities) {
            curve.push(c);
        }
    }
    out.write_csv("pairs.csv", &table)?;

    if plan.svg {
        let names: Vec<String> = (0..=nmax).map(|n| format!("C{n}")).collect();
        let series: Vec<(&str, &[f64], &[f64])> = names
            .iter()
            .zip(&curves)
            .map(|(name, c)| (name.as_str(), plan.plateaus.as_slice(), c.as_slice()))
            .collect();
        let plot = svg::line_plot("n-pair probabilities", "T", "C_n", &series, false);
        out.write("pairs.svg", plot.as_bytes())?;
    }
    Ok(())
}
