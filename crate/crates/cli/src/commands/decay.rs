//! `decay`: the approach of `C_n(T)` to its long-time value and the rate
//! of an exponential fitted to it.

use serde::Serialize;
use vacuumforge_core::analysis::{decay_series, default_window, fit_exponential, FitWindow};
use vacuumforge_core::observables::pair_statistics;

use crate::commands::{correlations, transition_sweep};
use crate::output::Csv;
use crate::{svg, OutputDir, Plan, Result};

#[derive(Debug, Clone, Serialize)]
pub struct FitRecord {
    pub order: usize,
    pub gamma: f64,
    pub intercept: f64,
    pub residual: f64,
    pub window: [f64; 2],
    pub points: usize,
    pub asymptote: f64,
    pub tail_spread: f64,
    pub asymptote_reliable: bool,
}

pub fn run(plan: &Plan, out: &mut OutputDir) -> Result<()> {
    let n = plan.decay_order;
    let probabilities = match plan.synthetic {
        Some(model) => plan.plateaus.iter().map(|&t| model.probability(t)).collect(),
        None => {
            let sweep = transition_sweep(plan, out)?;
            let nmax = n.max(1);
            let mut values = Vec::with_capacity(plan.plateaus.len());
            for &t in &plan.plateaus {
                let (s, _) = correlations(&sweep, t)?;
                let stats = pair_statistics(&s, nmax)?;
                stats.check()?;
                values.push(stats.probabilities[n]);
            }
            values
        }
    };

    let series = decay_series(&plan.plateaus, &probabilities, n)?;
    if !series.reliable {
        log::warn!("C{n} still varies at the largest times (spread {:.3e}); asymptote unreliable", series.tail_spread);
    }
    let window = match plan.window {
        Some([start, end]) => FitWindow { start, end },
        None => default_window(&series),
    };
    let fit = fit_exponential(&series, window)?;
    log::info!("gamma = {:.6} over [{}, {}], residual {:.3e}", fit.gamma, window.start, window.end, fit.residual);

    let mut table = Csv::new(&["T".to_string(), format!("C{n}"), format!("d{n}")]);
    for ((&t, &c), &d) in series.times.iter().zip(&series.probabilities).zip(&series.decay) {
        table.row([t, c, d]);
    }
    out.write_csv("decay.csv", &table)?;
    out.write_json(
        "fit.json",
        &FitRecord {
            order: n,
            gamma: fit.gamma,
            intercept: fit.intercept,
            residual: fit.residual,
            window: [fit.window.start, fit.window.end],
            points: fit.points,
            asymptote: series.asymptote,
            tail_spread: series.tail_spread,
            asymptote_reliable: series.reliable,
        },
    )?;

    if plan.svg {
        let model: Vec<f64> = series.times.iter().map(|&t| (fit.intercept - fit.gamma * t).exp()).collect();
        let name = format!("d{n}");
        let plot = svg::line_plot(
            "decay",
            "T",
            "d",
            &[(&name, &series.times, &series.decay), ("fit", &series.times, &model)],
            true,
        );
        out.write("decay.svg", plot.as_bytes())?;
    }
    Ok(())
}
