//! `observables`: spatial densities, momentum spectra and their peaks at a
//! single depth and interaction time.

use faer::Mat;
use vacuumforge_core::analysis::{find_peaks, find_peaks_2d};
use vacuumforge_core::observables::{momentum_spectrum, momentum_to_energy, pair_statistics, DensityTable};

use crate::commands::{correlations, transition_sweep};
use crate::output::{Cell, Csv};
use crate::{svg, OutputDir, Plan, Result};

struct PeakTable {
    csv: Csv,
    threshold: f64,
}

impl PeakTable {
    fn new(threshold: f64) -> Self {
        Self {
            csv: Csv::new(&["table", "x1", "x2", "height", "half_width1", "half_width2", "energy1", "energy2"]),
            threshold,
        }
    }

    fn one(&mut self, table: &'static str, coords: &[f64], values: &[f64], momentum: bool) {
        for p in find_peaks(coords, values, self.threshold) {
            let energy = momentum.then(|| momentum_to_energy(p.location));
            self.csv.row([
                Cell::Text(table),
                p.location.into(),
                Cell::Empty,
                p.height.into(),
                p.half_width.into(),
                Cell::Empty,
                energy.into(),
                Cell::Empty,
            ]);
        }
    }

    fn two(&mut self, table: &'static str, coords: &[f64], values: &Mat<f64>, momentum: bool) {
        for p in find_peaks_2d(coords, coords, values, self.threshold) {
            let energy = |x: f64| Cell::from(momentum.then(|| momentum_to_energy(x)));
            self.csv.row([
                Cell::Text(table),
                p.location[0].into(),
                p.location[1].into(),
                p.height.into(),
                p.half_width[0].into(),
                p.half_width[1].into(),
                energy(p.location[0]),
                energy(p.location[1]),
            ]);
        }
    }
}

/// Values of the `table` column of `peaks.csv`.
pub mod table {
    pub const RHO1: &str = "rho1";
    pub const RHO2: &str = "rho2";
    pub const CHI1_ELECTRON: &str = "chi1_e";
    pub const CHI1_POSITRON: &str = "chi1_p";
    pub const CHI2_ELECTRON: &str = "chi2_e";
    pub const CHI2_POSITRON: &str = "chi2_p";
}

pub fn run(plan: &Plan, out: &mut OutputDir) -> Result<()> {
    let toggles = plan.toggles;
    if !(toggles.pairs || toggles.densities || toggles.momentum) {
        log::info!("every observable is switched off");
        return Ok(());
    }
    let t = plan.plateaus[0];
    let sweep = transition_sweep(plan, out)?;
    let (s, s_minus) = correlations(&sweep, t)?;
    let mut peaks = PeakTable::new(plan.peak_threshold);

    if toggles.pairs {
        let stats = pair_statistics(&s, plan.nmax)?;
        stats.check()?;
        let mut csv = Csv::new(&["n", "N_n", "C_n"]);
        for n in 0..=plan.nmax {
            let number = if n == 0 { 1.0 } else { stats.numbers[n - 1] };
            csv.row([Cell::from(n), number.into(), stats.probabilities[n].into()]);
        }
        out.write_csv("pair_numbers.csv", &csv)?;
    }

    if toggles.densities {
        let density = DensityTable::new(&s, sweep.basis(), plan.decimate)?;
        let mut rho1 = Csv::new(&["x", "rho1"]);
        for (&x, &r) in density.positions.iter().zip(&density.rho1) {
            rho1.row([x, r]);
        }
        out.write_csv("rho1.csv", &rho1)?;
        let pair = &density.rho2;
        let mut rho2 = Csv::new(&["x1", "x2", "rho2"]);
        for (i, &x1) in pair.positions.iter().enumerate() {
            for (j, &x2) in pair.positions.iter().enumerate() {
                rho2.row([x1, x2, pair.values[(i, j)]]);
            }
        }
        out.write_csv("rho2.csv", &rho2)?;
        if toggles.peaks {
            peaks.one(table::RHO1, &density.positions, &density.rho1, false);
            peaks.two(table::RHO2, &pair.positions, &pair.values, false);
        }
        if plan.svg {
            let line = svg::line_plot("one-particle density", "x", "rho1", &[("rho1", &density.positions, &density.rho1)], false);
            out.write("rho1.svg", line.as_bytes())?;
            let map = svg::heatmap("two-particle density", "x1", "x2", &pair.positions, &pair.positions, &pair.values);
            out.write("rho2.svg", map.as_bytes())?;
        }
    }

    if toggles.momentum {
        let momenta = plan.grid.momenta();
        let electron = momentum_spectrum(&s, &momenta);
        let positron = momentum_spectrum(&s_minus, &momenta);
        let mut chi1 = Csv::new(&["p", "chi1_e", "chi1_p"]);
        for (i, &p) in momenta.iter().enumerate() {
            chi1.row([p, electron.chi1[i], positron.chi1[i]]);
        }
        out.write_csv("chi1.csv", &chi1)?;

        let window: Vec<usize> = (0..momenta.len()).filter(|&i| momenta[i].abs() <= plan.momentum_limit).collect();
        let coords: Vec<f64> = window.iter().map(|&i| momenta[i]).collect();
        let restrict = |m: &Mat<f64>| Mat::from_fn(window.len(), window.len(), |a, b| m[(window[a], window[b])]);
        let chi2_e = restrict(&electron.chi2);
        let chi2_p = restrict(&positron.chi2);
        let mut chi2 = Csv::new(&["p1", "p2", "chi2_e", "chi2_p"]);
        for (a, &p1) in coords.iter().enumerate() {
            for (b, &p2) in coords.iter().enumerate() {
                chi2.row([p1, p2, chi2_e[(a, b)], chi2_p[(a, b)]]);
            }
        }
        out.write_csv("chi2.csv", &chi2)?;

        if toggles.peaks {
            peaks.one(table::CHI1_ELECTRON, &momenta, &electron.chi1, true);
            peaks.one(table::CHI1_POSITRON, &momenta, &positron.chi1, true);
            peaks.two(table::CHI2_ELECTRON, &coords, &chi2_e, true);
            peaks.two(table::CHI2_POSITRON, &coords, &chi2_p, true);
        }
        if plan.svg {
            let line = svg::line_plot(
                "one-particle momentum spectra",
                "p",
                "chi1",
                &[("electron", &momenta, &electron.chi1), ("positron", &momenta, &positron.chi1)],
                false,
            );
            out.write("chi1.svg", line.as_bytes())?;
            for (name, table) in [("chi2_electron.svg", &chi2_e), ("chi2_positron.svg", &chi2_p)] {
                let map = svg::heatmap("two-particle momentum spectrum", "p1", "p2", &coords, &coords, table);
                out.write(name, map.as_bytes())?;
            }
        }
    }

    if toggles.peaks && (toggles.densities || toggles.momentum) {
        out.write_csv("peaks.csv", &peaks.csv)?;
    }
    Ok(())
}
