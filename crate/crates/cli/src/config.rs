//! Run configuration.
//!
//! A run is described by a TOML file whose sections mirror the simulation
//! stages. Missing physical parameters fall back to the reference well
//! (`D = 3.2`, `W = 0.3`, `ΔT = 4.7`); the run-specific inputs (depths,
//! interaction times) must be given unless `--paper-defaults` is set, which
//! fills them with the values of the reference figures.
//!
//! ```toml
//! [grid]
//! x_min = -68.5
//! x_max = 68.5
//! n_points = 1024
//!
//! [potential]
//! depth = -3.6
//!
//! [ramp]
//! duration = 4.7
//! plateau_range = { start = 0.0, stop = 100.0, step = 2.5 }
//! ```

use serde::{Deserialize, Serialize};
use vacuumforge_core::hamiltonian::{PotentialSpec, RampSpec};
use vacuumforge_core::observables::DEFAULT_NMAX;
use vacuumforge_core::propagator::{Schedule, Scheme, DEFAULT_RAMP_STEP};
use vacuumforge_core::Grid;

use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Static spectrum and supercritical level count across well depths.
    Spectrum,
    /// Pair numbers and n-pair probabilities across interaction times.
    Evolve,
    /// Spatial densities and momentum spectra at one depth and time.
    Observables,
    /// Approach of one n-pair probability to its asymptote, with a rate fit.
    Decay,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::Observables => "observables",
            Command::Decay => "decay",
        }
    }
}

/// Evenly spaced values `start, start + step, …` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    fn expand(&self, field: &str) -> Result<Vec<f64>, ConfigError> {
        let span = self.stop - self.start;
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) || self.step == 0.0 {
            return Err(ConfigError::new(field, "start, stop and step must be finite with a nonzero step"));
        }
        if span * self.step < 0.0 {
            return Err(ConfigError::new(field, "step points away from stop"));
        }
        let count = (span / self.step + 1e-9).floor() as usize;
        if count > 100_000 {
            return Err(ConfigError::new(field, format!("{} samples is too many", count + 1)));
        }
        // snap to 1e-12 so that decimal steps give the nearest decimal values
        Ok((0..=count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialSection {
    /// `V₀` in units of `m c²`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
    /// Well width `D`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    /// Edge length `W`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RampSection {
    /// Switching time `ΔT`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Single plateau length, for `observables`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau: Option<f64>,
    /// Plateau lengths, for `evolve` and `decay`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateaus: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau_range: Option<Range>,
    /// Time step of the ramp integrator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// `strang`, `yoshida4` or `chin4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_range: Option<Range>,
    /// Largest depth increment of the level continuation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuation_step: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObservablesSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peaks: Option<bool>,
    /// Stride of the two-particle density grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimate: Option<usize>,
    /// Two-particle momentum tables are written for `|p| ≤ momentum_limit`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum_limit: Option<f64>,
    /// Peaks below this fraction of the table maximum are ignored.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_threshold: Option<f64>,
}

/// `C(T) = asymptote − amplitude · e^{−rate T}`, used in place of a
/// simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticDecay {
    pub asymptote: f64,
    pub amplitude: f64,
    pub rate: f64,
}

impl SyntheticDecay {
    pub fn probability(&self, t: f64) -> f64 {
        self.asymptote - self.amplitude * (-self.rate * t).exp()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecaySection {
    /// Pair number `n` whose probability is followed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Fit window `[start, end]`; chosen automatically when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticDecay>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub save_matrices: Option<bool>,
}

/// The configuration file as written by the user.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    pub potential: PotentialSection,
    pub ramp: RampSection,
    pub spectrum: SpectrumSection,
    pub observables: ObservablesSection,
    pub decay: DecaySection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            ConfigError::new("config", format!("{message} ({})", e.to_string().lines().next().unwrap_or("")))
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

/// Values given on the command line, which take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub decimate: Option<usize>,
    pub save_matrices: bool,
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Toggles {
    pub pairs: bool,
    pub densities: bool,
    pub momentum: bool,
    pub peaks: bool,
}

/// A validated run: every value the command needs, nothing optional.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub command: Command,
    pub grid: Grid,
    /// For `spectrum` the depth is a placeholder; see `depths`.
    pub potential: PotentialSpec,
    pub ramp_duration: f64,
    pub ramp_step: f64,
    pub scheme: Scheme,
    /// Depth sweep of `spectrum`.
    pub depths: Vec<f64>,
    /// Plateau lengths: several for `evolve` and `decay`, one for
    /// `observables`, none for `spectrum`.
    pub plateaus: Vec<f64>,
    pub continuation_step: f64,
    pub nmax: usize,
    pub toggles: Toggles,
    pub decimate: usize,
    pub momentum_limit: f64,
    pub peak_threshold: f64,
    pub decay_order: usize,
    pub window: Option<[f64; 2]>,
    pub synthetic: Option<SyntheticDecay>,
    pub svg: bool,
    pub save_matrices: bool,
}

pub const WELL_WIDTH: f64 = 3.2;
pub const WELL_EDGE: f64 = 0.3;
pub const RAMP_DURATION: f64 = 4.7;
pub const CONTINUATION_STEP: f64 = 0.25;
pub const DECIMATE: usize = 2;
pub const MOMENTUM_LIMIT: f64 = 5.0;
pub const PEAK_THRESHOLD: f64 = 0.3;

/// Lattice of the time-dependent runs: the spectrum lattice spacing on a
/// box twice as long, so that emitted positrons do not wrap around within
/// the interaction times of interest.
pub fn evolution_grid() -> Grid {
    Grid::new(-68.5, 68.5, 1024).expect("valid grid")
}

fn paper_depth(command: Command) -> Option<f64> {
    match command {
        Command::Spectrum => None,
        Command::Evolve => Some(-2.85),
        Command::Observables | Command::Decay => Some(-3.6),
    }
}

fn paper_depths() -> Range {
    Range {
        start: 0.0,
        stop: -5.0,
        step: -0.05,
    }
}

fn paper_plateaus() -> Range {
    Range {
        start: 0.0,
        stop: 100.0,
        step: 2.5,
    }
}

const PAPER_PLATEAU: f64 = 90.0;

fn list_or_range(
    field: &str,
    list: &Option<Vec<f64>>,
    range: &Option<Range>,
    fallback: Option<Range>,
) -> Result<Vec<f64>, ConfigError> {
    let values = match (list, range) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new(field, "give either an explicit list or a range, not both"));
        }
        (Some(list), None) => list.clone(),
        (None, Some(range)) => range.expand(&format!("{field}_range"))?,
        (None, None) => match fallback {
            Some(range) => range.expand(field)?,
            None => return Err(ConfigError::new(field, "required (or pass --paper-defaults)")),
        },
    };
    if values.is_empty() {
        return Err(ConfigError::new(field, "must not be empty"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(ConfigError::new(field, format!("non-finite value {v}")));
    }
    Ok(values)
}

fn positive(field: &str, value: f64) -> Result<f64, ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::new(field, format!("must be positive, got {value}")))
    }
}

impl Plan {
    /// Resolves `config` for `command`, validating it against the
    /// preconditions of the simulation before anything is computed.
    pub fn resolve(
        config: &RunConfig,
        command: Command,
        paper_defaults: bool,
        overrides: Overrides,
    ) -> Result<Self, ConfigError> {
        let grid = match config.grid {
            Some(g) => Grid::new(g.x_min, g.x_max, g.n_points).map_err(|e| ConfigError::core("grid", e))?,
            None if command == Command::Spectrum => Grid::spectrum_default(),
            None => evolution_grid(),
        };

        let depth = match (command, config.potential.depth) {
            (Command::Spectrum, _) => 0.0,
            (_, Some(d)) => d,
            (_, None) if paper_defaults => paper_depth(command).expect("depth default"),
            _ => return Err(ConfigError::new("potential.depth", "required (or pass --paper-defaults)")),
        };
        let potential = PotentialSpec::new(
            depth,
            config.potential.width.unwrap_or(WELL_WIDTH),
            config.potential.edge.unwrap_or(WELL_EDGE),
        )
        .map_err(|e| ConfigError::core("potential", e))?;

        let ramp = &config.ramp;
        let ramp_duration = ramp.duration.unwrap_or(RAMP_DURATION);
        let ramp_step = ramp.step.unwrap_or(DEFAULT_RAMP_STEP);
        let scheme = match &ramp.scheme {
            Some(name) => Scheme::parse(name)
                .ok_or_else(|| ConfigError::new("ramp.scheme", format!("unknown scheme {name:?}")))?,
            None => Scheme::default(),
        };
        let ramp_spec = RampSpec::new(ramp_duration, 0.0).map_err(|e| ConfigError::core("ramp.duration", e))?;
        Schedule::new(potential, ramp_spec)
            .and_then(|s| s.with_step(ramp_step))
            .map_err(|e| ConfigError::core("ramp.step", e))?;

        let depths = if command == Command::Spectrum {
            let s = &config.spectrum;
            list_or_range("spectrum.depths", &s.depths, &s.depth_range, paper_defaults.then(paper_depths))?
        } else {
            Vec::new()
        };

        let plateaus = match command {
            Command::Spectrum => Vec::new(),
            Command::Observables => match ramp.plateau {
                Some(t) => vec![t],
                None if paper_defaults => vec![PAPER_PLATEAU],
                None => return Err(ConfigError::new("ramp.plateau", "required (or pass --paper-defaults)")),
            },
            Command::Evolve | Command::Decay => list_or_range(
                "ramp.plateaus",
                &ramp.plateaus,
                &ramp.plateau_range,
                paper_defaults.then(paper_plateaus),
            )?,
        };
        if let Some(t) = plateaus.iter().find(|t| **t < 0.0) {
            return Err(ConfigError::new("ramp.plateaus", format!("interaction times must be non-negative, got {t}")));
        }
        if command == Command::Decay {
            if plateaus.len() < 5 {
                return Err(ConfigError::new(
                    "ramp.plateaus",
                    format!("decay needs at least 5 interaction times, got {}", plateaus.len()),
                ));
            }
            if plateaus.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ConfigError::new("ramp.plateaus", "decay needs strictly increasing interaction times"));
            }
            let (first, last) = (plateaus[0], plateaus[plateaus.len() - 1]);
            if last < 3.0 * first {
                return Err(ConfigError::new(
                    "ramp.plateaus",
                    "the largest interaction time must be at least three times the smallest",
                ));
            }
        }

        let continuation_step = positive(
            "spectrum.continuation_step",
            config.spectrum.continuation_step.unwrap_or(CONTINUATION_STEP),
        )?;

        let obs = &config.observables;
        let nmax = obs.nmax.unwrap_or(DEFAULT_NMAX);
        if nmax < 1 {
            return Err(ConfigError::new("observables.nmax", "must be at least 1"));
        }
        let decimate = overrides.decimate.or(obs.decimate).unwrap_or(DECIMATE);
        if decimate < 1 {
            return Err(ConfigError::new("observables.decimate", "must be at least 1"));
        }
        let momentum_limit = positive("observables.momentum_limit", obs.momentum_limit.unwrap_or(MOMENTUM_LIMIT))?;
        let peak_threshold = obs.peak_threshold.unwrap_or(PEAK_THRESHOLD);
        if !(0.0..1.0).contains(&peak_threshold) {
            return Err(ConfigError::new("observables.peak_threshold", "must lie in [0, 1)"));
        }
        let toggles = Toggles {
            pairs: obs.pairs.unwrap_or(true),
            densities: obs.densities.unwrap_or(true),
            momentum: obs.momentum.unwrap_or(true),
            peaks: obs.peaks.unwrap_or(true),
        };

        let decay = &config.decay;
        if let Some([start, end]) = decay.window {
            if !(start < end) {
                return Err(ConfigError::new("decay.window", format!("start {start} must precede end {end}")));
            }
        }
        if let Some(s) = decay.synthetic {
            positive("decay.synthetic.rate", s.rate)?;
        }

        Ok(Self {
            command,
            grid,
            potential,
            ramp_duration,
            ramp_step,
            scheme,
            depths,
            plateaus,
            continuation_step,
            nmax,
            toggles,
            decimate,
            momentum_limit,
            peak_threshold,
            decay_order: decay.order.unwrap_or(2),
            window: decay.window,
            synthetic: decay.synthetic,
            svg: overrides.svg || config.output.svg.unwrap_or(false),
            save_matrices: overrides.save_matrices || config.output.save_matrices.unwrap_or(false),
        })
    }

    /// Schedule with the given plateau length.
    pub fn schedule(&self, plateau: f64) -> vacuumforge_core::Result<Schedule> {
        Schedule::new(self.potential, RampSpec::new(self.ramp_duration, plateau)?)?
            .with_step(self.ramp_step)
            .map(|s| s.with_scheme(self.scheme))
    }

    /// The fully explicit configuration that resolves back to this plan.
    pub fn echo(&self) -> RunConfig {
        let plateaus = (matches!(self.command, Command::Evolve | Command::Decay)).then(|| self.plateaus.clone());
        RunConfig {
            grid: Some(GridSection {
                x_min: self.grid.x_min(),
                x_max: self.grid.x_max(),
                n_points: self.grid.len(),
            }),
            potential: PotentialSection {
                depth: (self.command != Command::Spectrum).then_some(self.potential.depth),
                width: Some(self.potential.width),
                edge: Some(self.potential.edge),
            },
            ramp: RampSection {
                duration: Some(self.ramp_duration),
                plateau: (self.command == Command::Observables).then(|| self.plateaus[0]),
                plateaus,
                plateau_range: None,
                step: Some(self.ramp_step),
                scheme: Some(self.scheme.name().to_string()),
            },
            spectrum: SpectrumSection {
                depths: (self.command == Command::Spectrum).then(|| self.depths.clone()),
                depth_range: None,
                continuation_step: Some(self.continuation_step),
            },
            observables: ObservablesSection {
                nmax: Some(self.nmax),
                pairs: Some(self.toggles.pairs),
                densities: Some(self.toggles.densities),
                momentum: Some(self.toggles.momentum),
                peaks: Some(self.toggles.peaks),
                decimate: Some(self.decimate),
                momentum_limit: Some(self.momentum_limit),
                peak_threshold: Some(self.peak_threshold),
            },
            decay: DecaySection {
                order: Some(self.decay_order),
                window: self.window,
                synthetic: self.synthetic,
            },
            output: OutputSection {
                svg: Some(self.svg),
                save_matrices: Some(self.save_matrices),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str, command: Command) -> Result<Plan, ConfigError> {
        Plan::resolve(&RunConfig::parse(text)?, command, false, Overrides::default())
    }

    #[test]
    fn paper_defaults_fill_every_command() {
        let empty = RunConfig::default();
        let spectrum = Plan::resolve(&empty, Command::Spectrum, true, Overrides::default()).unwrap();
        assert_eq!(spectrum.depths.len(), 101);
        assert_eq!(spectrum.depths[57], -2.85);
        assert_eq!(spectrum.depths[100], -5.0);
        assert_eq!(spectrum.grid, Grid::spectrum_default());

        let evolve = Plan::resolve(&empty, Command::Evolve, true, Overrides::default()).unwrap();
        assert_eq!(evolve.potential.depth, -2.85);
        assert_eq!((evolve.potential.width, evolve.potential.edge), (3.2, 0.3));
        assert_eq!(evolve.ramp_duration, 4.7);
        assert_eq!(evolve.plateaus.len(), 41);
        assert_eq!(evolve.grid.dx(), Grid::spectrum_default().dx());

        let obs = Plan::resolve(&empty, Command::Observables, true, Overrides::default()).unwrap();
        assert_eq!((obs.potential.depth, obs.plateaus.as_slice()), (-3.6, &[90.0][..]));
        let decay = Plan::resolve(&empty, Command::Decay, true, Overrides::default()).unwrap();
        assert_eq!(decay.potential.depth, -3.6);
        assert_eq!(decay.decay_order, 2);
    }

    #[test]
    fn missing_inputs_name_their_field() {
        let err = resolve("", Command::Spectrum).unwrap_err();
        assert_eq!(err.field, "spectrum.depths");
        let err = resolve("[potential]\ndepth = -3.6\n", Command::Evolve).unwrap_err();
        assert_eq!(err.field, "ramp.plateaus");
        let err = resolve("[ramp]\nplateau = 50.0\n", Command::Observables).unwrap_err();
        assert_eq!(err.field, "potential.depth");
    }

    #[test]
    fn empty_depth_list_is_rejected() {
        let err = resolve("[spectrum]\ndepths = []\n", Command::Spectrum).unwrap_err();
        assert_eq!(err.field, "spectrum.depths");
    }

    #[test]
    fn short_decay_series_is_rejected() {
        let err = resolve("[potential]\ndepth = -3.6\n[ramp]\nplateaus = [10.0, 20.0, 30.0]\n", Command::Decay)
            .unwrap_err();
        assert_eq!(err.field, "ramp.plateaus");
        assert!(err.message.contains("at least 5"));
    }

    #[test]
    fn invalid_values_are_reported() {
        assert_eq!(resolve("[grid]\nx_min = 1.0\nx_max = 0.0\nn_points = 64\n", Command::Spectrum).unwrap_err().field, "grid");
        assert_eq!(
            resolve("[ramp]\nstep = 0.5\n[spectrum]\ndepths = [0.0]\n", Command::Spectrum).unwrap_err().field,
            "ramp.step"
        );
        assert_eq!(
            resolve("[ramp]\nscheme = \"euler\"\n[spectrum]\ndepths = [0.0]\n", Command::Spectrum)
                .unwrap_err()
                .field,
            "ramp.scheme"
        );
        assert_eq!(resolve("[potential]\nwdith = 3.0\n", Command::Spectrum).unwrap_err().field, "config");
    }

    #[test]
    fn range_expansion_lands_on_decimals() {
        let r = Range {
            start: 0.0,
            stop: 10.0,
            step: 2.5,
        };
        assert_eq!(r.expand("r").unwrap(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let back = Range {
            start: 1.0,
            stop: 0.0,
            step: 0.5,
        };
        assert!(back.expand("r").is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let config = RunConfig::parse("[observables]\ndecimate = 4\n").unwrap();
        let overrides = Overrides {
            decimate: Some(1),
            save_matrices: true,
            svg: false,
        };
        let plan = Plan::resolve(&config, Command::Observables, true, overrides).unwrap();
        assert_eq!(plan.decimate, 1);
        assert!(plan.save_matrices);
    }
}
