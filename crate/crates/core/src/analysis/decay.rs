use crate::{Error, Result};

/// Share of the samples, taken from the end, averaged for `C_n(∞)`.
const TAIL_FRACTION: f64 = 0.1;
/// Share of the samples, taken from the start, left out of the default fit.
const TRANSIENT_FRACTION: f64 = 0.2;
/// Tail variance above which the asymptote is flagged.
const TAIL_VARIANCE_LIMIT: f64 = 0.05;
/// Smallest `d` accepted inside a fit window.
const DECAY_FLOOR: f64 = 1e-12;

/// `d_n(T) = |C_n(∞) − C_n(T)|` sampled over increasing `T`.
#[derive(Debug, Clone)]
pub struct DecaySeries {
    pub n: usize,
    pub times: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// Mean of the last tenth of the samples.
    pub asymptote: f64,
    /// Standard deviation of the samples entering the asymptote.
    pub tail_spread: f64,
    /// False when the tail varies too much to define an asymptote.
    pub reliable: bool,
    pub decay: Vec<f64>,
}

impl DecaySeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn tail_start(&self) -> usize {
        tail_start(self.len())
    }
}

fn tail_start(len: usize) -> usize {
    len - ((len as f64 * TAIL_FRACTION).ceil() as usize).max(1)
}

pub fn decay_series(times: &[f64], probabilities: &[f64], n: usize) -> Result<DecaySeries> {
    if times.len() != probabilities.len() {
        return Err(Error::Ordering {
            expected: times.len(),
            found: probabilities.len(),
        });
    }
    if times.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "decay series needs at least 5 samples, got {}",
            times.len()
        )));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("interaction times must be strictly increasing".into()));
    }
    let (first, last) = (times[0], times[times.len() - 1]);
    if last < 3.0 * first {
        return Err(Error::InsufficientData(format!(
            "largest interaction time {last} is less than three times the smallest {first}"
        )));
    }
    let tail = &probabilities[tail_start(times.len())..];
    let asymptote = tail.iter().sum::<f64>() / tail.len() as f64;
    let variance = tail.iter().map(|c| (c - asymptote).powi(2)).sum::<f64>() / tail.len() as f64;
    Ok(DecaySeries {
        n,
        times: times.to_vec(),
        probabilities: probabilities.to_vec(),
        asymptote,
        tail_spread: variance.sqrt(),
        reliable: variance <= TAIL_VARIANCE_LIMIT,
        decay: probabilities.iter().map(|c| (asymptote - c).abs()).collect(),
    })
}

/// Closed interval of interaction times used in a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub start: f64,
    pub end: f64,
}

impl FitWindow {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// Skips the first fifth of the samples and stops before `d` first sinks
/// to ten times the scatter of the tail or before the samples that define
/// the asymptote, whichever comes first.
pub fn default_window(series: &DecaySeries) -> FitWindow {
    let len = series.len();
    let first = ((len as f64 * TRANSIENT_FRACTION).ceil() as usize).min(len - 1);
    let noise = (10.0 * series.tail_spread).max(DECAY_FLOOR);
    let mut last = first;
    for i in first..series.tail_start() {
        if series.decay[i] <= noise {
            break;
        }
        last = i;
    }
    FitWindow {
        start: series.times[first],
        end: series.times[last],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// Decay rate: `d ≈ exp(intercept − γT)`.
    pub gamma: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `ln d`.
    pub residual: f64,
    pub window: FitWindow,
    pub points: usize,
}

/// Least-squares line through `ln d` against `T` inside `window`.
pub fn fit_exponential(series: &DecaySeries, window: FitWindow) -> Result<ExponentialFit> {
    let samples: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.decay)
        .filter(|(t, _)| window.contains(**t))
        .map(|(&t, &d)| (t, d))
        .collect();
    if let Some((t, d)) = samples.iter().find(|(_, d)| *d <= DECAY_FLOOR) {
        return Err(Error::InsufficientData(format!(
            "decay {d:.3e} at T = {t} is too small to fit"
        )));
    }
    if samples.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "exponential fit needs at least 4 points, window holds {}",
            samples.len()
        )));
    }
    let m = samples.len() as f64;
    let mean_t = samples.iter().map(|s| s.0).sum::<f64>() / m;
    let mean_y = samples.iter().map(|s| s.1.ln()).sum::<f64>() / m;
    let (mut stt, mut sty) = (0.0, 0.0);
    for &(t, d) in &samples {
        stt += (t - mean_t).powi(2);
        sty += (t - mean_t) * (d.ln() - mean_y);
    }
    let slope = sty / stt;
    let intercept = mean_y - slope * mean_t;
    let residual = (samples
        .iter()
        .map(|&(t, d)| (d.ln() - intercept - slope * t).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(ExponentialFit {
        gamma: -slope,
        intercept,
        residual,
        window,
        points: samples.len(),
    })
}
