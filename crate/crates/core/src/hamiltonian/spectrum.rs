//! Static spectra across well depths and the count of supercritical levels.

use rayon::prelude::*;

use super::{build_hamiltonian, eigenspectrum, eigenvalues, PotentialSpec};
use crate::{Error, Grid, Result};

/// Minimum localization fraction for a state to join a resonance cluster,
/// on a box of length [`REFERENCE_LENGTH`]. A continuum state's share of
/// the well region falls as `1/L`, so the threshold is scaled likewise.
pub const ENHANCED_LOCALIZATION: f64 = 0.1;
/// Box length at which [`ENHANCED_LOCALIZATION`] applies unscaled.
pub const REFERENCE_LENGTH: f64 = 68.5;
/// Total localization a cluster needs to count as one dived bound state.
pub const CLUSTER_WEIGHT: f64 = 0.5;
/// Energy gap that separates two clusters of enhanced states.
const CLUSTER_GAP: f64 = 0.2;
/// Tolerance used when comparing energies against `-m c²`.
const EDGE_TOLERANCE: f64 = 1e-12;
/// Slack allowed in the interlacing check between two depths.
const WEYL_SLACK: f64 = 1e-9;

/// Eigenvalues and localization fractions at a single depth.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub depth: f64,
    pub energies: Vec<f64>,
    pub localization: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub grid: Grid,
    pub potential: PotentialSpec,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn depths(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.depth).collect()
    }
}

/// Diagonalizes the static Hamiltonian at each depth. Rows keep the order
/// of `depths`.
pub fn spectrum_sweep(grid: &Grid, potential: &PotentialSpec, depths: &[f64]) -> Result<SpectrumTable> {
    potential.validate()?;
    let radius = potential.localization_radius();
    let rows = depths
        .par_iter()
        .map(|&depth| {
            let spec = potential.with_depth(depth);
            let eig = eigenspectrum(&build_hamiltonian(grid, &spec, 1.0))?;
            Ok(SpectrumRow {
                depth,
                localization: eig.localizations(grid, radius),
                energies: eig.values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        grid: *grid,
        potential: *potential,
        rows,
    })
}

/// Number of bound states that have dived below `-m c²`, obtained two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupercriticalCount {
    /// Levels above the negative continuum at `V₀ = 0` that end up below
    /// `-1`, followed by eigenvalue index.
    pub by_continuation: usize,
    /// Clusters of states in `(V₀ − 1, −1)` concentrated inside the well.
    pub by_localization: usize,
    /// Set when the two counts disagree.
    pub ambiguous: bool,
}

impl SupercriticalCount {
    /// The continuation count, which is the one reported.
    pub fn value(&self) -> usize {
        self.by_continuation
    }
}

fn below_edge(energies: &[f64]) -> usize {
    energies.iter().filter(|&&e| e < -1.0 - EDGE_TOLERANCE).count()
}

/// Dived-level count from the sorted spectrum of the `2N`-dimensional
/// problem: every level beyond the `N` continuum states below `-1`.
fn index_count(energies: &[f64], n_grid: usize) -> usize {
    below_edge(energies).saturating_sub(n_grid)
}

/// Groups enhanced states by energy and counts clusters holding at least
/// [`CLUSTER_WEIGHT`] of localized probability.
pub(crate) fn localization_count(row: &SpectrumRow, threshold: f64) -> usize {
    let mut count = 0;
    let mut weight = 0.0;
    let mut last: Option<f64> = None;
    let window = row
        .energies
        .iter()
        .zip(&row.localization)
        .filter(|(&e, &l)| e > row.depth - 1.0 && e < -1.0 && l > threshold);
    for (&e, &l) in window {
        if let Some(prev) = last {
            if e - prev > CLUSTER_GAP {
                if weight >= CLUSTER_WEIGHT {
                    count += 1;
                }
                weight = 0.0;
            }
        }
        weight += l;
        last = Some(e);
    }
    if weight >= CLUSTER_WEIGHT {
        count += 1;
    }
    count
}

/// Depths from 0 to `depth` in increments no larger than `step`.
fn continuation_path(depth: f64, step: f64) -> Vec<f64> {
    let n = (depth.abs() / step).ceil().max(1.0) as usize;
    (0..=n).map(|k| depth * k as f64 / n as f64).collect()
}

/// Checks that eigenvalues move monotonically and by no more than the
/// depth increment, as they must for `H + ΔV₀·s(x)` with `0 ≤ s ≤ 1`.
fn check_interlacing(old: &[f64], new: &[f64], delta: f64) -> Result<()> {
    let (lo, hi) = if delta < 0.0 { (delta, 0.0) } else { (0.0, delta) };
    for (k, (a, b)) in old.iter().zip(new).enumerate() {
        let shift = b - a;
        if shift < lo - WEYL_SLACK || shift > hi + WEYL_SLACK {
            return Err(Error::Contract(format!(
                "level {k} moved by {shift:.3e}, outside [{lo:.3e}, {hi:.3e}]"
            )));
        }
    }
    Ok(())
}

/// Counts supercritical levels at `spec.depth`.
///
/// The continuation count follows levels by index from `V₀ = 0` in steps of
/// at most `step`, verifying at each step that no level moved further than
/// the potential allows. The localization count is computed independently
/// from the eigenvectors at the final depth.
pub fn count_supercritical(grid: &Grid, spec: &PotentialSpec, step: f64) -> Result<SupercriticalCount> {
    spec.validate()?;
    if !(step > 0.0) {
        return Err(Error::Config(format!("continuation step must be positive, got {step}")));
    }
    if spec.depth >= 0.0 {
        return Ok(SupercriticalCount {
            by_continuation: 0,
            by_localization: 0,
            ambiguous: false,
        });
    }
    let path = continuation_path(spec.depth, step);
    let spectra = path
        .par_iter()
        .map(|&d| eigenvalues(&build_hamiltonian(grid, &spec.with_depth(d), 1.0)))
        .collect::<Result<Vec<_>>>()?;
    for (k, pair) in spectra.windows(2).enumerate() {
        check_interlacing(&pair[0], &pair[1], path[k + 1] - path[k])?;
    }
    let n = grid.len();
    let by_continuation = index_count(spectra.last().expect("path is non-empty"), n);

    let table = spectrum_sweep(grid, spec, &[spec.depth])?;
    let threshold = ENHANCED_LOCALIZATION * REFERENCE_LENGTH / grid.length();
    let by_localization = localization_count(&table.rows[0], threshold);
    Ok(SupercriticalCount {
        by_continuation,
        by_localization,
        ambiguous: by_continuation != by_localization,
    })
}

/// Counts for every row of a sweep.
///
/// Rows with negative depth are visited in order of increasing `|V₀|` along a
/// single continuation path from `V₀ = 0`, with extra diagonalizations
/// inserted wherever neighbouring rows are more than `step` apart.
pub fn supercritical_counts(table: &SpectrumTable, step: f64) -> Result<Vec<SupercriticalCount>> {
    if !(step > 0.0) {
        return Err(Error::Config(format!("continuation step must be positive, got {step}")));
    }
    let grid = &table.grid;
    let n = grid.len();
    let mut order: Vec<usize> = (0..table.rows.len()).filter(|&i| table.rows[i].depth < 0.0).collect();
    order.sort_by(|&a, &b| table.rows[b].depth.total_cmp(&table.rows[a].depth));

    let mut fill = Vec::new();
    let mut previous = 0.0;
    for &i in &order {
        let depth = table.rows[i].depth;
        let segments = ((previous - depth) / step).ceil().max(1.0) as usize;
        for k in 1..segments {
            fill.push(previous + (depth - previous) * k as f64 / segments as f64);
        }
        previous = depth;
    }
    let mut extra = fill
        .par_iter()
        .map(|&d| Ok((d, eigenvalues(&build_hamiltonian(grid, &table.potential.with_depth(d), 1.0))?)))
        .collect::<Result<Vec<_>>>()?;
    extra.push((0.0, eigenvalues(&build_hamiltonian(grid, &table.potential.with_depth(0.0), 1.0))?));

    let mut path: Vec<(f64, &[f64])> = extra.iter().map(|(d, e)| (*d, e.as_slice())).collect();
    path.extend(order.iter().map(|&i| (table.rows[i].depth, table.rows[i].energies.as_slice())));
    path.sort_by(|a, b| b.0.total_cmp(&a.0));
    for pair in path.windows(2) {
        check_interlacing(pair[0].1, pair[1].1, pair[1].0 - pair[0].0)?;
    }

    let threshold = ENHANCED_LOCALIZATION * REFERENCE_LENGTH / grid.length();
    Ok(table
        .rows
        .iter()
        .map(|row| {
            if row.depth >= 0.0 {
                return SupercriticalCount {
                    by_continuation: 0,
                    by_localization: 0,
                    ambiguous: false,
                };
            }
            let by_continuation = index_count(&row.energies, n);
            let by_localization = localization_count(row, threshold);
            SupercriticalCount {
                by_continuation,
                by_localization,
                ambiguous: by_continuation != by_localization,
            }
        })
        .collect())
}

/// Bound levels between the continua followed across a set of depths.
#[derive(Debug, Clone)]
pub struct GapTrajectory {
    pub depths: Vec<f64>,
    /// `levels[k][i]` is the energy of the level with index `N + k` at
    /// `depths[i]`; level 0 is the first to dive.
    pub levels: Vec<Vec<f64>>,
}

impl GapTrajectory {
    /// Depth at which level `k` first crosses `-1`, by linear interpolation.
    pub fn diving_depth(&self, k: usize) -> Option<f64> {
        let level = self.levels.get(k)?;
        self.depths.windows(2).zip(level.windows(2)).find_map(|(d, e)| {
            if e[0] >= -1.0 && e[1] < -1.0 {
                Some(d[0] + (d[1] - d[0]) * (-1.0 - e[0]) / (e[1] - e[0]))
            } else {
                None
            }
        })
    }
}

/// Follows the `count` lowest levels of the upper half of the spectrum.
/// `depths` must be monotone starting from 0.
pub fn track_gap_levels(grid: &Grid, potential: &PotentialSpec, depths: &[f64], count: usize) -> Result<GapTrajectory> {
    if depths.windows(2).any(|w| (w[1] - w[0]) * (depths[depths.len() - 1] - depths[0]) < 0.0) {
        return Err(Error::Config("depths must be monotone".into()));
    }
    let n = grid.len();
    let spectra = depths
        .par_iter()
        .map(|&d| eigenvalues(&build_hamiltonian(grid, &potential.with_depth(d), 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let levels = (0..count.min(n))
        .map(|k| spectra.iter().map(|s| s[n + k]).collect())
        .collect();
    Ok(GapTrajectory {
        depths: depths.to_vec(),
        levels,
    })
}
