//! Split-operator stepping through the ramps.
//!
//! The kinetic part `αp + β` is diagonal on the momentum lattice and is
//! exponentiated exactly per momentum. The potential part commutes with
//! itself at all times, so its factor over a sub-step is the exact phase
//! `exp(−i v(x) ∫f dt)`.

use std::collections::HashMap;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::hamiltonian::{PotentialSpec, RampSpec};
use crate::{DiracRepresentation, Grid, C64};

/// Composition used for one step of length `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Symmetric Strang splitting with the kinetic factor outside, second
    /// order.
    Strang,
    /// Triple-jump composition of Strang steps, fourth order.
    Yoshida4,
    /// Chin's forward scheme `V/6 · T/2 · 2V/3 · T/2 · V/6`. Its usual
    /// gradient-potential correction is `[V, [T, V]]`, which vanishes for the
    /// Dirac kinetic term, so the plain scheme is fourth order.
    #[default]
    Chin4,
}

impl Scheme {
    fn strang_weights(self) -> Vec<f64> {
        match self {
            Scheme::Yoshida4 => {
                let cbrt2 = 2f64.cbrt();
                let w1 = 1.0 / (2.0 - cbrt2);
                vec![w1, -cbrt2 * w1, w1]
            }
            _ => vec![1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Strang => "strang",
            Scheme::Yoshida4 => "yoshida4",
            Scheme::Chin4 => "chin4",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [Scheme::Strang, Scheme::Yoshida4, Scheme::Chin4]
            .into_iter()
            .find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, Copy)]
enum Stage {
    Kinetic(usize),
    Potential(usize),
}

/// Precompiled sequence of kinetic and potential factors over a window.
pub(crate) struct SplitStepper {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Per distinct duration: row-major 2×2 blocks per FFT bin, including the
    /// `1/n` of the inverse transform.
    kinetic: Vec<Vec<[C64; 4]>>,
    phases: Vec<Vec<C64>>,
    stages: Vec<Stage>,
}

impl SplitStepper {
    /// Stepper over `[t0, t1]` with `steps` equal steps.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        grid: &Grid,
        representation: DiracRepresentation,
        potential: &PotentialSpec,
        ramp: &RampSpec,
        t0: f64,
        t1: f64,
        steps: usize,
        scheme: Scheme,
    ) -> Self {
        let n = grid.len();
        let h = (t1 - t0) / steps as f64;
        let well: Vec<f64> = grid.positions().iter().map(|&x| potential.profile(x)).collect();

        // (is_kinetic, duration or potential area); neighbours of the same
        // kind are merged.
        let mut sequence: Vec<(bool, f64)> = Vec::new();
        let mut push = |kinetic: bool, amount: f64| match sequence.last_mut() {
            Some((k, acc)) if *k == kinetic => *acc += amount,
            _ => sequence.push((kinetic, amount)),
        };
        for k in 0..steps {
            let start = t0 + k as f64 * h;
            if scheme == Scheme::Chin4 {
                push(false, h / 6.0 * ramp.profile(start));
                push(true, 0.5 * h);
                push(false, 2.0 * h / 3.0 * ramp.profile(start + 0.5 * h));
                push(true, 0.5 * h);
                push(false, h / 6.0 * ramp.profile(start + h));
                continue;
            }
            let mut s = start;
            for w in scheme.strang_weights() {
                let tau = w * h;
                push(true, 0.5 * tau);
                push(false, ramp.integral(s, s + tau));
                push(true, 0.5 * tau);
                s += tau;
            }
        }

        let momenta = grid.fft_momenta();
        let coupling = representation.coupling();
        let mut table_index: HashMap<u64, usize> = HashMap::new();
        let mut kinetic = Vec::new();
        let mut phases = Vec::new();
        let mut stages = Vec::with_capacity(sequence.len());
        for (is_kinetic, a) in sequence {
            if is_kinetic {
                let idx = *table_index.entry(a.to_bits()).or_insert_with(|| {
                    kinetic.push(kinetic_table(&momenta, coupling, a));
                    kinetic.len() - 1
                });
                stages.push(Stage::Kinetic(idx));
            } else {
                phases.push(well.iter().map(|&v| C64::from_polar(1.0, -v * a)).collect());
                stages.push(Stage::Potential(phases.len() - 1));
            }
        }
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            kinetic,
            phases,
            stages,
        }
    }

    pub(crate) fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    /// Applies the whole window to component-major position values.
    pub(crate) fn apply(&self, values: &mut [C64], scratch: &mut [C64]) {
        let n = self.n;
        for stage in &self.stages {
            let (upper, lower) = values.split_at_mut(n);
            match *stage {
                Stage::Potential(i) => {
                    let phase = &self.phases[i];
                    for (v, f) in upper.iter_mut().zip(phase) {
                        *v *= f;
                    }
                    for (v, f) in lower.iter_mut().zip(phase) {
                        *v *= f;
                    }
                }
                Stage::Kinetic(i) => {
                    self.forward.process_with_scratch(upper, scratch);
                    self.forward.process_with_scratch(lower, scratch);
                    for ((u, l), m) in upper.iter_mut().zip(lower.iter_mut()).zip(&self.kinetic[i]) {
                        let (a, b) = (*u, *l);
                        *u = m[0] * a + m[1] * b;
                        *l = m[2] * a + m[3] * b;
                    }
                    self.inverse.process_with_scratch(upper, scratch);
                    self.inverse.process_with_scratch(lower, scratch);
                }
            }
        }
    }
}

/// `exp(−iτ h(p)) / n` with `h(p) = [[1, c p], [c̄ p, −1]]`, using
/// `h² = E²`: `cos(Eτ) − i sin(Eτ)/E · h`.
fn kinetic_table(momenta: &[f64], coupling: C64, tau: f64) -> Vec<[C64; 4]> {
    let scale = 1.0 / momenta.len() as f64;
    momenta
        .iter()
        .map(|&p| {
            let e = p.hypot(1.0);
            let (sin, cos) = (e * tau).sin_cos();
            let s = C64::new(0.0, -sin / e);
            let c = C64::new(cos, 0.0);
            [
                (c + s) * scale,
                s * coupling * p * scale,
                s * coupling.conj() * p * scale,
                (c - s) * scale,
            ]
        })
        .collect()
}
