//! Pair-number moments `N_n` and n-pair probabilities `C_n`.

use crate::bogoliubov::OverlapMatrix;
use crate::{Error, Result};

pub const DEFAULT_NMAX: usize = 6;
/// Largest accepted deviation of `Σ C_n` from 1.
pub const PROBABILITY_SUM_LIMIT: f64 = 1e-8;

/// Elementary symmetric polynomials `e_0 … e_kmax` of `lambdas`
/// (coefficients of `Π(1 + λz)`).
pub fn elementary_symmetric(lambdas: &[f64], kmax: usize) -> Vec<f64> {
    let mut e = vec![0.0; kmax + 1];
    e[0] = 1.0;
    for (count, &l) in lambdas.iter().enumerate() {
        for k in (1..=kmax.min(count + 1)).rev() {
            e[k] += l * e[k - 1];
        }
    }
    e
}

/// Coefficients `C_0 … C_kmax` of `Π(1 − λ + λz)`.
pub fn generating_probabilities(lambdas: &[f64], kmax: usize) -> Vec<f64> {
    let mut c = vec![0.0; kmax + 1];
    c[0] = 1.0;
    for (count, &l) in lambdas.iter().enumerate() {
        for k in (0..=kmax.min(count + 1)).rev() {
            let shifted = if k > 0 { l * c[k - 1] } else { 0.0 };
            c[k] = (1.0 - l) * c[k] + shifted;
        }
    }
    c
}

/// `C_n = Σ_{m ≥ n} (−1)^{m+n} binom(m, n) N_m` with `N_0 = 1`. `numbers`
/// holds `N_0 … N_M` and must extend to the last nonzero moment.
pub fn alternating_probabilities(numbers: &[f64], nmax: usize) -> Vec<f64> {
    (0..=nmax)
        .map(|n| {
            let mut binom = 1.0;
            let mut total = 0.0;
            for (m, &nm) in numbers.iter().enumerate().skip(n) {
                if m > n {
                    binom = binom * m as f64 / (m - n) as f64;
                }
                let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * binom * nm;
            }
            total
        })
        .collect()
}

fn check_nmax(nmax: usize) -> Result<()> {
    if nmax < 1 {
        return Err(Error::Config("nmax must be at least 1".into()));
    }
    Ok(())
}

/// `N_1 … N_nmax`.
pub fn pair_numbers(s: &OverlapMatrix, nmax: usize) -> Result<Vec<f64>> {
    check_nmax(nmax)?;
    Ok(elementary_symmetric(&s.eigenvalues()?, nmax)[1..].to_vec())
}

/// `C_0 … C_nmax`.
pub fn pair_probabilities(s: &OverlapMatrix, nmax: usize) -> Result<Vec<f64>> {
    check_nmax(nmax)?;
    Ok(generating_probabilities(&s.eigenvalues()?, nmax))
}

#[derive(Debug, Clone)]
pub struct PairStatistics {
    /// Clamped eigenvalues of `S`, ascending.
    pub lambdas: Vec<f64>,
    /// `N_1 … N_nmax`.
    pub numbers: Vec<f64>,
    /// `C_0 … C_nmax`.
    pub probabilities: Vec<f64>,
    pub nmax: usize,
    /// `Σ C_n` over every order the nonzero eigenvalues allow.
    pub total_probability: f64,
    /// Largest difference between the generating-function and
    /// alternating-sum probabilities.
    pub path_discrepancy: f64,
}

impl PairStatistics {
    pub fn mean_pairs(&self) -> f64 {
        self.numbers[0]
    }

    pub fn check(&self) -> Result<()> {
        let defect = (self.total_probability - 1.0).abs();
        if defect > PROBABILITY_SUM_LIMIT {
            return Err(Error::Contract(format!("pair probabilities sum to 1 {defect:+.3e}")));
        }
        Ok(())
    }
}

/// Moments and probabilities, computed along both routes.
pub fn pair_statistics(s: &OverlapMatrix, nmax: usize) -> Result<PairStatistics> {
    check_nmax(nmax)?;
    let lambdas = s.eigenvalues()?;
    let rank = lambdas.iter().filter(|&&l| l > 0.0).count();
    let full = generating_probabilities(&lambdas, rank);
    let moments = elementary_symmetric(&lambdas, rank.max(nmax));
    let alternating = alternating_probabilities(&moments, nmax);
    let probabilities = generating_probabilities(&lambdas, nmax);
    let path_discrepancy = probabilities
        .iter()
        .zip(&alternating)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(PairStatistics {
        numbers: moments[1..=nmax].to_vec(),
        probabilities,
        nmax,
        total_probability: full.iter().sum(),
        path_discrepancy,
        lambdas,
    })
}
