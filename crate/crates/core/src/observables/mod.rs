//! Pair numbers, n-pair probabilities, spatial densities and momentum
//! spectra from the correlation matrices.

mod density;
mod pairs;

pub use density::{density_one, density_two, DensityTable, SpatialKernel};
pub use pairs::{
    alternating_probabilities, elementary_symmetric, generating_probabilities, pair_numbers, pair_probabilities,
    pair_statistics, PairStatistics, DEFAULT_NMAX, PROBABILITY_SUM_LIMIT,
};

use faer::Mat;

use crate::bogoliubov::{OverlapMatrix, Species};
use crate::units::free_energy;

/// `χ₁` and `χ₂` over the momentum lattice of one species.
#[derive(Debug, Clone)]
pub struct MomentumSpectrum {
    pub species: Species,
    pub momenta: Vec<f64>,
    pub chi1: Vec<f64>,
    pub chi2: Mat<f64>,
}

/// `χ₁(p) = M_{pp}`.
pub fn momentum_spectrum_one(m: &OverlapMatrix) -> Vec<f64> {
    m.diagonal()
}

/// `χ₂(p, q) = ½(M_{pp} M_{qq} − |M_{pq}|²)`.
pub fn momentum_spectrum_two(m: &OverlapMatrix) -> Mat<f64> {
    let n = m.dim();
    let diag = m.diagonal();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        let (a, b) = (i.min(j), i.max(j));
        0.5 * (diag[a] * diag[b] - m.matrix[(a, b)].norm_sqr())
    })
}

/// Both spectra, tagged with the lattice momenta in ascending order.
pub fn momentum_spectrum(m: &OverlapMatrix, momenta: &[f64]) -> MomentumSpectrum {
    MomentumSpectrum {
        species: m.species,
        momenta: momenta.to_vec(),
        chi1: momentum_spectrum_one(m),
        chi2: momentum_spectrum_two(m),
    }
}

/// Kinetic energy `√(p² + 1)` of a free particle with momentum `p`.
pub fn momentum_to_energy(p: f64) -> f64 {
    free_energy(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn overlap(values: &[[f64; 2]], n: usize) -> OverlapMatrix {
        OverlapMatrix {
            matrix: Mat::from_fn(n, n, |i, j| {
                let [re, im] = values[i * n + j];
                C64::new(re, im)
            }),
            species: Species::Positron,
        }
    }

    #[test]
    fn energies_from_momenta() {
        assert_eq!(momentum_to_energy(0.0), 1.0);
        assert!((momentum_to_energy(0.96) - 1.386).abs() < 1e-3);
        assert!((momentum_to_energy(1.98) - 2.218).abs() < 1e-3);
    }

    #[test]
    fn chi2_has_zero_diagonal_and_symmetry() {
        let m = overlap(
            &[
                [0.5, 0.0], [0.1, 0.2], [0.0, 0.1],
                [0.1, -0.2], [0.3, 0.0], [0.05, 0.0],
                [0.0, -0.1], [0.05, 0.0], [0.2, 0.0],
            ],
            3,
        );
        let chi2 = momentum_spectrum_two(&m);
        for i in 0..3 {
            assert_eq!(chi2[(i, i)], 0.0);
            for j in 0..3 {
                assert_eq!(chi2[(i, j)], chi2[(j, i)]);
            }
        }
        // ½(0.5·0.3 − (0.01 + 0.04))
        assert!((chi2[(0, 1)] - 0.05).abs() < 1e-15);
        assert_eq!(momentum_spectrum_one(&m), vec![0.5, 0.3, 0.2]);
    }

    #[test]
    fn zero_matrix_gives_empty_spectra() {
        let m = overlap(&[[0.0, 0.0]; 4], 2);
        assert!(momentum_spectrum_one(&m).iter().all(|&v| v == 0.0));
        assert_eq!(momentum_spectrum_two(&m).norm_max(), 0.0);
    }
}
