//! End-to-end runs on small lattices.

mod common;

use faer::Mat;
use vacuumforge_core::bogoliubov::{build_s, OverlapMatrix, Species};
use vacuumforge_core::hamiltonian::{PotentialSpec, RampSpec};
use vacuumforge_core::observables::{density_one, density_two, pair_statistics, SpatialKernel};
use vacuumforge_core::propagator::{Schedule, TransitionSweep};
use vacuumforge_core::{DiracRepresentation, FreeBasis, Grid, C64};

fn schedule(depth: f64) -> Schedule {
    Schedule::new(PotentialSpec::paper_well(depth), RampSpec::new(4.7, 0.0).unwrap()).unwrap()
}

fn small_grid() -> Grid {
    Grid::new(-12.0, 12.0, 64).unwrap()
}

#[test]
fn no_potential_creates_nothing() {
    let basis = FreeBasis::new(small_grid());
    let sweep = TransitionSweep::new(&basis, &schedule(0.0)).unwrap();
    for t in [0.0, 13.0, 93.0] {
        let stats = pair_statistics(&build_s(&sweep.blocks(t).unwrap()), 3).unwrap();
        assert!((stats.probabilities[0] - 1.0).abs() <= 1e-10, "C0 = {}", stats.probabilities[0]);
        assert!(stats.mean_pairs().abs() <= 1e-10);
    }
}

#[test]
fn representation_does_not_change_probabilities() {
    let grid = small_grid();
    let s = schedule(-3.6);
    let probabilities = |repr| {
        let basis = FreeBasis::with_representation(grid, repr);
        let sweep = TransitionSweep::new(&basis, &s).unwrap();
        pair_statistics(&build_s(&sweep.blocks(10.0).unwrap()), 4).unwrap().probabilities
    };
    let a = probabilities(DiracRepresentation::Sigma1);
    let b = probabilities(DiracRepresentation::Sigma2);
    assert!(a[1] > 0.1, "{a:?}");
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-8, "{a:?} vs {b:?}");
    }
}

#[test]
fn densities_integrate_to_pair_moments() {
    let grid = small_grid();
    let basis = FreeBasis::new(grid);
    let sweep = TransitionSweep::new(&basis, &schedule(-3.6)).unwrap();
    let s = build_s(&sweep.blocks(20.0).unwrap());
    let stats = pair_statistics(&s, 2).unwrap();
    let dx = grid.dx();

    let rho1 = density_one(&s, &basis).unwrap();
    assert!(rho1.iter().all(|&r| r >= -1e-9));
    let n1 = rho1.iter().sum::<f64>() * dx;
    assert!((n1 - stats.numbers[0]).abs() <= 1e-6, "{n1} vs {}", stats.numbers[0]);

    let rho2 = density_two(&s, &basis, 1).unwrap();
    let m = rho2.positions.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            assert_eq!(rho2.values[(i, j)], rho2.values[(j, i)]);
            total += rho2.values[(i, j)];
        }
    }
    let n2 = total * dx * dx;
    assert!((n2 - stats.numbers[1]).abs() <= 1e-6, "{n2} vs {}", stats.numbers[1]);
}

#[test]
fn decimated_pair_density_samples_the_full_table() {
    let grid = small_grid();
    let basis = FreeBasis::new(grid);
    let mut rng = common::rng(7);
    let (s, _) = common::random_contraction(&mut rng, grid.len());
    let full = density_two(&s, &basis, 1).unwrap();
    let coarse = density_two(&s, &basis, 4).unwrap();
    assert_eq!(coarse.positions.len(), 16);
    for i in 0..16 {
        assert_eq!(coarse.positions[i], full.positions[4 * i]);
        for j in 0..16 {
            assert!((coarse.values[(i, j)] - full.values[(4 * i, 4 * j)]).abs() <= 1e-14);
        }
    }
}

#[test]
fn single_mode_cannot_host_two_electrons() {
    let grid = small_grid();
    let basis = FreeBasis::new(grid);
    let mut rng = common::rng(11);
    let v = common::random_matrix(&mut rng, grid.len(), 1);
    let norm = (0..grid.len()).map(|i| v[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    let s = OverlapMatrix {
        matrix: Mat::from_fn(grid.len(), grid.len(), |i, j| v[(i, 0)] * v[(j, 0)].conj() / (norm * norm)),
        species: Species::Electron,
    };
    let rho2 = density_two(&s, &basis, 1).unwrap();
    let scale = density_one(&s, &basis).unwrap().iter().fold(0.0f64, |a, &b| a.max(b));
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            assert!(rho2.values[(i, j)].abs() <= 1e-12 * scale * scale);
        }
    }
}

#[test]
fn kernel_rejects_positron_matrices() {
    let grid = small_grid();
    let s = OverlapMatrix {
        matrix: Mat::<C64>::zeros(grid.len(), grid.len()),
        species: Species::Positron,
    };
    assert!(SpatialKernel::new(&s, &FreeBasis::new(grid)).is_err());
}

#[test]
fn single_pair_electron_stays_near_the_well() {
    let grid = Grid::new(-17.125, 17.125, 256).unwrap();
    let basis = FreeBasis::new(grid);
    let sweep = TransitionSweep::new(&basis, &schedule(-2.85)).unwrap();
    let s = build_s(&sweep.blocks(90.0).unwrap());
    let rho1 = density_one(&s, &basis).unwrap();
    let total: f64 = rho1.iter().sum();
    let inside: f64 = grid
        .positions()
        .iter()
        .zip(&rho1)
        .filter(|(x, _)| x.abs() <= 5.0)
        .map(|(_, r)| r)
        .sum();
    assert!(inside > 0.8 * total, "only {:.3} of the electron density lies within |x| <= 5", inside / total);
}
