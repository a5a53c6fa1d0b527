#![allow(dead_code)]

use faer::Mat;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vacuumforge_core::bogoliubov::{OverlapMatrix, Species, TransitionBlocks};
use vacuumforge_core::C64;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Mat<C64> {
    Mat::from_fn(rows, cols, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Gram-Schmidt on the columns of a random matrix.
pub fn random_unitary(rng: &mut StdRng, dim: usize) -> Mat<C64> {
    let mut q = random_matrix(rng, dim, dim);
    for j in 0..dim {
        for k in 0..j {
            let overlap: C64 = (0..dim).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
            for i in 0..dim {
                let v = q[(i, k)];
                q[(i, j)] -= overlap * v;
            }
        }
        let norm = (0..dim).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..dim {
            q[(i, j)] /= norm;
        }
    }
    q
}

pub fn blocks(g: Mat<C64>) -> TransitionBlocks {
    TransitionBlocks::from_matrix(g, "test-grid".into(), "test-schedule".into()).unwrap()
}

/// `U diag(λ) U†` with eigenvalues drawn from `[0, 1]`; a fraction of them
/// is set to exactly 0 or 1.
pub fn random_contraction(rng: &mut StdRng, dim: usize) -> (OverlapMatrix, Vec<f64>) {
    let u = random_unitary(rng, dim);
    let lambdas: Vec<f64> = (0..dim)
        .map(|_| match rng.random_range(0..6) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random_range(0.0..1.0),
        })
        .collect();
    let m = Mat::from_fn(dim, dim, |i, j| {
        (0..dim).map(|k| u[(i, k)] * lambdas[k] * u[(j, k)].conj()).sum::<C64>()
    });
    let m = Mat::from_fn(dim, dim, |i, j| if i == j { C64::new(m[(i, i)].re, 0.0) } else { m[(i, j)] });
    (
        OverlapMatrix {
            matrix: m,
            species: Species::Electron,
        },
        lambdas,
    )
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<C64>>) -> C64 {
    let n = a.len();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
        }
    }
    det
}

/// Sum of all `k × k` principal minors of `m`.
pub fn principal_minor_sum(m: &Mat<C64>, k: usize) -> f64 {
    let n = m.nrows();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub = idx.iter().map(|&i| idx.iter().map(|&j| m[(i, j)]).collect()).collect();
            determinant(sub).re
        })
        .sum()
}
