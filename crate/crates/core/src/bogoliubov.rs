//! Transition amplitudes between free and evolved modes and the correlation
//! matrices of created electrons and positrons.

use faer::{Mat, Side};

use crate::propagator::{unitarity_defect, EvolvedBasis};
use crate::{Error, Result, C64};

/// Tolerance on the unitarity of the full transition matrix.
pub const TRANSITION_UNITARITY_LIMIT: f64 = 1e-7;
/// Eigenvalues of an overlap matrix below this are treated as zero.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Largest accepted `|tr S − tr S⁻|`.
pub const CHARGE_BALANCE_LIMIT: f64 = 1e-7;
const HERMITICITY_LIMIT: f64 = 1e-10;
const PAULI_SLACK: f64 = 1e-9;

/// `G(ν, ν')_{p, p'} = ⟨free ν, p | evolved ν', p'⟩` split by energy sign.
#[derive(Debug, Clone)]
pub struct TransitionBlocks {
    pub plus_plus: Mat<C64>,
    pub plus_minus: Mat<C64>,
    pub minus_plus: Mat<C64>,
    pub minus_minus: Mat<C64>,
    pub grid_fingerprint: String,
    pub schedule_fingerprint: String,
}

impl TransitionBlocks {
    /// Splits a `2n × 2n` transition matrix in flat mode order.
    pub fn from_matrix(g: Mat<C64>, grid_fingerprint: String, schedule_fingerprint: String) -> Result<Self> {
        let dim = g.nrows();
        if g.ncols() != dim || dim % 2 != 0 {
            return Err(Error::Ordering {
                expected: dim,
                found: g.ncols(),
            });
        }
        let n = dim / 2;
        let block = |r: usize, c: usize| Mat::from_fn(n, n, |i, j| g[(r + i, c + j)]);
        Ok(Self {
            plus_plus: block(0, 0),
            plus_minus: block(0, n),
            minus_plus: block(n, 0),
            minus_minus: block(n, n),
            grid_fingerprint,
            schedule_fingerprint,
        })
    }

    pub fn modes_per_sign(&self) -> usize {
        self.plus_plus.nrows()
    }

    /// The stacked `2n × 2n` matrix.
    pub fn full(&self) -> Mat<C64> {
        let n = self.modes_per_sign();
        Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.plus_plus[(i, j)],
            (true, false) => self.plus_minus[(i, j - n)],
            (false, true) => self.minus_plus[(i - n, j)],
            (false, false) => self.minus_minus[(i - n, j - n)],
        })
    }

    /// `max |G†G − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.full())
    }

    /// Fails with a contract error if the defect exceeds `limit`.
    pub fn check_unitarity(&self, limit: f64) -> Result<f64> {
        let defect = self.unitarity_defect();
        if defect > limit || !defect.is_finite() {
            return Err(Error::Contract(format!("transition matrix unitarity defect {defect:.3e}")));
        }
        Ok(defect)
    }
}

/// Assembles the blocks from evolved positive and negative modes.
pub fn transition_blocks(positive: &EvolvedBasis, negative: &EvolvedBasis) -> Result<TransitionBlocks> {
    if positive.grid_fingerprint != negative.grid_fingerprint
        || positive.schedule_fingerprint != negative.schedule_fingerprint
    {
        return Err(Error::GridMismatch);
    }
    let dim = positive.coefficients.nrows();
    let n = dim / 2;
    let expect = |evolved: &EvolvedBasis, range: std::ops::Range<usize>| -> Result<()> {
        if evolved.coefficients.nrows() != dim || evolved.modes != range.clone().collect::<Vec<_>>() {
            return Err(Error::Ordering {
                expected: range.len(),
                found: evolved.modes.len(),
            });
        }
        Ok(())
    };
    expect(positive, 0..n)?;
    expect(negative, n..dim)?;
    let g = Mat::from_fn(dim, dim, |i, j| {
        if j < n {
            positive.coefficients[(i, j)]
        } else {
            negative.coefficients[(i, j - n)]
        }
    });
    TransitionBlocks::from_matrix(g, positive.grid_fingerprint.clone(), positive.schedule_fingerprint.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Electron,
    Positron,
}

impl Species {
    pub fn name(self) -> &'static str {
        match self {
            Species::Electron => "electron",
            Species::Positron => "positron",
        }
    }
}

/// Hermitian correlation matrix of one species, indexed by the momenta of
/// the modes of that species' energy sign.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub matrix: Mat<C64>,
    pub species: Species,
}

impl OverlapMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        crate::hamiltonian::hermiticity_defect(&self.matrix)
    }

    /// Ascending eigenvalues, unclamped.
    pub fn raw_eigenvalues(&self) -> Result<Vec<f64>> {
        let values = self
            .matrix
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Solver(format!("{e:?}")))?;
        Ok(values)
    }

    /// Ascending eigenvalues with values below [`EIGENVALUE_FLOOR`] set to 0.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self
            .raw_eigenvalues()?
            .into_iter()
            .map(|l| if l < EIGENVALUE_FLOOR { 0.0 } else { l })
            .collect())
    }

    /// Checks Hermiticity and the bounds `0 ≤ λ ≤ 1`; returns the raw
    /// eigenvalues.
    pub fn check(&self) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > HERMITICITY_LIMIT {
            return Err(Error::Contract(format!(
                "{} overlap matrix not Hermitian: {defect:.3e}",
                self.species.name()
            )));
        }
        let values = self.raw_eigenvalues()?;
        if let (Some(&lo), Some(&hi)) = (values.first(), values.last()) {
            if lo < -PAULI_SLACK || hi > 1.0 + PAULI_SLACK {
                return Err(Error::Contract(format!(
                    "{} overlap eigenvalues outside [0, 1]: [{lo:.3e}, {hi:.12}]",
                    self.species.name()
                )));
            }
        }
        Ok(values)
    }
}

/// `M_{pq} = Σ_r conj(G_{pr}) G_{qr}`, i.e. `conj(G G†)`.
fn correlation(g: &Mat<C64>) -> Mat<C64> {
    let gg = g * g.adjoint();
    let n = gg.nrows();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(gg[(i, i)].re, 0.0)
        } else {
            gg[(i, j)].conj()
        }
    })
}

/// Electron correlation matrix from the `(+, −)` block.
pub fn build_s(blocks: &TransitionBlocks) -> OverlapMatrix {
    OverlapMatrix {
        matrix: correlation(&blocks.plus_minus),
        species: Species::Electron,
    }
}

/// Positron correlation matrix from the `(−, +)` block.
pub fn build_s_minus(blocks: &TransitionBlocks) -> OverlapMatrix {
    OverlapMatrix {
        matrix: correlation(&blocks.minus_plus),
        species: Species::Positron,
    }
}

/// Electrons and positrons are created in pairs, so both traces agree.
/// Returns `|tr S − tr S⁻|`.
pub fn check_charge_balance(s: &OverlapMatrix, s_minus: &OverlapMatrix) -> Result<f64> {
    let imbalance = (s.trace() - s_minus.trace()).abs();
    if imbalance > CHARGE_BALANCE_LIMIT {
        return Err(Error::Contract(format!("charge imbalance {imbalance:.3e}")));
    }
    Ok(imbalance)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 2-mode unitary mixing one positive and one negative mode by angle θ.
    fn rotation(theta: f64) -> TransitionBlocks {
        let (s, c) = theta.sin_cos();
        let g = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => C64::new(c, 0.0),
            (0, 1) => C64::new(0.0, s),
            _ => C64::new(0.0, s),
        });
        TransitionBlocks::from_matrix(g, "g".into(), "s".into()).unwrap()
    }

    #[test]
    fn toy_rotation_gives_sin_squared() {
        let theta = 0.37;
        let blocks = rotation(theta);
        assert!(blocks.unitarity_defect() < 1e-15);
        let s = build_s(&blocks);
        let sm = build_s_minus(&blocks);
        let expected = theta.sin().powi(2);
        assert!((s.eigenvalues().unwrap()[0] - expected).abs() < 1e-15);
        assert!((sm.eigenvalues().unwrap()[0] - expected).abs() < 1e-15);
        s.check().unwrap();
        assert!(check_charge_balance(&s, &sm).unwrap() < 1e-15);
        let lopsided = build_s(&rotation(0.2));
        assert!(matches!(check_charge_balance(&lopsided, &sm), Err(Error::Contract(_))));
    }

    #[test]
    fn identity_gives_no_pairs() {
        let g = Mat::<C64>::identity(6, 6);
        let blocks = TransitionBlocks::from_matrix(g, "g".into(), "s".into()).unwrap();
        let s = build_s(&blocks);
        assert_eq!(s.trace(), 0.0);
        assert!(s.eigenvalues().unwrap().iter().all(|&l| l == 0.0));
        assert_eq!(build_s_minus(&blocks).trace(), 0.0);
    }

    #[test]
    fn odd_dimension_rejected() {
        let g = Mat::<C64>::identity(3, 3);
        assert!(TransitionBlocks::from_matrix(g, "g".into(), "s".into()).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let g = Mat::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64));
        let blocks = TransitionBlocks::from_matrix(g.clone(), "g".into(), "s".into()).unwrap();
        assert_eq!(blocks.full(), g);
        assert_eq!(blocks.plus_minus[(1, 0)], C64::new(1.0, 2.0));
        assert_eq!(blocks.minus_plus[(0, 1)], C64::new(2.0, 1.0));
    }

    #[test]
    fn pauli_violation_is_reported() {
        let s = OverlapMatrix {
            matrix: Mat::from_fn(2, 2, |i, j| C64::new(if i == j { 1.5 } else { 0.0 }, 0.0)),
            species: Species::Electron,
        };
        assert!(matches!(s.check(), Err(Error::Contract(_))));
    }
}
