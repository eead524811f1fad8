use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{check_arms, Environment};
use crate::model::{ArmId, DuelOutcome, PreferenceMatrix};
use crate::Result;

/// Every pair of the selected set duels independently with `P(i beats j) = p_ij`.
#[derive(Debug, Clone)]
pub struct MatrixEnvironment {
    matrix: PreferenceMatrix,
}

impl MatrixEnvironment {
    pub fn new(matrix: PreferenceMatrix) -> Self {
        MatrixEnvironment { matrix }
    }

    pub fn preference_matrix(&self) -> &PreferenceMatrix {
        &self.matrix
    }

    pub fn matrix_round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>> {
        check_arms(arms, self.matrix.num_arms())?;
        let mut out = Vec::with_capacity(arms.len() * arms.len().saturating_sub(1) / 2);
        for x in 0..arms.len() {
            for y in (x + 1)..arms.len() {
                let (i, j) = (arms[x], arms[y]);
                let u: f64 = rng.random();
                out.push(if u < self.matrix.get(i, j) {
                    DuelOutcome::new(i, j)
                } else {
                    DuelOutcome::new(j, i)
                });
            }
        }
        Ok(out)
    }
}

impl Environment for MatrixEnvironment {
    fn num_arms(&self) -> usize {
        self.matrix.num_arms()
    }

    fn round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>> {
        self.matrix_round(arms, rng)
    }
}

/// `k` arms where arm 0 beats every other arm with probability
/// `1/2 + margin` and all other pairs are even.
pub fn margin_matrix(k: usize, margin: f64) -> Result<PreferenceMatrix> {
    PreferenceMatrix::from_upper(k, |i, _| if i == 0 { 0.5 + margin } else { 0.5 })
}
