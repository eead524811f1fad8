//! Utility-based synthetic environments.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::{check_arms, resolve, Environment};
use crate::model::{ArmId, DuelOutcome, PreferenceMatrix};
use crate::{Error, Result};

/// Names accepted by [`make_synthetic_dataset`].
pub const SYNTHETIC_DATASETS: [&str; 15] = [
    "1good5poor",
    "1good50poor",
    "1good200poor",
    "2good4poor",
    "11good40poor",
    "41good160poor",
    "3good3poor",
    "21good30poor",
    "81good120poor",
    "arith6",
    "arith51",
    "arith201",
    "geom6",
    "geom51",
    "geom201",
];

const BEST: f64 = 0.8;
const GOOD: f64 = 0.7;
const POOR: f64 = 0.2;

fn tiers(good: usize, poor: usize) -> Vec<f64> {
    let mut u = vec![BEST];
    u.extend(core::iter::repeat_n(GOOD, good));
    u.extend(core::iter::repeat_n(POOR, poor));
    u
}

/// `n` terms from 0.7 down to 0.2, both endpoints included.
fn arithmetic(n: usize) -> Vec<f64> {
    let step = (GOOD - POOR) / (n - 1) as f64;
    let mut u = vec![BEST];
    u.extend((0..n).map(|i| if i + 1 == n { POOR } else { GOOD - step * i as f64 }));
    u
}

/// `n` terms from 0.7 down to 0.2 with a constant ratio.
fn geometric(n: usize) -> Vec<f64> {
    let ratio = libm::pow(POOR / GOOD, 1.0 / (n - 1) as f64);
    let mut u = vec![BEST];
    u.extend((0..n).map(|i| {
        if i + 1 == n {
            POOR
        } else {
            GOOD * libm::pow(ratio, i as f64)
        }
    }));
    u
}

/// Utility vector of a named synthetic dataset; arm 0 holds utility 0.8.
pub fn make_synthetic_dataset(name: &str) -> Result<Vec<f64>> {
    Ok(match name {
        "1good5poor" => tiers(0, 5),
        "1good50poor" => tiers(0, 50),
        "1good200poor" => tiers(0, 200),
        "2good4poor" => tiers(1, 4),
        "11good40poor" => tiers(10, 40),
        "41good160poor" => tiers(40, 160),
        "3good3poor" => tiers(2, 3),
        "21good30poor" => tiers(20, 30),
        "81good120poor" => tiers(80, 120),
        "arith6" => arithmetic(5),
        "arith51" => arithmetic(50),
        "arith201" => arithmetic(200),
        "geom6" => geometric(5),
        "geom51" => geometric(50),
        "geom201" => geometric(200),
        other => return Err(Error::UnknownDataset(other.to_string())),
    })
}

/// Arms with utilities; each round draws one unit-variance Gaussian score
/// per selected arm and resolves every pair from those scores.
#[derive(Debug, Clone)]
pub struct UtilityEnvironment {
    utilities: Vec<f64>,
    matrix: PreferenceMatrix,
}

impl UtilityEnvironment {
    pub fn new(utilities: Vec<f64>) -> Self {
        let matrix = PreferenceMatrix::from_utilities(&utilities);
        UtilityEnvironment { utilities, matrix }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        make_synthetic_dataset(name).map(Self::new)
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    /// Exact preferences `Φ((u_i − u_j)/√2)`.
    pub fn preference_matrix(&self) -> &PreferenceMatrix {
        &self.matrix
    }

    pub fn gaussian_round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>> {
        check_arms(arms, self.utilities.len())?;
        let scores: Vec<f64> = arms
            .iter()
            .map(|a| {
                let z: f64 = StandardNormal.sample(rng);
                self.utilities[a.0] + z
            })
            .collect();
        let mut out = Vec::with_capacity(arms.len() * arms.len().saturating_sub(1) / 2);
        for x in 0..arms.len() {
            for y in (x + 1)..arms.len() {
                out.push(resolve(arms[x], scores[x], arms[y], scores[y], rng));
            }
        }
        Ok(out)
    }
}

impl Environment for UtilityEnvironment {
    fn num_arms(&self) -> usize {
        self.utilities.len()
    }

    fn round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>> {
        self.gaussian_round(arms, rng)
    }
}
