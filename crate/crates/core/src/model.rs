//! Ground-truth preference structures, duel bookkeeping and regret.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::normal_cdf;
use crate::{Error, Result};

/// Index of an arm (a ranker) in `[0, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ArmId(pub usize);

impl ArmId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ArmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for ArmId {
    fn from(i: usize) -> Self {
        ArmId(i)
    }
}

/// One resolved pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DuelOutcome {
    pub winner: ArmId,
    pub loser: ArmId,
}

impl DuelOutcome {
    /// Panics if `winner == loser`; a duel always involves two distinct arms.
    pub fn new(winner: ArmId, loser: ArmId) -> Self {
        assert_ne!(winner, loser, "an arm cannot duel itself");
        DuelOutcome { winner, loser }
    }
}

const SYMMETRY_TOL: f64 = 1e-12;

/// Probability that `X_i > X_j` for independent unit-variance Gaussians
/// centred at `u_i` and `u_j`, i.e. `Φ((u_i − u_j)/√2)`.
pub fn closed_form_win_prob(u_i: f64, u_j: f64) -> f64 {
    normal_cdf((u_i - u_j) * core::f64::consts::FRAC_1_SQRT_2)
}

/// Ground-truth matrix `P = [p_ij]` of pairwise win probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    k: usize,
    p: Vec<f64>,
}

impl PreferenceMatrix {
    /// Validates a row-major `k × k` matrix.
    pub fn new(k: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != k * k {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for {k} arms, got {}",
                k * k,
                p.len()
            )));
        }
        let m = PreferenceMatrix { k, p };
        m.validate()?;
        Ok(m)
    }

    /// Builds a matrix from its strict upper triangle; the lower triangle is
    /// filled as `1 − p_ij` and the diagonal with 1/2.
    pub fn from_upper<F>(k: usize, mut upper: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut p = vec![0.5; k * k];
        for i in 0..k {
            for j in (i + 1)..k {
                let v = upper(i, j);
                p[i * k + j] = v;
                p[j * k + i] = 1.0 - v;
            }
        }
        Self::new(k, p)
    }

    /// Preferences induced by Gaussian utility scores.
    pub fn from_utilities(utilities: &[f64]) -> Self {
        Self::from_upper(utilities.len(), |i, j| closed_form_win_prob(utilities[i], utilities[j]))
            .expect("Gaussian preferences are always valid")
    }

    fn validate(&self) -> Result<()> {
        let k = self.k;
        for i in 0..k {
            if self.p[i * k + i] != 0.5 {
                return Err(Error::InvalidMatrix(format!("p[{i}][{i}] must be 1/2")));
            }
            for j in 0..k {
                let v = self.p[i * k + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMatrix(format!("p[{i}][{j}] = {v} not in [0, 1]")));
                }
                let s = v + self.p[j * k + i];
                if (s - 1.0).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidMatrix(format!(
                        "p[{i}][{j}] + p[{j}][{i}] = {s}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_arms(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: ArmId, j: ArmId) -> f64 {
        self.p[i.0 * self.k + j.0]
    }

    pub fn row(&self, i: ArmId) -> &[f64] {
        &self.p[i.0 * self.k..(i.0 + 1) * self.k]
    }

    /// Restriction of the matrix to `arms`, re-indexed in the given order.
    pub fn submatrix(&self, arms: &[ArmId]) -> Result<Self> {
        for a in arms {
            check_arm(*a, self.k)?;
        }
        let n = arms.len();
        let mut p = Vec::with_capacity(n * n);
        for &a in arms {
            for &b in arms {
                p.push(self.get(a, b));
            }
        }
        Self::new(n, p)
    }

    pub fn condorcet_winner(&self) -> Option<ArmId> {
        condorcet_winner(self)
    }
}

pub(crate) fn check_arm(arm: ArmId, k: usize) -> Result<()> {
    if arm.0 < k {
        Ok(())
    } else {
        Err(Error::ArmOutOfRange { arm: arm.0, arms: k })
    }
}

/// The arm whose off-diagonal row is strictly above 1/2, if any.
pub fn condorcet_winner(p: &PreferenceMatrix) -> Option<ArmId> {
    let k = p.num_arms();
    (0..k)
        .map(ArmId)
        .find(|&i| p.row(i).iter().enumerate().all(|(j, &v)| j == i.0 || v > 0.5))
}

fn require_non_empty(set: &[ArmId]) -> Result<()> {
    if set.is_empty() {
        Err(Error::Precondition("regret of an empty arm set".into()))
    } else {
        Ok(())
    }
}

/// Average regret of a set against the Condorcet winner `star`:
/// `Σ_{j∈S} p_{*j} / |S| − 1/2`.
pub fn set_regret(p: &PreferenceMatrix, star: ArmId, set: &[ArmId]) -> Result<f64> {
    require_non_empty(set)?;
    check_arm(star, p.num_arms())?;
    let row = p.row(star);
    let mut sum = 0.0;
    for &j in set {
        check_arm(j, p.num_arms())?;
        sum += row[j.0];
    }
    Ok(sum / set.len() as f64 - 0.5)
}

/// Average NDCG shortfall of a set relative to the best arm.
pub fn ndcg_set_regret(ndcg: &[f64], set: &[ArmId]) -> Result<f64> {
    require_non_empty(set)?;
    let best = ndcg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for &j in set {
        check_arm(j, ndcg.len())?;
        sum += best - ndcg[j.0];
    }
    Ok(sum / set.len() as f64)
}

/// Running duel statistics: `w[i][j]` counts wins of `i` over `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinCountMatrix {
    k: usize,
    w: Vec<u64>,
    total: u64,
}

impl WinCountMatrix {
    pub fn new(k: usize) -> Self {
        WinCountMatrix {
            k,
            w: vec![0; k * k],
            total: 0,
        }
    }

    /// Builds a matrix from explicit counts (row-major). Diagonal must be 0.
    pub fn from_counts(k: usize, w: Vec<u64>) -> Result<Self> {
        if w.len() != k * k {
            return Err(Error::Precondition(format!(
                "expected {} counts, got {}",
                k * k,
                w.len()
            )));
        }
        if (0..k).any(|i| w[i * k + i] != 0) {
            return Err(Error::Precondition("self-wins must be zero".into()));
        }
        let total = w.iter().sum();
        Ok(WinCountMatrix { k, w, total })
    }

    pub fn num_arms(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn wins(&self, i: ArmId, j: ArmId) -> u64 {
        self.w[i.0 * self.k + j.0]
    }

    /// `n_ij = w_ij + w_ji`.
    #[inline]
    pub fn comparisons(&self, i: ArmId, j: ArmId) -> u64 {
        self.wins(i, j) + self.wins(j, i)
    }

    /// Empirical `p̂_ij`, 1/2 for pairs never compared.
    #[inline]
    pub fn empirical(&self, i: ArmId, j: ArmId) -> f64 {
        let n = self.comparisons(i, j);
        if n == 0 {
            0.5
        } else {
            self.wins(i, j) as f64 / n as f64
        }
    }

    /// Total number of recorded outcomes.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn record(&mut self, outcome: DuelOutcome) -> Result<()> {
        check_arm(outcome.winner, self.k)?;
        check_arm(outcome.loser, self.k)?;
        if outcome.winner == outcome.loser {
            return Err(Error::Precondition("an arm cannot duel itself".into()));
        }
        self.w[outcome.winner.0 * self.k + outcome.loser.0] += 1;
        self.total += 1;
        Ok(())
    }

    /// Records every outcome, or none of them if any is invalid.
    pub fn record_duels(&mut self, outcomes: &[DuelOutcome]) -> Result<()> {
        for o in outcomes {
            check_arm(o.winner, self.k)?;
            check_arm(o.loser, self.k)?;
            if o.winner == o.loser {
                return Err(Error::Precondition("an arm cannot duel itself".into()));
            }
        }
        for &o in outcomes {
            self.record(o)?;
        }
        Ok(())
    }
}

/// One logged point of a regret trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: u64,
    pub instantaneous: f64,
    pub cumulative: f64,
}

/// Per-round regret accumulation with checkpointed logging.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegretTrace {
    cumulative: f64,
    rounds: u64,
    points: Vec<TracePoint>,
}

impl RegretTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the regret of round `rounds + 1`; logs it when `log` is set.
    pub fn push(&mut self, instantaneous: f64, log: bool) {
        self.rounds += 1;
        self.cumulative += instantaneous;
        if log {
            self.points.push(TracePoint {
                t: self.rounds,
                instantaneous,
                cumulative: self.cumulative,
            });
        }
    }

    pub fn cumulative(&self) -> f64 {
        self.cumulative
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }
}
