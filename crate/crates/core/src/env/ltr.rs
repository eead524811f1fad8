//! Simulated online evaluation of feature rankers: one sampled query per
//! round, a multileaved result page, simulated clicks and inferred duels.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{check_arms, Environment};
use crate::ltr::{ndcg_table, LtrDataset, RankingTable};
use crate::model::{ArmId, DuelOutcome};
use crate::multileave::{infer_pairwise_wins, simulate_clicks, sosm_multileave, ClickModel, RankedList, PAGE_DEPTH};
use crate::{Error, Result};

/// Outcome of one simulated query.
#[derive(Debug, Clone, PartialEq)]
pub struct LtrRound {
    pub outcomes: Vec<DuelOutcome>,
    pub query: u64,
}

#[derive(Debug, Clone)]
pub struct LtrEnvironment {
    query_ids: Vec<u64>,
    grades: Vec<Vec<u8>>,
    table: RankingTable,
    model: ClickModel,
    depth: usize,
    ndcg: Vec<f64>,
}

impl LtrEnvironment {
    /// Arm `i` is the ranker ordering documents by feature `rankers[i]`.
    pub fn new(ds: &LtrDataset, rankers: &[u32], model: ClickModel) -> Result<Self> {
        if rankers.is_empty() {
            return Err(Error::Config("at least one ranker is required".into()));
        }
        if ds.queries().iter().all(|q| q.docs.is_empty()) {
            return Err(Error::NoUsableQuery);
        }
        let table = RankingTable::build(ds, rankers)?;
        let ndcg = ndcg_table(ds, &table);
        Ok(LtrEnvironment {
            query_ids: ds.queries().iter().map(|q| q.id).collect(),
            grades: ds.queries().iter().map(|q| q.grades()).collect(),
            table,
            model,
            depth: PAGE_DEPTH,
            ndcg,
        })
    }

    pub fn rankers(&self) -> &[u32] {
        self.table.rankers()
    }

    pub fn click_model(&self) -> &ClickModel {
        &self.model
    }

    /// Mean NDCG@10 of every ranker over all queries.
    pub fn ndcg_table(&self) -> &[f64] {
        &self.ndcg
    }

    fn sample_query(&self, rng: &mut dyn RngCore) -> usize {
        loop {
            let q = rng.random_range(0..self.grades.len());
            if !self.grades[q].is_empty() {
                return q;
            }
            log::debug!("skipping query {} without documents", self.query_ids[q]);
        }
    }

    pub fn ltr_round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<LtrRound> {
        check_arms(arms, self.table.rankers().len())?;
        let q = self.sample_query(rng);
        let query = self.query_ids[q];
        if arms.len() < 2 {
            return Ok(LtrRound {
                outcomes: Vec::new(),
                query,
            });
        }
        let lists: Vec<RankedList> = arms.iter().map(|a| self.table.list(q, a.0).clone()).collect();
        let sample = sosm_multileave(&lists, self.depth, rng);
        let grades = &self.grades[q];
        let clicks = simulate_clicks(&sample, |d| grades.get(d.0 as usize).copied(), &self.model, rng);
        let mut credits = alloc::vec![0.0; arms.len()];
        if !clicks.is_empty() {
            // every ranker orders every document, so the restricted rank is
            // one plus the number of shown documents placed above
            let mut pos = Vec::with_capacity(sample.len());
            for (r, a) in arms.iter().enumerate() {
                pos.clear();
                pos.extend(sample.docs().iter().map(|&d| self.table.position(q, a.0, d)));
                credits[r] = clicks
                    .iter()
                    .map(|&c| {
                        let rank = 1 + pos.iter().filter(|&&p| p < pos[c]).count();
                        1.0 / rank as f64
                    })
                    .sum();
            }
        }
        let outcomes = infer_pairwise_wins(&credits, rng)
            .into_iter()
            .map(|o| DuelOutcome::new(arms[o.winner.0], arms[o.loser.0]))
            .collect();
        Ok(LtrRound { outcomes, query })
    }
}

impl Environment for LtrEnvironment {
    fn num_arms(&self) -> usize {
        self.table.rankers().len()
    }

    fn round(&self, arms: &[ArmId], rng: &mut dyn RngCore) -> Result<Vec<DuelOutcome>> {
        self.ltr_round(arms, rng).map(|r| r.outcomes)
    }
}
