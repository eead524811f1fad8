//! Multileaved comparison of rankers: list construction, simulated clicks,
//! credit assignment and NDCG.

use alloc::vec::Vec;

mod click;
mod ndcg;
mod sosm;

pub use click::{simulate_clicks, ClickModel, ClickModelKind};
pub use ndcg::ndcg_at_k;
pub use sosm::{infer_pairwise_wins, restricted_rank, restricted_ranks, sosm_multileave, sosm_score};

/// Depth of the result page shown to users.
pub const PAGE_DEPTH: usize = 10;

/// Identifier of a document within one query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(pub u32);

/// One ranker's ordering of a query's documents; no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedList(pub Vec<DocId>);

impl RankedList {
    pub fn docs(&self) -> &[DocId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<DocId> for RankedList {
    fn from_iter<I: IntoIterator<Item = DocId>>(iter: I) -> Self {
        RankedList(iter.into_iter().collect())
    }
}

/// The merged list shown to the user.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultileavedList(pub Vec<DocId>);

impl MultileavedList {
    pub fn docs(&self) -> &[DocId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, d: DocId) -> bool {
        self.0.contains(&d)
    }
}

/// Clicked positions (0-based) of a multileaved list, ascending.
pub type ClickVector = Vec<usize>;

/// Credit per compared ranker, in the order the rankers were given.
pub type CreditVector = Vec<f64>;
