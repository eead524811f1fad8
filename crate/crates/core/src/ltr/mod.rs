//! Learning-to-rank data: queries with judged documents, single-feature
//! rankers and offline ground truth.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::multileave::{DocId, RankedList};
use crate::{Error, Result};

mod fixture;
mod truth;

pub use fixture::{generate_fixture, FixtureSpec};
pub use truth::{estimate_ground_truth, estimate_pair, ltr_distortion_fraction, ndcg_table, GroundTruth};

/// A judged document: sparse features sorted by id, and a relevance grade.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    features: Vec<(u32, f64)>,
    pub grade: u8,
}

impl Document {
    /// Sorts `features` by id; a repeated id is an error.
    pub fn new(grade: u8, mut features: Vec<(u32, f64)>) -> Result<Self> {
        features.sort_by_key(|&(f, _)| f);
        if let Some(w) = features.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateFeature(w[0].0));
        }
        Ok(Document { features, grade })
    }

    pub fn features(&self) -> &[(u32, f64)] {
        &self.features
    }

    /// Value of feature `f`, 0 when absent.
    pub fn feature(&self, f: u32) -> f64 {
        self.features
            .binary_search_by_key(&f, |&(id, _)| id)
            .map_or(0.0, |i| self.features[i].1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub id: u64,
    pub docs: Vec<Document>,
}

impl Query {
    pub fn grades(&self) -> Vec<u8> {
        self.docs.iter().map(|d| d.grade).collect()
    }
}

/// Queries in first-seen order. Document ids are positions within a query.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LtrDataset {
    queries: Vec<Query>,
}

impl LtrDataset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `doc` to query `qid`, creating the query if needed.
    pub fn push(&mut self, qid: u64, doc: Document) {
        match self.queries.iter_mut().rev().find(|q| q.id == qid) {
            Some(q) => q.docs.push(doc),
            None => self.queries.push(Query {
                id: qid,
                docs: alloc::vec![doc],
            }),
        }
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn num_queries(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn query(&self, qid: u64) -> Result<&Query> {
        self.queries
            .iter()
            .find(|q| q.id == qid)
            .ok_or(Error::UnknownQuery(qid))
    }

    pub fn max_grade(&self) -> u8 {
        self.documents().map(|d| d.grade).max().unwrap_or(0)
    }

    /// Smallest standard grade scale (0..=1, 0..=2 or 0..=4) holding every grade.
    pub fn grade_scale(&self) -> u8 {
        match self.max_grade() {
            0 | 1 => 1,
            2 => 2,
            g if g <= 4 => 4,
            g => g,
        }
    }

    pub fn feature_ids(&self) -> Vec<u32> {
        let ids: BTreeSet<u32> = self
            .documents()
            .flat_map(|d| d.features.iter().map(|&(f, _)| f))
            .collect();
        ids.into_iter().collect()
    }

    pub fn num_documents(&self) -> usize {
        self.queries.iter().map(|q| q.docs.len()).sum()
    }

    fn documents(&self) -> impl Iterator<Item = &Document> {
        self.queries.iter().flat_map(|q| q.docs.iter())
    }
}

fn rank_by_feature(q: &Query, f: u32) -> RankedList {
    let mut idx: Vec<usize> = (0..q.docs.len()).collect();
    // stable: ties keep document order
    idx.sort_by(|&a, &b| q.docs[b].feature(f).total_cmp(&q.docs[a].feature(f)));
    idx.into_iter().map(|i| DocId(i as u32)).collect()
}

/// Documents of query `qid` by descending value of feature `f`.
pub fn feature_ranker_rank(ds: &LtrDataset, qid: u64, f: u32) -> Result<RankedList> {
    Ok(rank_by_feature(ds.query(qid)?, f))
}

/// Every ranker's full ordering of every query, plus inverse positions.
#[derive(Debug, Clone)]
pub struct RankingTable {
    rankers: Vec<u32>,
    // [query][ranker]
    lists: Vec<Vec<RankedList>>,
    positions: Vec<Vec<Vec<u32>>>,
}

impl RankingTable {
    /// Fails when a ranker's feature never occurs in `ds`.
    pub fn build(ds: &LtrDataset, rankers: &[u32]) -> Result<Self> {
        let known = ds.feature_ids();
        if let Some(&f) = rankers.iter().find(|f| known.binary_search(f).is_err()) {
            return Err(Error::UnknownFeature(f));
        }
        let mut lists = Vec::with_capacity(ds.num_queries());
        let mut positions = Vec::with_capacity(ds.num_queries());
        for q in ds.queries() {
            let per: Vec<RankedList> = rankers.iter().map(|&f| rank_by_feature(q, f)).collect();
            positions.push(
                per.iter()
                    .map(|l| {
                        let mut pos = alloc::vec![0u32; l.len()];
                        for (p, d) in l.docs().iter().enumerate() {
                            pos[d.0 as usize] = p as u32;
                        }
                        pos
                    })
                    .collect(),
            );
            lists.push(per);
        }
        Ok(RankingTable {
            rankers: rankers.to_vec(),
            lists,
            positions,
        })
    }

    pub fn rankers(&self) -> &[u32] {
        &self.rankers
    }

    pub fn list(&self, query: usize, ranker: usize) -> &RankedList {
        &self.lists[query][ranker]
    }

    /// Position of document `d` in ranker `ranker`'s list for `query`.
    pub fn position(&self, query: usize, ranker: usize, d: DocId) -> u32 {
        self.positions[query][ranker][d.0 as usize]
    }
}
