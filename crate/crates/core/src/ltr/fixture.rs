//! Synthetic LETOR-style datasets with controllable feature quality.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::RngCore;
use rand_distr::StandardNormal;

use super::{Document, LtrDataset};
use crate::{Error, Result};

/// Feature `f` of a document with grade `g` is `quality_f · g + N(0, 1)`.
/// The dominant feature gets `dominant_quality`; the others are spread
/// evenly from `weak_quality` down to 0 in id order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct FixtureSpec {
    pub queries: usize,
    pub docs_per_query: usize,
    pub features: u32,
    pub dominant_feature: u32,
    pub dominant_quality: f64,
    pub weak_quality: f64,
    /// Probability of each grade, starting at grade 0.
    pub grade_weights: Vec<f64>,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            queries: 50,
            docs_per_query: 30,
            features: 20,
            dominant_feature: 1,
            dominant_quality: 2.0,
            weak_quality: 0.6,
            grade_weights: alloc::vec![0.6, 0.3, 0.1],
        }
    }
}

impl FixtureSpec {
    /// Quality of every feature, indexed by `id - 1`.
    pub fn qualities(&self) -> Vec<f64> {
        let weak = self.features.saturating_sub(1).max(1) as f64;
        let mut rank = 0.0;
        (1..=self.features)
            .map(|f| {
                if f == self.dominant_feature {
                    self.dominant_quality
                } else {
                    let q = self.weak_quality * (1.0 - rank / weak);
                    rank += 1.0;
                    q
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.queries == 0 || self.docs_per_query == 0 || self.features == 0 {
            return Err(Error::Config("fixture needs queries, documents and features".into()));
        }
        if !(1..=self.features).contains(&self.dominant_feature) {
            return Err(Error::Config(format!(
                "dominant feature {} outside 1..={}",
                self.dominant_feature, self.features
            )));
        }
        if self.grade_weights.len() < 2 || self.grade_weights.len() > 256 {
            return Err(Error::Config("fixture needs between 2 and 256 grade weights".into()));
        }
        if self.grade_weights.iter().any(|w| !w.is_finite() || *w < 0.0)
            || self.grade_weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::Config(
                "grade weights must be non-negative with a positive sum".into(),
            ));
        }
        Ok(())
    }
}

/// Generates a dataset with query ids `1..=queries` and feature ids `1..=features`.
pub fn generate_fixture(spec: &FixtureSpec, rng: &mut dyn RngCore) -> Result<LtrDataset> {
    spec.validate()?;
    let grades = WeightedIndex::new(&spec.grade_weights).map_err(|e| Error::Config(format!("grade weights: {e}")))?;
    let qualities = spec.qualities();
    let mut ds = LtrDataset::new();
    for qid in 1..=spec.queries as u64 {
        for _ in 0..spec.docs_per_query {
            let g = grades.sample(rng) as u8;
            let features = qualities
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    let z: f64 = StandardNormal.sample(rng);
                    (i as u32 + 1, q * g as f64 + z)
                })
                .collect();
            ds.push(qid, Document::new(g, features)?);
        }
    }
    Ok(ds)
}
