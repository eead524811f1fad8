//! Cascade-style click simulation.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{ClickVector, MultileavedList};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClickModelKind {
    Perfect,
    Navigational,
    Informational,
}

impl ClickModelKind {
    pub const ALL: [ClickModelKind; 3] = [
        ClickModelKind::Perfect,
        ClickModelKind::Navigational,
        ClickModelKind::Informational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClickModelKind::Perfect => "perfect",
            ClickModelKind::Navigational => "navigational",
            ClickModelKind::Informational => "informational",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Per-grade click and stop probabilities; index = relevance grade.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClickModel {
    pub kind: ClickModelKind,
    pub click: Vec<f64>,
    pub stop: Vec<f64>,
}

impl ClickModel {
    /// Validates explicit parameters.
    pub fn new(kind: ClickModelKind, click: Vec<f64>, stop: Vec<f64>) -> Result<Self> {
        if click.is_empty() || click.len() != stop.len() {
            return Err(Error::Config(format!(
                "click model needs equally many click and stop probabilities, got {} and {}",
                click.len(),
                stop.len()
            )));
        }
        if click.iter().chain(&stop).any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("click model probabilities must lie in [0, 1]".into()));
        }
        if click.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("click probabilities must not decrease with grade".into()));
        }
        Ok(ClickModel { kind, click, stop })
    }

    /// Standard parameters for grade scales 0..=1, 0..=2 and 0..=4.
    pub fn preset(kind: ClickModelKind, max_grade: u8) -> Result<Self> {
        use ClickModelKind::*;
        let (click, stop): (&[f64], &[f64]) = match (kind, max_grade) {
            (Perfect, 1) => (&[0.0, 1.0], &[0.0, 0.0]),
            (Navigational, 1) => (&[0.05, 0.95], &[0.2, 0.9]),
            (Informational, 1) => (&[0.4, 0.9], &[0.1, 0.5]),
            (Perfect, 2) => (&[0.0, 0.5, 1.0], &[0.0, 0.0, 0.0]),
            (Navigational, 2) => (&[0.05, 0.5, 0.95], &[0.2, 0.5, 0.9]),
            (Informational, 2) => (&[0.4, 0.7, 0.9], &[0.1, 0.3, 0.5]),
            (Perfect, 4) => (&[0.0, 0.2, 0.4, 0.8, 1.0], &[0.0; 5]),
            (Navigational, 4) => (&[0.05, 0.3, 0.5, 0.7, 0.95], &[0.2, 0.3, 0.5, 0.7, 0.9]),
            (Informational, 4) => (&[0.4, 0.6, 0.7, 0.8, 0.9], &[0.1, 0.2, 0.3, 0.4, 0.5]),
            _ => {
                return Err(Error::Config(format!(
                    "no preset click model for grades 0..={max_grade}"
                )))
            }
        };
        Self::new(kind, click.to_vec(), stop.to_vec())
    }

    pub fn max_grade(&self) -> u8 {
        (self.click.len() - 1) as u8
    }

    fn level(&self, grade: u8) -> usize {
        (grade as usize).min(self.click.len() - 1)
    }
}

/// Scans `sample` top-down. A document is clicked with its grade's click
/// probability; after a click the user leaves with its stop probability.
/// `grade_of` returns `None` for unjudged documents, read as grade 0.
pub fn simulate_clicks<F>(
    sample: &MultileavedList,
    grade_of: F,
    model: &ClickModel,
    rng: &mut dyn RngCore,
) -> ClickVector
where
    F: Fn(super::DocId) -> Option<u8>,
{
    let mut clicks = Vec::new();
    for (pos, &d) in sample.docs().iter().enumerate() {
        let g = model.level(grade_of(d).unwrap_or(0));
        if rng.random_bool(model.click[g]) {
            clicks.push(pos);
            if rng.random_bool(model.stop[g]) {
                break;
            }
        }
    }
    clicks
}
