//! Multi-dueling bandits for online ranker evaluation.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece of the simulator:
//!
//! * [`model`]: preference matrices, duel bookkeeping and both regret notions.
//! * [`policy`]: MDB and the dueling-bandit baselines (RUCB, RMED1,
//!   MergeRUCB) plus a uniform random policy.
//! * [`env`]: comparison mechanisms turning a selected arm set into duels.
//! * [`multileave`]: SOSM multileaving, click models and NDCG.
//! * [`ltr`]: learning-to-rank datasets, feature rankers and ground truth.
//! * [`sim`]: the single-replicate simulation loop.
//!
//! File formats, configuration and the CLI live in the `mdb-harness` crate.
#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod env;
mod error;
pub mod ltr;
mod math;
pub mod model;
pub mod multileave;
pub mod policy;
pub mod sim;

pub use error::{Error, Result};
pub use math::{binary_kl, normal_cdf};
pub use model::{
    closed_form_win_prob, condorcet_winner, ndcg_set_regret, set_regret, ArmId, DuelOutcome, PreferenceMatrix,
    RegretTrace, WinCountMatrix,
};
