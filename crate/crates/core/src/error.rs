use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("arm {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
    #[error("invalid preference matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("duel between arms {winner} and {loser} was not part of the selected set")]
    UnselectedArm { winner: usize, loser: usize },
    #[error("unknown synthetic dataset `{0}`")]
    UnknownDataset(String),
    #[error("unknown query {0}")]
    UnknownQuery(u64),
    #[error("feature {0} not present in dataset")]
    UnknownFeature(u32),
    #[error("duplicate feature {0} in one document")]
    DuplicateFeature(u32),
    #[error("document not present in the multileaved sample")]
    DocumentNotInSample,
    #[error("dataset has no query with at least one document")]
    NoUsableQuery,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
