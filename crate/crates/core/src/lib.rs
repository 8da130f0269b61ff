//! Toolkit for studying a mean-set style statistical attack on group-based
//! challenge-response authentication.
//!
//! The crate is organized bottom-up: free-group word algebra ([`word`]),
//! platform groups with length/equality oracles ([`group`]), sample-weight
//! minimization machinery ([`meanset`]), the authentication protocol itself
//! ([`protocol`]), the eavesdropper's attack ([`attack`]), and the experiment
//! harness behind the CLI ([`harness`]).

pub mod attack;
pub mod group;
pub mod harness;
pub mod meanset;
pub mod protocol;
pub mod rng;
pub mod word;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("letter {letter} is outside the rank-{rank} alphabet")]
    LetterOutOfRange { letter: i64, rank: u32 },
    #[error("alphabet mismatch: rank {left} vs rank {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("cannot parse word from {input:?}: {reason}")]
    WordParse { input: String, reason: String },
    #[error("handle reduction exceeded its rewrite budget ({budget} rewrites, input length {len})")]
    ReductionBudget { budget: u64, len: usize },
    #[error("sample set must be nonempty")]
    EmptySample,
    #[error("candidate set must be nonempty")]
    EmptyCandidates,
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("transcript has no rounds with challenge {challenge}")]
    EmptyChallengeClass { challenge: u8 },
    #[error("work budget exhausted")]
    WorkBudget,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
