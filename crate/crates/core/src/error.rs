use thiserror::Error;

use crate::combinatorics::SubsetId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe of {0} labels exceeds the supported maximum of 128")]
    UniverseTooLarge(u32),
    #[error("label {label} is outside 1..={universe}")]
    LabelOutOfRange { label: u32, universe: u32 },
    #[error("label {0} appears more than once")]
    DuplicateLabel(u32),
    #[error("rank {index} out of range for {k}-subsets of [{n}]")]
    RankOutOfRange { index: u128, k: u32, n: u32 },

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),
    #[error("{user} is not a user of this network (expected an {access}-subset of [{caches}])")]
    UnknownUser { user: SubsetId, access: u32, caches: u32 },
    #[error("user {user} requests file {file}, outside 1..={files}")]
    FileOutOfRange { user: SubsetId, file: u32, files: u32 },
    #[error("file {file} is requested by both {first} and {second}; distinct demands required")]
    DuplicateDemand { file: u32, first: SubsetId, second: SubsetId },
    #[error("user {0} has no demand")]
    InactiveUser(SubsetId),
    #[error("request vector has {got} entries but the network has only {max} users")]
    TooManyDemands { got: usize, max: u128 },
    #[error("expected {expected} file payloads, got {got}")]
    PayloadCount { expected: u32, got: usize },
    #[error("payload {index} has length {got}, expected {expected}")]
    PayloadLength { index: usize, got: usize, expected: usize },
    #[error("{0} is too large to simulate")]
    TooLarge(String),
    #[error("decoding failed for user {user}: {detail}")]
    DecodeFailure { user: SubsetId, detail: String },

    #[error("memory fraction {0} is outside [0, 1]")]
    MemoryFractionOutOfRange(String),
    #[error("rate sequence is not convex around t = {0}")]
    NonConvex(u32),

    #[error("could not parse rational {0:?}")]
    ParseRational(String),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
