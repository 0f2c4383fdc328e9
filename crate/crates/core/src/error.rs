use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {0}: supported degrees are 1..={max}", max = crate::perm::MAX_DEGREE)]
    InvalidDegree(usize),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("cannot parse permutation {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("invalid set partition: {0}")]
    InvalidPartition(String),
    #[error("invalid transposition ({a} {b})")]
    InvalidTransposition { a: usize, b: usize },
    #[error("transposition ({a} {b}) out of range for degree {n}")]
    TranspositionOutOfRange { a: u8, b: u8, n: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not an interval: {u} is not below {v} in Bruhat order")]
    NotAnInterval { u: String, v: String },
    #[error("rank {rank} out of range for degree {n}")]
    RankOutOfRange { rank: u64, n: usize },
    #[error("{0}! does not fit the rank type")]
    FactorialOverflow(usize),
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),
    #[error("argument {value} outside the domain of {what}: {requirement}")]
    Domain {
        what: &'static str,
        value: i64,
        requirement: &'static str,
    },
    #[error("atom and coatom graphs of [{u}, {v}] have different components")]
    ComponentMismatch { u: String, v: String },
    #[error("bound chain violated on [{u}, {v}]: {detail}")]
    BoundChain {
        u: String,
        v: String,
        detail: String,
    },
    #[error("degree {n} unsupported here: {reason}")]
    Unsupported { n: usize, reason: String },
    #[error("cannot allocate {bytes} bytes for the order of S_{n}")]
    Allocation { n: usize, bytes: u64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("bad magic bytes")]
    Magic,
    #[error("unsupported cache format version {0}")]
    Version(u16),
    #[error("cache holds degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("truncated cache file ({0} bytes)")]
    Truncated(usize),
    #[error("malformed cache: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
