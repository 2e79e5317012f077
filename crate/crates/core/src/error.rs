use thiserror::Error;

/// Errors raised by the simulator. Variants are coarse on purpose; the
/// message carries the specifics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported coupling: j2 = {0} (only spin-1/2 steps are implemented)")]
    UnsupportedCoupling(String),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    SizeCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operator is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("invalid subspace spec: {0}")]
    InvalidSpec(String),
    #[error("register mismatch: {0}")]
    RegisterMismatch(String),
    #[error("amplitude amplification needs an odd round count, got {0}")]
    EvenRounds(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
