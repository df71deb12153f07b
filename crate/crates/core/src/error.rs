use thiserror::Error;

/// Errors raised by the library. Report-style checks (MDP validation, kernel
/// checks) return reports instead of errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("discount {name} = {value} must lie in the open interval (0, 1)")]
    Discount { name: &'static str, value: f64 },

    #[error("tolerance {name} = {value} must be positive and finite")]
    Tolerance { name: &'static str, value: f64 },

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("invalid MDP: {0}")]
    InvalidMdp(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid cost matrix: {0}")]
    Cost(String),

    #[error("total mass mismatch: source {source_mass}, target {target_mass}")]
    MassMismatch { source_mass: f64, target_mass: f64 },

    #[error("transport certificate rejected: {0}")]
    Certificate(String),

    #[error("transport solver made no progress after {0} augmentations")]
    SolverStalled(usize),

    #[error("support size {size} exceeds the brute-force limit {limit}")]
    BruteForceTooLarge { size: usize, limit: usize },

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("discount gamma = {gamma} exceeds metric discount c = {c}")]
    DiscountOrder { gamma: f64, c: f64 },

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("block {0} has zero total weight")]
    ZeroWeightBlock(usize),

    #[error("iteration limit {0} reached before convergence")]
    IterationLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_discount(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Discount { name, value })
    }
}

pub(crate) fn check_tolerance(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Tolerance { name, value })
    }
}
