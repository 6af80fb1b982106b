//! Error type shared by every module.

use alloc::string::String;

use crate::series::Order;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series windows differ")]
    WindowMismatch,
    #[error("coefficient of weight {weight} requested beyond validity order {valid}")]
    Untrusted { weight: u32, valid: Order },
    #[error("series is not polynomial of degree <= {bound} in the shifted variable")]
    ShiftDegree { bound: u32 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("model validation failed: {0}")]
    Model(String),
    #[error("genus-{0} generating function not available")]
    MissingGenus(u32),
    #[error("field component at level {level} exceeds the level capacity {cap}")]
    Capacity { level: u32, cap: u32 },
    #[error("degenerate base point, shift required: {0}")]
    DegenerateBase(String),
    #[error("degenerate base point, shift required: c-matrix singular at base point")]
    SingularC,
    #[error("algebraic compatibility condition fails: {0}")]
    Compatibility(String),
    #[error("{0}")]
    Indeterminate(String),
}

pub type Result<T> = core::result::Result<T, Error>;
