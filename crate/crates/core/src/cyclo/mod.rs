//! Exact arithmetic in cyclotomic fields `Q(z(n))`.

mod basis;
mod modp;
mod number;
mod rational;

pub use basis::euler_phi;
pub use modp::ModField;
pub use number::{CycNumber, Embedded};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("conductor must be positive")]
    InvalidConductor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {conductor} does not divide target {target}")]
    Embedding { conductor: u32, target: u32 },
    #[error("cannot parse cyclotomic number from {0:?}")]
    Parse(String),
}
