//! Exact arithmetic on closed orientable 2-orbifolds with cone points and on
//! their orbifold line bundles.

mod bundle;
mod rational;
mod surface;

pub use bundle::{OrbifoldLineBundle, SectionCount};
pub use rational::{format_rational, parse_rational, Rational};
pub use surface::{OrbifoldSurface, MAX_DENOMINATOR};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("cone order {0} is not an integer >= 2")]
    InvalidConeOrder(i64),
    #[error("local part {beta} at cone point {index} is outside 0..{order}")]
    LocalPartOutOfRange { index: usize, beta: i64, order: u32 },
    #[error("expected {expected} local parts, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("bundles live on different orbifold surfaces")]
    SurfaceMismatch,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}
