//! Error type for the numerical core.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor argument or operation input is out of its domain.
    InvalidInput(String),
    /// Two snapshots (or a snapshot and an operator) live on different grids.
    GridMismatch,
    /// A weight used in an inner product is not strictly positive at some node.
    NonPositiveWeight { node: usize },
    /// `k2` evaluated on its diagonal.
    SingularKernel,
    /// Input to the inverse has a macroscopic component above tolerance.
    NotMicroscopic { ratio: f64 },
    /// An iterative solver stopped before reaching its tolerance.
    NoConvergence { iterations: usize, residual: f64 },
    /// θ outside the transport-table range.
    OutOfTable { theta: f64, lo: f64, hi: f64 },
    /// ρ or θ became non-positive during time stepping.
    Positivity { time: f64, node: usize },
    /// Requested time step exceeds the stability limit.
    Cfl { dt: f64, limit: f64 },
    /// The window (½ sup θ, inf θ) for the global Maxwellian is empty.
    EmptyWindow { half_sup: f64, inf: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::GridMismatch => write!(f, "snapshots live on different velocity grids"),
            Error::NonPositiveWeight { node } => write!(f, "weight is not positive at node {node}"),
            Error::SingularKernel => write!(f, "k2 is singular at v = v*"),
            Error::NotMicroscopic { ratio } => {
                write!(f, "input is not microscopic: |P0 h|/|h| = {ratio:.3e}")
            }
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "solver did not converge after {iterations} iterations (residual {residual:.3e})"
            ),
            Error::OutOfTable { theta, lo, hi } => {
                write!(f, "theta = {theta} outside transport table [{lo}, {hi}]")
            }
            Error::Positivity { time, node } => {
                write!(f, "positivity lost at t = {time} (node {node})")
            }
            Error::Cfl { dt, limit } => write!(f, "time step {dt:e} exceeds stability limit {limit:e}"),
            Error::EmptyWindow { half_sup, inf } => write!(
                f,
                "global Maxwellian window is empty: sup(theta)/2 = {half_sup} >= inf(theta) = {inf}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidInput(String::from(msg))
}
