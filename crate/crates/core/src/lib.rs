//! Sequence Lorentz / Marcinkiewicz space toolkit.
//!
//! The crate evaluates norms, rearrangements and duality objects for the
//! sequence Lorentz spaces `gamma_{p,w}` and `d_{1,u}` and the Marcinkiewicz
//! spaces `m_psi` / `m_psi^0`, classifies extreme and smooth points of the
//! unit balls, builds the norming functionals and norming elements of the
//! duality pairing, and solves small polyhedral best-approximation problems.
//!
//! Everything runs in one of two arithmetic modes:
//!
//! * **exact** - head data is stored as arbitrary-precision rationals, and
//!   finite computations (zero tails, integer exponents) stay exact;
//! * **certified** - infinite series over power-law or geometric tails are
//!   truncated with a sound remainder bound, carried as an error radius.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so the whole API is safe to use from multiple threads.

pub mod approx;
pub mod certified;
pub mod fixtures;
pub mod geometry;
pub mod jsonio;
pub mod norms;
pub mod seqcore;
pub mod verify;
pub mod weights;

pub use certified::{CertVal, Extended};
pub use seqcore::{ExtCount, Sequence, Tail};
pub use weights::{RegimeReport, Space, WTail, WeightSpec};

/// Errors shared by the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid weight spec: {0}")]
    InvalidWeight(String),
    #[error("regime precondition violated: {0}")]
    Regime(String),
    #[error("element is not on the unit sphere: {0}")]
    Sphere(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
