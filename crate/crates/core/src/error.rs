use crate::parse::ParseError;
use crate::rational::Rational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n={expected}, found n={found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("requires n>1 (got n={0})")]
    DimensionTooSmall(usize),

    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch {
        expected: Box<Rational>,
        found: Box<Rational>,
    },

    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("connection is not symmetric in its lower indices at Γ^{k}_{{{i}{j}}}")]
    AsymmetricConnection { k: usize, i: usize, j: usize },

    #[error("symbol is not fully symmetric at component ({i},{j},{k})")]
    AsymmetricSymbol { i: usize, j: usize, k: usize },

    #[error("mu must equal lambda + delta: lambda={lambda}, delta={delta}, mu={mu}")]
    InconsistentMu {
        lambda: Box<Rational>,
        delta: Box<Rational>,
        mu: Box<Rational>,
    },

    #[error("delta={delta} is resonant for n={n}; use the resonant resolver with a parameter t")]
    ResonantDelta { n: usize, delta: Rational },

    #[error("no resonant table row for n={n}, delta={delta}, lambda={lambda} (resonant deltas: {resonant})")]
    NoMatchingRow {
        n: usize,
        delta: Box<Rational>,
        lambda: Box<Rational>,
        resonant: String,
    },

    #[error("differential expression has order {0}, expected at most 3")]
    OrderTooHigh(u32),

    #[error("not a vector field: {0}")]
    NotAVectorField(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
