//! Exact scalars and the quasi-commutative polynomial algebra.

mod alphabet;
mod matrix;
mod poly;
mod scalar;

pub use alphabet::{Alphabet, AlphabetBuilder, GenId, Generator, Relation, Sector};
pub use matrix::{q_exp, PolyMatrix, QBase, RatMatrix};
pub use poly::{canonicalize, NCPoly, Side, Word};
pub use scalar::{rat, ScalarQ};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("a term is not divisible by {0}")]
    NotDivisible(String),
    #[error("moving {generator} would cross {blocker}, which has no exchange rule")]
    OrderingObstruction { generator: String, blocker: String },
    #[error("q-exponential argument is not nilpotent within order {0}")]
    TruncationNotNilpotent(u32),
    #[error("coefficient is not divisible by the q-factorial")]
    InexactDivision,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("{0} and {1} share a sector that requires an exchange rule")]
    SectorRelation(String, String),
    #[error("{0} does not commute with every generator")]
    NonCommuting(String),
}
