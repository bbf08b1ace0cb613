//! Exact computational Lie theory for root data and relative Weyl groups.
//!
//! The library computes, with exact integer arithmetic throughout:
//!
//! * Smith normal forms, lattice cokernels and finite abelian group
//!   arithmetic ([`lattice`]);
//! * root data of simply connected quasi-simple groups and their central
//!   quotients, center component groups and the canonical maps between
//!   them ([`root_datum`]);
//! * Weyl group elements, longest elements, Coxeter orbit partitions and
//!   relative Weyl groups with their reflection generators ([`weyl`]);
//! * the character basis and monomial equation systems attached to a
//!   cuspidal Levi together with component counts and the base-case sign
//!   rule ([`companion`]);
//! * the morphism from a relative Weyl group into the center component
//!   group of a cuspidal Levi, assembled from base cases by restriction,
//!   product splitting and isogeny transport ([`phi`]);
//! * an independent matrix-level oracle inside SL_n over exact fields
//!   ([`sln`]);
//! * the Frobenius-level layer: coinvariant groups, restriction labels and
//!   twisted centralizer orders ([`frobenius`]).

pub mod companion;
pub mod frobenius;
pub mod lattice;
pub mod phi;
pub mod root_datum;
pub mod sln;
pub mod weyl;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("invalid Levi subset: {0}")]
    InvalidLevi(String),
    #[error("incompatible group structures: {0}")]
    GroupMismatch(String),
    #[error("homomorphism matrix does not respect invariant factors")]
    IllDefinedHom,
    #[error("Levi subset is not self-opposed: {0}")]
    NotSelfOpposed(String),
    #[error("Levi subset is not cuspidal: {0}")]
    NotCuspidal(String),
    #[error("prime {p} is not usable here: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("characteristic collision: prime {0} divides the torsion order")]
    CharacteristicCollision(u64),
    #[error("configuration outside the classified base cases: {0}")]
    UnclassifiedConfiguration(String),
    #[error("base sign computation failed: {0}")]
    BaseSign(String),
    #[error("no unique coset representative stabilizing the smaller Levi: {0}")]
    NoUniqueRepresentative(String),
    #[error("matrix is singular over the field")]
    SingularMatrix,
    #[error("element violates a regularity/distinctness precondition: {0}")]
    NotRegular(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
