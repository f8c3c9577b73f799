//! Exact arithmetic for 2-adic valuations of modular-degree bounds of
//! quadratic twists of elliptic curves with prime power conductor.
//!
//! Everything is integer or rational arithmetic: no floats, no rounding.
//! The crate covers
//!
//! * Weierstrass models over Q, their invariants, minimal models, and
//!   quadratic twists ([`curve`]),
//! * reduction types, conductor exponents, and local data at every prime
//!   ([`local`]),
//! * Hecke eigenvalues `a_q` by exact point counting and their
//!   multiplicative extension to `a_n` ([`hecke`]),
//! * the bundled curve tables of conductor 17, 49, 32, and 128 and the
//!   Setzer-Neumann family of prime conductor `p = u^2 + 64` ([`families`]),
//! * the 2-adic lower bounds on modular degrees of twists and the rank
//!   upper bounds they feed ([`bounds`]),
//! * congruence-number lower bounds for the curves `y^2 = x^3 - d D^2 x`
//!   via alternating sums of twisted eigenforms ([`congruence`]).

pub mod arith;
pub mod bounds;
pub mod congruence;
pub mod curve;
pub mod families;
pub mod hecke;
pub mod local;

use thiserror::Error;

/// Errors surfaced by the library.
///
/// Anything that is a caller mistake (bad curve string, non-squarefree twist
/// parameter, composite where a prime is required) is an `Error`; internal
/// invariant violations panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve coefficients: {0}")]
    BadCurve(String),
    #[error("invalid twist parameter {0}: must be a nonzero squarefree integer")]
    BadTwist(String),
    #[error("singular model: discriminant is zero")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("prime {0} exceeds the point-counting ceiling {1}")]
    PrimeTooLarge(String, u64),
    #[error("cannot certify primality of {0}: beyond deterministic Miller-Rabin range")]
    PrimalityUncertified(String),
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("no bundled curve with label {0}")]
    UnknownLabel(String),
    #[error("data file error: {0}")]
    BadData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
