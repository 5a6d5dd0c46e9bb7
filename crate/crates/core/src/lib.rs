//! Gröbner-basis reconstruction from canonical-form oracles.
//!
//! A hidden ideal is only reachable through an oracle that returns the
//! canonical form of a queried term. From those answers this crate
//! rebuilds
//!
//! * the minimal generators of the leading-term ideal inside a box
//!   `[0, D]^n`, and with them the reduced Gröbner basis, for commutative
//!   ideals ([`staircase`]);
//! * a subset of the reduced Gröbner basis that reduces a public set of
//!   ideal members to zero, for two-sided ideals in the free algebra
//!   ([`word_recon`]).
//!
//! Around those two algorithms sit the algebra they need (terms, words,
//! sparse polynomials over `F_p`, Buchberger, two-sided reduction), a
//! counterexample builder showing why the degree bound is needed
//! ([`forge`]) and a toy Barkee-style cryptosystem with the attacks the
//! reconstruction enables ([`crypto`]).

pub mod crypto;
pub mod error;
pub mod field;
pub mod forge;
pub mod format;
pub mod groebner;
pub mod ncpoly;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod staircase;
pub mod term;
pub mod word;
pub mod word_recon;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use groebner::GroebnerBasis;
pub use ncpoly::NcPolynomial;
pub use oracle::{CanOracle, MembershipOracle, NcCanOracle, TermOracle, WordOracle};
pub use poly::Polynomial;
pub use term::{Monomial, OrderKind, TermBox, TermOrder};
pub use word::{Word, WordOrder};
