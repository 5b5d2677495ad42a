//! Exact commutative algebra for computing central seminormalizations of finitely
//! presented domains over the rationals.
//!
//! The crate is organized bottom-up: `polycore` (exact polynomial arithmetic),
//! `groebner` (ideal and module Groebner engine), `algebra` (affine domains,
//! morphisms, finite extensions), `spectrum` (primes, fibers, residue fields),
//! `reality` (reality/centrality oracles and certificates), `gluing` (conductors,
//! birational closures, elementary central gluings), and `seminorm` (the
//! decomposition driver).

pub mod algebra;
pub mod error;
pub mod gluing;
pub mod polycore;
pub mod reality;
pub mod spectrum;
pub mod groebner;

pub use error::CasError;
