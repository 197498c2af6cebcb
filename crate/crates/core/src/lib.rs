//! Nonlinear filter generators over maximal-length LFSRs.
//!
//! The crate builds the whole chain from field arithmetic to the census of
//! optimal filters:
//!
//! * [`field`]: GF(2^L) arithmetic over a verified primitive polynomial, plus
//!   the embedded table of primitive polynomials and factorizations of 2^L - 1.
//! * [`lfsr`]: the m-sequence generator and its sliding windows.
//! * [`anf`]: filter functions in algebraic normal form, their evaluation,
//!   counting, sampling and enumeration.
//! * [`cosets`]: cyclotomic cosets modulo 2^L - 1 and the aggregate counts.
//! * [`complexity`]: Berlekamp-Massey linear complexity and minimal period.
//! * [`spectral`]: the coset spectrum of a filtered sequence.
//! * [`likelihood`]: exact and log-domain probability that a random filter is optimal.
//! * [`experiment`]: exhaustive and Monte Carlo censuses compared against the formulas.

pub mod anf;
pub mod complexity;
pub mod cosets;
pub mod error;
pub mod experiment;
pub mod field;
pub mod likelihood;
pub mod lfsr;
pub mod spectral;

mod bigmath;

pub use error::{Error, Result};
