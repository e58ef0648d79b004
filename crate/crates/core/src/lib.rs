//! Iterated n + φ(n).
//!
//! * [`arith`]: factorization, totient, 2-adic valuation, g and its orbits.
//! * [`sieve`]: segmented totient / prime sieves, parallel resumable runs.
//! * [`diophantine`]: solving and classifying φ(n) + φ(n + φ(n)) = n, the
//!   exotic-prime search and the relaxed equation 3φ(n) = 2n + 2.
//! * [`orbits`]: relations g_{k+r}(n) = M·g_k(n) and their certificates.
//! * [`cli`]: the `phi-orbits` command-line front end.

pub mod arith;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod orbits;
pub mod sieve;

pub use error::{Error, Result};
