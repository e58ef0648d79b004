//! Exact integer primitives: factorization, totient, 2-adic valuation, and
//! the map g(n) = n + φ(n) with its iterates.
//!
//! Values are `u128`. Anything that could exceed that width is computed with
//! checked arithmetic and reported, never wrapped.

mod factor;
pub mod modular;
mod primality;

use serde::{Deserialize, Serialize};

pub use factor::{factorize, Factorization, Factorizer, DEFAULT_TRIAL_BOUND};
pub use primality::is_prime;

use crate::error::{Error, Result};

/// Integers handled by the orbit machinery.
pub type Natural = u128;

/// φ(n). φ(1) = 1.
///
/// # Panics
/// If `n == 0`.
pub fn euler_phi(n: Natural) -> Natural {
    if n <= 2 {
        assert!(n >= 1, "euler_phi requires n >= 1");
        return 1;
    }
    factorize(n).totient()
}

/// g(n) = n + φ(n).
pub fn g(n: Natural) -> Result<Natural> {
    n.checked_add(euler_phi(n)).ok_or(Error::Overflow("g(n)"))
}

/// Largest e with 2^e | n.
pub fn v2(n: Natural) -> u32 {
    assert!(n >= 1, "v2 requires n >= 1");
    n.trailing_zeros()
}

pub fn odd_part(n: Natural) -> Natural {
    n >> v2(n)
}

/// Iterates g_0(n) = n, g_1(n), ... up to the requested index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub values: Vec<Natural>,
    /// Set when g of the last value would overflow before reaching k_max.
    pub truncated: bool,
}

impl Orbit {
    /// Largest k for which g_k(n) was computed.
    pub fn last_k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<Natural> {
        self.values.get(k).copied()
    }
}

pub fn iterate_g(n: Natural, k_max: usize) -> Orbit {
    assert!(n >= 1, "iterate_g requires n >= 1");
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(n);
    let mut current = n;
    for _ in 0..k_max {
        match g(current) {
            Ok(next) => {
                values.push(next);
                current = next;
            }
            Err(_) => {
                return Orbit {
                    values,
                    truncated: true,
                }
            }
        }
    }
    Orbit {
        values,
        truncated: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaKind {
    StrictlyMore,
    Equal,
    NotApplicable,
}

/// Comparison of v2(φ(n)) against v2(n) for n = 2^ℓ·q, ℓ ≥ 1, q > 1 odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub kind: LemmaKind,
    pub two_adic_n: u32,
    pub two_adic_phi: u32,
}

pub fn lemma_predicate(n: Natural) -> LemmaVerdict {
    let two_adic_n = v2(n);
    let two_adic_phi = v2(euler_phi(n));
    let kind = if two_adic_n == 0 || n.is_power_of_two() {
        LemmaKind::NotApplicable
    } else if two_adic_phi == two_adic_n {
        LemmaKind::Equal
    } else {
        debug_assert!(two_adic_phi > two_adic_n, "φ lost factors of 2 at n = {n}");
        LemmaKind::StrictlyMore
    };
    LemmaVerdict {
        kind,
        two_adic_n,
        two_adic_phi,
    }
}
