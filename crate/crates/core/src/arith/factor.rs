//! Exact factorization: trial division by sieved primes, then Pollard-Brent
//! rho on whatever cofactor remains.

use std::fmt;
use std::sync::OnceLock;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use super::modular::{gcd, Montgomery};
use super::primality::is_prime;
use crate::sieve::base_primes;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Prime-power decomposition, primes strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    /// Builds from arbitrary (prime, exponent) pairs, merging repeats.
    pub fn from_pairs(mut pairs: Vec<(u128, u32)>) -> Self {
        pairs.sort_unstable();
        let mut factors: Vec<(u128, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            match factors.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => factors.push((p, e)),
            }
        }
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of p^e over all entries; `None` on overflow.
    pub fn reconstruct(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    /// φ of the reconstructed value. Never overflows since φ(n) ≤ n.
    pub fn totient(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// `Some((p, e))` when the value is a single prime power.
    pub fn as_prime_power(&self) -> Option<(u128, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization engine holding its trial-division primes.
pub struct Factorizer {
    trial_primes: Vec<u64>,
    bound: u64,
}

impl Factorizer {
    pub fn new(trial_bound: u64) -> Self {
        let bound = trial_bound.max(2);
        Factorizer {
            trial_primes: base_primes(bound),
            bound,
        }
    }

    /// Shared instance with the default trial bound.
    pub fn shared() -> &'static Factorizer {
        static SHARED: OnceLock<Factorizer> = OnceLock::new();
        SHARED.get_or_init(|| Factorizer::new(DEFAULT_TRIAL_BOUND))
    }

    /// # Panics
    /// If `n == 0`.
    pub fn factorize(&self, n: u128) -> Factorization {
        assert!(n >= 1, "factorize requires n >= 1");
        let mut pairs = Vec::new();
        let twos = n.trailing_zeros();
        if twos > 0 {
            pairs.push((2, twos));
        }
        let mut rest = n >> twos;
        let mut exhausted = true;
        for (i, &p) in self.trial_primes.iter().enumerate().skip(1) {
            let p = p as u128;
            if p * p > rest {
                exhausted = false;
                break;
            }
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                pairs.push((p, e));
            }
            // Cheap early exit for a large prime cofactor.
            if i == 168 && rest > 1 && is_prime(rest) {
                exhausted = false;
                break;
            }
        }
        if rest > 1 {
            let bound = self.bound as u128;
            let certainly_prime =
                !exhausted || bound.checked_mul(bound).is_some_and(|b2| rest < b2);
            if certainly_prime {
                pairs.push((rest, 1));
            } else {
                split_cofactor(rest, &mut pairs);
            }
        }
        Factorization::from_pairs(pairs)
    }
}

/// Exact prime-power decomposition of `n ≥ 1`.
pub fn factorize(n: u128) -> Factorization {
    Factorizer::shared().factorize(n)
}

fn split_cofactor(n: u128, out: &mut Vec<(u128, u32)>) {
    // Seeded from the input so results and timings are reproducible.
    let mut rng = SmallRng::seed_from_u64((n as u64) ^ ((n >> 64) as u64) ^ 0x9e37_79b9_7f4a_7c15);
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push((m, 1));
            continue;
        }
        if m & 1 == 0 {
            out.push((2, 1));
            stack.push(m / 2);
            continue;
        }
        let root = m.isqrt();
        if root * root == m {
            stack.push(root);
            stack.push(root);
            continue;
        }
        let d = loop {
            if let Some(d) = brent_rho(m, &mut rng) {
                break d;
            }
        };
        stack.push(d);
        stack.push(m / d);
    }
}

/// One Pollard-Brent attempt on odd composite `n`; `None` means retry.
fn brent_rho(n: u128, rng: &mut SmallRng) -> Option<u128> {
    const BATCH: u64 = 128;
    let ctx = Montgomery::new(n);
    let c = ctx.to_mont(rng.gen_range(1..n));
    let f = |x: u128| ctx.add(ctx.mul(x, x), c);
    let mut y = ctx.to_mont(rng.gen_range(0..n));
    let mut x = y;
    let mut ys = y;
    let mut q = ctx.one();
    let mut g = 1u128;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = ctx.mul(q, x.abs_diff(y));
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}
