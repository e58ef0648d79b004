//! Segmented sieves for smallest prime factors, totients and primes in
//! residue classes.
//!
//! Everything here is indexed over an arithmetic progression
//! `step·m + offset` for `m` in a half-open range; the plain interval sieve
//! is the `step = 1, offset = 0` case. Searches that only care about one
//! residue class (the exotic-prime search sieves `8m + 7` and `6m + 5`)
//! then touch only the elements they need.

mod checkpoint;
mod driver;

pub use checkpoint::SearchCheckpoint;
pub use driver::{RunOutcome, SegmentedRun};

use crate::arith::modular::inverse_mod;
use crate::error::{Error, Result};

/// Default number of elements per segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

/// All primes `<= limit`, ascending.
pub fn base_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("prime limit exceeds address space");
    // odd-only: index i stands for 2i + 1
    let half = limit / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    primes.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i < limit)
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

/// The progression `step·m + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progression {
    pub step: u64,
    pub offset: u64,
}

impl Progression {
    pub const NATURALS: Progression = Progression { step: 1, offset: 0 };

    pub fn new(step: u64, offset: u64) -> Self {
        assert!(step >= 1);
        Progression { step, offset }
    }

    #[inline]
    pub fn value(&self, m: u64) -> u64 {
        self.step * m + self.offset
    }

    /// Smallest m with value(m) >= x.
    pub fn first_index_at_least(&self, x: u64) -> u64 {
        if x <= self.offset {
            0
        } else {
            (x - self.offset).div_ceil(self.step)
        }
    }

    /// Offset of the first index in [m_lo, ..) whose value is divisible by
    /// prime `r`, and the stride between such indices. `None` if no value is.
    fn multiples_of(&self, r: u64, m_lo: u64) -> Option<(u64, u64)> {
        if self.step % r == 0 {
            return (self.offset % r == 0).then_some((0, 1));
        }
        let inv = inverse_mod(self.step % r, r)?;
        let target = ((r - self.offset % r) % r) as u128 * inv as u128 % r as u128;
        let target = target as u64;
        Some(((target + r - m_lo % r) % r, r))
    }
}

/// Primality of every `value(m)` for `m` in `[m_lo, m_hi)`.
///
/// `primes` must contain every prime up to √(largest value).
pub fn prime_flags(prog: Progression, m_lo: u64, m_hi: u64, primes: &[u64]) -> Vec<bool> {
    let len = (m_hi - m_lo) as usize;
    let mut flags = vec![true; len];
    for (j, flag) in flags.iter_mut().enumerate() {
        if prog.value(m_lo + j as u64) < 2 {
            *flag = false;
        } else {
            break;
        }
    }
    if len == 0 {
        return flags;
    }
    let top = prog.value(m_hi - 1);
    for &r in primes {
        if r.saturating_mul(r) > top {
            break;
        }
        let Some((start, stride)) = prog.multiples_of(r, m_lo) else {
            continue;
        };
        let mut j = start as usize;
        while j < len {
            if prog.value(m_lo + j as u64) != r {
                flags[j] = false;
            }
            j += stride as usize;
        }
    }
    flags
}

/// Smallest prime factor and totient of every `value(m)`, `m` in
/// `[m_lo, m_hi)`. Entries where `wanted` is false are left as
/// (0, value) untouched. Values must be >= 1.
pub fn factor_data(
    prog: Progression,
    m_lo: u64,
    m_hi: u64,
    primes: &[u64],
    wanted: Option<&[bool]>,
) -> (Vec<u64>, Vec<u64>) {
    let len = (m_hi - m_lo) as usize;
    let mut rem: Vec<u64> = (m_lo..m_hi).map(|m| prog.value(m)).collect();
    let mut phi = rem.clone();
    let mut spf = vec![0u64; len];
    if len == 0 {
        return (spf, phi);
    }
    let is_wanted = |j: usize| wanted.is_none_or(|w| w[j]);
    let top = prog.value(m_hi - 1);
    for &r in primes {
        if r.saturating_mul(r) > top {
            break;
        }
        let Some((start, stride)) = prog.multiples_of(r, m_lo) else {
            continue;
        };
        let mut j = start as usize;
        while j < len {
            if is_wanted(j) {
                if spf[j] == 0 {
                    spf[j] = r;
                }
                phi[j] = phi[j] / r * (r - 1);
                rem[j] /= r;
                while rem[j] % r == 0 {
                    rem[j] /= r;
                }
            }
            j += stride as usize;
        }
    }
    // What is left above √top has no cofactor partner, so it is prime.
    for j in 0..len {
        if !is_wanted(j) {
            continue;
        }
        let rest = rem[j];
        if rest > 1 {
            if spf[j] == 0 {
                spf[j] = rest;
            }
            phi[j] = phi[j] / rest * (rest - 1);
        }
    }
    (spf, phi)
}

/// Interval `[lo, hi)` with per-element smallest prime factor and totient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub spf: Vec<u64>,
    pub phi: Vec<u64>,
}

impl SieveSegment {
    pub fn len(&self) -> usize {
        self.spf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spf.is_empty()
    }

    /// (n, spf(n), φ(n)) triples in ascending n.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        (self.lo..self.hi)
            .zip(self.spf.iter().copied())
            .zip(self.phi.iter().copied())
            .map(|((n, s), p)| (n, s, p))
    }
}

/// Interval sieve with base primes precomputed for a maximum bound.
#[derive(Clone, Debug)]
pub struct SegmentSieve {
    primes: Vec<u64>,
    max_hi: u64,
    segment_size: u64,
}

impl SegmentSieve {
    /// Supports segments with `hi <= max_hi` and at most `segment_size`
    /// elements.
    pub fn new(max_hi: u64, segment_size: u64) -> Self {
        SegmentSieve {
            primes: base_primes(max_hi.isqrt() + 1),
            max_hi,
            segment_size: segment_size.max(1),
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    pub fn segment(&self, lo: u64, hi: u64) -> Result<SieveSegment> {
        if lo < 2 {
            return Err(Error::RangeUnderflow(lo));
        }
        if hi <= lo {
            return Err(Error::InvalidArgument(format!(
                "empty segment [{lo}, {hi})"
            )));
        }
        if hi - lo > self.segment_size {
            return Err(Error::SegmentTooLarge {
                lo,
                hi,
                max: self.segment_size,
            });
        }
        if hi > self.max_hi {
            return Err(Error::InvalidArgument(format!(
                "segment end {hi} beyond sieve bound {}",
                self.max_hi
            )));
        }
        let (spf, phi) = factor_data(Progression::NATURALS, lo, hi, &self.primes, None);
        Ok(SieveSegment { lo, hi, spf, phi })
    }
}

/// One-off interval sieve with the default segment size.
pub fn sieve_segment(lo: u64, hi: u64) -> Result<SieveSegment> {
    SegmentSieve::new(hi, DEFAULT_SEGMENT_SIZE).segment(lo, hi)
}

/// All primes `p` in `[lo, hi)` with `p ≡ residue (mod modulus)`.
pub fn primes_in_class(lo: u64, hi: u64, residue: u64, modulus: u64) -> Result<Vec<u64>> {
    if modulus == 0 || residue >= modulus {
        return Err(Error::InvalidArgument(format!(
            "residue {residue} not reduced modulo {modulus}"
        )));
    }
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi})")));
    }
    let prog = Progression::new(modulus, residue);
    let primes = base_primes((hi - 1).isqrt() + 1);
    let m_lo = prog.first_index_at_least(lo);
    let m_hi = prog.first_index_at_least(hi);
    let mut out = Vec::new();
    let mut start = m_lo;
    while start < m_hi {
        let end = m_hi.min(start + DEFAULT_SEGMENT_SIZE);
        let flags = prime_flags(prog, start, end, &primes);
        out.extend(
            (start..end)
                .zip(flags)
                .filter(|&(_, is_p)| is_p)
                .map(|(m, _)| prog.value(m)),
        );
        start = end;
    }
    Ok(out)
}

/// φ(n) for every n in `[0, max]` by a linear sieve; entry 0 is 0.
pub fn totient_table(max: u32) -> Vec<u32> {
    let len = max as usize + 1;
    let mut phi = vec![0u32; len];
    let mut primes = Vec::new();
    if len > 1 {
        phi[1] = 1;
    }
    for i in 2..len {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i);
        }
        for &p in &primes {
            let ip = i * p;
            if ip >= len {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u32;
                break;
            }
            phi[ip] = phi[i] * (p as u32 - 1);
        }
    }
    phi
}
