//! Relations g_{k+r}(n) = M·g_k(n) along orbits of g.
//!
//! A relation is only ever *verified* on a finite orbit. It is certified for
//! every later k when M is a power of two and the anchor value g_{k0}(n) is
//! even: φ(2x) = 2φ(x) for even x gives g(2x) = 2g(x), and g keeps even
//! values (≥ 4) even, so the relation propagates one step at a time.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{iterate_g, Natural, Orbit};
use crate::diophantine::is_solution;
use crate::error::{Error, Result};

pub const DEFAULT_K_MAX: usize = 64;
pub const DEFAULT_R_MAX: usize = 25;
/// Consecutive k a relation must hold on before it is reported.
pub const DEFAULT_MIN_SUPPORT: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Persistence {
    ProvenForever,
    VerifiedOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRelation {
    pub n: Natural,
    /// First k of the run of indices on which the relation holds.
    pub k0: usize,
    pub r: usize,
    #[serde(rename = "M")]
    pub multiplier: Natural,
    /// Last k checked; the relation holds for every k in [k0, verified_to_k].
    pub verified_to_k: usize,
    pub persistent: Persistence,
    /// Smallest reported shift r' with r' | r and M = M'^(r/r').
    pub related_to: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectConfig {
    pub k_max: usize,
    pub r_max: usize,
    pub min_support: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            k_max: DEFAULT_K_MAX,
            r_max: DEFAULT_R_MAX,
            min_support: DEFAULT_MIN_SUPPORT,
        }
    }
}

impl DetectConfig {
    pub fn new(k_max: usize, r_max: usize) -> Self {
        DetectConfig {
            k_max,
            r_max,
            ..DetectConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.r_max == 0 || self.k_max < self.r_max || self.min_support == 0 {
            return Err(Error::Precondition(format!(
                "need k_max >= r_max >= 1 and min_support >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Relations for every shift r ≤ r_max that hold from some k0 through the
/// end of the computed orbit.
pub fn detect_relations(n: Natural, config: &DetectConfig) -> Result<Vec<OrbitRelation>> {
    config.validate()?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let orbit = iterate_g(n, config.k_max);
    Ok(relations_on(&orbit, config))
}

/// Same as [`detect_relations`] on an already computed orbit.
pub fn relations_on(orbit: &Orbit, config: &DetectConfig) -> Vec<OrbitRelation> {
    let v = &orbit.values;
    let last_k = orbit.last_k();
    let mut found: Vec<OrbitRelation> = Vec::new();
    for r in 1..=config.r_max.min(last_k) {
        let end = last_k - r;
        if v[end + r] % v[end] != 0 {
            continue;
        }
        let multiplier = v[end + r] / v[end];
        if multiplier < 2 {
            continue;
        }
        let mut k0 = end;
        while k0 > 0 && v[k0 - 1].checked_mul(multiplier) == Some(v[k0 - 1 + r]) {
            k0 -= 1;
        }
        if end - k0 + 1 < config.min_support {
            continue;
        }
        let persistent = match certify(v, k0, r) {
            PersistenceVerdict::Proven(_) => Persistence::ProvenForever,
            PersistenceVerdict::Refused(_) => Persistence::VerifiedOnly,
        };
        let related_to = found
            .iter()
            .find(|base| {
                r % base.r == 0
                    && u32::try_from(r / base.r)
                        .ok()
                        .and_then(|e| base.multiplier.checked_pow(e))
                        == Some(multiplier)
            })
            .map(|base| base.r);
        found.push(OrbitRelation {
            n: v[0],
            k0,
            r,
            multiplier,
            verified_to_k: end,
            persistent,
            related_to,
        });
    }
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingCertificate {
    pub n: Natural,
    pub k0: usize,
    pub r: usize,
    #[serde(rename = "M")]
    pub multiplier: Natural,
    /// M = 2^exponent.
    pub exponent: u32,
    pub anchor: Natural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refusal {
    /// g_{k0+r}(n) is not an integer multiple of g_{k0}(n).
    NotMultiple,
    MultiplierBelowTwo,
    MultiplierNotPowerOfTwo {
        multiplier: Natural,
    },
    OddAnchor {
        anchor: Natural,
    },
    /// Anchor 2 is even but g(2) = 3 is not.
    AnchorTooSmall {
        anchor: Natural,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PersistenceVerdict {
    Proven(DoublingCertificate),
    Refused(Refusal),
}

/// Certificate that g_{k+r}(n) = 2^s·g_k(n) for all k ≥ k0, or the reason
/// the doubling argument does not apply.
pub fn doubling_persistence(n: Natural, k0: usize, r: usize) -> Result<PersistenceVerdict> {
    if n == 0 || r == 0 {
        return Err(Error::Precondition("need n >= 1 and r >= 1".into()));
    }
    let orbit = iterate_g(n, k0 + r);
    if orbit.last_k() < k0 + r {
        return Err(Error::Precondition(format!(
            "orbit of {n} overflows at k = {} before k0 + r = {}",
            orbit.last_k() + 1,
            k0 + r
        )));
    }
    Ok(certify(&orbit.values, k0, r))
}

fn certify(v: &[Natural], k0: usize, r: usize) -> PersistenceVerdict {
    use PersistenceVerdict::Refused;
    let anchor = v[k0];
    let target = v[k0 + r];
    if target % anchor != 0 {
        return Refused(Refusal::NotMultiple);
    }
    let multiplier = target / anchor;
    if multiplier < 2 {
        return Refused(Refusal::MultiplierBelowTwo);
    }
    if !multiplier.is_power_of_two() {
        return Refused(Refusal::MultiplierNotPowerOfTwo { multiplier });
    }
    if anchor % 2 == 1 {
        return Refused(Refusal::OddAnchor { anchor });
    }
    if anchor < 4 {
        return Refused(Refusal::AnchorTooSmall { anchor });
    }
    PersistenceVerdict::Proven(DoublingCertificate {
        n: v[0],
        k0,
        r,
        multiplier,
        exponent: multiplier.trailing_zeros(),
        anchor,
    })
}

/// Least k ≤ k_max with g_k(n) solving φ(m) + φ(m + φ(m)) = m, and that m.
pub fn reduce_to_diophantine(n: Natural, k_max: usize) -> Result<Option<(usize, Natural)>> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let orbit = iterate_g(n, k_max + 2);
    for k in 0..=k_max.min(orbit.last_k()) {
        let m = orbit.values[k];
        match is_solution(m) {
            Ok(true) => {
                if let Some(later) = orbit.get(k + 2) {
                    if later != 2 * m {
                        return Err(Error::Inconsistency(format!(
                            "g_{}({n}) = {later} but 2·g_{k}({n}) = {}",
                            k + 2,
                            2 * m
                        )));
                    }
                }
                return Ok(Some((k, m)));
            }
            Ok(false) => {}
            Err(Error::Overflow(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// [`detect_relations`] for every n in `1..=limit`, in ascending n.
///
/// Runs on the current rayon pool.
pub fn scan_orbits(limit: Natural, config: &DetectConfig) -> Result<Vec<OrbitRelation>> {
    config.validate()?;
    if limit < 2 {
        return Err(Error::Precondition("scan limit must be at least 2".into()));
    }
    let limit = u64::try_from(limit)
        .map_err(|_| Error::InvalidArgument(format!("scan limit {limit} too large")))?;
    let per_n: Vec<Vec<OrbitRelation>> = (1..=limit)
        .into_par_iter()
        .map(|n| relations_on(&iterate_g(n as Natural, config.k_max), config))
        .collect();
    Ok(per_n.into_iter().flatten().collect())
}
