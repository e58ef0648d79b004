//! Solutions of φ(n) + φ(n + φ(n)) = n.
//!
//! Every solution is 2^ℓ times one of 1, 3, 5, 7, 35, 47, or is built from
//! an exotic prime p = 8m + 7 with φ(6m + 5) = 4m + 4. This module checks
//! the equation directly, enumerates solutions independently of that
//! classification, classifies, extracts the case-analysis witnesses, and
//! runs the large searches for exotic primes and for the relaxed equation
//! 3φ(n) = 2n + 2.

mod search;
mod trace;

use serde::{Deserialize, Serialize};

pub use search::{
    exotic_prime_search, relaxed_search, ExoticOutcome, ExoticWitness, RelaxedOutcome,
    SearchOptions,
};
pub use trace::{case_trace, ProofTrace, TraceCase};

use crate::arith::{euler_phi, is_prime, v2, Natural};
use crate::error::{Error, Result};
use crate::sieve::totient_table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolutionKind {
    NotSolution,
    PowerOf2,
    Family3,
    Family5,
    Family7,
    Family35,
    Family47,
    /// Odd part is a prime 8m + 7 with φ(6m + 5) = 4m + 4.
    ExoticA,
    /// Odd part is 6m + 5 with 8m + 7 prime and φ(6m + 5) = 4m + 4.
    ExoticB,
}

impl SolutionKind {
    /// Kinds with a fixed odd part, in the order they are usually listed.
    pub const NAMED: [SolutionKind; 6] = [
        SolutionKind::PowerOf2,
        SolutionKind::Family3,
        SolutionKind::Family5,
        SolutionKind::Family7,
        SolutionKind::Family35,
        SolutionKind::Family47,
    ];

    /// Fixed odd part of a named family.
    pub fn odd_part(self) -> Option<Natural> {
        match self {
            SolutionKind::PowerOf2 => Some(1),
            SolutionKind::Family3 => Some(3),
            SolutionKind::Family5 => Some(5),
            SolutionKind::Family7 => Some(7),
            SolutionKind::Family35 => Some(35),
            SolutionKind::Family47 => Some(47),
            _ => None,
        }
    }

    /// Smallest admissible power of two.
    pub fn min_ell(self) -> u32 {
        if self == SolutionKind::PowerOf2 {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionClass {
    pub kind: SolutionKind,
    /// ℓ in n = 2^ℓ · (odd part).
    pub ell: u32,
    pub exotic_m: Option<Natural>,
}

/// φ(n) + φ(n + φ(n)) = n, evaluated directly.
pub fn is_solution(n: Natural) -> Result<bool> {
    let phi = euler_phi(n);
    let next = n.checked_add(phi).ok_or(Error::Overflow("n + φ(n)"))?;
    Ok(phi + euler_phi(next) == n)
}

/// All n ≤ `limit` solving the equation, by a totient table.
///
/// Makes no use of the classification, so it can serve as its oracle.
pub fn brute_force_solutions(limit: u64) -> Result<Vec<u64>> {
    let table_max = limit
        .checked_mul(2)
        .and_then(|m| u32::try_from(m).ok())
        .ok_or_else(|| Error::InvalidArgument(format!("limit {limit} too large for table")))?;
    let phi = totient_table(table_max);
    Ok((1..=limit as usize)
        .filter(|&n| {
            let p = phi[n] as usize;
            p + phi[n + p] as usize == n
        })
        .map(|n| n as u64)
        .collect())
}

/// Places n in the solution list by its shape alone, then confirms with
/// [`is_solution`].
pub fn classify(n: Natural) -> Result<SolutionClass> {
    let ell = v2(n);
    let odd = n >> ell;
    let mut class = SolutionClass {
        kind: SolutionKind::NotSolution,
        ell,
        exotic_m: None,
    };
    if ell == 0 {
        return Ok(class);
    }
    // Named families first: 5, 7, 35, 47 also have exotic shape (m = 0, 5).
    if let Some(kind) = SolutionKind::NAMED
        .into_iter()
        .find(|k| k.odd_part() == Some(odd) && ell >= k.min_ell())
    {
        class.kind = kind;
    } else if odd == 1 {
        // 2 = 2^1 · 1 fails the equation.
    } else if let Some(m) = exotic_a_witness(odd) {
        class.kind = SolutionKind::ExoticA;
        class.exotic_m = Some(m);
    } else if let Some(m) = exotic_b_witness(odd)? {
        class.kind = SolutionKind::ExoticB;
        class.exotic_m = Some(m);
    }
    if class.kind != SolutionKind::NotSolution && !is_solution(n)? {
        return Err(Error::Inconsistency(format!(
            "{n} classified as {:?} but fails the equation",
            class.kind
        )));
    }
    Ok(class)
}

/// m with odd = 8m + 7 prime and φ(6m + 5) = 4m + 4.
fn exotic_a_witness(odd: Natural) -> Option<Natural> {
    if odd % 8 != 7 || !is_prime(odd) {
        return None;
    }
    let m = (odd - 7) / 8;
    (euler_phi(6 * m + 5) == 4 * m + 4).then_some(m)
}

/// m with odd = 6m + 5, φ(odd) = 4m + 4 and 8m + 7 prime.
fn exotic_b_witness(odd: Natural) -> Result<Option<Natural>> {
    if odd % 6 != 5 {
        return Ok(None);
    }
    let m = (odd - 5) / 6;
    if euler_phi(odd) != 4 * m + 4 {
        return Ok(None);
    }
    let p = m
        .checked_mul(8)
        .and_then(|x| x.checked_add(7))
        .ok_or(Error::Overflow("8m + 7"))?;
    Ok(is_prime(p).then_some(m))
}

/// The members 2^ℓ·q of a family for ℓ up to `ell_max`. Exotic kinds take
/// their m in `exotic_m`.
pub fn family_members(
    kind: SolutionKind,
    ell_max: u32,
    exotic_m: Option<Natural>,
) -> Result<Vec<Natural>> {
    let overflow = || Error::Overflow("family base");
    let odd = match kind {
        SolutionKind::NotSolution => {
            return Err(Error::Precondition("NotSolution has no members".into()))
        }
        SolutionKind::ExoticA | SolutionKind::ExoticB => {
            let m = exotic_m
                .ok_or_else(|| Error::Precondition(format!("{kind:?} members need an m value")))?;
            let (mul, add) = if kind == SolutionKind::ExoticA {
                (8, 7)
            } else {
                (6, 5)
            };
            m.checked_mul(mul)
                .and_then(|x| x.checked_add(add))
                .ok_or_else(overflow)?
        }
        named => named.odd_part().expect("named family"),
    };
    let mut members = Vec::new();
    for ell in kind.min_ell()..=ell_max {
        let n = odd
            .checked_mul(
                1u128
                    .checked_shl(ell)
                    .filter(|_| ell < 128)
                    .ok_or_else(overflow)?,
            )
            .ok_or_else(overflow)?;
        if !is_solution(n)? {
            return Err(Error::Precondition(format!(
                "{n} = 2^{ell} * {odd} is not a solution; m is not a witness"
            )));
        }
        members.push(n);
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_solution_examples() {
        assert!(is_solution(10).unwrap());
        assert!(!is_solution(2).unwrap());
        assert!(!is_solution(1).unwrap());
        assert!(is_solution(12).unwrap());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_solutions(20).unwrap(),
            vec![4, 6, 8, 10, 12, 14, 16, 20]
        );
        assert_eq!(
            brute_force_solutions(100).unwrap(),
            vec![4, 6, 8, 10, 12, 14, 16, 20, 24, 28, 32, 40, 48, 56, 64, 70, 80, 94, 96]
        );
        assert!(brute_force_solutions(3).unwrap().is_empty());
    }

    #[test]
    fn brute_force_matches_direct_evaluation() {
        let direct: Vec<u64> = (1..=5000u64)
            .filter(|&n| is_solution(n as u128).unwrap())
            .collect();
        assert_eq!(brute_force_solutions(5000).unwrap(), direct);
    }

    #[test]
    fn classify_examples() {
        let c = classify(70).unwrap();
        assert_eq!((c.kind, c.ell), (SolutionKind::Family35, 1));
        assert_eq!(classify(2).unwrap().kind, SolutionKind::NotSolution);
        let c = classify(188).unwrap();
        assert_eq!((c.kind, c.ell), (SolutionKind::Family47, 2));
        assert_eq!(classify(4).unwrap().kind, SolutionKind::PowerOf2);
        assert_eq!(classify(47).unwrap().kind, SolutionKind::NotSolution);
        assert_eq!(classify(1).unwrap().kind, SolutionKind::NotSolution);
    }

    #[test]
    fn witness_helpers_recognize_known_exotics() {
        assert_eq!(exotic_a_witness(7), Some(0));
        assert_eq!(exotic_a_witness(47), Some(5));
        assert_eq!(exotic_b_witness(5).unwrap(), Some(0));
        assert_eq!(exotic_b_witness(35).unwrap(), Some(5));
        // 1295 solves the relaxed equation but 8·215 + 7 = 1727 = 11·157.
        assert_eq!(exotic_b_witness(1295).unwrap(), None);
        assert_eq!(exotic_a_witness(23), None);
    }

    #[test]
    fn family_examples() {
        assert_eq!(
            family_members(SolutionKind::Family5, 3, None).unwrap(),
            vec![10, 20, 40]
        );
        assert_eq!(
            family_members(SolutionKind::PowerOf2, 4, None).unwrap(),
            vec![4, 8, 16]
        );
        assert_eq!(
            family_members(SolutionKind::Family47, 2, None).unwrap(),
            vec![94, 188]
        );
        assert_eq!(
            family_members(SolutionKind::ExoticA, 2, Some(5)).unwrap(),
            vec![94, 188]
        );
        assert_eq!(
            family_members(SolutionKind::ExoticB, 2, Some(0)).unwrap(),
            vec![10, 20]
        );
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            family_members(SolutionKind::NotSolution, 3, None),
            Err(Error::Precondition(_))
        ));
        assert!(family_members(SolutionKind::ExoticA, 3, None).is_err());
        assert!(family_members(SolutionKind::ExoticA, 3, Some(1)).is_err());
        assert!(matches!(
            family_members(SolutionKind::Family3, 200, None),
            Err(Error::Overflow(_))
        ));
    }
}
