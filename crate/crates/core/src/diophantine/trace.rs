//! Witness data placing a solution inside the 2-adic case analysis.

use serde::{Deserialize, Serialize};

use super::is_solution;
use crate::arith::{euler_phi, factorize, odd_part, v2, Natural};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceCase {
    /// Odd part 1 or 3: the 2^k → 3·2^(k-1) → 2^(k+1) chain.
    PowerOf2Chain,
    /// v2(φ(n)) > v2(n); then n + φ(n) = 2^ℓ·p^α.
    #[serde(rename = "Case_l2_gt_l1")]
    L2GreaterThanL1,
    /// v2(φ(n)) = v2(n); then n = 2^ℓ·p^α.
    #[serde(rename = "Case_l2_eq_l1")]
    L2EqualL1,
}

/// (ℓ₁, ℓ₂, p, α, k, q) for a solution n, with 3p − 1 = 2^k·q.
///
/// The prime data is absent for `PowerOf2Chain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub n: Natural,
    pub ell1: u32,
    pub ell2: u32,
    pub case: TraceCase,
    pub p: Option<Natural>,
    pub alpha: Option<u32>,
    pub k: Option<u32>,
    pub q: Option<Natural>,
    /// φ(q) = (2/3)(q + 1)
    pub phi_q_check: Option<bool>,
}

pub fn case_trace(n: Natural) -> Result<ProofTrace> {
    if n == 0 || !is_solution(n)? {
        return Err(Error::Precondition(format!(
            "{n} does not solve the equation"
        )));
    }
    let phi = euler_phi(n);
    let ell1 = v2(n);
    let ell2 = v2(phi);
    let mut trace = ProofTrace {
        n,
        ell1,
        ell2,
        case: TraceCase::PowerOf2Chain,
        p: None,
        alpha: None,
        k: None,
        q: None,
        phi_q_check: None,
    };
    let odd = odd_part(n);
    if odd == 1 || odd == 3 {
        return Ok(trace);
    }
    // n + φ(n) cannot overflow: is_solution already computed it.
    let prime_power_source = match ell2.cmp(&ell1) {
        std::cmp::Ordering::Greater => {
            trace.case = TraceCase::L2GreaterThanL1;
            let sum = n + phi;
            if v2(sum) != ell1 {
                return Err(Error::Inconsistency(format!(
                    "v2(n + φ(n)) = {} differs from v2(n) = {ell1} at n = {n}",
                    v2(sum)
                )));
            }
            odd_part(sum)
        }
        std::cmp::Ordering::Equal => {
            trace.case = TraceCase::L2EqualL1;
            odd
        }
        std::cmp::Ordering::Less => {
            return Err(Error::Inconsistency(format!(
                "v2(φ(n)) = {ell2} < v2(n) = {ell1} at n = {n}"
            )))
        }
    };
    let (p, alpha) = factorize(prime_power_source)
        .as_prime_power()
        .ok_or_else(|| {
            Error::Inconsistency(format!(
                "{prime_power_source} is not a prime power (n = {n})"
            ))
        })?;
    let three_p_minus_one = p.checked_mul(3).ok_or(Error::Overflow("3p - 1"))? - 1;
    let k = v2(three_p_minus_one);
    let q = three_p_minus_one >> k;
    trace.p = Some(p);
    trace.alpha = Some(alpha);
    trace.k = Some(k);
    trace.q = Some(q);
    trace.phi_q_check = Some(euler_phi(q).checked_mul(3) == (q + 1).checked_mul(2));
    Ok(trace)
}
