use phi_orbits::arith::{
    euler_phi, factorize, is_prime, lemma_predicate, modular::gcd, v2, LemmaKind,
};
use phi_orbits::sieve::{sieve_segment, totient_table, SegmentSieve};
use proptest::prelude::*;

/// Smallest-prime-factor table, used as an independent factorization oracle.
fn spf_table(max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; max + 1];
    for i in 2..=max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// `Some(p)` if q = p^α for a prime p.
fn prime_power_base(mut q: usize, spf: &[u32]) -> Option<usize> {
    let p = spf[q] as usize;
    while q % p == 0 {
        q /= p;
    }
    (q == 1).then_some(p)
}

#[test]
fn doubling_law_for_even_n() {
    for n in (2..=1_000_000u128).step_by(2) {
        assert_eq!(euler_phi(2 * n), 2 * euler_phi(n), "n = {n}");
    }
}

#[test]
fn lemma_equality_characterization() {
    let spf = spf_table(1_000_000);
    for n in 1..=1_000_000usize {
        let ell = n.trailing_zeros();
        let q = n >> ell;
        let verdict = lemma_predicate(n as u128);
        if ell == 0 || q == 1 {
            assert_eq!(verdict.kind, LemmaKind::NotApplicable, "n = {n}");
            continue;
        }
        let expect_equal = prime_power_base(q, &spf).is_some_and(|p| p % 4 == 3);
        let expected = if expect_equal {
            LemmaKind::Equal
        } else {
            LemmaKind::StrictlyMore
        };
        assert_eq!(verdict.kind, expected, "n = {n}");
        assert!(verdict.two_adic_phi >= verdict.two_adic_n);
    }
}

#[test]
fn odd_case_lemma_clause() {
    let spf = spf_table(1_000_000);
    let phi = totient_table(1_000_000);
    for q in (3..=1_000_000usize).step_by(2) {
        let value = euler_phi(q as u128);
        assert_eq!(value, phi[q] as u128);
        assert_eq!(value % 2, 0, "φ({q}) odd");
        let not_div_4 = value % 4 != 0;
        let expect = prime_power_base(q, &spf).is_some_and(|p| p % 4 == 3);
        assert_eq!(not_div_4, expect, "q = {q}");
    }
}

#[test]
fn segments_concatenate() {
    let sieve = SegmentSieve::new(3_000_000, 1 << 21);
    for (a, b, c) in [
        (2u64, 1000, 5000),
        (999_983, 1_000_000, 1_500_000),
        (2_000_000, 2_000_001, 2_999_999),
    ] {
        let left = sieve.segment(a, b).unwrap();
        let right = sieve.segment(b, c).unwrap();
        let whole = sieve.segment(a, c).unwrap();
        let joined_phi: Vec<u64> = left.phi.iter().chain(&right.phi).copied().collect();
        let joined_spf: Vec<u64> = left.spf.iter().chain(&right.spf).copied().collect();
        assert_eq!(joined_phi, whole.phi);
        assert_eq!(joined_spf, whole.spf);
    }
}

#[test]
fn segment_spf_is_least_prime_divisor() {
    let seg = sieve_segment(10_000_000, 10_020_000).unwrap();
    for (n, spf, _) in seg.iter() {
        assert_eq!(n % spf, 0);
        assert!(is_prime(spf as u128));
        let least = (2..=spf).find(|d| n % d == 0).unwrap();
        assert_eq!(least, spf, "n = {n}");
    }
}

fn next_prime(mut n: u128) -> u128 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

fn arb_wide() -> impl Strategy<Value = u128> {
    prop_oneof![
        1u128..1_000_000,
        1u128..(1u128 << 64),
        (1u128 << 40)..(1u128 << 90),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn phi_multiplicative_on_coprime_pairs(a in 1u128..=1_000_000, b in 1u128..=1_000_000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(euler_phi(a * b), euler_phi(a) * euler_phi(b));
    }

    #[test]
    fn factorization_reconstructs(n in arb_wide()) {
        let f = factorize(n);
        prop_assert_eq!(f.reconstruct(), Some(n));
        let primes: Vec<u128> = f.factors().iter().map(|&(p, _)| p).collect();
        prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        for p in primes {
            prop_assert!(is_prime(p), "{} listed as prime", p);
        }
    }

    #[test]
    fn product_of_two_large_primes_splits(a in (1u128 << 24)..(1u128 << 40), b in (1u128 << 40)..(1u128 << 64)) {
        let p = next_prime(a);
        let q = next_prime(b);
        prop_assert_eq!(factorize(p * q).factors().to_vec(), vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn v2_bounds(n in 1u128..u128::MAX) {
        let e = v2(n);
        prop_assert_eq!(n % (1u128 << e), 0);
        prop_assert!(e == 127 || n % (1u128 << (e + 1)) != 0);
    }
}
