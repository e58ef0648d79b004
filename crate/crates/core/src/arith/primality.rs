//! Primality testing.
//!
//! Below 2^64 a fixed seven-base Miller-Rabin set is deterministic. Below
//! 3.317·10^24 the first thirteen prime bases are deterministic. Above that
//! the thirteen-base test is combined with a strong Lucas test (BPSW).

use super::modular::{jacobi, Montgomery};

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
const PRIME_BASES_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 43 * 43 {
        return true;
    }
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    let ctx = Montgomery::new(n);
    if !SMALL_PRIMES
        .iter()
        .all(|&a| strong_probable_prime(&ctx, a as u128))
    {
        return false;
    }
    n < PRIME_BASES_BOUND || strong_lucas(&ctx)
}

fn is_prime_u64(n: u64) -> bool {
    let ctx = Montgomery::new(n as u128);
    BASES_64.iter().all(|&a| {
        let a = a % n;
        a == 0 || strong_probable_prime(&ctx, a as u128)
    })
}

fn strong_probable_prime(ctx: &Montgomery, base: u128) -> bool {
    let n = ctx.modulus();
    let n1 = n - 1;
    let s = n1.trailing_zeros();
    let d = n1 >> s;
    let one = ctx.one();
    let minus_one = ctx.sub(0, one);
    let mut x = ctx.pow(ctx.to_mont(base), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ctx.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas(ctx: &Montgomery) -> bool {
    let n = ctx.modulus();
    let root = n.isqrt();
    if root * root == n {
        return false;
    }
    // D = 5, -7, 9, -11, ... until (D/n) = -1
    let mut d_abs: u128 = 5;
    let mut d_neg = false;
    loop {
        let d_mod = if d_neg { n - d_abs % n } else { d_abs % n };
        match jacobi(d_mod, n) {
            -1 => break,
            0 if d_abs % n != 0 => return false,
            _ => {}
        }
        d_abs += 2;
        d_neg = !d_neg;
    }
    let to_signed = |abs: u128, neg: bool| {
        let m = ctx.to_mont(abs);
        if neg {
            ctx.sub(0, m)
        } else {
            m
        }
    };
    let d = to_signed(d_abs, d_neg);
    // Q = (1 - D) / 4
    let q = if d_neg {
        to_signed((1 + d_abs) / 4, false)
    } else {
        to_signed((d_abs - 1) / 4, true)
    };
    let n1 = n + 1; // n < 2^128 - 1 here because n is odd and not a square
    let s = n1.trailing_zeros();
    let k = n1 >> s;

    let one = ctx.one();
    let mut u = one;
    let mut v = one; // P = 1
    let mut qk = q;
    let bits = 128 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        u = ctx.mul(u, v);
        v = ctx.sub(ctx.mul(v, v), ctx.add(qk, qk));
        qk = ctx.mul(qk, qk);
        if (k >> i) & 1 == 1 {
            let u_next = ctx.half(ctx.add(u, v));
            let v_next = ctx.half(ctx.add(ctx.mul(d, u), v));
            u = u_next;
            v = v_next;
            qk = ctx.mul(qk, q);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = ctx.sub(ctx.mul(v, v), ctx.add(qk, qk));
        qk = ctx.mul(qk, qk);
        if v == 0 {
            return true;
        }
    }
    false
}
