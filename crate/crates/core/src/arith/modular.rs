//! Modular arithmetic for moduli up to 128 bits.
//!
//! Products of two 128-bit residues need 256 bits, so multiplication goes
//! through Montgomery reduction with R = 2^128 instead of a wide division.

const LOW: u128 = u64::MAX as u128;

/// Full 256-bit product, returned as (high, low).
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LOW);
    let (b1, b0) = (b >> 64, b & LOW);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LOW) + (p10 & LOW);
    let lo = (p00 & LOW) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Modular inverse of `a` modulo `m` (for word-sized moduli), if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Jacobi symbol (a/n) for odd n.
pub fn jacobi(mut a: u128, mut n: u128) -> i32 {
    debug_assert!(n & 1 == 1);
    a %= n;
    let mut sign = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n & 7, 3 | 5) {
            sign = -sign;
        }
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Montgomery context for a fixed odd modulus.
///
/// Residues handed to `mul`, `add`, `sub`, `half` are in Montgomery form
/// (x·R mod n). Zero is its own Montgomery form.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    n: u128,
    neg_inv: u128,
    r2: u128,
    one: u128,
}

impl Montgomery {
    pub fn new(n: u128) -> Self {
        assert!(
            n & 1 == 1 && n > 1,
            "Montgomery modulus must be odd and > 1"
        );
        // Newton iteration doubles the number of correct low bits; n is its
        // own inverse modulo 8.
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let one = (u128::MAX % n + 1) % n;
        let mut ctx = Montgomery {
            n,
            neg_inv: inv.wrapping_neg(),
            r2: 0,
            one,
        };
        let mut r2 = one;
        for _ in 0..128 {
            r2 = ctx.add(r2, r2);
        }
        ctx.r2 = r2;
        ctx
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    pub fn one(&self) -> u128 {
        self.one
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let carry = lo.overflowing_add(ml).1 as u128;
        let (t, o1) = hi.overflowing_add(mh);
        let (t, o2) = t.overflowing_add(carry);
        if o1 || o2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u128) -> u128 {
        let (hi, lo) = mul_wide(a % self.n, self.r2);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let (s, o) = a.overflowing_add(b);
        if o || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    /// a/2 mod n.
    #[inline]
    pub fn half(&self, a: u128) -> u128 {
        if a & 1 == 0 {
            a >> 1
        } else {
            (a >> 1) + (self.n >> 1) + 1
        }
    }

    pub fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut acc = self.one;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}
