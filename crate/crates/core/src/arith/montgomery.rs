//! Montgomery multiplication for odd 64-bit moduli.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    n: u64,
    // -n^{-1} mod 2^64
    n_neg_inv: u64,
    // 2^128 mod n
    r2: u64,
    one: u64,
}

impl Montgomery {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = (u128::from(u64::MAX) + 1) % n as u128;
        let r2 = (r * r % n as u128) as u64;
        Montgomery {
            n,
            n_neg_inv: inv.wrapping_neg(),
            r2,
            one: r as u64,
        }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_neg_inv);
        let mn = m as u128 * self.n as u128;
        let (sum, carry) = t.overflowing_add(mn);
        let mut r = (sum >> 64) as u64;
        if carry {
            // t + mn overflowed 2^128; the true quotient is r + 2^64.
            r = r.wrapping_add(0u64.wrapping_sub(self.n));
            return r;
        }
        if r >= self.n {
            r -= self.n;
        }
        r
    }

    #[inline]
    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub(crate) fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn one(&self) -> u64 {
        self.one
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let (s, c) = a.overflowing_add(b);
        if c || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    /// Plain (non-Montgomery) input and output.
    pub(crate) fn pow(&self, base: u64, mut exp: u128) -> u64 {
        let mut result = self.one;
        let mut b = self.to_mont(base % self.n);
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        self.from_mont(result)
    }
}
