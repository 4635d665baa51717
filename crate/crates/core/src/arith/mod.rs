//! Exact integer arithmetic on `u128`: modular exponentiation, primality,
//! factorization and multiplicative orders.
//!
//! Every value handled here is below 2^127, so sums of two residues never
//! overflow. Products are formed either in a single widening `u128`
//! multiplication (moduli up to 2^64) or by a shift-and-add ladder above that.

mod factor;
mod montgomery;
mod order;
mod prime;

pub use factor::{factor, factor_with, FactorBudget, Factorization};
pub use order::{carmichael, carmichael_with, mult_order, OrderContext};
pub use prime::{is_prime, is_prime_proven, PROVEN_PRIME_BOUND};

use thiserror::Error;

/// Largest value accepted by the arithmetic layer (exclusive).
pub const VALUE_LIMIT: u128 = 1 << 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("factorization of {value} did not complete within {budget} rho iterations")]
    FactorBudget { value: u128, budget: u64 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotCoprime { value: u128, modulus: u128 },
    #[error("argument {0} is outside the supported range")]
    Domain(u128),
}

pub type Result<T> = std::result::Result<T, ArithError>;

#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    if m <= u64::MAX as u128 {
        return ((a % m) * (b % m)) % m;
    }
    let a = a % m;
    let mut b = b % m;
    if a < (1 << 64) && b < (1 << 64) {
        return (a * b) % m;
    }
    // m < 2^127, so doubling a residue stays inside u128.
    let mut acc = 0u128;
    let mut base = a;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, base, m);
        }
        base = add_mod(base, base, m);
        b >>= 1;
    }
    acc
}

#[inline]
pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod modulus`. A modulus of 1 yields 0.
pub fn pow_mod(base: u128, mut exp: u128, modulus: u128) -> u128 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    if modulus <= u64::MAX as u128 && modulus & 1 == 1 && modulus > 1 {
        let mont = montgomery::Montgomery::new(modulus as u64);
        return mont.pow((base % modulus) as u64, exp) as u128;
    }
    let mut result = 1u128;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple; `lcm(0, x) = 0`. Panics on overflow.
pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)).checked_mul(b).expect("lcm overflow")
}

/// Full 256-bit product as `(high, low)` halves.
pub fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let lo = a0 * b0;
    let mid1 = a1 * b0;
    let mid2 = a0 * b1;
    let hi = a1 * b1;
    let (mid, carry) = mid1.overflowing_add(mid2);
    let (low, c2) = lo.overflowing_add(mid << 64);
    let high = hi + (mid >> 64) + ((carry as u128) << 64) + c2 as u128;
    (high, low)
}

/// Exact comparison `a·b ≤ c·d`.
pub fn mul_le(a: u128, b: u128, c: u128, d: u128) -> bool {
    wide_mul(a, b) <= wide_mul(c, d)
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // Correct the floating-point estimate in both directions.
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Integer `k`-th root (floor).
pub fn iroot(n: u128, k: u32) -> u128 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / k as f64) as u128;
    let pow_le = |x: u128| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            match acc.checked_mul(x) {
                Some(v) if v <= n => acc = v,
                _ => return false,
            }
        }
        true
    };
    while x > 0 && !pow_le(x) {
        x -= 1;
    }
    while pow_le(x + 1) {
        x += 1;
    }
    x
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u128) -> i8 {
    assert!(n & 1 == 1, "jacobi symbol needs an odd modulus");
    let mut a = if a >= 0 {
        (a as u128) % n
    } else {
        let r = a.unsigned_abs() % n;
        if r == 0 {
            0
        } else {
            n - r
        }
    };
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a & 1 == 0 {
            a >>= 1;
            if matches!(n & 7, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Hilbert symbol `(a, b)_p` for nonzero `a`, `b` and a prime `p`.
///
/// Returns 1 when `x² = a·y² + b·z²` has a nontrivial solution over the
/// `p`-adic numbers, −1 otherwise.
pub fn hilbert_symbol(a: i128, b: i128, p: u128) -> i8 {
    assert!(a != 0 && b != 0, "hilbert symbol of zero");
    let split = |x: i128| -> (u32, i128) {
        let mut x = x;
        let mut e = 0;
        let pp = p as i128;
        while x % pp == 0 {
            x /= pp;
            e += 1;
        }
        (e, x)
    };
    let (alpha, u) = split(a);
    let (beta, w) = split(b);
    if p == 2 {
        let eps = |x: i128| ((x.rem_euclid(4) - 1) / 2) as u32;
        let omega = |x: i128| matches!(x.rem_euclid(8), 3 | 5) as u32;
        let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut sign: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
    if beta % 2 == 1 {
        sign *= jacobi(u, p);
    }
    if alpha % 2 == 1 {
        sign *= jacobi(w, p);
    }
    sign
}

/// Every `d | w` whose prime support equals that of `w`, ascending.
///
/// These are exactly the exponents realised by abelian groups of order `w`.
pub fn divisors_with_full_radical(w: u128) -> Result<Vec<u128>> {
    if w == 0 {
        return Err(ArithError::Domain(0));
    }
    Ok(full_radical_divisors_of(&factor(w)?))
}

/// [`divisors_with_full_radical`] for an already factored value.
pub fn full_radical_divisors_of(f: &Factorization) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in f.factors() {
        let mut next = Vec::with_capacity(out.len() * e as usize);
        for &d in &out {
            let mut q = d;
            for _ in 0..e {
                q *= p;
                next.push(q);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// All positive divisors of the factored value, ascending.
pub fn divisors(f: &Factorization) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut q = 1u128;
        for _ in 0..e {
            q *= p;
            for i in 0..len {
                out.push(out[i] * q);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(5, 8, 32), 1);
        assert_eq!(pow_mod(5, 8, 11), 4);
        assert_eq!(pow_mod(7, 0, 13), 1);
        assert_eq!(pow_mod(7, 0, 1), 0);
    }

    #[test]
    fn pow_mod_above_64_bits() {
        let m: u128 = (1 << 100) + 277;
        // Fermat check against a slow ladder.
        let mut naive = 1u128;
        for _ in 0..300 {
            naive = mul_mod(naive, 3, m);
        }
        assert_eq!(pow_mod(3, 300, m), naive);
    }

    #[test]
    fn mul_mod_wide() {
        let m = (1u128 << 126) + 15;
        let a = m - 1;
        // (-1)(-1) = 1
        assert_eq!(mul_mod(a, a, m), 1);
        assert_eq!(mul_mod(a, 2, m), m - 2);
    }

    #[test]
    fn roots() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u128::MAX), u64::MAX as u128);
        assert_eq!(iroot(27, 3), 3);
        assert_eq!(iroot(26, 3), 2);
        assert!(is_square(1024));
        assert!(!is_square(1023));
    }

    #[test]
    fn jacobi_small() {
        // quadratic residues mod 11: 1 3 4 5 9
        for a in 1..11i128 {
            let expect = if [1, 3, 4, 5, 9].contains(&a) { 1 } else { -1 };
            assert_eq!(jacobi(a, 11), expect, "a={a}");
        }
        assert_eq!(jacobi(-1, 7), -1);
        assert_eq!(jacobi(-1, 13), 1);
        assert_eq!(jacobi(21, 15), 0);
    }

    #[test]
    fn full_radical_divisors() {
        assert_eq!(divisors_with_full_radical(32).unwrap(), vec![2, 4, 8, 16, 32]);
        assert_eq!(divisors_with_full_radical(12).unwrap(), vec![6, 12]);
        assert_eq!(divisors_with_full_radical(1).unwrap(), vec![1]);
        assert_eq!(
            divisors_with_full_radical(352).unwrap(),
            vec![22, 44, 88, 176, 352]
        );
    }

    #[test]
    fn full_radical_divisors_brute_force() {
        for w in 1..=10_000u128 {
            let f = factor(w).unwrap();
            let primes: Vec<u128> = f.factors().iter().map(|&(p, _)| p).collect();
            let brute: Vec<u128> = (1..=w)
                .filter(|d| w % d == 0 && primes.iter().all(|p| d % p == 0))
                .collect();
            assert_eq!(divisors_with_full_radical(w).unwrap(), brute, "w={w}");
        }
    }

    #[test]
    fn hilbert_symbols() {
        // x² = 6y² − z² has no solution: obstructed at 3
        assert_eq!(hilbert_symbol(6, -1, 3), -1);
        assert_eq!(hilbert_symbol(6, -1, 2), -1);
        // x² = 2y² − z²: x = y = z = 1
        assert_eq!(hilbert_symbol(2, -1, 2), 1);
        assert_eq!(hilbert_symbol(-1, -1, 2), -1);
        assert_eq!(hilbert_symbol(5, 3, 7), 1);
    }

    #[test]
    fn hilbert_product_formula() {
        // Product over all places is 1; the real place is -1 iff both negative.
        let primes = [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        for a in -30i128..=30 {
            for b in -30i128..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let mut prod: i8 = if a < 0 && b < 0 { -1 } else { 1 };
                for &p in &primes {
                    prod *= hilbert_symbol(a, b, p);
                }
                assert_eq!(prod, 1, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn wide_products() {
        assert_eq!(wide_mul(u128::MAX, u128::MAX), (u128::MAX - 1, 1));
        assert_eq!(wide_mul(1 << 64, 1 << 64), (1, 0));
        assert_eq!(wide_mul(12345, 678), (0, 12345 * 678));
        assert!(mul_le(u128::MAX, 2, 2, u128::MAX));
        assert!(!mul_le(u128::MAX, 3, 2, u128::MAX));
    }

    #[test]
    fn lcm_gcd() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(lcm(0, 6), 0);
    }
}
