//! Primality testing.
//!
//! Below [`PROVEN_PRIME_BOUND`] the Miller-Rabin test with the first thirteen
//! prime bases is deterministic. Above it, a base-2 strong probable-prime test
//! is combined with a strong Lucas test (Selfridge parameters); that
//! combination is the only probabilistic surface of the crate.

use super::montgomery::Montgomery;
use super::{add_mod, is_square, jacobi, mul_mod, pow_mod, sub_mod};

/// Miller-Rabin with bases 2..=41 has no strong pseudoprimes below this value.
pub const PROVEN_PRIME_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub(crate) const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

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
    if n < 97 * 97 {
        return true;
    }
    if n <= u64::MAX as u128 {
        return miller_rabin_u64(n as u64);
    }
    if n < PROVEN_PRIME_BOUND {
        return MR_BASES.iter().all(|&a| strong_probable_prime(n, a as u128));
    }
    strong_probable_prime(n, 2) && strong_lucas(n)
}

/// True when [`is_prime`] is a proof rather than a probable-prime verdict.
pub fn is_prime_proven(n: u128) -> bool {
    n < PROVEN_PRIME_BOUND
}

fn miller_rabin_u64(n: u64) -> bool {
    let mont = Montgomery::new(n);
    let d_full = n - 1;
    let s = d_full.trailing_zeros();
    let d = d_full >> s;
    let one = mont.one();
    let minus_one = mont.sub(0, one);
    'bases: for &a in &MR_BASES {
        if a % n == 0 {
            continue;
        }
        let mut x = mont.to_mont(mont.pow(a, d as u128));
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: u128, a: u128) -> bool {
    let d_full = n - 1;
    let s = d_full.trailing_zeros();
    let d = d_full >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn half_mod(x: u128, n: u128) -> u128 {
    // n odd and x < n < 2^127
    if x & 1 == 0 {
        x / 2
    } else {
        (x + n) / 2
    }
}

fn signed_mod(a: i128, n: u128) -> u128 {
    if a >= 0 {
        (a as u128) % n
    } else {
        let r = a.unsigned_abs() % n;
        if r == 0 {
            0
        } else {
            n - r
        }
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A (P = 1).
fn strong_lucas(n: u128) -> bool {
    if n & 1 == 0 || is_square(n) {
        return false;
    }
    let mut d: i128 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 if d.unsigned_abs() != n => return false,
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let q = (1 - d) / 4;
    let d_mod = signed_mod(d, n);
    let q_mod = signed_mod(q, n);

    let k_full = n + 1;
    let s = k_full.trailing_zeros();
    let k = k_full >> s;

    // U_1 = 1, V_1 = P = 1, Q^1
    let mut u = 1u128;
    let mut v = 1u128;
    let mut qk = q_mod;
    let bits = 128 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        // double
        u = mul_mod(u, v, n);
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if (k >> i) & 1 == 1 {
            let nu = half_mod(add_mod(u, v, n), n);
            let nv = half_mod(add_mod(mul_mod(d_mod, u, n), v, n), n);
            u = nu;
            v = nv;
            qk = mul_mod(qk, q_mod, n);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if v == 0 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(is_prime(5931661));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2));
        assert!(is_prime(396224014111));
        assert!(!is_prime(352));
    }

    #[test]
    fn pseudoprimes_rejected() {
        // Carmichael numbers and base-2 strong pseudoprimes
        for &n in &[561u128, 1105, 1729, 2047, 3277, 4033, 4681, 3215031751, 3825123056546413051] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn large_primes() {
        // 2^89 - 1 and 2^107 - 1 are Mersenne primes, 2^127 - 1 is out of range
        // but 2^61 - 1 squared times a prime is not.
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 107) - 1));
        assert!(!is_prime(((1u128 << 61) - 1) * 1_000_000_007));
        assert!(!is_prime(((1u128 << 61) - 1) * ((1u128 << 61) - 1)));
        // 2^97 - 1 is composite (11447 divides it)
        assert!(!is_prime((1u128 << 97) - 1));
    }

    #[test]
    fn lucas_agrees_with_deterministic_range() {
        // Above 2^64 but below the proven bound both routes must agree.
        let base: u128 = 1 << 70;
        for n in (base + 1..base + 4000).step_by(2) {
            let det = MR_BASES.iter().all(|&a| strong_probable_prime(n, a as u128));
            let bpsw = strong_probable_prime(n, 2) && strong_lucas(n);
            assert_eq!(det, bpsw, "n={n}");
        }
    }
}
