use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::montgomery::Montgomery;
use super::prime::is_prime_proven;
use super::{gcd, iroot, is_prime, mul_mod, add_mod, ArithError, Result, VALUE_LIMIT};

const TRIAL_BOUND: u32 = 1 << 10;
const RHO_SEED: u64 = 0x5eed_d1ff_5e75;

/// Effort bound for the rho stage of [`factor_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Total rho iterations allowed across one factorization.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 1 << 24,
        }
    }
}

/// Prime-power decomposition with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    value: u128,
    factors: Vec<(u128, u32)>,
    /// Some factor is only a probable prime (above the proven bound).
    probable: bool,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_probable(&self) -> bool {
        self.probable
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> u128 {
        self.primes().product()
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Build from already-known prime powers; merges repeats and sorts.
    pub(crate) fn from_parts(value: u128, mut parts: Vec<(u128, u32)>) -> Self {
        parts.sort_unstable();
        let mut factors: Vec<(u128, u32)> = Vec::with_capacity(parts.len());
        for (p, e) in parts {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        let probable = factors.iter().any(|&(p, _)| !is_prime_proven(p));
        Factorization {
            value,
            factors,
            probable,
        }
    }

    /// Factorization of a divisor `d` of this value, read off the known primes.
    pub fn of_divisor(&self, d: u128) -> Option<Factorization> {
        if d == 0 || self.value % d != 0 {
            return None;
        }
        let mut rest = d;
        let mut parts = Vec::new();
        for &(p, _) in &self.factors {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                parts.push((p, e));
            }
        }
        debug_assert_eq!(rest, 1);
        Some(Factorization::from_parts(d, parts))
    }

    /// Factorization of a product of two factored values.
    pub fn product(&self, other: &Factorization) -> Factorization {
        let mut parts = self.factors.clone();
        parts.extend_from_slice(&other.factors);
        Factorization::from_parts(self.value * other.value, parts)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " · ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_BOUND as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=limit as u32).filter(|&i| sieve[i as usize]).collect()
    })
}

pub fn factor(n: u128) -> Result<Factorization> {
    factor_with(n, FactorBudget::default())
}

pub fn factor_with(n: u128, budget: FactorBudget) -> Result<Factorization> {
    if n == 0 || n >= VALUE_LIMIT {
        return Err(ArithError::Domain(n));
    }
    let mut parts = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            parts.push((p, e));
        }
    }
    if rest > 1 {
        let bound = TRIAL_BOUND as u128;
        if rest < bound * bound {
            parts.push((rest, 1));
        } else {
            let mut splitter = Splitter {
                rng: ChaCha8Rng::seed_from_u64(RHO_SEED),
                remaining: budget.rho_iterations,
                budget: budget.rho_iterations,
                value: n,
            };
            splitter.split(rest, 1, &mut parts)?;
        }
    }
    Ok(Factorization::from_parts(n, parts))
}

struct Splitter {
    rng: ChaCha8Rng,
    remaining: u64,
    budget: u64,
    value: u128,
}

impl Splitter {
    fn split(&mut self, m: u128, mult: u32, out: &mut Vec<(u128, u32)>) -> Result<()> {
        if m == 1 {
            return Ok(());
        }
        if is_prime(m) {
            out.push((m, mult));
            return Ok(());
        }
        // Perfect powers defeat rho slowly; peel them off directly.
        for k in (2..=7u32).rev() {
            let r = iroot(m, k);
            if r.checked_pow(k) == Some(m) {
                return self.split(r, mult * k, out);
            }
        }
        let d = self.find_divisor(m)?;
        self.split(d, mult, out)?;
        self.split(m / d, mult, out)
    }

    fn find_divisor(&mut self, m: u128) -> Result<u128> {
        loop {
            if self.remaining == 0 {
                return Err(ArithError::FactorBudget {
                    value: self.value,
                    budget: self.budget,
                });
            }
            let c = self.rng.gen_range(1..m);
            let x0 = self.rng.gen_range(0..m);
            let found = if m <= u64::MAX as u128 {
                brent_u64(m as u64, c as u64, x0 as u64, &mut self.remaining).map(u128::from)
            } else {
                brent_u128(m, c, x0, &mut self.remaining)
            };
            if let Some(d) = found {
                if d != 1 && d != m {
                    return Ok(d);
                }
            }
        }
    }
}

const BATCH: u64 = 128;

fn brent_u64(n: u64, c: u64, x0: u64, remaining: &mut u64) -> Option<u64> {
    if n & 1 == 0 {
        return Some(2);
    }
    let mont = Montgomery::new(n);
    let c = mont.to_mont(c % n);
    let f = |x: u64| mont.add(mont.mul(x, x), c);
    let mut y = mont.to_mont(x0 % n);
    let mut r: u64 = 1;
    let mut q = mont.one();
    let mut x;
    let mut ys;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mont.mul(q, mont.sub(x, y));
            }
            *remaining = remaining.saturating_sub(steps);
            let g = gcd(mont.from_mont(q) as u128, n as u128) as u64;
            k += steps;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                // Backtrack one step at a time.
                loop {
                    ys = f(ys);
                    let g = gcd(mont.from_mont(mont.sub(x, ys)) as u128, n as u128) as u64;
                    if g != 1 {
                        return if g == n { None } else { Some(g) };
                    }
                }
            }
            if k >= r || *remaining == 0 {
                break;
            }
        }
        if *remaining == 0 {
            return None;
        }
        r *= 2;
    }
}

fn brent_u128(n: u128, c: u128, x0: u128, remaining: &mut u64) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
    let diff = |a: u128, b: u128| a.abs_diff(b);
    let mut y = x0 % n;
    let mut r: u64 = 1;
    let mut q = 1u128;
    let mut x;
    let mut ys;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, diff(x, y), n);
            }
            *remaining = remaining.saturating_sub(steps);
            let g = gcd(q, n);
            k += steps;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                loop {
                    ys = f(ys);
                    let g = gcd(diff(x, ys), n);
                    if g != 1 {
                        return if g == n { None } else { Some(g) };
                    }
                }
            }
            if k >= r || *remaining == 0 {
                break;
            }
        }
        if *remaining == 0 {
            return None;
        }
        r *= 2;
    }
}
