use std::collections::BTreeMap;

use super::{factor, gcd, pow_mod, ArithError, Factorization, Result};

/// Factorization of the Carmichael function `λ(n)` given the factorization of `n`.
pub fn carmichael(n: &Factorization) -> Result<Factorization> {
    carmichael_with(n, |q| factor(q - 1))
}

/// [`carmichael`] with a caller-supplied factorization of `q − 1` for each odd prime `q | n`.
pub fn carmichael_with(
    n: &Factorization,
    mut factor_pm1: impl FnMut(u128) -> Result<Factorization>,
) -> Result<Factorization> {
    let mut exps: BTreeMap<u128, u32> = BTreeMap::new();
    let mut bump = |p: u128, e: u32| {
        let slot = exps.entry(p).or_insert(0);
        *slot = (*slot).max(e);
    };
    for &(p, e) in n.factors() {
        if p == 2 {
            match e {
                1 => {}
                2 => bump(2, 1),
                _ => bump(2, e - 2),
            }
            continue;
        }
        if e > 1 {
            bump(p, e - 1);
        }
        for &(q, f) in factor_pm1(p)?.factors() {
            bump(q, f);
        }
    }
    let parts: Vec<(u128, u32)> = exps.into_iter().filter(|&(_, e)| e > 0).collect();
    let value = parts.iter().map(|&(p, e)| p.pow(e)).product();
    Ok(Factorization::from_parts(value, parts))
}

/// Precomputed data for repeated order queries modulo one modulus.
#[derive(Debug, Clone)]
pub struct OrderContext {
    modulus: u128,
    lambda: Factorization,
}

impl OrderContext {
    pub fn new(modulus: u128) -> Result<Self> {
        if modulus == 0 {
            return Err(ArithError::Domain(0));
        }
        let lambda = carmichael(&factor(modulus)?)?;
        Ok(OrderContext { modulus, lambda })
    }

    pub fn from_factorization(n: &Factorization) -> Result<Self> {
        Ok(OrderContext {
            modulus: n.value(),
            lambda: carmichael(n)?,
        })
    }

    /// Context from a known factorization of `n` and of `λ(n)`.
    pub fn from_parts(n: &Factorization, lambda: Factorization) -> Self {
        OrderContext {
            modulus: n.value(),
            lambda,
        }
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Exponent of the unit group modulo `modulus`.
    pub fn lambda(&self) -> &Factorization {
        &self.lambda
    }

    /// Least `t >= 1` with `m^t = 1`.
    pub fn order(&self, m: u128) -> Result<u128> {
        let n = self.modulus;
        if n == 1 {
            return Ok(1);
        }
        let m = m % n;
        if gcd(m, n) != 1 {
            return Err(ArithError::NotCoprime { value: m, modulus: n });
        }
        let mut t = self.lambda.value();
        for &(q, e) in self.lambda.factors() {
            for _ in 0..e {
                if pow_mod(m, t / q, n) == 1 {
                    t /= q;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }
}

/// Multiplicative order of `m` modulo `modulus`.
pub fn mult_order(m: u128, modulus: u128) -> Result<u128> {
    OrderContext::new(modulus)?.order(m)
}
