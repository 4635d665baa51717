use std::collections::HashSet;

use super::{Analysis, Evidence, OrbitWitness, Reason, Scope, TestConfig, Witness};
use crate::arith::{self, isqrt, mul_le, pow_mod};
use crate::multiplier::MultiplierWalk;
use crate::structure::ParamSet;

/// Least `(a, b)` in lexicographic order with `k = a·o + b`,
/// `b(b − 1) <= λ(h − 1)` and `a·o(o − 1) <= λ(p − 1)`, if any.
///
/// `a` counts orbits of size `o` and `b` fixed points; both may be zero.
pub fn orbit_count_feasible(k: u128, o: u128, lambda: u128, p: u128, h_order: u128) -> Option<(u128, u128)> {
    assert!(o >= 1 && h_order >= 1 && p >= 1);
    let b_max = max_fixed(lambda, h_order - 1).min(k);
    let a_lo = (k - b_max).div_ceil(o);
    if a_lo > k / o {
        return None;
    }
    if o > 1 && a_lo > 0 {
        // o(o − 1) only overflows when far above λ(p − 1).
        match o.checked_mul(o - 1) {
            Some(d) if mul_le(a_lo, d, lambda, p - 1) => {}
            _ => return None,
        }
    }
    Some((a_lo, k - a_lo * o))
}

/// Largest `b` with `b(b − 1) <= λ·c`.
fn max_fixed(lambda: u128, c: u128) -> u128 {
    let ok = |b: u128| b == 0 || mul_le(b, b - 1, lambda, c);
    let mut b = match lambda.checked_mul(c) {
        Some(l) => isqrt(l) + 1,
        None => {
            // λ·c >= 2^128: the answer is at least 2^64. Binary search on b.
            let (mut lo, mut hi) = (1u128 << 64, u128::MAX);
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            return lo;
        }
    };
    while !ok(b) {
        b -= 1;
    }
    while b < u128::MAX && ok(b + 1) {
        b += 1;
    }
    b
}

/// Orbit-count witness for exponent `exponent_g`, trying every prime that
/// exactly divides `v` in descending order.
pub fn orbit_count_test(
    params: &ParamSet,
    exponent_g: u128,
    config: &TestConfig,
) -> arith::Result<Option<OrbitWitness>> {
    let an = Analysis::new(params, config)?;
    Ok(run(&an, exponent_g)?.ok().map(into_orbit))
}

/// As [`orbit_count_test`] but restricted to the decomposition with the given `p`.
pub fn orbit_count_test_at(
    params: &ParamSet,
    exponent_g: u128,
    p: u128,
    config: &TestConfig,
) -> arith::Result<Option<OrbitWitness>> {
    let an = Analysis::new(params, config)?;
    if !an.exactly_dividing_primes().contains(&p) || exponent_g % p != 0 {
        return Ok(None);
    }
    Ok(search_at(&an, exponent_g, p)?.ok().map(into_orbit))
}

fn into_orbit(w: Witness) -> OrbitWitness {
    match w.evidence {
        Evidence::OrbitCount(o) => o,
        _ => unreachable!(),
    }
}

pub(super) fn run(an: &Analysis<'_>, e: u128) -> arith::Result<Result<Witness, Reason>> {
    if an.basis.is_empty() {
        return Ok(Err(Reason::NoMultipliers));
    }
    let mut primes = an.exactly_dividing_primes();
    if primes.is_empty() {
        return Ok(Err(Reason::NoExactPrime));
    }
    primes.reverse();
    for p in primes {
        if let Ok(w) = search_at(an, e, p)? {
            return Ok(Ok(w));
        }
    }
    Ok(Err(Reason::CandidateCap))
}

fn search_at(an: &Analysis<'_>, e: u128, p: u128) -> arith::Result<Result<Witness, Reason>> {
    let params = &an.params;
    let exp_h = e / p;
    let h = params.v() / p;
    let ctx_h = an.order_context(exp_h)?;
    let ctx_p = an.order_context(p)?;
    let mut walk = MultiplierWalk::new(&an.basis.primes, e);
    let mut seen = HashSet::new();
    let mut tried = 0;
    while let Some((i, m)) = walk.next_element() {
        if i == 0 {
            continue;
        }
        tried += 1;
        if tried > an.config.candidate_cap {
            return Ok(Err(Reason::CandidateCap));
        }
        let s = ctx_h.order(m % exp_h)?;
        let o = ctx_p.order(pow_mod(m, s, p))?;
        if !seen.insert(o) {
            continue;
        }
        if orbit_count_feasible(params.k(), o, params.lambda(), p, h).is_none() {
            return Ok(Ok(Witness {
                scope: Scope::Exponent(e),
                evidence: Evidence::OrbitCount(OrbitWitness {
                    p,
                    h_order: h,
                    exponent_h: exp_h,
                    m,
                    word: walk.word(i),
                    s,
                    o,
                }),
            }));
        }
    }
    Ok(Err(Reason::Exhausted))
}
