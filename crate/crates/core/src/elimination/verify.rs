//! Re-checks witnesses from scratch using only the arithmetic layer.

use std::collections::HashSet;

use super::{BoundMethod, BrcWitness, Evidence, GroupBound, Scope, Witness};
use crate::arith::{self, gcd, hilbert_symbol, is_prime, is_square, lcm, mul_le, mul_mod, pow_mod, sub_mod};
use crate::structure::ParamSet;

/// Largest closure a verifier will enumerate.
const CLOSURE_LIMIT: u128 = 1 << 26;

/// True iff the witness proves its claim for `params` (or their complement).
pub fn verify_witness(w: &Witness, params: &ParamSet) -> bool {
    let params = params.normalized();
    match &w.evidence {
        Evidence::Counting { .. } => false,
        Evidence::Brc(b) => w.scope == Scope::AllAbelian && brc(b, &params),
        Evidence::OrbitCount(o) => {
            let Some(e) = o.p.checked_mul(o.exponent_h) else {
                return false;
            };
            w.scope == Scope::Exponent(e) && orbit(o, &params)
        }
        Evidence::DifferenceCollision(c) => w.scope == Scope::Exponent(c.exponent) && collision(c, &params),
        Evidence::MultiplierBound(b) => {
            w.scope == Scope::Cyclic && b.h == 1 && b.modulus == params.v() && group_bound(b, &params)
        }
        Evidence::ContractedBound(b) => w.scope == Scope::Cyclic && group_bound(b, &params),
        Evidence::ContractedOrder(c) => {
            w.scope == Scope::Cyclic
                && c.h >= 1
                && params.v() % c.h == 0
                && c.u == params.v() / c.h
                && !excepted(&params)
                && contracted_multiplier(&params, c.h, c.t)
                && exact_order(c.t, c.order, c.u)
                && c.order > params.k()
        }
    }
}

/// Counting witness for raw parameters that never became a `ParamSet`.
pub fn verify_counting(v: u128, k: u128, lambda: u128, lhs: u128, rhs: u128) -> bool {
    let l = lambda.checked_mul(v.wrapping_sub(1));
    let r = k.checked_mul(k.wrapping_sub(1));
    v >= 1 && k >= 1 && l == Some(lhs) && r == Some(rhs) && lhs != rhs
}

fn excepted(params: &ParamSet) -> bool {
    (params.v(), params.k(), params.lambda()) == (21, 5, 1)
}

fn theorem_multiplier(params: &ParamSet, p: u128) -> bool {
    is_prime(p) && p > params.lambda() && params.n() % p == 0 && gcd(p, params.v()) == 1
}

fn contracted_multiplier(params: &ParamSet, h: u128, t: u128) -> bool {
    if theorem_multiplier(params, t) {
        return true;
    }
    t == 2 && h == 2 && params.lambda() == 2 && params.v() % 4 == 2 && params.n().is_power_of_two()
}

/// `e` is the exponent of some abelian group of order `w`.
fn feasible_exponent(e: u128, w: u128) -> bool {
    if e == 0 || w % e != 0 {
        return false;
    }
    match arith::factor(w) {
        Ok(f) => f.primes().all(|q| e % q == 0),
        Err(_) => false,
    }
}

fn valid_word(word: &[(u128, u128)], params: &ParamSet) -> bool {
    word.iter().all(|&(p, e)| e > 0 && theorem_multiplier(params, p))
}

fn eval(word: &[(u128, u128)], modulus: u128) -> u128 {
    word.iter()
        .fold(1 % modulus, |acc, &(p, e)| mul_mod(acc, pow_mod(p, e, modulus), modulus))
}

/// `t` is the least positive exponent with `x^t ≡ 1 (mod modulus)`.
fn exact_order(x: u128, t: u128, modulus: u128) -> bool {
    if t == 0 || modulus == 0 || gcd(x, modulus) != 1 {
        return false;
    }
    let one = 1 % modulus;
    if pow_mod(x, t, modulus) != one {
        return false;
    }
    match arith::factor(t) {
        Ok(f) => f.primes().all(|q| pow_mod(x, t / q, modulus) != one),
        Err(_) => false,
    }
}

fn brc(b: &BrcWitness, params: &ParamSet) -> bool {
    let v = params.v();
    match *b {
        BrcWitness::EvenNonSquare { n } => v % 2 == 0 && n == params.n() && !is_square(n),
        BrcWitness::LocalObstruction { q, a, b } => {
            let sign: i128 = if (v - 1) / 2 % 2 == 0 { 1 } else { -1 };
            v % 2 == 1
                && a >= 0
                && a as u128 == params.n()
                && b == sign * params.lambda() as i128
                && is_prime(q)
                && hilbert_symbol(a, b, q) == -1
        }
    }
}

fn orbit(w: &super::OrbitWitness, params: &ParamSet) -> bool {
    let (p, h, eh, m, s, o) = (w.p, w.h_order, w.exponent_h, w.m, w.s, w.o);
    let k = params.k();
    let lambda = params.lambda();
    if !is_prime(p) || p.checked_mul(h) != Some(params.v()) || h % p == 0 || !feasible_exponent(eh, h) {
        return false;
    }
    let e = p * eh;
    if w.word.is_empty() || !valid_word(&w.word, params) || eval(&w.word, e) != m % e {
        return false;
    }
    if !exact_order(m, s, eh) {
        return false;
    }
    if !exact_order(pow_mod(m, s, p), o, p) || o < 2 {
        return false;
    }
    // Scan every orbit count allowed by the size of the p-part.
    let o2 = match o.checked_mul(o - 1) {
        Some(x) => x,
        None => return !fixed_ok(k, lambda, h),
    };
    let mut a = 0u128;
    while a <= k / o && mul_le(a, o2, lambda, p - 1) {
        if fixed_ok(k - a * o, lambda, h) {
            return false;
        }
        a += 1;
    }
    true
}

fn fixed_ok(b: u128, lambda: u128, h: u128) -> bool {
    b == 0 || mul_le(b, b - 1, lambda, h - 1)
}

fn collision(c: &super::CollisionWitness, params: &ParamSet) -> bool {
    let e = c.exponent;
    if params.lambda() != 1 || !feasible_exponent(e, params.v()) || e < 2 {
        return false;
    }
    for t in &c.t {
        if !valid_word(&t.word, params) || t.value >= e || eval(&t.word, e) != t.value {
            return false;
        }
    }
    let [t1, t2, t3, t4] = [c.t[0].value, c.t[1].value, c.t[2].value, c.t[3].value];
    if sub_mod(t1, t2, e) != sub_mod(t3, t4, e) {
        return false;
    }
    let l = lcm(gcd(sub_mod(t1, t2, e), e), gcd(sub_mod(t1, t3, e), e));
    l == c.lcm && l != e
}

fn group_bound(b: &GroupBound, params: &ParamSet) -> bool {
    let k = params.k();
    if excepted(params) || b.h == 0 || params.v() % b.h != 0 || b.modulus != params.v() / b.h {
        return false;
    }
    if b.generators.is_empty() || !b.generators.iter().all(|&g| contracted_multiplier(params, b.h, g)) {
        return false;
    }
    if b.lower_bound <= k {
        return false;
    }
    let u = b.modulus;
    match b.method {
        BoundMethod::OrderLcm => {
            let mut l: u128 = 1;
            for &g in &b.generators {
                let Ok(o) = arith::mult_order(g, u) else {
                    return false;
                };
                l = (l / gcd(l, o)).saturating_mul(o);
            }
            l >= b.lower_bound
        }
        BoundMethod::Closure => {
            if b.lower_bound > CLOSURE_LIMIT {
                return false;
            }
            let mut seen = HashSet::new();
            let mut queue = vec![1 % u];
            seen.insert(1 % u);
            while let Some(x) = queue.pop() {
                if seen.len() as u128 >= b.lower_bound {
                    return true;
                }
                for &g in &b.generators {
                    let y = mul_mod(x, g, u);
                    if seen.insert(y) {
                        queue.push(y);
                    }
                }
            }
            seen.len() as u128 >= b.lower_bound
        }
    }
}
