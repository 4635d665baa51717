//! Numerical multipliers guaranteed by the First Multiplier Theorem and the
//! groups they generate modulo an exponent.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{self, mul_mod, Factorization};
use crate::structure::ParamSet;

/// Primes `p | n` with `p > λ` and `gcd(p, v) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierBasis {
    pub params: ParamSet,
    pub primes: Vec<u128>,
}

impl MultiplierBasis {
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// True when `p` is a multiplier by the First Multiplier Theorem.
pub fn is_theorem_multiplier(params: &ParamSet, p: u128) -> bool {
    p > params.lambda()
        && params.n() % p == 0
        && arith::gcd(p, params.v()) == 1
        && arith::is_prime(p)
}

pub fn multiplier_basis(params: &ParamSet) -> arith::Result<MultiplierBasis> {
    Ok(multiplier_basis_of(params, &arith::factor(params.n())?))
}

/// Basis from an existing factorization of `n`.
pub fn multiplier_basis_of(params: &ParamSet, n_factors: &Factorization) -> MultiplierBasis {
    debug_assert_eq!(n_factors.value(), params.n());
    let primes = n_factors
        .primes()
        .filter(|&p| p > params.lambda() && arith::gcd(p, params.v()) == 1)
        .collect();
    MultiplierBasis {
        params: *params,
        primes,
    }
}

/// A power product `∏ pᵢ^eᵢ` of basis primes.
pub type Word = Vec<(u128, u128)>;

pub fn evaluate_word(word: &[(u128, u128)], modulus: u128) -> u128 {
    word.iter().fold(1 % modulus, |acc, &(p, e)| {
        mul_mod(acc, arith::pow_mod(p, e, modulus), modulus)
    })
}

/// Breadth-first enumeration of the subgroup of units generated by a list
/// of integers. Yields `1` first, then the generators, then longer products.
#[derive(Debug, Clone)]
pub struct MultiplierWalk {
    modulus: u128,
    generators: Vec<u128>,
    reduced: Vec<u128>,
    elements: Vec<u128>,
    // (parent index, generator index); the root points at itself.
    parent: Vec<(u32, u32)>,
    index: HashMap<u128, u32>,
    expanded: usize,
    yielded: usize,
}

impl MultiplierWalk {
    pub fn new(generators: &[u128], modulus: u128) -> Self {
        assert!(modulus >= 1);
        let one = 1 % modulus;
        let mut index = HashMap::new();
        index.insert(one, 0);
        MultiplierWalk {
            modulus,
            generators: generators.to_vec(),
            reduced: generators.iter().map(|&g| g % modulus).collect(),
            elements: vec![one],
            parent: vec![(0, u32::MAX)],
            index,
            expanded: 0,
            yielded: 0,
        }
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Number of elements discovered so far.
    pub fn discovered(&self) -> usize {
        self.elements.len()
    }

    /// True once every element of the generated group has been discovered.
    pub fn is_closed(&self) -> bool {
        self.expanded == self.elements.len()
    }

    /// Next element in breadth-first order with its position.
    pub fn next_element(&mut self) -> Option<(usize, u128)> {
        while self.yielded >= self.elements.len() {
            if self.expanded >= self.elements.len() {
                return None;
            }
            self.expand_one();
        }
        let i = self.yielded;
        self.yielded += 1;
        Some((i, self.elements[i]))
    }

    /// Discover elements until `limit` are known or the group closes.
    pub fn discover_up_to(&mut self, limit: usize) -> usize {
        while self.elements.len() < limit && self.expanded < self.elements.len() {
            self.expand_one();
        }
        self.elements.len()
    }

    fn expand_one(&mut self) {
        let at = self.expanded;
        let x = self.elements[at];
        for gi in 0..self.reduced.len() {
            let y = mul_mod(x, self.reduced[gi], self.modulus);
            if !self.index.contains_key(&y) {
                self.index.insert(y, self.elements.len() as u32);
                self.elements.push(y);
                self.parent.push((at as u32, gi as u32));
            }
        }
        self.expanded += 1;
    }

    pub fn elements(&self) -> &[u128] {
        &self.elements
    }

    pub fn position(&self, x: u128) -> Option<usize> {
        self.index.get(&(x % self.modulus)).map(|&i| i as usize)
    }

    /// Parent position and generator index of a discovered element; `None` for `1`.
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        let (p, g) = self.parent[i];
        (i != 0).then_some((p as usize, g as usize))
    }

    /// Exponent vector over the original generators for element `i`.
    pub fn word(&self, mut i: usize) -> Word {
        let mut exps = vec![0u128; self.generators.len()];
        while i != 0 {
            let (p, g) = self.parent[i];
            exps[g as usize] += 1;
            i = p as usize;
        }
        self.generators
            .iter()
            .zip(exps)
            .filter(|&(_, e)| e > 0)
            .map(|(&g, e)| (g, e))
            .collect()
    }
}

/// The subgroup of `(Z/eZ)^*` generated by a basis, possibly truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierGroup {
    pub modulus: u128,
    /// Sorted residues.
    pub elements: Vec<u128>,
    pub generators: Vec<u128>,
    /// The closure stopped at the cap; only `elements.len()` as a lower bound is meaningful.
    pub partial: bool,
}

impl MultiplierGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub const DEFAULT_GROUP_CAP: usize = 1 << 20;

pub fn multiplier_group(basis: &MultiplierBasis, exponent: u128, cap: usize) -> MultiplierGroup {
    generated_group(&basis.primes, exponent, cap)
}

pub fn generated_group(generators: &[u128], modulus: u128, cap: usize) -> MultiplierGroup {
    let mut walk = MultiplierWalk::new(generators, modulus);
    walk.discover_up_to(cap.max(1));
    let partial = !walk.is_closed();
    let mut elements = walk.elements().to_vec();
    elements.truncate(cap.max(1));
    elements.sort_unstable();
    MultiplierGroup {
        modulus,
        elements,
        generators: generators.iter().map(|&g| g % modulus).collect(),
        partial,
    }
}

/// Candidate `G/H`-multipliers for the subgroup `H` of order `h`:
/// every ordinary multiplier, plus 2 for biplanes with `v ≡ 2 (mod 4)` whose
/// order `n` is a power of two and `h = 2`.
pub fn contracted_multiplier_for_quotient(
    params: &ParamSet,
    h: u128,
) -> arith::Result<Vec<u128>> {
    let basis = multiplier_basis(params)?;
    Ok(contracted_candidates(params, &basis, h))
}

pub fn contracted_candidates(params: &ParamSet, basis: &MultiplierBasis, h: u128) -> Vec<u128> {
    let mut out = basis.primes.clone();
    if contracted_two_applies(params, h) && !out.contains(&2) {
        out.push(2);
    }
    out.sort_unstable();
    out
}

/// The single contracted-multiplier rule used beyond ordinary multipliers.
pub fn contracted_two_applies(params: &ParamSet, h: u128) -> bool {
    let n = params.n();
    params.lambda() == 2 && h == 2 && params.v() % 4 == 2 && n.is_power_of_two()
}
