//! Parameter sets, parameter families, and the group-shape data the tests
//! depend on.
//!
//! Every elimination test sees an abelian group `G` of order `v` only through
//! its exponent, so work is organised per feasible exponent rather than per
//! isomorphism class.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Factorization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("lambda*(v-1) = {lhs} but k*(k-1) = {rhs}")]
    Counting { lhs: u128, rhs: u128 },
    #[error("need 2 <= k < v and 1 <= lambda < k (got v={v}, k={k}, lambda={lambda})")]
    OutOfRange { v: u128, k: u128, lambda: u128 },
    #[error("parameters are trivial: {0}")]
    Degenerate(&'static str),
    #[error("values too large for exact arithmetic")]
    TooLarge,
}

/// A `(v, k, λ)` triple satisfying the basic counting identity, with order `n = k − λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ParamSet {
    v: u128,
    k: u128,
    lambda: u128,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    v: u128,
    k: u128,
    lambda: u128,
}

impl TryFrom<RawParams> for ParamSet {
    type Error = ParamError;

    fn try_from(raw: RawParams) -> Result<Self, ParamError> {
        ParamSet::admissible(raw.v, raw.k, raw.lambda)
    }
}

impl From<ParamSet> for RawParams {
    fn from(p: ParamSet) -> Self {
        RawParams {
            v: p.v,
            k: p.k,
            lambda: p.lambda,
        }
    }
}

impl ParamSet {
    /// Checks the counting identity and ranges but accepts the trivial
    /// `k = v − 1` family, which parameter sweeps legitimately produce.
    pub fn admissible(v: u128, k: u128, lambda: u128) -> Result<Self, ParamError> {
        if v >= arith::VALUE_LIMIT {
            return Err(ParamError::TooLarge);
        }
        if !(2 <= k && k < v && 1 <= lambda && lambda < k) {
            return Err(ParamError::OutOfRange { v, k, lambda });
        }
        let (Some(lhs), Some(rhs)) = (lambda.checked_mul(v - 1), k.checked_mul(k - 1)) else {
            return Err(ParamError::TooLarge);
        };
        if lhs != rhs {
            return Err(ParamError::Counting { lhs, rhs });
        }
        Ok(ParamSet { v, k, lambda })
    }

    pub fn v(&self) -> u128 {
        self.v
    }

    pub fn k(&self) -> u128 {
        self.k
    }

    pub fn lambda(&self) -> u128 {
        self.lambda
    }

    pub fn n(&self) -> u128 {
        self.k - self.lambda
    }

    /// `k = v − 1`: the whole group minus a point.
    pub fn is_trivial(&self) -> bool {
        self.k + 1 == self.v
    }

    /// `(v, v − k, v − 2k + λ)`. Not defined for trivial parameters.
    pub fn complement(&self) -> Option<ParamSet> {
        if self.is_trivial() {
            return None;
        }
        let k = self.v - self.k;
        let lambda = self.v + self.lambda - 2 * self.k;
        ParamSet::admissible(self.v, k, lambda).ok()
    }

    /// The representative with `k <= v/2` that every test runs against.
    pub fn normalized(&self) -> ParamSet {
        if 2 * self.k > self.v {
            self.complement().unwrap_or(*self)
        } else {
            *self
        }
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

/// Validated constructor for user input: rejects `k <= 2` and `k >= v − 1`.
pub fn make_params(v: u128, k: u128, lambda: u128) -> Result<ParamSet, ParamError> {
    if v == 0 || k == 0 || lambda == 0 {
        return Err(ParamError::OutOfRange { v, k, lambda });
    }
    let p = ParamSet::admissible(v, k, lambda)?;
    if k <= 2 {
        return Err(ParamError::Degenerate("k <= 2"));
    }
    if k + 1 >= v {
        return Err(ParamError::Degenerate("k >= v - 1"));
    }
    Ok(p)
}

/// `(n² + n + 1, n + 1, 1)`.
pub fn planar_params(n: u128) -> ParamSet {
    assert!(n >= 2, "planar order must be at least 2");
    ParamSet::admissible(n * n + n + 1, n + 1, 1).expect("planar parameters are admissible")
}

/// `(k(k−1)/λ + 1, k, λ)` when λ divides `k(k−1)`.
pub fn lambda_family_params(k: u128, lambda: u128) -> Option<ParamSet> {
    if k < 3 || lambda == 0 {
        return None;
    }
    let prod = k.checked_mul(k - 1)?;
    if prod % lambda != 0 {
        return None;
    }
    ParamSet::admissible((prod / lambda).checked_add(1)?, k, lambda).ok()
}

/// Exponents realised by abelian groups of order `v`.
pub fn feasible_exponents(v: u128) -> arith::Result<Vec<u128>> {
    arith::divisors_with_full_radical(v)
}

/// Same as [`feasible_exponents`] from an existing factorization.
pub fn feasible_exponents_of(f: &Factorization) -> Vec<u128> {
    arith::full_radical_divisors_of(f)
}

/// Primes `p` with `p | v` and `p² ∤ v`, ascending.
pub fn exactly_dividing_primes(v: u128) -> arith::Result<Vec<u128>> {
    Ok(exactly_dividing_primes_of(&arith::factor(v)?))
}

pub fn exactly_dividing_primes_of(f: &Factorization) -> Vec<u128> {
    f.factors()
        .iter()
        .filter(|&&(_, e)| e == 1)
        .map(|&(p, _)| p)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("exponent {exponent} is not feasible for order {order}")]
    Exponent { order: u128, exponent: u128 },
    #[error("invariant factors {0:?} do not form a divisibility chain with the given order and exponent")]
    Factors(Vec<u128>),
}

/// An abelian group of a given order, identified by its exponent and
/// optionally by its full list of invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    order: u128,
    exponent: u128,
    invariant_factors: Option<Vec<u128>>,
}

impl GroupShape {
    pub fn new(order: u128, exponent: u128) -> Result<Self, ShapeError> {
        let ok = exponent >= 1
            && order % exponent == 0
            && arith::gcd(order, exponent) == exponent
            && same_support(order, exponent);
        if !ok {
            return Err(ShapeError::Exponent { order, exponent });
        }
        Ok(GroupShape {
            order,
            exponent,
            invariant_factors: None,
        })
    }

    pub fn from_invariant_factors(factors: Vec<u128>) -> Result<Self, ShapeError> {
        let chain = factors.windows(2).all(|w| w[0] >= 1 && w[1] % w[0] == 0);
        let nontrivial = factors.iter().all(|&d| d >= 2) || factors == [1];
        if factors.is_empty() || !chain || !nontrivial {
            return Err(ShapeError::Factors(factors));
        }
        let order = factors
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| ShapeError::Factors(factors.clone()))?;
        let exponent = *factors.last().unwrap();
        Ok(GroupShape {
            order,
            exponent,
            invariant_factors: Some(factors),
        })
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    pub fn invariant_factors(&self) -> Option<&[u128]> {
        self.invariant_factors.as_deref()
    }

    pub fn is_cyclic(&self) -> bool {
        self.order == self.exponent
    }
}

fn same_support(order: u128, exponent: u128) -> bool {
    // Every prime of `order` must divide `exponent`: strip common factors.
    let mut rest = order;
    loop {
        let g = arith::gcd(rest, exponent);
        if g == 1 {
            return rest == 1;
        }
        while rest % g == 0 {
            rest /= g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_params_examples() {
        let p = make_params(352, 27, 2).unwrap();
        assert_eq!(p.n(), 25);
        assert_eq!(make_params(7, 3, 1).unwrap().n(), 2);
        assert!(matches!(
            make_params(10, 4, 1),
            Err(ParamError::Counting { lhs: 9, rhs: 12 })
        ));
        assert!(matches!(make_params(4, 3, 2), Err(ParamError::Degenerate(_))));
        assert!(make_params(0, 3, 1).is_err());
    }

    #[test]
    fn planar_examples() {
        let p = planar_params(2435);
        assert_eq!((p.v(), p.k(), p.lambda()), (5931661, 2436, 1));
        assert_eq!(planar_params(2), make_params(7, 3, 1).unwrap());
        let p = planar_params(45151);
        assert_eq!(p.v(), 2038657953);
        assert_eq!(p.v(), 22651 * 90003);
    }

    #[test]
    fn lambda_family_examples() {
        assert_eq!(lambda_family_params(27, 2), Some(make_params(352, 27, 2).unwrap()));
        assert_eq!(lambda_family_params(120, 3), Some(make_params(4761, 120, 3).unwrap()));
        assert_eq!(lambda_family_params(5, 3), None);
        // k = 3, lambda = 2 gives the trivial (4,3,2)
        let t = lambda_family_params(3, 2).unwrap();
        assert!(t.is_trivial());
    }

    #[test]
    fn exponents_and_primes() {
        assert_eq!(feasible_exponents(352).unwrap(), vec![22, 44, 88, 176, 352]);
        assert_eq!(feasible_exponents(101).unwrap(), vec![101]);
        assert_eq!(feasible_exponents(4761).unwrap(), vec![69, 207, 1587, 4761]);
        assert_eq!(exactly_dividing_primes(352).unwrap(), vec![11]);
        assert!(exactly_dividing_primes(4761).unwrap().is_empty());
        assert_eq!(exactly_dividing_primes(15).unwrap(), vec![3, 5]);
    }

    #[test]
    fn exactly_dividing_brute_force() {
        for v in 2..=100_000u128 {
            let got = exactly_dividing_primes(v).unwrap();
            for &p in &got {
                assert!(v % p == 0 && v % (p * p) != 0 && arith::is_prime(p));
            }
            let f = arith::factor(v).unwrap();
            let count = f.factors().iter().filter(|&&(_, e)| e == 1).count();
            assert_eq!(got.len(), count, "v={v}");
        }
    }

    #[test]
    fn table_one_rows_factor_as_p_times_h() {
        let rows: [(u128, u128, u128); 9] = [
            (2436, 5931661, 1),
            (24452, 199291951, 3),
            (45152, 22651, 90003),
            (56408, 24781, 128397),
            (58724, 450601, 7653),
            (2444, 109, 54777),
            (3234, 4759, 2197),
            (72012, 35911, 144403),
            (73482, 149113, 36211),
        ];
        for (k, p, h) in rows {
            let params = planar_params(k - 1);
            assert_eq!(p * h, params.v(), "k={k}");
        }
    }

    #[test]
    fn complement_round_trip() {
        let p = make_params(7, 4, 2).unwrap();
        assert_eq!(p.normalized(), make_params(7, 3, 1).unwrap());
        let q = make_params(11, 5, 2).unwrap();
        assert_eq!(q.normalized(), q);
        assert_eq!(q.complement().unwrap().complement().unwrap(), q);
    }

    #[test]
    fn group_shapes() {
        assert!(GroupShape::new(352, 22).is_ok());
        assert!(GroupShape::new(352, 32).is_err());
        assert!(GroupShape::new(352, 11).is_err());
        let g = GroupShape::from_invariant_factors(vec![2, 6]).unwrap();
        assert_eq!((g.order(), g.exponent()), (12, 6));
        assert!(!g.is_cyclic());
        assert!(GroupShape::from_invariant_factors(vec![4, 6]).is_err());
        assert!(GroupShape::from_invariant_factors(vec![]).is_err());
    }

    #[test]
    fn serde_rejects_bad_params() {
        let ok: ParamSet = serde_json::from_str(r#"{"v":7,"k":3,"lambda":1}"#).unwrap();
        assert_eq!(ok.n(), 2);
        assert!(serde_json::from_str::<ParamSet>(r#"{"v":10,"k":4,"lambda":1}"#).is_err());
    }
}
