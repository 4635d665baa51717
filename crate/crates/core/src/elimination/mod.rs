//! Nonexistence tests for abelian difference sets and the pipeline that
//! combines them into a verdict per parameter set.
//!
//! Every test works on the normalized parameters (`k <= v/2`) and reports
//! either a witness, from which [`verify_witness`] can recheck the claim
//! with nothing but integer arithmetic, or an inconclusive reason.

mod bound;
mod brc;
mod catalog;
mod collision;
mod orbit;
mod verify;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{self, carmichael_with, factor_with, ArithError, FactorBudget, Factorization, OrderContext};
use crate::multiplier::{multiplier_basis_of, MultiplierBasis, Word, DEFAULT_GROUP_CAP};
use crate::structure::{exactly_dividing_primes_of, feasible_exponents_of, ParamSet};

pub use bound::{contracted_bound_test, multiplier_bound_test};
pub use brc::brc_test;
pub use catalog::{known_construction, sample_set, Construction, Family};
pub use collision::{collision_test, CollisionOutcome};
pub use orbit::{orbit_count_feasible, orbit_count_test, orbit_count_test_at};
pub use verify::{verify_counting, verify_witness};

/// Which groups a witness rules out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    AllAbelian,
    /// Every abelian group of this exponent.
    Exponent(u128),
    /// The cyclic group of order `v` only.
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Counting,
    Brc,
    OrbitCount,
    DifferenceCollision,
    MultiplierBound,
    ContractedBound,
    ContractedOrder,
}

impl TestKind {
    pub fn name(self) -> &'static str {
        match self {
            TestKind::Counting => "counting",
            TestKind::Brc => "brc",
            TestKind::OrbitCount => "orbit-count",
            TestKind::DifferenceCollision => "difference-collision",
            TestKind::MultiplierBound => "multiplier-bound",
            TestKind::ContractedBound => "contracted-bound",
            TestKind::ContractedOrder => "contracted-order",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Orbit counting in `G = Z_p × H` under a power of one multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub p: u128,
    pub h_order: u128,
    pub exponent_h: u128,
    /// The multiplier reduced modulo `p · exponent_h`.
    pub m: u128,
    /// `m` as a product of basis primes.
    pub word: Word,
    pub s: u128,
    pub o: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierTerm {
    /// Residue modulo the group exponent.
    pub value: u128,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub exponent: u128,
    /// `t1 − t2 ≡ t3 − t4` modulo the exponent.
    pub t: [MultiplierTerm; 4],
    /// `lcm(gcd(t1 − t2, e), gcd(t1 − t3, e))`, a proper divisor of `e`.
    pub lcm: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// Lower bound is the lcm of the generator orders.
    OrderLcm,
    /// Lower bound is a count of distinct group elements.
    Closure,
}

/// A multiplier group modulo `modulus = v / h` with more than `k` elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupBound {
    pub h: u128,
    pub modulus: u128,
    pub generators: Vec<u128>,
    pub lower_bound: u128,
    pub method: BoundMethod,
}

/// A single contracted multiplier `t` whose order modulo `u = v / h` exceeds `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractedOrderWitness {
    pub h: u128,
    pub u: u128,
    pub t: u128,
    pub order: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrcWitness {
    /// `v` even and `n` not a square.
    EvenNonSquare { n: u128 },
    /// `x² = a y² + b z²` has no nontrivial solution over the `q`-adics.
    LocalObstruction { q: u128, a: i128, b: i128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Counting { lhs: u128, rhs: u128 },
    Brc(BrcWitness),
    OrbitCount(OrbitWitness),
    DifferenceCollision(CollisionWitness),
    MultiplierBound(GroupBound),
    ContractedBound(GroupBound),
    ContractedOrder(ContractedOrderWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub scope: Scope,
    pub evidence: Evidence,
}

impl Witness {
    pub fn test(&self) -> TestKind {
        match self.evidence {
            Evidence::Counting { .. } => TestKind::Counting,
            Evidence::Brc(_) => TestKind::Brc,
            Evidence::OrbitCount(_) => TestKind::OrbitCount,
            Evidence::DifferenceCollision(_) => TestKind::DifferenceCollision,
            Evidence::MultiplierBound(_) => TestKind::MultiplierBound,
            Evidence::ContractedBound(_) => TestKind::ContractedBound,
            Evidence::ContractedOrder(_) => TestKind::ContractedOrder,
        }
    }
}

/// Tests enabled for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TestSet {
    pub brc: bool,
    pub orbit_count: bool,
    pub collision: bool,
    pub multiplier_bound: bool,
    pub contracted: bool,
}

impl Default for TestSet {
    fn default() -> Self {
        TestSet {
            brc: true,
            orbit_count: true,
            collision: true,
            multiplier_bound: true,
            contracted: true,
        }
    }
}

impl TestSet {
    pub fn none() -> Self {
        TestSet {
            brc: false,
            orbit_count: false,
            collision: false,
            multiplier_bound: false,
            contracted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown test `{0}` (expected t3, t4, t5, t6 or brc)")]
pub struct UnknownTest(pub String);

impl FromStr for TestSet {
    type Err = UnknownTest;

    /// Comma-separated list of `t3`, `t4`, `t5`, `t6`, `brc` or the long names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = TestSet::none();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "brc" => set.brc = true,
                "t3" | "orbit-count" => set.orbit_count = true,
                "t6" | "difference-collision" => set.collision = true,
                "t4" | "multiplier-bound" => set.multiplier_bound = true,
                "t5" | "contracted" => set.contracted = true,
                other => return Err(UnknownTest(other.to_string())),
            }
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TestConfig {
    pub tests: TestSet,
    /// Multiplier-group elements tried per `(p, exponent)` by orbit counting.
    pub candidate_cap: usize,
    /// Element cap when closing a multiplier group.
    pub group_cap: usize,
    /// Multiplier-group elements enumerated by the collision search.
    pub collision_budget: usize,
    /// Difference-table entries allowed in the collision search.
    pub collision_memory: usize,
    pub factor_budget: FactorBudget,
    /// Report Open instead of trusting probable primes above the proven bound.
    pub require_proven_primes: bool,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            tests: TestSet::default(),
            candidate_cap: 4096,
            group_cap: DEFAULT_GROUP_CAP,
            collision_budget: 4096,
            collision_memory: 1 << 24,
            factor_budget: FactorBudget::default(),
            require_proven_primes: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exists,
    Eliminated,
    Open,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exists => "exists",
            Status::Eliminated => "eliminated",
            Status::Open => "open",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    AllAbelian,
    CyclicOnly,
}

/// Why a test did not eliminate an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NoMultipliers,
    NoExactPrime,
    /// Every candidate up to the configured cap was feasible.
    CandidateCap,
    /// Every candidate was tried and none gave a contradiction.
    Exhausted,
    /// The search stopped at its element or memory budget.
    Budget,
    /// The test holds for the cyclic group only, and this exponent is not `v`.
    NotCyclic,
    /// Parameters excluded by the theorem's own exception.
    Excepted,
    /// The test's hypotheses do not hold for these parameters.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inconclusive {
    pub test: TestKind,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVerdict {
    pub exponent: u128,
    pub witness: Option<Witness>,
    pub inconclusive: Vec<Inconclusive>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub params: ParamSet,
    /// The parameters the tests actually ran on (`k <= v/2`).
    pub tested: ParamSet,
    pub status: Status,
    pub coverage: Option<Coverage>,
    pub construction: Option<Construction>,
    /// A witness that covers every abelian group at once.
    pub global: Option<Witness>,
    pub per_exponent: Vec<ExponentVerdict>,
    pub reason: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckResult {
    /// Every witness in the result, global first, then by ascending exponent.
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.global
            .iter()
            .chain(self.per_exponent.iter().filter_map(|e| e.witness.as_ref()))
    }

    /// Tests that contributed a witness, sorted and deduplicated.
    pub fn tests_used(&self) -> Vec<TestKind> {
        let mut t: Vec<TestKind> = self.witnesses().map(Witness::test).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn exponent(&self, e: u128) -> Option<&ExponentVerdict> {
        self.per_exponent.iter().find(|x| x.exponent == e)
    }

    fn empty(params: &ParamSet) -> Self {
        CheckResult {
            params: *params,
            tested: params.normalized(),
            status: Status::Open,
            coverage: None,
            construction: None,
            global: None,
            per_exponent: Vec::new(),
            reason: None,
            elapsed_ms: 0,
        }
    }
}

/// Factorizations and order contexts shared by the tests for one parameter set.
pub(crate) struct Analysis<'c> {
    pub params: ParamSet,
    pub config: &'c TestConfig,
    pub v_factors: Factorization,
    pub basis: MultiplierBasis,
    pm1: RefCell<HashMap<u128, Factorization>>,
    lambdas: RefCell<HashMap<u128, Factorization>>,
}

impl<'c> Analysis<'c> {
    pub fn new(params: &ParamSet, config: &'c TestConfig) -> arith::Result<Self> {
        let params = params.normalized();
        let n_factors = factor_with(params.n(), config.factor_budget)?;
        let v_factors = factor_with(params.v(), config.factor_budget)?;
        let basis = multiplier_basis_of(&params, &n_factors);
        Ok(Analysis {
            params,
            config,
            v_factors,
            basis,
            pm1: RefCell::new(HashMap::new()),
            lambdas: RefCell::new(HashMap::new()),
        })
    }

    pub fn k(&self) -> u128 {
        self.params.k()
    }

    pub fn uses_probable_primes(&self) -> bool {
        self.v_factors.is_probable() || self.pm1.borrow().values().any(|f| f.is_probable())
    }

    /// Order context for a divisor of `v`.
    pub fn order_context(&self, modulus: u128) -> arith::Result<OrderContext> {
        let f = self
            .v_factors
            .of_divisor(modulus)
            .ok_or(ArithError::Domain(modulus))?;
        if let Some(lam) = self.lambdas.borrow().get(&modulus) {
            return Ok(OrderContext::from_parts(&f, lam.clone()));
        }
        let budget = self.config.factor_budget;
        let lam = carmichael_with(&f, |q| {
            if let Some(x) = self.pm1.borrow().get(&q) {
                return Ok(x.clone());
            }
            let x = factor_with(q - 1, budget)?;
            self.pm1.borrow_mut().insert(q, x.clone());
            Ok(x)
        })?;
        self.lambdas.borrow_mut().insert(modulus, lam.clone());
        Ok(OrderContext::from_parts(&f, lam))
    }

    pub fn feasible_exponents(&self) -> Vec<u128> {
        feasible_exponents_of(&self.v_factors)
    }

    pub fn exactly_dividing_primes(&self) -> Vec<u128> {
        exactly_dividing_primes_of(&self.v_factors)
    }
}

/// Run the test pipeline on one parameter set.
///
/// Order: catalog lookup, BRC, then for each feasible exponent orbit
/// counting and (for `λ = 1`) the difference-collision search, then the
/// cyclic-only bounds against exponent `v`.
pub fn check(params: &ParamSet, config: &TestConfig) -> CheckResult {
    let start = Instant::now();
    let mut result = run_checks(params, config);
    result.elapsed_ms = start.elapsed().as_millis() as u64;
    result
}

fn run_checks(params: &ParamSet, config: &TestConfig) -> CheckResult {
    let mut result = CheckResult::empty(params);
    if params.is_trivial() {
        result.status = Status::Exists;
        result.construction = Some(Construction::trivial());
        return result;
    }
    result.construction = known_construction(&result.tested);
    let an = match Analysis::new(params, config) {
        Ok(an) => an,
        Err(e) => {
            result.reason = Some(e.to_string());
            return result;
        }
    };
    if let Err(e) = run_tests(&an, &mut result) {
        result.global = None;
        result.per_exponent.clear();
        result.coverage = None;
        result.status = if result.construction.is_some() {
            Status::Exists
        } else {
            Status::Open
        };
        result.reason = Some(e.to_string());
        return result;
    }
    if config.require_proven_primes && an.uses_probable_primes() && result.witnesses().next().is_some() {
        result.reason = Some("elimination relies on a probable prime above the proven bound".into());
        result.coverage = None;
    }
    result.status = if result.construction.is_some() {
        Status::Exists
    } else if result.coverage == Some(Coverage::AllAbelian) && result.reason.is_none() {
        Status::Eliminated
    } else {
        Status::Open
    };
    result
}

fn run_tests(an: &Analysis<'_>, result: &mut CheckResult) -> arith::Result<()> {
    let config = an.config;
    let params = an.params;
    if config.tests.brc {
        if let Some(w) = brc_test(&params)? {
            result.global = Some(w);
            result.coverage = Some(Coverage::AllAbelian);
            return Ok(());
        }
    }
    let v = params.v();
    for e in an.feasible_exponents() {
        let mut verdict = ExponentVerdict {
            exponent: e,
            witness: None,
            inconclusive: Vec::new(),
        };
        if config.tests.orbit_count {
            match orbit::run(an, e)? {
                Ok(w) => verdict.witness = Some(w),
                Err(reason) => verdict.inconclusive.push(Inconclusive {
                    test: TestKind::OrbitCount,
                    reason,
                }),
            }
        }
        if verdict.witness.is_none() && config.tests.collision && params.lambda() == 1 {
            match collision::run(an, e)? {
                CollisionOutcome::Witness(w) => verdict.witness = Some(w),
                CollisionOutcome::SearchedFully => verdict.inconclusive.push(Inconclusive {
                    test: TestKind::DifferenceCollision,
                    reason: Reason::Exhausted,
                }),
                CollisionOutcome::Budget => verdict.inconclusive.push(Inconclusive {
                    test: TestKind::DifferenceCollision,
                    reason: Reason::Budget,
                }),
                CollisionOutcome::NoMultipliers => verdict.inconclusive.push(Inconclusive {
                    test: TestKind::DifferenceCollision,
                    reason: Reason::NoMultipliers,
                }),
            }
        }
        if verdict.witness.is_none() && e == v {
            cyclic_tests(an, &mut verdict)?;
        }
        result.per_exponent.push(verdict);
    }
    let all = result.per_exponent.iter().all(|x| x.witness.is_some());
    let cyclic = result
        .per_exponent
        .last()
        .is_some_and(|x| x.exponent == v && x.witness.is_some());
    result.coverage = if all {
        Some(Coverage::AllAbelian)
    } else if cyclic {
        Some(Coverage::CyclicOnly)
    } else {
        None
    };
    Ok(())
}

fn cyclic_tests(an: &Analysis<'_>, verdict: &mut ExponentVerdict) -> arith::Result<()> {
    let tests = an.config.tests;
    if tests.multiplier_bound {
        match bound::run_multiplier_bound(an)? {
            Ok(w) => {
                verdict.witness = Some(w);
                return Ok(());
            }
            Err(reason) => verdict.inconclusive.push(Inconclusive {
                test: TestKind::MultiplierBound,
                reason,
            }),
        }
    }
    if tests.contracted {
        match bound::run_contracted(an, 2)? {
            Ok(w) => verdict.witness = Some(w),
            Err(reason) => verdict.inconclusive.push(Inconclusive {
                test: TestKind::ContractedBound,
                reason,
            }),
        }
    }
    Ok(())
}

/// `(21, 5, 1)`: the single exception to the cyclic multiplier bounds.
pub(crate) fn is_bound_exception(params: &ParamSet) -> bool {
    (params.v(), params.k(), params.lambda()) == (21, 5, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{make_params, planar_params};

    fn p(v: u128, k: u128, l: u128) -> ParamSet {
        make_params(v, k, l).unwrap()
    }

    #[test]
    fn test_set_parsing() {
        let t: TestSet = "t3,t6".parse().unwrap();
        assert!(t.orbit_count && t.collision && !t.brc && !t.multiplier_bound);
        let t: TestSet = "brc, t4 ,t5".parse().unwrap();
        assert!(t.brc && t.multiplier_bound && t.contracted && !t.orbit_count);
        assert!("t7".parse::<TestSet>().is_err());
        assert_eq!("".parse::<TestSet>().unwrap(), TestSet::none());
    }

    #[test]
    fn fano_plane_exists() {
        let r = check(&p(7, 3, 1), &TestConfig::default());
        assert_eq!(r.status, Status::Exists);
        assert!(r.witnesses().next().is_none());
    }

    #[test]
    fn small_biplanes_exist() {
        for k in [3, 4, 5, 6, 9] {
            let params = crate::structure::lambda_family_params(k, 2).unwrap();
            let r = check(&params, &TestConfig::default());
            assert_eq!(r.status, Status::Exists, "{params}: {:?}", r.reason);
            assert_eq!(r.reason, None);
        }
    }

    #[test]
    fn three_five_two_is_eliminated_everywhere() {
        let r = check(&p(352, 27, 2), &TestConfig::default());
        assert_eq!(r.status, Status::Eliminated);
        assert_eq!(r.coverage, Some(Coverage::AllAbelian));
        let exps: Vec<u128> = r.per_exponent.iter().map(|x| x.exponent).collect();
        assert_eq!(exps, vec![22, 44, 88, 176, 352]);
        for x in &r.per_exponent {
            let w = x.witness.as_ref().unwrap();
            assert_eq!(w.test(), TestKind::OrbitCount);
            assert!(verify_witness(w, &r.params));
        }
        let Evidence::OrbitCount(w) = &r.exponent(352).unwrap().witness.as_ref().unwrap().evidence
        else {
            panic!()
        };
        assert_eq!((w.p, w.h_order, w.exponent_h, w.m, w.s, w.o), (11, 32, 32, 5, 8, 5));
    }

    #[test]
    fn complement_is_tested() {
        let r = check(&p(352, 325, 300), &TestConfig::default());
        assert_eq!(r.tested, p(352, 27, 2));
        assert_eq!(r.status, Status::Eliminated);
    }

    #[test]
    fn triplane_with_no_exact_prime_is_open() {
        let r = check(&p(4761, 120, 3), &TestConfig::default());
        assert_eq!(r.status, Status::Open, "{r:?}");
        // The cyclic group alone falls to the multiplier bound.
        assert_eq!(r.coverage, Some(Coverage::CyclicOnly));
    }

    #[test]
    fn planar_prime_power_exists() {
        let r = check(&planar_params(8), &TestConfig::default());
        assert_eq!(r.status, Status::Exists);
    }

    #[test]
    fn brc_short_circuits() {
        let r = check(&p(22, 7, 2), &TestConfig::default());
        assert_eq!(r.status, Status::Eliminated);
        assert_eq!(r.global.as_ref().unwrap().test(), TestKind::Brc);
        assert!(r.per_exponent.is_empty());
    }

    #[test]
    fn disabled_tests_leave_everything_open() {
        let cfg = TestConfig {
            tests: TestSet::none(),
            ..TestConfig::default()
        };
        let r = check(&p(352, 27, 2), &cfg);
        assert_eq!(r.status, Status::Open);
    }

    #[test]
    fn biplane_power_of_four_is_cyclic_only() {
        let r = check(&p(525826, 1026, 2), &TestConfig::default());
        assert_eq!(r.status, Status::Open);
        assert_eq!(r.coverage, Some(Coverage::CyclicOnly));
        let w = r.exponent(525826).unwrap().witness.as_ref().unwrap();
        let Evidence::ContractedOrder(c) = &w.evidence else {
            panic!("{w:?}")
        };
        assert_eq!((c.h, c.u, c.t), (2, 262913, 2));
        assert!(c.order > 1026);
        assert!(verify_witness(w, &r.params));
    }

    #[test]
    fn check_is_deterministic() {
        let a = check(&planar_params(1096385), &TestConfig::default());
        let b = check(&planar_params(1096385), &TestConfig::default());
        let strip = |mut r: CheckResult| {
            r.elapsed_ms = 0;
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn check_result_round_trips() {
        let r = check(&p(352, 27, 2), &TestConfig::default());
        let s = serde_json::to_string(&r).unwrap();
        let back: CheckResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
