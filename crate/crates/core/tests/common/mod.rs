//! Property definitions shared by the `properties` and `acceptance` targets.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use diffset::arith::{factor, gcd, is_prime, mult_order, pow_mod};
use diffset::elimination::{check, orbit_count_feasible, verify_witness, Coverage, Status, TestConfig};
use diffset::harness::{family_params, sweep_records, Family, ResultRecord};
use diffset::oracle::{enumerate_abelian_groups, small_parameter_sets};
use diffset::structure::{feasible_exponents, lambda_family_params, planar_params, ParamSet};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

pub type Property = (&'static str, fn() -> Result<(), String>);

pub fn properties() -> Vec<Property> {
    vec![
        ("witness re-verification", witness_closure),
        ("factor and is_prime against a sieve", sieve_agreement),
        ("mult_order minimality", order_minimality),
        ("feasible exponents against group enumeration", exponents_match_groups),
        ("parallel and serial sweeps agree", parallel_matches_serial),
        ("orbit-count feasibility is monotone", orbit_monotone),
    ]
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn small_sets() -> &'static [ParamSet] {
    static SETS: OnceLock<Vec<ParamSet>> = OnceLock::new();
    SETS.get_or_init(|| small_parameter_sets(2000))
}

fn any_params() -> impl Strategy<Value = ParamSet> {
    prop_oneof![
        (2u128..=30_000).prop_map(planar_params),
        (2u128..=4, 4u128..20_000).prop_filter_map("λ ∤ k(k−1)", |(l, k)| lambda_family_params(k, l)),
        prop::sample::select(small_sets()),
    ]
}

pub fn witness_closure() -> Result<(), String> {
    let config = TestConfig::default();
    run(any_params(), |p| {
        let r = check(&p, &config);
        for w in r.witnesses() {
            prop_assert!(verify_witness(w, &p), "{p}: witness {w:?} fails to verify");
        }
        if r.status == Status::Eliminated {
            prop_assert_eq!(r.coverage, Some(Coverage::AllAbelian));
            prop_assert!(r.global.is_some() || r.per_exponent.iter().all(|e| e.witness.is_some()));
        }
        Ok(())
    })
}

const SIEVE: usize = 1_000_000;

fn smallest_factor() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE];
        for i in 2..SIEVE {
            if spf[i] == 0 {
                for j in (i..SIEVE).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        spf
    })
}

pub fn sieve_agreement() -> Result<(), String> {
    let spf = smallest_factor();
    run(1usize..SIEVE, |n| {
        prop_assert_eq!(is_prime(n as u128), n >= 2 && spf[n] as usize == n);
        let mut expected: Vec<(u128, u32)> = Vec::new();
        let mut x = n;
        while x > 1 {
            let p = spf[x] as usize;
            match expected.last_mut() {
                Some((q, e)) if *q == p as u128 => *e += 1,
                _ => expected.push((p as u128, 1)),
            }
            x /= p;
        }
        let f = factor(n as u128).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(f.factors(), &expected[..]);
        prop_assert_eq!(f.value(), n as u128);
        Ok(())
    })
}

pub fn order_minimality() -> Result<(), String> {
    let modulus = prop_oneof![2u128..5_000, 2u128..1_000_000_000_000];
    let pair = modulus
        .prop_flat_map(|m| (Just(m), 1..m))
        .prop_filter("coprime", |&(m, a)| gcd(a, m) == 1);
    run(pair, |(m, a)| {
        let d = mult_order(a, m).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(d >= 1);
        prop_assert_eq!(pow_mod(a, d, m), 1);
        let f = factor(d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for q in f.primes() {
            prop_assert_ne!(pow_mod(a, d / q, m), 1, "order {} of {} mod {} is not minimal", d, a, m);
        }
        if m < 5_000 {
            let first = (1..=m).find(|&e| pow_mod(a, e, m) == 1);
            prop_assert_eq!(first, Some(d));
        }
        Ok(())
    })
}

pub fn exponents_match_groups() -> Result<(), String> {
    run(1u64..10_000, |v| {
        let from_groups: BTreeSet<u128> = enumerate_abelian_groups(v).iter().map(|g| g.exponent() as u128).collect();
        let feasible: BTreeSet<u128> = feasible_exponents(v as u128)
            .map_err(|e| TestCaseError::fail(e.to_string()))?
            .into_iter()
            .collect();
        prop_assert_eq!(from_groups, feasible);
        Ok(())
    })
}

const SWEEP_MAX_N: u128 = 10_000;

fn serial_planar() -> &'static [ResultRecord] {
    static RECORDS: OnceLock<Vec<ResultRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| {
        let params = family_params(&Family::Planar { max_n: SWEEP_MAX_N }).unwrap();
        let mut records = sweep_records(&params, &TestConfig::default(), 1).unwrap();
        records.iter_mut().for_each(|r| r.elapsed_ms = 0);
        records
    })
}

/// Serial and parallel results for the same range, ignoring timings.
pub fn sweep_agrees(start: usize, len: usize, jobs: usize) -> Result<(), TestCaseError> {
    let serial = serial_planar();
    let end = (start + len).min(serial.len());
    let params: Vec<ParamSet> = serial[start..end].iter().map(|r| r.params().unwrap()).collect();
    let mut parallel = sweep_records(&params, &TestConfig::default(), jobs).map_err(|e| TestCaseError::fail(e.to_string()))?;
    parallel.iter_mut().for_each(|r| r.elapsed_ms = 0);
    prop_assert_eq!(&parallel[..], &serial[start..end]);
    Ok(())
}

pub fn parallel_matches_serial() -> Result<(), String> {
    let len = serial_planar().len();
    sweep_agrees(0, len, 4).map_err(|e| format!("full range: {e}"))?;
    run((0..len, 1usize..=256, 1usize..=6), |(start, n, jobs)| sweep_agrees(start, n, jobs))
}

fn brute_feasible(k: u128, o: u128, lambda: u128, p: u128, h: u128) -> bool {
    (0..=k / o).any(|a| {
        let b = k - a * o;
        b * b.saturating_sub(1) <= lambda * (h - 1) && a * o * (o - 1) <= lambda * (p - 1)
    })
}

pub fn orbit_monotone() -> Result<(), String> {
    let args = (1u128..3_000, 1u128..60, 1u128..=5, 2u128..5_000, 1u128..5_000);
    run(args, |(k, o, lambda, p, h)| {
        let got = orbit_count_feasible(k, o, lambda, p, h);
        prop_assert_eq!(got.is_some(), brute_feasible(k, o, lambda, p, h));
        if let Some((a, b)) = got {
            prop_assert_eq!(a * o + b, k);
            prop_assert!(orbit_count_feasible(k, o, lambda + 1, p, h).is_some());
            prop_assert!(orbit_count_feasible(k, o, lambda, p + 1, h).is_some());
            prop_assert!(orbit_count_feasible(k, o, lambda, p, h + 1).is_some());
        }
        Ok(())
    })
}
