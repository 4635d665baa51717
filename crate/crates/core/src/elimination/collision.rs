use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Analysis, CollisionWitness, Evidence, MultiplierTerm, Scope, TestConfig, Witness};
use crate::arith::{self, gcd, lcm, sub_mod};
use crate::multiplier::{evaluate_word, MultiplierWalk, Word};
use crate::structure::ParamSet;

/// Seed for sampling multiplier-group elements; fixed so runs are reproducible.
const SAMPLE_SEED: u64 = 0xd1ff_c011_1de5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollisionOutcome {
    Witness(Witness),
    /// The whole multiplier group was enumerated without a contradiction.
    SearchedFully,
    /// Element or memory budget ran out first.
    Budget,
    NoMultipliers,
}

/// Search multiplier quadruples `t1 − t2 ≡ t3 − t4 (mod e)` for planar
/// parameters where `e` fails to divide `lcm(t1 − t2, t1 − t3)`.
///
/// `budget` caps the multiplier-group elements examined.
pub fn collision_test(
    params: &ParamSet,
    exponent_g: u128,
    budget: usize,
    config: &TestConfig,
) -> arith::Result<CollisionOutcome> {
    assert_eq!(params.lambda(), 1, "the collision test needs λ = 1");
    let config = TestConfig {
        collision_budget: budget,
        ..*config
    };
    let an = Analysis::new(params, &config)?;
    run(&an, exponent_g)
}

pub(super) fn run(an: &Analysis<'_>, e: u128) -> arith::Result<CollisionOutcome> {
    if an.basis.is_empty() || e < 3 {
        return Ok(CollisionOutcome::NoMultipliers);
    }
    let budget = an.config.collision_budget.max(1);
    let memory = an.config.collision_memory;
    let gens = &an.basis.primes;

    // Small groups are enumerated completely, so a miss is conclusive.
    let mut walk = MultiplierWalk::new(gens, e);
    walk.discover_up_to(budget + 1);
    if walk.is_closed() && walk.discovered() <= budget {
        let values = walk.elements().to_vec();
        return Ok(match search(&values, e, memory) {
            Search::Found(idx) => CollisionOutcome::Witness(witness(e, idx, &values, |i| walk.word(i))),
            Search::Exhausted => CollisionOutcome::SearchedFully,
            Search::Overflow => CollisionOutcome::Budget,
        });
    }

    // Otherwise sample uniformly random words. Short products of the
    // generators are too structured: their repeated differences almost
    // always satisfy the divisibility and prove nothing.
    let ctx = an.order_context(e)?;
    let orders: Vec<u128> = gens.iter().map(|&g| ctx.order(g)).collect::<arith::Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ e as u64);
    if let Some(w) = restricted(an, e, &orders, &mut rng)? {
        return Ok(CollisionOutcome::Witness(w));
    }
    let mut seen = HashSet::new();
    let mut values = Vec::with_capacity(budget);
    let mut words: Vec<Word> = Vec::with_capacity(budget);
    let mut attempts = 0usize;
    while values.len() < budget && attempts < 4 * budget {
        attempts += 1;
        let word: Word = gens
            .iter()
            .zip(&orders)
            .map(|(&g, &o)| (g, rng.gen_range(0..o)))
            .filter(|&(_, a)| a > 0)
            .collect();
        let x = evaluate_word(&word, e);
        if seen.insert(x) {
            values.push(x);
            words.push(word);
        }
    }
    Ok(match search(&values, e, memory) {
        Search::Found(idx) => CollisionOutcome::Witness(witness(e, idx, &values, |i| words[i].clone())),
        _ => CollisionOutcome::Budget,
    })
}

/// Splits of `e` tried by the restricted search, smallest cofactor first.
const MAX_SPLITS: usize = 64;
/// Largest number of prime-power components for which splits are tried.
const MAX_COMPONENTS: usize = 16;
/// Kernel elements kept per split.
const KERNEL_CAP: usize = 1 << 12;
/// Distinct Schreier generators collected before closing the kernel.
const KERNEL_GENERATORS: usize = 32;

/// Collisions among pairs `(ta, t)` where `a` runs over the multipliers
/// that are `1` modulo a divisor `m` of `e` coprime to `r = e / m`.
/// Such pairs agree modulo `m` for free, so only about `√r` of them are
/// needed before a difference repeats.
fn restricted(an: &Analysis<'_>, e: u128, orders: &[u128], rng: &mut ChaCha8Rng) -> arith::Result<Option<Witness>> {
    let Some(f) = an.v_factors.of_divisor(e) else {
        return Ok(None);
    };
    let comps: Vec<u128> = f.factors().iter().map(|&(q, a)| q.pow(a)).collect();
    if comps.len() < 2 || comps.len() > MAX_COMPONENTS {
        return Ok(None);
    }
    let mut splits: Vec<(u128, u128)> = (1..(1u32 << comps.len()) - 1)
        .map(|mask| {
            let m: u128 = (0..comps.len()).filter(|i| mask >> i & 1 == 1).map(|i| comps[i]).product();
            (e / m, m)
        })
        .collect();
    splits.sort_unstable();
    let gens = &an.basis.primes;
    let memory = an.config.collision_memory;
    for &(r, m) in splits.iter().take(MAX_SPLITS) {
        let kernel = kernel_modulo(gens, orders, m, e, an.config.group_cap);
        if kernel.is_empty() {
            continue;
        }
        let per_t = 2 * kernel.len();
        let wanted = (8 * arith::isqrt(r) + 8).div_ceil(per_t as u128);
        let n = (wanted.min(usize::MAX as u128) as usize)
            .min(an.config.collision_budget.max(1))
            .min(memory / per_t);
        if n == 0 {
            continue;
        }
        let ts: Vec<Vec<u128>> = (0..n)
            .map(|_| orders.iter().map(|&o| rng.gen_range(0..o)).collect())
            .collect();
        let tv: Vec<u128> = ts.iter().map(|x| evaluate_word(&to_word(gens, x), e)).collect();
        // A pair is (t index, kernel index, a on the left).
        let value = |ti: usize, ai: usize, left: bool| {
            let ta = arith::mul_mod(tv[ti], kernel[ai].0, e);
            if left {
                (ta, tv[ti])
            } else {
                (tv[ti], ta)
            }
        };
        let term = |ti: usize, ai: usize, top: bool| {
            let mut x = ts[ti].clone();
            if top {
                for ((xi, ki), o) in x.iter_mut().zip(&kernel[ai].1).zip(orders) {
                    *xi = (*xi + ki) % o;
                }
            }
            let word = to_word(gens, &x);
            MultiplierTerm {
                value: evaluate_word(&word, e),
                word,
            }
        };
        let mut table: HashMap<u128, (u32, u32, bool)> = HashMap::new();
        for ti in 0..n {
            for ai in 0..kernel.len() {
                for left in [true, false] {
                    let (x, y) = value(ti, ai, left);
                    let d = sub_mod(x, y, e);
                    match table.get(&d) {
                        Some(&(tj, aj, lj)) => {
                            let (c, _) = value(tj as usize, aj as usize, lj);
                            if lcm(gcd(d, e), gcd(sub_mod(x, c, e), e)) != e {
                                let (tj, aj) = (tj as usize, aj as usize);
                                let t = [
                                    term(ti, ai, left),
                                    term(ti, ai, !left),
                                    term(tj, aj, lj),
                                    term(tj, aj, !lj),
                                ];
                                return Ok(Some(collision_witness(e, t)));
                            }
                        }
                        None if table.len() < memory => {
                            table.insert(d, (ti as u32, ai as u32, left));
                        }
                        None => {}
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Up to `KERNEL_CAP` non-identity elements of `⟨gens⟩ mod e` that are
/// `1` modulo `m`, as values with exponent vectors. Empty when the group
/// modulo `m` does not close within `cap`.
fn kernel_modulo(gens: &[u128], orders: &[u128], m: u128, e: u128, cap: usize) -> Vec<(u128, Vec<u128>)> {
    let mut walk = MultiplierWalk::new(gens, m);
    walk.discover_up_to(cap);
    if !walk.is_closed() {
        return Vec::new();
    }
    let size = walk.discovered();
    let reduced: Vec<u128> = gens.iter().map(|&g| g % e).collect();
    // Lift of each element to the same word evaluated modulo e.
    let mut lift = vec![1 % e; size];
    for i in 1..size {
        let (p, g) = walk.parent(i).expect("non-root");
        lift[i] = arith::mul_mod(lift[p], reduced[g], e);
    }
    let exps = |i: usize| -> Vec<u128> {
        let mut x = vec![0u128; gens.len()];
        for (g, a) in walk.word(i) {
            let gi = gens.iter().position(|&h| h == g).expect("generator");
            x[gi] = a;
        }
        x
    };
    // Schreier generators: lift(i)·g·lift(j)⁻¹ with j the position of i·g.
    let mut found: Vec<(u128, Vec<u128>)> = Vec::new();
    let mut seen = HashSet::new();
    'edges: for i in 0..size {
        for g in 0..gens.len() {
            let y = arith::mul_mod(walk.elements()[i], gens[g] % m, m);
            let j = walk.position(y).expect("closed walk");
            let up = arith::mul_mod(lift[i], reduced[g], e);
            if up == lift[j] {
                continue;
            }
            let (xi, xj) = (exps(i), exps(j));
            let x: Vec<u128> = (0..gens.len())
                .map(|h| {
                    let o = orders[h];
                    let mut a = (xi[h] % o + o - xj[h] % o) % o;
                    if h == g {
                        a = (a + 1) % o;
                    }
                    a
                })
                .collect();
            let value = evaluate_word(&to_word(gens, &x), e);
            if value != 1 % e && seen.insert(value) {
                found.push((value, x));
                if found.len() >= KERNEL_GENERATORS {
                    break 'edges;
                }
            }
        }
    }
    if found.is_empty() {
        return found;
    }
    let kgens: Vec<u128> = found.iter().map(|k| k.0).collect();
    let mut kwalk = MultiplierWalk::new(&kgens, e);
    kwalk.discover_up_to(KERNEL_CAP + 1);
    (1..kwalk.discovered().min(KERNEL_CAP + 1))
        .map(|i| {
            let mut x = vec![0u128; gens.len()];
            for (kg, c) in kwalk.word(i) {
                let src = &found[kgens.iter().position(|&h| h == kg).expect("kernel generator")].1;
                for ((xh, s), o) in x.iter_mut().zip(src).zip(orders) {
                    *xh = (*xh + arith::mul_mod(*s, c % o, *o)) % o;
                }
            }
            (kwalk.elements()[i], x)
        })
        .collect()
}

fn to_word(gens: &[u128], exps: &[u128]) -> Word {
    gens.iter().zip(exps).filter(|&(_, &a)| a > 0).map(|(&g, &a)| (g, a)).collect()
}

fn witness(e: u128, idx: [usize; 4], values: &[u128], word: impl Fn(usize) -> Word) -> Witness {
    collision_witness(
        e,
        idx.map(|i| MultiplierTerm {
            value: values[i],
            word: word(i),
        }),
    )
}

fn collision_witness(e: u128, t: [MultiplierTerm; 4]) -> Witness {
    let lcm = lcm(
        gcd(sub_mod(t[0].value, t[1].value, e), e),
        gcd(sub_mod(t[0].value, t[2].value, e), e),
    );
    Witness {
        scope: Scope::Exponent(e),
        evidence: Evidence::DifferenceCollision(CollisionWitness { exponent: e, t, lcm }),
    }
}

enum Search {
    Found([usize; 4]),
    Exhausted,
    Overflow,
}

/// Hash pairwise differences, keeping the first pair per difference.
/// Comparing against the first pair is enough: two pairs that are each
/// non-contradictory against it are non-contradictory against each other.
fn search(values: &[u128], e: u128, memory: usize) -> Search {
    let mut table: HashMap<u128, (u32, u32)> = HashMap::new();
    let mut overflow = false;
    for j in 0..values.len() {
        for i in 0..j {
            for (a, b) in [(j, i), (i, j)] {
                let d = sub_mod(values[a], values[b], e);
                match table.get(&d) {
                    Some(&(c, dd)) => {
                        let l = lcm(gcd(d, e), gcd(sub_mod(values[a], values[c as usize], e), e));
                        if l != e {
                            return Search::Found([a, b, c as usize, dd as usize]);
                        }
                    }
                    None if table.len() < memory => {
                        table.insert(d, (a as u32, b as u32));
                    }
                    None => overflow = true,
                }
            }
        }
    }
    if overflow {
        Search::Overflow
    } else {
        Search::Exhausted
    }
}
