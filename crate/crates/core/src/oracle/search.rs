use serde::{Deserialize, Serialize};

use super::{small_factor, AbelianGroup, OracleError};

/// A proposed difference set: `k` element tuples over `group`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub group: AbelianGroup,
    pub elements: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Largest group order searched.
    pub max_order: u64,
    /// Search-tree nodes visited before giving up.
    pub node_budget: u64,
    /// Restrict to unions of multiplier orbits when multipliers are known.
    pub use_multipliers: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_order: 300,
            node_budget: 2_000_000,
            use_multipliers: true,
        }
    }
}

/// Every nonzero element of the group occurs exactly `lambda` times as a
/// difference of two members.
pub fn verify_difference_set(cand: &CandidateSet, lambda: u64) -> bool {
    let g = &cand.group;
    if !cand.elements.iter().all(|x| g.contains(x)) {
        return false;
    }
    let v = g.order() as usize;
    let idx: Vec<usize> = cand.elements.iter().map(|x| g.index(x)).collect();
    let mut seen = vec![false; v];
    for &i in &idx {
        if std::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    let factors = g.invariant_factors();
    let mut counts = vec![0u64; v];
    for a in &cand.elements {
        for b in &cand.elements {
            let z: Vec<u64> = a
                .iter()
                .zip(b)
                .zip(factors)
                .map(|((x, y), d)| (x + d - y) % d)
                .collect();
            counts[g.index(&z)] += 1;
        }
    }
    counts[0] == idx.len() as u64 && counts[1..].iter().all(|&c| c == lambda)
}

pub fn exhaustive_search(group: &AbelianGroup, k: u64, lambda: u64) -> Result<Option<CandidateSet>, OracleError> {
    exhaustive_search_with(group, k, lambda, &SearchConfig::default())
}

/// Complete search: `Ok(None)` proves no `(|group|, k, λ)` difference set
/// exists in `group`.
pub fn exhaustive_search_with(
    group: &AbelianGroup,
    k: u64,
    lambda: u64,
    config: &SearchConfig,
) -> Result<Option<CandidateSet>, OracleError> {
    let v = group.order();
    if v > config.max_order {
        return Err(OracleError::OrderTooLarge { order: v, bound: config.max_order });
    }
    if k > v || k * k.saturating_sub(1) != lambda * (v - 1) {
        return Ok(None);
    }
    // Search the smaller of the set and its complement.
    let complement = 2 * k > v;
    let (k1, l1) = if complement { (v - k, v + lambda - 2 * k) } else { (k, lambda) };
    let multipliers = if config.use_multipliers {
        multipliers(v, k, lambda.min(v + lambda - 2 * k))
    } else {
        Vec::new()
    };
    let diff = group.difference_table();
    let mut s = State {
        v: v as usize,
        k: k1 as usize,
        lambda: l1 as u16,
        diff: &diff,
        counts: vec![0; v as usize],
        set: Vec::new(),
        nodes: 0,
        budget: config.node_budget,
    };
    let found = if multipliers.is_empty() {
        s.plain()?
    } else {
        let orbits = orbits(group, &multipliers);
        s.orbit_union(&orbits)?
    };
    Ok(found.map(|mut set| {
        if complement {
            let inside: std::collections::HashSet<usize> = set.into_iter().collect();
            set = (0..v as usize).filter(|i| !inside.contains(i)).collect();
        }
        set.sort_unstable();
        CandidateSet {
            group: group.clone(),
            elements: set.into_iter().map(|i| group.tuple(i)).collect(),
        }
    }))
}

/// Primes `p | k − λ` with `p > λ` and `p ∤ v`.
fn multipliers(v: u64, k: u64, lambda: u64) -> Vec<u64> {
    let n = k.saturating_sub(lambda);
    if n < 2 {
        return Vec::new();
    }
    small_factor(n)
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| p > lambda && v % p != 0)
        .collect()
}

/// Orbits of the group generated by `x ↦ m·x`, ordered by least element.
fn orbits(group: &AbelianGroup, multipliers: &[u64]) -> Vec<Vec<usize>> {
    let v = group.order() as usize;
    let maps: Vec<Vec<usize>> = multipliers.iter().map(|&m| group.scaling(m)).collect();
    let mut orbit_of = vec![usize::MAX; v];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..v {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        orbit_of[start] = id;
        let mut at = 0;
        while at < orbit.len() {
            let x = orbit[at];
            at += 1;
            for map in &maps {
                let y = map[x];
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

struct State<'a> {
    v: usize,
    k: usize,
    lambda: u16,
    diff: &'a [u16],
    counts: Vec<u16>,
    set: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::Budget { nodes: self.budget });
        }
        Ok(())
    }

    /// Add `x` if no difference count would pass `λ`.
    fn push(&mut self, x: usize) -> bool {
        let v = self.v;
        let mut ok = true;
        for &y in &self.set {
            let a = self.diff[x * v + y] as usize;
            let b = self.diff[y * v + x] as usize;
            self.counts[a] += 1;
            self.counts[b] += 1;
            ok &= self.counts[a] <= self.lambda && self.counts[b] <= self.lambda;
        }
        self.set.push(x);
        if !ok {
            self.pop();
        }
        ok
    }

    fn pop(&mut self) {
        let v = self.v;
        let x = self.set.pop().expect("non-empty");
        for &y in &self.set {
            self.counts[self.diff[x * v + y] as usize] -= 1;
            self.counts[self.diff[y * v + x] as usize] -= 1;
        }
    }

    /// Backtracking over increasing elements with `0` fixed by translation.
    fn plain(&mut self) -> Result<Option<Vec<usize>>, OracleError> {
        if self.k == 0 {
            return Ok(Some(Vec::new()));
        }
        self.push(0);
        self.extend_from(1)
    }

    fn extend_from(&mut self, start: usize) -> Result<Option<Vec<usize>>, OracleError> {
        self.tick()?;
        if self.set.len() == self.k {
            return Ok(Some(self.set.clone()));
        }
        let need = self.k - self.set.len();
        for x in start..self.v {
            if self.v - x < need {
                break;
            }
            if self.push(x) {
                if let Some(found) = self.extend_from(x + 1)? {
                    return Ok(Some(found));
                }
                self.pop();
            }
        }
        Ok(None)
    }

    /// Unions of orbits with total size `k`; some translate of any
    /// difference set is of this form.
    fn orbit_union(&mut self, orbits: &[Vec<usize>]) -> Result<Option<Vec<usize>>, OracleError> {
        // reach[i][s]: orbits i.. can supply exactly s more elements.
        let mut reach = vec![vec![false; self.k + 1]; orbits.len() + 1];
        reach[orbits.len()][0] = true;
        for i in (0..orbits.len()).rev() {
            let size = orbits[i].len();
            for s in 0..=self.k {
                reach[i][s] = reach[i + 1][s] || (s >= size && reach[i + 1][s - size]);
            }
        }
        self.choose(orbits, &reach, 0)
    }

    fn choose(
        &mut self,
        orbits: &[Vec<usize>],
        reach: &[Vec<bool>],
        i: usize,
    ) -> Result<Option<Vec<usize>>, OracleError> {
        self.tick()?;
        let have = self.set.len();
        if have == self.k {
            return Ok(Some(self.set.clone()));
        }
        if i == orbits.len() || !reach[i][self.k - have] {
            return Ok(None);
        }
        let orbit = &orbits[i];
        if have + orbit.len() <= self.k && reach[i + 1][self.k - have - orbit.len()] {
            let mut added = 0;
            for &x in orbit {
                if !self.push(x) {
                    break;
                }
                added += 1;
            }
            if added == orbit.len() {
                if let Some(found) = self.choose(orbits, reach, i + 1)? {
                    return Ok(Some(found));
                }
            }
            for _ in 0..added {
                self.pop();
            }
        }
        self.choose(orbits, reach, i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_abelian_groups;

    fn cyclic_set(v: u64, xs: &[u64]) -> CandidateSet {
        CandidateSet {
            group: AbelianGroup::cyclic(v),
            elements: xs.iter().map(|&x| vec![x]).collect(),
        }
    }

    #[test]
    fn verifier_examples() {
        assert!(verify_difference_set(&cyclic_set(7, &[1, 2, 4]), 1));
        assert!(verify_difference_set(&cyclic_set(11, &[1, 3, 4, 5, 9]), 2));
        assert!(!verify_difference_set(&cyclic_set(7, &[0, 1, 2]), 1));
        assert!(!verify_difference_set(&cyclic_set(7, &[1, 1, 2]), 1));
        assert!(!verify_difference_set(&cyclic_set(7, &[1, 2, 9]), 1));
    }

    #[test]
    fn finds_known_sets() {
        for (v, k, l) in [(7, 3, 1), (21, 5, 1), (11, 5, 2), (13, 4, 1), (37, 9, 2), (15, 7, 3), (11, 6, 3)] {
            let g = AbelianGroup::cyclic(v);
            let set = exhaustive_search(&g, k, l).unwrap().unwrap_or_else(|| panic!("({v},{k},{l})"));
            assert_eq!(set.elements.len() as u64, k);
            assert!(verify_difference_set(&set, l));
        }
        let z2_4 = AbelianGroup::new(vec![2, 2, 2, 2]).unwrap();
        let set = exhaustive_search(&z2_4, 6, 2).unwrap().unwrap();
        assert!(verify_difference_set(&set, 2));
    }

    #[test]
    fn refutes_missing_sets() {
        assert_eq!(exhaustive_search(&AbelianGroup::cyclic(22), 7, 2).unwrap(), None);
        // (16, 6, 2) exists in some groups of order 16 but not the cyclic one.
        assert_eq!(exhaustive_search(&AbelianGroup::cyclic(16), 6, 2).unwrap(), None);
        assert_eq!(exhaustive_search(&AbelianGroup::cyclic(10), 4, 1).unwrap(), None);
    }

    #[test]
    fn orbit_search_matches_backtracking() {
        let plain = SearchConfig {
            use_multipliers: false,
            ..SearchConfig::default()
        };
        for (v, k, l) in [(7u64, 3u64, 1u64), (13, 4, 1), (11, 5, 2), (16, 6, 2), (21, 5, 1), (31, 6, 1), (31, 10, 3)] {
            for g in enumerate_abelian_groups(v) {
                let a = exhaustive_search(&g, k, l).unwrap().is_some();
                let b = exhaustive_search_with(&g, k, l, &plain).unwrap().is_some();
                assert_eq!(a, b, "{:?} k={k} l={l}", g.invariant_factors());
            }
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(
            exhaustive_search(&AbelianGroup::cyclic(301), 1, 0),
            Err(OracleError::OrderTooLarge { .. })
        ));
        let tiny = SearchConfig {
            node_budget: 3,
            use_multipliers: false,
            ..SearchConfig::default()
        };
        assert!(matches!(
            exhaustive_search_with(&AbelianGroup::cyclic(31), 6, 1, &tiny),
            Err(OracleError::Budget { .. })
        ));
    }
}
