use serde::{Deserialize, Serialize};

use super::{small_factor, OracleError};

/// `Z_{d1} × … × Z_{dr}` with `d1 | d2 | … | dr`. The trivial group has no factors.
///
/// Elements are tuples of residues; internally they are packed into a
/// mixed-radix index in `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, OracleError> {
        let chain = factors.windows(2).all(|w| w[1] % w[0] == 0);
        let order = factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        if !chain || factors.iter().any(|&d| d < 2) || order.is_none() {
            return Err(OracleError::InvalidGroup(factors));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn cyclic(order: u64) -> Self {
        AbelianGroup {
            factors: if order > 1 { vec![order] } else { Vec::new() },
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.factors.len() && x.iter().zip(&self.factors).all(|(a, d)| a < d)
    }

    pub(crate) fn index(&self, x: &[u64]) -> usize {
        x.iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&a, &d)| acc * d + a) as usize
    }

    pub(crate) fn tuple(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = i as u64 % d;
            i /= d as usize;
        }
        out
    }

    /// Table of `x − y` over packed indices, row-major in `x`.
    pub(crate) fn difference_table(&self) -> Vec<u16> {
        let v = self.order() as usize;
        let tuples: Vec<Vec<u64>> = (0..v).map(|i| self.tuple(i)).collect();
        let mut table = vec![0u16; v * v];
        let mut z = vec![0u64; self.factors.len()];
        for x in 0..v {
            for y in 0..v {
                for (c, ((a, b), d)) in z.iter_mut().zip(tuples[x].iter().zip(&tuples[y]).zip(&self.factors)) {
                    *c = (a + d - b) % d;
                }
                table[x * v + y] = self.index(&z) as u16;
            }
        }
        table
    }

    /// Packed index of `m · x` for every `x`.
    pub(crate) fn scaling(&self, m: u64) -> Vec<usize> {
        (0..self.order() as usize)
            .map(|i| {
                let t: Vec<u64> = self
                    .tuple(i)
                    .iter()
                    .zip(&self.factors)
                    .map(|(&a, &d)| a * (m % d) % d)
                    .collect();
                self.index(&t)
            })
            .collect()
    }
}

/// One group per isomorphism class, in a fixed order (cyclic first).
pub fn enumerate_abelian_groups(order: u64) -> Vec<AbelianGroup> {
    if order == 0 {
        return Vec::new();
    }
    // Each prime contributes a partition of its exponent; part i of every
    // prime's partition (largest first) multiplies into invariant factor i
    // counted from the top.
    let mut choices: Vec<Vec<Vec<u64>>> = Vec::new();
    for (p, e) in small_factor(order) {
        let parts = partitions(e);
        choices.push(
            parts
                .into_iter()
                .map(|part| part.into_iter().map(|a| p.pow(a)).collect())
                .collect(),
        );
    }
    let mut out = vec![Vec::<u64>::new()];
    for options in &choices {
        let mut next = Vec::new();
        for acc in &out {
            for powers in options {
                let len = acc.len().max(powers.len());
                let mut top: Vec<u64> = (0..len)
                    .map(|i| acc.get(i).copied().unwrap_or(1) * powers.get(i).copied().unwrap_or(1))
                    .collect();
                top.sort_unstable_by(|a, b| b.cmp(a));
                next.push(top);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|mut top| {
            top.reverse();
            AbelianGroup { factors: top }
        })
        .collect()
}

/// Partitions of `n` into non-increasing parts, the single part `[n]` first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
