//! Brute-force ground truth for small groups: enumerate abelian groups,
//! search them exhaustively for difference sets, and audit the
//! elimination pipeline against the results.
//!
//! Deliberately independent of the arithmetic layer; everything here works
//! on small machine integers with trial division.

mod audit;
mod group;
mod search;

use thiserror::Error;

pub use audit::{covers, cross_validate, small_parameter_sets, AuditEntry, AuditReport, SearchOutcome};
pub use group::{enumerate_abelian_groups, AbelianGroup};
pub use search::{exhaustive_search, exhaustive_search_with, verify_difference_set, CandidateSet, SearchConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group order {order} exceeds the search bound {bound}")]
    OrderTooLarge { order: u64, bound: u64 },
    #[error("search gave up after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error("invariant factors {0:?} do not form a divisibility chain")]
    InvalidGroup(Vec<u64>),
    #[error("{0}")]
    Parse(String),
}

/// `d1,d2,...` invariant factors; an empty string is the trivial group.
pub fn parse_group(text: &str) -> Result<AbelianGroup, OracleError> {
    let factors = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|e| OracleError::Parse(format!("invariant factor {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    AbelianGroup::new(factors)
}

/// `e1;e2;...` with each element a comma-separated residue tuple.
pub fn parse_elements(text: &str, group: &AbelianGroup) -> Result<Vec<Vec<u64>>, OracleError> {
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let x = item
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| OracleError::Parse(format!("element {item:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !group.contains(&x) {
            return Err(OracleError::Parse(format!(
                "element {item:?} is not in Z{:?}",
                group.invariant_factors()
            )));
        }
        out.push(x);
    }
    Ok(out)
}

fn small_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        let g = parse_group("2, 6").unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(parse_group("").unwrap().order(), 1);
        assert!(parse_group("4,6").is_err());
        assert!(parse_group("x").is_err());
        assert_eq!(parse_elements("0,1; 1,5", &g).unwrap(), vec![vec![0, 1], vec![1, 5]]);
        assert!(parse_elements("2,0", &g).is_err());
        assert!(parse_elements("1", &g).is_err());
    }
}
