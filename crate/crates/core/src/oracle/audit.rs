use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_abelian_groups, exhaustive_search_with, AbelianGroup, CandidateSet, OracleError, SearchConfig};
use crate::elimination::{check, CheckResult, Scope, Status, TestConfig};
use crate::structure::ParamSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(CandidateSet),
    Absent,
    /// The node budget ran out first.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub params: ParamSet,
    pub group: AbelianGroup,
    pub status: Status,
    /// Some witness from `check` claims to rule out this group.
    pub eliminated_here: bool,
    pub outcome: SearchOutcome,
}

impl AuditEntry {
    pub fn is_contradiction(&self) -> bool {
        self.eliminated_here && matches!(self.outcome, SearchOutcome::Found(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub max_v: u64,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn contradictions(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.is_contradiction())
    }

    pub fn found(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| matches!(e.outcome, SearchOutcome::Found(_)))
    }

    pub fn unresolved(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.outcome == SearchOutcome::Unresolved)
            .count()
    }

    /// Entries where an elimination claim was confirmed by a finished search.
    pub fn confirmed(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.eliminated_here && e.outcome == SearchOutcome::Absent)
            .count()
    }
}

/// Nontrivial parameter sets with `k <= v/2` and `v <= max_v`.
pub fn small_parameter_sets(max_v: u64) -> Vec<ParamSet> {
    let mut out = Vec::new();
    for v in 4..=max_v as u128 {
        for k in 2..=v / 2 {
            let num = k * (k - 1);
            if num % (v - 1) == 0 {
                if let Ok(p) = ParamSet::admissible(v, k, num / (v - 1)) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Does `result` contain a witness whose scope includes `group`?
pub fn covers(result: &CheckResult, group: &AbelianGroup) -> bool {
    result.witnesses().any(|w| match w.scope {
        Scope::AllAbelian => true,
        Scope::Exponent(e) => e == group.exponent() as u128,
        Scope::Cyclic => group.is_cyclic(),
    })
}

/// Run `check` and the exhaustive oracle on every group of every parameter
/// set up to `max_v`, in parallel.
pub fn cross_validate(max_v: u64, tests: &TestConfig, search: &SearchConfig) -> Result<AuditReport, OracleError> {
    if max_v > search.max_order {
        return Err(OracleError::OrderTooLarge {
            order: max_v,
            bound: search.max_order,
        });
    }
    let jobs: Vec<(ParamSet, CheckResult, AbelianGroup)> = small_parameter_sets(max_v)
        .into_par_iter()
        .flat_map_iter(|p| {
            let result = check(&p, tests);
            enumerate_abelian_groups(p.v() as u64)
                .into_iter()
                .map(move |g| (p, result.clone(), g))
        })
        .collect();
    let entries = jobs
        .into_par_iter()
        .map(|(params, result, group)| {
            let outcome = match exhaustive_search_with(&group, params.k() as u64, params.lambda() as u64, search) {
                Ok(Some(set)) => SearchOutcome::Found(set),
                Ok(None) => SearchOutcome::Absent,
                Err(OracleError::Budget { .. }) => SearchOutcome::Unresolved,
                Err(e) => return Err(e),
            };
            Ok(AuditEntry {
                params,
                eliminated_here: covers(&result, &group),
                status: result.status,
                group,
                outcome,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AuditReport { max_v, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_audits() {
        let r = cross_validate(1, &TestConfig::default(), &SearchConfig::default()).unwrap();
        assert!(r.entries.is_empty());
        let r = cross_validate(7, &TestConfig::default(), &SearchConfig::default()).unwrap();
        assert_eq!(r.contradictions().count(), 0);
        assert!(r.found().any(|e| (e.params.v(), e.params.k(), e.params.lambda()) == (7, 3, 1)));
    }

    #[test]
    fn parameter_list() {
        let ps = small_parameter_sets(16);
        let triples: Vec<_> = ps.iter().map(|p| (p.v(), p.k(), p.lambda())).collect();
        assert!(triples.contains(&(7, 3, 1)));
        assert!(triples.contains(&(16, 6, 2)));
        assert!(triples.contains(&(15, 7, 3)));
        assert!(triples.iter().all(|&(v, k, _)| 2 * k <= v));
    }
}
