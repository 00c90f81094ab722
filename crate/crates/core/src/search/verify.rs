//! Composite verification of the class-count bound `n(n-3)/2 + 3` and of the
//! uniqueness of the extremal pattern, for orders 2 to 5.
//!
//! Orders from 3 on are split into two strata:
//!
//! * `k > bound`: with `3k > n²` some class has at most two cells, so the
//!   bordered-form search covers every pattern.
//! * `k = bound`: with `4k > n²` some class has at most three cells. Patterns
//!   with a class of one or two cells come from the bordered-form search and
//!   the rest (every class has at least three cells) from the catalog cover.
//!
//! Independent searches are run as cross-checks where they are cheap enough.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    bordered_forms_search, catalog_cover_search, exhaustive_search, lemma6_reduction_search,
    pruned_search, SearchConfig, SearchReport, Strategy, MAX_SEARCH_ORDER,
};
use crate::canon::SimilarityClass;
use crate::constructions::extremal;
use crate::error::{Error, Result};
use crate::max_nonsymmetric_classes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Bound and uniqueness confirmed by completed searches.
    Verified,
    /// No nonsymmetric normal pattern of this order exists.
    Degenerate,
    /// Some required search ran out of budget before deciding.
    Inconclusive,
    /// A completed search contradicts the statement.
    Falsified,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Degenerate => "degenerate",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Falsified => "falsified",
        }
    }
}

/// The searches behind one claim of the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEvidence {
    pub name: String,
    pub claim: String,
    pub completed: bool,
    pub reports: Vec<SearchReport>,
}

impl StratumEvidence {
    fn new(name: &str, claim: String, reports: Vec<SearchReport>) -> Self {
        StratumEvidence {
            name: name.to_string(),
            claim,
            completed: reports.iter().all(|r| r.completed),
            reports,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub order: usize,
    pub bound: usize,
    pub verdict: Verdict,
    pub strata: Vec<StratumEvidence>,
    pub cross_checks: Vec<StratumEvidence>,
    /// Canonical form of the extremal pattern (orders from 3).
    pub extremal: Option<SimilarityClass>,
    /// Similarity classes found with exactly `bound` classes.
    pub at_bound: Vec<SimilarityClass>,
    /// Similarity classes found with more than `bound` classes.
    pub above_bound: Vec<SimilarityClass>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "order: {}\nbound: {}\nverdict: {}\n",
            self.order,
            self.bound,
            self.verdict.name()
        );
        let sections = [("stratum", &self.strata), ("cross_check", &self.cross_checks)];
        for (label, list) in sections {
            for s in list {
                out.push_str(&format!("{label} {}: completed {}\n", s.name, s.completed));
                out.push_str(&format!("  claim: {}\n", s.claim));
                for r in &s.reports {
                    out.push_str(&format!(
                        "  search {} min_classes {} min_class_size {}: completed {} nodes {} max_classes {}\n",
                        r.config.strategy.name(),
                        r.config.min_classes,
                        r.config.min_class_size,
                        r.completed,
                        r.nodes_visited,
                        r.max_classes_found.map_or("none".to_string(), |k| k.to_string())
                    ));
                }
            }
        }
        let groups = [("at_bound", &self.at_bound), ("above_bound", &self.above_bound)];
        for (label, list) in groups {
            out.push_str(&format!("{label}: {}\n", list.len()));
            for w in list {
                out.push_str(&format!(
                    "  witness classes {} extremal {}\n",
                    w.representative.class_count(),
                    self.extremal.as_ref().is_some_and(|e| e.key.cells == w.key.cells)
                ));
                for row in w.representative.to_tokens() {
                    out.push_str(&format!("    {}\n", row.join(" ")));
                }
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

fn config(n: usize, strategy: Strategy, min_classes: usize, budget: u64, workers: usize) -> SearchConfig {
    SearchConfig::new(n, strategy)
        .min_classes(min_classes)
        .budget(budget)
        .workers(workers)
}

/// Similarity classes with exactly `k` classes and with more, over reports
/// that each list witnesses at their own maximum.
fn split_witnesses(reports: &[&SearchReport], k: usize) -> (Vec<SimilarityClass>, Vec<SimilarityClass>) {
    let mut at = BTreeMap::new();
    let mut above = BTreeMap::new();
    for r in reports {
        for w in &r.witnesses {
            let c = w.representative.class_count();
            let target = if c == k {
                &mut at
            } else if c > k {
                &mut above
            } else {
                continue;
            };
            target.entry(w.key.cells.clone()).or_insert_with(|| w.clone());
        }
    }
    (at.into_values().collect(), above.into_values().collect())
}

/// Runs the strata and cross-checks for order `n` (2 to 5). Every search gets
/// `budget` node expansions.
pub fn verify_theorem(n: usize, budget: u64, workers: usize) -> Result<VerifyReport> {
    if !(2..=MAX_SEARCH_ORDER).contains(&n) {
        return Err(Error::capacity(format!("verification supports orders 2..={MAX_SEARCH_ORDER}, got {n}")));
    }
    let bound = max_nonsymmetric_classes(n);
    let mut notes = Vec::new();

    if n == 2 {
        let r = pruned_search(&config(n, Strategy::PrunedDfs, 1, budget, workers))?;
        let verdict = match (r.completed, r.max_classes_found) {
            (_, Some(_)) => Verdict::Falsified,
            (true, None) => Verdict::Degenerate,
            (false, None) => Verdict::Inconclusive,
        };
        let (at_bound, above_bound) = split_witnesses(&[&r], bound);
        let claim = "no nonsymmetric normal pattern of order 2 exists".to_string();
        let mut cross_checks = Vec::new();
        let e = exhaustive_search(&config(n, Strategy::ExhaustiveRgs, 1, budget, workers))?;
        if e.completed && e.counts_by_k != r.counts_by_k {
            notes.push("exhaustive sweep disagrees with pruned search".to_string());
        }
        cross_checks.push(StratumEvidence::new("exhaustive", claim.clone(), vec![e]));
        let verdict = if notes.is_empty() { verdict } else { Verdict::Falsified };
        return Ok(VerifyReport {
            order: n,
            bound,
            verdict,
            strata: vec![StratumEvidence::new("all", claim, vec![r])],
            cross_checks,
            extremal: None,
            at_bound,
            above_bound,
            notes,
        });
    }

    let ext = SimilarityClass::of(&extremal(n)?)?;

    let above = lemma6_reduction_search(&config(n, Strategy::Lemma6Reduction, bound + 1, budget, workers))?;
    if 4 * bound <= n * n {
        return Err(Error::domain(format!("order {n}: 4·{bound} ≤ n², the equality stratum is not covered")));
    }
    let small = bordered_forms_search(&config(n, Strategy::Lemma6Reduction, bound, budget, workers))?;
    let large = catalog_cover_search(&config(n, Strategy::CatalogCover, bound, budget, workers).min_class_size(3))?;

    let strata = vec![
        StratumEvidence::new(
            "above_bound",
            format!("no nonsymmetric normal pattern has more than {bound} classes"),
            vec![above],
        ),
        StratumEvidence::new(
            "at_bound",
            format!("exactly one similarity class has {bound} classes, the extremal pattern"),
            vec![small, large],
        ),
    ];
    let all: Vec<&SearchReport> = strata.iter().flat_map(|s| &s.reports).collect();
    let (at_bound, above_bound) = split_witnesses(&all, bound);

    let mut cross_checks = Vec::new();
    let cross = match n {
        3 => Some(exhaustive_search(&config(n, Strategy::ExhaustiveRgs, 1, budget, workers))?),
        4 | 5 => Some(pruned_search(&config(n, Strategy::PrunedDfs, bound, budget, workers))?),
        _ => None,
    };
    let mut disagreement = false;
    if let Some(r) = cross {
        if r.completed {
            let expected = Some(bound);
            if r.max_classes_found != expected || r.witness_keys() != [ext.key.cells.clone()].into() {
                disagreement = true;
                notes.push(format!("{} cross-check disagrees with the strata", r.config.strategy.name()));
            }
        } else {
            notes.push(format!("{} cross-check ran out of budget", r.config.strategy.name()));
        }
        cross_checks.push(StratumEvidence::new(
            r.config.strategy.name(),
            format!("the maximum is {bound}, attained only by the extremal pattern"),
            vec![r],
        ));
    }

    let completed = strata.iter().all(|s| s.completed);
    let at_bound_ok = at_bound.len() == 1 && at_bound[0].key.cells == ext.key.cells;
    let contradiction = !above_bound.is_empty()
        || at_bound.len() > 1
        || at_bound.iter().any(|w| w.key.cells != ext.key.cells)
        || disagreement;
    let verdict = if contradiction || (completed && !at_bound_ok) {
        Verdict::Falsified
    } else if completed {
        Verdict::Verified
    } else {
        for s in strata.iter().filter(|s| !s.completed) {
            notes.push(format!("stratum {} did not complete within the node budget", s.name));
        }
        Verdict::Inconclusive
    };

    Ok(VerifyReport {
        order: n,
        bound,
        verdict,
        strata,
        cross_checks,
        extremal: Some(ext),
        at_bound,
        above_bound,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 2_000_000_000;

    #[test]
    fn order_two_is_degenerate() {
        let r = verify_theorem(2, BUDGET, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
        assert!(r.at_bound.is_empty());
    }

    #[test]
    fn order_three_is_verified() {
        let r = verify_theorem(3, BUDGET, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{}", r.to_text());
        assert!(r.cross_checks.iter().all(|c| c.completed));
        assert_eq!(r.at_bound.len(), 1);
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let r = verify_theorem(4, 10, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.notes.iter().any(|n| n.contains("did not complete")));
    }

    #[test]
    fn order_limits() {
        assert!(verify_theorem(1, BUDGET, 1).is_err());
        assert!(verify_theorem(6, BUDGET, 1).is_err());
    }
}
