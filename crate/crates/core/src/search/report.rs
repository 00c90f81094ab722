use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SearchConfig, WITNESS_CAP};
use crate::canon::SimilarityClass;
use crate::error::{Error, Result};
use crate::normality::{
    is_normal_binary_assignments, is_normal_lemma2, is_normal_symbolic, MAX_SUBSET_CLASSES,
};
use crate::pattern::Pattern;

/// Prune and rejection counters. Indices are fixed so that reports list rules
/// in a stable order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct PruneStats {
    counts: [u64; Rule::COUNT],
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Rule {
    Eq3,
    ClassBound,
    Symmetry,
    Symmetric,
    NotCanonical,
    NotNormal,
    BorderCondition,
    PairCondition,
    SizeBound,
}

impl Rule {
    const COUNT: usize = 9;
    const ALL: [Rule; Rule::COUNT] = [
        Rule::Eq3,
        Rule::ClassBound,
        Rule::Symmetry,
        Rule::Symmetric,
        Rule::NotCanonical,
        Rule::NotNormal,
        Rule::BorderCondition,
        Rule::PairCondition,
        Rule::SizeBound,
    ];

    fn name(self) -> &'static str {
        match self {
            Rule::Eq3 => "eq3_balance",
            Rule::ClassBound => "class_count_bound",
            Rule::Symmetry => "prefix_minimality",
            Rule::Symmetric => "symmetric",
            Rule::NotCanonical => "not_canonical",
            Rule::NotNormal => "not_normal",
            Rule::BorderCondition => "border_condition",
            Rule::PairCondition => "pair_condition",
            Rule::SizeBound => "class_size_bound",
        }
    }
}

impl PruneStats {
    pub(crate) fn hit(&mut self, rule: Rule) {
        self.counts[rule as usize] += 1;
    }

    pub(crate) fn absorb(&mut self, other: &PruneStats) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    pub(crate) fn to_map(self) -> BTreeMap<String, u64> {
        Rule::ALL
            .iter()
            .filter(|r| self.counts[**r as usize] > 0)
            .map(|r| (r.name().to_string(), self.counts[*r as usize]))
            .collect()
    }
}

/// Outcome of one search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// The search space was exhausted within the node budget.
    pub completed: bool,
    pub max_classes_found: Option<usize>,
    /// Similarity classes at `max_classes_found` (at most 100).
    pub witnesses: Vec<SimilarityClass>,
    /// Number of similarity classes found for each class count.
    pub counts_by_k: BTreeMap<usize, usize>,
    pub nodes_visited: u64,
    pub nodes_pruned_by_rule: BTreeMap<String, u64>,
    /// Random class merges of witnesses re-checked for normality.
    pub merge_samples_checked: usize,
}

impl SearchReport {
    /// Canonical cell strings of the witnesses.
    pub fn witness_keys(&self) -> BTreeSet<Vec<u16>> {
        self.witnesses.iter().map(|w| w.key.cells.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Key-value rendering with a fixed field order.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        out.push_str(&format!("strategy: {}\n", c.strategy.name()));
        out.push_str(&format!("order: {}\n", c.order));
        out.push_str(&format!("min_classes: {}\n", c.min_classes));
        out.push_str(&format!("require_nonsymmetric: {}\n", c.require_nonsymmetric));
        out.push_str(&format!("min_class_size: {}\n", c.min_class_size));
        out.push_str(&format!("node_budget: {}\n", c.node_budget));
        out.push_str(&format!("completed: {}\n", self.completed));
        out.push_str(&format!(
            "max_classes_found: {}\n",
            self.max_classes_found.map_or("none".to_string(), |k| k.to_string())
        ));
        out.push_str(&format!("nodes_visited: {}\n", self.nodes_visited));
        for (rule, count) in &self.nodes_pruned_by_rule {
            out.push_str(&format!("pruned.{rule}: {count}\n"));
        }
        for (k, count) in &self.counts_by_k {
            out.push_str(&format!("classes_with_k.{k}: {count}\n"));
        }
        out.push_str(&format!("merge_samples_checked: {}\n", self.merge_samples_checked));
        out.push_str(&format!("witness_count: {}\n", self.witnesses.len()));
        for (i, w) in self.witnesses.iter().enumerate() {
            out.push_str(&format!(
                "witness {i}: classes {} members {}\n",
                w.representative.class_count(),
                w.member_count
            ));
            for row in w.representative.to_tokens() {
                out.push_str(&format!("  {}\n", row.join(" ")));
            }
        }
        out
    }
}

/// Aggregated raw search results before the report is assembled.
#[derive(Default)]
pub(crate) struct Findings {
    pub nodes: u64,
    pub completed: bool,
    pub stats: PruneStats,
    /// Canonical forms, possibly with repeats.
    pub found: Vec<Pattern>,
}

const MERGE_SAMPLES_PER_WITNESS: usize = 4;

/// Deduplicates, counts, keeps witnesses at the top class count and re-checks
/// them under the independent oracles and under random merges.
pub(crate) fn finish_report(config: &SearchConfig, findings: Findings) -> Result<SearchReport> {
    let mut by_k: BTreeMap<usize, BTreeSet<Pattern>> = BTreeMap::new();
    for p in findings.found {
        by_k.entry(p.class_count()).or_default().insert(p);
    }
    let counts_by_k = by_k.iter().map(|(&k, set)| (k, set.len())).collect();
    let max_classes_found = by_k.keys().next_back().copied();
    let witnesses = match max_classes_found {
        Some(k) => by_k[&k]
            .iter()
            .take(WITNESS_CAP)
            .map(SimilarityClass::of)
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));
    let mut merge_samples_checked = 0;
    for w in &witnesses {
        let p = &w.representative;
        let sound = is_normal_lemma2(p)
            && is_normal_symbolic(p)
            && (p.class_count() > MAX_SUBSET_CLASSES || is_normal_binary_assignments(p)?)
            && !(config.require_nonsymmetric && p.is_symmetric());
        if !sound {
            return Err(Error::Counterexample(format!(
                "search reported a witness that fails re-verification:\n{p}"
            )));
        }
        for _ in 0..MERGE_SAMPLES_PER_WITNESS {
            let k = p.class_count();
            let parts = rng.gen_range(1..=k);
            let mut groups = vec![Vec::new(); parts];
            for c in 0..k {
                // the first `parts` classes seed distinct groups
                let g = if c < parts { c } else { rng.gen_range(0..parts) };
                groups[g].push(c);
            }
            let merged = p.merge_classes(&groups)?;
            if !is_normal_lemma2(&merged) {
                return Err(Error::Counterexample(format!(
                    "a merge of a normal witness is not normal:\n{merged}"
                )));
            }
            merge_samples_checked += 1;
        }
    }

    Ok(SearchReport {
        config: config.clone(),
        completed: findings.completed,
        max_classes_found,
        witnesses,
        counts_by_k,
        nodes_visited: findings.nodes,
        nodes_pruned_by_rule: findings.stats.to_map(),
        merge_samples_checked,
    })
}
