use super::report::{finish_report, Findings, Rule};
use super::{SearchConfig, SearchReport, MAX_EXHAUSTIVE_ORDER};
use crate::canon::canonical_form;
use crate::error::Result;
use crate::normality::is_normal_lemma2;
use crate::pattern::Pattern;

/// Iterator over all restricted-growth strings of a fixed length, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    current: Vec<u16>,
    /// `prefix_max[i]` is the largest label in `current[..=i]`.
    prefix_max: Vec<u16>,
    started: bool,
    done: bool,
}

/// All restricted-growth strings of length `len` (Bell(len) of them).
pub fn restricted_growth_strings(len: usize) -> RestrictedGrowth {
    RestrictedGrowth {
        current: vec![0; len],
        prefix_max: vec![0; len],
        started: false,
        done: false,
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<u16>;

    fn next(&mut self) -> Option<Vec<u16>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let len = self.current.len();
        // rightmost position that may grow by one
        let mut i = len;
        while i > 1 && self.current[i - 1] > self.prefix_max[i - 2] {
            i -= 1;
        }
        if i <= 1 {
            self.done = true;
            return None;
        }
        let i = i - 1;
        self.current[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
        for t in i + 1..len {
            self.current[t] = 0;
            self.prefix_max[t] = self.prefix_max[i];
        }
        Some(self.current.clone())
    }
}

/// Tests every restricted-growth string of length `n²` (orders up to 3).
pub fn exhaustive_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate(MAX_EXHAUSTIVE_ORDER)?;
    let n = config.order;
    let mut findings = Findings {
        completed: true,
        ..Findings::default()
    };
    for cells in restricted_growth_strings(n * n) {
        if findings.nodes == config.node_budget {
            findings.completed = false;
            break;
        }
        findings.nodes += 1;
        let p = Pattern::from_rgs(n, cells)?;
        if p.class_count() < config.min_classes {
            findings.stats.hit(Rule::ClassBound);
        } else if config.require_nonsymmetric && p.is_symmetric() {
            findings.stats.hit(Rule::Symmetric);
        } else if !is_normal_lemma2(&p) {
            findings.stats.hit(Rule::NotNormal);
        } else {
            findings.found.push(canonical_form(&p)?);
        }
    }
    finish_report(config, findings)
}
