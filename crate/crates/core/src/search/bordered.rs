//! Search restricted to bordered forms around a class with one or two cells.
//!
//! Every normal pattern with such a class is similar to
//! `[[C1, C2], [C2ᵀ, B]]` where `C1` is a symmetric `h × h` head holding the
//! class exclusively and `B` is normal. Given `B`, the pattern is normal
//! exactly when `C2 B = C2 Bᵀ` holds symbolically, which is checked one head
//! row at a time as soon as that row's border is filled.

use super::grid::{walk_grid, GridSpec};
use super::report::{finish_report, Findings, PruneStats, Rule};
use super::shard::{run_shards, ShardOutcome};
use super::{SearchConfig, SearchReport, MAX_SEARCH_ORDER};
use crate::canon::canonical_form;
use crate::constructions::BorderedFormKind;
use crate::error::{Error, Result};
use crate::normality::is_normal_cells;
use crate::pattern::Pattern;

const FORMS: [BorderedFormKind; 3] = [
    BorderedFormKind::Single,
    BorderedFormKind::DiagonalPair,
    BorderedFormKind::OffDiagonalPair,
];

fn head_size(kind: BorderedFormKind) -> usize {
    match kind {
        BorderedFormKind::Single => 1,
        _ => 2,
    }
}

/// Head cells holding the exclusive class, and free head slots.
fn head_layout(kind: BorderedFormKind, n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    match kind {
        BorderedFormKind::Single => (vec![0], vec![]),
        BorderedFormKind::DiagonalPair => (vec![0, n + 1], vec![vec![1, n]]),
        BorderedFormKind::OffDiagonalPair => (vec![1, n], vec![vec![0], vec![n + 1]]),
    }
}

struct Job {
    kind: BorderedFormKind,
    tail: Vec<u8>,
    tail_classes: usize,
}

struct Filler<'a> {
    n: usize,
    h: usize,
    min_classes: usize,
    exclusive: u8,
    slots: &'a [Vec<usize>],
    /// Head row whose border is complete after the slot at the same index.
    row_checks: &'a [Option<usize>],
    cells: [u8; 25],
    next: usize,
    nodes: u64,
    cap: u64,
    stats: PruneStats,
    found: Vec<Pattern>,
}

impl Filler<'_> {
    /// `C2 B = C2 Bᵀ` in row `p`, comparing multisets of unordered monomials.
    fn row_condition(&self, p: usize) -> bool {
        let (n, h) = (self.n, self.h);
        let m = n - h;
        let at = |i: usize, j: usize| self.cells[i * n + j];
        let mono = |a: u8, b: u8| if a <= b { (a, b) } else { (b, a) };
        for q in h..n {
            let mut lhs = [(0u8, 0u8); MAX_SEARCH_ORDER];
            let mut rhs = [(0u8, 0u8); MAX_SEARCH_ORDER];
            for r in h..n {
                let v = at(p, r);
                lhs[r - h] = mono(v, at(r, q));
                rhs[r - h] = mono(v, at(q, r));
            }
            lhs[..m].sort_unstable();
            rhs[..m].sort_unstable();
            if lhs[..m] != rhs[..m] {
                return false;
            }
        }
        true
    }

    fn leaf(&mut self) -> Result<()> {
        let len = self.n * self.n;
        if !is_normal_cells(self.n, &self.cells[..len], self.next) {
            self.stats.hit(Rule::NotNormal);
            return Ok(());
        }
        let p = Pattern::from_small_labels(self.n, self.cells[..len].iter().map(|&c| u16::from(c)));
        self.found.push(canonical_form(&p)?);
        Ok(())
    }

    /// `Ok(false)` when the node cap is exceeded.
    fn dfs(&mut self, s: usize) -> Result<bool> {
        if s == self.slots.len() {
            self.leaf()?;
            return Ok(true);
        }
        for v in 0..=self.next {
            if v as u8 == self.exclusive {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Ok(false);
            }
            for &cell in &self.slots[s] {
                self.cells[cell] = v as u8;
            }
            let fresh = v == self.next;
            if fresh {
                self.next += 1;
            }
            let remaining = self.slots.len() - s - 1;
            let mut descend = true;
            if self.next + remaining < self.min_classes {
                self.stats.hit(Rule::ClassBound);
                descend = false;
            } else if let Some(p) = self.row_checks[s] {
                if !self.row_condition(p) {
                    self.stats.hit(Rule::BorderCondition);
                    descend = false;
                }
            }
            let keep_going = !descend || self.dfs(s + 1)?;
            if fresh {
                self.next -= 1;
            }
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn fill_job(config: &SearchConfig, job: &Job, cap: u64) -> Result<ShardOutcome> {
    let n = config.order;
    let h = head_size(job.kind);
    let m = n - h;
    let (exclusive_cells, head_slots) = head_layout(job.kind, n);
    let exclusive = job.tail_classes as u8;

    let mut slots = Vec::new();
    let mut row_checks = Vec::new();
    for p in 0..h {
        for r in h..n {
            slots.push(vec![p * n + r, r * n + p]);
            row_checks.push(if r == n - 1 { Some(p) } else { None });
        }
    }
    for s in head_slots {
        slots.push(s);
        row_checks.push(None);
    }

    let mut cells = [0u8; 25];
    for i in 0..m {
        for j in 0..m {
            cells[(h + i) * n + h + j] = job.tail[i * m + j];
        }
    }
    for c in exclusive_cells {
        cells[c] = exclusive;
    }
    let mut f = Filler {
        n,
        h,
        min_classes: config.min_classes,
        exclusive,
        slots: &slots,
        row_checks: &row_checks,
        cells,
        next: job.tail_classes + 1,
        nodes: 0,
        cap,
        stats: PruneStats::default(),
        found: Vec::new(),
    };
    let completed = f.dfs(0)?;
    Ok(ShardOutcome {
        nodes: f.nodes,
        completed,
        stats: f.stats,
        found: f.found,
    })
}

/// Every pattern (orders up to 5) that has a class with one or two cells and
/// at least `min_classes` classes, found through its bordered forms. Patterns
/// whose classes all have three or more cells are out of scope.
pub fn bordered_forms_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate(MAX_SEARCH_ORDER)?;
    let n = config.order;
    let mut findings = Findings {
        completed: true,
        ..Findings::default()
    };
    let mut jobs = Vec::new();
    for kind in FORMS {
        let h = head_size(kind);
        if h > n {
            continue;
        }
        let m = n - h;
        let head_classes = match kind {
            BorderedFormKind::Single => 1,
            BorderedFormKind::DiagonalPair => 2,
            BorderedFormKind::OffDiagonalPair => 3,
        };
        if m == 0 {
            if !config.require_nonsymmetric {
                jobs.push(Job { kind, tail: Vec::new(), tail_classes: 0 });
            }
            continue;
        }
        let spec = GridSpec {
            order: m,
            min_classes: config.min_classes.saturating_sub(head_classes + h * m),
            require_nonsymmetric: config.require_nonsymmetric,
            symmetry_reduction: true,
        };
        let tails = walk_grid(spec, 2 * m, config.node_budget, config.worker_count, &mut findings)?;
        if !findings.completed {
            return finish_report(config, findings);
        }
        for tail in tails {
            let tail_classes = tail.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
            jobs.push(Job { kind, tail, tail_classes });
        }
    }
    run_shards(&jobs, config.worker_count, &mut findings, config.node_budget, |job, cap| {
        fill_job(config, job, cap)
    })?;
    finish_report(config, findings)
}

/// Bordered-form search for `min_classes = k` with `3k > n²`, where some class
/// must have at most two cells, so the search covers every pattern.
pub fn lemma6_reduction_search(config: &SearchConfig) -> Result<SearchReport> {
    let n = config.order;
    if 3 * config.min_classes <= n * n {
        return Err(Error::domain(format!(
            "the bordered-form reduction needs 3k > n², got k = {} and n = {n}",
            config.min_classes
        )));
    }
    bordered_forms_search(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{pruned_search, Strategy};

    fn cfg(n: usize, k: usize) -> SearchConfig {
        SearchConfig::new(n, Strategy::Lemma6Reduction).min_classes(k)
    }

    #[test]
    fn nothing_above_the_bound() {
        for (n, k) in [(3, 4), (4, 6), (5, 9)] {
            let r = lemma6_reduction_search(&cfg(n, k)).unwrap();
            assert!(r.completed);
            assert_eq!(r.max_classes_found, None, "n={n} k={k}");
        }
    }

    #[test]
    fn precondition_is_enforced() {
        assert!(matches!(lemma6_reduction_search(&cfg(4, 5)), Err(Error::Domain(_))));
        assert!(matches!(lemma6_reduction_search(&cfg(3, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn agrees_with_pruned_search_on_small_classes() {
        // every pattern with >= 4 classes in order 3 has a class of size <= 2
        for nonsym in [true, false] {
            let b = bordered_forms_search(&cfg(3, 4).nonsymmetric(nonsym)).unwrap();
            let p = pruned_search(&SearchConfig::new(3, Strategy::PrunedDfs).min_classes(4).nonsymmetric(nonsym))
                .unwrap();
            assert_eq!(b.counts_by_k, p.counts_by_k);
            assert_eq!(b.witness_keys(), p.witness_keys());
        }
    }

    #[test]
    fn finds_extremal_order_four_among_small_class_patterns() {
        let r = bordered_forms_search(&cfg(4, 5)).unwrap();
        assert_eq!(r.max_classes_found, Some(5));
        assert_eq!(r.counts_by_k[&5], 1);
    }
}
