//! Depth-first enumeration of restricted-growth strings on an `n × n` grid.
//!
//! Cells are filled in row-major order. Each assignment updates, for every
//! line `p`, the per-class difference between off-diagonal occurrences in row
//! `p` and in column `p`. A normal pattern needs every difference to end at
//! zero, so a line is infeasible once the total shortfall exceeds the
//! unfilled cells of its row or the total excess exceeds the unfilled cells
//! of its column.
//!
//! Prefix minimality: for a simultaneous permutation `τ`, the relabeled
//! string of `P(τa, τb)` is compared with the current prefix cell by cell
//! while both sides are filled. If it is ever smaller, no completion is the
//! lexicographically least member of its class. Permutations that compared
//! greater are dropped for the whole subtree.

use super::report::{finish_report, Findings, PruneStats, Rule};
use super::shard::{run_shards, ShardOutcome};
use super::{SearchConfig, SearchReport, MAX_SEARCH_ORDER};
use crate::canon::all_permutations;
use crate::error::Result;
use crate::normality::is_normal_cells;
use crate::pattern::Pattern;

const MAX_CELLS: usize = MAX_SEARCH_ORDER * MAX_SEARCH_ORDER;

#[derive(Clone, Copy, Debug)]
pub(crate) struct GridSpec {
    pub order: usize,
    pub min_classes: usize,
    pub require_nonsymmetric: bool,
    pub symmetry_reduction: bool,
}

/// Source cell of every target cell under every non-identity permutation.
fn source_maps(n: usize) -> Vec<[u8; MAX_CELLS]> {
    all_permutations(n)
        .into_iter()
        .skip(1)
        .map(|tau| {
            let mut src = [0u8; MAX_CELLS];
            for t in 0..n * n {
                src[t] = (tau[t / n] * n + tau[t % n]) as u8;
            }
            src
        })
        .collect()
}

struct Walker<'a> {
    spec: GridSpec,
    src: &'a [[u8; MAX_CELLS]],
    len: usize,
    stop: usize,
    cells: [u8; MAX_CELLS],
    classes: usize,
    diff: [[i8; MAX_CELLS + 1]; MAX_SEARCH_ORDER],
    surplus: [u8; MAX_SEARCH_ORDER],
    deficit: [u8; MAX_SEARCH_ORDER],
    rem_row: [u8; MAX_SEARCH_ORDER],
    rem_col: [u8; MAX_SEARCH_ORDER],
    /// Permutations whose comparison with the prefix is still undecided.
    alive: [u128; MAX_CELLS + 1],
    nodes: u64,
    cap: u64,
    stats: PruneStats,
    out: Vec<Vec<u8>>,
}

impl<'a> Walker<'a> {
    fn new(spec: GridSpec, src: &'a [[u8; MAX_CELLS]], stop: usize, cap: u64) -> Self {
        let n = spec.order;
        let mut alive = [0u128; MAX_CELLS + 1];
        alive[0] = if src.len() >= 128 { u128::MAX } else { (1u128 << src.len()) - 1 };
        Walker {
            spec,
            src,
            len: n * n,
            stop,
            cells: [0; MAX_CELLS],
            classes: 0,
            diff: [[0; MAX_CELLS + 1]; MAX_SEARCH_ORDER],
            surplus: [0; MAX_SEARCH_ORDER],
            deficit: [0; MAX_SEARCH_ORDER],
            rem_row: [n.saturating_sub(1) as u8; MAX_SEARCH_ORDER],
            rem_col: [n.saturating_sub(1) as u8; MAX_SEARCH_ORDER],
            alive,
            nodes: 0,
            cap,
            stats: PruneStats::default(),
            out: Vec::new(),
        }
    }

    /// Writes label `c` at cell `t`; returns whether `c` opened a new class.
    fn assign(&mut self, t: usize, c: u8) -> bool {
        let n = self.spec.order;
        let fresh = c as usize == self.classes;
        if fresh {
            self.classes += 1;
        }
        self.cells[t] = c;
        let (i, j, c) = (t / n, t % n, c as usize);
        if i != j {
            let d = &mut self.diff[i][c];
            if *d >= 0 {
                self.surplus[i] += 1;
            } else {
                self.deficit[i] -= 1;
            }
            *d += 1;
            let d = &mut self.diff[j][c];
            if *d <= 0 {
                self.deficit[j] += 1;
            } else {
                self.surplus[j] -= 1;
            }
            *d -= 1;
            self.rem_row[i] -= 1;
            self.rem_col[j] -= 1;
        }
        fresh
    }

    fn unassign(&mut self, t: usize, fresh: bool) {
        let n = self.spec.order;
        let (i, j, c) = (t / n, t % n, self.cells[t] as usize);
        if i != j {
            self.rem_row[i] += 1;
            self.rem_col[j] += 1;
            let d = &mut self.diff[i][c];
            *d -= 1;
            if *d >= 0 {
                self.surplus[i] -= 1;
            } else {
                self.deficit[i] += 1;
            }
            let d = &mut self.diff[j][c];
            *d += 1;
            if *d <= 0 {
                self.deficit[j] -= 1;
            } else {
                self.surplus[j] += 1;
            }
        }
        if fresh {
            self.classes -= 1;
        }
    }

    fn balanced(&self, t: usize) -> bool {
        let n = self.spec.order;
        let line_ok = |p: usize| self.deficit[p] <= self.rem_row[p] && self.surplus[p] <= self.rem_col[p];
        line_ok(t / n) && line_ok(t % n)
    }

    /// `None` if some permutation yields a smaller prefix of length `filled`;
    /// otherwise the permutations still undecided.
    fn minimal_prefix(&self, filled: usize, candidates: u128) -> Option<u128> {
        let mut alive = 0u128;
        let mut bits = candidates;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let src = &self.src[b];
            let mut map = [u8::MAX; MAX_CELLS + 1];
            let mut next = 0u8;
            let mut t = 0;
            loop {
                if t == filled || src[t] as usize >= filled {
                    alive |= 1 << b;
                    break;
                }
                let v = self.cells[src[t] as usize] as usize;
                if map[v] == u8::MAX {
                    map[v] = next;
                    next += 1;
                }
                if map[v] < self.cells[t] {
                    return None;
                }
                if map[v] > self.cells[t] {
                    break;
                }
                t += 1;
            }
        }
        Some(alive)
    }

    fn is_symmetric(&self) -> bool {
        let n = self.spec.order;
        (0..n).all(|i| (i + 1..n).all(|j| self.cells[i * n + j] == self.cells[j * n + i]))
    }

    fn leaf(&mut self) {
        let all = self.alive[0];
        if self.spec.require_nonsymmetric && self.is_symmetric() {
            self.stats.hit(Rule::Symmetric);
        } else if !self.spec.symmetry_reduction && self.minimal_prefix(self.len, all).is_none() {
            self.stats.hit(Rule::NotCanonical);
        } else if !is_normal_cells(self.spec.order, &self.cells[..self.len], self.classes) {
            self.stats.hit(Rule::NotNormal);
        } else {
            self.out.push(self.cells[..self.len].to_vec());
        }
    }

    /// Returns false when the node cap is exceeded.
    fn dfs(&mut self, t: usize) -> bool {
        if t == self.stop {
            if t == self.len {
                self.leaf();
            } else {
                self.out.push(self.cells[..t].to_vec());
            }
            return true;
        }
        for c in 0..=self.classes.min(MAX_CELLS - 1) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return false;
            }
            let fresh = self.assign(t, c as u8);
            let mut descend = false;
            if !self.balanced(t) {
                self.stats.hit(Rule::Eq3);
            } else if self.classes + (self.len - t - 1) < self.spec.min_classes {
                self.stats.hit(Rule::ClassBound);
            } else if self.spec.symmetry_reduction {
                match self.minimal_prefix(t + 1, self.alive[t]) {
                    None => self.stats.hit(Rule::Symmetry),
                    Some(a) => {
                        self.alive[t + 1] = a;
                        descend = true;
                    }
                }
            } else {
                descend = true;
            }
            if descend && !self.dfs(t + 1) {
                self.unassign(t, fresh);
                return false;
            }
            self.unassign(t, fresh);
        }
        true
    }

    /// Re-applies a prefix produced by an earlier walk with the same spec.
    fn replay(&mut self, prefix: &[u8]) {
        for (t, &c) in prefix.iter().enumerate() {
            self.assign(t, c);
            if self.spec.symmetry_reduction {
                self.alive[t + 1] = self.minimal_prefix(t + 1, self.alive[t]).unwrap_or(0);
            }
        }
    }
}

/// Enumerates the canonical normal patterns matching `spec`, sharded on
/// prefixes of length `shard_depth`. Leaves are added to `findings` as raw
/// label strings.
pub(crate) fn walk_grid(
    spec: GridSpec,
    shard_depth: usize,
    budget: u64,
    workers: usize,
    findings: &mut Findings,
) -> Result<Vec<Vec<u8>>> {
    let len = spec.order * spec.order;
    let src = source_maps(spec.order);
    let stop = shard_depth.min(len);
    let cap = budget.saturating_sub(findings.nodes);
    let mut head = Walker::new(spec, &src, stop, cap);
    if !head.dfs(0) {
        findings.completed = false;
        findings.nodes = budget;
        return Ok(Vec::new());
    }
    findings.nodes += head.nodes;
    findings.stats.absorb(&head.stats);
    if stop == len {
        return Ok(head.out);
    }

    let mut shard_findings = Findings {
        nodes: findings.nodes,
        completed: true,
        ..Findings::default()
    };
    run_shards(&head.out, workers, &mut shard_findings, budget, |prefix, cap| {
        let mut w = Walker::new(spec, &src, len, cap);
        w.replay(prefix);
        let completed = w.dfs(prefix.len());
        Ok(ShardOutcome {
            nodes: w.nodes,
            completed,
            stats: w.stats,
            found: w
                .out
                .into_iter()
                .map(|cells| Pattern::from_small_labels(spec.order, cells.into_iter().map(u16::from)))
                .collect(),
        })
    })?;
    findings.nodes = shard_findings.nodes;
    findings.completed = shard_findings.completed;
    findings.stats.absorb(&shard_findings.stats);
    Ok(shard_findings
        .found
        .into_iter()
        .map(|p| p.cells().iter().map(|&c| c as u8).collect())
        .collect())
}

/// Pruned depth-first search (orders up to 5). Every similarity class is
/// produced exactly once, as its canonical form.
pub fn pruned_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate(MAX_SEARCH_ORDER)?;
    let n = config.order;
    let spec = GridSpec {
        order: n,
        min_classes: config.min_classes,
        require_nonsymmetric: config.require_nonsymmetric,
        symmetry_reduction: config.symmetry_reduction,
    };
    let mut findings = Findings {
        completed: true,
        ..Findings::default()
    };
    let leaves = walk_grid(spec, 2 * n, config.node_budget, config.worker_count, &mut findings)?;
    findings.found = leaves
        .into_iter()
        .map(|cells| Pattern::from_small_labels(n, cells.into_iter().map(u16::from)))
        .collect();
    finish_report(config, findings)
}
