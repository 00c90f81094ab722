//! Patterns assembled from the catalog of normal 0-1 matrices.
//!
//! A pattern is a partition of the grid into classes whose coefficient
//! matrices are normal and pairwise satisfy the coefficient condition. For an
//! occupancy profile (the multiset of class sizes), a class of the smallest
//! size is fixed to a canonical representative of its similarity class, and
//! the rest of the grid is covered exactly, always covering the first
//! uncovered cell next.

use std::collections::BTreeMap;

use super::report::{finish_report, Findings, PruneStats, Rule};
use super::shard::{run_shards, ShardOutcome};
use super::{SearchConfig, SearchReport, MAX_SEARCH_ORDER};
use crate::canon::canonical_form;
use crate::classify::{classify_normal_binary, normal_masks};
use crate::error::{Error, Result};
use crate::normality::{is_normal_cells, pair_condition_bits};
use crate::pattern::Pattern;

const MAX_CELLS: usize = MAX_SEARCH_ORDER * MAX_SEARCH_ORDER;

/// Occupancy profiles of an order-`n` grid: non-increasing lists of at least
/// `min_classes` sizes, each at least `min_class_size`, summing to `n²`.
pub fn occupancy_profiles(n: usize, min_classes: usize, min_class_size: usize) -> Vec<Vec<usize>> {
    fn extend(rest: usize, largest: usize, floor: usize, min_parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= min_parts {
                out.push(cur.clone());
            }
            return;
        }
        for part in (floor..=largest.min(rest)).rev() {
            cur.push(part);
            extend(rest - part, part, floor, min_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let floor = min_class_size.max(1);
    extend(n * n, n * n, floor, min_classes, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy)]
struct Block {
    mask: u32,
    rows: [u32; MAX_SEARCH_ORDER],
    cols: [u32; MAX_SEARCH_ORDER],
}

impl Block {
    fn new(n: usize, mask: u32) -> Self {
        let mut rows = [0u32; MAX_SEARCH_ORDER];
        let mut cols = [0u32; MAX_SEARCH_ORDER];
        let mut bits = mask;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            rows[t / n] |= 1 << (t % n);
            cols[t % n] |= 1 << (t / n);
        }
        Block { mask, rows, cols }
    }

    fn compatible(&self, other: &Block, n: usize) -> bool {
        pair_condition_bits(&self.rows[..n], &self.cols[..n], &other.rows[..n], &other.cols[..n])
    }
}

/// Normal blocks of one size, grouped by their lowest cell.
type SizeIndex = Vec<Vec<Block>>;

struct Job {
    profile_index: usize,
    first: Block,
}

struct Coverer<'a> {
    n: usize,
    require_nonsymmetric: bool,
    /// Indexed by block size.
    catalog: &'a BTreeMap<usize, SizeIndex>,
    /// Blocks still to place, by size.
    remaining: BTreeMap<usize, usize>,
    placed: Vec<Block>,
    nodes: u64,
    cap: u64,
    stats: PruneStats,
    found: Vec<Pattern>,
}

impl Coverer<'_> {
    fn leaf(&mut self) -> Result<()> {
        let n = self.n;
        let mut cells = [0u8; MAX_CELLS];
        for (label, b) in self.placed.iter().enumerate() {
            let mut bits = b.mask;
            while bits != 0 {
                cells[bits.trailing_zeros() as usize] = label as u8;
                bits &= bits - 1;
            }
        }
        let p = Pattern::from_small_labels(n, cells[..n * n].iter().map(|&c| u16::from(c)));
        if self.require_nonsymmetric && p.is_symmetric() {
            self.stats.hit(Rule::Symmetric);
        } else if !is_normal_cells(n, &cells[..n * n], self.placed.len()) {
            self.stats.hit(Rule::NotNormal);
        } else {
            self.found.push(canonical_form(&p)?);
        }
        Ok(())
    }

    /// `Ok(false)` when the node cap is exceeded.
    fn dfs(&mut self, covered: u32) -> Result<bool> {
        let full = (1u32 << (self.n * self.n)) - 1;
        if covered == full {
            self.leaf()?;
            return Ok(true);
        }
        let cell = (!covered).trailing_zeros() as usize;
        let sizes: Vec<usize> = self.remaining.iter().filter(|(_, &c)| c > 0).map(|(&s, _)| s).collect();
        for size in sizes {
            let catalog = self.catalog;
            for block in &catalog[&size][cell] {
                if block.mask & covered != 0 {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.cap {
                    return Ok(false);
                }
                if !self.placed.iter().all(|p| p.compatible(block, self.n)) {
                    self.stats.hit(Rule::PairCondition);
                    continue;
                }
                *self.remaining.get_mut(&size).unwrap() -= 1;
                self.placed.push(*block);
                let keep_going = self.dfs(covered | block.mask)?;
                self.placed.pop();
                *self.remaining.get_mut(&size).unwrap() += 1;
                if !keep_going {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn size_index(n: usize, size: usize) -> Result<SizeIndex> {
    let mut index = vec![Vec::new(); n * n];
    for mask in normal_masks(n, size)? {
        index[mask.trailing_zeros() as usize].push(Block::new(n, mask as u32));
    }
    Ok(index)
}

fn run_profiles(config: &SearchConfig, profiles: &[Vec<usize>]) -> Result<SearchReport> {
    config.validate(MAX_SEARCH_ORDER)?;
    let n = config.order;
    let mut catalog = BTreeMap::new();
    let mut jobs = Vec::new();
    for (profile_index, profile) in profiles.iter().enumerate() {
        if profile.iter().sum::<usize>() != n * n || profile.contains(&0) {
            return Err(Error::domain(format!("profile {profile:?} does not partition {} cells", n * n)));
        }
        for &size in profile {
            if let std::collections::btree_map::Entry::Vacant(e) = catalog.entry(size) {
                e.insert(size_index(n, size)?);
            }
        }
        let smallest = *profile.iter().min().expect("profiles are non-empty");
        for class in classify_normal_binary(n, smallest)?.classes {
            let mask = class.key.iter().enumerate().fold(0u32, |acc, (t, &b)| acc | (u32::from(b) << t));
            jobs.push(Job {
                profile_index,
                first: Block::new(n, mask),
            });
        }
    }

    let mut findings = Findings {
        completed: true,
        ..Findings::default()
    };
    run_shards(&jobs, config.worker_count, &mut findings, config.node_budget, |job, cap| {
        let profile = &profiles[job.profile_index];
        let mut remaining = BTreeMap::new();
        for &s in profile {
            *remaining.entry(s).or_insert(0) += 1;
        }
        *remaining.get_mut(&job.first.mask.count_ones().try_into().unwrap()).unwrap() -= 1;
        let mut c = Coverer {
            n,
            require_nonsymmetric: config.require_nonsymmetric,
            catalog: &catalog,
            remaining,
            placed: vec![job.first],
            nodes: 0,
            cap,
            stats: PruneStats::default(),
            found: Vec::new(),
        };
        let completed = c.dfs(job.first.mask)?;
        Ok(ShardOutcome {
            nodes: c.nodes,
            completed,
            stats: c.stats,
            found: c.found,
        })
    })?;
    finish_report(config, findings)
}

/// Catalog cover over every occupancy profile with at least `min_classes`
/// classes of at least `min_class_size` cells each.
pub fn catalog_cover_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate(MAX_SEARCH_ORDER)?;
    let profiles = occupancy_profiles(config.order, config.min_classes, config.min_class_size);
    run_profiles(config, &profiles)
}

/// Catalog cover restricted to one occupancy profile (sizes in any order).
pub fn catalog_cover_profile(config: &SearchConfig, profile: &[usize]) -> Result<SearchReport> {
    let mut sorted = profile.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    run_profiles(config, &[sorted])
}
