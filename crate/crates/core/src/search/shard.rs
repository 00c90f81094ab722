//! Budgeted execution of independent search shards.
//!
//! Shards run in parallel but are merged in shard order. Shard `s` counts
//! only if every earlier shard counted and the running node total stays within
//! the budget, which is exactly what a sequential run with a shrinking budget
//! would do. Reports therefore do not depend on the worker count.

use rayon::prelude::*;

use super::report::{Findings, PruneStats};
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Result of running one shard under a node cap.
#[derive(Default)]
pub(crate) struct ShardOutcome {
    pub nodes: u64,
    /// False if the cap was hit.
    pub completed: bool,
    pub stats: PruneStats,
    pub found: Vec<Pattern>,
}

/// Runs every shard with at most `budget` nodes and merges the outcomes into
/// `findings`, which may already hold work done before sharding.
pub(crate) fn run_shards<S, F>(
    shards: &[S],
    workers: usize,
    findings: &mut Findings,
    budget: u64,
    run: F,
) -> Result<()>
where
    S: Sync,
    F: Fn(&S, u64) -> Result<ShardOutcome> + Sync,
{
    if !findings.completed {
        return Ok(());
    }
    let remaining = budget.saturating_sub(findings.nodes);
    let outcomes: Vec<Result<ShardOutcome>> = if workers <= 1 {
        let mut out = Vec::with_capacity(shards.len());
        let mut used = 0u64;
        for shard in shards {
            let o = run(shard, remaining - used);
            let stop = match &o {
                Ok(o) => {
                    used += o.nodes;
                    !o.completed
                }
                Err(_) => true,
            };
            out.push(o);
            if stop {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::domain(format!("cannot start {workers} workers: {e}")))?;
        pool.install(|| shards.par_iter().map(|s| run(s, remaining)).collect())
    };

    let mut used = 0u64;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let o = outcome?;
        if !o.completed || used + o.nodes > remaining {
            findings.completed = false;
            findings.nodes = budget;
            return Ok(());
        }
        used += o.nodes;
        findings.stats.absorb(&o.stats);
        findings.found.extend(o.found);
        if i + 1 == shards.len() {
            break;
        }
    }
    findings.nodes += used;
    Ok(())
}
