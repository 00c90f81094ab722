//! Exhaustive and pruned searches over entry patterns of small order.
//!
//! Four strategies share one report format:
//!
//! * `exhaustive-rgs` walks every restricted-growth string of length `n²`
//!   (orders up to 3).
//! * `pruned-dfs` walks restricted-growth strings depth first with row/column
//!   balance pruning, a class-count bound, and prefix-minimality pruning under
//!   simultaneous permutations, so each similarity class is reached once.
//! * `lemma6-reduction` enumerates only the bordered forms around a class
//!   with one or two cells, which covers every pattern once `3k > n²`.
//! * `catalog-cover` assembles patterns from normal 0-1 matrices that cover
//!   the grid exactly and satisfy the pairwise coefficient condition, with the
//!   smallest class pinned to a canonical representative.
//!
//! [`verify_theorem`] combines them into a verdict on the class-count bound
//! and uniqueness of the extremal pattern.

mod bordered;
mod cover;
mod exhaustive;
mod grid;
mod report;
mod shard;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bordered::{bordered_forms_search, lemma6_reduction_search};
pub use cover::{catalog_cover_profile, catalog_cover_search, occupancy_profiles};
pub use exhaustive::{exhaustive_search, restricted_growth_strings};
pub use grid::pruned_search;
pub use report::SearchReport;
pub use verify::{verify_theorem, StratumEvidence, Verdict, VerifyReport};

/// Largest order any search strategy accepts.
pub const MAX_SEARCH_ORDER: usize = 5;

/// Largest order for the exhaustive sweep.
pub const MAX_EXHAUSTIVE_ORDER: usize = 3;

/// Witnesses retained per class count; counts are always exact.
pub const WITNESS_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ExhaustiveRgs,
    PrunedDfs,
    Lemma6Reduction,
    CatalogCover,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::ExhaustiveRgs => "exhaustive-rgs",
            Strategy::PrunedDfs => "pruned-dfs",
            Strategy::Lemma6Reduction => "lemma6-reduction",
            Strategy::CatalogCover => "catalog-cover",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive-rgs" => Ok(Strategy::ExhaustiveRgs),
            "pruned-dfs" => Ok(Strategy::PrunedDfs),
            "lemma6-reduction" => Ok(Strategy::Lemma6Reduction),
            "catalog-cover" => Ok(Strategy::CatalogCover),
            other => Err(Error::domain(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub order: usize,
    /// Only patterns with at least this many classes are reported.
    pub min_classes: usize,
    pub require_nonsymmetric: bool,
    /// Node expansions allowed before the search gives up (`completed = false`).
    pub node_budget: u64,
    pub strategy: Strategy,
    pub worker_count: usize,
    /// Seeds the sampled merge checks run on witnesses.
    pub seed: Option<u64>,
    /// Catalog cover only: every class must have at least this many cells.
    pub min_class_size: usize,
    /// Pruned DFS only: prefix-minimality pruning. Results do not depend on it.
    pub symmetry_reduction: bool,
}

impl SearchConfig {
    pub fn new(order: usize, strategy: Strategy) -> Self {
        SearchConfig {
            order,
            min_classes: 1,
            require_nonsymmetric: true,
            node_budget: 2_000_000_000,
            strategy,
            worker_count: 1,
            seed: None,
            min_class_size: 1,
            symmetry_reduction: true,
        }
    }

    pub fn min_classes(mut self, k: usize) -> Self {
        self.min_classes = k;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.worker_count = workers;
        self
    }

    pub fn nonsymmetric(mut self, required: bool) -> Self {
        self.require_nonsymmetric = required;
        self
    }

    pub fn min_class_size(mut self, cells: usize) -> Self {
        self.min_class_size = cells;
        self
    }

    pub fn symmetry_reduction(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub(crate) fn validate(&self, max_order: usize) -> Result<()> {
        if self.node_budget == 0 {
            return Err(Error::domain("node budget must be positive"));
        }
        if self.order == 0 {
            return Err(Error::domain("order must be positive"));
        }
        if self.order > max_order {
            return Err(Error::capacity(format!(
                "strategy {} supports orders up to {max_order}, got {}",
                self.strategy.name(),
                self.order
            )));
        }
        if self.min_class_size == 0 {
            return Err(Error::domain("minimum class size must be positive"));
        }
        Ok(())
    }
}

/// Runs the strategy named in the configuration.
pub fn run_search(config: &SearchConfig) -> Result<SearchReport> {
    match config.strategy {
        Strategy::ExhaustiveRgs => exhaustive_search(config),
        Strategy::PrunedDfs => pruned_search(config),
        Strategy::Lemma6Reduction => lemma6_reduction_search(config),
        Strategy::CatalogCover => catalog_cover_search(config),
    }
}
