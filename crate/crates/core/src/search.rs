//! Exact `sat` and `w-sat` on small square hosts.
//!
//! Copy-free graphs are generated level by level (level `m` holds one
//! representative per isomorphism class with `m` edges), each level obtained
//! by adding every admissible edge to every graph of the previous level and
//! keeping canonical representatives. Every copy-free graph has a copy-free
//! subgraph with one edge fewer, so the levels are complete. The first level
//! holding a graph with the wanted property gives the minimum.
//!
//! For `sat`, a greedy saturation gives an upper bound `U`, and a graph with
//! `m` edges is dropped when `m` plus its degree deficit exceeds `U`: every
//! vertex of a saturated graph is full or meets the degree floor, and each
//! added edge lowers the deficit of one side by at most one.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::biclique::{
    creates_copy, greedy_saturate, is_free, is_saturated, weak_saturation, Orientation, SatParams,
};
use crate::bounds::{self, BoundKind};
use crate::canon::{canonical_form, CanonicalForm, SideMode};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Sat,
    Wsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Witnesses kept; `None` keeps all minimum classes.
    pub witness_cap: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Refuse when the estimated work exceeds `2^log2_budget`.
    pub log2_budget: u32,
    /// Skip saturation tests below `theorem_lower` (unordered, `n >= t`).
    /// Off by default so that search stays an independent check of that bound.
    pub theorem_cutoff: bool,
    /// Greedy saturations tried for the upper bound.
    pub greedy_seeds: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            witness_cap: Some(3),
            jobs: None,
            log2_budget: 26,
            theorem_cutoff: false,
            greedy_seeds: 8,
        }
    }
}

impl SearchConfig {
    pub fn with_witness_cap(mut self, cap: Option<usize>) -> Self {
        self.witness_cap = cap;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Children produced before isomorph rejection.
    pub generated: u64,
    /// Distinct isomorphism classes kept over all levels.
    pub classes: u64,
    /// Classes dropped by the degree-deficit bound.
    pub pruned: u64,
    /// Saturation (or percolation) tests run.
    pub tests: u64,
    /// Deepest level built.
    pub levels: usize,
}

fn bmat_list<S: Serializer>(gs: &[BipartiteGraph], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(gs.iter().map(|g| g.to_bmat()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    pub params: SatParams,
    pub host: (usize, usize),
    /// Least edge count with the property, `None` if no graph has it.
    pub minimum: Option<usize>,
    /// Canonical representatives of minimum classes, ordered by key.
    #[serde(serialize_with = "bmat_list")]
    pub witnesses: Vec<BipartiteGraph>,
    /// Number of non-isomorphic minimum graphs.
    pub witness_classes: usize,
    pub upper_bound: Option<usize>,
    pub stats: SearchStats,
}

fn side_mode(params: SatParams) -> SideMode {
    match params.orientation() {
        Orientation::Ordered => SideMode::FixedSides,
        Orientation::Unordered => SideMode::SwappableSides,
    }
}

fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

/// `log2` of the estimated work: classes of `n x n` graphs times `n²` expansions.
pub fn estimate_log2(n: usize, params: SatParams) -> f64 {
    let swap = match params.orientation() {
        Orientation::Ordered => 0.0,
        Orientation::Unordered => 1.0,
    };
    let n2 = (n * n) as f64;
    (n2 - 2.0 * log2_factorial(n) - swap + n2.log2()).max(0.0)
}

fn check_feasible(n: usize, params: SatParams, config: &SearchConfig) -> Result<()> {
    let est = estimate_log2(n, params);
    if est > config.log2_budget as f64 {
        return Err(Error::Infeasible {
            log2_estimate: est.ceil() as u32,
            log2_budget: config.log2_budget,
        });
    }
    Ok(())
}

fn deficit(g: &BipartiteGraph, floor: (usize, usize)) -> usize {
    let short = |degs: Vec<usize>, f: usize| degs.into_iter().map(|d| f.saturating_sub(d)).sum();
    let l: usize = short(g.left_degrees(), floor.0);
    let r: usize = short(g.right_degrees(), floor.1);
    l.max(r)
}

type Level = BTreeMap<CanonicalForm, BipartiteGraph>;

fn expand(
    parent: &BipartiteGraph,
    params: SatParams,
    mode: SideMode,
) -> Result<Vec<CanonicalForm>> {
    parent
        .non_edges()
        .filter(|&(u, v)| !creates_copy(parent, u, v, params).expect("non-edge"))
        .map(|(u, v)| {
            let mut child = parent.clone();
            child.insert(u, v);
            canonical_form(&child, mode)
        })
        .collect()
}

struct Run<'a> {
    n: usize,
    params: SatParams,
    config: &'a SearchConfig,
    mode: SearchMode,
}

impl Run<'_> {
    fn upper_bound(&self) -> Result<Option<usize>> {
        let empty = BipartiteGraph::new(self.n, self.n)?;
        let best = (0..self.config.greedy_seeds.max(1))
            .map(|seed| greedy_saturate(&empty, self.params, seed).map(|g| g.edge_count()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min();
        Ok(best)
    }

    fn accepts(&self, g: &BipartiteGraph) -> bool {
        match self.mode {
            SearchMode::Sat => is_saturated(g, self.params).is_saturated(),
            SearchMode::Wsat => weak_saturation(g, self.params).percolates,
        }
    }

    fn go(&self) -> Result<SearchOutcome> {
        let (n, params) = (self.n, self.params);
        check_feasible(n, params, self.config)?;
        let mode = side_mode(params);
        let empty = BipartiteGraph::new(n, n)?;
        let upper = self.upper_bound()?;
        // A vertex is either full or has a missing edge that creates a copy.
        let floor = params.degree_floor();
        let floor = (floor.0.min(n), floor.1.min(n));
        let cutoff = match self.mode {
            SearchMode::Sat
                if self.config.theorem_cutoff
                    && params.orientation() == Orientation::Unordered
                    && params.t() <= n =>
            {
                bounds::theorem_lower(params.s(), params.t(), n).max(0) as usize
            }
            _ => 0,
        };

        let mut stats = SearchStats::default();
        let mut level: Level = BTreeMap::new();
        if is_free(&empty, params) {
            level.insert(canonical_form(&empty, mode)?, empty);
        }
        let mut m = 0usize;
        loop {
            if level.is_empty() || upper.is_some_and(|u| m > u) {
                break;
            }
            stats.classes += level.len() as u64;
            stats.levels = m;
            if self.mode == SearchMode::Sat {
                if let Some(u) = upper {
                    let before = level.len();
                    level.retain(|_, g| m + deficit(g, floor) <= u);
                    stats.pruned += (before - level.len()) as u64;
                }
            }
            if m >= cutoff {
                let graphs: Vec<&BipartiteGraph> = level
                    .values()
                    .filter(|g| self.mode == SearchMode::Wsat || deficit(g, floor) == 0)
                    .collect();
                stats.tests += graphs.len() as u64;
                let hits: Vec<bool> = graphs.par_iter().map(|g| self.accepts(g)).collect();
                let found: Vec<BipartiteGraph> = graphs
                    .iter()
                    .zip(&hits)
                    .filter(|(_, &h)| h)
                    .map(|(g, _)| (*g).clone())
                    .collect();
                if !found.is_empty() {
                    let cap = self.config.witness_cap.unwrap_or(usize::MAX);
                    return Ok(SearchOutcome {
                        mode: self.mode,
                        params,
                        host: (n, n),
                        minimum: Some(m),
                        witness_classes: found.len(),
                        witnesses: found.into_iter().take(cap).collect(),
                        upper_bound: upper,
                        stats,
                    });
                }
            }
            if m == n * n {
                break;
            }
            let parents: Vec<&BipartiteGraph> = level.values().collect();
            let children = parents
                .par_iter()
                .map(|g| expand(g, params, mode))
                .collect::<Result<Vec<_>>>()?;
            let mut next = Level::new();
            for batch in children {
                stats.generated += batch.len() as u64;
                for key in batch {
                    next.entry(key).or_insert_with_key(|k| k.representative());
                }
            }
            level = next;
            m += 1;
        }
        Ok(SearchOutcome {
            mode: self.mode,
            params,
            host: (n, n),
            minimum: None,
            witnesses: Vec::new(),
            witness_classes: 0,
            upper_bound: upper,
            stats,
        })
    }

    fn run(&self) -> Result<SearchOutcome> {
        match self.config.jobs {
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?
                .install(|| self.go()),
            None => self.go(),
        }
    }
}

/// `sat(K_{n,n}, H)`: fewest edges of an `H`-saturated `n x n` graph.
pub fn search_sat(n: usize, params: SatParams, config: &SearchConfig) -> Result<SearchOutcome> {
    Run {
        n,
        params,
        config,
        mode: SearchMode::Sat,
    }
    .run()
}

/// `w-sat(K_{n,n}, H)`: fewest edges of an `H`-free graph whose closure is complete.
pub fn search_wsat(n: usize, params: SatParams, config: &SearchConfig) -> Result<SearchOutcome> {
    Run {
        n,
        params,
        config,
        mode: SearchMode::Wsat,
    }
    .run()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Annotation {
    pub name: &'static str,
    pub value: i64,
    /// Inside the range where the formula is stated; for the conjecture,
    /// where it is known to be exact.
    pub in_range: bool,
    /// The exact minimum equals this value.
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub outcome: Option<SearchOutcome>,
    pub error: Option<String>,
    pub annotations: Vec<Annotation>,
}

/// Runs [`search_sat`] for each `n` and sets the result beside the closed forms.
pub fn sat_table(
    params: SatParams,
    ns: impl IntoIterator<Item = usize>,
    config: &SearchConfig,
) -> Vec<TableRow> {
    ns.into_iter()
        .map(|n| {
            let (outcome, error) = match search_sat(n, params, config) {
                Ok(o) => (Some(o), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let minimum = outcome.as_ref().and_then(|o| o.minimum);
            let annotations = [
                BoundKind::Ehm,
                BoundKind::Ordered,
                BoundKind::Conjecture,
                BoundKind::Theorem,
            ]
            .into_iter()
            .filter(|k| *k != BoundKind::Ehm || params.s() == params.t())
            .map(|k| {
                let r = bounds::report(k, params.s(), params.t(), n);
                let in_range = match k {
                    BoundKind::Conjecture => {
                        bounds::conjecture_known_exact(params.s(), params.t(), n)
                    }
                    _ => r.in_range,
                };
                Annotation {
                    name: r.name,
                    value: r.value,
                    in_range,
                    matches: minimum.map(|m| m as i64 == r.value),
                }
            })
            .collect();
            TableRow {
                n,
                outcome,
                error,
                annotations,
            }
        })
        .collect()
}
