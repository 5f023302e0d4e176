//! Biclique containment and the saturation predicates built on it.
//!
//! All containment questions reduce to one search: grow a left set `X` and a
//! right set `Y` with every pair adjacent, keeping the candidate pools `P_L`
//! (left vertices adjacent to all of `Y`) and `P_R` (right vertices adjacent to
//! all of `X`). Each step branches on whichever side has the smaller binomial
//! count of remaining choices. Graphs whose sides fit in one word run the
//! search on `u64` masks; larger graphs use sorted vertex lists.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// The `s`-class must sit in `U`.
    Ordered,
    /// Either class may sit in either side.
    Unordered,
}

/// The forbidden biclique `K_{s,t}`, `1 <= s <= t`, with its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SatParams {
    s: usize,
    t: usize,
    orientation: Orientation,
}

impl SatParams {
    pub fn new(s: usize, t: usize, orientation: Orientation) -> Result<Self> {
        if s == 0 || s > t {
            return Err(Error::InvalidParams(format!(
                "need 1 <= s <= t, got s={s}, t={t}"
            )));
        }
        Ok(SatParams { s, t, orientation })
    }

    pub fn ordered(s: usize, t: usize) -> Result<Self> {
        Self::new(s, t, Orientation::Ordered)
    }

    pub fn unordered(s: usize, t: usize) -> Result<Self> {
        Self::new(s, t, Orientation::Unordered)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `(a, b)` shapes that count as a copy: `a` vertices in `U`, `b` in `U'`.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        match self.orientation {
            Orientation::Ordered => vec![(self.s, self.t)],
            Orientation::Unordered if self.s == self.t => vec![(self.s, self.t)],
            Orientation::Unordered => vec![(self.s, self.t), (self.t, self.s)],
        }
    }

    /// Least possible degree of a left and a right vertex that has a missing
    /// incident edge in a saturated graph.
    pub fn degree_floor(&self) -> (usize, usize) {
        match self.orientation {
            Orientation::Ordered => (self.t - 1, self.s - 1),
            Orientation::Unordered => (self.s - 1, self.s - 1),
        }
    }
}

/// A complete bipartite subgraph: every `left x right` pair is an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBiclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl WitnessBiclique {
    pub fn is_valid_in(&self, g: &BipartiteGraph) -> bool {
        self.left
            .iter()
            .all(|&u| self.right.iter().all(|&v| g.adjacent(u, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Saturated,
    ContainsCopy { witness: WitnessBiclique },
    Misses { u: usize, v: usize },
}

impl Verdict {
    pub fn is_saturated(&self) -> bool {
        matches!(self, Verdict::Saturated)
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

// ---- single-word search -------------------------------------------------

fn low_bits(mut m: u64, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

struct WordSearch<'a> {
    g: &'a BipartiteGraph,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl WordSearch<'_> {
    fn extend(&mut self, need_l: usize, need_r: usize, pl: u64, pr: u64) -> bool {
        let (cl, cr) = (pl.count_ones() as usize, pr.count_ones() as usize);
        if cl < need_l || cr < need_r {
            return false;
        }
        if need_l == 0 {
            self.right.extend(low_bits(pr, need_r));
            return true;
        }
        if need_r == 0 {
            self.left.extend(low_bits(pl, need_l));
            return true;
        }
        if binom(cl, need_l) <= binom(cr, need_r) {
            let mut rest = pl;
            while rest.count_ones() as usize >= need_l {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = pr & self.g.row_word(c);
                if next.count_ones() as usize >= need_r {
                    self.left.push(c);
                    if self.extend(need_l - 1, need_r, rest, next) {
                        return true;
                    }
                    self.left.pop();
                }
            }
        } else {
            let mut rest = pr;
            while rest.count_ones() as usize >= need_r {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = pl & self.g.col_word(c);
                if next.count_ones() as usize >= need_l {
                    self.right.push(c);
                    if self.extend(need_l, need_r - 1, next, rest) {
                        return true;
                    }
                    self.right.pop();
                }
            }
        }
        false
    }
}

// ---- list search ---------------------------------------------------------

struct ListSearch<'a> {
    g: &'a BipartiteGraph,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl ListSearch<'_> {
    fn extend(&mut self, need_l: usize, need_r: usize, pl: &[usize], pr: &[usize]) -> bool {
        if pl.len() < need_l || pr.len() < need_r {
            return false;
        }
        if need_l == 0 {
            self.right.extend_from_slice(&pr[..need_r]);
            return true;
        }
        if need_r == 0 {
            self.left.extend_from_slice(&pl[..need_l]);
            return true;
        }
        if binom(pl.len(), need_l) <= binom(pr.len(), need_r) {
            for i in 0..=pl.len() - need_l {
                let c = pl[i];
                let next: Vec<usize> = pr
                    .iter()
                    .copied()
                    .filter(|&r| self.g.adjacent(c, r))
                    .collect();
                if next.len() >= need_r {
                    self.left.push(c);
                    if self.extend(need_l - 1, need_r, &pl[i + 1..], &next) {
                        return true;
                    }
                    self.left.pop();
                }
            }
        } else {
            for i in 0..=pr.len() - need_r {
                let c = pr[i];
                let next: Vec<usize> = pl
                    .iter()
                    .copied()
                    .filter(|&l| self.g.adjacent(l, c))
                    .collect();
                if next.len() >= need_l {
                    self.right.push(c);
                    if self.extend(need_l, need_r - 1, &next, &pr[i + 1..]) {
                        return true;
                    }
                    self.right.pop();
                }
            }
        }
        false
    }
}

/// Neighbour lists and degrees, built once for repeated queries on a fixed graph.
pub(crate) struct Lists {
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

impl Lists {
    pub(crate) fn new(g: &BipartiteGraph) -> Self {
        Lists {
            left: (0..g.n_left())
                .map(|u| g.left_neighbors(u).collect())
                .collect(),
            right: (0..g.n_right())
                .map(|v| g.right_neighbors(v).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Copy)]
enum Engine {
    Words,
    Lists,
}

fn engine_for(g: &BipartiteGraph) -> Engine {
    if g.is_single_word() {
        Engine::Words
    } else {
        Engine::Lists
    }
}

fn find_biclique(
    g: &BipartiteGraph,
    a: usize,
    b: usize,
    engine: Engine,
) -> Option<WitnessBiclique> {
    if a == 0 || b == 0 || a > g.n_left() || b > g.n_right() {
        return None;
    }
    let pl: Vec<usize> = (0..g.n_left()).filter(|&u| g.left_degree(u) >= b).collect();
    let pr: Vec<usize> = (0..g.n_right())
        .filter(|&v| g.right_degree(v) >= a)
        .collect();
    let (found, mut left, mut right) = match engine {
        Engine::Words => {
            let mask = |xs: &[usize]| xs.iter().fold(0u64, |m, &x| m | 1 << x);
            let mut s = WordSearch {
                g,
                left: vec![],
                right: vec![],
            };
            let ok = s.extend(a, b, mask(&pl), mask(&pr));
            (ok, s.left, s.right)
        }
        Engine::Lists => {
            let mut s = ListSearch {
                g,
                left: vec![],
                right: vec![],
            };
            let ok = s.extend(a, b, &pl, &pr);
            (ok, s.left, s.right)
        }
    };
    found.then(|| {
        left.sort_unstable();
        right.sort_unstable();
        WitnessBiclique { left, right }
    })
}

/// Looks for a `K_{(a,b)}`: `a` vertices in `U` all adjacent to the same `b`
/// vertices in `U'`.
pub fn contains_biclique(g: &BipartiteGraph, a: usize, b: usize) -> Option<WitnessBiclique> {
    find_biclique(g, a, b, engine_for(g))
}

/// Same as [`contains_biclique`] but always on the list engine.
#[doc(hidden)]
pub fn contains_biclique_lists(g: &BipartiteGraph, a: usize, b: usize) -> Option<WitnessBiclique> {
    find_biclique(g, a, b, Engine::Lists)
}

/// First shape of `params` present in `g`.
pub fn find_copy(g: &BipartiteGraph, params: SatParams) -> Option<WitnessBiclique> {
    params
        .shapes()
        .into_iter()
        .find_map(|(a, b)| contains_biclique(g, a, b))
}

pub fn is_free(g: &BipartiteGraph, params: SatParams) -> bool {
    find_copy(g, params).is_none()
}

/// Whether `g + uv` has a `K_{(a,b)}` through `uv`, for a non-edge `uv`.
fn creates_shape(
    g: &BipartiteGraph,
    lists: Option<&Lists>,
    u: usize,
    v: usize,
    a: usize,
    b: usize,
) -> bool {
    if a > g.n_left() || b > g.n_right() {
        return false;
    }
    match (engine_for(g), lists) {
        (Engine::Words, _) => {
            let mut pl = g.col_word(v);
            let mut pr = g.row_word(u);
            // Members of the copy need degree >= b (left) and >= a (right) in `g`,
            // counting the edge to `v` (resp. `u`) they already have.
            let mut m = pl;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                if (g.row_word(w).count_ones() as usize) < b {
                    pl &= !(1 << w);
                }
            }
            let mut m = pr;
            while m != 0 {
                let r = m.trailing_zeros() as usize;
                m &= m - 1;
                if (g.col_word(r).count_ones() as usize) < a {
                    pr &= !(1 << r);
                }
            }
            WordSearch {
                g,
                left: vec![],
                right: vec![],
            }
            .extend(a - 1, b - 1, pl, pr)
        }
        (Engine::Lists, Some(lists)) => {
            let pl: Vec<usize> = lists.right[v]
                .iter()
                .copied()
                .filter(|&w| lists.left[w].len() >= b)
                .collect();
            let pr: Vec<usize> = lists.left[u]
                .iter()
                .copied()
                .filter(|&r| lists.right[r].len() >= a)
                .collect();
            ListSearch {
                g,
                left: vec![],
                right: vec![],
            }
            .extend(a - 1, b - 1, &pl, &pr)
        }
        (Engine::Lists, None) => {
            let pl: Vec<usize> = g
                .right_neighbors(v)
                .filter(|&w| g.left_degree(w) >= b)
                .collect();
            let pr: Vec<usize> = g
                .left_neighbors(u)
                .filter(|&r| g.right_degree(r) >= a)
                .collect();
            ListSearch {
                g,
                left: vec![],
                right: vec![],
            }
            .extend(a - 1, b - 1, &pl, &pr)
        }
    }
}

fn creates_copy_inner(
    g: &BipartiteGraph,
    lists: Option<&Lists>,
    u: usize,
    v: usize,
    params: SatParams,
) -> bool {
    params
        .shapes()
        .into_iter()
        .any(|(a, b)| creates_shape(g, lists, u, v, a, b))
}

/// Whether adding the missing edge `uv` creates a copy of the target that
/// uses `uv`.
pub fn creates_copy(g: &BipartiteGraph, u: usize, v: usize, params: SatParams) -> Result<bool> {
    if g.has_edge(u, v)? {
        return Err(Error::AlreadyEdge { u, v });
    }
    Ok(creates_copy_inner(g, None, u, v, params))
}

/// Whether adding `uv` creates a `K_{(a,b)}` through `uv` (a single orientation).
pub fn creates_oriented_copy(
    g: &BipartiteGraph,
    u: usize,
    v: usize,
    a: usize,
    b: usize,
) -> Result<bool> {
    if g.has_edge(u, v)? {
        return Err(Error::AlreadyEdge { u, v });
    }
    if a == 0 || b == 0 {
        return Err(Error::InvalidParams(
            "biclique sides must be positive".into(),
        ));
    }
    Ok(creates_shape(g, None, u, v, a, b))
}

/// First non-edge (row-major) whose addition does not create a copy.
fn first_miss(g: &BipartiteGraph, params: SatParams) -> Option<(usize, usize)> {
    let lists = (!g.is_single_word()).then(|| Lists::new(g));
    let lists = lists.as_ref();
    let row_miss = |u: usize| {
        g.row_non_edges(u)
            .find(|&v| !creates_copy_inner(g, lists, u, v, params))
            .map(|v| (u, v))
    };
    if g.n_left() * g.n_right() < 4096 {
        (0..g.n_left()).find_map(row_miss)
    } else {
        (0..g.n_left()).into_par_iter().find_map_first(row_miss)
    }
}

pub fn is_saturated(g: &BipartiteGraph, params: SatParams) -> Verdict {
    if let Some(witness) = find_copy(g, params) {
        return Verdict::ContainsCopy { witness };
    }
    match first_miss(g, params) {
        Some((u, v)) => Verdict::Misses { u, v },
        None => Verdict::Saturated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub graph: BipartiteGraph,
    /// Edges in the order they were activated.
    pub order: Vec<(usize, usize)>,
}

/// Bootstrap closure: repeatedly add any missing edge that creates a copy
/// through itself. Non-edges are swept in row-major order, adding each
/// eligible edge as it is met, until a full sweep adds nothing.
pub fn closure(g: &BipartiteGraph, params: SatParams) -> Closure {
    let mut h = g.clone();
    let mut order = Vec::new();
    loop {
        let mut added = false;
        for u in 0..h.n_left() {
            for v in 0..h.n_right() {
                if !h.adjacent(u, v) && creates_copy_inner(&h, None, u, v, params) {
                    h.insert(u, v);
                    order.push((u, v));
                    added = true;
                }
            }
        }
        if !added {
            return Closure { graph: h, order };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakReport {
    /// The closure is the complete graph.
    pub percolates: bool,
    /// The seed itself contains no copy.
    pub seed_free: bool,
    pub closure_edges: usize,
    pub activated: usize,
}

impl WeakReport {
    pub fn is_weakly_saturated(&self) -> bool {
        self.percolates && self.seed_free
    }
}

pub fn weak_saturation(g: &BipartiteGraph, params: SatParams) -> WeakReport {
    let c = closure(g, params);
    WeakReport {
        percolates: c.graph.is_complete(),
        seed_free: is_free(g, params),
        closure_edges: c.graph.edge_count(),
        activated: c.order.len(),
    }
}

pub fn is_weakly_saturated(g: &BipartiteGraph, params: SatParams) -> bool {
    weak_saturation(g, params).is_weakly_saturated()
}

/// Completes a copy-free graph to a saturated one by visiting non-edges in a
/// seeded random order and keeping every edge that creates no copy.
pub fn greedy_saturate(g: &BipartiteGraph, params: SatParams, seed: u64) -> Result<BipartiteGraph> {
    if !is_free(g, params) {
        return Err(Error::NotFree);
    }
    let mut pairs: Vec<(usize, usize)> = g.non_edges().collect();
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut h = g.clone();
    for (u, v) in pairs {
        if !creates_copy_inner(&h, None, u, v, params) {
            h.insert(u, v);
        }
    }
    Ok(h)
}
