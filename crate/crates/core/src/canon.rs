//! Exact canonical forms for bipartite graphs.
//!
//! Vertices are first coloured by iterated degree refinement on each side.
//! Rows are then ordered by colour and every within-cell ordering is tried;
//! for a fixed row order the columns are read as bit strings and sorted, and
//! the least resulting matrix is the key. The side with the cheaper cell
//! product is the one permuted. The key determines the matrix up to vertex
//! relabelling, so equal keys mean isomorphic graphs and vice versa.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Default cap on the number of row orderings tried per graph.
pub const DEFAULT_LEAF_BUDGET: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideMode {
    /// Left stays left: only side-preserving relabellings.
    FixedSides,
    /// Additionally allows exchanging `U` and `U'` (square graphs only).
    SwappableSides,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    mode: SideMode,
    key: Vec<u64>,
}

impl CanonicalForm {
    pub fn mode(&self) -> SideMode {
        self.mode
    }

    pub fn key(&self) -> &[u64] {
        &self.key
    }

    /// Rebuilds a representative of the isomorphism class from the key.
    pub fn representative(&self) -> BipartiteGraph {
        let (tag, n_l, n_r) = (self.key[0], self.key[1] as usize, self.key[2] as usize);
        let cols = &self.key[3..];
        // When the permuted side was `U'`, the stored matrix is the transpose.
        let (rows, cols_n) = if tag == 0 { (n_l, n_r) } else { (n_r, n_l) };
        let mut g = BipartiteGraph::new(rows, cols_n).expect("non-empty key");
        for (j, &bits) in cols.iter().enumerate() {
            for p in 0..rows {
                if bits >> p & 1 == 1 {
                    g.insert(p, j);
                }
            }
        }
        if tag == 0 {
            g
        } else {
            g.transpose()
        }
    }
}

pub fn canonical_form(g: &BipartiteGraph, mode: SideMode) -> Result<CanonicalForm> {
    canonical_form_with_budget(g, mode, DEFAULT_LEAF_BUDGET)
}

pub fn canonical_form_with_budget(
    g: &BipartiteGraph,
    mode: SideMode,
    budget: u128,
) -> Result<CanonicalForm> {
    for size in [g.n_left(), g.n_right()] {
        if size > 64 {
            return Err(Error::TooLarge {
                size,
                limit: 64,
                what: "canonical labeling",
            });
        }
    }
    let key = match mode {
        SideMode::FixedSides => fixed_key(g, budget)?,
        SideMode::SwappableSides => {
            if !g.is_square() {
                return Err(Error::NotSquare {
                    n_left: g.n_left(),
                    n_right: g.n_right(),
                    what: "swappable-sides canonical form",
                });
            }
            let a = fixed_key(g, budget)?;
            let b = fixed_key(&g.transpose(), budget)?;
            a.min(b)
        }
    };
    Ok(CanonicalForm { mode, key })
}

/// Iterated colour refinement, run separately on each side.
pub(crate) fn refine(g: &BipartiteGraph) -> (Vec<u32>, Vec<u32>) {
    let mut left = relabel(
        g.left_degrees()
            .into_iter()
            .map(|d| vec![d as u32])
            .collect(),
    );
    let mut right = relabel(
        g.right_degrees()
            .into_iter()
            .map(|d| vec![d as u32])
            .collect(),
    );
    let classes = |c: &[u32]| c.iter().max().map_or(0, |&m| m + 1);
    loop {
        let (nl, nr) = (classes(&left), classes(&right));
        let next_left = relabel(
            (0..g.n_left())
                .map(|u| signature(left[u], g.left_neighbors(u).map(|v| right[v])))
                .collect(),
        );
        let next_right = relabel(
            (0..g.n_right())
                .map(|v| signature(right[v], g.right_neighbors(v).map(|u| left[u])))
                .collect(),
        );
        left = next_left;
        right = next_right;
        if classes(&left) == nl && classes(&right) == nr {
            return (left, right);
        }
    }
}

fn signature(own: u32, neighbours: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut sig = vec![own];
    let start = sig.len();
    sig.extend(neighbours);
    sig[start..].sort_unstable();
    sig
}

fn relabel(sigs: Vec<Vec<u32>>) -> Vec<u32> {
    let mut distinct = sigs.clone();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(s).expect("present") as u32)
        .collect()
}

/// Distinct row orderings: per colour cell, a multinomial over twin rows.
fn cell_leaves(colors: &[u32], row: impl Fn(usize) -> Vec<u64>) -> u128 {
    let mut cells: std::collections::BTreeMap<u32, std::collections::BTreeMap<Vec<u64>, u32>> =
        Default::default();
    for (u, &c) in colors.iter().enumerate() {
        *cells.entry(c).or_default().entry(row(u)).or_insert(0) += 1;
    }
    let fact = |k: u32| (1..=k as u128).fold(1u128, |a, i| a.saturating_mul(i));
    cells.values().fold(1u128, |acc, twins| {
        let k: u32 = twins.values().sum();
        let denom = twins
            .values()
            .fold(1u128, |a, &m| a.saturating_mul(fact(m)));
        acc.saturating_mul(fact(k) / denom.max(1))
    })
}

fn fixed_key(g: &BipartiteGraph, budget: u128) -> Result<Vec<u64>> {
    let (left, right) = refine(g);
    let row_cost = cell_leaves(&left, |u| g.row(u).to_vec());
    let col_cost = cell_leaves(&right, |v| g.col(v).to_vec());
    if col_cost < row_cost {
        if col_cost > budget {
            return Err(Error::CanonicalBudget {
                leaves: col_cost,
                budget,
            });
        }
        Ok(row_ordered_key(&g.transpose(), &right, 1))
    } else {
        if row_cost > budget {
            return Err(Error::CanonicalBudget {
                leaves: row_cost,
                budget,
            });
        }
        Ok(row_ordered_key(g, &left, 0))
    }
}

struct RowSearch<'a> {
    g: &'a BipartiteGraph,
    /// Rows grouped by colour, cells in colour order.
    cells: Vec<Vec<usize>>,
    /// Colour cell expected at each position.
    slots: Vec<usize>,
    used: Vec<bool>,
    partial: Vec<Vec<u64>>,
    best: Option<Vec<u64>>,
}

fn row_ordered_key(g: &BipartiteGraph, row_colors: &[u32], tag: u64) -> Vec<u64> {
    let n_cells = row_colors.iter().max().map_or(0, |&m| m as usize + 1);
    let mut cells = vec![Vec::new(); n_cells];
    for (u, &c) in row_colors.iter().enumerate() {
        cells[c as usize].push(u);
    }
    let slots = cells
        .iter()
        .enumerate()
        .flat_map(|(i, c)| std::iter::repeat_n(i, c.len()))
        .collect();
    let mut search = RowSearch {
        g,
        cells,
        slots,
        used: vec![false; g.n_left()],
        partial: vec![vec![0; g.n_right()]; g.n_left() + 1],
        best: None,
    };
    search.place(0);
    let mut key = vec![tag, g.n_left() as u64, g.n_right() as u64];
    if tag == 1 {
        // Keep the header in the caller's orientation.
        key.swap(1, 2);
    }
    key.extend(search.best.expect("at least one leaf"));
    key
}

impl RowSearch<'_> {
    fn place(&mut self, depth: usize) {
        if depth == self.slots.len() {
            let mut cols = self.partial[depth].clone();
            cols.sort_unstable();
            if self.best.as_ref().is_none_or(|b| cols < *b) {
                self.best = Some(cols);
            }
            return;
        }
        let cell = self.slots[depth];
        for i in 0..self.cells[cell].len() {
            let u = self.cells[cell][i];
            if self.used[u] {
                continue;
            }
            // An unused identical twin earlier in the cell covers this subtree.
            let twin = self.cells[cell][..i]
                .iter()
                .any(|&w| !self.used[w] && self.g.row(w) == self.g.row(u));
            if twin {
                continue;
            }
            self.used[u] = true;
            let (lo, hi) = self.partial.split_at_mut(depth + 1);
            hi[0].copy_from_slice(&lo[depth]);
            for v in self.g.left_neighbors(u) {
                hi[0][v] |= 1 << depth;
            }
            self.place(depth + 1);
            self.used[u] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn all_graphs(l: usize, r: usize) -> impl Iterator<Item = BipartiteGraph> {
        (0u32..1 << (l * r)).map(move |mask| {
            BipartiteGraph::from_edges(
                l,
                r,
                (0..l * r)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / r, i % r)),
            )
            .unwrap()
        })
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Orbit oracle: the lexicographically least bmat over all relabellings.
    fn brute_min(g: &BipartiteGraph, swap: bool) -> String {
        let lp = permutations(g.n_left());
        let rp = permutations(g.n_right());
        let mut best: Option<String> = None;
        let mut consider = |h: &BipartiteGraph| {
            for a in &lp {
                for b in &rp {
                    let s = h.permuted(a, b).to_bmat();
                    if best.as_ref().is_none_or(|x| s < *x) {
                        best = Some(s);
                    }
                }
            }
        };
        consider(g);
        if swap {
            consider(&g.transpose());
        }
        best.unwrap()
    }

    fn check_orbits(l: usize, r: usize, mode: SideMode) -> usize {
        let swap = mode == SideMode::SwappableSides;
        let mut keys = BTreeSet::new();
        let mut orbits = BTreeSet::new();
        let mut by_orbit = std::collections::BTreeMap::new();
        for g in all_graphs(l, r) {
            let k = canonical_form(&g, mode).unwrap();
            let o = brute_min(&g, swap);
            assert_eq!(*by_orbit.entry(o.clone()).or_insert_with(|| k.clone()), k);
            keys.insert(k);
            orbits.insert(o);
        }
        assert_eq!(keys.len(), orbits.len());
        keys.len()
    }

    #[test]
    fn two_by_two_has_seven_classes() {
        assert_eq!(check_orbits(2, 2, SideMode::FixedSides), 7);
    }

    #[test]
    fn orbit_counts_up_to_three_by_three() {
        for (l, r) in [(1, 1), (1, 3), (2, 3), (3, 2), (3, 3)] {
            check_orbits(l, r, SideMode::FixedSides);
        }
        for n in 1..=3 {
            check_orbits(n, n, SideMode::SwappableSides);
        }
    }

    #[test]
    fn relabelled_graph_same_key() {
        let g = BipartiteGraph::from_edges(4, 5, [(0, 0), (0, 1), (1, 1), (2, 3), (3, 4), (3, 0)])
            .unwrap();
        let h = g.permuted(&[2, 0, 3, 1], &[4, 3, 2, 1, 0]);
        assert_eq!(
            canonical_form(&g, SideMode::FixedSides).unwrap(),
            canonical_form(&h, SideMode::FixedSides).unwrap()
        );
    }

    #[test]
    fn path_and_mirror_under_swap() {
        // u0 - v0 - u1 and its mirror v0 - u0 - v1.
        let path = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 0)]).unwrap();
        let mirror = path.transpose();
        assert_ne!(
            canonical_form(&path, SideMode::FixedSides).unwrap(),
            canonical_form(&mirror, SideMode::FixedSides).unwrap()
        );
        assert_eq!(
            canonical_form(&path, SideMode::SwappableSides).unwrap(),
            canonical_form(&mirror, SideMode::SwappableSides).unwrap()
        );
    }

    #[test]
    fn swappable_needs_square() {
        let g = BipartiteGraph::new(2, 3).unwrap();
        assert!(matches!(
            canonical_form(&g, SideMode::SwappableSides),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn representative_is_isomorphic() {
        let g = BipartiteGraph::from_edges(3, 4, [(0, 0), (1, 1), (1, 2), (2, 3), (2, 0)]).unwrap();
        let k = canonical_form(&g, SideMode::FixedSides).unwrap();
        assert_eq!(
            canonical_form(&k.representative(), SideMode::FixedSides).unwrap(),
            k
        );
        let sq = BipartiteGraph::from_edges(3, 3, [(0, 0), (0, 1), (1, 2)]).unwrap();
        let k = canonical_form(&sq, SideMode::SwappableSides).unwrap();
        assert_eq!(
            canonical_form(&k.representative(), SideMode::SwappableSides).unwrap(),
            k
        );
    }

    #[test]
    fn twins_are_collapsed() {
        let g = BipartiteGraph::new(40, 40).unwrap();
        canonical_form(&g, SideMode::SwappableSides).unwrap();
        let g = BipartiteGraph::complete(30, 20).unwrap();
        canonical_form(&g, SideMode::FixedSides).unwrap();
    }

    #[test]
    fn budget_is_enforced() {
        // A 12-cycle: one colour class per side and no twins.
        let g = BipartiteGraph::from_edges(6, 6, (0..6).flat_map(|i| [(i, i), (i, (i + 1) % 6)]))
            .unwrap();
        assert!(matches!(
            canonical_form_with_budget(&g, SideMode::FixedSides, 100),
            Err(Error::CanonicalBudget { .. })
        ));
    }
}
