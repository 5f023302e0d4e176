//! Bipartite graphs with word-parallel adjacency.
//!
//! Left vertices (`U`) index rows, right vertices (`U'`) index columns. Each row
//! is stored as a run of `u64` words and a transpose is kept in sync, so both
//! neighbourhoods `N(u)` and `N(v)` are available as bitsets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Iterates the set bit positions of a word slice in increasing order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            }
        })
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    row_words: usize,
    col_words: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
    edges: usize,
}

impl BipartiteGraph {
    /// The empty graph with `n_left` vertices in `U` and `n_right` in `U'`.
    pub fn new(n_left: usize, n_right: usize) -> Result<Self> {
        if n_left == 0 || n_right == 0 {
            return Err(Error::EmptySide { n_left, n_right });
        }
        let row_words = words_for(n_right);
        let col_words = words_for(n_left);
        Ok(BipartiteGraph {
            n_left,
            n_right,
            row_words,
            col_words,
            rows: vec![0; n_left * row_words],
            cols: vec![0; n_right * col_words],
            edges: 0,
        })
    }

    pub fn complete(n_left: usize, n_right: usize) -> Result<Self> {
        let mut g = Self::new(n_left, n_right)?;
        for u in 0..n_left {
            for v in 0..n_right {
                g.insert(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_edges<I>(n_left: usize, n_right: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n_left, n_right)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n_left(&self) -> usize {
        self.n_left
    }

    #[inline]
    pub fn n_right(&self) -> usize {
        self.n_right
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_square(&self) -> bool {
        self.n_left == self.n_right
    }

    pub fn is_complete(&self) -> bool {
        self.edges == self.n_left * self.n_right
    }

    /// True when both sides fit in a single machine word.
    #[inline]
    pub fn is_single_word(&self) -> bool {
        self.row_words == 1 && self.col_words == 1
    }

    fn check(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n_left || v >= self.n_right {
            return Err(Error::VertexOutOfRange {
                u,
                v,
                n_left: self.n_left,
                n_right: self.n_right,
            });
        }
        Ok(())
    }

    /// Adds `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check(u, v)?;
        Ok(self.insert(u, v))
    }

    /// Removes `uv`; returns `false` if it was not present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check(u, v)?;
        Ok(self.delete(u, v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> Result<bool> {
        self.check(u, v)?;
        Ok(self.adjacent(u, v))
    }

    /// Unchecked adjacency test. Panics if an index is out of range.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n_left && v < self.n_right, "vertex out of range");
        self.rows[u * self.row_words + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize) -> bool {
        if self.adjacent(u, v) {
            return false;
        }
        self.rows[u * self.row_words + v / WORD] |= 1 << (v % WORD);
        self.cols[v * self.col_words + u / WORD] |= 1 << (u % WORD);
        self.edges += 1;
        true
    }

    pub(crate) fn delete(&mut self, u: usize, v: usize) -> bool {
        if !self.adjacent(u, v) {
            return false;
        }
        self.rows[u * self.row_words + v / WORD] &= !(1 << (v % WORD));
        self.cols[v * self.col_words + u / WORD] &= !(1 << (u % WORD));
        self.edges -= 1;
        true
    }

    /// `N(u)` for a left vertex, as a bitset over `U'`.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.row_words..(u + 1) * self.row_words]
    }

    /// `N(v)` for a right vertex, as a bitset over `U`.
    #[inline]
    pub fn col(&self, v: usize) -> &[u64] {
        &self.cols[v * self.col_words..(v + 1) * self.col_words]
    }

    /// First word of row `u`; the whole row when the graph is single-word.
    #[inline]
    pub(crate) fn row_word(&self, u: usize) -> u64 {
        self.rows[u * self.row_words]
    }

    #[inline]
    pub(crate) fn col_word(&self, v: usize) -> u64 {
        self.cols[v * self.col_words]
    }

    pub fn left_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(u))
    }

    pub fn right_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.col(v))
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.col(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        (0..self.n_left).map(|u| self.left_degree(u)).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        (0..self.n_right).map(|v| self.right_degree(v)).collect()
    }

    /// Minimum degree over both sides.
    pub fn min_degree(&self) -> usize {
        let l = (0..self.n_left).map(|u| self.left_degree(u)).min();
        let r = (0..self.n_right).map(|v| self.right_degree(v)).min();
        l.into_iter().chain(r).min().unwrap_or(0)
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_left).flat_map(move |u| self.left_neighbors(u).map(move |v| (u, v)))
    }

    /// Missing pairs `(u, v)` in row-major order, each exactly once.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_left).flat_map(move |u| self.row_non_edges(u).map(move |v| (u, v)))
    }

    pub(crate) fn row_non_edges(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let n_right = self.n_right;
        self.row(u)
            .iter()
            .enumerate()
            .flat_map(move |(i, &w)| {
                let mut m = !w;
                std::iter::from_fn(move || {
                    if m == 0 {
                        None
                    } else {
                        let b = m.trailing_zeros() as usize;
                        m &= m - 1;
                        Some(i * WORD + b)
                    }
                })
            })
            .take_while(move |&v| v < n_right)
    }

    /// Number of edges between a left set and a right set.
    pub fn edges_between(&self, left: &[usize], right: &[usize]) -> usize {
        left.iter()
            .map(|&u| right.iter().filter(|&&v| self.adjacent(u, v)).count())
            .sum()
    }

    /// Swaps the roles of `U` and `U'`.
    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph {
            n_left: self.n_right,
            n_right: self.n_left,
            row_words: self.col_words,
            col_words: self.row_words,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            edges: self.edges,
        }
    }

    /// Relabels vertices: left `u` becomes `left_perm[u]`, right `v` becomes `right_perm[v]`.
    pub fn permuted(&self, left_perm: &[usize], right_perm: &[usize]) -> BipartiteGraph {
        assert_eq!(left_perm.len(), self.n_left);
        assert_eq!(right_perm.len(), self.n_right);
        let mut g = BipartiteGraph::new(self.n_left, self.n_right).expect("non-empty");
        for (u, v) in self.edges() {
            g.insert(left_perm[u], right_perm[v]);
        }
        g
    }

    /// The `bmat` text encoding, with a trailing newline.
    pub fn to_bmat(&self) -> String {
        let mut out = String::with_capacity(self.n_left * (self.n_right + 1) + 16);
        out.push_str(&format!("{} {}\n", self.n_left, self.n_right));
        for u in 0..self.n_left {
            for v in 0..self.n_right {
                out.push(if self.adjacent(u, v) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_bmat(text: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| err(1, 1, "empty input".into()))?;
        let header = header.trim_end_matches('\r');
        let mut fields = header.split(' ');
        let mut dim = |name: &str| -> Result<usize> {
            let f = fields
                .next()
                .filter(|f| !f.is_empty())
                .ok_or_else(|| err(1, header.len() + 1, format!("missing {name}")))?;
            let column = f.as_ptr() as usize - header.as_ptr() as usize + 1;
            f.parse::<usize>()
                .map_err(|_| err(1, column, format!("{name} is not a count: {f:?}")))
        };
        let n_left = dim("n_left")?;
        let n_right = dim("n_right")?;
        if let Some(extra) = fields.next() {
            let column = extra.as_ptr() as usize - header.as_ptr() as usize + 1;
            return Err(err(1, column, "unexpected text after header".into()));
        }
        if n_left == 0 || n_right == 0 {
            return Err(err(1, 1, "sides must be at least 1".into()));
        }
        let mut g = BipartiteGraph::new(n_left, n_right)?;
        for u in 0..n_left {
            let (idx, row) = lines
                .next()
                .ok_or_else(|| err(u + 2, 1, format!("expected {n_left} rows, found {u}")))?;
            let row = row.trim_end_matches('\r');
            let line = idx + 1;
            let mut len = 0;
            for (v, c) in row.chars().enumerate() {
                match c {
                    '0' | '1' if v >= n_right => {
                        return Err(err(line, v + 1, format!("row longer than {n_right}")))
                    }
                    '1' => {
                        g.insert(u, v);
                    }
                    '0' => {}
                    other => return Err(err(line, v + 1, format!("unexpected {other:?}"))),
                }
                len += 1;
            }
            if len < n_right {
                return Err(err(line, len + 1, format!("row shorter than {n_right}")));
            }
        }
        for (idx, rest) in lines {
            if !rest.trim().is_empty() {
                return Err(err(idx + 1, 1, "trailing content after last row".into()));
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BipartiteGraph({}x{}, {} edges)",
            self.n_left, self.n_right, self.edges
        )?;
        if self.n_left <= 16 && self.n_right <= 64 {
            for u in 0..self.n_left {
                f.write_str("\n  ")?;
                for v in 0..self.n_right {
                    f.write_str(if self.adjacent(u, v) { "1" } else { "0" })?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bmat())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_bmat(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_graphs() {
        let g = BipartiteGraph::new(2, 2).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.non_edges().count(), 4);

        let g = BipartiteGraph::new(1, 5).unwrap();
        assert_eq!(g.left_degree(0), 0);
        assert!(g.right_degrees().iter().all(|&d| d == 0));

        assert!(matches!(
            BipartiteGraph::new(0, 3),
            Err(Error::EmptySide { .. })
        ));
    }

    #[test]
    fn complete_and_mutation() {
        let mut g = BipartiteGraph::new(4, 4).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                g.add_edge(u, v).unwrap();
            }
        }
        assert_eq!(g.edge_count(), 16);
        assert!(g.is_complete());
        assert_eq!(g.non_edges().count(), 0);

        let mut g = BipartiteGraph::new(2, 2).unwrap();
        assert!(g.add_edge(0, 1).unwrap());
        assert!(g.has_edge(0, 1).unwrap());
        assert_eq!(g.edge_count(), 1);
        assert!(!g.add_edge(0, 1).unwrap());
        assert!(g.remove_edge(0, 1).unwrap());
        assert!(!g.remove_edge(0, 1).unwrap());
        assert_eq!(g.edge_count(), 0);

        assert!(matches!(
            g.add_edge(2, 0),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(g.has_edge(0, 7).is_err());
    }

    #[test]
    fn complete_three_by_three() {
        let g = BipartiteGraph::complete(3, 3).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert!(g.has_edge(u, v).unwrap());
            }
        }
        assert_eq!(g.non_edges().count(), 0);
    }

    #[test]
    fn non_edges_count_matches() {
        let g = BipartiteGraph::from_edges(
            4,
            4,
            [
                (0, 0),
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 0),
                (2, 0),
                (3, 0),
                (1, 1),
                (2, 2),
                (3, 3),
            ],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 10);
        let missing: Vec<_> = g.non_edges().collect();
        assert_eq!(missing.len(), 16 - 10);
        assert!(missing.iter().all(|&(u, v)| !g.adjacent(u, v)));
    }

    #[test]
    fn multi_word_rows() {
        let mut g = BipartiteGraph::new(130, 200).unwrap();
        g.add_edge(129, 199).unwrap();
        g.add_edge(0, 64).unwrap();
        g.add_edge(64, 0).unwrap();
        assert_eq!(g.left_neighbors(129).collect::<Vec<_>>(), vec![199]);
        assert_eq!(g.right_neighbors(0).collect::<Vec<_>>(), vec![64]);
        assert_eq!(g.non_edges().count(), 130 * 200 - 3);
        let t = g.transpose();
        assert!(t.adjacent(199, 129));
        assert!(t.adjacent(64, 0));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn bmat_roundtrip_and_errors() {
        let text = "2 3\n101\n010\n";
        let g: BipartiteGraph = text.parse().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.to_bmat(), text);
        assert_eq!(BipartiteGraph::parse_bmat("2 3\n101\n010").unwrap(), g);

        match BipartiteGraph::parse_bmat("2 3\n101\n0x0\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("{other:?}"),
        }
        match BipartiteGraph::parse_bmat("2 3\n10\n010\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match BipartiteGraph::parse_bmat("2 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
        assert!(BipartiteGraph::parse_bmat("2 3\n101\n").is_err());
        assert!(BipartiteGraph::parse_bmat("1 1\n1\n1\n").is_err());
        assert!(BipartiteGraph::parse_bmat("").is_err());
    }

    fn arb_graph(max: usize) -> impl Strategy<Value = BipartiteGraph> {
        (1..=max, 1..=max)
            .prop_flat_map(|(l, r)| {
                (
                    Just(l),
                    Just(r),
                    proptest::collection::vec(any::<bool>(), l * r),
                )
            })
            .prop_map(|(l, r, bits)| {
                let mut g = BipartiteGraph::new(l, r).unwrap();
                for (i, b) in bits.into_iter().enumerate() {
                    if b {
                        g.add_edge(i / r, i % r).unwrap();
                    }
                }
                g
            })
    }

    proptest! {
        #[test]
        fn degree_sums_agree(g in arb_graph(9)) {
            let l: usize = g.left_degrees().iter().sum();
            let r: usize = g.right_degrees().iter().sum();
            prop_assert_eq!(l, g.edge_count());
            prop_assert_eq!(r, g.edge_count());
            for u in 0..g.n_left() {
                for v in 0..g.n_right() {
                    prop_assert_eq!(g.adjacent(u, v), g.transpose().adjacent(v, u));
                }
            }
        }

        #[test]
        fn add_remove_restores(g in arb_graph(8), u in 0usize..8, v in 0usize..8) {
            let (u, v) = (u % g.n_left(), v % g.n_right());
            let mut h = g.clone();
            if !g.adjacent(u, v) {
                prop_assert!(h.add_edge(u, v).unwrap());
                prop_assert!(h.remove_edge(u, v).unwrap());
            } else {
                prop_assert!(h.remove_edge(u, v).unwrap());
                prop_assert!(h.add_edge(u, v).unwrap());
            }
            prop_assert_eq!(h, g);
        }

        #[test]
        fn bmat_roundtrip(g in arb_graph(12)) {
            prop_assert_eq!(BipartiteGraph::parse_bmat(&g.to_bmat()).unwrap(), g);
        }
    }
}
