//! Explicit extremal graphs.
//!
//! [`FamilySpec`] describes the block family: `U = V ∪ W_1 ∪ … ∪ W_l`,
//! `U' = V' ∪ W'_1 ∪ … ∪ W'_l` with `|V| = |V'| = ⌊(s+t-2)/2⌋`. Vertices of
//! `V` (resp. `V'`) take the first indices of each side, followed by the
//! blocks in order; `W_i` and `W'_i` occupy the same index range.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub block_sizes: Vec<usize>,
    /// `S' ⊆ V'`, indices into `V'`.
    pub anchor_right: Vec<usize>,
    /// `S_i ⊆ V`, one per block, indices into `V`.
    pub anchors_left: Vec<Vec<usize>>,
    /// Rotation of the circulant regular graph in each block.
    pub regular_seeds: Vec<usize>,
}

impl FamilySpec {
    /// Defaults: near-equal block sizes, `S' = {0..s-1}`, `S_i` a cyclic
    /// window of `V` starting at `i`, and zero rotations.
    pub fn new(s: usize, t: usize, n: usize, l: usize) -> Result<Self> {
        if s == 0 || s > t {
            return Err(Error::InvalidParams(format!(
                "need 1 <= s <= t, got s={s}, t={t}"
            )));
        }
        if l == 0 {
            return Err(Error::InvalidConstruction("need at least one block".into()));
        }
        let f = core_size(s, t);
        let rest = n
            .checked_sub(f)
            .ok_or_else(|| Error::InvalidConstruction(format!("n={n} is smaller than |V|={f}")))?;
        let block_sizes = (0..l)
            .map(|i| rest / l + usize::from(i < rest % l))
            .collect();
        let window = |start: usize| {
            (0..s - 1)
                .map(|j| (start + j) % f.max(1))
                .collect::<Vec<_>>()
        };
        let spec = FamilySpec {
            s,
            t,
            n,
            block_sizes,
            anchor_right: (0..s - 1).collect(),
            anchors_left: (0..l).map(window).collect(),
            regular_seeds: vec![0; l],
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_block_sizes(mut self, sizes: Vec<usize>) -> Result<Self> {
        let l = sizes.len();
        self.block_sizes = sizes;
        if self.anchors_left.len() != l {
            let f = core_size(self.s, self.t);
            self.anchors_left = (0..l)
                .map(|i| (0..self.s - 1).map(|j| (i + j) % f.max(1)).collect())
                .collect();
            self.regular_seeds.resize(l, 0);
        }
        self.validate()?;
        Ok(self)
    }

    pub fn with_seeds(mut self, seeds: Vec<usize>) -> Result<Self> {
        self.regular_seeds = seeds;
        self.validate()?;
        Ok(self)
    }

    pub fn with_anchors(mut self, right: Vec<usize>, left: Vec<Vec<usize>>) -> Result<Self> {
        self.anchor_right = right;
        self.anchors_left = left;
        self.validate()?;
        Ok(self)
    }

    pub fn l(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn core_size(&self) -> usize {
        core_size(self.s, self.t)
    }

    /// Left (and right) index ranges of each block.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = self.core_size();
        self.block_sizes
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConstruction(m));
        let (s, t) = (self.s, self.t);
        if s == 0 || s > t {
            return Err(Error::InvalidParams(format!(
                "need 1 <= s <= t, got s={s}, t={t}"
            )));
        }
        let f = self.core_size();
        let l = self.l();
        if l == 0 {
            return bad("need at least one block".into());
        }
        let floor = (t - s).max(1);
        if let Some(m) = self.block_sizes.iter().find(|&&m| m < floor) {
            return bad(format!("block of size {m} is below the minimum {floor}"));
        }
        let total: usize = self.block_sizes.iter().sum();
        if f + total != self.n {
            return bad(format!(
                "blocks sum to {total} but n - |V| = {}",
                self.n as isize - f as isize
            ));
        }
        let check_set = |set: &[usize], what: &str| -> Result<()> {
            if set.len() != s - 1 {
                return bad(format!(
                    "{what} has {} vertices, expected s-1 = {}",
                    set.len(),
                    s - 1
                ));
            }
            if set.iter().any(|&x| x >= f) {
                return bad(format!("{what} reaches outside the core of size {f}"));
            }
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return bad(format!("{what} repeats a vertex"));
            }
            Ok(())
        };
        check_set(&self.anchor_right, "S'")?;
        if self.anchors_left.len() != l {
            return bad(format!(
                "{} left anchor sets for {l} blocks",
                self.anchors_left.len()
            ));
        }
        for (i, a) in self.anchors_left.iter().enumerate() {
            check_set(a, &format!("S_{}", i + 1))?;
        }
        if self.regular_seeds.len() != l {
            return bad(format!("{} seeds for {l} blocks", self.regular_seeds.len()));
        }
        Ok(())
    }
}

/// `⌊(s+t-2)/2⌋`, the size of `V` and `V'`.
pub fn core_size(s: usize, t: usize) -> usize {
    (s + t - 2) / 2
}

pub fn build_family(spec: &FamilySpec) -> Result<BipartiteGraph> {
    spec.validate()?;
    let (s, t) = (spec.s, spec.t);
    let f = spec.core_size();
    let mut g = BipartiteGraph::new(spec.n, spec.n)?;
    for u in 0..f {
        for v in 0..f {
            g.insert(u, v);
        }
    }
    for (i, block) in spec.blocks().into_iter().enumerate() {
        let m = block.len();
        let shift = spec.regular_seeds[i];
        // (t-s)-regular: a union of t-s circulant perfect matchings.
        for (j, u) in block.clone().enumerate() {
            for k in 0..t - s {
                g.insert(u, block.start + (j + shift + k) % m);
            }
        }
        for u in block.clone() {
            for &v in &spec.anchor_right {
                g.insert(u, v);
            }
        }
        for &u in &spec.anchors_left[i] {
            for v in block.clone() {
                g.insert(u, v);
            }
        }
    }
    debug_assert_eq!(
        g.edge_count() as i64,
        crate::bounds::conjecture_value(s, t, spec.n)
    );
    Ok(g)
}

/// `s-1` left vertices joined to all of `U'` and `t-1` right vertices joined
/// to all of `U`.
pub fn build_ordered_star(s: usize, t: usize, n: usize) -> Result<BipartiteGraph> {
    if s == 0 || s > t {
        return Err(Error::InvalidParams(format!(
            "need 1 <= s <= t, got s={s}, t={t}"
        )));
    }
    if n < t {
        return Err(Error::InvalidConstruction(format!(
            "need n >= t, got n={n}, t={t}"
        )));
    }
    let mut g = BipartiteGraph::new(n, n)?;
    for u in 0..s - 1 {
        for v in 0..n {
            g.insert(u, v);
        }
    }
    for v in 0..t - 1 {
        for u in 0..n {
            g.insert(u, v);
        }
    }
    Ok(g)
}

/// Right vertex 0 is joined to all of `U`; right vertex `j >= 1` is joined to
/// the consecutive left pair `{j-1, j}`. `3n-2` edges.
pub fn build_k23_extremal(n: usize) -> Result<BipartiteGraph> {
    if n < 4 {
        return Err(Error::InvalidConstruction(format!("need n >= 4, got {n}")));
    }
    let mut g = BipartiteGraph::new(n, n)?;
    for u in 0..n {
        g.insert(u, 0);
    }
    for j in 1..n {
        g.insert(j - 1, j);
        g.insert(j, j);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biclique::{creates_oriented_copy, is_saturated, SatParams};
    use crate::bounds::conjecture_value;

    #[test]
    fn family_two_three_six() {
        let g = build_family(&FamilySpec::new(2, 3, 6, 1).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 16);
        assert!(is_saturated(&g, SatParams::unordered(2, 3).unwrap()).is_saturated());
    }

    #[test]
    fn family_two_two_five() {
        let g = build_family(&FamilySpec::new(2, 2, 5, 1).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 9);
        assert!(is_saturated(&g, SatParams::unordered(2, 2).unwrap()).is_saturated());
    }

    #[test]
    fn family_two_blocks() {
        let spec = FamilySpec::new(2, 3, 10, 2)
            .unwrap()
            .with_block_sizes(vec![4, 5])
            .unwrap();
        // |V| = 1 for (2,3), so S_1 = S_2 = {0} necessarily.
        assert_eq!(spec.anchors_left, vec![vec![0], vec![0]]);
        let g = build_family(&spec).unwrap();
        assert_eq!(g.edge_count(), 28);
        assert!(is_saturated(&g, SatParams::unordered(2, 3).unwrap()).is_saturated());
    }

    #[test]
    fn asymmetric_blocks_only_create_reversed_copies() {
        // (2,4): |V| = 2 and s-1 = 1, so S_1 = {0} and S_2 = {1} differ.
        let spec = FamilySpec::new(2, 4, 10, 2).unwrap();
        assert_ne!(spec.anchors_left[0], spec.anchors_left[1]);
        let g = build_family(&spec).unwrap();
        assert!(is_saturated(&g, SatParams::unordered(2, 4).unwrap()).is_saturated());
        let blocks = spec.blocks();
        for u in blocks[0].clone() {
            for v in blocks[1].clone() {
                assert!(!creates_oriented_copy(&g, u, v, 2, 4).unwrap());
                assert!(creates_oriented_copy(&g, u, v, 4, 2).unwrap());
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::new(2, 4, 4, 2).is_err()); // blocks of size 1 < t-s
        assert!(FamilySpec::new(3, 2, 8, 1).is_err());
        assert!(FamilySpec::new(2, 3, 6, 1)
            .unwrap()
            .with_block_sizes(vec![2, 2])
            .is_err());
        let spec = FamilySpec::new(2, 3, 6, 1).unwrap();
        assert!(spec
            .clone()
            .with_anchors(vec![0, 0], vec![vec![0]])
            .is_err());
        assert!(spec.with_seeds(vec![1, 2]).is_err());
    }

    #[test]
    fn seeds_rotate_without_changing_counts() {
        let base = FamilySpec::new(1, 4, 11, 2).unwrap();
        for seed in 0..4 {
            let g = build_family(&base.clone().with_seeds(vec![seed, seed + 1]).unwrap()).unwrap();
            assert_eq!(g.edge_count() as i64, conjecture_value(1, 4, 11));
            assert!(is_saturated(&g, SatParams::unordered(1, 4).unwrap()).is_saturated());
        }
    }

    #[test]
    fn ordered_star_examples() {
        let g = build_ordered_star(2, 2, 4).unwrap();
        assert_eq!(g.edge_count(), 7);
        assert!(is_saturated(&g, SatParams::ordered(2, 2).unwrap()).is_saturated());
        assert_eq!(build_ordered_star(2, 3, 5).unwrap().edge_count(), 13);
        let e = build_ordered_star(1, 1, 3).unwrap();
        assert_eq!(e.edge_count(), 0);
        assert!(is_saturated(&e, SatParams::ordered(1, 1).unwrap()).is_saturated());
        assert!(build_ordered_star(2, 5, 4).is_err());
    }

    #[test]
    fn k23_extremal_examples() {
        let p = SatParams::unordered(2, 3).unwrap();
        for n in 4..=8 {
            let g = build_k23_extremal(n).unwrap();
            assert_eq!(g.edge_count(), 3 * n - 2);
            assert!(is_saturated(&g, p).is_saturated());
            // Every missing edge closes a copy with three vertices in the
            // side holding the degree-two vertices' neighbours.
            assert!(is_saturated(&g.transpose(), SatParams::ordered(2, 3).unwrap()).is_saturated());
        }
        assert!(build_k23_extremal(3).is_err());
    }
}
