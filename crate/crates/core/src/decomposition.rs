//! Core/shell edge-counting structure on a concrete graph.
//!
//! A core is a pair of vertex sets `A_0 ⊆ U`, `A_0' ⊆ U'` holding two
//! non-adjacent vertices `u_0`, `u_0'` whose neighbourhoods lie inside it.
//! The shell `A ∪ A'` is the closure of the core under "join when at least
//! `t-1` neighbours are already inside". The rest of each side is split into
//! `B_1, B_2, C_1, C_2` by neighbour counts, and the lower bounds and their
//! intermediate facts are then checked against the actual graph.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::biclique::SatParams;
use crate::bounds::{claim1_bound, lemma1_bound, prop1_bound, ShellStats};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreSpec {
    pub u0: usize,
    pub u0p: usize,
    pub a0: Vec<usize>,
    pub a0p: Vec<usize>,
}

impl CoreSpec {
    /// `A_0 = {u_0} ∪ N(u_0')`, `A_0' = {u_0'} ∪ N(u_0)`.
    pub fn from_pair(g: &BipartiteGraph, u0: usize, u0p: usize) -> Result<Self> {
        if g.has_edge(u0, u0p)? {
            return Err(Error::InvalidCore(format!(
                "u0={u0} and u0'={u0p} are adjacent"
            )));
        }
        let mut a0: Vec<usize> = g.right_neighbors(u0p).collect();
        a0.push(u0);
        a0.sort_unstable();
        let mut a0p: Vec<usize> = g.left_neighbors(u0).collect();
        a0p.push(u0p);
        a0p.sort_unstable();
        Ok(CoreSpec { u0, u0p, a0, a0p })
    }

    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCore(m));
        if self.a0.iter().any(|&u| u >= g.n_left()) || self.a0p.iter().any(|&v| v >= g.n_right()) {
            return bad("core vertex out of range".into());
        }
        if g.has_edge(self.u0, self.u0p)? {
            return bad(format!("u0={} and u0'={} are adjacent", self.u0, self.u0p));
        }
        let a0: BTreeSet<_> = self.a0.iter().copied().collect();
        let a0p: BTreeSet<_> = self.a0p.iter().copied().collect();
        if a0.len() != self.a0.len() || a0p.len() != self.a0p.len() {
            return bad("core sets repeat a vertex".into());
        }
        if !a0.contains(&self.u0) || !a0p.contains(&self.u0p) {
            return bad("distinguished vertices must lie in the core".into());
        }
        if let Some(v) = g.left_neighbors(self.u0).find(|v| !a0p.contains(v)) {
            return bad(format!("neighbour {v} of u0 lies outside A0'"));
        }
        if let Some(u) = g.right_neighbors(self.u0p).find(|u| !a0.contains(u)) {
            return bad(format!("neighbour {u} of u0' lies outside A0"));
        }
        Ok(())
    }

    pub fn transposed(&self) -> CoreSpec {
        CoreSpec {
            u0: self.u0p,
            u0p: self.u0,
            a0: self.a0p.clone(),
            a0p: self.a0.clone(),
        }
    }
}

/// Lexicographically least non-adjacent pair `(u_0, u_0')` with both degrees
/// at most `s+t-3`, turned into a core.
pub fn find_core(g: &BipartiteGraph, params: SatParams) -> Option<CoreSpec> {
    let cap = params.s() + params.t() - 3;
    let small_right: Vec<usize> = (0..g.n_right())
        .filter(|&v| params.s() + params.t() >= 3 && g.right_degree(v) <= cap)
        .collect();
    (0..g.n_left())
        .filter(|&u| params.s() + params.t() >= 3 && g.left_degree(u) <= cap)
        .find_map(|u| {
            small_right
                .iter()
                .find(|&&v| !g.adjacent(u, v))
                .map(|&v| CoreSpec::from_pair(g, u, v).expect("non-adjacent"))
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One step of the shell closure: the vertex and how many of its neighbours
/// were already inside when it joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Activation {
    pub side: Side,
    pub vertex: usize,
    pub inside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shell {
    pub a: Vec<usize>,
    pub ap: Vec<usize>,
    pub activation: Vec<Activation>,
}

/// Least superset of the core closed under "join with `>= t-1` neighbours inside".
pub fn shell_closure(g: &BipartiteGraph, core: &CoreSpec, t: usize) -> Shell {
    let need = t.saturating_sub(1);
    let mut in_a = vec![false; g.n_left()];
    let mut in_ap = vec![false; g.n_right()];
    let mut cnt_l = vec![0usize; g.n_left()];
    let mut cnt_r = vec![0usize; g.n_right()];
    for &u in &core.a0 {
        in_a[u] = true;
        for v in g.left_neighbors(u) {
            cnt_r[v] += 1;
        }
    }
    for &v in &core.a0p {
        in_ap[v] = true;
        for u in g.right_neighbors(v) {
            cnt_l[u] += 1;
        }
    }
    let mut queue: std::collections::VecDeque<(Side, usize)> = (0..g.n_left())
        .filter(|&u| !in_a[u] && cnt_l[u] >= need)
        .map(|u| (Side::Left, u))
        .chain(
            (0..g.n_right())
                .filter(|&v| !in_ap[v] && cnt_r[v] >= need)
                .map(|v| (Side::Right, v)),
        )
        .collect();
    let mut activation = Vec::new();
    while let Some((side, x)) = queue.pop_front() {
        match side {
            Side::Left => {
                if in_a[x] {
                    continue;
                }
                in_a[x] = true;
                activation.push(Activation {
                    side,
                    vertex: x,
                    inside: cnt_l[x],
                });
                for v in g.left_neighbors(x) {
                    cnt_r[v] += 1;
                    if !in_ap[v] && cnt_r[v] == need {
                        queue.push_back((Side::Right, v));
                    }
                }
            }
            Side::Right => {
                if in_ap[x] {
                    continue;
                }
                in_ap[x] = true;
                activation.push(Activation {
                    side,
                    vertex: x,
                    inside: cnt_r[x],
                });
                for u in g.right_neighbors(x) {
                    cnt_l[u] += 1;
                    if !in_a[u] && cnt_l[u] == need {
                        queue.push_back((Side::Left, u));
                    }
                }
            }
        }
    }
    Shell {
        a: (0..g.n_left()).filter(|&u| in_a[u]).collect(),
        ap: (0..g.n_right()).filter(|&v| in_ap[v]).collect(),
        activation,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub core: CoreSpec,
    pub a: Vec<usize>,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub ap: Vec<usize>,
    pub b1p: Vec<usize>,
    pub b2p: Vec<usize>,
    pub c1p: Vec<usize>,
    pub c2p: Vec<usize>,
    pub stats: ShellStats,
    pub activation: Vec<Activation>,
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in set {
        m[x] = true;
    }
    m
}

impl Decomposition {
    pub fn b(&self) -> Vec<usize> {
        union(&self.b1, &self.b2)
    }

    pub fn bp(&self) -> Vec<usize> {
        union(&self.b1p, &self.b2p)
    }

    pub fn c(&self) -> Vec<usize> {
        union(&self.c1, &self.c2)
    }

    pub fn cp(&self) -> Vec<usize> {
        union(&self.c1p, &self.c2p)
    }

    /// The same structure read on the graph with `U` and `U'` exchanged.
    pub fn transposed(&self) -> Decomposition {
        let st = self.stats;
        Decomposition {
            core: self.core.transposed(),
            a: self.ap.clone(),
            b1: self.b1p.clone(),
            b2: self.b2p.clone(),
            c1: self.c1p.clone(),
            c2: self.c2p.clone(),
            ap: self.a.clone(),
            b1p: self.b1.clone(),
            b2p: self.b2.clone(),
            c1p: self.c1.clone(),
            c2p: self.c2.clone(),
            stats: ShellStats {
                x0: st.x0p,
                x0p: st.x0,
                x: st.xp,
                xp: st.x,
                e: st.e,
                y: st.yp,
                yp: st.y,
            },
            activation: self
                .activation
                .iter()
                .map(|a| Activation {
                    side: match a.side {
                        Side::Left => Side::Right,
                        Side::Right => Side::Left,
                    },
                    ..*a
                })
                .collect(),
        }
    }
}

/// Builds the structure after checking the core and that `δ >= t-1`.
pub fn decompose(g: &BipartiteGraph, params: SatParams, core: &CoreSpec) -> Result<Decomposition> {
    let required = params.t() - 1;
    let min_degree = g.min_degree();
    if min_degree < required {
        return Err(Error::MinDegreeTooLow {
            min_degree,
            required,
        });
    }
    decompose_unchecked(g, params, core)
}

/// Builds the structure on any square graph with a valid core, without the
/// minimum-degree requirement.
pub fn decompose_unchecked(
    g: &BipartiteGraph,
    params: SatParams,
    core: &CoreSpec,
) -> Result<Decomposition> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_left: g.n_left(),
            n_right: g.n_right(),
            what: "decomposition",
        });
    }
    core.validate(g)?;
    let (s, t) = (params.s(), params.t());
    let shell = shell_closure(g, core, t);
    let in_a = mask(g.n_left(), &shell.a);
    let in_ap = mask(g.n_right(), &shell.ap);

    let count = |it: &mut dyn Iterator<Item = usize>, m: &[bool]| it.filter(|&x| m[x]).count();

    let (mut b, mut c) = (Vec::new(), Vec::new());
    for u in (0..g.n_left()).filter(|&u| !in_a[u]) {
        if count(&mut g.left_neighbors(u), &in_ap) >= s - 1 {
            b.push(u);
        } else {
            c.push(u);
        }
    }
    let (mut bp, mut cp) = (Vec::new(), Vec::new());
    for v in (0..g.n_right()).filter(|&v| !in_ap[v]) {
        if count(&mut g.right_neighbors(v), &in_a) >= s - 1 {
            bp.push(v);
        } else {
            cp.push(v);
        }
    }
    let in_b = mask(g.n_left(), &b);
    let in_bp = mask(g.n_right(), &bp);
    let (b1, b2): (Vec<usize>, Vec<usize>) = b
        .iter()
        .partition(|&&u| count(&mut g.left_neighbors(u), &in_bp) >= t - s);
    let (b1p, b2p): (Vec<usize>, Vec<usize>) = bp
        .iter()
        .partition(|&&v| count(&mut g.right_neighbors(v), &in_b) >= t - s);
    let in_b2 = mask(g.n_left(), &b2);
    let in_b2p = mask(g.n_right(), &b2p);
    let (c1, c2): (Vec<usize>, Vec<usize>) = c
        .iter()
        .partition(|&&u| g.left_neighbors(u).filter(|&v| !in_b2p[v]).count() >= s - 1);
    let (c1p, c2p): (Vec<usize>, Vec<usize>) = cp
        .iter()
        .partition(|&&v| g.right_neighbors(v).filter(|&u| !in_b2[u]).count() >= s - 1);

    let stats = ShellStats {
        x0: core.a0.len(),
        x0p: core.a0p.len(),
        x: shell.a.len(),
        xp: shell.ap.len(),
        e: g.edges_between(&core.a0, &core.a0p),
        y: c2.len(),
        yp: c2p.len(),
    };
    Ok(Decomposition {
        core: core.clone(),
        a: shell.a,
        b1,
        b2,
        c1,
        c2,
        ap: shell.ap,
        b1p,
        b2p,
        c1p,
        c2p,
        stats,
        activation: shell.activation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundCheck {
    Holds {
        bound: i64,
        edges: usize,
        slack: i64,
    },
    Violated {
        bound: i64,
        edges: usize,
        slack: i64,
    },
    Inapplicable {
        reason: String,
    },
}

impl BoundCheck {
    fn compare(bound: i64, edges: usize) -> Self {
        let slack = edges as i64 - bound;
        if slack >= 0 {
            BoundCheck::Holds {
                bound,
                edges,
                slack,
            }
        } else {
            BoundCheck::Violated {
                bound,
                edges,
                slack,
            }
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, BoundCheck::Holds { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, BoundCheck::Violated { .. })
    }

    pub fn slack(&self) -> Option<i64> {
        match self {
            BoundCheck::Holds { slack, .. } | BoundCheck::Violated { slack, .. } => Some(*slack),
            BoundCheck::Inapplicable { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub lemma1: BoundCheck,
    /// Claim bound, evaluated in the orientation with `|C_2| <= |C_2'|`.
    pub claim1: BoundCheck,
    pub claim1_transposed: bool,
}

/// Lemma bound (and the claim bound in its valid orientation) against the
/// true edge count.
pub fn verify_lemma1(g: &BipartiteGraph, params: SatParams, d: &Decomposition) -> Lemma1Report {
    let (s, t, n) = (params.s(), params.t(), g.n_left());
    let min_degree = g.min_degree();
    if min_degree + 1 < t {
        let reason = format!("minimum degree {min_degree} < t-1 = {}", t - 1);
        return Lemma1Report {
            lemma1: BoundCheck::Inapplicable {
                reason: reason.clone(),
            },
            claim1: BoundCheck::Inapplicable { reason },
            claim1_transposed: false,
        };
    }
    let edges = g.edge_count();
    let lemma1 = BoundCheck::compare(lemma1_bound(s, t, n, &d.stats), edges);
    let transposed = d.stats.y > d.stats.yp;
    let oriented = if transposed {
        d.transposed().stats
    } else {
        d.stats
    };
    Lemma1Report {
        lemma1,
        claim1: BoundCheck::compare(claim1_bound(s, t, n, &oriented), edges),
        claim1_transposed: transposed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub passed: bool,
    /// Offending vertices (or pairs, flattened as `[u, v]`).
    pub counterexamples: Vec<Vec<usize>>,
}

impl ClaimCheck {
    fn new(claim: &'static str, counterexamples: Vec<Vec<usize>>) -> Self {
        ClaimCheck {
            claim,
            passed: counterexamples.is_empty(),
            counterexamples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsequenceReport {
    pub c2_complete: ClaimCheck,
    pub right_c_reach: ClaimCheck,
    pub left_c_reach: ClaimCheck,
}

impl ConsequenceReport {
    pub fn all_pass(&self) -> bool {
        self.c2_complete.passed && self.right_c_reach.passed && self.left_c_reach.passed
    }
}

pub fn verify_consequences(
    g: &BipartiteGraph,
    params: SatParams,
    d: &Decomposition,
) -> ConsequenceReport {
    let need = params.t() - 1;
    let missing: Vec<Vec<usize>> =
        d.c2.iter()
            .flat_map(|&u| d.c2p.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| !g.adjacent(u, v))
            .map(|(u, v)| vec![u, v])
            .collect();
    let ab = mask(g.n_left(), &union(&d.a, &d.b()));
    let abp = mask(g.n_right(), &union(&d.ap, &d.bp()));
    let right_short = d
        .cp()
        .into_iter()
        .filter(|&v| g.right_neighbors(v).filter(|&u| ab[u]).count() < need)
        .map(|v| vec![v])
        .collect();
    let left_short = d
        .c()
        .into_iter()
        .filter(|&u| g.left_neighbors(u).filter(|&v| abp[v]).count() < need)
        .map(|u| vec![u])
        .collect();
    ConsequenceReport {
        c2_complete: ClaimCheck::new("C2 x C2' is complete", missing),
        right_c_reach: ClaimCheck::new(
            "every vertex of C' has >= t-1 neighbours in A ∪ B",
            right_short,
        ),
        left_c_reach: ClaimCheck::new(
            "every vertex of C has >= t-1 neighbours in A' ∪ B'",
            left_short,
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EqualityReport {
    Skipped {
        reason: String,
    },
    Checked {
        transposed: bool,
        items: Vec<ClaimCheck>,
    },
}

impl EqualityReport {
    pub fn all_pass(&self) -> Option<bool> {
        match self {
            EqualityReport::Skipped { .. } => None,
            EqualityReport::Checked { items, .. } => Some(items.iter().all(|c| c.passed)),
        }
    }
}

/// When the claim bound is tight, checks the four forced equalities.
pub fn verify_equality_conditions(
    g: &BipartiteGraph,
    params: SatParams,
    d: &Decomposition,
) -> EqualityReport {
    let transposed = d.stats.y > d.stats.yp;
    let (gt, dt);
    let (g, d) = if transposed {
        gt = g.transpose();
        dt = d.transposed();
        (&gt, &dt)
    } else {
        (g, d)
    };
    let (s, t, n) = (params.s(), params.t(), g.n_left());
    let bound = claim1_bound(s, t, n, &d.stats);
    if bound != g.edge_count() as i64 {
        return EqualityReport::Skipped {
            reason: format!(
                "claim bound {bound} differs from edge count {}",
                g.edge_count()
            ),
        };
    }
    let ab = mask(n, &union(&d.a, &d.b()));
    let in_ap = mask(n, &d.ap);
    let in_b2p = mask(n, &d.b2p);
    let item1 = union(&d.b1p, &d.cp())
        .into_iter()
        .filter(|&v| g.right_neighbors(v).filter(|&u| ab[u]).count() != t - 1)
        .map(|v| vec![v])
        .collect();
    let item2 = d
        .b()
        .into_iter()
        .filter(|&u| g.left_neighbors(u).filter(|&v| in_ap[v]).count() != s - 1)
        .map(|u| vec![u])
        .collect();
    let item3 =
        d.c1.iter()
            .copied()
            .filter(|&u| g.left_neighbors(u).filter(|&v| !in_b2p[v]).count() != s - 1)
            .map(|u| vec![u])
            .collect();
    let (y, yp, s1) = (d.stats.y as i64, d.stats.yp as i64, s as i64 - 1);
    let item4 = if y * s1 - y * yp == s1 * s1 / 4 {
        vec![]
    } else {
        vec![vec![d.stats.y, d.stats.yp]]
    };
    EqualityReport::Checked {
        transposed,
        items: vec![
            ClaimCheck::new(
                "B1' ∪ C' vertices have exactly t-1 neighbours in A ∪ B",
                item1,
            ),
            ClaimCheck::new("B vertices have exactly s-1 neighbours in A'", item2),
            ClaimCheck::new("C1 vertices have exactly s-1 neighbours outside B2'", item3),
            ClaimCheck::new("y(s-1) - y y' = floor((s-1)^2/4)", item4),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop1Report {
    pub min_degree: usize,
    pub check: BoundCheck,
}

/// Low-minimum-degree route: `e(G) >= n(t+s-2) - (t-1)(t-2)` when `δ < t-1`.
pub fn verify_prop1_path(g: &BipartiteGraph, params: SatParams) -> Prop1Report {
    let (s, t) = (params.s(), params.t());
    let min_degree = g.min_degree();
    let check = if min_degree + 1 >= t {
        BoundCheck::Inapplicable {
            reason: format!("minimum degree {min_degree} >= t-1 = {}", t - 1),
        }
    } else {
        BoundCheck::compare(prop1_bound(s, t, g.n_left()), g.edge_count())
    };
    Prop1Report { min_degree, check }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Analysis {
    /// `δ < t-1`: only the direct count applies.
    LowDegree { prop1: Prop1Report },
    /// `δ >= t-1` but no core was found or supplied.
    NoCore { min_degree: usize },
    Shell {
        decomposition: Decomposition,
        lemma1: Lemma1Report,
        consequences: ConsequenceReport,
        equality: EqualityReport,
    },
}

impl Analysis {
    /// No checked statement failed.
    pub fn is_consistent(&self) -> bool {
        match self {
            Analysis::LowDegree { prop1 } => !prop1.check.is_violated(),
            Analysis::NoCore { .. } => true,
            Analysis::Shell {
                lemma1,
                consequences,
                equality,
                ..
            } => {
                !lemma1.lemma1.is_violated()
                    && !lemma1.claim1.is_violated()
                    && consequences.all_pass()
                    && equality.all_pass() != Some(false)
            }
        }
    }
}

/// Routes a (saturated) graph to the applicable checks.
pub fn analyze(g: &BipartiteGraph, params: SatParams, core: Option<CoreSpec>) -> Result<Analysis> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_left: g.n_left(),
            n_right: g.n_right(),
            what: "decomposition",
        });
    }
    let min_degree = g.min_degree();
    if min_degree + 1 < params.t() {
        return Ok(Analysis::LowDegree {
            prop1: verify_prop1_path(g, params),
        });
    }
    let Some(core) = core.or_else(|| find_core(g, params)) else {
        return Ok(Analysis::NoCore { min_degree });
    };
    let d = decompose(g, params, &core)?;
    Ok(Analysis::Shell {
        lemma1: verify_lemma1(g, params, &d),
        consequences: verify_consequences(g, params, &d),
        equality: verify_equality_conditions(g, params, &d),
        decomposition: d,
    })
}
