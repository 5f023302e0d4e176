//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bisat::biclique::{closure, contains_biclique, greedy_saturate, is_saturated, SatParams};
use bisat::bounds::{conjecture_value, ordered_value, theorem_lower};
use bisat::canon::{canonical_form, SideMode};
use bisat::constructions::{build_family, build_k23_extremal, build_ordered_star, FamilySpec};
use bisat::decomposition::{
    decompose, find_core, verify_consequences, verify_lemma1, verify_prop1_path, BoundCheck,
};
use bisat::search::{search_sat, search_wsat, SearchConfig};
use bisat::BipartiteGraph;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn sat_min(n: usize, p: SatParams) -> Result<usize, String> {
    let o = search_sat(n, p, &SearchConfig::default()).map_err(|e| e.to_string())?;
    for w in &o.witnesses {
        ensure(is_saturated(w, p).is_saturated(), || {
            format!("witness not saturated:\n{w}")
        })?;
    }
    o.minimum
        .ok_or_else(|| format!("no saturated graph at n={n}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for (s, t, n, expect) in [(2, 2, 3, 5), (2, 2, 4, 7), (1, 2, 4, 4)] {
        let p = SatParams::ordered(s, t).unwrap();
        let got = sat_min(n, p)?;
        let formula = ordered_value(s, t, n);
        ensure(got == expect && formula == expect as i64, || {
            format!("ordered ({s},{t}) n={n}: search {got}, formula {formula}, expected {expect}")
        })?;
        seen.push(got.to_string());
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "ordered values {} in {:.2?}",
        seen.join(", "),
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = SatParams::unordered(2, 3).unwrap();
    let got = sat_min(4, p)?;
    ensure(got == 10, || {
        format!("search at n=4 gave {got}, expected 10")
    })?;
    for n in 4..=12 {
        let g = build_k23_extremal(n).map_err(|e| e.to_string())?;
        ensure(g.edge_count() == 3 * n - 2, || {
            format!("n={n}: {} edges", g.edge_count())
        })?;
        let v = is_saturated(&g, p);
        ensure(v.is_saturated(), || format!("n={n}: {v:?}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "sat(n=4) = 10, extremal graphs n=4..12 saturated with 3n-2 edges in {:.2?}",
        start.elapsed()
    ))
}

fn criterion_3() -> Outcome {
    let p = SatParams::unordered(2, 2).unwrap();
    let got = (sat_min(3, p)?, sat_min(4, p)?);
    ensure(got == (5, 7), || format!("got {got:?}, expected (5, 7)"))?;
    Ok("unordered (2,2): n=3 -> 5, n=4 -> 7".into())
}

fn family_grid() -> Vec<(FamilySpec, BipartiteGraph)> {
    let mut out = Vec::new();
    for s in 1..=4 {
        for t in s..=4 {
            for n in t..=12 {
                for l in 1..=3 {
                    if let Ok(spec) = FamilySpec::new(s, t, n, l) {
                        let g = build_family(&spec).expect("valid spec builds");
                        out.push((spec, g));
                    }
                }
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let grid = family_grid();
    let mut failures = Vec::new();
    for (spec, g) in &grid {
        let p = SatParams::unordered(spec.s, spec.t).unwrap();
        let expect = conjecture_value(spec.s, spec.t, spec.n);
        let v = is_saturated(g, p);
        if g.edge_count() as i64 != expect || !v.is_saturated() {
            failures.push(format!(
                "(s,t,n,l)=({},{},{},{}): {} edges vs {expect}, {v:?}",
                spec.s,
                spec.t,
                spec.n,
                spec.l(),
                g.edge_count()
            ));
        }
    }
    ensure(failures.is_empty(), || {
        format!("{} failures: {}", failures.len(), failures.join("; "))
    })?;
    ensure(grid.len() > 100, || {
        format!("only {} valid specs", grid.len())
    })?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} family instances saturated with conjecture_value edges in {:.2?}",
        grid.len(),
        start.elapsed()
    ))
}

const GREEDY_COMBOS: [(usize, usize, usize); 12] = [
    (2, 3, 6),
    (2, 3, 8),
    (2, 3, 10),
    (2, 4, 6),
    (2, 4, 8),
    (2, 4, 10),
    (3, 4, 6),
    (3, 4, 8),
    (3, 4, 10),
    (3, 3, 6),
    (3, 3, 8),
    (3, 3, 10),
];

/// 200 greedy saturations spread round-robin over the twelve combinations.
fn greedy_instances() -> Vec<(SatParams, BipartiteGraph)> {
    (0..200u64)
        .map(|i| {
            let (s, t, n) = GREEDY_COMBOS[i as usize % GREEDY_COMBOS.len()];
            let p = SatParams::unordered(s, t).unwrap();
            let seed = i / GREEDY_COMBOS.len() as u64;
            let empty = BipartiteGraph::new(n, n).unwrap();
            (p, greedy_saturate(&empty, p, seed).unwrap())
        })
        .collect()
}

fn criterion_5(instances: &[(SatParams, BipartiteGraph)]) -> Outcome {
    let mut violations = Vec::new();
    for (i, (p, g)) in instances.iter().enumerate() {
        let floor = theorem_lower(p.s(), p.t(), g.n_left());
        if (g.edge_count() as i64) < floor || !is_saturated(g, *p).is_saturated() {
            violations.push(format!("instance {i}: {} edges < {floor}", g.edge_count()));
        }
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!(
        "{} greedy instances, all at or above theorem_lower",
        instances.len()
    ))
}

fn criterion_6(instances: &[(SatParams, BipartiteGraph)]) -> Outcome {
    let (mut shell, mut low, mut coreless) = (0, 0, 0);
    let mut failures = Vec::new();
    for (i, (p, g)) in instances.iter().enumerate() {
        if g.min_degree() + 1 < p.t() {
            let r = verify_prop1_path(g, *p);
            if !r.check.holds() {
                failures.push(format!("instance {i}: {r:?}"));
            }
            low += 1;
            continue;
        }
        let Some(core) = find_core(g, *p) else {
            coreless += 1;
            continue;
        };
        let d = decompose(g, *p, &core).map_err(|e| format!("instance {i}: {e}"))?;
        let lemma = verify_lemma1(g, *p, &d);
        let cons = verify_consequences(g, *p, &d);
        let slack_ok = matches!(lemma.lemma1, BoundCheck::Holds { slack, .. } if slack >= 0);
        if !slack_ok || !cons.all_pass() {
            failures.push(format!("instance {i}: {lemma:?} {cons:?}"));
        }
        shell += 1;
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!(
        "{shell} shell checks, {low} low-degree checks, {coreless} without a core; zero failures"
    ))
}

fn criterion_7(instances: &[(SatParams, BipartiteGraph)]) -> Outcome {
    let p = SatParams::ordered(2, 2).unwrap();
    let w = search_wsat(3, p, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let s = sat_min(3, p)?;
    ensure(w.minimum == Some(5) && s == 5, || {
        format!("w-sat {:?}, sat {s}", w.minimum)
    })?;

    let mut corpus: Vec<(SatParams, BipartiteGraph)> = instances.to_vec();
    for (spec, g) in family_grid() {
        corpus.push((SatParams::unordered(spec.s, spec.t).unwrap(), g));
    }
    for n in 4..=12 {
        corpus.push((
            SatParams::unordered(2, 3).unwrap(),
            build_k23_extremal(n).unwrap(),
        ));
    }
    for (s, t) in [(1, 2), (2, 2), (2, 3), (2, 4), (3, 4)] {
        for n in t..=8 {
            corpus.push((
                SatParams::ordered(s, t).unwrap(),
                build_ordered_star(s, t, n).unwrap(),
            ));
        }
    }
    for (s, t, n) in [(2, 2, 3), (2, 2, 4), (2, 3, 4), (2, 3, 5), (3, 3, 4)] {
        let p = SatParams::unordered(s, t).unwrap();
        let cfg = SearchConfig::default().with_witness_cap(None);
        for g in search_sat(n, p, &cfg).unwrap().witnesses {
            corpus.push((p, g));
        }
    }
    let mut stuck = Vec::new();
    for (i, (p, g)) in corpus.iter().enumerate() {
        ensure(is_saturated(g, *p).is_saturated(), || {
            format!("corpus graph {i} is not saturated")
        })?;
        if !closure(g, *p).graph.is_complete() {
            stuck.push(i);
        }
    }
    ensure(stuck.is_empty(), || {
        format!("closure incomplete for corpus graphs {stuck:?}")
    })?;
    Ok(format!(
        "w-sat = sat = 5 at n=3; {} saturated corpus graphs all percolate",
        corpus.len()
    ))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn brute_contains(g: &BipartiteGraph, a: usize, b: usize) -> bool {
    subsets(g.n_left(), a).iter().any(|l| {
        subsets(g.n_right(), b)
            .iter()
            .any(|r| l.iter().all(|&u| r.iter().all(|&v| g.adjacent(u, v))))
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

fn all_graphs(l: usize, r: usize) -> Vec<BipartiteGraph> {
    (0u32..1 << (l * r))
        .map(|m| {
            BipartiteGraph::from_edges(
                l,
                r,
                (0..l * r)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| (i / r, i % r)),
            )
            .unwrap()
        })
        .collect()
}

/// Orbit count by relabelling every graph with every permutation pair.
fn brute_orbits(l: usize, r: usize, swap: bool) -> usize {
    let (pl, pr) = (permutations(l), permutations(r));
    let mut seen: HashSet<String> = HashSet::new();
    let mut orbits = 0;
    for g in all_graphs(l, r) {
        if seen.contains(&g.to_bmat()) {
            continue;
        }
        orbits += 1;
        for a in &pl {
            for b in &pr {
                let h = g.permuted(a, b);
                if swap {
                    seen.insert(h.transpose().to_bmat());
                }
                seen.insert(h.to_bmat());
            }
        }
    }
    orbits
}

fn canonical_orbits(l: usize, r: usize, mode: SideMode) -> usize {
    all_graphs(l, r)
        .iter()
        .map(|g| canonical_form(g, mode).unwrap())
        .collect::<HashSet<_>>()
        .len()
}

fn criterion_8() -> Outcome {
    let graphs = all_graphs(3, 3);
    let mut checks = 0;
    for g in &graphs {
        for a in 1..=3 {
            for b in 1..=3 {
                let fast = contains_biclique(g, a, b);
                if let Some(w) = &fast {
                    ensure(
                        w.left.len() == a && w.right.len() == b && w.is_valid_in(g),
                        || format!("bad witness {w:?} for ({a},{b}) in\n{g}"),
                    )?;
                }
                ensure(fast.is_some() == brute_contains(g, a, b), || {
                    format!("disagreement for ({a},{b}) on\n{g}")
                })?;
                checks += 1;
            }
        }
    }
    let mut counts = Vec::new();
    for (l, r, mode) in [
        (2, 2, SideMode::FixedSides),
        (2, 3, SideMode::FixedSides),
        (2, 2, SideMode::SwappableSides),
    ] {
        let swap = mode == SideMode::SwappableSides;
        let (fast, brute) = (canonical_orbits(l, r, mode), brute_orbits(l, r, swap));
        ensure(fast == brute, || {
            format!("{l}x{r} {mode:?}: canonical {fast}, brute force {brute}")
        })?;
        counts.push(format!(
            "{l}x{r}{}={fast}",
            if swap { " swappable" } else { "" }
        ));
    }
    Ok(format!(
        "{checks} containment checks agree; orbit counts {}",
        counts.join(", ")
    ))
}

fn main() -> ExitCode {
    let instances = greedy_instances();
    let results: Vec<(&str, Outcome)> = vec![
        ("ordered exactness", criterion_1()),
        ("K_{2,3} theorem", criterion_2()),
        ("s = t case", criterion_3()),
        ("construction suite", criterion_4()),
        ("universal floor", criterion_5(&instances)),
        ("shell bound and consequences", criterion_6(&instances)),
        ("weak saturation", criterion_7(&instances)),
        ("oracle cross-validation", criterion_8()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
