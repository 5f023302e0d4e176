use bisat::biclique::{is_saturated, SatParams, Verdict};
use bisat::bounds::conjecture_value;
use bisat::constructions::{build_family, build_k23_extremal, FamilySpec};

fn check(n: usize) {
    let p = SatParams::unordered(2, 3).unwrap();
    let g = build_k23_extremal(n).unwrap();
    assert_eq!(g.edge_count(), 3 * n - 2);
    assert_eq!(is_saturated(&g, p), Verdict::Saturated);

    let spec = FamilySpec::new(3, 4, n, 3).unwrap();
    let g = build_family(&spec).unwrap();
    assert_eq!(g.edge_count() as i64, conjecture_value(3, 4, n));
    assert!(is_saturated(&g, SatParams::unordered(3, 4).unwrap()).is_saturated());

    // One edge fewer is no longer saturated.
    let mut h = g.clone();
    let (u, v) = g.edges().last().unwrap();
    h.remove_edge(u, v).unwrap();
    assert!(!is_saturated(&h, SatParams::unordered(3, 4).unwrap()).is_saturated());
}

#[test]
fn multi_word_hosts() {
    check(300);
}

#[test]
#[ignore = "about a minute per graph in release mode"]
fn ten_thousand() {
    check(10_000);
}
