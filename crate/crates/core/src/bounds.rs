//! Closed-form saturation values and lower bounds.
//!
//! Every evaluator is exact integer arithmetic returning `i64`; small `n` can
//! make a bound negative, which is reported as is. [`report`] wraps a value
//! with the range in which the formula is actually claimed.

use serde::Serialize;

/// `n² - (n-s+1)²`: the `K_{s,s}` value, valid for `1 <= s <= n`.
pub fn ehm_value(s: usize, n: usize) -> i64 {
    let (s, n) = (s as i64, n as i64);
    n * n - (n - s + 1) * (n - s + 1)
}

/// `n² - (n-s+1)(n-t+1)`: the ordered `K_{(s,t)}` value.
pub fn ordered_value(s: usize, t: usize, n: usize) -> i64 {
    let (s, t, n) = (s as i64, t as i64, n as i64);
    n * n - (n - s + 1) * (n - t + 1)
}

fn quarter_square(k: i64) -> i64 {
    k * k / 4
}

/// `(s+t-2)n - ⌊((s+t-2)/2)²⌋`, the conjectured unordered value.
pub fn conjecture_value(s: usize, t: usize, n: usize) -> i64 {
    let k = (s + t) as i64 - 2;
    k * n as i64 - quarter_square(k)
}

/// `(s+t-2)n - (s+t-2)²`, the proven unordered lower bound for `n >= t`.
pub fn theorem_lower(s: usize, t: usize, n: usize) -> i64 {
    let k = (s + t) as i64 - 2;
    k * n as i64 - k * k
}

/// `n(t+s-2) - (t-1)(t-2)`, valid for saturated graphs of minimum degree `< t-1`.
pub fn prop1_bound(s: usize, t: usize, n: usize) -> i64 {
    let (s, t, n) = (s as i64, t as i64, n as i64);
    n * (t + s - 2) - (t - 1) * (t - 2)
}

/// Sizes read off a core/shell structure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShellStats {
    /// `|A_0|`, `|A_0'|`.
    pub x0: usize,
    pub x0p: usize,
    /// `|A|`, `|A'|`.
    pub x: usize,
    pub xp: usize,
    /// Edges between `A_0` and `A_0'`.
    pub e: usize,
    /// `|C_2|`, `|C_2'|`.
    pub y: usize,
    pub yp: usize,
}

fn shell_base(s: usize, t: usize, n: usize, st: &ShellStats) -> i64 {
    let (s, t, n) = (s as i64, t as i64, n as i64);
    n * (s + t - 2) - (st.x0 + st.x0p) as i64 * (t - 1) - quarter_square(s - 1) + st.e as i64
}

/// Edge bound from a core: base plus `min((t-s)x, (t-s)x')`.
pub fn lemma1_bound(s: usize, t: usize, n: usize, st: &ShellStats) -> i64 {
    let d = (t - s) as i64;
    shell_base(s, t, n, st) + (d * st.x as i64).min(d * st.xp as i64)
}

/// Edge bound when `|C_2| <= |C_2'|`: base plus `(t-s)x`.
pub fn claim1_bound(s: usize, t: usize, n: usize, st: &ShellStats) -> i64 {
    shell_base(s, t, n, st) + (t - s) as i64 * st.x as i64
}

/// `(2s-2)n`: leading term of the weak saturation number only. Not a bound
/// at any finite `n`.
pub fn wsat_envelope(s: usize, n: usize) -> i64 {
    (2 * s as i64 - 2) * n as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Ehm,
    Ordered,
    Conjecture,
    Theorem,
    Prop1,
    WsatEnvelope,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Ehm,
        BoundKind::Ordered,
        BoundKind::Conjecture,
        BoundKind::Theorem,
        BoundKind::Prop1,
        BoundKind::WsatEnvelope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Ehm => "ehm",
            BoundKind::Ordered => "ordered",
            BoundKind::Conjecture => "conjecture",
            BoundKind::Theorem => "theorem",
            BoundKind::Prop1 => "prop1",
            BoundKind::WsatEnvelope => "wsat_envelope",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub value: i64,
    pub s: usize,
    pub t: usize,
    pub n: usize,
    /// False when the inputs are outside the range the formula is stated for.
    pub in_range: bool,
    pub note: &'static str,
}

pub fn report(kind: BoundKind, s: usize, t: usize, n: usize) -> BoundReport {
    let (value, in_range, note) = match kind {
        BoundKind::Ehm => (ehm_value(s, n), 1 <= s && s <= n, "exact sat for K_{s,s}"),
        BoundKind::Ordered => (
            ordered_value(s, t, n),
            1 <= s && s <= t && t <= n,
            "exact ordered sat for K_(s,t)",
        ),
        BoundKind::Conjecture => (
            conjecture_value(s, t, n),
            1 <= s && s <= t && t <= n,
            "conjectured unordered sat for large n",
        ),
        BoundKind::Theorem => (
            theorem_lower(s, t, n),
            1 <= s && s <= t && t <= n,
            "proven unordered lower bound",
        ),
        BoundKind::Prop1 => (
            prop1_bound(s, t, n),
            1 <= s && s <= t && t <= n,
            "lower bound when min degree < t-1",
        ),
        BoundKind::WsatEnvelope => (
            wsat_envelope(s, n),
            s >= 1,
            "asymptotic envelope, not an exact bound at finite n",
        ),
    };
    BoundReport {
        name: kind.name(),
        value,
        s,
        t,
        n,
        in_range,
        note,
    }
}

pub fn all_reports(s: usize, t: usize, n: usize) -> Vec<BoundReport> {
    BoundKind::ALL
        .into_iter()
        .map(|k| report(k, s, t, n))
        .collect()
}

/// Whether the unordered value `sat(K_{n,n}, K_{s,t})` is known to equal
/// [`conjecture_value`] at this size: `s = t`, `s = 1`, or `(2,3)` with `n >= 4`.
pub fn conjecture_known_exact(s: usize, t: usize, n: usize) -> bool {
    t <= n && (s == t || s == 1 || (s == 2 && t == 3 && n >= 4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ehm_examples() {
        assert_eq!(ehm_value(2, 4), 7);
        assert_eq!(ehm_value(1, 5), 0);
        assert_eq!(ehm_value(3, 3), 8);
    }

    #[test]
    fn ordered_examples() {
        assert_eq!(ordered_value(2, 3, 5), 13);
        for n in 1..20 {
            assert_eq!(ordered_value(1, 1, n), 0);
            assert_eq!(ordered_value(2, 2, n), ehm_value(2, n));
        }
    }

    #[test]
    fn conjecture_examples() {
        for n in 1..40 {
            assert_eq!(conjecture_value(2, 3, n), 3 * n as i64 - 2);
            assert_eq!(conjecture_value(2, 2, n), 2 * n as i64 - 1);
            assert_eq!(conjecture_value(2, 2, n), ordered_value(2, 2, n));
            assert_eq!(conjecture_value(1, 1, n), 0);
            assert_eq!(conjecture_value(2, 3, n) - theorem_lower(2, 3, n), 7);
        }
    }

    #[test]
    fn theorem_and_prop1_examples() {
        assert_eq!(theorem_lower(2, 3, 10), 21);
        assert_eq!(theorem_lower(1, 1, 7), 0);
        assert_eq!(prop1_bound(2, 3, 10), 28);
        assert_eq!(prop1_bound(1, 2, 9), 9);
    }

    #[test]
    fn shell_bounds() {
        let st = ShellStats {
            x0: 3,
            x0p: 3,
            x: 3,
            xp: 5,
            e: 6,
            y: 0,
            yp: 0,
        };
        for n in 4..20 {
            assert_eq!(lemma1_bound(2, 3, n, &st), 3 * n as i64 - 3);
            assert_eq!(claim1_bound(2, 3, n, &st), 3 * n as i64 - 3);
        }
        let st = ShellStats {
            x0: 2,
            x0p: 3,
            x: 4,
            xp: 3,
            e: 4,
            y: 0,
            yp: 0,
        };
        assert_eq!(claim1_bound(3, 3, 8, &st), lemma1_bound(3, 3, 8, &st));
        // s = t: the min term vanishes.
        assert_eq!(lemma1_bound(3, 3, 8, &st), 8 * 4 - 5 * 2 - 1 + 4);
        // Theorem instantiation: x0 = x0' = s+t-2, e = st-1.
        for s in 1..=5 {
            for t in s..=5 {
                let k = s + t - 2;
                let st = ShellStats {
                    x0: k,
                    x0p: k,
                    x: k,
                    xp: k,
                    e: s * t - 1,
                    y: 0,
                    yp: 0,
                };
                for n in t..30 {
                    assert!(lemma1_bound(s, t, n, &st) >= theorem_lower(s, t, n));
                }
            }
        }
    }

    #[test]
    fn wsat_envelope_examples() {
        assert_eq!(wsat_envelope(2, 10), 20);
        assert_eq!(wsat_envelope(1, 9), 0);
    }

    #[test]
    fn grid_relations() {
        for s in 1..=5 {
            for t in s..=5 {
                let k = (s + t - 2) as i64;
                for n in t..=50 {
                    assert_eq!(
                        conjecture_value(s, t, n) - theorem_lower(s, t, n),
                        k * k - k * k / 4
                    );
                    assert!(prop1_bound(s, t, n) >= theorem_lower(s, t, n));
                    let (o, c) = (ordered_value(s, t, n), conjecture_value(s, t, n));
                    assert!(o >= c);
                    assert_eq!(o == c, t - s <= 1, "s={s} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn reports_tag_range() {
        let r = report(BoundKind::Ehm, 5, 5, 3);
        assert!(!r.in_range);
        assert_eq!(r.value, 9 - 1);
        assert!(report(BoundKind::Ordered, 2, 3, 5).in_range);
        assert_eq!(all_reports(2, 3, 4).len(), 6);
        assert_eq!(BoundKind::from_name("prop1"), Some(BoundKind::Prop1));
    }
}
