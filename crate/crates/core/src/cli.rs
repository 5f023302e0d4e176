//! The `bisat` command line. [`run`] takes explicit streams so it can be
//! driven from tests; the binary only forwards the process streams.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::biclique::{greedy_saturate, is_saturated, weak_saturation, SatParams, Verdict};
use crate::bounds::{self, BoundKind, BoundReport};
use crate::constructions::{build_family, build_k23_extremal, build_ordered_star, FamilySpec};
use crate::decomposition::{analyze, Analysis, BoundCheck, CoreSpec, EqualityReport};
use crate::error::Error;
use crate::graph::BipartiteGraph;
use crate::search::{sat_table, search_sat, search_wsat, SearchConfig, SearchOutcome, TableRow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "bisat",
    version,
    about = "Bipartite K_{s,t} saturation toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 3)]
    pub t: usize,
    /// The s-side must lie in the left class.
    #[arg(long, conflicts_with = "unordered")]
    pub ordered: bool,
    /// Either orientation counts (default).
    #[arg(long)]
    pub unordered: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Result<SatParams, Error> {
        if self.ordered {
            SatParams::ordered(self.s, self.t)
        } else {
            SatParams::unordered(self.s, self.t)
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Witnesses to print.
    #[arg(long, default_value_t = 3)]
    pub witnesses: usize,
    /// Count and print every minimum class.
    #[arg(long)]
    pub all_witnesses: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Skip saturation tests below the proven lower bound.
    #[arg(long)]
    pub theorem_cutoff: bool,
    /// Refuse when the estimated work exceeds 2^BUDGET.
    #[arg(long, default_value_t = 26)]
    pub budget: u32,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            witness_cap: (!self.all_witnesses).then_some(self.witnesses),
            jobs: self.jobs,
            log2_budget: self.budget,
            theorem_cutoff: self.theorem_cutoff,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a bmat graph for saturation.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Read from this file instead of stdin.
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Check weak saturation instead.
        #[arg(long)]
        weak: bool,
    },
    /// Emit a construction as bmat.
    #[command(group(ArgGroup::new("which").required(true).args(["family", "star", "k23"])))]
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: bool,
        #[arg(long)]
        star: bool,
        #[arg(long)]
        k23: bool,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// Block sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        /// Seed shifting every block's regular graph.
        #[arg(long, default_value_t = 0)]
        seed: usize,
    },
    /// Core/shell decomposition report.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, requires = "u0p")]
        u0: Option<usize>,
        #[arg(long, requires = "u0")]
        u0p: Option<usize>,
        /// Explicit A0 (with --a0p); defaults to {u0} ∪ N(u0').
        #[arg(long, value_delimiter = ',', requires_all = ["a0p", "u0"])]
        a0: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', requires = "a0")]
        a0p: Option<Vec<usize>>,
    },
    /// Exact saturation number on an n x n host.
    Search {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact weak saturation number on an n x n host.
    WsatSearch {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact values for a range of n beside the closed forms.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 26)]
        budget: u32,
    },
    /// Closed-form values and bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Only this bound (ehm, ordered, conjecture, theorem, prop1, wsat_envelope).
        #[arg(long)]
        kind: Option<String>,
    },
    /// Greedily saturate a copy-free seed graph.
    Saturate {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Report {
    text: String,
    record: Value,
    code: i32,
}

fn fail(msg: impl std::fmt::Display) -> String {
    format!("error: {msg}")
}

fn read_graph(input: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<BipartiteGraph, String> {
    let text = match input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| fail(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(fail)?;
            s
        }
    };
    BipartiteGraph::parse_bmat(&text).map_err(fail)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn set(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Saturated => "saturated".into(),
        Verdict::ContainsCopy { witness } => format!(
            "not saturated: contains a copy on left {} right {}",
            set(&witness.left),
            set(&witness.right)
        ),
        Verdict::Misses { u, v } => {
            format!("not saturated: adding ({u}, {v}) creates no copy")
        }
    }
}

fn outcome_text(o: &SearchOutcome) -> String {
    let mut s = String::new();
    match o.minimum {
        Some(m) => writeln!(s, "minimum {m}").unwrap(),
        None => writeln!(s, "minimum none").unwrap(),
    }
    writeln!(
        s,
        "classes at minimum {}, generated {}, classes {}, pruned {}, tests {}",
        o.witness_classes, o.stats.generated, o.stats.classes, o.stats.pruned, o.stats.tests
    )
    .unwrap();
    for (i, w) in o.witnesses.iter().enumerate() {
        writeln!(s, "witness {} ({} edges)", i + 1, w.edge_count()).unwrap();
        s.push_str(&w.to_bmat());
    }
    s
}

fn bounds_text(rows: &[BoundReport]) -> String {
    let mut s = String::new();
    for r in rows {
        let range = if r.in_range {
            ""
        } else {
            "  (outside stated range)"
        };
        writeln!(s, "{:<14}{:>10}  {}{}", r.name, r.value, r.note, range).unwrap();
    }
    s
}

fn table_text(rows: &[TableRow]) -> String {
    let mut s = String::new();
    for row in rows {
        let exact = match (&row.outcome, &row.error) {
            (Some(o), _) => o.minimum.map_or("none".into(), |m| m.to_string()),
            (None, Some(e)) => format!("refused ({e})"),
            (None, None) => "?".into(),
        };
        write!(s, "n={:<3} exact {exact}", row.n).unwrap();
        for a in &row.annotations {
            let mark = match a.matches {
                Some(true) => "=",
                Some(false) => "≠",
                None => "?",
            };
            let range = if a.in_range { "" } else { "*" };
            write!(s, "  {}{}{}{}", a.name, mark, a.value, range).unwrap();
        }
        s.push('\n');
    }
    s.push_str("* outside stated range\n");
    s
}

fn check_text(name: &str, c: &BoundCheck) -> String {
    match c {
        BoundCheck::Holds {
            bound,
            edges,
            slack,
        } => {
            format!("{name}: holds, bound {bound}, edges {edges}, slack {slack}\n")
        }
        BoundCheck::Violated {
            bound,
            edges,
            slack,
        } => {
            format!("{name}: VIOLATED, bound {bound}, edges {edges}, slack {slack}\n")
        }
        BoundCheck::Inapplicable { reason } => format!("{name}: inapplicable ({reason})\n"),
    }
}

fn analysis_text(a: &Analysis) -> String {
    let mut s = String::new();
    match a {
        Analysis::LowDegree { prop1 } => {
            writeln!(s, "route: low degree (min degree {})", prop1.min_degree).unwrap();
            s.push_str(&check_text("prop1", &prop1.check));
        }
        Analysis::NoCore { min_degree } => {
            writeln!(s, "route: no core (min degree {min_degree})").unwrap();
        }
        Analysis::Shell {
            decomposition: d,
            lemma1,
            consequences,
            equality,
        } => {
            let st = d.stats;
            writeln!(s, "route: shell").unwrap();
            writeln!(
                s,
                "core: u0={} u0'={} A0={} A0'={}",
                d.core.u0,
                d.core.u0p,
                set(&d.core.a0),
                set(&d.core.a0p)
            )
            .unwrap();
            for (name, l, r) in [
                ("A", &d.a, &d.ap),
                ("B1", &d.b1, &d.b1p),
                ("B2", &d.b2, &d.b2p),
                ("C1", &d.c1, &d.c1p),
                ("C2", &d.c2, &d.c2p),
            ] {
                writeln!(s, "{name:<3}{:<24}{name}' {}", set(l), set(r)).unwrap();
            }
            writeln!(
                s,
                "x0={} x0'={} x={} x'={} e={} y={} y'={}",
                st.x0, st.x0p, st.x, st.xp, st.e, st.y, st.yp
            )
            .unwrap();
            s.push_str(&check_text("lemma1", &lemma1.lemma1));
            let orient = if lemma1.claim1_transposed {
                " (transposed)"
            } else {
                ""
            };
            s.push_str(&check_text(&format!("claim1{orient}"), &lemma1.claim1));
            for c in [
                &consequences.c2_complete,
                &consequences.right_c_reach,
                &consequences.left_c_reach,
            ] {
                let status = if c.passed { "pass" } else { "FAIL" };
                writeln!(s, "{status}: {}", c.claim).unwrap();
            }
            match equality {
                EqualityReport::Skipped { reason } => {
                    writeln!(s, "equality: skipped ({reason})").unwrap()
                }
                EqualityReport::Checked { items, .. } => {
                    for c in items {
                        let status = if c.passed { "pass" } else { "FAIL" };
                        writeln!(s, "equality {status}: {}", c.claim).unwrap();
                    }
                }
            }
        }
    }
    s
}

fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Report, String> {
    match command {
        Command::Verify {
            common,
            input,
            weak,
        } => {
            let p = common.params().map_err(fail)?;
            let g = read_graph(input, stdin)?;
            if *weak {
                let r = weak_saturation(&g, p);
                let ok = r.is_weakly_saturated();
                let text = if ok {
                    "weakly saturated\n".to_string()
                } else if !r.seed_free {
                    "not weakly saturated: the graph already contains a copy\n".to_string()
                } else {
                    format!(
                        "not weakly saturated: closure stops at {} edges\n",
                        r.closure_edges
                    )
                };
                Ok(Report {
                    text,
                    record: json!({ "weakly_saturated": ok, "report": to_value(&r) }),
                    code: if ok { 0 } else { 1 },
                })
            } else {
                let v = is_saturated(&g, p);
                let ok = v.is_saturated();
                Ok(Report {
                    text: verdict_text(&v) + "\n",
                    record: json!({ "saturated": ok, "edges": g.edge_count(), "result": to_value(&v) }),
                    code: if ok { 0 } else { 1 },
                })
            }
        }
        Command::Generate {
            common,
            family,
            star,
            k23,
            n,
            l,
            blocks,
            seed,
        } => {
            let g = if *family {
                let mut spec = FamilySpec::new(common.s, common.t, *n, *l).map_err(fail)?;
                if let Some(b) = blocks {
                    spec = spec.with_block_sizes(b.clone()).map_err(fail)?;
                }
                let seeds = vec![*seed; spec.l()];
                build_family(&spec.with_seeds(seeds).map_err(fail)?).map_err(fail)?
            } else if *star {
                build_ordered_star(common.s, common.t, *n).map_err(fail)?
            } else {
                debug_assert!(*k23);
                build_k23_extremal(*n).map_err(fail)?
            };
            Ok(Report {
                text: g.to_bmat(),
                record: json!({ "edges": g.edge_count(), "graph": g.to_bmat() }),
                code: 0,
            })
        }
        Command::Decompose {
            common,
            input,
            u0,
            u0p,
            a0,
            a0p,
        } => {
            let p = common.params().map_err(fail)?;
            let g = read_graph(input, stdin)?;
            let core = match (u0, u0p, a0, a0p) {
                (Some(u), Some(v), Some(a), Some(ap)) => Some(CoreSpec {
                    u0: *u,
                    u0p: *v,
                    a0: a.clone(),
                    a0p: ap.clone(),
                }),
                (Some(u), Some(v), None, None) => {
                    Some(CoreSpec::from_pair(&g, *u, *v).map_err(fail)?)
                }
                _ => None,
            };
            let a = analyze(&g, p, core).map_err(fail)?;
            Ok(Report {
                text: analysis_text(&a),
                record: json!({ "consistent": a.is_consistent(), "analysis": to_value(&a) }),
                code: 0,
            })
        }
        Command::Search { common, search } | Command::WsatSearch { common, search } => {
            let p = common.params().map_err(fail)?;
            let run = if matches!(command, Command::Search { .. }) {
                search_sat
            } else {
                search_wsat
            };
            let o = run(search.n, p, &search.config()).map_err(fail)?;
            Ok(Report {
                text: outcome_text(&o),
                record: json!({ "outcome": to_value(&o) }),
                code: 0,
            })
        }
        Command::Table {
            common,
            n_min,
            n_max,
            jobs,
            budget,
        } => {
            let p = common.params().map_err(fail)?;
            let config = SearchConfig {
                jobs: *jobs,
                log2_budget: *budget,
                ..SearchConfig::default()
            };
            let rows = sat_table(p, *n_min..=*n_max, &config);
            Ok(Report {
                text: table_text(&rows),
                record: json!({ "rows": to_value(&rows) }),
                code: 0,
            })
        }
        Command::Bounds { common, n, kind } => {
            common.params().map_err(fail)?;
            let rows = match kind {
                Some(k) => {
                    let kind = BoundKind::from_name(k)
                        .ok_or_else(|| fail(format!("unknown bound {k:?}")))?;
                    vec![bounds::report(kind, common.s, common.t, *n)]
                }
                None => bounds::all_reports(common.s, common.t, *n),
            };
            Ok(Report {
                text: bounds_text(&rows),
                record: json!({ "bounds": to_value(&rows) }),
                code: 0,
            })
        }
        Command::Saturate {
            common,
            input,
            seed,
        } => {
            let p = common.params().map_err(fail)?;
            let g = read_graph(input, stdin)?;
            let h = greedy_saturate(&g, p, *seed).map_err(fail)?;
            Ok(Report {
                text: h.to_bmat(),
                record: json!({ "edges": h.edge_count(), "graph": h.to_bmat() }),
                code: 0,
            })
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Verify { common, .. }
        | Command::Generate { common, .. }
        | Command::Decompose { common, .. }
        | Command::Search { common, .. }
        | Command::WsatSearch { common, .. }
        | Command::Table { common, .. }
        | Command::Bounds { common, .. }
        | Command::Saturate { common, .. } => common,
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Verify { .. } => "verify",
        Command::Generate { .. } => "generate",
        Command::Decompose { .. } => "decompose",
        Command::Search { .. } => "search",
        Command::WsatSearch { .. } => "wsat-search",
        Command::Table { .. } => "table",
        Command::Bounds { .. } => "bounds",
        Command::Saturate { .. } => "saturate",
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status: 0 success, 1 negative verdict from `verify`, 2 usage or input error.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let report = match execute(&cli.command, stdin) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(stderr, "{msg}");
            return 2;
        }
    };
    let c = common(&cli.command);
    let body = match c.format {
        Format::Text => report.text,
        Format::Json => {
            let mut record =
                json!({ "schema_version": SCHEMA_VERSION, "command": name(&cli.command) });
            if let (Value::Object(dst), Value::Object(src)) = (&mut record, report.record) {
                dst.extend(src);
            }
            serde_json::to_string_pretty(&record).expect("json") + "\n"
        }
    };
    let written = match &c.output {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    report.code
}
