//! `nulldecomp` command line.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use nulldecomp::decomposition::{
    self, AnalysisError, AnalysisOptions, AnalysisReport, DEFAULT_BUDGET,
};
use nulldecomp::generator::{generate, Family, GenSpec};
use nulldecomp::invariants::{check_instance, InvariantOptions};
use nulldecomp::null_basis;
use nulldecomp::oracles::{self, TripleDecomposition};
use nulldecomp::validate::{self, Rejection, Validation, DEFAULT_CYCLE_CAP};
use nulldecomp::{Graph, VertexSet};

#[derive(Parser, Debug)]
#[command(
    name = "nulldecomp",
    version,
    about = "Null decomposition of C4k-free bipartite graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify a graph as bipartite with no cycle of length divisible by 4.
    Validate {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a certified graph and report every derived quantity.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Print one null vector per unsaturated vertex as JSON.
    Nullbasis {
        input: PathBuf,
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Compare the pipeline with the brute-force decompositions.
    OracleCheck {
        input: PathBuf,
        #[arg(long, env = "NULLDECOMP_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
        cap: usize,
    },
    /// Run the invariant suite on generated instances.
    Fuzz {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "NULLDECOMP_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Generate an instance as an edge list.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a DOT drawing with supp, core and npart marked by node style.
    ExportDot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PipelineArgs {
    /// Skip certification (the graph must still be bipartite).
    #[arg(long)]
    pub unchecked: bool,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    pub cap: usize,
    /// Largest component handed to the brute-force counters.
    #[arg(long, env = "NULLDECOMP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

impl PipelineArgs {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            cycle_cap: self.cap,
            budget: self.budget,
            unchecked: self.unchecked,
            algebraic_audit: true,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GenArgs {
    #[arg(long, default_value = "c4kfree")]
    pub family: Family,
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GenArgs {
    fn spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            n: self.n,
            extra_edges: self.extra,
            family: self.family,
            seed,
        }
    }
}

/// How a command ended. Exit status 0, 1 and 2 respectively.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Rejected input or a failed property.
    Failure,
    /// Unreadable input, parse errors, or a graph outside the class.
    UsageError,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 1,
            Outcome::UsageError => 2,
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    Graph::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let result = match cli.command {
        Command::Validate { input, cap, json } => validate_cmd(&input, cap, json, out),
        Command::Analyze {
            input,
            json,
            pretty,
            pipeline,
        } => analyze_cmd(&input, json, pretty, &pipeline, out),
        Command::Nullbasis {
            input,
            pretty,
            pipeline,
        } => nullbasis_cmd(&input, pretty, &pipeline, out),
        Command::OracleCheck { input, budget, cap } => oracle_cmd(&input, budget, cap, out),
        Command::Fuzz {
            gen,
            trials,
            budget,
        } => fuzz_cmd(&gen, trials, budget, out),
        Command::Gen { gen, json, output } => {
            let g = generate(&gen.spec(gen.seed));
            let text = if json {
                g.to_json() + "\n"
            } else {
                g.to_edge_list()
            };
            write_output(output.as_deref(), &text, out).map(|()| Outcome::Success)
        }
        Command::ExportDot {
            input,
            output,
            pipeline,
        } => dot_cmd(&input, output.as_deref(), &pipeline, out),
    };
    match result {
        Ok(outcome) => outcome,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            Outcome::UsageError
        }
    }
}

fn describe_rejection(r: &Rejection) -> String {
    let w = r.witness();
    let kind = match r {
        Rejection::OddCycle(_) => "odd",
        Rejection::CycleLengthMultipleOfFour(_) => "≡ 0 (mod 4)",
    };
    let cycle: Vec<String> = w.cycle.iter().map(u64::to_string).collect();
    format!("cycle of length {} ({kind}): {}", w.length, cycle.join(" "))
}

fn validate_cmd(
    input: &Path,
    cap: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let g = read_graph(input)?;
    let verdict = validate::check_c4kfree_bipartite(&g, cap);
    let text = if json {
        let value = match &verdict {
            Validation::Certified(cert) => {
                serde_json::json!({ "status": "certified", "certificate": cert })
            }
            Validation::Rejected(r) => serde_json::json!({ "status": "rejected", "rejection": r }),
            Validation::Inconclusive { cap } => {
                serde_json::json!({ "status": "inconclusive", "cap": cap })
            }
        };
        value.to_string()
    } else {
        match &verdict {
            Validation::Certified(cert) => {
                let lengths: Vec<String> =
                    cert.cycle_lengths.iter().map(usize::to_string).collect();
                format!(
                    "certified: {} cycles, lengths {{{}}}",
                    cert.cycle_count,
                    lengths.join(", ")
                )
            }
            Validation::Rejected(r) => format!("rejected: {}", describe_rejection(r)),
            Validation::Inconclusive { cap } => format!("inconclusive: more than {cap} cycles"),
        }
    };
    writeln!(out, "{text}").map_err(|e| e.to_string())?;
    Ok(match verdict.exit_code() {
        0 => Outcome::Success,
        1 => Outcome::Failure,
        _ => Outcome::UsageError,
    })
}

fn analysis_failure(e: AnalysisError) -> String {
    match e {
        AnalysisError::Rejected(r) => format!("not C4k-free bipartite: {}", describe_rejection(&r)),
        other => other.to_string(),
    }
}

fn fmt_set(s: &VertexSet) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn table(g: &Graph, r: &AnalysisReport) -> String {
    let d = &r.decomposition;
    let passed = r.audit.iter().filter(|a| a.pass).count();
    let mut s = String::new();
    let rows: [(&str, String); 15] = [
        ("vertices", g.order().to_string()),
        ("edges", g.size().to_string()),
        ("nu", r.nu.to_string()),
        ("rank", r.rank.to_string()),
        ("nullity", r.nullity.to_string()),
        ("alpha", r.alpha.to_string()),
        (
            "inertia",
            format!(
                "({}, {}, {})",
                r.inertia.negative, r.inertia.zero, r.inertia.positive
            ),
        ),
        ("m(G)", r.m_count.to_string()),
        ("a(G)", r.a_count.to_string()),
        ("supp", fmt_set(&d.supp)),
        ("core", fmt_set(&d.core)),
        ("npart", fmt_set(&d.npart)),
        ("C_S parts", d.s_components.len().to_string()),
        ("C_N parts", d.n_components.len().to_string()),
        ("audit", format!("{passed}/{} passed", r.audit.len())),
    ];
    for (name, value) in rows {
        let _ = writeln!(s, "{name:<10} {value}");
    }
    for a in r.audit.iter().filter(|a| !a.pass) {
        let _ = writeln!(
            s,
            "FAILED     {}: expected {}, got {}",
            a.identity, a.expected, a.actual
        );
    }
    s
}

fn analyze_cmd(
    input: &Path,
    json: bool,
    pretty: bool,
    pipeline: &PipelineArgs,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let g = read_graph(input)?;
    let report =
        decomposition::analysis_report(&g, &pipeline.options()).map_err(analysis_failure)?;
    let text = if json || pretty {
        report.to_json(pretty) + "\n"
    } else {
        table(&g, &report)
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(if report.audit_passed() {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn nullbasis_cmd(
    input: &Path,
    pretty: bool,
    pipeline: &PipelineArgs,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let g = read_graph(input)?;
    let m = decomposition::certify_and_match(&g, &pipeline.options()).map_err(analysis_failure)?;
    let basis = null_basis::null_basis(&g, &m).map_err(|e| e.to_string())?;
    writeln!(out, "{}", basis.to_json(pretty)).map_err(|e| e.to_string())?;
    Ok(Outcome::Success)
}

fn describe_triple(t: &TripleDecomposition, labels: [&str; 3]) -> String {
    let mut s = format!(
        "{:<16} {}={} {}={} {}={}",
        format!("{:?}", t.source),
        labels[0],
        fmt_set(&t.always),
        labels[1],
        fmt_set(&t.never),
        labels[2],
        fmt_set(&t.sometimes)
    );
    if !t.overlap.is_empty() {
        let _ = write!(s, " overlap={}", fmt_set(&t.overlap));
    }
    s
}

fn oracle_cmd(
    input: &Path,
    budget: usize,
    cap: usize,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let g = read_graph(input)?;
    let cmp = oracles::compare_decompositions(&g, budget).map_err(|e| e.to_string())?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}",
        describe_triple(&cmp.independence, ["every", "none", "some"])
    );
    let _ = writeln!(
        text,
        "{}",
        describe_triple(&cmp.gallai_edmonds, ["D", "A", "C"])
    );
    let _ = writeln!(
        text,
        "{}",
        describe_triple(&cmp.null_space, ["supp", "core", "npart"])
    );
    let certified = validate::check_c4kfree_bipartite(&g, cap).is_certified();
    let outcome = if certified {
        let opts = AnalysisOptions {
            cycle_cap: cap,
            budget,
            ..Default::default()
        };
        let m = decomposition::certify_and_match(&g, &opts).map_err(analysis_failure)?;
        let d = decomposition::null_decomposition(&g, &m).map_err(analysis_failure)?;
        let agree = [&cmp.independence, &cmp.gallai_edmonds, &cmp.null_space]
            .iter()
            .all(|t| {
                t.always == d.supp
                    && t.never == d.core
                    && t.sometimes == d.npart
                    && t.overlap.is_empty()
            });
        let _ = writeln!(
            text,
            "certified; pipeline {} the oracles",
            if agree {
                "agrees with"
            } else {
                "DISAGREES with"
            }
        );
        if agree {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    } else {
        let _ = writeln!(
            text,
            "not certified; the oracles {}",
            if cmp.all_agree() {
                "happen to agree"
            } else {
                "differ"
            }
        );
        Outcome::Success
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(outcome)
}

fn fuzz_cmd(
    gen: &GenArgs,
    trials: u64,
    budget: usize,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let opts = InvariantOptions {
        oracle_budget: budget,
        ..Default::default()
    };
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let spec = gen.spec(gen.seed.wrapping_add(i));
            let g = generate(&spec);
            if !validate::check_c4kfree_bipartite(&g, opts.cycle_cap).is_certified() {
                return (spec, None);
            }
            (spec, Some(check_instance(&g, &opts).map_err(|v| (v, g))))
        })
        .collect();
    let skipped = results.iter().filter(|(_, r)| r.is_none()).count();
    let failure = results.iter().find_map(|(spec, r)| match r {
        Some(Err((v, g))) => Some((spec, v, g)),
        _ => None,
    });
    let mut text = String::new();
    let outcome = match failure {
        Some((spec, violation, g)) => {
            let _ = writeln!(text, "FAILED {violation}");
            let _ = writeln!(text, "reproduce with: nulldecomp gen {spec}");
            text.push_str(&g.to_edge_list());
            Outcome::Failure
        }
        None => {
            let _ = writeln!(
                text,
                "{trials} trials, {} checked, {skipped} skipped (not certified), 0 failures",
                trials as usize - skipped
            );
            Outcome::Success
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(outcome)
}

/// DOT with supp as plain circles, core as filled circles, npart as boxes,
/// and the canonical matching drawn bold.
pub fn to_dot(g: &Graph, report: &AnalysisReport) -> String {
    let d = &report.decomposition;
    let mut s = String::from("graph G {\n  node [shape=circle];\n");
    for v in g.vertices() {
        let attrs = if d.core.contains(&v) {
            "shape=circle, style=filled, fillcolor=\"#000000\", fontcolor=\"#ffffff\""
        } else if d.npart.contains(&v) {
            "shape=box"
        } else {
            "shape=circle"
        };
        let _ = writeln!(s, "  {v} [{attrs}];");
    }
    for (u, v) in g.edges() {
        if report.matching.contains_edge(u, v) {
            let _ = writeln!(s, "  {u} -- {v} [style=bold];");
        } else {
            let _ = writeln!(s, "  {u} -- {v};");
        }
    }
    s.push_str("}\n");
    s
}

fn dot_cmd(
    input: &Path,
    output: Option<&Path>,
    pipeline: &PipelineArgs,
    out: &mut dyn Write,
) -> Result<Outcome, String> {
    let g = read_graph(input)?;
    let report =
        decomposition::analysis_report(&g, &pipeline.options()).map_err(analysis_failure)?;
    write_output(output, &to_dot(&g, &report), out)?;
    Ok(Outcome::Success)
}
