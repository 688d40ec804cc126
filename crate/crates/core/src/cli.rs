//! Command-line surface: check, realize, verify, oracle, atlas, sweep.
//!
//! Exit codes: 0 success/true, 1 false/rejection, 2 usage error, 3 internal
//! invariant failure. Environment variables S3REAL_CAP, S3REAL_BUDGET, and
//! S3REAL_SEED override the corresponding flags' defaults.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas;
use crate::certificates::{Certificate, CertificateDocument, VerifyFailure, SCHEMA_VERSION};
use crate::graph::MultiGraph;
use crate::oracles::{self, BoundaryFunction};
use crate::realize::{realize, BuildConfig, RealizeError, Rejection};
use crate::sequences::DegreeSequence;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
    Dot,
}

/// Run-wide knobs; `budget` bounds the Z3 builder's oracle checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub edge_cap: usize,
    pub budget: u64,
    pub seed: u64,
}

impl RunConfig {
    fn build_config(&self) -> BuildConfig {
        BuildConfig { edge_cap: self.edge_cap, z3_budget: self.budget, seed: self.seed }
    }
}

#[derive(Parser, Debug)]
#[command(name = "s3real", version, about = "S3-connected realizations of degree sequences")]
struct Cli {
    /// Oracle edge cap (env: S3REAL_CAP)
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Z3 builder search budget (env: S3REAL_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized fallbacks (env: S3REAL_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graphicality and S3-realizability verdict for a sequence
    Check { seq: String },
    /// Construct a certified S3-connected realization
    Realize { seq: String },
    /// Verify a certificate against a graph file
    Verify { graph: PathBuf, cert: PathBuf },
    /// Exhaustive orientation oracle on a graph (name or file)
    Oracle {
        #[arg(value_enum)]
        property: OracleProperty,
        graph: String,
    },
    /// Atlas of hard-coded kernel graphs
    Atlas {
        #[command(subcommand)]
        action: AtlasAction,
    },
    /// Realize and verify every qualifying sequence of a given length
    Sweep { n: u32 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleProperty {
    S3,
    Z3,
    /// Strongly connected modulo-3 orientation witness for the zero boundary
    Flow,
}

#[derive(Subcommand, Debug)]
enum AtlasAction {
    List,
    Dump { name: String },
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.parse().ok()
}

/// Parses and executes a command line (without the binary name), writing
/// all output into `out`. Returns the exit code.
pub fn run(args: &[&str], out: &mut String) -> i32 {
    let mut argv = vec!["s3real"];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let config = RunConfig {
        edge_cap: cli.cap.or_else(|| env_u64("S3REAL_CAP").map(|v| v as usize)).unwrap_or(26),
        budget: cli.budget.or_else(|| env_u64("S3REAL_BUDGET")).unwrap_or(200),
        seed: cli.seed.or_else(|| env_u64("S3REAL_SEED")).unwrap_or(0x5333),
    };
    match cli.command {
        Command::Check { seq } => cmd_check(&seq, &config, cli.format, out),
        Command::Realize { seq } => cmd_realize(&seq, &config, cli.format, out),
        Command::Verify { graph, cert } => cmd_verify(&graph, &cert, &config, out),
        Command::Oracle { property, graph } => cmd_oracle(property, &graph, &config, out),
        Command::Atlas { action } => cmd_atlas(action, cli.format, out),
        Command::Sweep { n } => cmd_sweep(n, &config, out),
    }
}

#[derive(Serialize)]
struct StructuredHeader<'a> {
    tool: &'a str,
    version: &'a str,
    config: RunConfig,
}

fn header(config: &RunConfig) -> StructuredHeader<'static> {
    StructuredHeader { tool: "s3real", version: env!("CARGO_PKG_VERSION"), config: *config }
}

fn cmd_check(text: &str, config: &RunConfig, format: OutputFormat, out: &mut String) -> i32 {
    let seq = match DegreeSequence::parse(text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let n = seq.len() as u64;
    let graphic = seq.is_graphic();
    let sum = seq.sum();
    let required = 6 * n - 4;
    let sum_ok = sum >= required;
    let min_ok = seq.min_degree() >= 4;
    let realizable = graphic && sum_ok && min_ok;
    match format {
        OutputFormat::Structured => {
            #[derive(Serialize)]
            struct CheckDoc<'a> {
                #[serde(flatten)]
                header: StructuredHeader<'a>,
                sequence: String,
                graphic: bool,
                degree_sum: u64,
                degree_sum_required: u64,
                min_degree: u32,
                s3_realizable: bool,
            }
            let doc = CheckDoc {
                header: header(config),
                sequence: seq.to_string(),
                graphic,
                degree_sum: sum,
                degree_sum_required: required,
                min_degree: seq.min_degree(),
                s3_realizable: realizable,
            };
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        _ => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(
                out,
                "graphic: {}; \u{3a3}={} \u{2265} {}: {}; d_n={} \u{2265} 4: {}; S3-realizable: {}",
                yn(graphic),
                sum,
                required,
                yn(sum_ok),
                seq.min_degree(),
                yn(min_ok),
                yn(realizable)
            );
        }
    }
    if realizable {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

/// Full structured output of a realization run.
#[derive(Serialize, Deserialize)]
pub struct RealizeDocument {
    pub schema_version: u32,
    pub sequence: String,
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub certificate: Certificate,
    pub trace: Vec<String>,
}

fn cmd_realize(text: &str, config: &RunConfig, format: OutputFormat, out: &mut String) -> i32 {
    let seq = match DegreeSequence::parse(text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match realize(&seq, &config.build_config()) {
        Ok(r) => {
            match format {
                OutputFormat::Structured => {
                    #[derive(Serialize)]
                    struct Doc<'a> {
                        #[serde(flatten)]
                        header: StructuredHeader<'a>,
                        #[serde(flatten)]
                        result: RealizeDocument,
                    }
                    let doc = Doc {
                        header: header(config),
                        result: RealizeDocument {
                            schema_version: SCHEMA_VERSION,
                            sequence: seq.to_string(),
                            vertices: r.graph.vertices().collect(),
                            edges: r.graph.edge_instances(),
                            certificate: r.certificate,
                            trace: r.trace,
                        },
                    };
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
                }
                OutputFormat::Dot => {
                    let _ = write!(out, "{}", r.graph.to_dot());
                }
                OutputFormat::Text => {
                    let _ = writeln!(out, "# sequence {seq}");
                    let _ = writeln!(out, "# trace {}", r.trace.join(" "));
                    let _ = writeln!(out, "# graph");
                    let _ = write!(out, "{}", r.graph.to_edge_list_text());
                    let _ = writeln!(out, "# certificate");
                    let _ = writeln!(out, "{}", CertificateDocument::new(r.certificate).to_json());
                }
            }
            EXIT_OK
        }
        Err(RealizeError::Rejected(rej)) => {
            let _ = writeln!(out, "rejected: {rej}");
            EXIT_FALSE
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_verify(graph_path: &PathBuf, cert_path: &PathBuf, config: &RunConfig, out: &mut String) -> i32 {
    let graph_text = match std::fs::read_to_string(graph_path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(out, "error: cannot read {}: {e}", graph_path.display());
            return EXIT_USAGE;
        }
    };
    let g = match MultiGraph::from_edge_list_text(&graph_text) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cert_text = match std::fs::read_to_string(cert_path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(out, "error: cannot read {}: {e}", cert_path.display());
            return EXIT_USAGE;
        }
    };
    let cert = match CertificateDocument::from_json(&cert_text) {
        Ok(doc) => doc.certificate,
        Err(_) => match serde_json::from_str::<RealizeDocument>(&cert_text) {
            Ok(doc) => doc.certificate,
            Err(e) => {
                let _ = writeln!(out, "error: unreadable certificate: {e}");
                return EXIT_USAGE;
            }
        },
    };
    match crate::certificates::verify(&g, &cert, config.edge_cap) {
        Ok(()) => {
            let _ = writeln!(out, "verified");
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(out, "rejected {f}");
            EXIT_FALSE
        }
    }
}

/// Resolves a graph argument: complete graphs (K7), parallel pairs (4K2),
/// atlas names, then file paths.
fn resolve_graph(spec: &str) -> Result<MultiGraph, String> {
    if let Some(rest) = spec.strip_prefix('K') {
        if let Ok(n) = rest.parse::<u32>() {
            if n == 0 {
                return Err("K0 has no vertices".to_string());
            }
            return Ok(MultiGraph::complete(n));
        }
    }
    if let Some(head) = spec.strip_suffix("K2") {
        if let Ok(m) = head.parse::<u32>() {
            return Ok(MultiGraph::parallel_pair(m));
        }
    }
    if let Ok(entry) = atlas::get_entry(spec) {
        return Ok(entry.graph.clone());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    MultiGraph::from_edge_list_text(&text).map_err(|e| e.to_string())
}

fn cmd_oracle(property: OracleProperty, spec: &str, config: &RunConfig, out: &mut String) -> i32 {
    let g = match resolve_graph(spec) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let verdict = match property {
        OracleProperty::S3 => oracles::is_s3_connected(&g, config.edge_cap).map(|v| (v, "S3-connected")),
        OracleProperty::Z3 => oracles::is_z3_connected(&g, config.edge_cap).map(|v| (v, "Z3-connected")),
        OracleProperty::Flow => {
            let beta = BoundaryFunction::zero(&g);
            match oracles::find_beta_orientation(&g, &beta, true, config.edge_cap) {
                Ok(Some(w)) => {
                    let _ = writeln!(out, "strongly connected modulo-3 orientation:");
                    for (a, b) in w.directed_pairs(&g) {
                        let _ = writeln!(out, "{a} -> {b}");
                    }
                    return EXIT_OK;
                }
                Ok(None) => {
                    let _ = writeln!(out, "no strongly connected modulo-3 orientation");
                    return EXIT_FALSE;
                }
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
    };
    match verdict {
        Ok((true, label)) => {
            let _ = writeln!(out, "{label}: yes");
            EXIT_OK
        }
        Ok((false, label)) => {
            let _ = writeln!(out, "{label}: no");
            EXIT_FALSE
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_atlas(action: AtlasAction, format: OutputFormat, out: &mut String) -> i32 {
    match action {
        AtlasAction::List => {
            for name in atlas::list_entries() {
                let _ = writeln!(out, "{name}");
            }
            EXIT_OK
        }
        AtlasAction::Dump { name } => {
            let entry = match atlas::get_entry(&name) {
                Ok(e) => e,
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            if format == OutputFormat::Dot {
                let _ = write!(out, "{}", entry.graph.to_dot());
                return EXIT_OK;
            }
            let _ = writeln!(out, "# {} ({:?})", entry.name, entry.claim);
            let _ = write!(out, "{}", entry.graph.to_edge_list_text());
            if let Some((solid, cycle)) = &entry.decomposition {
                let _ = writeln!(out, "# solid part {}", solid.degree_sequence());
                let _ = writeln!(
                    out,
                    "# hamiltonian cycle {}",
                    cycle.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                );
            }
            if let Some(script) = &entry.script {
                let _ = writeln!(out, "# script -> {}", script.terminal);
                for (u, v, w) in &script.steps {
                    let _ = writeln!(out, "lift {u} {v} {w}");
                }
            }
            EXIT_OK
        }
    }
}

/// Every non-increasing sequence of length n with entries in [1, n-1] that
/// passes the graphicality test.
pub fn enumerate_graphic_sequences(n: u32) -> Vec<DegreeSequence> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(n as usize);
    fn rec(n: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeSequence>) {
        if cur.len() == n as usize {
            let seq = DegreeSequence::new(cur.clone()).unwrap();
            if seq.sum() % 2 == 0 && seq.is_graphic() {
                out.push(seq);
            }
            return;
        }
        for d in 1..=hi {
            cur.push(d);
            rec(n, d, cur, out);
            cur.pop();
        }
    }
    if n >= 2 {
        rec(n, n - 1, &mut cur, &mut out);
    } else if n == 1 {
        out.push(DegreeSequence::new(vec![0]).unwrap());
    }
    out
}

pub struct SweepOutcome {
    pub total_graphic: usize,
    pub qualifying: usize,
    pub realized: usize,
    pub verified: usize,
    pub rejected: usize,
    pub failures: Vec<String>,
    pub branch_counts: BTreeMap<String, usize>,
}

/// Realizes and verifies every qualifying graphic sequence of length n and
/// checks that every non-qualifying one is rejected.
pub fn sweep(n: u32, config: &RunConfig) -> SweepOutcome {
    let sequences = enumerate_graphic_sequences(n);
    let build = config.build_config();
    let results: Vec<(DegreeSequence, Result<(Vec<String>, Result<(), VerifyFailure>), RealizeError>)> =
        sequences
            .par_iter()
            .map(|seq| {
                let r = realize(seq, &build).map(|r| {
                    let v = crate::certificates::verify(&r.graph, &r.certificate, build.edge_cap);
                    (r.trace, v)
                });
                (seq.clone(), r)
            })
            .collect();
    let mut outcome = SweepOutcome {
        total_graphic: sequences.len(),
        qualifying: 0,
        realized: 0,
        verified: 0,
        rejected: 0,
        failures: Vec::new(),
        branch_counts: BTreeMap::new(),
    };
    for (seq, r) in results {
        let qualifies = seq.min_degree() >= 4 && seq.sum() >= 6 * seq.len() as u64 - 4;
        if qualifies {
            outcome.qualifying += 1;
        }
        match r {
            Ok((trace, verdict)) => {
                if !qualifies {
                    outcome.failures.push(format!("{seq}: realized but does not qualify"));
                    continue;
                }
                outcome.realized += 1;
                for label in &trace {
                    *outcome.branch_counts.entry(label.clone()).or_insert(0) += 1;
                }
                match verdict {
                    Ok(()) => outcome.verified += 1,
                    Err(f) => outcome.failures.push(format!("{seq}: certificate rejected {f}")),
                }
            }
            Err(RealizeError::Rejected(rej)) => {
                if qualifies {
                    outcome.failures.push(format!("{seq}: wrongly rejected ({rej})"));
                } else {
                    outcome.rejected += 1;
                    // cross-check the rejection reason against the conditions
                    let fine = match rej {
                        Rejection::NotGraphic => false,
                        Rejection::MinDegreeTooSmall { .. } => seq.min_degree() < 4,
                        Rejection::DegreeSumTooSmall { .. } => seq.sum() < 6 * seq.len() as u64 - 4,
                    };
                    if !fine {
                        outcome.failures.push(format!("{seq}: inconsistent rejection ({rej})"));
                    }
                }
            }
            Err(e) => outcome.failures.push(format!("{seq}: {e}")),
        }
    }
    outcome
}

fn cmd_sweep(n: u32, config: &RunConfig, out: &mut String) -> i32 {
    if n < 2 {
        let _ = writeln!(out, "error: sweep needs n >= 2");
        return EXIT_USAGE;
    }
    let o = sweep(n, config);
    let _ = writeln!(
        out,
        "sweep n={n}: graphic={} qualifying={} realized={} verified={} rejected={} failures={}",
        o.total_graphic,
        o.qualifying,
        o.realized,
        o.verified,
        o.rejected,
        o.failures.len()
    );
    let _ = writeln!(out, "branch coverage:");
    for (label, count) in &o.branch_counts {
        let _ = writeln!(out, "  {label}: {count}");
    }
    for f in o.failures.iter().take(20) {
        let _ = writeln!(out, "failure: {f}");
    }
    if o.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_command_output() {
        let mut out = String::new();
        let code = run(&["check", "6^7"], &mut out);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("graphic: yes"));
        assert!(out.contains("42"));
        assert!(out.contains("S3-realizable: yes"));

        let mut out = String::new();
        assert_eq!(run(&["check", "5^8"], &mut out), EXIT_FALSE);
        let mut out = String::new();
        assert_eq!(run(&["check", "6^^"], &mut out), EXIT_USAGE);
    }

    #[test]
    fn oracle_flow_k6() {
        let mut out = String::new();
        let code = run(&["oracle", "flow", "K6"], &mut out);
        assert_eq!(code, EXIT_FALSE);
        assert!(out.contains("no strongly connected modulo-3 orientation"));
    }

    #[test]
    fn atlas_commands() {
        let mut out = String::new();
        assert_eq!(run(&["atlas", "list"], &mut out), EXIT_OK);
        assert!(out.contains("K4*"));
        let mut out = String::new();
        assert_eq!(run(&["atlas", "dump", "(7^4,4^4)"], &mut out), EXIT_OK);
        assert!(out.contains("lift 5 3 4"));
        let mut out = String::new();
        assert_eq!(run(&["atlas", "dump", "nope"], &mut out), EXIT_USAGE);
    }

    #[test]
    fn realize_roundtrip_through_files() {
        let mut out = String::new();
        assert_eq!(run(&["--format", "structured", "realize", "6^8"], &mut out), EXIT_OK);
        let json_start = out.find('{').unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out[json_start..]).unwrap();
        assert_eq!(doc["sequence"], "(6^8)");

        let dir = std::env::temp_dir().join(format!("s3real-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let gpath = dir.join("g.txt");
        let cpath = dir.join("c.json");
        let edges: Vec<(u32, u32)> = serde_json::from_value(doc["edges"].clone()).unwrap();
        let g = MultiGraph::from_edge_list(&edges).unwrap();
        std::fs::write(&gpath, g.to_edge_list_text()).unwrap();
        std::fs::write(&cpath, out[json_start..].as_bytes()).unwrap();
        let mut vout = String::new();
        let code = run(&["verify", gpath.to_str().unwrap(), cpath.to_str().unwrap()], &mut vout);
        assert_eq!(code, EXIT_OK, "{vout}");
        assert!(vout.contains("verified"));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn deterministic_structured_output() {
        let mut a = String::new();
        let mut b = String::new();
        run(&["--format", "structured", "realize", "7^2,6^2,5^2,4^2"], &mut a);
        run(&["--format", "structured", "realize", "7^2,6^2,5^2,4^2"], &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn rejected_realize_exit_code() {
        let mut out = String::new();
        assert_eq!(run(&["realize", "5^8"], &mut out), EXIT_FALSE);
        assert!(out.contains("rejected"));
    }
}
