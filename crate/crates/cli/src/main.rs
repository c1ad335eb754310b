use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclepack::generators::{
    gen_complete, gen_complete_bipartite, gen_cycle, gen_disjoint_cliques, gen_disjoint_cycles, gen_gnp, gen_petersen,
    gen_split, gen_split_matched,
};
use cyclepack::ineq::feasibility_table;
use cyclepack::lemma_suite::{
    exhaustive_crossing_path, exhaustive_disjoint_paths, exhaustive_path_with_spare, sampled_reroute_or_double,
    SuiteReport,
};
use cyclepack::{
    minimalize, pack, pack_with_minimalization, verify_certificate, Graph, PackConfig, PackOutcome, PackResult,
    PackingCertificate,
};

const EXIT_STUCK: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "cyclepack", version, about = "Pack vertex-disjoint long cycles in graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Find k disjoint cycles of order at least r (exit 0 on success, 2 when stuck).
    Pack {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Run the local search on the input graph directly.
        #[arg(long)]
        no_minimalize: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the move trace as JSON to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Edge-list file, or `-` for standard input.
        input: String,
    },
    /// Check a certificate against a graph (exit 0 iff valid).
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cert: PathBuf,
        input: String,
    },
    /// Reduce to a minimal minor and print it with its history.
    Minimalize {
        input: String,
        /// Write the history here instead of appending it as comment lines.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// Print a generated graph as an edge list.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Run a path-search guarantee suite (exit 0 iff no counterexample).
    LemmaCheck {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        lemma: u8,
        /// Size bound for the exhaustive suites (1, 2 and 4).
        #[arg(long, default_value_t = 10)]
        exhaustive_up_to: usize,
        /// Samples per configuration for the sampled suite (3).
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Feasibility table of the type-count systems (exit 0 iff it matches the
    /// expected pattern).
    IneqCheck {
        /// Inclusive range `A..B` of k − 1 values.
        #[arg(long, value_parser = parse_range)]
        kminus1_range: (u32, u32),
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Family {
    /// K_n.
    Complete { n: usize },
    /// K_{s,t}.
    Bipartite { s: usize, t: usize },
    /// Clique of order ceil(r/2)k − 1 joined to n independent vertices.
    Split { k: usize, r: usize, n: usize },
    /// The split graph plus a perfect matching on the independent side.
    SplitMatched { k: usize, r: usize, n: usize },
    /// Disjoint copies of K_size.
    Cliques { size: usize, copies: usize },
    /// k disjoint cycles of order r.
    Cycles { k: usize, r: usize },
    /// C_n.
    Cycle { n: usize },
    /// G(n, p).
    Gnp {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The Petersen graph.
    Petersen,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= A <= B, got {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    NoInput(String),
}

impl From<cyclepack::Error> for Failure {
    fn from(e: cyclepack::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_text(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::NoInput(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(input).map_err(|e| Failure::NoInput(format!("{input}: {e}")))
    }
}

fn read_graph(input: &str) -> Result<Graph, Failure> {
    Ok(Graph::parse_edge_list(&read_text(input)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::NoInput(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn print_pack(res: &PackResult, format: Format) {
    match (&res.outcome, format) {
        (PackOutcome::Success(cert), Format::Json) => println!("{}", cert.to_json()),
        (PackOutcome::Stuck(d), Format::Json) => println!("{}", to_json(d)),
        (PackOutcome::Success(cert), Format::Text) => {
            println!(
                "success: {} disjoint cycles of order >= {} after {} moves",
                cert.cycles.len(),
                cert.r,
                res.iterations
            );
            for c in &cert.cycles {
                let vs: Vec<String> = c.iter().map(u32::to_string).collect();
                println!("{}", vs.join(" "));
            }
        }
        (PackOutcome::Stuck(d), Format::Text) => {
            println!("stuck: {} after {} moves", d.reason, res.iterations);
            println!("full cycles: {}", d.full_cycles);
            println!("potential: {:?}", d.potential.0);
            println!("hypotheses hold: {}", d.hypotheses_hold);
            for w in &d.claim_witnesses {
                println!("unexpected improvement: {w}");
            }
        }
    }
}

fn suite_report(lemma: u8, bound: usize, samples: usize, seed: u64) -> SuiteReport {
    match lemma {
        1 => exhaustive_path_with_spare(bound),
        2 => exhaustive_disjoint_paths(bound),
        3 => sampled_reroute_or_double(&[(5, 4), (5, 7), (6, 4)], samples, seed),
        _ => exhaustive_crossing_path(bound),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Pack {
            k,
            r,
            no_minimalize,
            format,
            trace,
            max_iterations,
            input,
        } => {
            let g = read_graph(&input)?;
            let mut cfg = PackConfig::new(k, r)?;
            if let Some(cap) = max_iterations {
                cfg.max_iterations = cap;
                cfg.validate()?;
            }
            let res = if no_minimalize {
                pack(&g, &cfg)?
            } else {
                pack_with_minimalization(&g, &cfg)?.1
            };
            if let Some(path) = trace {
                write_file(&path, &res.trace_json())?;
            }
            print_pack(&res, format);
            Ok(if res.is_success() { 0 } else { EXIT_STUCK })
        }
        Command::Verify { k, r, cert, input } => {
            let g = read_graph(&input)?;
            let text = fs::read_to_string(&cert).map_err(|e| Failure::NoInput(format!("{}: {e}", cert.display())))?;
            let parsed = PackingCertificate::from_json(&text)?;
            let claimed = PackingCertificate {
                k,
                r,
                cycles: parsed.cycles,
            };
            if verify_certificate(&g, &claimed) {
                println!("valid");
                Ok(0)
            } else {
                println!("invalid");
                Ok(1)
            }
        }
        Command::Minimalize { input, history } => {
            let g = read_graph(&input)?;
            let res = minimalize(&g)?;
            print!("{}", res.minor.to_edge_list());
            let text = res.history.to_text();
            match history {
                Some(path) => write_file(&path, &text)?,
                None => {
                    println!("# d: {} -> {}", res.original_d, res.final_d);
                    for line in text.lines() {
                        println!("# {line}");
                    }
                }
            }
            Ok(0)
        }
        Command::Gen { family } => {
            let g = match family {
                Family::Complete { n } => gen_complete(n)?,
                Family::Bipartite { s, t } => gen_complete_bipartite(s, t)?,
                Family::Split { k, r, n } => gen_split(k, r, n)?,
                Family::SplitMatched { k, r, n } => gen_split_matched(k, r, n)?,
                Family::Cliques { size, copies } => gen_disjoint_cliques(size, copies)?,
                Family::Cycles { k, r } => gen_disjoint_cycles(k, r)?,
                Family::Cycle { n } => gen_cycle(n)?,
                Family::Gnp { n, p, seed } => gen_gnp(n, p, seed)?,
                Family::Petersen => gen_petersen(),
            };
            print!("{}", g.to_edge_list());
            Ok(0)
        }
        Command::LemmaCheck {
            lemma,
            exhaustive_up_to,
            samples,
            seed,
            format,
        } => {
            let report = suite_report(lemma, exhaustive_up_to, samples, seed);
            match format {
                Format::Json => println!("{}", to_json(&report)),
                Format::Text => {
                    println!(
                        "lemma {lemma}: {} instances, {} witnesses, {} missing, {} unsound",
                        report.instances,
                        report.witnesses,
                        report.missing.len(),
                        report.unsound.len()
                    );
                    for m in &report.missing {
                        println!("missing: {m}");
                    }
                    for u in &report.unsound {
                        println!("unsound: {u}");
                    }
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::IneqCheck { kminus1_range, format } => {
            let rows = feasibility_table(kminus1_range.0..=kminus1_range.1)?;
            match format {
                Format::Json => println!("{}", to_json(&rows)),
                Format::Text => {
                    println!("k-1  system     feasible  witnesses  expected");
                    for row in &rows {
                        println!(
                            "{:<4} {:<10} {:<9} {:<10} {}",
                            row.k_minus_1,
                            row.system,
                            row.feasible,
                            row.witnesses,
                            if row.feasible == row.expected_feasible { "ok" } else { "MISMATCH" }
                        );
                    }
                }
            }
            Ok(if rows.iter().all(|r| r.feasible == r.expected_feasible) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::NoInput(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NO_INPUT)
        }
    }
}
