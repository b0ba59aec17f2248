//! `ksctx`: decide Kochen-Specker contextuality of ray sets from the command line.
//!
//! Exit status reports tool health only. An unsatisfiable verdict is a
//! successful run; its outcome lives in the report.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ksctx_core::corpus::{corpus_get, CorpusEntry, NAMES};
use ksctx_core::{export_rayfile, read_rayfile, run_pipeline, OrthoGraph, PipelineOptions, RaySet, Report};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ksctx", version, about = "Kochen-Specker contextuality of finite ray sets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Ray file to read.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "corpus")]
    input: Option<PathBuf>,
    /// Built-in ray set to use instead of a file.
    #[arg(long, global = true, value_name = "NAME")]
    corpus: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the orthogonality graph in DOT format.
    #[arg(long, global = true, value_name = "OUT")]
    dot: Option<PathBuf>,
    /// Stop each search after N nodes and report an inconclusive verdict.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Cross-check solvers against exhaustive enumeration on small instances.
    #[arg(long, global = true)]
    brute_force: bool,
    /// Replace the input by its triad closure before anything else.
    #[arg(long, global = true)]
    close: bool,
    /// Record solver wall-clock times (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarise the input: ray count, edges, triads.
    Info,
    /// Print the triad closure as a ray file.
    Close,
    /// Print the orthogonality graph.
    Graph,
    /// Decide KS-colourability.
    KsColor,
    /// Decide proper 3-colourability.
    ThreeColor,
    /// Search for a context connection with trivial holonomy.
    Connect,
    /// Run every decision procedure and, for corpus sets, compare with the known results.
    Verify,
    /// Print the input as a ray file.
    Export,
    /// List the built-in ray sets.
    Corpus,
}

struct Input {
    source: String,
    rays: RaySet,
    duplicates: usize,
    entry: Option<CorpusEntry>,
}

fn load(global: &Global) -> Result<Input> {
    match (&global.input, &global.corpus) {
        (Some(path), None) => {
            let parsed = read_rayfile(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Input {
                source: path.display().to_string(),
                rays: parsed.rays,
                duplicates: parsed.duplicates,
                entry: None,
            })
        }
        (None, Some(name)) => {
            let entry = corpus_get(name)?;
            Ok(Input {
                source: name.clone(),
                rays: entry.rays.clone(),
                duplicates: 0,
                entry: Some(entry),
            })
        }
        _ => bail!("exactly one of --input FILE or --corpus NAME is required"),
    }
}

fn options(global: &Global, command: &Command) -> PipelineOptions {
    let mut opts = PipelineOptions {
        close: global.close,
        brute_force: global.brute_force,
        budget: global.budget,
        timings: global.timings,
        ..PipelineOptions::default()
    };
    match command {
        Command::KsColor => opts.ks = true,
        Command::ThreeColor => opts.three_c = true,
        Command::Connect => opts.connect = true,
        Command::Verify => {
            opts.ks = true;
            opts.three_c = true;
            opts.connect = true;
        }
        _ => {}
    }
    opts
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json_string());
    } else {
        print!("{}", report.to_text());
    }
}

fn write_dot(path: &PathBuf, rays: &RaySet) -> Result<()> {
    let g = OrthoGraph::build(rays.clone())?;
    std::fs::write(path, g.to_dot(true)).with_context(|| format!("writing {}", path.display()))
}

/// Disagreements between the decision procedures within one report.
fn consistency_problems(report: &Report) -> Vec<String> {
    let v = &report.verdicts;
    let mut out = Vec::new();
    for r in [&v.ks, &v.three_c, &v.connection].into_iter().flatten() {
        if r.brute_force.as_ref().is_some_and(|bf| !bf.agrees) {
            out.push(format!("{}: search and enumeration disagree", r.problem));
        }
        if let Some(h) = &r.holonomy {
            if h.nontrivial > 0 {
                out.push(format!("{}: {} cycles with nontrivial holonomy", r.problem, h.nontrivial));
            }
        }
    }
    if let (Some(c3), Some(conn)) = (&v.three_c, &v.connection) {
        if c3.satisfiable.is_some() && conn.satisfiable.is_some() && c3.satisfiable != conn.satisfiable {
            out.push("3c and connection verdicts differ".into());
        }
    }
    if let (Some(c3), Some(ks)) = (&v.three_c, &v.ks) {
        if c3.satisfiable == Some(true) && ks.satisfiable == Some(false) {
            out.push("3-colourable but not KS-colourable".into());
        }
    }
    out
}

/// Differences between a report and the known results of a corpus entry.
fn expectation_mismatches(report: &Report, entry: &CorpusEntry, closed: bool) -> Vec<String> {
    let e = &entry.expected;
    let mut out = Vec::new();
    let mut check = |what: &str, want: Option<String>, got: Option<String>| {
        if let (Some(want), Some(got)) = (want, got) {
            if want != got {
                out.push(format!("{what}: expected {want}, found {got}"));
            }
        }
    };
    let (rays, triads) = if closed {
        (e.closure_rays, e.closure_triads)
    } else {
        (e.rays, e.triads)
    };
    check("rays", rays.map(|n| n.to_string()), Some(report.graph.rays.to_string()));
    check("triads", triads.map(|n| n.to_string()), Some(report.graph.triads.to_string()));
    if !closed {
        check("edges", e.edges.map(|n| n.to_string()), Some(report.graph.edges.to_string()));
    }
    if let Some(c) = &report.closure {
        check("closure", e.closure_rays.map(|n| n.to_string()), Some(c.after.to_string()));
    }
    let verdict = |v: &Option<ksctx_core::report::VerdictReport>| {
        v.as_ref().and_then(|v| v.satisfiable).map(|b| b.to_string())
    };
    // colourability is preserved by closure only in the unsatisfiable direction
    if !closed || e.closure_rays == e.rays {
        check("ks", e.ks.map(|b| b.to_string()), verdict(&report.verdicts.ks));
        check("3c", e.three_c.map(|b| b.to_string()), verdict(&report.verdicts.three_c));
    }
    out
}

fn corpus_listing() -> Result<Value> {
    let mut entries = Vec::new();
    for name in NAMES {
        let entry = corpus_get(name)?;
        let e = &entry.expected;
        entries.push(json!({
            "name": name,
            "rays": entry.rays.len(),
            "external": entry.external,
            "expected": {
                "edges": e.edges,
                "triads": e.triads,
                "closure_rays": e.closure_rays,
                "closure_triads": e.closure_triads,
                "ks": e.ks,
                "3c": e.three_c,
            },
        }));
    }
    Ok(Value::Array(entries))
}

fn run(cli: Cli) -> Result<()> {
    let global = &cli.global;
    if let Command::Corpus = cli.command {
        let listing = corpus_listing()?;
        if global.json {
            println!("{}", serde_json::to_string_pretty(&listing)?);
        } else {
            for e in listing.as_array().into_iter().flatten() {
                let fmt = |v: &Value| if v.is_null() { "?".to_owned() } else { v.to_string() };
                let x = &e["expected"];
                println!(
                    "{:<11} rays={:<3} closure={:<3} triads={:<3} ks={:<5} 3c={}",
                    e["name"].as_str().unwrap_or_default(),
                    e["rays"],
                    fmt(&x["closure_rays"]),
                    fmt(&x["triads"]),
                    fmt(&x["ks"]),
                    fmt(&x["3c"]),
                );
            }
        }
        return Ok(());
    }

    let input = load(global)?;
    let close = global.close || matches!(cli.command, Command::Close);
    let rays = if close {
        input.rays.triad_closure()?
    } else {
        input.rays.clone()
    };
    if let Some(path) = &global.dot {
        write_dot(path, &rays)?;
    }

    match cli.command {
        Command::Close | Command::Export => {
            if global.json {
                let keys: Vec<&str> = rays.iter().map(|r| r.key()).collect();
                let out = json!({
                    "dim": rays.dim(),
                    "before": input.rays.len(),
                    "after": rays.len(),
                    "rays": keys,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                print!("{}", export_rayfile(&rays));
            }
        }
        Command::Graph => {
            let g = OrthoGraph::build(rays)?;
            if global.json {
                let mut out = g.to_json();
                out["stats"] = serde_json::to_value(g.stats())?;
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for (i, r) in g.rays().iter().enumerate() {
                    println!("ray {i}: {}", r.key());
                }
                for (a, b) in g.edges() {
                    println!("edge: {a} {b}");
                }
                for t in g.triads() {
                    let ids: Vec<String> = t.iter().map(usize::to_string).collect();
                    println!("triad: {}", ids.join(" "));
                }
            }
        }
        ref command => {
            let mut opts = options(global, command);
            if let Command::Verify = command {
                if !OrthoGraph::build(rays)?.is_triad_closed() {
                    eprintln!("note: set is not triad-closed, skipping the connection search (try --close)");
                    opts.connect = false;
                }
            }
            let report = run_pipeline(&input.source, input.rays, input.duplicates, &opts)?;
            print_report(&report, global.json);
            if let Command::Verify = command {
                let mut problems = consistency_problems(&report);
                if let Some(entry) = &input.entry {
                    problems.extend(expectation_mismatches(&report, entry, close));
                }
                if !problems.is_empty() {
                    bail!("verification failed: {}", problems.join("; "));
                }
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
