//! `verdex`: build vertex algebras, evaluate products and brackets, and run
//! the identity suites.

mod config;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;
use verdex_core::identities::Verdict;
use verdex_core::verify::{run_verify, VerifyReport};
use verdex_core::VertexAlgebra;

use config::{expand_suites, RunConfig};

const EXIT_IDENTITY_FAILURE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "verdex", version, about = "Exact computations in vertex algebras over non-Archimedean rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct the algebra and print its generators, locality orders and fs images.
    Build {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expression such as `nprod(L, L, 3)` or `lambda(L, L)`.
    Eval {
        spec: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Run randomized identity suites and write a JSON report.
    Verify {
        spec: PathBuf,
        /// Suite to run; repeatable. `all` selects every suite.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Cases per identity suite.
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error that already knows its exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn config_error(e: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        msg: format!("{e:#}"),
    }
}

fn load(spec: &PathBuf) -> Result<(RunConfig, VertexAlgebra), Failure> {
    let cfg = RunConfig::load(spec).map_err(config_error)?;
    let v = cfg.build().map_err(config_error)?;
    Ok((cfg, v))
}

fn cmd_build(spec: &PathBuf, as_json: bool) -> Result<u8, Failure> {
    let (_, v) = load(spec)?;
    let gens: Vec<_> = v
        .generators()
        .iter()
        .map(|g| (g.label().to_string(), v.render(&v.fs(g))))
        .collect();
    let n = gens.len();
    let mut orders = vec![vec![None; n]; n];
    for (i, row) in orders.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = v.generator_locality(i, j);
        }
    }
    if as_json {
        let j = json!({
            "schemaVersion": verdex_core::verify::SCHEMA_VERSION,
            "algebra": v.name(),
            "norm": v.ctx().to_string(),
            "ring": v.ring().to_string(),
            "generators": gens.iter().map(|(l, f)| json!({"label": l, "fs": f})).collect::<Vec<_>>(),
            "localityOrders": orders,
            "admissibility": v.admissibility_caveat(),
        });
        println!("{}", serde_json::to_string_pretty(&j).expect("json"));
        return Ok(0);
    }
    println!("algebra   {}", v.name());
    println!("norm      {}", v.ctx());
    println!("ring      {}", v.ring());
    println!("vacuum    {}", v.render(&v.vacuum()));
    println!("generators");
    for (label, fs) in &gens {
        println!("  {label:<8} fs = {fs}");
    }
    println!("locality orders");
    for (i, row) in orders.iter().enumerate() {
        for (j, o) in row.iter().enumerate() {
            let o = o.map_or("none".to_string(), |o| o.to_string());
            println!("  ({}, {}) {o}", gens[i].0, gens[j].0);
        }
    }
    if let Some(c) = v.admissibility_caveat() {
        println!("note      {c}");
    }
    Ok(0)
}

fn cmd_eval(spec: &PathBuf, text: &str, as_json: bool) -> Result<u8, Failure> {
    let (_, v) = load(spec)?;
    let out = expr::evaluate(&v, text).map_err(|e| Failure {
        code: EXIT_CONFIG,
        msg: e.render(text),
    })?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&out.json(&v)).expect("json"));
    } else {
        println!("{}", out.text(&v));
    }
    Ok(0)
}

fn print_summary(r: &VerifyReport) {
    println!("{:<14} {:>10} {:>8} {:>12}", "suite", "exact-zero", "nonzero", "inconclusive");
    for s in &r.suites {
        println!(
            "{:<14} {:>10} {:>8} {:>12}",
            s.suite.to_string(),
            s.summary.exact_zero,
            s.summary.nonzero,
            s.summary.inconclusive
        );
        if let Some(t) = &s.admissibility {
            println!("  {:<12} {:>12} {:>12} {:>10}", "field", "field norm", "fs norm", "ratio");
            for e in &t.entries {
                let ratio = e.ratio.as_ref().map_or("-".to_string(), |r| r.to_string());
                println!(
                    "  {:<12} {:>12} {:>12} {:>10}",
                    e.label,
                    e.field_norm.to_string(),
                    e.fs_norm.to_string(),
                    ratio
                );
            }
            println!("  {}", t.note);
        }
        for why in &s.skipped {
            println!("  skipped: {why}");
        }
    }
    println!(
        "{:<14} {:>10} {:>8} {:>12}",
        "total", r.summary.exact_zero, r.summary.nonzero, r.summary.inconclusive
    );
    if !r.inconclusive.is_empty() {
        println!("inconclusive cases");
        for s in &r.suites {
            for (i, c) in s.cases.iter().enumerate() {
                if c.verdict == Verdict::Inconclusive {
                    let note = c.note.as_deref().unwrap_or("");
                    println!("  {}:{i} {note}", s.suite);
                }
            }
        }
    }
}

fn cmd_verify(
    spec: &PathBuf,
    suites: &[String],
    seed: Option<u64>,
    cases: Option<usize>,
    out: Option<&PathBuf>,
) -> Result<u8, Failure> {
    let (mut cfg, v) = load(spec)?;
    if !suites.is_empty() {
        cfg.suites = expand_suites(suites).map_err(config_error)?;
    }
    if let Some(s) = seed {
        cfg.verify.seed = s;
    }
    if let Some(c) = cases {
        cfg.verify.cases = c;
    }
    let report = run_verify(&v, &cfg.suites, &cfg.verify).map_err(|e| Failure {
        code: EXIT_CONFIG,
        msg: e.to_string(),
    })?;
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(config_error)?,
        None => println!("{text}"),
    }
    if out.is_some() {
        print_summary(&report);
    }
    Ok(if report.has_nonzero() {
        EXIT_IDENTITY_FAILURE
    } else if report.summary.inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Build { spec, json } => cmd_build(spec, *json),
        Cmd::Eval { spec, expr, json } => cmd_eval(spec, expr, *json),
        Cmd::Verify {
            spec,
            suites,
            seed,
            cases,
            out,
        } => cmd_verify(spec, suites, *seed, *cases, out.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("verdex: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
