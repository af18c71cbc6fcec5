mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::{CmdError, CmdResult};
use config::JobConfig;
use std::path::PathBuf;
use std::process::ExitCode;

/// Boundary terms of Noether-Lefschetz generating series at type II and III cusps.
#[derive(Parser)]
#[command(name = "nlboundary", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monodromy type, weight filtration and lattice invariants per cusp.
    Analyze(Common),
    /// Exact and sampled boundary series Z^- per cusp.
    Boundary(Common),
    /// Assemble Z = Z^+ + sum Z^- and test modularity under S and T.
    Check(Common),
    /// Compare orbit-model residue slopes with the boundary coefficients.
    VerifyResidue(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    m_max: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Sample point `x,y`; repeatable, replaces the configured samples.
    #[arg(long = "tau", value_parser = parse_tau)]
    tau: Vec<[f64; 2]>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_tau(s: &str) -> Result<[f64; 2], String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {:?}", s))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{}: {}", x, e))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{}: {}", y, e))?;
    if !(y > 0.0) {
        return Err(format!("Im tau must be positive, got {}", y));
    }
    Ok([x, y])
}

fn load(c: &Common) -> Result<JobConfig, CmdError> {
    let text = std::fs::read_to_string(&c.config)
        .map_err(|e| CmdError::input(format!("{}: {}", c.config.display(), e)))?;
    let mut cfg = JobConfig::parse(&text).map_err(|e| CmdError::input(format!("{}: {}", c.config.display(), e)))?;
    if let Some(m) = &c.m_max {
        cfg.options.m_max = m.clone();
    }
    if let Some(t) = c.tol {
        cfg.options.tol = t;
    }
    if !c.tau.is_empty() {
        cfg.options.tau_samples = c.tau.clone();
    }
    Ok(cfg)
}

macro_rules! by_precision {
    ($f:ident, $cfg:expr) => {
        if $cfg.options.precision == "f32" {
            commands::$f::<f32>($cfg)
        } else {
            commands::$f::<f64>($cfg)
        }
    };
}

fn run(cmd: &Cmd) -> (CmdResult, Option<PathBuf>) {
    let (common, f): (&Common, fn(JobConfig) -> CmdResult) = match cmd {
        Cmd::Analyze(c) => (c, commands::analyze),
        Cmd::Boundary(c) => (c, |cfg| by_precision!(boundary, cfg)),
        Cmd::Check(c) => (c, |cfg| by_precision!(check, cfg)),
        Cmd::VerifyResidue(c) => (c, |cfg| by_precision!(verify_residue, cfg)),
    };
    (load(common).and_then(f), common.out.clone())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("NLB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (result, out) = run(&cli.cmd);
    match result {
        Ok((report, pass)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            let written = match out {
                Some(p) => std::fs::write(&p, &text).map_err(|e| format!("{}: {}", p.display(), e)),
                None => {
                    print!("{}", text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {}", e);
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
