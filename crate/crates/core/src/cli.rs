//! Command-line front end: `run`, `gen` and `stats`.
//!
//! Exit codes: 0 on success, 1 for I/O and input-file failures, 2 for
//! invalid flags or flag combinations.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::estimators::{Round1Mode, Round2Noise};
use crate::graph::{
    clustering_coefficient, count_kstars, count_triangles, generate_er, load_edge_list_with_summary, max_degree,
    write_edge_list,
};
use crate::harness::{run_trials, write_outputs, Algorithm, DTildePolicy, ExperimentConfig, GraphSource};
use crate::mech::{RandomSource, Role};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ldp-subgraph", version, about = "Subgraph counts under edge local differential privacy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo experiment and write PREFIX.csv and PREFIX.summary.json.
    Run(RunArgs),
    /// Write a random graph as an edge list.
    Gen(GenArgs),
    /// Print exact statistics of an edge list.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// local-lap-kstar, central-lap-kstar, local-rr-tri, local-rr-tri-noemp,
    /// local-2rounds-tri, central-lap-tri or clustering.
    #[arg(long)]
    pub algo: String,
    /// Total budget per estimator.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Fractions of --eps for eps0,eps1,eps2.
    #[arg(long, value_parser = parse_split)]
    pub split: Option<[f64; 3]>,
    /// Star size for k-star estimators.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Degree cap: a number, 'true' or 'private'.
    #[arg(long, default_value = "true")]
    pub dmax: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Users sampled per trial (default: all).
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge-list file.
    #[arg(long, conflicts_with = "er", required_unless_present = "er")]
    pub input: Option<PathBuf>,
    /// Random graph N,ALPHA generated from the seed.
    #[arg(long, value_parser = parse_er)]
    pub er: Option<(usize, f64)>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path prefix.
    #[arg(long)]
    pub out: PathBuf,
    /// Scale round-2 noise by (1 - p1).
    #[arg(long)]
    pub tight_round2_noise: bool,
    /// Materialize the whole noisy graph in round 1 of the two-round protocol.
    #[arg(long)]
    pub eager_rr: bool,
    /// Reuse one node sample across trials.
    #[arg(long)]
    pub fix_sample: bool,
    /// Record wall time per trial in the CSV (breaks byte reproducibility).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_er)]
    pub er: (usize, f64),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Also report the k-star count.
    #[arg(long)]
    pub k: Option<u32>,
}

fn parse_er(s: &str) -> std::result::Result<(usize, f64), String> {
    let (n, alpha) = s.split_once(',').ok_or("expected N,ALPHA")?;
    let n = n.trim().parse().map_err(|e| format!("bad node count: {e}"))?;
    let alpha: f64 = alpha.trim().parse().map_err(|e| format!("bad edge probability: {e}"))?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(format!("edge probability {alpha} is outside [0, 1]"));
    }
    Ok((n, alpha))
}

fn parse_split(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad fraction '{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected three fractions a,b,c".to_string())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::Conditioning(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Stats(a) => cmd_stats(a),
    }
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let source = match (a.input, a.er) {
        (Some(path), _) => GraphSource::File(path),
        (None, Some((n, alpha))) => GraphSource::Er { n, alpha },
        (None, None) => return Err(Error::config("one of --input or --er is required")),
    };
    let mut config = ExperimentConfig::new(a.algo.parse()?, source);
    config.eps = a.eps;
    config.split = a.split;
    config.k = a.k;
    config.d_tilde = a.dmax.parse::<DTildePolicy>()?;
    config.trials = a.trials;
    config.n = a.n;
    config.seed = a.seed;
    config.fix_sample = a.fix_sample;
    config.round1 = if a.eager_rr { Round1Mode::Eager } else { Round1Mode::Lazy };
    config.round2_noise = if a.tight_round2_noise { Round2Noise::Tight } else { Round2Noise::AsListed };
    let two_round = matches!(config.algorithm, Algorithm::Clustering | Algorithm::Local2RoundsTriangle);
    if !two_round && (a.tight_round2_noise || a.eager_rr) {
        return Err(Error::config("round options apply to the two-round protocol only"));
    }

    let run = run_trials(&config)?;
    let written = write_outputs(&a.out, &run, a.timings)?;
    let s = &run.summary;
    println!("algorithm        {}", config.algorithm);
    println!("trials           {}", s.trials);
    println!("mean truth       {}", s.truth_mean);
    println!("mean estimate    {}", s.mean_estimate);
    println!("mean l2          {}", s.mean_l2);
    println!("mean rel. error  {}", s.mean_relative_error);
    if let Some(b) = run.order_only_l2_bound {
        println!("l2 bound (order only, unit constants) {b:e}");
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let (n, alpha) = a.er;
    let g = generate_er(n, alpha, &mut RandomSource::new(a.seed).trial(0).stream(Role::Generation, 0))?;
    let io = |source| Error::Io { path: a.out.clone(), source };
    let mut out = BufWriter::new(File::create(&a.out).map_err(io)?);
    write_edge_list(&g, &mut out).and_then(|_| out.flush()).map_err(io)?;
    println!("wrote {} nodes, {} edges to {}", g.n(), g.edge_count(), a.out.display());
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let (g, summary) = load_edge_list_with_summary(&a.input)?;
    let triangles = count_triangles(&g);
    let two_stars = count_kstars(&g, 2)?;
    let mut out = std::io::stdout().lock();
    let mut report = || -> std::io::Result<()> {
        writeln!(out, "nodes            {}", g.n())?;
        writeln!(out, "edges            {}", g.edge_count())?;
        writeln!(out, "max degree       {}", max_degree(&g))?;
        writeln!(out, "mean degree      {}", summary.mean_degree)?;
        writeln!(out, "self loops       {} dropped", summary.self_loops_dropped)?;
        writeln!(out, "duplicates       {} dropped", summary.duplicates_dropped)?;
        writeln!(out, "triangles        {triangles}")?;
        writeln!(out, "2-stars          {two_stars}")?;
        if let Some(k) = a.k {
            match count_kstars(&g, k) {
                Ok(c) => writeln!(out, "{:<17}{c}", format!("{k}-stars"))?,
                Err(e) => writeln!(out, "{:<17}{e}", format!("{k}-stars"))?,
            }
        }
        writeln!(out, "clustering       {}", clustering_coefficient(triangles as f64, two_stars as f64))
    };
    report().map_err(|source| Error::Io { path: "<stdout>".into(), source })
}
