//! Command-line runner for cycle quantum walk experiments.
//!
//! Success is silent on stderr and exits 0; any failure prints one
//! `error: ...` line to stderr and exits nonzero. Data goes to `--out`
//! files (or stdout for `dtime`).

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use nalgebra::Vector2;
use num_complex::Complex64;

use cyclewalk::{default_coin, spectrum, SpectrumReport, WalkParams};
use cyclewalk_cli::experiment::{
    decoherence_time, entropy_curve, run_sweep, run_trajectory, Backend, ExperimentSpec,
    OutputFormat, SweepConfig,
};
use cyclewalk_cli::output::{
    fmt_f64, write_entropy_csv, write_spectrum_csv, write_sweep_csv, write_trajectory_csv,
    write_trajectory_json,
};

#[derive(Parser)]
#[command(
    name = "cyclewalk",
    version,
    about = "Quantum walks on a cycle with probabilistic coin measurement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a walk and write its position/entropy trajectory
    Simulate(SimulateArgs),
    /// Eigenvalues of the momentum-space evolution blocks
    Spectrum(SpectrumArgs),
    /// Entropies and mutual information at every step
    Entropy(EntropyArgs),
    /// Smallest time after which the state stays within epsilon of the
    /// stationary state (trace norm)
    Dtime(DtimeArgs),
    /// Run a parameter grid described by a TOML config
    Sweep(SweepArgs),
}

#[derive(Args)]
struct WalkArgs {
    /// Number of cycle sites (at least 2)
    #[arg(long)]
    n: usize,
    /// Coin measurement probability per step, in [0, 1]
    #[arg(long)]
    p: f64,
    /// Coin angle in radians, in (0, pi/2); pi/4 is the Hadamard walk
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    beta: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Initial coin state as a_re,a_im,b_re,b_im (normalized)
    #[arg(long, default_value = "1,0,0,0", allow_hyphen_values = true)]
    psi0: String,
    /// Number of steps
    #[arg(long)]
    tmax: usize,
    /// Record every k-th step (t_max itself is always recorded)
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[arg(long, value_enum, default_value = "fourier")]
    backend: Backend,
    /// Output file
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Row momentum index; omit both -k and --kprime to sweep all pairs
    #[arg(long)]
    k: Option<usize>,
    /// Column momentum index
    #[arg(long)]
    kprime: Option<usize>,
    /// Output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Number of steps
    #[arg(long)]
    tmax: usize,
    /// Output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DtimeArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Convergence threshold (trace norm), must be positive
    #[arg(long)]
    epsilon: f64,
    /// Largest time to examine
    #[arg(long)]
    tmax: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with [grid] axes and [run] settings
    #[arg(long)]
    config: PathBuf,
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Dtime(args) => cmd_dtime(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn parse_psi0(text: &str) -> Result<Vector2<Complex64>> {
    let parts: Vec<&str> = text.split(',').collect();
    ensure!(
        parts.len() == 4,
        "expected psi0 as a_re,a_im,b_re,b_im, got {text:?}"
    );
    let mut vals = [0.0_f64; 4];
    for (value, part) in vals.iter_mut().zip(&parts) {
        *value = part
            .trim()
            .parse()
            .with_context(|| format!("invalid psi0 component {part:?}"))?;
    }
    Ok(Vector2::new(
        Complex64::new(vals[0], vals[1]),
        Complex64::new(vals[2], vals[3]),
    ))
}

/// Canonical text form of a coin state, matching the --psi0 syntax.
fn psi0_cell(coin: &Vector2<Complex64>) -> String {
    [coin[0].re, coin[0].im, coin[1].re, coin[1].im]
        .map(fmt_f64)
        .join(",")
}

fn create_out(path: &Path) -> Result<BufWriter<File>> {
    let file =
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let coin = parse_psi0(&args.psi0)?;
    let params = WalkParams::new(args.walk.n, args.walk.p, args.walk.beta, coin)?;
    let meta = vec![format!(
        "cyclewalk simulate n={} p={} beta={} psi0={} tmax={} every={} backend={} format={}",
        args.walk.n,
        fmt_f64(args.walk.p),
        fmt_f64(args.walk.beta),
        psi0_cell(params.initial_coin()),
        args.tmax,
        args.every,
        args.backend.name(),
        args.format.name(),
    )];
    let mut spec = ExperimentSpec::new(params, args.tmax);
    spec.record_every = args.every;
    spec.backend = args.backend;
    spec.output_path = Some(args.out.clone());
    spec.output_format = args.format;
    let rows = run_trajectory(&spec)?;
    let out = create_out(&args.out)?;
    match args.format {
        OutputFormat::Csv => write_trajectory_csv(out, &meta, args.walk.n, &rows),
        OutputFormat::Json => write_trajectory_json(out, &meta, &rows),
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    let params = WalkParams::new(args.walk.n, args.walk.p, args.walk.beta, default_coin())?;
    let reports: Vec<(usize, usize, SpectrumReport)> = match (args.k, args.kprime) {
        (Some(k), Some(k_prime)) => vec![(k, k_prime, spectrum(k, k_prime, &params)?)],
        (None, None) => {
            let n = args.walk.n;
            let mut all = Vec::with_capacity(n * n);
            for k in 0..n {
                for k_prime in 0..n {
                    all.push((k, k_prime, spectrum(k, k_prime, &params)?));
                }
            }
            all
        }
        _ => bail!("--k and --kprime must be given together"),
    };
    let pair_cell = match (args.k, args.kprime) {
        (Some(k), Some(k_prime)) => format!("k={k} kprime={k_prime}"),
        _ => "k=all kprime=all".to_string(),
    };
    let meta = vec![format!(
        "cyclewalk spectrum n={} p={} beta={} {}",
        args.walk.n,
        fmt_f64(args.walk.p),
        fmt_f64(args.walk.beta),
        pair_cell,
    )];
    write_spectrum_csv(create_out(&args.out)?, &meta, &reports)
}

fn cmd_entropy(args: EntropyArgs) -> Result<()> {
    let params = WalkParams::new(args.walk.n, args.walk.p, args.walk.beta, default_coin())?;
    let records = entropy_curve(&params, args.tmax)?;
    let meta = vec![format!(
        "cyclewalk entropy n={} p={} beta={} psi0={} tmax={}",
        args.walk.n,
        fmt_f64(args.walk.p),
        fmt_f64(args.walk.beta),
        psi0_cell(params.initial_coin()),
        args.tmax,
    )];
    write_entropy_csv(create_out(&args.out)?, &meta, &records)
}

fn cmd_dtime(args: DtimeArgs) -> Result<()> {
    let params = WalkParams::new(args.walk.n, args.walk.p, args.walk.beta, default_coin())?;
    let mut spec = ExperimentSpec::new(params, args.tmax);
    spec.epsilon = args.epsilon;
    let result = decoherence_time(&spec)?;
    println!(
        "# cyclewalk dtime n={} p={} beta={} epsilon={} tmax={}",
        args.walk.n,
        fmt_f64(args.walk.p),
        fmt_f64(args.walk.beta),
        fmt_f64(args.epsilon),
        args.tmax,
    );
    println!("epsilon={}", fmt_f64(result.epsilon));
    match result.d_epsilon {
        Some(tau) => println!("d_epsilon={tau}"),
        None => println!("d_epsilon=not_reached"),
    }
    println!("t,trace_distance");
    for (t, d) in &result.distance_curve {
        println!("{t},{}", fmt_f64(*d));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let config = SweepConfig::parse(&text)?;
    let rows = run_sweep(&config)?;

    let mut ns = config.grid.n_sites.clone();
    ns.sort_unstable();
    let mut ps = config.grid.decoherence_rate.clone();
    ps.sort_by(f64::total_cmp);
    let mut betas = config.grid.coin_angle.clone();
    betas.sort_by(f64::total_cmp);
    let coin_cell = match config.run.initial_coin {
        Some(c) => c.map(fmt_f64).join(","),
        None => psi0_cell(&default_coin()),
    };
    let meta = vec![
        "cyclewalk sweep".to_string(),
        format!(
            "n_sites={}",
            ns.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        ),
        format!(
            "decoherence_rate={}",
            ps.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
        ),
        format!(
            "coin_angle={}",
            betas.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
        ),
        format!(
            "t_max={} record_every={} epsilon={} backend={} initial_coin={}",
            config.run.t_max,
            config.run.record_every,
            fmt_f64(config.run.epsilon),
            config.run.backend.name(),
            coin_cell,
        ),
    ];
    write_sweep_csv(create_out(&config.run.output)?, &meta, &rows)
}
