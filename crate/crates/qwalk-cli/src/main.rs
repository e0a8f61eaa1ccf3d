//! Command-line front end: runs simulations and analytic evaluations and
//! writes plottable CSV or JSON. All runs are deterministic; identical flags
//! produce byte-identical output.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid usage or parameters.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use qwalk::asymptotics::{
    asymptotic_delta_local, asymptotic_density_quadrature, asymptotic_eigenvalues_nonlocal,
    gaussian_profile, local_coin_profile, nonlocal_profile,
};
use qwalk::math::{binary_entropy, fit_log2_growth, EntropySeries, FitResult};
use qwalk::walk1d::{
    entropy_series, make_gaussian_state, make_local_state, make_nonlocal_state,
    position_distribution, CoinSpec1D, NonlocalSpec, WalkState1D,
};
use qwalk::walk2d::{
    bipartite_entropy_ab, coin_chi1, coin_chi2, coin_grover, coin_hadamard2, coin_rp,
    fit_sample_times, joint_distribution, make_local_state2, step2, CoinOp4, WalkState2D,
};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum walk simulation and entanglement analysis",
    after_help = "The QWALK_THREADS environment variable caps internal parallelism \
                  (default: all cores)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format for tabular data
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Single-walker Hadamard walk: entropy series or final distribution
    Walk1d(Walk1dArgs),
    /// Long-time entanglement of a walk started at one site
    AsymptoticLocal(AsymptoticLocalArgs),
    /// Long-time entanglement of the two-site or Gaussian start
    AsymptoticNonlocal(AsymptoticNonlocalArgs),
    /// Scan the long-time entanglement surface over (theta, phi)
    SweepNonlocal(SweepNonlocalArgs),
    /// Two-walker walk: entropy series, distribution, or growth fit
    Walk2d(Walk2dArgs),
    /// Fit a growth exponent to an entropy series read from CSV
    Fit(FitArgs),
}

#[derive(Args)]
struct Walk1dArgs {
    /// Coin angle alpha in [-pi/2, pi/2] (localized start, with --beta)
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Coin phase beta in [-pi, pi] (localized start, with --alpha)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Named coin preset for a localized start
    #[arg(long, value_enum)]
    coin: Option<CoinPreset>,
    /// Position angle theta in [-pi/2, pi/2] (two-site start, with --phi)
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Relative phase phi in [-pi, pi] (two-site start, with --theta)
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Spread of a Gaussian packet start (chi0 coin, phase-modulated)
    #[arg(long)]
    sigma: Option<f64>,
    /// Half-width of the Gaussian window; default: ceil(5 sigma)
    #[arg(long)]
    cutoff: Option<u32>,
    /// Number of walk steps
    #[arg(long)]
    steps: u64,
    /// Emit the final position distribution instead of the entropy series
    #[arg(long)]
    distribution: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoinPreset {
    /// (|0> + i|1>)/sqrt(2)
    Chi0,
}

#[derive(Args)]
struct AsymptoticLocalArgs {
    /// Coin angle alpha for a single evaluation
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Coin phase beta in [-pi, pi]
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Sweep alpha over this many grid points across [-pi/2, pi/2]
    #[arg(long)]
    grid: Option<usize>,
    /// Evaluate through the k-space quadrature instead of the closed form
    #[arg(long)]
    quadrature: bool,
    /// Quadrature nodes: a power of two, at least 256
    #[arg(long, default_value_t = 4096)]
    n_k: usize,
}

#[derive(Args)]
struct AsymptoticNonlocalArgs {
    /// Position angle theta in [-pi/2, pi/2] (with --phi)
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Relative phase phi in [-pi, pi] (with --theta)
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Evaluate a Gaussian packet of this spread instead (always quadrature)
    #[arg(long)]
    sigma: Option<f64>,
    /// Evaluate through the k-space quadrature instead of the closed form
    #[arg(long)]
    quadrature: bool,
    /// Quadrature nodes: a power of two, at least 256
    #[arg(long, default_value_t = 4096)]
    n_k: usize,
}

#[derive(Args)]
struct SweepNonlocalArgs {
    /// Grid points per axis over theta in [-pi/2, pi/2], phi in [-pi, pi]
    #[arg(long, default_value_t = 101)]
    grid: usize,
}

#[derive(Args)]
struct Walk2dArgs {
    /// Two-qubit coin operator
    #[arg(long, value_enum)]
    coin: Coin2,
    /// Initial coin state (localized at the origin)
    #[arg(long, value_enum)]
    init: Init2,
    /// Number of walk steps
    #[arg(long)]
    steps: u64,
    /// Emit the final joint distribution instead of the entropy series
    #[arg(long, conflicts_with = "fit")]
    distribution: bool,
    /// Fit the growth exponent and emit it as JSON
    #[arg(long)]
    fit: bool,
    /// Earliest time included in the fit
    #[arg(long, default_value_t = 10)]
    t_min: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coin2 {
    /// Separable Hadamard pair
    H2,
    /// Grover reflection
    Grover,
    /// Random-Pavlov game coin, CNOT (H x I)
    Rp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Init2 {
    /// chi0 x chi0 = (|00> + i|01> + i|10> - |11>)/2
    Chi1,
    /// (|00> - |01> - |10> + |11>)/2
    Chi2,
}

#[derive(Args)]
struct FitArgs {
    /// CSV file with header t,entropy
    #[arg(long)]
    input: PathBuf,
    /// Earliest time included in the fit
    #[arg(long, default_value_t = 10)]
    t_min: u64,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

/// Map library errors on user-supplied parameters to usage failures.
fn usage_err(e: qwalk::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("QWALK_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| format!("QWALK_THREADS must be a positive integer, got {v:?}"))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let content = match cli.command {
        Command::Walk1d(args) => walk1d_command(&args, cli.format)?,
        Command::AsymptoticLocal(args) => asymptotic_local_command(&args, cli.format)?,
        Command::AsymptoticNonlocal(args) => asymptotic_nonlocal_command(&args, cli.format)?,
        Command::SweepNonlocal(args) => sweep_nonlocal_command(&args, cli.format)?,
        Command::Walk2d(args) => walk2d_command(&args, cli.format)?,
        Command::Fit(args) => fit_command(&args)?,
    };
    write_output(cli.output.as_deref(), &content)
}

fn write_output(path: Option<&std::path::Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

/// 12 significant digits, scientific; deterministic and JSON-compatible.
fn fmt(x: f64) -> String {
    format!("{:.11e}", x)
}

fn validate_n_k(n_k: usize) -> Result<(), Failure> {
    if n_k < 256 || !n_k.is_power_of_two() {
        return Err(Failure::usage(format!(
            "--n-k must be a power of two of at least 256, got {n_k}"
        )));
    }
    Ok(())
}

fn entropy_of_delta(delta: f64) -> f64 {
    let r = 0.5 * (1.0 + (1.0 - 4.0 * delta).max(0.0).sqrt());
    binary_entropy(r).expect("eigenvalue in range")
}

// ---------------------------------------------------------------------------
// walk1d
// ---------------------------------------------------------------------------

fn build_initial_1d(args: &Walk1dArgs) -> Result<WalkState1D, Failure> {
    let local = args.alpha.is_some() || args.beta.is_some() || args.coin.is_some();
    let nonlocal = args.theta.is_some() || args.phi.is_some();
    let gaussian = args.sigma.is_some() || args.cutoff.is_some();
    match (local, nonlocal, gaussian) {
        (true, false, false) => {
            let coin = match (args.coin, args.alpha, args.beta) {
                (Some(CoinPreset::Chi0), None, None) => CoinSpec1D::chi0(),
                (None, Some(alpha), Some(beta)) => CoinSpec1D::new(alpha, beta).map_err(usage_err)?,
                _ => {
                    return Err(Failure::usage(
                        "localized start takes either --coin chi0 or both --alpha and --beta",
                    ))
                }
            };
            Ok(make_local_state(&coin))
        }
        (false, true, false) => match (args.theta, args.phi) {
            (Some(theta), Some(phi)) => {
                let spec = NonlocalSpec::new(theta, phi).map_err(usage_err)?;
                Ok(make_nonlocal_state(&spec))
            }
            _ => Err(Failure::usage("two-site start needs both --theta and --phi")),
        },
        (false, false, true) => {
            let sigma = args
                .sigma
                .ok_or_else(|| Failure::usage("Gaussian start needs --sigma"))?;
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(Failure::usage(format!("--sigma must be positive, got {sigma}")));
            }
            let cutoff = args.cutoff.unwrap_or((5.0 * sigma).ceil() as u32);
            make_gaussian_state(sigma, cutoff).map_err(usage_err)
        }
        _ => Err(Failure::usage(
            "choose exactly one start: --alpha/--beta (or --coin), --theta/--phi, or --sigma",
        )),
    }
}

fn walk1d_command(args: &Walk1dArgs, format: Format) -> Result<String, Failure> {
    let initial = build_initial_1d(args)?;
    if args.distribution {
        let mut state = initial;
        for _ in 0..args.steps {
            state = qwalk::walk1d::step_hadamard(&state);
        }
        let dist = position_distribution(&state);
        Ok(match format {
            Format::Csv => {
                let mut out = String::from("x,p\n");
                for (x, p) in dist {
                    let _ = writeln!(out, "{x},{}", fmt(p));
                }
                out
            }
            Format::Json => {
                let rows: Vec<String> =
                    dist.iter().map(|(x, p)| format!("[{x},{}]", fmt(*p))).collect();
                format!("{{\"distribution\":[{}]}}\n", rows.join(","))
            }
        })
    } else {
        let series = entropy_series(&initial, args.steps);
        Ok(render_series(&series, format))
    }
}

fn render_series(series: &EntropySeries, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("t,entropy\n");
            for &(t, s) in series.entries() {
                let _ = writeln!(out, "{t},{}", fmt(s));
            }
            out
        }
        Format::Json => {
            let rows: Vec<String> = series
                .entries()
                .iter()
                .map(|&(t, s)| format!("[{t},{}]", fmt(s)))
                .collect();
            format!("{{\"series\":[{}]}}\n", rows.join(","))
        }
    }
}

// ---------------------------------------------------------------------------
// asymptotics
// ---------------------------------------------------------------------------

fn local_entropy(coin: &CoinSpec1D, quadrature: bool, n_k: usize) -> Result<(f64, f64), Failure> {
    if quadrature {
        let rho = asymptotic_density_quadrature(local_coin_profile(coin), n_k)
            .map_err(usage_err)?;
        Ok((rho.delta(), rho.entropy()))
    } else {
        let delta = asymptotic_delta_local(coin);
        Ok((delta, entropy_of_delta(delta)))
    }
}

fn asymptotic_local_command(args: &AsymptoticLocalArgs, format: Format) -> Result<String, Failure> {
    validate_n_k(args.n_k)?;
    match (args.alpha, args.grid) {
        (Some(alpha), None) => {
            let coin = CoinSpec1D::new(alpha, args.beta).map_err(usage_err)?;
            let (delta, entropy) = local_entropy(&coin, args.quadrature, args.n_k)?;
            Ok(match format {
                Format::Csv => format!(
                    "alpha,beta,delta,entropy\n{},{},{},{}\n",
                    fmt(alpha),
                    fmt(args.beta),
                    fmt(delta),
                    fmt(entropy)
                ),
                Format::Json => format!(
                    "{{\"alpha\":{},\"beta\":{},\"delta\":{},\"entropy\":{}}}\n",
                    fmt(alpha),
                    fmt(args.beta),
                    fmt(delta),
                    fmt(entropy)
                ),
            })
        }
        (None, Some(grid)) => {
            if grid < 2 {
                return Err(Failure::usage("--grid needs at least 2 points"));
            }
            let alphas: Vec<f64> = (0..grid)
                .map(|i| {
                    -std::f64::consts::FRAC_PI_2
                        + std::f64::consts::PI * i as f64 / (grid - 1) as f64
                })
                .collect();
            let rows: Result<Vec<(f64, f64)>, Failure> = alphas
                .par_iter()
                .map(|&alpha| {
                    let coin = CoinSpec1D::new(alpha.clamp(
                        -std::f64::consts::FRAC_PI_2,
                        std::f64::consts::FRAC_PI_2,
                    ), args.beta)
                    .map_err(usage_err)?;
                    let (_, entropy) = local_entropy(&coin, args.quadrature, args.n_k)?;
                    Ok((alpha, entropy))
                })
                .collect();
            let rows = rows?;
            Ok(match format {
                Format::Csv => {
                    let mut out = String::from("alpha,entropy\n");
                    for (alpha, s) in rows {
                        let _ = writeln!(out, "{},{}", fmt(alpha), fmt(s));
                    }
                    out
                }
                Format::Json => {
                    let cells: Vec<String> = rows
                        .iter()
                        .map(|(a, s)| format!("[{},{}]", fmt(*a), fmt(*s)))
                        .collect();
                    format!("{{\"sweep\":[{}]}}\n", cells.join(","))
                }
            })
        }
        _ => Err(Failure::usage("provide exactly one of --alpha or --grid")),
    }
}

fn asymptotic_nonlocal_command(
    args: &AsymptoticNonlocalArgs,
    format: Format,
) -> Result<String, Failure> {
    validate_n_k(args.n_k)?;
    if let Some(sigma) = args.sigma {
        if args.theta.is_some() || args.phi.is_some() {
            return Err(Failure::usage("--sigma cannot be combined with --theta/--phi"));
        }
        let profile = gaussian_profile(sigma, args.n_k).map_err(usage_err)?;
        let rho = asymptotic_density_quadrature(profile, args.n_k).map_err(usage_err)?;
        let entropy = rho.entropy();
        return Ok(match format {
            Format::Csv => format!("sigma,entropy\n{},{}\n", fmt(sigma), fmt(entropy)),
            Format::Json => format!(
                "{{\"sigma\":{},\"entropy\":{}}}\n",
                fmt(sigma),
                fmt(entropy)
            ),
        });
    }
    let (theta, phi) = match (args.theta, args.phi) {
        (Some(t), Some(p)) => (t, p),
        _ => {
            return Err(Failure::usage(
                "provide both --theta and --phi, or --sigma for a Gaussian packet",
            ))
        }
    };
    let spec = NonlocalSpec::new(theta, phi).map_err(usage_err)?;
    let (r1, r2, entropy) = if args.quadrature {
        let rho = asymptotic_density_quadrature(nonlocal_profile(&spec), args.n_k)
            .map_err(usage_err)?;
        let (r1, r2) = rho.eigenvalues();
        (r1, r2, rho.entropy())
    } else {
        let (r1, r2) = asymptotic_eigenvalues_nonlocal(&spec).map_err(usage_err)?;
        (r1, r2, binary_entropy(r1).expect("eigenvalue in range"))
    };
    Ok(match format {
        Format::Csv => format!(
            "theta,phi,r1,r2,entropy\n{},{},{},{},{}\n",
            fmt(theta),
            fmt(phi),
            fmt(r1),
            fmt(r2),
            fmt(entropy)
        ),
        Format::Json => format!(
            "{{\"theta\":{},\"phi\":{},\"r1\":{},\"r2\":{},\"entropy\":{}}}\n",
            fmt(theta),
            fmt(phi),
            fmt(r1),
            fmt(r2),
            fmt(entropy)
        ),
    })
}

fn sweep_nonlocal_command(args: &SweepNonlocalArgs, format: Format) -> Result<String, Failure> {
    let grid = args.grid;
    if grid < 2 {
        return Err(Failure::usage("--grid needs at least 2 points"));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let rows: Vec<Vec<(f64, f64, f64)>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let theta =
                (-half_pi + pi * i as f64 / (grid - 1) as f64).clamp(-half_pi, half_pi);
            (0..grid)
                .map(|j| {
                    let phi = (-pi + 2.0 * pi * j as f64 / (grid - 1) as f64).clamp(-pi, pi);
                    let spec = NonlocalSpec::new(theta, phi).expect("grid angles are in range");
                    let (r, _) = asymptotic_eigenvalues_nonlocal(&spec)
                        .expect("bracket bounded on the whole rectangle");
                    (theta, phi, binary_entropy(r).expect("eigenvalue in range"))
                })
                .collect()
        })
        .collect();
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("theta,phi,entropy\n");
            for (theta, phi, s) in rows.into_iter().flatten() {
                let _ = writeln!(out, "{},{},{}", fmt(theta), fmt(phi), fmt(s));
            }
            out
        }
        Format::Json => {
            let cells: Vec<String> = rows
                .into_iter()
                .flatten()
                .map(|(theta, phi, s)| format!("[{},{},{}]", fmt(theta), fmt(phi), fmt(s)))
                .collect();
            format!("{{\"sweep\":[{}]}}\n", cells.join(","))
        }
    })
}

// ---------------------------------------------------------------------------
// walk2d
// ---------------------------------------------------------------------------

fn coin_op(coin: Coin2) -> CoinOp4 {
    match coin {
        Coin2::H2 => coin_hadamard2(),
        Coin2::Grover => coin_grover(),
        Coin2::Rp => coin_rp(),
    }
}

fn initial_2d(init: Init2) -> WalkState2D {
    let coin = match init {
        Init2::Chi1 => coin_chi1(),
        Init2::Chi2 => coin_chi2(),
    };
    make_local_state2(&coin).expect("preset coins have unit norm")
}

/// Entropy samples at the fit schedule; SVDs run in parallel on snapshots.
fn sampled_series(initial: &WalkState2D, coin: &CoinOp4, steps: u64) -> EntropySeries {
    let times = fit_sample_times(steps);
    let mut snapshots = Vec::with_capacity(times.len());
    let mut state = initial.clone();
    let mut next = times.iter().copied().peekable();
    for t in 1..=steps {
        if next.peek().is_none() {
            break;
        }
        state = step2(&state, coin);
        if next.peek() == Some(&t) {
            next.next();
            snapshots.push((t, state.clone()));
        }
    }
    let entries: Vec<(u64, f64)> = snapshots
        .into_par_iter()
        .map(|(t, s)| (t, bipartite_entropy_ab(&s)))
        .collect();
    EntropySeries::from_entries(entries).expect("schedule is strictly increasing")
}

fn walk2d_command(args: &Walk2dArgs, format: Format) -> Result<String, Failure> {
    let coin = coin_op(args.coin);
    let initial = initial_2d(args.init);
    if args.distribution {
        let mut state = initial;
        for _ in 0..args.steps {
            state = step2(&state, &coin);
        }
        let dist = joint_distribution(&state);
        let cells = dist.cells_above(1e-15);
        return Ok(match format {
            Format::Csv => {
                let mut out = String::from("x,y,p\n");
                for (x, y, p) in cells {
                    let _ = writeln!(out, "{x},{y},{}", fmt(p));
                }
                out
            }
            Format::Json => {
                let rows: Vec<String> = cells
                    .iter()
                    .map(|(x, y, p)| format!("[{x},{y},{}]", fmt(*p)))
                    .collect();
                format!("{{\"distribution\":[{}]}}\n", rows.join(","))
            }
        });
    }
    let series = sampled_series(&initial, &coin, args.steps);
    if args.fit {
        let fit = fit_log2_growth(&series, args.t_min).map_err(usage_err)?;
        let points = series
            .entries()
            .iter()
            .filter(|&&(t, _)| t >= args.t_min.max(1))
            .count();
        return Ok(render_fit(&fit, args.t_min, points));
    }
    Ok(render_series(&series, format))
}

fn render_fit(fit: &FitResult, t_min: u64, points: usize) -> String {
    format!(
        "{{\"c\":{},\"intercept\":{},\"residual_rms\":{},\"t_min\":{t_min},\"points\":{points}}}\n",
        fmt(fit.c),
        fmt(fit.intercept),
        fmt(fit.residual_rms)
    )
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

fn fit_command(args: &FitArgs) -> Result<String, Failure> {
    let raw = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", args.input.display())))?;
    let mut series = EntropySeries::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('t')) {
            continue;
        }
        let mut fields = line.split(',');
        let parsed: Option<(u64, f64)> = (|| {
            let t = fields.next()?.trim().parse().ok()?;
            let s = fields.next()?.trim().parse().ok()?;
            Some((t, s))
        })();
        let (t, s) = parsed.ok_or_else(|| {
            Failure::usage(format!(
                "{}:{}: expected 't,entropy' row, got {line:?}",
                args.input.display(),
                lineno + 1
            ))
        })?;
        series.push(t, s).map_err(usage_err)?;
    }
    let fit = fit_log2_growth(&series, args.t_min).map_err(usage_err)?;
    let points = series
        .entries()
        .iter()
        .filter(|&&(t, _)| t >= args.t_min.max(1))
        .count();
    Ok(render_fit(&fit, args.t_min, points))
}
