//! `zeno`: data emission for the quantum Zeno photon-switch experiments.
//!
//! Every subcommand resolves its parameters from (defaults < config file <
//! flags), runs the corresponding library sweep, and emits a deterministic
//! CSV or JSON table. Exit codes: 0 success, 2 configuration error, 3
//! numeric-convergence failure, 4 infeasible extended-space dimension, 1
//! other errors. Failures print a machine-readable JSON record on stderr.

// `!(x > 0.0)` rejects NaN; the clippy-preferred `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::MethodKind;
use config::{FileConfig, ModelSection, Numerics, NumericsSection};
use output::{Format, Sink};
use zeno_core::bound::Branch;

#[derive(Parser, Debug)]
#[command(
    name = "zeno",
    about = "Single-photon quantum Zeno switch in a coupled-resonator waveguide",
    long_about = "Simulates a single photon in a coupled-resonator waveguide with a \
frequency-modulated two-level system. Energies are in units of the hopping xi, times in 1/xi. \
Defaults reproduce the reference experiment: resonance, xi = 1, g = 0.25, nu = 10, L = 41.",
    version
)]
struct Cli {
    /// TOML configuration file (flags override file values).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; "-" or omitted writes to stdout. Files get a
    /// .meta.json sidecar with parameters and units.
    #[arg(long, short = 'o', global = true)]
    out: Option<String>,

    /// Directory for relative output paths (env: ZENO_OUT_DIR).
    #[arg(long, global = true, env = "ZENO_OUT_DIR")]
    out_dir: Option<PathBuf>,

    /// Output format: csv (default) or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Cavity frequency omega_c.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega_c: Option<f64>,

    /// Bare TLS level spacing omega_a.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega_a: Option<f64>,

    /// Modulation amplitude Omega.
    #[arg(long, global = true)]
    amplitude: Option<f64>,

    /// Modulation ratio Omega/nu (wins over --amplitude).
    #[arg(long, global = true)]
    ratio: Option<f64>,

    /// Modulation frequency nu.
    #[arg(long, global = true)]
    nu: Option<f64>,

    /// Inter-cavity hopping xi.
    #[arg(long, global = true)]
    xi: Option<f64>,

    /// TLS-cavity coupling g.
    #[arg(long, global = true)]
    g: Option<f64>,

    /// Number of cavities (odd, TLS at the center).
    #[arg(long, global = true)]
    sites: Option<usize>,

    /// RK4 integrator step (default 1e-3; the zeno-scan default is 2e-4).
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Slices per drive period for the Floquet propagator.
    #[arg(long, global = true)]
    slice_div: Option<u32>,

    /// Temporal truncation M for the Floquet matrix (0 = doubling rule).
    #[arg(long, global = true)]
    floquet_m: Option<usize>,

    /// Cap on the extended-space dimension (2M+1)(L+1).
    #[arg(long, global = true)]
    dim_cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Floquet,
}

impl From<MethodArg> for MethodKind {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => MethodKind::Direct,
            MethodArg::Floquet => MethodKind::Floquet,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Upper => Branch::Upper,
            BranchArg::Lower => Branch::Lower,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Survival probability P_e(t) of the initially excited TLS.
    PeTrace {
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        /// Number of grid intervals (rows = points + 1 including t = 0).
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Floquet)]
        method: MethodArg,
    },
    /// P_e(t_f) versus the modulation ratio Omega/nu.
    ZenoScan {
        #[arg(long, default_value_t = 0.0)]
        ratio_min: f64,
        #[arg(long, default_value_t = 8.0)]
        ratio_max: f64,
        #[arg(long, default_value_t = 0.02)]
        ratio_step: f64,
        #[arg(long, default_value_t = 20.0)]
        tf: f64,
        /// direct is the fast default for the dense grid; floquet matches
        /// it to the oracle-equivalence tolerance.
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Closed-form transmission/reflection across the band.
    Transmission {
        #[arg(long, default_value_t = 1000)]
        k_points: usize,
    },
    /// Gaussian-wavepacket transport oracle on the finite lattice.
    Wavepacket {
        /// Carrier wave number (default pi/3).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
        k0: f64,
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
        #[arg(long, default_value_t = -100, allow_negative_numbers = true)]
        center: i64,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        cut: i64,
        #[arg(long, default_value_t = 60, allow_negative_numbers = true)]
        readout: i64,
        #[arg(long, default_value_t = 401)]
        lattice: usize,
    },
    /// Gap-localized photon state for the configured ratio.
    BoundState {
        #[arg(long, value_enum, default_value_t = BranchArg::Upper)]
        branch: BranchArg,
    },
    /// Bound-state density over (ratio, j); delocalization rows are zero.
    BoundMap {
        #[arg(long, default_value_t = 0.0)]
        ratio_min: f64,
        #[arg(long, default_value_t = 8.0)]
        ratio_max: f64,
        #[arg(long, default_value_t = 0.05)]
        ratio_step: f64,
        /// Sites j = -span ... span.
        #[arg(long, default_value_t = 30)]
        j_span: i64,
    },
    /// Effective decay rate R(t).
    DecayRate {
        #[arg(long, default_value_t = 1.0)]
        t_min: f64,
        #[arg(long, default_value_t = 200.0)]
        t_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Decay-law prediction P_e(t) = exp(-R(t) t).
    Survival {
        #[arg(long, default_value_t = 0.5)]
        t_min: f64,
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Run the cross-module invariant suite; nonzero exit on any violation.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let (kind, exit) = classify(&err);
            let record = serde_json::json!({
                "error": { "kind": kind, "message": err.to_string(), "exit": exit }
            });
            eprintln!("{record}");
            ExitCode::from(exit)
        }
    }
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Core(zeno_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Core(err) => write!(f, "{err}"),
            CliError::Io(err) => write!(f, "{err}"),
        }
    }
}

impl From<zeno_core::Error> for CliError {
    fn from(e: zeno_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn classify(err: &CliError) -> (&'static str, u8) {
    use zeno_core::Error as E;
    match err {
        CliError::Config(_) => ("config", 2),
        CliError::Io(_) => ("io", 1),
        CliError::Core(core) => match core {
            E::DimensionCap { .. } => ("infeasible-dimension", 4),
            E::NonConvergent { .. }
            | E::NormDrift { .. }
            | E::StepTooLarge { .. }
            | E::QuadratureFailure { .. } => ("numeric-convergence", 3),
            E::InvalidParams(_) => ("config", 2),
            _ => ("domain", 1),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            FileConfig::parse(&text).map_err(CliError::Config)?
        }
        None => FileConfig::default(),
    };

    let cli_model = ModelSection {
        omega_c: cli.omega_c,
        omega_a: cli.omega_a,
        amplitude: cli.amplitude,
        ratio: cli.ratio,
        nu: cli.nu,
        xi: cli.xi,
        g: cli.g,
        sites: cli.sites,
    };
    let cli_numerics = NumericsSection {
        dt: cli.dt,
        slice_divisor: cli.slice_div,
        floquet_m: cli.floquet_m,
        dim_cap: cli.dim_cap,
    };
    let params = config::resolve_model(&file.model, &cli_model).map_err(CliError::Config)?;
    let numerics: Numerics =
        config::resolve_numerics(&file.numerics, &cli_numerics).map_err(CliError::Config)?;

    let format_name = cli
        .format
        .clone()
        .or_else(|| file.output.format.clone())
        .unwrap_or_else(|| "csv".to_string());
    let format =
        Format::parse(format_name.trim().to_lowercase().as_str()).map_err(CliError::Config)?;
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| file.output.dir.as_ref().map(PathBuf::from));
    let sink = Sink::resolve(cli.out.as_deref(), out_dir.as_deref());

    let table = match cli.command {
        Command::PeTrace {
            t_max,
            points,
            method,
        } => commands::pe_trace_table(&params, &numerics, t_max, points, method.into())?,
        Command::ZenoScan {
            ratio_min,
            ratio_max,
            ratio_step,
            tf,
            method,
        } => commands::zeno_scan_table(
            &params,
            &numerics,
            ratio_min,
            ratio_max,
            ratio_step,
            tf,
            method.into(),
        )?,
        Command::Transmission { k_points } => commands::transmission_table(&params, k_points)?,
        Command::Wavepacket {
            k0,
            sigma,
            center,
            cut,
            readout,
            lattice,
        } => commands::wavepacket_table(
            &params, &numerics, k0, sigma, center, cut, readout, lattice,
        )?,
        Command::BoundState { branch } => commands::bound_state_table(&params, branch.into())?,
        Command::BoundMap {
            ratio_min,
            ratio_max,
            ratio_step,
            j_span,
        } => commands::bound_map_table(&params, ratio_min, ratio_max, ratio_step, j_span)?,
        Command::DecayRate {
            t_min,
            t_max,
            points,
        } => commands::decay_rate_table(&params, t_min, t_max, points)?,
        Command::Survival {
            t_min,
            t_max,
            points,
        } => commands::survival_table(&params, t_min, t_max, points)?,
        Command::Selfcheck => {
            let checks = commands::selfcheck(&params, &numerics);
            let mut ok = true;
            for check in &checks {
                ok &= check.ok;
                println!(
                    "{} {}: {}",
                    if check.ok { "ok  " } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    };

    sink.write(&table, format)?;
    Ok(ExitCode::SUCCESS)
}
