use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mixkin::harness::config::ExperimentConfig;
use mixkin::harness::presets::{KineticPreset, DEFAULT_NV, T_FINAL};
use mixkin::harness::{self, csv, restrict_average, EulerKind};
use mixkin::{MixError, RegimeParams, Scheme};

/// Semi-Lagrangian BGK solvers for gas mixtures.
#[derive(Parser)]
#[command(name = "mixkin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EulerArg {
    Single,
    Multi,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Use a single worker thread.
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-convergence table on the smooth four-gas problem.
    Accuracy {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        eps: f64,
        /// Comma-separated successive doublings, e.g. 40,80,160,320.
        #[arg(long, value_delimiter = ',', default_value = "40,80,160,320")]
        nx: Vec<usize>,
        #[arg(long, default_value = "out/accuracy")]
        out: PathBuf,
    },
    /// Single gas against a mixture of four identical gases.
    Indiff {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value = "BDF3-QCW35")]
        scheme: String,
        #[arg(long, default_value = "out/indiff")]
        out: PathBuf,
    },
    /// Kinetic shock tube, optionally against a hydrodynamic reference.
    Riemann {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long, value_enum)]
        euler: Option<EulerArg>,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        /// Resolution of the reference run; a multiple of `nx`.
        #[arg(long, default_value_t = 4000)]
        ref_nx: usize,
        #[arg(long, default_value = "BDF3-QCW35")]
        scheme: String,
        #[arg(long, default_value = "out/riemann")]
        out: PathBuf,
    },
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), MixError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), MixError> {
    match cli.command {
        Command::Run { config, serial, out } => {
            if serial {
                set_serial();
            }
            let cfg = ExperimentConfig::load(&config)?;
            let dir = out.or_else(|| cfg.output_dir.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
            let art = harness::run_preset(&cfg, &dir)?;
            for r in &art.convergence {
                println!("{:>6}  {:.3e}  {}", r.nx, r.error, r.rate.map(|v| format!("{v:.2}")).unwrap_or_default());
            }
            for f in &art.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Accuracy { scheme, eps, nx, out } => {
            let scheme: Scheme = scheme.parse()?;
            let regime = RegimeParams::single_scale(eps).map_err(|e| MixError::config("eps", e.to_string()))?;
            check_doublings(&nx)?;
            let rows = harness::convergence_table(KineticPreset::Accuracy, scheme, &nx, &regime, DEFAULT_NV)?;
            println!("{scheme}, eps = {eps:e}");
            println!("{:>6}  {:>10}  rate", "Nx", "error");
            for r in &rows {
                println!("{:>6}  {:.3e}  {}", r.nx, r.error, r.rate.map(|v| format!("{v:.2}")).unwrap_or_default());
            }
            write(&out, "convergence.csv", &csv::convergence_csv(&rows))?;
        }
        Command::Indiff { eps, nx, scheme, out } => {
            let scheme: Scheme = scheme.parse()?;
            let regime = RegimeParams::single_scale(eps).map_err(|e| MixError::config("eps", e.to_string()))?;
            let (d, one, four) = harness::indiff_discrepancy(scheme, &regime, nx, DEFAULT_NV)?;
            write(&out, "moments_single.csv", &csv::moments_csv(&one.grid.x_nodes, &one.moments, 1.0))?;
            write(&out, "moments_four.csv", &csv::moments_csv(&four.grid.x_nodes, &four.moments, 1.0))?;
            write(&out, "discrepancy.csv", &format!("Nx,discrepancy\n{nx},{}\n", csv::fmt_f64(d)))?;
            println!("Nx = {nx}: discrepancy in n = {d:.3e}");
        }
        Command::Riemann { eps, kappa, euler, nx, ref_nx, scheme, out } => {
            let scheme: Scheme = scheme.parse()?;
            let regime = RegimeParams::new(eps, kappa).map_err(|e| MixError::config("eps", e.to_string()))?;
            let run = harness::run_kinetic(&KineticPreset::Riemann.setup(nx, DEFAULT_NV)?, scheme, &regime)?;
            write(&out, "moments_kinetic.csv", &csv::moments_csv(&run.grid.x_nodes, &run.moments, 1.0))?;
            write(&out, "diagnostics.csv", &csv::diagnostics_csv(&run.trajectory.diagnostics))?;
            if let Some(kind) = euler {
                if ref_nx % nx != 0 {
                    return Err(MixError::config("ref-nx", format!("{ref_nx} is not a multiple of {nx}")));
                }
                let kind = match kind {
                    EulerArg::Single => EulerKind::Single,
                    EulerArg::Multi => EulerKind::Multi { kappa },
                };
                let reference = harness::run_riemann_euler(kind, ref_nx, T_FINAL, 0.4)?;
                write(&out, "moments_euler.csv", &csv::moments_csv(&reference.grid.x_nodes, &reference.moments, 1.0))?;
                let ratio = ref_nx / nx;
                for (name, a, b) in [
                    ("rho", &run.moments.rho, &reference.moments.rho),
                    ("u", &run.moments.u, &reference.moments.u),
                    ("T", &run.moments.t, &reference.moments.t),
                ] {
                    let d = harness::l1_rel(a, &restrict_average(b, ratio))?;
                    println!("relative L1 difference in {name}: {d:.3e}");
                }
            }
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn check_doublings(nx: &[usize]) -> Result<(), MixError> {
    if nx.is_empty() {
        return Err(MixError::config("nx", "empty list"));
    }
    for w in nx.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(MixError::config("nx", "resolutions must be successive doublings"));
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn set_serial() {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
}

#[cfg(not(feature = "parallel"))]
fn set_serial() {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
