mod plot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lumped_pid::analysis::{default_grid, log_grid};
use lumped_pid::report::{bode_long_csv, controller_config_from_path, standard_tfs, tune_report};
use lumped_pid::sim::{run_scenario, Scenario, SimError, SimTrace};
use lumped_pid::sweep::{metrics_csv, metrics_row, run_sweep, sweep_csv, SweepGrid};

#[derive(Debug, Parser)]
#[command(name = "lumped-pid", version, about = "Generalized PID design, simulation and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print state-feedback gains and, for orders 1 and 2, the classic PI/PID gains.
    Tune {
        #[arg(long)]
        config: PathBuf,
        /// Directory for gains.txt and gains.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario and write trace.csv, metrics.csv and optional plots.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write SVG plots of the primary output and the control signal.
        #[arg(long)]
        plots: bool,
    },
    /// Run a scenario over a grid of bandwidths and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// e.g. `omega=1,2,5 omega_f=10,20 [sigma=0,0.01] [seed=fixed|per-cell]`
        #[arg(long, num_args = 1.., required = true)]
        grid: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Frequency response of G, G_o and G_e as one long-format CSV.
    Bode {
        #[arg(long)]
        config: PathBuf,
        /// `lo=0.01 hi=100 per_decade=50` or `freqs=0.1,1,10`; defaults to a
        /// range around omega and omega_f.
        #[arg(long, num_args = 1..)]
        grid: Vec<String>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Diverged(String),
    Partial { failed: usize, total: usize },
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::Partial { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Diverged(m) => write!(f, "simulation failed: {m}"),
            CliError::Partial { failed, total } => write!(f, "{failed} of {total} sweep cells failed"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn check_input(path: &Path) -> Result<(), CliError> {
    if !path.is_file() {
        return Err(CliError::Config(format!("{}: no such file", path.display())));
    }
    Ok(())
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    check_input(path)?;
    let mut s = Scenario::from_path(path).map_err(config_err)?;
    s.apply_env_overrides().map_err(config_err)?;
    Ok(s)
}

fn tune(config: &Path, out: Option<&Path>) -> Result<(), CliError> {
    check_input(config)?;
    let cfg = controller_config_from_path(config).map_err(config_err)?;
    let report = tune_report(&cfg).map_err(config_err)?;
    let text = report.to_text();
    print!("{text}");
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write(&dir.join("gains.txt"), &text)?;
        write(&dir.join("gains.csv"), &report.to_csv())?;
    }
    Ok(())
}

fn plots(trace: &SimTrace, dir: &Path) -> Result<(), CliError> {
    let name = trace.primary_name().to_string();
    write(
        &dir.join("primary.svg"),
        &plot::line_plot(&name, trace.t(), &[(&name, trace.primary())]),
    )?;
    if let Some(u) = trace.control() {
        write(&dir.join("control.svg"), &plot::line_plot("control", trace.t(), &[("control", u)]))?;
    }
    let pairs: Vec<(String, &[f64])> = trace
        .names()
        .iter()
        .filter(|n| n.starts_with("f_true") || n.starts_with("f_hat"))
        .filter_map(|n| trace.column(n).map(|c| (n.clone(), c)))
        .collect();
    if !pairs.is_empty() {
        let series: Vec<(&str, &[f64])> = pairs.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        write(&dir.join("observer.svg"), &plot::line_plot("disturbance estimate", trace.t(), &series))?;
    }
    Ok(())
}

fn simulate(config: &Path, out: &Path, with_plots: bool) -> Result<(), CliError> {
    let scenario = load_scenario(config)?;
    let result = run_scenario(&scenario);
    if let Err(SimError::Config(m)) = &result {
        return Err(CliError::Config(m.clone()));
    }
    ensure_dir(out)?;
    let row = metrics_row(&scenario, &result);
    write(&out.join("metrics.csv"), &metrics_csv(std::slice::from_ref(&row)))?;
    let trace = result.map_err(|e| CliError::Diverged(e.to_string()))?;
    let mut csv = Vec::new();
    trace
        .write_csv(&mut csv)
        .map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(out.join("trace.csv"), csv).map_err(|e| CliError::Io(e.to_string()))?;
    if with_plots {
        plots(&trace, out)?;
    }
    eprintln!("wrote {} rows to {}", trace.len(), out.join("trace.csv").display());
    Ok(())
}

fn sweep(config: &Path, grid: &[String], out: &Path, parallel: Option<usize>) -> Result<(), CliError> {
    let scenario = load_scenario(config)?;
    let grid = SweepGrid::parse(grid).map_err(config_err)?;
    let threads = parallel
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    if threads == 0 {
        return Err(CliError::Config("--parallel must be at least 1".into()));
    }
    let result = run_sweep(&scenario, &grid, threads);
    ensure_dir(out)?;
    write(&out.join("sweep.csv"), &sweep_csv(&result.rows))?;
    match result.failures() {
        0 => Ok(()),
        failed => Err(CliError::Partial {
            failed,
            total: result.rows.len(),
        }),
    }
}

fn bode_grid(specs: &[String], omega: f64, omega_f: f64) -> Result<Vec<f64>, CliError> {
    if specs.is_empty() {
        return Ok(default_grid(omega, omega_f));
    }
    let (mut lo, mut hi, mut per_decade, mut freqs) = (None, None, 50usize, None);
    for spec in specs.iter().flat_map(|s| s.split_whitespace()) {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("bad grid spec `{spec}`")))?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| CliError::Config(format!("bad number in `{spec}`")));
        match k {
            "lo" => lo = Some(num(v)?),
            "hi" => hi = Some(num(v)?),
            "per_decade" => {
                per_decade = v
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad integer in `{spec}`")))?
            }
            "freqs" => freqs = Some(v.split(',').map(num).collect::<Result<Vec<_>, _>>()?),
            _ => return Err(CliError::Config(format!("unknown grid key `{k}`"))),
        }
    }
    if let Some(f) = freqs {
        return Ok(f);
    }
    let lo = lo.unwrap_or(omega.min(omega_f) / 100.0);
    let hi = hi.unwrap_or(omega.max(omega_f) * 100.0);
    if !(lo > 0.0 && hi > lo && per_decade > 0) {
        return Err(CliError::Config("need 0 < lo < hi and per_decade >= 1".into()));
    }
    Ok(log_grid(lo, hi, per_decade))
}

fn bode(config: &Path, grid: &[String], out: Option<&Path>) -> Result<(), CliError> {
    check_input(config)?;
    let cfg = controller_config_from_path(config).map_err(config_err)?;
    let freqs = bode_grid(grid, cfg.omega, cfg.omega_f)?;
    let tfs = standard_tfs(&cfg).map_err(config_err)?;
    let csv = bode_long_csv(&tfs, &freqs).map_err(config_err)?;
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                ensure_dir(dir)?;
            }
            write(p, &csv)
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Tune { config, out } => tune(&config, out.as_deref()),
        Command::Simulate { config, out, plots } => simulate(&config, &out, plots),
        Command::Sweep {
            config,
            grid,
            out,
            parallel,
        } => sweep(&config, &grid, &out, parallel),
        Command::Bode { config, grid, out } => bode(&config, &grid, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
