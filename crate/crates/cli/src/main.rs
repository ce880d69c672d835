mod cache;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use screened_dirac::io::format_g12;
use screened_dirac::ode::IntegratorConfig;
use screened_dirac::par::{self, Execution};
use screened_dirac::roots::{RootMethod, RootTables, DEFAULT_ORDER};
use screened_dirac::spectrum::{
    bound_state, energy_curve, energy_curve_csv, enumerate_bound_states_with, staircase_csv, staircase_with, BoundState,
};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "screened-dirac", version, about = "Bound states of the 1D Dirac operator with a screened potential")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,

    /// Defaults to json for `spectrum` and csv elsewhere.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Where root tables are cached [default: <output-dir>/.cache].
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Solve {
    /// Energy tolerance of the bisection, in [1e-12, 1e-2].
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    /// Keep every k-th grid point in density and orbit files.
    #[arg(long, default_value_t = 10)]
    stride: usize,
}

#[derive(Subcommand)]
enum Command {
    /// All bound states at one coupling.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        solve: Solve,
    },
    /// Bound-state count over a range of couplings.
    #[command(allow_negative_numbers = true)]
    Staircase {
        #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "STEPS"], required = true)]
        gamma_range: Vec<f64>,
        /// Also write E(gamma) for every winding that appears.
        #[arg(long)]
        energies: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Threshold tables.
    Roots {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Method::Ikebe)]
        method: Method,
    },
    /// Θ(s) of one connector.
    #[command(allow_negative_numbers = true)]
    Orbit {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        winding: u32,
        #[command(flatten)]
        solve: Solve,
    },
    /// Density and spinor components of one state.
    #[command(allow_negative_numbers = true)]
    Density {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        winding: u32,
        #[command(flatten)]
        solve: Solve,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ikebe,
    Bisection,
}

impl From<Method> for RootMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Ikebe => RootMethod::Ikebe,
            Method::Bisection => RootMethod::Bisection,
        }
    }
}

struct Context {
    exec: Execution,
    output_dir: PathBuf,
    cache_dir: PathBuf,
    format: Option<Format>,
}

impl Context {
    /// Enough entries that the tables reach past `gamma_max`.
    fn tables_for(&self, gamma_max: f64) -> Result<RootTables, CliError> {
        let count = 20usize.max((gamma_max / 2.0).ceil() as usize + 4);
        self.tables(count, RootMethod::Ikebe)
    }

    fn tables(&self, count: usize, method: RootMethod) -> Result<RootTables, CliError> {
        cache::root_tables(&self.cache_dir, self.exec, count, method, DEFAULT_ORDER.max(20 * count))
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = output::write(&self.output_dir, name, contents)?;
        println!("{}", path.display());
        Ok(())
    }

    fn csv_only(&self, what: &str) -> Result<(), CliError> {
        if self.format == Some(Format::Json) {
            return Err(CliError::Invalid(format!("{what} output is CSV only")));
        }
        Ok(())
    }
}

fn check_gamma(gamma: f64) -> Result<(), CliError> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(CliError::Invalid(format!("--gamma must be a positive number, got {gamma}")));
    }
    Ok(())
}

fn check_solve(solve: &Solve) -> Result<(), CliError> {
    if !(1e-12..=1e-2).contains(&solve.tol) {
        return Err(CliError::Invalid(format!("--tol must lie in [1e-12, 1e-2], got {}", solve.tol)));
    }
    if solve.stride == 0 {
        return Err(CliError::Invalid("--stride must be >= 1".into()));
    }
    Ok(())
}

fn one_state(ctx: &Context, gamma: f64, winding: u32, solve: &Solve) -> Result<BoundState, CliError> {
    check_gamma(gamma)?;
    check_solve(solve)?;
    let tables = ctx.tables_for(gamma)?;
    match bound_state(gamma, winding, solve.tol, &tables, &IntegratorConfig::default())? {
        Some(state) => Ok(state),
        None => {
            let (j, n) = tables.interval_indices(gamma)?;
            Err(CliError::Invalid(format!(
                "no bound state with winding {winding} at gamma {}; windings {n}..={} exist",
                format_g12(gamma),
                j - 1
            )))
        }
    }
}

fn spectrum(ctx: &Context, gamma: f64, solve: &Solve) -> Result<(), CliError> {
    check_gamma(gamma)?;
    check_solve(solve)?;
    let tables = ctx.tables_for(gamma)?;
    let summary = enumerate_bound_states_with(ctx.exec, gamma, solve.tol, &tables, &IntegratorConfig::default())?;
    let name = |s: &BoundState| format!("density_{}.csv", output::state_tag(gamma, s.winding));
    for s in &summary.states {
        ctx.write(&name(s), &s.to_csv(solve.stride))?;
    }
    let record = summary.to_record(name);
    let tag = format!("spectrum_gamma{}", format_g12(gamma));
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => ctx.write(&format!("{tag}.json"), &(record.to_json() + "\n")),
        Format::Csv => ctx.write(&format!("{tag}.csv"), &output::spectrum_csv(&record)),
    }
}

fn staircase(ctx: &Context, range: &[f64], energies: bool, tol: f64) -> Result<(), CliError> {
    let (min, max, steps) = (range[0], range[1], range[2]);
    if !(min > 0.0 && max > min && max.is_finite()) {
        return Err(CliError::Invalid(format!("--gamma-range needs 0 < MIN < MAX, got {min} {max}")));
    }
    if !(steps >= 2.0 && steps.fract() == 0.0 && steps <= 1e7) {
        return Err(CliError::Invalid(format!("STEPS must be an integer >= 2, got {steps}")));
    }
    if energies && !(1e-12..=1e-2).contains(&tol) {
        return Err(CliError::Invalid(format!("--tol must lie in [1e-12, 1e-2], got {tol}")));
    }
    let tables = ctx.tables_for(max)?;
    let steps = staircase_with(ctx.exec, min, max, steps as usize, &tables)?;
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => ctx.write("staircase.csv", &staircase_csv(&steps))?,
        Format::Json => ctx.write("staircase.json", &output::staircase_json(&steps))?,
    }
    if energies {
        let lowest = steps.iter().map(|s| s.ground_winding).min().unwrap_or(0);
        let highest = steps.iter().map(|s| s.ground_winding + s.count).max().unwrap_or(0);
        let gammas: Vec<f64> = steps.iter().map(|s| s.gamma).collect();
        for w in lowest..highest {
            let curve = energy_curve(ctx.exec, w as u32, &gammas, tol, &tables, &IntegratorConfig::default())?;
            ctx.write(&format!("energy_vs_gamma_winding{w}.csv"), &energy_curve_csv(&curve))?;
        }
    }
    Ok(())
}

fn roots(ctx: &Context, count: usize, method: RootMethod) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Invalid("--count must be >= 1".into()));
    }
    let tables = ctx.tables(count, method)?;
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => ctx.write("root_tables.csv", &tables.to_csv()),
        Format::Json => ctx.write("root_tables.json", &output::roots_json(&tables)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let exec = match cli.threads {
        Some(0) => return Err(CliError::Invalid("--threads must be >= 1".into())),
        Some(1) => Execution::Sequential,
        Some(k) => {
            par::configure_threads(k).map_err(CliError::Invalid)?;
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let cache_dir = cli.cache_dir.clone().unwrap_or_else(|| cli.output_dir.join(".cache"));
    let ctx = Context { exec, output_dir: cli.output_dir, cache_dir, format: cli.format };
    match cli.command {
        Command::Spectrum { gamma, solve } => spectrum(&ctx, gamma, &solve),
        Command::Staircase { gamma_range, energies, tol } => staircase(&ctx, &gamma_range, energies, tol),
        Command::Roots { count, method } => roots(&ctx, count, method.into()),
        Command::Orbit { gamma, winding, solve } => {
            ctx.csv_only("orbit")?;
            let state = one_state(&ctx, gamma, winding, &solve)?;
            let tag = output::state_tag(gamma, winding);
            ctx.write(&format!("theta_vs_s_{tag}.csv"), &output::theta_vs_s(&state, solve.stride))
        }
        Command::Density { gamma, winding, solve } => {
            ctx.csv_only("density")?;
            let state = one_state(&ctx, gamma, winding, &solve)?;
            let tag = output::state_tag(gamma, winding);
            ctx.write(&format!("density_{tag}.csv"), &state.to_csv(solve.stride))?;
            ctx.write(&format!("rho_vs_s_{tag}.csv"), &output::rho_vs_s(&state, solve.stride))?;
            ctx.write(&format!("u_vs_v_{tag}.csv"), &output::u_vs_v(&state, solve.stride))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("screened-dirac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
