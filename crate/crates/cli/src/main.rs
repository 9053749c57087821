use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvha_cli::{
    cmd_fci, cmd_hist, cmd_plot, cmd_resources, cmd_sweep, AnsatzKind, BodyMode, CliError, Metric, Overrides, PTargets,
    References, Result, RunConfig,
};

#[derive(Parser)]
#[command(name = "tvha", version, about = "Truncated variational Hamiltonian ansatz experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export classified Hamiltonian coefficients to hist.csv
    Hist(RunArgs),
    /// Optimize every (p, N) grid point and write sweep.csv
    Sweep(RunArgs),
    /// Count CNOTs and parameters for every grid point
    Resources(RunArgs),
    /// Exact ground energy in the fixture's sector
    Fci(RunArgs),
    /// Render a sweep or resources CSV as SVG
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config, or a manifest.json from an earlier run
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fixture directory holding FCIDUMP and meta.json
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Comma-separated: tvha, uccsd, hea
    #[arg(long, value_delimiter = ',')]
    ansatz: Option<Vec<AnsatzKind>>,
    /// Trotter steps, e.g. 1,2,5
    #[arg(long, value_delimiter = ',')]
    trotter: Option<Vec<usize>>,
    /// "auto" or comma-separated targets in [0, 1]
    #[arg(long)]
    p: Option<PTargets>,
    /// diagonal or full
    #[arg(long)]
    one_body_mode: Option<BodyMode>,
    #[arg(long)]
    hea_layers: Option<usize>,
    /// subplex or nelder_mead
    #[arg(long)]
    optimizer: Option<String>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Start tVHA from seeded random parameters instead of the ramp
    #[arg(long)]
    random_init: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV (default: <out>/sweep.csv)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// energy or cnot
    #[arg(long, default_value = "energy")]
    metric: Metric,
    /// Output SVG (default: next to the CSV, named after the metric)
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(Overrides {
            fixture: self.fixture,
            ansatz: self.ansatz,
            trotter_steps: self.trotter,
            p_targets: self.p,
            one_body_mode: self.one_body_mode,
            hea_layers: self.hea_layers,
            algorithm: self.optimizer,
            max_evals: self.max_evals,
            seed: self.seed,
            random_init: self.random_init,
            jobs: self.jobs,
            out_dir: self.out,
        });
        Ok(cfg)
    }
}

fn plot(args: PlotArgs) -> Result<()> {
    let cfg = args.run.resolve()?;
    let csv = args.csv.unwrap_or_else(|| cfg.out_dir.join("sweep.csv"));
    let name = match args.metric {
        Metric::Energy => "energy.svg",
        Metric::Cnot => "cnot.svg",
    };
    let svg = args.svg.unwrap_or_else(|| csv.with_file_name(name));
    // reference lines for an empty CSV come from the fixture, when given
    let fallback = if cfg.fixture.as_os_str().is_empty() {
        None
    } else {
        let (_, meta) = tvha_core::fcidump::load_fixture(&cfg.fixture).map_err(CliError::Fixture)?;
        Some(References { e_hf: meta.e_hf, e_fci: meta.e_fci })
    };
    cmd_plot(&csv, args.metric, fallback, &svg)?;
    println!("{}", svg.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Hist(a) => {
            println!("{}", cmd_hist(a.resolve()?)?.display());
        }
        Command::Sweep(a) => {
            let report = cmd_sweep(a.resolve()?)?;
            println!("{} ({} rows, {} failed)", report.csv.display(), report.rows.len(), report.failed());
            report.check()?;
        }
        Command::Resources(a) => {
            let cfg = a.resolve()?;
            let out = cfg.out_dir.join("resources.csv");
            let rows = cmd_resources(cfg)?;
            println!("{} ({} rows)", out.display(), rows.len());
        }
        Command::Fci(a) => println!("{}", cmd_fci(a.resolve()?)?),
        Command::Plot(a) => plot(a)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tvha: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
