//! The `hist`, `sweep`, `resources` and `fci` subcommands.

use std::path::PathBuf;
use std::sync::mpsc;

use rayon::prelude::*;
use serde::Serialize;
use tvha_core::hamiltonian::histogram;
use tvha_core::sim::exact_ground_with_spin;

use crate::config::{AnsatzKind, RunConfig};
use crate::error::{CliError, Result};
use crate::experiment::{
    grid_points, p_grid, resources_for, row_order, run_point, GridLevel, PointOutcome, Problem, ResourceRow, SweepRow,
};
use crate::output::{write_csv, Manifest};

pub const HIST_HEADER: [&str; 3] = ["class", "magnitude", "indices"];
pub const SWEEP_HEADER: [&str; 16] = [
    "molecule",
    "ansatz",
    "n_trotter",
    "p_target",
    "p_actual",
    "s_cut",
    "energy",
    "e_hf",
    "e_fci",
    "abs_err",
    "n_evals",
    "cnot_raw",
    "cnot_opt",
    "n_params",
    "seed",
    "status",
];
pub const RESOURCES_HEADER: [&str; 10] =
    ["molecule", "ansatz", "n_trotter", "p_target", "p_actual", "s_cut", "cnot_raw", "cnot_opt", "n_params", "depth"];
const TIMINGS_HEADER: [&str; 5] = ["molecule", "ansatz", "n_trotter", "p_target", "wall_time_s"];
const HISTORY_HEADER: [&str; 2] = ["eval", "energy"];

#[derive(Debug, Serialize)]
struct HistRow {
    class: &'static str,
    magnitude: f64,
    indices: String,
}

/// Writes `hist.csv`: every nonzero classified coefficient with its class.
pub fn cmd_hist(cfg: RunConfig) -> Result<PathBuf> {
    let cfg = cfg.resolve()?;
    let problem = Problem::load(&cfg.fixture)?;
    let rows: Vec<HistRow> = histogram(&problem.dh)
        .into_iter()
        .map(|e| HistRow {
            class: e.class.label(),
            magnitude: e.magnitude,
            indices: e.indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
        })
        .collect();
    let path = cfg.out_dir.join("hist.csv");
    write_csv(&path, &HIST_HEADER, &rows)?;
    Manifest::new("hist", &cfg, &[], vec!["hist.csv".into()])?.write(&cfg.out_dir.join("hist_manifest.json"))?;
    Ok(path)
}

#[derive(Debug)]
pub struct SweepReport {
    pub csv: PathBuf,
    /// Rows in file order.
    pub rows: Vec<SweepRow>,
    pub p_grid: Vec<GridLevel>,
}

impl SweepReport {
    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }

    /// `Err(Partial)` if any grid point failed.
    pub fn check(&self) -> Result<()> {
        match self.failed() {
            0 => Ok(()),
            failed => Err(CliError::Partial { failed, total: self.rows.len() }),
        }
    }
}

#[derive(Serialize)]
struct TimingRow<'a> {
    molecule: &'a str,
    ansatz: AnsatzKind,
    n_trotter: Option<usize>,
    p_target: Option<f64>,
    wall_time_s: f64,
}

fn sweep_key(r: &SweepRow) -> (AnsatzKind, Option<usize>, Option<f64>, Option<f64>) {
    (r.ansatz, r.n_trotter, r.p_actual, r.p_target)
}

/// Runs VQE on every grid point. Points run on `jobs` threads; this thread
/// alone writes files, rewriting the sorted `sweep.csv` after each point.
/// Wall times go to `timings.csv` so `sweep.csv` stays reproducible.
pub fn cmd_sweep(cfg: RunConfig) -> Result<SweepReport> {
    let cfg = cfg.resolve()?;
    let problem = Problem::load(&cfg.fixture)?;
    let levels = p_grid(&problem.dh, &cfg.p_targets);
    let points = grid_points(&cfg, &levels);
    let out = cfg.out_dir.clone();
    let csv = out.join("sweep.csv");

    let mut outputs = vec!["sweep.csv".to_string(), "timings.csv".to_string()];
    outputs.extend(points.iter().map(|p| format!("history/{}.csv", p.key())));
    Manifest::new("sweep", &cfg, &levels, outputs)?.write(&out.join("manifest.json"))?;
    write_csv::<SweepRow>(&csv, &SWEEP_HEADER, &[])?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    let (tx, rx) = mpsc::channel::<PointOutcome>();
    let mut done: Vec<PointOutcome> = Vec::with_capacity(points.len());
    let mut write_error = None;
    std::thread::scope(|s| {
        s.spawn(|| {
            pool.install(|| {
                points.par_iter().for_each_with(tx, |tx, p| {
                    // the receiver outlives every sender
                    let _ = tx.send(run_point(&problem, p, &cfg));
                })
            })
        });
        for outcome in rx {
            let history = out.join("history").join(format!("{}.csv", outcome.point.key()));
            let res = write_csv(&history, &HISTORY_HEADER, &outcome.history).and_then(|()| {
                done.push(outcome);
                done.sort_by(|a, b| row_order(sweep_key(&a.row), sweep_key(&b.row)));
                let rows: Vec<&SweepRow> = done.iter().map(|o| &o.row).collect();
                write_csv(&csv, &SWEEP_HEADER, &rows)
            });
            if let Err(e) = res {
                write_error.get_or_insert(e);
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }

    let timings: Vec<TimingRow> = done
        .iter()
        .map(|o| TimingRow {
            molecule: &o.row.molecule,
            ansatz: o.row.ansatz,
            n_trotter: o.row.n_trotter,
            p_target: o.row.p_target,
            wall_time_s: o.wall_time_s,
        })
        .collect();
    write_csv(&out.join("timings.csv"), &TIMINGS_HEADER, &timings)?;
    Ok(SweepReport { csv, rows: done.into_iter().map(|o| o.row).collect(), p_grid: levels })
}

/// Circuit costs for every grid point, without optimization.
pub fn cmd_resources(cfg: RunConfig) -> Result<Vec<ResourceRow>> {
    let cfg = cfg.resolve()?;
    let problem = Problem::load(&cfg.fixture)?;
    let levels = p_grid(&problem.dh, &cfg.p_targets);
    let points = grid_points(&cfg, &levels);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    let mut rows =
        pool.install(|| points.par_iter().map(|p| resources_for(&problem, p, &cfg)).collect::<Result<Vec<_>>>())?;
    rows.sort_by(|a, b| {
        row_order((a.ansatz, a.n_trotter, a.p_actual, a.p_target), (b.ansatz, b.n_trotter, b.p_actual, b.p_target))
    });
    write_csv(&cfg.out_dir.join("resources.csv"), &RESOURCES_HEADER, &rows)?;
    Manifest::new("resources", &cfg, &levels, vec!["resources.csv".into()])?
        .write(&cfg.out_dir.join("resources_manifest.json"))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FciReport {
    pub molecule: String,
    /// Exact ground energy in the fixture's sector, `e_core` included.
    pub computed: f64,
    pub e_fci: f64,
    pub e_hf: f64,
}

impl std::fmt::Display for FciReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "molecule  {}", self.molecule)?;
        writeln!(f, "computed  {:.10}", self.computed)?;
        writeln!(f, "e_fci     {:.10}", self.e_fci)?;
        writeln!(f, "e_hf      {:.10}", self.e_hf)?;
        write!(f, "diff      {:.3e}", self.computed - self.e_fci)
    }
}

/// Exact diagonalization in the fixture's particle (and spin) sector.
pub fn cmd_fci(cfg: RunConfig) -> Result<FciReport> {
    let cfg = cfg.resolve()?;
    let problem = Problem::load(&cfg.fixture)?;
    let meta = &problem.meta;
    let (e, _) = exact_ground_with_spin(&problem.h, meta.n_alpha, meta.n_beta, problem.dh.n_orb(), meta.target_s2())?;
    Ok(FciReport { molecule: meta.name.clone(), computed: e + problem.dh.e_core, e_fci: meta.e_fci, e_hf: meta.e_hf })
}
