//! Grid construction and per-point work shared by the sweep and resource
//! commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use tvha_core::circuit::{build_hea, build_tvha, build_uccsd, hf_prep, peephole};
use tvha_core::hamiltonian::{classify, truncate};
use tvha_core::pauli::assemble_measurement_hamiltonian;
use tvha_core::sim::{self, StateVector};
use tvha_core::vqe::{init_params_random, init_params_tvha, run_vqe};
use tvha_core::{Circuit, DecomposedHamiltonian, FixtureMetadata, ParamVector, PauliSum, TvhaOptions};

use crate::config::{AnsatzKind, PTargets, RunConfig};
use crate::error::{CliError, Result};

/// Number of uniform targets `k/20` behind the `auto` grid.
const AUTO_DIVISIONS: usize = 20;

/// A loaded fixture with everything derived from it once.
pub struct Problem {
    pub dir: PathBuf,
    pub meta: FixtureMetadata,
    pub dh: DecomposedHamiltonian,
    pub h: PauliSum,
    pub hf_state: StateVector,
}

impl Problem {
    pub fn load(dir: &Path) -> Result<Self> {
        let (ints, meta) = tvha_core::fcidump::load_fixture(dir).map_err(CliError::Fixture)?;
        let dh = classify(&ints);
        let h = assemble_measurement_hamiltonian(&dh);
        let n = dh.n_so;
        let hf_state = sim::run(&hf_prep(n, meta.n_alpha, meta.n_beta, dh.n_orb()), &[], &StateVector::zero(n)?)?;
        Ok(Self { dir: dir.to_path_buf(), meta, dh, h, hf_state })
    }

    pub fn molecule(&self) -> &str {
        &self.meta.name
    }
}

/// One truncation level of the p grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridLevel {
    pub p_target: f64,
    pub p_actual: f64,
    pub s_cut: usize,
}

/// The `auto` grid: targets `k/20` mapped to their admissible cut, keeping
/// the first target that reaches each cut.
pub fn auto_grid(dh: &DecomposedHamiltonian) -> Vec<GridLevel> {
    let mut out: Vec<GridLevel> = Vec::new();
    for k in 0..=AUTO_DIVISIONS {
        let t = truncate(dh, k as f64 / AUTO_DIVISIONS as f64);
        if out.iter().all(|l| l.s_cut != t.s_cut) {
            out.push(GridLevel { p_target: t.p_target, p_actual: t.p_actual, s_cut: t.s_cut });
        }
    }
    out
}

pub fn p_grid(dh: &DecomposedHamiltonian, targets: &PTargets) -> Vec<GridLevel> {
    match targets {
        PTargets::Auto => auto_grid(dh),
        PTargets::List(v) => v
            .iter()
            .map(|&p| {
                let t = truncate(dh, p);
                GridLevel { p_target: p, p_actual: t.p_actual, s_cut: t.s_cut }
            })
            .collect(),
    }
}

/// A single unit of work. tVHA points carry a Trotter depth and a grid
/// level; the baselines are one point each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub ansatz: AnsatzKind,
    pub n_trotter: Option<usize>,
    pub level: Option<GridLevel>,
    /// Position in the p grid, used for file names.
    pub level_index: Option<usize>,
}

impl GridPoint {
    /// Stable name for per-point output files.
    pub fn key(&self) -> String {
        match (self.n_trotter, self.level_index) {
            (Some(n), Some(i)) => format!("{}_n{n}_p{i:02}", self.ansatz),
            _ => self.ansatz.to_string(),
        }
    }
}

pub fn grid_points(cfg: &RunConfig, levels: &[GridLevel]) -> Vec<GridPoint> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for &ansatz in &cfg.ansatz {
        if seen.contains(&ansatz) {
            continue;
        }
        seen.push(ansatz);
        match ansatz {
            AnsatzKind::Tvha => {
                for &n in &cfg.trotter_steps {
                    for (i, &level) in levels.iter().enumerate() {
                        out.push(GridPoint { ansatz, n_trotter: Some(n), level: Some(level), level_index: Some(i) });
                    }
                }
            }
            _ => out.push(GridPoint { ansatz, n_trotter: None, level: None, level_index: None }),
        }
    }
    out
}

/// A compiled ansatz ready for simulation.
pub struct Built {
    pub cnot_raw: usize,
    pub circuit: Circuit,
    pub init: StateVector,
    pub x0: ParamVector,
}

pub fn build(problem: &Problem, point: &GridPoint, cfg: &RunConfig) -> Result<Built> {
    let dh = &problem.dh;
    let meta = &problem.meta;
    let n = dh.n_so;
    let (raw, init) = match point.ansatz {
        AnsatzKind::Tvha => {
            let level = point.level.expect("tVHA points carry a level");
            let opts = TvhaOptions { one_body_mode: cfg.one_body_mode.into(), ..TvhaOptions::default() };
            let trunc = truncate(dh, level.p_target);
            let steps = point.n_trotter.expect("tVHA points carry a Trotter depth");
            (build_tvha(dh, &trunc, steps, opts)?, problem.hf_state.clone())
        }
        AnsatzKind::Uccsd => (build_uccsd(n, meta.n_alpha, meta.n_beta)?, problem.hf_state.clone()),
        AnsatzKind::Hea => {
            (build_hea(n, meta.n_alpha, meta.n_beta, dh.n_orb(), cfg.hea_layers)?, StateVector::zero(n)?)
        }
    };
    let circuit = peephole(&raw);
    let x0 = match point.ansatz {
        _ if cfg.optimizer.random_init => init_params_random(circuit.n_params, cfg.optimizer.seed),
        AnsatzKind::Tvha => init_params_tvha(point.n_trotter.unwrap_or(1)),
        // both baselines reproduce HF at zero
        AnsatzKind::Uccsd | AnsatzKind::Hea => ParamVector(vec![0.0; circuit.n_params]),
    };
    Ok(Built { cnot_raw: raw.metrics().cnot_count, circuit, init, x0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub molecule: String,
    pub ansatz: AnsatzKind,
    pub n_trotter: Option<usize>,
    pub p_target: Option<f64>,
    pub p_actual: Option<f64>,
    pub s_cut: Option<usize>,
    pub energy: Option<f64>,
    pub e_hf: f64,
    pub e_fci: f64,
    pub abs_err: Option<f64>,
    pub n_evals: Option<usize>,
    pub cnot_raw: Option<usize>,
    pub cnot_opt: Option<usize>,
    pub n_params: Option<usize>,
    pub seed: u64,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Everything produced by one sweep point.
pub struct PointOutcome {
    pub point: GridPoint,
    pub row: SweepRow,
    /// `(eval, energy)` with `e_core` included.
    pub history: Vec<(usize, f64)>,
    pub wall_time_s: f64,
}

/// Builds and optimizes one point. Failures land in the row's status.
pub fn run_point(problem: &Problem, point: &GridPoint, cfg: &RunConfig) -> PointOutcome {
    let start = Instant::now();
    let e_core = problem.dh.e_core;
    let mut row = SweepRow {
        molecule: problem.molecule().to_string(),
        ansatz: point.ansatz,
        n_trotter: point.n_trotter,
        p_target: point.level.map(|l| l.p_target),
        p_actual: point.level.map(|l| l.p_actual),
        s_cut: point.level.map(|l| l.s_cut),
        energy: None,
        e_hf: problem.meta.e_hf,
        e_fci: problem.meta.e_fci,
        abs_err: None,
        n_evals: None,
        cnot_raw: None,
        cnot_opt: None,
        n_params: None,
        seed: cfg.optimizer.seed,
        status: "ok".into(),
    };
    let mut history = Vec::new();
    let result = (|| -> Result<()> {
        let built = build(problem, point, cfg)?;
        row.cnot_raw = Some(built.cnot_raw);
        row.cnot_opt = Some(built.circuit.metrics().cnot_count);
        row.n_params = Some(built.circuit.n_params);
        let r = run_vqe(&built.circuit, &problem.h, &built.init, &built.x0, &cfg.optimizer.to_core()?)?;
        let energy = r.energy + e_core;
        row.energy = Some(energy);
        row.abs_err = Some((energy - problem.meta.e_fci).abs());
        row.n_evals = Some(r.n_evals);
        history = r.history.into_iter().map(|(k, e)| (k, e + e_core)).collect();
        Ok(())
    })();
    if let Err(e) = result {
        row.status = format!("error: {e}");
    }
    PointOutcome { point: *point, row, history, wall_time_s: start.elapsed().as_secs_f64() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceRow {
    pub molecule: String,
    pub ansatz: AnsatzKind,
    pub n_trotter: Option<usize>,
    pub p_target: Option<f64>,
    pub p_actual: Option<f64>,
    pub s_cut: Option<usize>,
    pub cnot_raw: usize,
    pub cnot_opt: usize,
    pub n_params: usize,
    pub depth: usize,
}

pub fn resources_for(problem: &Problem, point: &GridPoint, cfg: &RunConfig) -> Result<ResourceRow> {
    let built = build(problem, point, cfg)?;
    let m = built.circuit.metrics();
    Ok(ResourceRow {
        molecule: problem.molecule().to_string(),
        ansatz: point.ansatz,
        n_trotter: point.n_trotter,
        p_target: point.level.map(|l| l.p_target),
        p_actual: point.level.map(|l| l.p_actual),
        s_cut: point.level.map(|l| l.s_cut),
        cnot_raw: built.cnot_raw,
        cnot_opt: m.cnot_count,
        n_params: m.param_count,
        depth: m.depth,
    })
}

/// Sort key for output rows: ansatz, Trotter depth, then truncation.
pub fn row_order(
    a: (AnsatzKind, Option<usize>, Option<f64>, Option<f64>),
    b: (AnsatzKind, Option<usize>, Option<f64>, Option<f64>),
) -> std::cmp::Ordering {
    let f = |x: Option<f64>| x.unwrap_or(f64::NEG_INFINITY);
    a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(f(a.2).total_cmp(&f(b.2))).then(f(a.3).total_cmp(&f(b.3)))
}
