//! Derivative-free VQE loop: Nelder-Mead and Subplex over a shared
//! evaluation budget.

mod nelder_mead;
mod subplex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::sim::{self, ParamVector, StateVector, IMAG_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    NelderMead,
    #[default]
    Subplex,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NelderMead => "nelder_mead",
            Algorithm::Subplex => "subplex",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nelder_mead" => Ok(Algorithm::NelderMead),
            "subplex" => Ok(Algorithm::Subplex),
            other => Err(Error::Contract(format!("unknown optimizer '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub max_evals: usize,
    pub algorithm: Algorithm,
    pub initial_step: f64,
    pub xtol: f64,
    pub ftol: f64,
    /// Only used by [`init_params_random`]; both optimizers are deterministic.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { max_evals: 1000, algorithm: Algorithm::Subplex, initial_step: 0.1, xtol: 1e-8, ftol: 1e-10, seed: 7 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::Contract("max_evals must be at least 1".into()));
        }
        if !(self.initial_step > 0.0 && self.xtol > 0.0 && self.ftol > 0.0) {
            return Err(Error::Contract("initial_step and tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    /// Best energy seen; electronic only, `e_core` excluded.
    pub energy: f64,
    pub params: ParamVector,
    pub n_evals: usize,
    /// `(evaluation index, energy)` for every evaluation, 1-based.
    pub history: Vec<(usize, f64)>,
    /// Energy at the starting point.
    pub init_energy: f64,
}

/// Budgeted objective wrapper tracking the best point and full history.
pub(crate) struct Evaluator<'a> {
    f: &'a mut dyn FnMut(&[f64]) -> f64,
    max_evals: usize,
    history: Vec<(usize, f64)>,
    best_x: Vec<f64>,
    best_f: f64,
}

impl<'a> Evaluator<'a> {
    fn new(f: &'a mut dyn FnMut(&[f64]) -> f64, max_evals: usize) -> Self {
        Self { f, max_evals, history: Vec::new(), best_x: Vec::new(), best_f: f64::INFINITY }
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.history.len() >= self.max_evals
    }

    /// `Ok(None)` once the budget is spent.
    pub(crate) fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.exhausted() {
            return Ok(None);
        }
        let v = (self.f)(x);
        let n = self.history.len() + 1;
        if v.is_nan() {
            return Err(Error::NanObjective { eval: n });
        }
        self.history.push((n, v));
        if v < self.best_f {
            self.best_f = v;
            self.best_x = x.to_vec();
        }
        Ok(Some(v))
    }
}

/// Adiabatic-ramp start for `n_steps` Trotter steps: `γ_n = β_n = n/N`,
/// `α_n = 1`, laid out as `(γ, β, α)` per step.
pub fn init_params_tvha(n_steps: usize) -> ParamVector {
    let n = n_steps as f64;
    (1..=n_steps).flat_map(|k| [k as f64 / n, k as f64 / n, 1.0]).collect::<Vec<_>>().into()
}

/// Seeded uniform start in `[0, 1)`.
pub fn init_params_random(n_params: usize, seed: u64) -> ParamVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_params).map(|_| rng.gen::<f64>()).collect::<Vec<_>>().into()
}

/// Minimizes `f` from `x0`. The returned energy is the best value seen, so it
/// never exceeds `f(x0)`.
pub fn minimize(f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64], cfg: &OptimizerConfig) -> Result<VqeResult> {
    cfg.validate()?;
    let mut ev = Evaluator::new(f, cfg.max_evals);
    let init_energy = ev.eval(x0)?.expect("budget of at least one evaluation");
    if !x0.is_empty() {
        match cfg.algorithm {
            Algorithm::NelderMead => nelder_mead::run(&mut ev, x0, cfg)?,
            Algorithm::Subplex => subplex::run(&mut ev, x0, cfg)?,
        }
    }
    Ok(VqeResult {
        energy: ev.best_f,
        params: ParamVector(ev.best_x),
        n_evals: ev.history.len(),
        history: ev.history,
        init_energy,
    })
}

/// VQE on `⟨ψ(x)|H|ψ(x)⟩` with `ψ(x) = ansatz(x)|init⟩`.
pub fn run_vqe(
    ansatz: &Circuit,
    h: &PauliSum,
    init: &StateVector,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<VqeResult> {
    if !h.is_hermitian(IMAG_TOL) {
        return Err(Error::Contract("VQE needs a Hermitian Hamiltonian".into()));
    }
    ansatz.validate()?;
    if x0.len() != ansatz.n_params {
        return Err(Error::DimensionMismatch { expected: ansatz.n_params, got: x0.len() });
    }
    let mut state = init.clone();
    let mut failure = None;
    let mut objective = |x: &[f64]| {
        state.clone_from(init);
        match sim::run_in_place(ansatz, x, &mut state).and_then(|()| sim::expectation(&state, h)) {
            Ok(e) => e,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = minimize(&mut objective, x0, cfg);
    match failure {
        Some(e) => Err(e),
        None => result,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(algorithm: Algorithm) -> OptimizerConfig {
        OptimizerConfig { algorithm, ..OptimizerConfig::default() }
    }

    #[test]
    fn ramp_initialization() {
        assert_eq!(init_params_tvha(1).0, vec![1.0, 1.0, 1.0]);
        assert_eq!(init_params_tvha(2).0, vec![0.5, 0.5, 1.0, 1.0, 1.0, 1.0]);
        let p = init_params_tvha(5);
        assert_eq!(p.len(), 15);
        assert!((p[0] - 0.2).abs() < 1e-15 && p[12] == 1.0);
    }

    #[test]
    fn random_init_is_seeded() {
        assert_eq!(init_params_random(4, 3), init_params_random(4, 3));
        assert_ne!(init_params_random(4, 3), init_params_random(4, 4));
        assert!(init_params_random(20, 1).iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn quadratic_bowl() {
        for alg in [Algorithm::NelderMead, Algorithm::Subplex] {
            let mut f = |x: &[f64]| x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>();
            let r = minimize(&mut f, &[0.0; 3], &cfg(alg)).unwrap();
            assert!(r.n_evals <= 300, "{alg:?} used {}", r.n_evals);
            assert!(r.params.iter().all(|v| (v - 1.0).abs() < 1e-6), "{alg:?} {:?}", r.params);
        }
    }

    #[test]
    fn rosenbrock() {
        for alg in [Algorithm::NelderMead, Algorithm::Subplex] {
            let mut f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
            let r = minimize(&mut f, &[-1.2, 1.0], &cfg(alg)).unwrap();
            assert!(r.energy < 1e-4, "{alg:?} reached {}", r.energy);
            assert!(r.n_evals <= 1000);
        }
    }

    #[test]
    fn constant_objective_returns_start() {
        for alg in [Algorithm::NelderMead, Algorithm::Subplex] {
            let mut f = |_: &[f64]| 2.5;
            let r = minimize(&mut f, &[0.3, -0.1], &cfg(alg)).unwrap();
            assert_eq!(r.params.0, vec![0.3, -0.1]);
            assert_eq!(r.energy, 2.5);
            assert_eq!(r.init_energy, 2.5);
        }
    }

    #[test]
    fn nan_aborts() {
        let mut calls = 0;
        let mut f = |x: &[f64]| {
            calls += 1;
            if calls > 3 {
                f64::NAN
            } else {
                x[0] * x[0]
            }
        };
        let err = minimize(&mut f, &[1.0], &cfg(Algorithm::NelderMead)).unwrap_err();
        assert!(matches!(err, Error::NanObjective { eval: 4 }));
    }

    #[test]
    fn budget_respected() {
        for alg in [Algorithm::NelderMead, Algorithm::Subplex] {
            let mut f = |x: &[f64]| x.iter().map(|v| v.sin() + 0.01 * v * v).sum::<f64>();
            let c = OptimizerConfig { max_evals: 37, ..cfg(alg) };
            let r = minimize(&mut f, &[0.5; 6], &c).unwrap();
            assert!(r.n_evals <= 37);
            assert_eq!(r.history.len(), r.n_evals);
        }
    }

    #[test]
    fn bad_config_rejected() {
        let mut f = |_: &[f64]| 0.0;
        let c = OptimizerConfig { max_evals: 0, ..OptimizerConfig::default() };
        assert!(minimize(&mut f, &[0.0], &c).is_err());
    }
}
