//! Parameterized gate IR and ansatz compilers.
//!
//! Rotation angles are either constants or a single parameter scaled by a
//! fixed coefficient, so one compiled circuit serves every parameter vector.

mod build;
mod peephole;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

pub use build::{
    build_hea, build_tvha, build_uccsd, hea_initial_bits, tvha_blocks, uccsd_excitations, Excitation, OneBodyMode,
    PauliMerge, TvhaBlocks, TvhaOptions,
};
pub use peephole::peephole;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Rotation angle in radians: a constant or `coeff · params[index]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleExpr {
    Const(f64),
    Param { index: usize, coeff: f64 },
}

impl AngleExpr {
    pub fn value(&self, params: &[f64]) -> f64 {
        match *self {
            AngleExpr::Const(v) => v,
            AngleExpr::Param { index, coeff } => coeff * params[index],
        }
    }

    pub fn param_index(&self) -> Option<usize> {
        match *self {
            AngleExpr::Const(_) => None,
            AngleExpr::Param { index, .. } => Some(index),
        }
    }

    /// Sum of two angles when the result is still a single expression.
    pub fn merge(&self, other: &AngleExpr) -> Option<AngleExpr> {
        match (*self, *other) {
            (AngleExpr::Const(a), AngleExpr::Const(b)) => Some(AngleExpr::Const(a + b)),
            (AngleExpr::Param { index: i, coeff: a }, AngleExpr::Param { index: j, coeff: b }) if i == j => {
                Some(AngleExpr::Param { index: i, coeff: a + b })
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            AngleExpr::Const(v) => v == 0.0,
            AngleExpr::Param { coeff, .. } => coeff == 0.0,
        }
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleExpr::Const(v) => write!(f, "c{v}"),
            AngleExpr::Param { index, coeff } => write!(f, "p{index}*{coeff}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Rx(usize, AngleExpr),
    Ry(usize, AngleExpr),
    Rz(usize, AngleExpr),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => (q, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    pub fn angle(&self) -> Option<&AngleExpr> {
        match self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X(q) => write!(f, "X {q}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Rx(q, a) => write!(f, "RX {q} {a}"),
            Gate::Ry(q, a) => write!(f, "RY {q} {a}"),
            Gate::Rz(q, a) => write!(f, "RZ {q} {a}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_params: usize,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitMetrics {
    pub cnot_count: usize,
    pub param_count: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_params: usize) -> Self {
        Self { n_qubits, n_params, gates: Vec::new() }
    }

    /// Checks qubit and parameter bounds and CNOT distinctness.
    pub fn validate(&self) -> Result<()> {
        for (n, g) in self.gates.iter().enumerate() {
            let (a, b) = g.qubits();
            if a >= self.n_qubits || b.is_some_and(|b| b >= self.n_qubits) {
                return Err(Error::InvalidTerm(format!("gate {n} ({g}) exceeds {} qubits", self.n_qubits)));
            }
            if b == Some(a) {
                return Err(Error::InvalidTerm(format!("gate {n}: CNOT control equals target")));
            }
            if let Some(i) = g.angle().and_then(AngleExpr::param_index) {
                if i >= self.n_params {
                    return Err(Error::InvalidTerm(format!("gate {n} references parameter {i} of {}", self.n_params)));
                }
            }
        }
        Ok(())
    }

    /// `self` followed by `next`; parameter indices are shared, not offset.
    pub fn then(mut self, next: &Circuit) -> Circuit {
        self.n_qubits = self.n_qubits.max(next.n_qubits);
        self.n_params = self.n_params.max(next.n_params);
        self.gates.extend_from_slice(&next.gates);
        self
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let mut level = vec![0usize; self.n_qubits];
        let mut cnot_count = 0;
        for g in &self.gates {
            match g.qubits() {
                (a, None) => level[a] += 1,
                (a, Some(b)) => {
                    cnot_count += 1;
                    let l = level[a].max(level[b]) + 1;
                    level[a] = l;
                    level[b] = l;
                }
            }
        }
        CircuitMetrics { cnot_count, param_count: self.n_params, depth: level.into_iter().max().unwrap_or(0) }
    }

    /// Text dump, one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {} PARAMS {}\n", self.n_qubits, self.n_params);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// X gates preparing the Hartree-Fock determinant in blocked ordering.
pub fn hf_prep(n_qubits: usize, n_alpha: usize, n_beta: usize, n_orb: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits, 0);
    c.gates.extend(crate::hamiltonian::hf_occupation(n_orb, n_alpha, n_beta).into_iter().map(Gate::X));
    c
}

/// Gates for `exp(i θ c P)`: basis change, CNOT parity ladder onto the
/// highest active qubit, `Rz(−2cθ)`, then the mirror image. `param` binds
/// `θ` to a circuit parameter; `None` means `θ = 1`.
pub fn exp_pauli(p: &PauliString, c: f64, param: Option<usize>) -> Result<Vec<Gate>> {
    let axes = p.axes();
    if axes.is_empty() {
        return Err(Error::InvalidTerm("identity string has no circuit".into()));
    }
    let angle = match param {
        Some(index) => AngleExpr::Param { index, coeff: -2.0 * c },
        None => AngleExpr::Const(-2.0 * c),
    };
    let mut gates = Vec::with_capacity(4 * axes.len());
    for &(q, axis) in &axes {
        match axis {
            Pauli::X => gates.push(Gate::H(q)),
            Pauli::Y => gates.push(Gate::Rx(q, AngleExpr::Const(FRAC_PI_2))),
            _ => {}
        }
    }
    for w in axes.windows(2) {
        gates.push(Gate::Cnot { control: w[0].0, target: w[1].0 });
    }
    gates.push(Gate::Rz(axes[axes.len() - 1].0, angle));
    for w in axes.windows(2).rev() {
        gates.push(Gate::Cnot { control: w[0].0, target: w[1].0 });
    }
    for &(q, axis) in &axes {
        match axis {
            Pauli::X => gates.push(Gate::H(q)),
            Pauli::Y => gates.push(Gate::Rx(q, AngleExpr::Const(-FRAC_PI_2))),
            _ => {}
        }
    }
    Ok(gates)
}
