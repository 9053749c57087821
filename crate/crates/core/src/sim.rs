//! Dense statevector simulation, Pauli-sum expectation values and
//! sector-restricted exact diagonalization.

use std::ops::Deref;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{s_squared, PauliString, PauliSum, MAX_DENSE_QUBITS};

/// Largest imaginary part tolerated in an expectation value.
pub const IMAG_TOL: f64 = 1e-10;
/// Two eigenvalues of `Ŝ²` closer than this are treated as the same spin.
const SPIN_TOL: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Amplitudes over `2^n` basis states; qubit 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|bits⟩`.
    pub fn basis(n_qubits: usize, bits: u64) -> Result<Self> {
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::DimensionOverflow(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if bits as usize >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: bits as usize });
        }
        let mut amps = vec![ZERO; dim];
        amps[bits as usize] = ONE;
        Ok(Self { n_qubits, amps })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::DimensionOverflow(n_qubits));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits, got: amps.len() });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn probability(&self, bits: u64) -> f64 {
        self.amps[bits as usize].norm_sqr()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, g: &Gate, params: &[f64]) {
        match *g {
            Gate::X(q) => {
                let m = 1 << q;
                for b in 0..self.amps.len() {
                    if b & m == 0 {
                        self.amps.swap(b, b | m);
                    }
                }
            }
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.single(q, [[s.into(), s.into()], [s.into(), (-s).into()]]);
            }
            Gate::Rx(q, a) => {
                let (s, c) = (a.value(params) / 2.0).sin_cos();
                let mis = Complex64::new(0.0, -s);
                self.single(q, [[c.into(), mis], [mis, c.into()]]);
            }
            Gate::Ry(q, a) => {
                let (s, c) = (a.value(params) / 2.0).sin_cos();
                self.single(q, [[c.into(), (-s).into()], [s.into(), c.into()]]);
            }
            Gate::Rz(q, a) => {
                let half = a.value(params) / 2.0;
                let lo = Complex64::from_polar(1.0, -half);
                let hi = Complex64::from_polar(1.0, half);
                let m = 1 << q;
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if b & m == 0 { lo } else { hi };
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1 << control, 1 << target);
                for b in 0..self.amps.len() {
                    if b & c != 0 && b & t == 0 {
                        self.amps.swap(b, b | t);
                    }
                }
            }
        }
    }

    fn single(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let m = 1 << q;
        for b in 0..self.amps.len() {
            if b & m == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | m]);
                self.amps[b] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[b | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Applies `exp(iφP)` directly, without a gate decomposition.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, phi: f64) {
        let (s, c) = phi.sin_cos();
        let is = Complex64::new(0.0, s);
        let x = p.x_mask() as usize;
        if x == 0 {
            for (b, amp) in self.amps.iter_mut().enumerate() {
                *amp *= c + is * p.apply_phase(b as u64);
            }
            return;
        }
        // P|b⟩ = λ_b |b⊕x⟩ and P|b⊕x⟩ = conj(λ_b) |b⟩ for Hermitian P
        let top = 1usize << (63 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & top == 0 {
                let bx = b ^ x;
                let lam = p.apply_phase(b as u64);
                let (a0, a1) = (self.amps[b], self.amps[bx]);
                self.amps[b] = c * a0 + is * lam.conj() * a1;
                self.amps[bx] = c * a1 + is * lam * a0;
            }
        }
    }
}

/// Bound parameter values for a circuit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamVector(pub Vec<f64>);

impl Deref for ParamVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

fn check_shapes(c: &Circuit, params: &[f64], state: &StateVector) -> Result<()> {
    if params.len() != c.n_params {
        return Err(Error::DimensionMismatch { expected: c.n_params, got: params.len() });
    }
    if state.n_qubits != c.n_qubits {
        return Err(Error::DimensionMismatch { expected: c.n_qubits, got: state.n_qubits });
    }
    Ok(())
}

/// Runs `c` on `init` with bound parameters.
pub fn run(c: &Circuit, params: &[f64], init: &StateVector) -> Result<StateVector> {
    let mut s = init.clone();
    run_in_place(c, params, &mut s)?;
    Ok(s)
}

pub fn run_in_place(c: &Circuit, params: &[f64], state: &mut StateVector) -> Result<()> {
    check_shapes(c, params, state)?;
    for g in &c.gates {
        state.apply(g, params);
    }
    Ok(())
}

/// `⟨s|H|s⟩` for Hermitian `H`.
pub fn expectation(s: &StateVector, h: &PauliSum) -> Result<f64> {
    if !h.is_hermitian(IMAG_TOL) {
        return Err(Error::Contract("expectation needs a Hermitian Pauli sum".into()));
    }
    if h.n_qubits() > s.n_qubits {
        return Err(Error::DimensionMismatch { expected: s.n_qubits, got: h.n_qubits() });
    }
    let mut total = ZERO;
    for (p, c) in h.iter() {
        let x = p.x_mask() as usize;
        let mut acc = ZERO;
        for (b, amp) in s.amps.iter().enumerate() {
            if amp.re != 0.0 || amp.im != 0.0 {
                acc += s.amps[b ^ x].conj() * p.apply_phase(b as u64) * amp;
            }
        }
        total += c * acc;
    }
    if total.im.abs() > IMAG_TOL {
        return Err(Error::Contract(format!("expectation has imaginary part {:e}", total.im)));
    }
    Ok(total.re)
}

/// Basis states with `n_alpha` bits set among the first `n_orb` qubits and
/// `n_beta` among the next `n_orb`, ascending.
pub fn sector_basis(n_orb: usize, n_alpha: usize, n_beta: usize) -> Vec<u64> {
    let amask = (1u64 << n_orb) - 1;
    (0..1u64 << (2 * n_orb))
        .filter(|b| (b & amask).count_ones() as usize == n_alpha && (b >> n_orb).count_ones() as usize == n_beta)
        .collect()
}

fn restricted_matrix(h: &PauliSum, basis: &[u64], n_qubits: usize) -> DMatrix<Complex64> {
    let mut index = vec![usize::MAX; 1 << n_qubits];
    for (k, &b) in basis.iter().enumerate() {
        index[b as usize] = k;
    }
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (p, c) in h.iter() {
        for (col, &b) in basis.iter().enumerate() {
            let row = index[(b ^ p.x_mask()) as usize];
            if row != usize::MAX {
                m[(row, col)] += c * p.apply_phase(b);
            }
        }
    }
    m
}

fn lowest(m: DMatrix<Complex64>) -> (f64, nalgebra::DVector<Complex64>) {
    let eig = SymmetricEigen::new(m);
    let k = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).expect("non-empty");
    (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned())
}

fn embed(n_qubits: usize, basis: &[u64], v: &nalgebra::DVector<Complex64>) -> StateVector {
    let mut amps = vec![ZERO; 1 << n_qubits];
    for (k, &b) in basis.iter().enumerate() {
        amps[b as usize] = v[k];
    }
    StateVector { n_qubits, amps }
}

/// Lowest eigenpair of `H` in the `(n_alpha, n_beta)` particle sector.
pub fn exact_ground(h: &PauliSum, n_alpha: usize, n_beta: usize, n_orb: usize) -> Result<(f64, StateVector)> {
    exact_ground_with_spin(h, n_alpha, n_beta, n_orb, None)
}

/// As [`exact_ground`], optionally restricted to states with `⟨Ŝ²⟩ = target_s2`.
pub fn exact_ground_with_spin(
    h: &PauliSum,
    n_alpha: usize,
    n_beta: usize,
    n_orb: usize,
    target_s2: Option<f64>,
) -> Result<(f64, StateVector)> {
    let n = 2 * n_orb;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::DimensionOverflow(n));
    }
    if h.n_qubits() > n {
        return Err(Error::DimensionMismatch { expected: n, got: h.n_qubits() });
    }
    let basis = sector_basis(n_orb, n_alpha, n_beta);
    if basis.is_empty() {
        return Err(Error::Sector(format!(
            "no states with {n_alpha} alpha and {n_beta} beta electrons in {n_orb} orbitals"
        )));
    }
    let hm = restricted_matrix(h, &basis, n);
    let Some(target) = target_s2 else {
        let (e, v) = lowest(hm);
        return Ok((e, embed(n, &basis, &v)));
    };

    let spin = SymmetricEigen::new(restricted_matrix(&s_squared(n_orb), &basis, n));
    let cols: Vec<usize> = (0..basis.len()).filter(|&k| (spin.eigenvalues[k] - target).abs() < SPIN_TOL).collect();
    if cols.is_empty() {
        return Err(Error::Sector(format!("no states with S(S+1) = {target} in the particle sector")));
    }
    let v = spin.eigenvectors.select_columns(&cols);
    let projected = v.adjoint() * &hm * &v;
    let (e, y) = lowest(projected);
    Ok((e, embed(n, &basis, &(v * y))))
}

/// Lowest eigenpair of `H` over the whole Hilbert space.
pub fn exact_ground_full(h: &PauliSum) -> Result<(f64, StateVector)> {
    let (e, v) = lowest(h.to_matrix()?);
    StateVector::from_amplitudes(h.n_qubits(), v.iter().copied().collect()).map(|s| (e, s))
}
