//! Independent oracles shared by the integration tests. Nothing here calls the
//! Pauli mapper or the statevector kernels.

#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tvha_core::circuit::{AngleExpr, Circuit, Gate};
use tvha_core::{FermionTerm, SpinOrbitalIntegrals};

pub type CMat = DMatrix<Complex64>;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// Applies `a_i†` or `a_i` to an occupation bitstring; returns the new
/// bitstring and the Jordan-Wigner sign, or `None` if the result vanishes.
pub fn ladder(bits: u64, i: usize, dagger: bool) -> Option<(u64, f64)> {
    let occupied = bits >> i & 1 == 1;
    if occupied == dagger {
        return None;
    }
    let below = (bits & ((1u64 << i) - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((bits ^ (1 << i), sign))
}

/// Operator string applied right to left, as written: `ops[0]` is leftmost.
pub fn apply_ops(bits: u64, ops: &[(usize, bool)]) -> Option<(u64, f64)> {
    let mut state = (bits, 1.0);
    for &(i, dagger) in ops.iter().rev() {
        let (b, s) = ladder(state.0, i, dagger)?;
        state = (b, state.1 * s);
    }
    Some(state)
}

pub fn ops_matrix(coeff: f64, ops: &[(usize, bool)], n: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for b in 0..dim as u64 {
        if let Some((out, s)) = apply_ops(b, ops) {
            m[(out as usize, b as usize)] += Complex64::new(coeff * s, 0.0);
        }
    }
    m
}

pub fn term_ops(t: &FermionTerm) -> Vec<(usize, bool)> {
    t.create.iter().map(|&i| (i, true)).chain(t.annihilate.iter().map(|&i| (i, false))).collect()
}

/// Occupation-basis matrix of a sum of fermionic terms.
pub fn fermion_matrix(terms: &[FermionTerm], n: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for t in terms {
        m += ops_matrix(t.coeff, &term_ops(t), n);
    }
    m
}

/// `Σ h_ij a_i†a_j + ½ Σ g_ijkl a_i†a_j†a_k a_l`, straight from the tensors.
pub fn raw_hamiltonian(ints: &SpinOrbitalIntegrals) -> CMat {
    let n = ints.n_so;
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            if ints.h(i, j) != 0.0 {
                m += ops_matrix(ints.h(i, j), &[(i, true), (j, false)], n);
            }
            for k in 0..n {
                for l in 0..n {
                    let g = ints.g(i, j, k, l);
                    if g != 0.0 {
                        m += ops_matrix(0.5 * g, &[(i, true), (j, true), (k, false), (l, false)], n);
                    }
                }
            }
        }
    }
    m
}

/// Random real integrals with `h` symmetric, `g_ijkl = g_jilk` and
/// `g_ijkl = g_lkji` (Hermitian operator).
pub fn random_integrals(n: usize, rng: &mut impl Rng) -> SpinOrbitalIntegrals {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            h[i * n + j] = v;
            h[j * n + i] = v;
        }
    }
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let raw: Vec<f64> = (0..n.pow(4)).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut g = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    g[idx(i, j, k, l)] =
                        (raw[idx(i, j, k, l)] + raw[idx(j, i, l, k)] + raw[idx(l, k, j, i)] + raw[idx(k, l, i, j)])
                            / 4.0;
                }
            }
        }
    }
    SpinOrbitalIntegrals::from_dense(n, h, g, 0.0).expect("symmetric by construction")
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn single_qubit(g: &Gate, params: &[f64]) -> [[Complex64; 2]; 2] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let half = |a: &AngleExpr| a.value(params) / 2.0;
    match g {
        Gate::X(_) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Gate::H(_) => {
            let s = 0.5f64.sqrt();
            [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
        }
        Gate::Rx(_, a) => {
            let t = half(a);
            [[c(t.cos(), 0.0), c(0.0, -t.sin())], [c(0.0, -t.sin()), c(t.cos(), 0.0)]]
        }
        Gate::Ry(_, a) => {
            let t = half(a);
            [[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]]
        }
        Gate::Rz(_, a) => {
            let t = half(a);
            [[Complex64::from_polar(1.0, -t), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, t)]]
        }
        Gate::Cnot { .. } => unreachable!(),
    }
}

/// Dense `2^n × 2^n` matrix of one gate, little-endian.
pub fn gate_matrix(g: &Gate, n: usize, params: &[f64]) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    match *g {
        Gate::Cnot { control, target } => {
            for b in 0..dim {
                let out = if b >> control & 1 == 1 { b ^ (1 << target) } else { b };
                m[(out, b)] = Complex64::new(1.0, 0.0);
            }
        }
        _ => {
            let q = g.qubits().0;
            let u = single_qubit(g, params);
            for b in 0..dim {
                let bit = b >> q & 1;
                for (out_bit, row) in u.iter().enumerate() {
                    let out = (b & !(1 << q)) | (out_bit << q);
                    m[(out, b)] += row[bit];
                }
            }
        }
    }
    m
}

pub fn circuit_unitary(c: &Circuit, params: &[f64]) -> CMat {
    let dim = 1usize << c.n_qubits;
    let mut u = CMat::identity(dim, dim);
    for g in &c.gates {
        u = gate_matrix(g, c.n_qubits, params) * u;
    }
    u
}

/// `exp(iφP)` for a Pauli matrix `P` with `P² = 1`.
pub fn pauli_exp(p: &CMat, phi: f64) -> CMat {
    let dim = p.nrows();
    CMat::identity(dim, dim) * Complex64::new(phi.cos(), 0.0) + p * Complex64::new(0.0, phi.sin())
}

/// Kronecker-product matrix of a Pauli string on `n` qubits (qubit 0 least
/// significant).
pub fn pauli_matrix(p: &tvha_core::PauliString, n: usize) -> CMat {
    use tvha_core::Pauli;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut m = CMat::identity(1, 1);
    for q in 0..n {
        let local = match p.get(q) {
            Pauli::I => CMat::identity(2, 2),
            Pauli::X => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Pauli::Y => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
            Pauli::Z => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        };
        // higher qubits are more significant, so they go on the left
        m = local.kronecker(&m);
    }
    m
}
