use std::collections::HashSet;

use num_complex::Complex64;

use super::{exp_pauli, AngleExpr, Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonian::{hf_occupation, DecomposedHamiltonian, FermionTerm, TruncationResult};
use crate::pauli::{map_ladders, map_term, PauliString, PauliSum, SIMPLIFY_TOL};

/// Which one-body terms enter `H_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OneBodyMode {
    /// Only the diagonal `h_ii n̂_i` terms.
    #[default]
    Diagonal,
    /// Diagonal plus off-diagonal hopping terms.
    Full,
}

/// How fermionic terms are turned into Pauli exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PauliMerge {
    /// Each sub-Hamiltonian is mapped as a whole and simplified, so like
    /// strings from different terms combine and may cancel.
    #[default]
    PerBlock,
    /// Each term (with its conjugate) is mapped on its own; no cross-term
    /// cancellation.
    PerTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TvhaOptions {
    pub one_body_mode: OneBodyMode,
    pub merge: PauliMerge,
}

/// Pauli strings of the three sub-Hamiltonians in compilation order,
/// identity components removed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TvhaBlocks {
    pub gamma: Vec<(PauliString, f64)>,
    pub beta: Vec<(PauliString, f64)>,
    pub alpha: Vec<(PauliString, f64)>,
}

fn real_strings(sum: &PauliSum) -> Result<Vec<(PauliString, f64)>> {
    if !sum.is_hermitian(1e-10) {
        return Err(Error::Contract("sub-Hamiltonian is not Hermitian".into()));
    }
    Ok(sum.iter().filter(|(p, _)| !p.is_identity()).map(|(p, c)| (*p, c.re)).collect())
}

fn compile_groups(groups: &[Vec<FermionTerm>], n: usize, merge: PauliMerge) -> Result<Vec<(PauliString, f64)>> {
    match merge {
        PauliMerge::PerBlock => {
            // strings are emitted in order of first appearance, so the sorted
            // term order survives the merge
            let mut sum = PauliSum::new(n);
            let mut order = Vec::new();
            let mut seen = HashSet::new();
            for t in groups.iter().flatten() {
                let mapped = map_term(t, n)?;
                order.extend(mapped.iter().map(|(p, _)| *p).filter(|p| seen.insert(*p)));
                sum.add(&mapped);
            }
            let merged = sum.simplify(SIMPLIFY_TOL);
            if !merged.is_hermitian(1e-10) {
                return Err(Error::Contract("sub-Hamiltonian is not Hermitian".into()));
            }
            Ok(order
                .into_iter()
                .filter(|p| !p.is_identity())
                .map(|p| (p, merged.coeff(&p).re))
                .filter(|&(_, c)| c != 0.0)
                .collect())
        }
        PauliMerge::PerTerm => {
            let mut out = Vec::new();
            for group in groups {
                let mut sum = PauliSum::new(n);
                for t in group {
                    sum.add(&map_term(t, n)?);
                }
                out.extend(real_strings(&sum.simplify(SIMPLIFY_TOL))?);
            }
            Ok(out)
        }
    }
}

/// Maps the truncated decomposition to per-block Pauli strings.
pub fn tvha_blocks(dh: &DecomposedHamiltonian, trunc: &TruncationResult, opts: TvhaOptions) -> Result<TvhaBlocks> {
    let n = dh.n_so;
    let gamma_groups: Vec<Vec<FermionTerm>> = trunc.kept.chunks(2).map(<[FermionTerm]>::to_vec).collect();
    let beta_groups: Vec<Vec<FermionTerm>> =
        dh.beta.iter().map(|&(i, j, w)| vec![FermionTerm::two_body(w, i, j, j, i)]).collect();
    let mut alpha_groups: Vec<Vec<FermionTerm>> =
        dh.alpha_diag.iter().map(|&(i, h)| vec![FermionTerm::one_body(h, i, i)]).collect();
    if opts.one_body_mode == OneBodyMode::Full {
        alpha_groups.extend(
            dh.alpha_offdiag
                .iter()
                .map(|&(i, j, h)| vec![FermionTerm::one_body(h, i, j), FermionTerm::one_body(h, j, i)]),
        );
    }
    Ok(TvhaBlocks {
        gamma: compile_groups(&gamma_groups, n, opts.merge)?,
        beta: compile_groups(&beta_groups, n, opts.merge)?,
        alpha: compile_groups(&alpha_groups, n, opts.merge)?,
    })
}

/// Trotterized tVHA body (no state preparation) with `3·n_steps` parameters.
///
/// Step `n` (0-based) applies `exp(iγ H_γ^cut)`, then `exp(iβ H_β)`, then
/// `exp(iα H_α)`, bound to parameters `3n`, `3n+1` and `3n+2`.
pub fn build_tvha(
    dh: &DecomposedHamiltonian,
    trunc: &TruncationResult,
    n_steps: usize,
    opts: TvhaOptions,
) -> Result<Circuit> {
    if n_steps == 0 {
        return Err(Error::InvalidTerm("tVHA needs at least one Trotter step".into()));
    }
    let blocks = tvha_blocks(dh, trunc, opts)?;
    let mut c = Circuit::new(dh.n_so, 3 * n_steps);
    for step in 0..n_steps {
        for (slot, block) in [&blocks.gamma, &blocks.beta, &blocks.alpha].into_iter().enumerate() {
            for (p, coeff) in block {
                c.gates.extend(exp_pauli(p, *coeff, Some(3 * step + slot))?);
            }
        }
    }
    Ok(c)
}

/// A particle-hole excitation `occ → virt` in spin-orbital indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Excitation {
    pub occ: Vec<usize>,
    pub virt: Vec<usize>,
}

/// Spin-conserving singles and doubles from the HF determinant: α singles,
/// β singles, then αα, αβ and ββ doubles.
pub fn uccsd_excitations(n_orb: usize, n_alpha: usize, n_beta: usize) -> Vec<Excitation> {
    let occ_a: Vec<usize> = (0..n_alpha).collect();
    let vir_a: Vec<usize> = (n_alpha..n_orb).collect();
    let occ_b: Vec<usize> = (n_orb..n_orb + n_beta).collect();
    let vir_b: Vec<usize> = (n_orb + n_beta..2 * n_orb).collect();

    let mut out = Vec::new();
    for (occ, vir) in [(&occ_a, &vir_a), (&occ_b, &vir_b)] {
        for &i in occ {
            for &a in vir {
                out.push(Excitation { occ: vec![i], virt: vec![a] });
            }
        }
    }
    let pairs = |v: &[usize]| -> Vec<(usize, usize)> {
        v.iter().enumerate().flat_map(|(n, &a)| v[n + 1..].iter().map(move |&b| (a, b))).collect()
    };
    let cross = |u: &[usize], v: &[usize]| -> Vec<(usize, usize)> {
        u.iter().flat_map(|&a| v.iter().map(move |&b| (a, b))).collect()
    };
    let double_sets = [
        (pairs(&occ_a), pairs(&vir_a)),
        (cross(&occ_a, &occ_b), cross(&vir_a, &vir_b)),
        (pairs(&occ_b), pairs(&vir_b)),
    ];
    for (occs, virs) in double_sets {
        for &(i, j) in &occs {
            for &(a, b) in &virs {
                out.push(Excitation { occ: vec![i, j], virt: vec![a, b] });
            }
        }
    }
    out
}

/// Hermitian `Q` with `T − T† = iQ` for the excitation operator `T`.
fn excitation_generator(ex: &Excitation, n: usize) -> Result<PauliSum> {
    // T = a_a† a_b† a_j a_i (or a_a† a_i for singles)
    let ops: Vec<(usize, bool)> =
        ex.virt.iter().map(|&a| (a, true)).chain(ex.occ.iter().rev().map(|&i| (i, false))).collect();
    let adj: Vec<(usize, bool)> = ops.iter().rev().map(|&(i, d)| (i, !d)).collect();
    let mut q = map_ladders(Complex64::new(0.0, -1.0), &ops, n)?;
    q.add(&map_ladders(Complex64::new(0.0, 1.0), &adj, n)?);
    Ok(q.simplify(SIMPLIFY_TOL))
}

/// Trotterized UCCSD body with one parameter per excitation; zero parameters
/// give the identity.
pub fn build_uccsd(n_so: usize, n_alpha: usize, n_beta: usize) -> Result<Circuit> {
    let n_orb = n_so / 2;
    if n_alpha.max(n_beta) > n_orb || n_alpha + n_beta == 0 || (n_alpha == n_orb && n_beta == n_orb) {
        return Err(Error::InvalidTerm("UCCSD needs occupied and virtual orbitals".into()));
    }
    let excitations = uccsd_excitations(n_orb, n_alpha, n_beta);
    let mut c = Circuit::new(n_so, excitations.len());
    for (k, ex) in excitations.iter().enumerate() {
        for (p, coeff) in real_strings(&excitation_generator(ex, n_so)?)? {
            c.gates.extend(exp_pauli(&p, coeff, Some(k))?);
        }
    }
    Ok(c)
}

fn reverse_linear(n_qubits: usize) -> impl DoubleEndedIterator<Item = Gate> {
    (0..n_qubits.saturating_sub(1)).rev().map(|q| Gate::Cnot { control: q, target: q + 1 })
}

/// Bits to flip on `|0…0⟩` so that `layers` reverse-linear CNOT chains map
/// them onto the HF determinant.
pub fn hea_initial_bits(n_qubits: usize, n_alpha: usize, n_beta: usize, n_orb: usize, layers: usize) -> u64 {
    let mut bits = hf_occupation(n_orb, n_alpha, n_beta).iter().fold(0u64, |acc, &q| acc | 1 << q);
    // CNOTs are self-inverse: run the network backwards
    for _ in 0..layers {
        for g in reverse_linear(n_qubits).rev() {
            if let Gate::Cnot { control, target } = g {
                if bits >> control & 1 == 1 {
                    bits ^= 1 << target;
                }
            }
        }
    }
    bits
}

/// Hardware-efficient ansatz: X gates, then `layers` × (R_Y layer, R_Z layer,
/// reverse-linear CNOT chain), then a final R_Y + R_Z layer. All parameters
/// zero reproduces the HF determinant.
pub fn build_hea(n_qubits: usize, n_alpha: usize, n_beta: usize, n_orb: usize, layers: usize) -> Result<Circuit> {
    if layers == 0 {
        return Err(Error::InvalidTerm("HEA needs at least one layer".into()));
    }
    let mut c = Circuit::new(n_qubits, 2 * n_qubits * (layers + 1));
    let bits = hea_initial_bits(n_qubits, n_alpha, n_beta, n_orb, layers);
    c.gates.extend((0..n_qubits).filter(|q| bits >> q & 1 == 1).map(Gate::X));
    let mut next = 0;
    let mut rotations = |c: &mut Circuit| {
        for make in [Gate::Ry as fn(usize, AngleExpr) -> Gate, Gate::Rz] {
            for q in 0..n_qubits {
                c.gates.push(make(q, AngleExpr::Param { index: next, coeff: 1.0 }));
                next += 1;
            }
        }
    };
    for _ in 0..layers {
        rotations(&mut c);
        c.gates.extend(reverse_linear(n_qubits));
    }
    rotations(&mut c);
    Ok(c)
}
