//! Pauli strings, sparse Pauli sums and the Jordan-Wigner mapping.

use std::cmp::Ordering;
use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{DecomposedHamiltonian, FermionTerm};

/// Coefficients smaller than this are removed by [`PauliSum::simplify`].
pub const SIMPLIFY_TOL: f64 = 1e-12;

/// Largest register [`PauliSum::to_matrix`] will expand.
pub const MAX_DENSE_QUBITS: usize = 12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, stored as X and Z bit masks
/// (a qubit with both bits set carries Y). Supports up to 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn from_masks(x: u64, z: u64) -> Self {
        Self { x, z }
    }

    /// Builds from `(qubit, axis)` pairs; identity entries are ignored.
    ///
    /// Panics if a qubit is repeated or exceeds 63.
    pub fn from_axes(axes: &[(usize, Pauli)]) -> Self {
        let mut out = Self::IDENTITY;
        for &(q, p) in axes {
            assert!(q < 64, "qubit {q} out of range");
            let bit = 1u64 << q;
            assert!(out.get(q) == Pauli::I, "qubit {q} repeated");
            match p {
                Pauli::I => {}
                Pauli::X => out.x |= bit,
                Pauli::Y => {
                    out.x |= bit;
                    out.z |= bit
                }
                Pauli::Z => out.z |= bit,
            }
        }
        out
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    /// Non-identity entries in ascending qubit order.
    pub fn axes(&self) -> Vec<(usize, Pauli)> {
        let mut out = Vec::with_capacity(self.weight());
        let mut s = self.support();
        while s != 0 {
            let q = s.trailing_zeros() as usize;
            out.push((q, self.get(q)));
            s &= s - 1;
        }
        out
    }

    /// Highest qubit index acted on, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    /// `self · other = phase · product`.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        // i^k accumulated over qubits where both factors are non-identity
        let mut k = 0u32;
        let mut both = self.support() & other.support();
        while both != 0 {
            let q = both.trailing_zeros() as usize;
            both &= both - 1;
            k += match (self.get(q), other.get(q)) {
                (Pauli::X, Pauli::Y) | (Pauli::Y, Pauli::Z) | (Pauli::Z, Pauli::X) => 1,
                (Pauli::Y, Pauli::X) | (Pauli::Z, Pauli::Y) | (Pauli::X, Pauli::Z) => 3,
                _ => 0,
            };
        }
        let phase = match k % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => I,
            2 => Complex64::new(-1.0, 0.0),
            _ => -I,
        };
        (phase, PauliString { x: self.x ^ other.x, z: self.z ^ other.z })
    }

    /// `P|b⟩ = phase · |b ⊕ x⟩` for a computational basis state `b`.
    #[inline]
    pub fn apply_phase(&self, basis: u64) -> Complex64 {
        let ny = (self.x & self.z).count_ones();
        let sign = if (basis & self.z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        match ny % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }
}

impl Ord for PauliString {
    /// Lexicographic over qubits 0, 1, 2, ... with `I < X < Y < Z`.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.x ^ other.x) | (self.z ^ other.z);
        if diff == 0 {
            return Ordering::Equal;
        }
        let q = diff.trailing_zeros() as usize;
        self.get(q).cmp(&other.get(q))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (q, p) in self.axes() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{q}", p.symbol())?;
            first = false;
        }
        Ok(())
    }
}

/// Sparse complex combination of Pauli strings with sorted keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut out = Self::new(n_qubits);
        for (p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Adds `c · p`, merging with an existing entry.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) {
        debug_assert!(p.max_qubit().is_none_or(|q| q < self.n_qubits));
        match self.terms.entry(p) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
            }
        }
    }

    pub fn add(&mut self, other: &PauliSum) {
        for (p, c) in &other.terms {
            self.add_term(*p, *c);
        }
    }

    pub fn scaled(&self, s: Complex64) -> PauliSum {
        PauliSum { n_qubits: self.n_qubits, terms: self.terms.iter().map(|(p, c)| (*p, c * s)).collect() }
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits.max(other.n_qubits));
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (phase, r) = p.mul(q);
                out.add_term(r, phase * a * b);
            }
        }
        out
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { n_qubits: self.n_qubits, terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect() }
    }

    /// Drops coefficients with `|c| < tol`. Like strings are already merged on
    /// insertion, so the result is idempotent under repeated calls.
    pub fn simplify(&self, tol: f64) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().filter(|(_, c)| c.norm() >= tol).map(|(p, c)| (*p, *c)).collect(),
        }
    }

    /// All coefficients real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Identity coefficient.
    pub fn constant(&self) -> Complex64 {
        self.coeff(&PauliString::IDENTITY)
    }

    /// Dense `2^n × 2^n` matrix, little-endian basis ordering.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::DimensionOverflow(self.n_qubits));
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim as u64 {
                let col = b as usize;
                let row = (b ^ p.x_mask()) as usize;
                m[(row, col)] += c * p.apply_phase(b);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for PauliSum {
    /// One term per line: `±c · X0 Z2 Y5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.terms {
            if c.im == 0.0 {
                writeln!(f, "{:+.16e} · {p}", c.re)?;
            } else {
                writeln!(f, "({:+.16e}{:+.16e}i) · {p}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// Jordan-Wigner image of `a_i†` (`dagger`) or `a_i` on `n` qubits:
/// `½(X_i ∓ iY_i) Z_0 ⋯ Z_{i−1}`.
pub fn jw_ladder(i: usize, dagger: bool, n: usize) -> Result<PauliSum> {
    if i >= n || n > 64 {
        return Err(Error::OrbitalRange { index: i, n });
    }
    let parity = (1u64 << i) - 1;
    let bit = 1u64 << i;
    let y_sign = if dagger { -0.5 } else { 0.5 };
    Ok(PauliSum::from_terms(
        n,
        [
            (PauliString::from_masks(bit, parity), Complex64::new(0.5, 0.0)),
            (PauliString::from_masks(bit, parity | bit), Complex64::new(0.0, y_sign)),
        ],
    ))
}

/// Maps a product of ladder operators, scaled by `coeff`, to a Pauli sum.
pub fn map_ladders(coeff: Complex64, ops: &[(usize, bool)], n: usize) -> Result<PauliSum> {
    let mut acc = PauliSum::from_terms(n, [(PauliString::IDENTITY, coeff)]);
    for &(i, dagger) in ops {
        acc = acc.mul(&jw_ladder(i, dagger, n)?).simplify(SIMPLIFY_TOL);
    }
    Ok(acc)
}

pub fn map_term(t: &FermionTerm, n: usize) -> Result<PauliSum> {
    let ops: Vec<(usize, bool)> =
        t.create.iter().map(|&i| (i, true)).chain(t.annihilate.iter().map(|&i| (i, false))).collect();
    map_ladders(Complex64::new(t.coeff, 0.0), &ops, n)
}

/// Sum of mapped terms, simplified.
pub fn map_terms<'a>(terms: impl IntoIterator<Item = &'a FermionTerm>, n: usize) -> Result<PauliSum> {
    let mut out = PauliSum::new(n);
    for t in terms {
        out.add(&map_term(t, n)?);
    }
    Ok(out.simplify(SIMPLIFY_TOL))
}

/// Free-function form of [`PauliSum::simplify`].
pub fn simplify(s: &PauliSum, tol: f64) -> PauliSum {
    s.simplify(tol)
}

/// The full, untruncated Hamiltonian used for energy evaluation. The identity
/// component is kept; `e_core` is not included.
pub fn assemble_measurement_hamiltonian(dh: &DecomposedHamiltonian) -> PauliSum {
    map_terms(&dh.fermion_terms(), dh.n_so).expect("decomposed terms index within n_so")
}

/// Total spin `Ŝ²` for `n_orb` spatial orbitals in blocked ordering.
pub fn s_squared(n_orb: usize) -> PauliSum {
    let n = 2 * n_orb;
    let mut s_plus = PauliSum::new(n);
    let mut s_z = PauliSum::new(n);
    for p in 0..n_orb {
        let up = p;
        let down = p + n_orb;
        s_plus.add(&map_ladders(Complex64::new(1.0, 0.0), &[(up, true), (down, false)], n).unwrap());
        s_z.add(&map_ladders(Complex64::new(0.5, 0.0), &[(up, true), (up, false)], n).unwrap());
        s_z.add(&map_ladders(Complex64::new(-0.5, 0.0), &[(down, true), (down, false)], n).unwrap());
    }
    let s_minus = s_plus.adjoint();
    let mut out = s_minus.mul(&s_plus);
    out.add(&s_z.mul(&s_z));
    out.add(&s_z);
    out.simplify(SIMPLIFY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(q: usize) -> PauliString {
        PauliString::from_axes(&[(q, Pauli::Z)])
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::from_axes(&[(0, Pauli::X)]);
        let y = PauliString::from_axes(&[(0, Pauli::Y)]);
        assert_eq!(x.mul(&y), (c(0.0, 1.0), z(0)));
        assert_eq!(y.mul(&x), (c(0.0, -1.0), z(0)));
        assert_eq!(x.mul(&x), (c(1.0, 0.0), PauliString::IDENTITY));
    }

    #[test]
    fn ordering_is_lexicographic_by_qubit() {
        let a = PauliString::from_axes(&[(0, Pauli::X), (3, Pauli::Z)]);
        let b = PauliString::from_axes(&[(0, Pauli::Y)]);
        let i = PauliString::IDENTITY;
        assert!(i < a && a < b);
        assert!(z(1) < PauliString::from_axes(&[(0, Pauli::X)]));
    }

    #[test]
    fn ladder_on_first_qubit() {
        let a = jw_ladder(0, false, 1).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.coeff(&PauliString::from_axes(&[(0, Pauli::X)])), c(0.5, 0.0));
        assert_eq!(a.coeff(&PauliString::from_axes(&[(0, Pauli::Y)])), c(0.0, 0.5));
        assert!(jw_ladder(1, true, 1).is_err());
    }

    #[test]
    fn ladder_parity_prefix() {
        let a = jw_ladder(2, true, 3).unwrap();
        for (p, _) in a.iter() {
            assert_eq!((p.get(0), p.get(1)), (Pauli::Z, Pauli::Z));
        }
    }

    #[test]
    fn number_operator() {
        let n0 = map_term(&FermionTerm::one_body(1.0, 0, 0), 2).unwrap();
        assert_eq!(n0.len(), 2);
        assert_eq!(n0.constant(), c(0.5, 0.0));
        assert_eq!(n0.coeff(&z(0)), c(-0.5, 0.0));
    }

    #[test]
    fn hopping_and_density_density() {
        let mut hop = map_term(&FermionTerm::one_body(1.0, 0, 1), 2).unwrap();
        hop.add(&map_term(&FermionTerm::one_body(1.0, 1, 0), 2).unwrap());
        let hop = hop.simplify(SIMPLIFY_TOL);
        let xx = PauliString::from_axes(&[(0, Pauli::X), (1, Pauli::X)]);
        let yy = PauliString::from_axes(&[(0, Pauli::Y), (1, Pauli::Y)]);
        assert_eq!(hop.len(), 2);
        assert!((hop.coeff(&xx) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((hop.coeff(&yy) - c(0.5, 0.0)).norm() < 1e-15);

        let nn = map_term(&FermionTerm::two_body(1.0, 0, 1, 1, 0), 2).unwrap();
        let zz = PauliString::from_axes(&[(0, Pauli::Z), (1, Pauli::Z)]);
        assert_eq!(nn.len(), 4);
        for (p, want) in [(PauliString::IDENTITY, 0.25), (z(0), -0.25), (z(1), -0.25), (zz, 0.25)] {
            assert!((nn.coeff(&p) - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn non_coulomb_pair_gives_eight_weight_four_strings() {
        let t = FermionTerm::two_body(0.3, 0, 1, 2, 3);
        let mut s = map_term(&t, 4).unwrap();
        s.add(&map_term(&t.adjoint(), 4).unwrap());
        let s = s.simplify(SIMPLIFY_TOL);
        assert_eq!(s.len(), 8);
        assert!(s.iter().all(|(p, _)| p.weight() == 4));
        assert!(s.is_hermitian(1e-15));
        for (_, c) in s.iter() {
            assert!((c.re.abs() - 0.3 / 8.0).abs() < 1e-15);
        }
    }

    #[test]
    fn simplify_merges_and_drops() {
        let mut s = PauliSum::new(1);
        s.add_term(z(0), c(1.0, 0.0));
        s.add_term(z(0), c(1.0, 0.0));
        assert_eq!(s.simplify(SIMPLIFY_TOL).coeff(&z(0)), c(2.0, 0.0));
        s.add_term(z(0), c(-2.0, 0.0));
        assert!(s.simplify(SIMPLIFY_TOL).is_empty());
    }

    #[test]
    fn dense_matrices() {
        let m = PauliSum::from_terms(1, [(z(0), c(1.0, 0.0))]).to_matrix().unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(1, 1)], c(-1.0, 0.0));
        let xx = PauliString::from_axes(&[(0, Pauli::X), (1, Pauli::X)]);
        let m = PauliSum::from_terms(2, [(xx, c(1.0, 0.0))]).to_matrix().unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let want = if r + col == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[(r, col)], c(want, 0.0));
            }
        }
        assert!(matches!(PauliSum::new(13).to_matrix(), Err(Error::DimensionOverflow(13))));
    }

    #[test]
    fn debug_text_format() {
        let p = PauliString::from_axes(&[(0, Pauli::X), (2, Pauli::Z), (5, Pauli::Y)]);
        let s = PauliSum::from_terms(6, [(p, c(-0.25, 0.0))]);
        assert_eq!(s.to_string(), "-2.5000000000000000e-1 · X0 Z2 Y5\n");
    }

    #[test]
    fn spin_square_on_simple_states() {
        let s2 = s_squared(1).to_matrix().unwrap();
        // |α⟩ = bit 0 set: doublet, S(S+1) = 3/4
        assert!((s2[(1, 1)].re - 0.75).abs() < 1e-14);
        // closed shell: singlet
        assert!(s2[(3, 3)].norm() < 1e-14);
    }
}
