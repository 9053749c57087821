//! Three-way split of the electronic Hamiltonian and truncation of its
//! non-Coulomb part.
//!
//! The two-body operator `½ Σ g_ijkl a_i† a_j† a_k a_l` is rewritten over
//! index pairs `i<j`, `k<l` with the antisymmetrized coefficient
//! `g̃ = g_ijkl − g_jikl − g_ijlk + g_jilk`. Pairs with `(i,j) == (k,l)` are
//! number-operator products `n̂_i n̂_j` (the Coulomb class); every other pair is
//! a non-Coulomb term and appears together with its Hermitian conjugate.

use std::cmp::Ordering;
use std::fmt;

use crate::fcidump::SpinOrbitalIntegrals;

/// Coefficients below this magnitude are treated as exact zeros.
pub const DROP_TOL: f64 = 1e-12;

/// A one- or two-body product of ladder operators, creators to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coeff: f64,
    pub create: Vec<usize>,
    pub annihilate: Vec<usize>,
}

impl FermionTerm {
    pub fn one_body(coeff: f64, i: usize, j: usize) -> Self {
        Self { coeff, create: vec![i], annihilate: vec![j] }
    }

    pub fn two_body(coeff: f64, i: usize, j: usize, k: usize, l: usize) -> Self {
        Self { coeff, create: vec![i, j], annihilate: vec![k, l] }
    }

    /// `(c · a_i† a_j† a_k a_l)† = c · a_l† a_k† a_j a_i` for real `c`.
    pub fn adjoint(&self) -> Self {
        Self {
            coeff: self.coeff,
            create: self.annihilate.iter().rev().copied().collect(),
            annihilate: self.create.iter().rev().copied().collect(),
        }
    }

    /// Same operator with both index lists sorted ascending, sign absorbed.
    pub fn normal_ordered(&self) -> Self {
        let mut out = self.clone();
        let mut sign = 1.0;
        for list in [&mut out.create, &mut out.annihilate] {
            for a in 0..list.len() {
                for b in 0..list.len() - 1 - a {
                    if list[b] > list[b + 1] {
                        list.swap(b, b + 1);
                        sign = -sign;
                    }
                }
            }
        }
        out.coeff *= sign;
        out
    }

    pub fn is_conjugate_of(&self, other: &FermionTerm) -> bool {
        let adj = other.adjoint().normal_ordered();
        let me = self.normal_ordered();
        adj.create == me.create && adj.annihilate == me.annihilate
    }

    pub fn max_index(&self) -> Option<usize> {
        self.create.iter().chain(&self.annihilate).copied().max()
    }

    fn index_key(&self) -> (&[usize], &[usize]) {
        (&self.create, &self.annihilate)
    }
}

impl fmt::Display for FermionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.16e}", self.coeff)?;
        for i in &self.create {
            write!(f, " a{i}^")?;
        }
        for i in &self.annihilate {
            write!(f, " a{i}")?;
        }
        Ok(())
    }
}

/// `H = H_α + H_β + H_γ + e_core`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedHamiltonian {
    pub n_so: usize,
    /// `h_ii` for the number operators `n̂_i`.
    pub alpha_diag: Vec<(usize, f64)>,
    /// `h_ij` (`i<j`) multiplying `a_i† a_j + a_j† a_i`.
    pub alpha_offdiag: Vec<(usize, usize, f64)>,
    /// Weights on `n̂_i n̂_j` (`i<j`).
    pub beta: Vec<(usize, usize, f64)>,
    /// Non-Coulomb terms by descending magnitude, each directly followed by
    /// its Hermitian conjugate.
    pub gamma_sorted: Vec<FermionTerm>,
    pub e_core: f64,
}

/// Kept prefix of the sorted non-Coulomb terms.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationResult {
    pub kept: Vec<FermionTerm>,
    pub s_cut: usize,
    pub p_actual: f64,
    pub p_target: f64,
}

/// Splits the Hamiltonian into one-body, Coulomb and non-Coulomb parts.
pub fn classify(ints: &SpinOrbitalIntegrals) -> DecomposedHamiltonian {
    let n = ints.n_so;
    let mut alpha_diag = Vec::new();
    let mut alpha_offdiag = Vec::new();
    for i in 0..n {
        let hii = ints.h(i, i);
        if hii.abs() >= DROP_TOL {
            alpha_diag.push((i, hii));
        }
        for j in i + 1..n {
            let hij = ints.h(i, j);
            if hij.abs() >= DROP_TOL {
                alpha_offdiag.push((i, j, hij));
            }
        }
    }

    let antisym = |i, j, k, l| ints.g(i, j, k, l) - ints.g(j, i, k, l) - ints.g(i, j, l, k) + ints.g(j, i, l, k);

    let mut beta = Vec::new();
    // (magnitude, term, conjugate) with the lexicographically smaller term first
    let mut pairs: Vec<(f64, FermionTerm, FermionTerm)> = Vec::new();
    let pair_list: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for (a, &(i, j)) in pair_list.iter().enumerate() {
        let w = -0.5 * antisym(i, j, i, j);
        if w.abs() >= DROP_TOL {
            beta.push((i, j, w));
        }
        for &(k, l) in &pair_list[a + 1..] {
            let c = 0.5 * antisym(i, j, k, l);
            let c_conj = 0.5 * antisym(k, l, i, j);
            if c.abs() < DROP_TOL && c_conj.abs() < DROP_TOL {
                continue;
            }
            pairs.push((
                c.abs().max(c_conj.abs()),
                FermionTerm::two_body(c, i, j, k, l),
                FermionTerm::two_body(c_conj, k, l, i, j),
            ));
        }
    }
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then_with(|| a.1.index_key().cmp(&b.1.index_key()))
    });
    let gamma_sorted = pairs.into_iter().flat_map(|(_, t, c)| [t, c]).collect();

    DecomposedHamiltonian { n_so: n, alpha_diag, alpha_offdiag, beta, gamma_sorted, e_core: ints.e_core }
}

impl DecomposedHamiltonian {
    pub fn n_orb(&self) -> usize {
        self.n_so / 2
    }

    /// Prefix sums of `|coefficient|` over `gamma_sorted`, starting at 0.
    fn gamma_prefix(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.gamma_sorted.len() + 1);
        out.push(0.0);
        for t in &self.gamma_sorted {
            acc += t.coeff.abs();
            out.push(acc);
        }
        out
    }

    /// `(s_cut, p)` for every cut that keeps conjugate pairs intact.
    pub fn admissible_cuts(&self) -> Vec<(usize, f64)> {
        let prefix = self.gamma_prefix();
        let total = *prefix.last().expect("non-empty");
        (0..=self.gamma_sorted.len())
            .step_by(2)
            .map(|s| {
                let p = if total > 0.0 { prefix[s] / total } else { 0.0 };
                (s, p)
            })
            .collect()
    }

    /// Every non-zero term of the Hamiltonian (without `e_core`) as a
    /// fermionic product.
    pub fn fermion_terms(&self) -> Vec<FermionTerm> {
        let mut out = Vec::new();
        for &(i, h) in &self.alpha_diag {
            out.push(FermionTerm::one_body(h, i, i));
        }
        for &(i, j, h) in &self.alpha_offdiag {
            out.push(FermionTerm::one_body(h, i, j));
            out.push(FermionTerm::one_body(h, j, i));
        }
        for &(i, j, w) in &self.beta {
            out.push(FermionTerm::two_body(w, i, j, j, i));
        }
        out.extend(self.gamma_sorted.iter().cloned());
        out
    }
}

/// Picks the admissible cut whose fraction is closest to `p_target`.
pub fn truncate(dh: &DecomposedHamiltonian, p_target: f64) -> TruncationResult {
    let p_target = p_target.clamp(0.0, 1.0);
    let cuts = dh.admissible_cuts();
    let (s_cut, p_actual) = if p_target >= 1.0 {
        *cuts.last().expect("non-empty")
    } else {
        let mut best = cuts[0];
        for &(s, p) in &cuts[1..] {
            if (p - p_target).abs() < (best.1 - p_target).abs() {
                best = (s, p);
            }
        }
        best
    };
    TruncationResult { kept: dh.gamma_sorted[..s_cut].to_vec(), s_cut, p_actual, p_target }
}

/// Distinct attainable truncation fractions, ascending.
pub fn admissible_thresholds(dh: &DecomposedHamiltonian) -> Vec<f64> {
    let mut out: Vec<f64> = dh.admissible_cuts().into_iter().map(|(_, p)| p).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    out
}

/// Spin orbitals occupied by the Hartree-Fock determinant in blocked ordering.
pub fn hf_occupation(n_orb: usize, n_alpha: usize, n_beta: usize) -> Vec<usize> {
    (0..n_alpha).chain(n_orb..n_orb + n_beta).collect()
}

/// `⟨HF|H|HF⟩` without `e_core`, by the Slater-Condon rules.
///
/// Off-diagonal one-body and all non-Coulomb terms change the occupation and
/// contribute nothing to a single determinant.
pub fn hf_energy(dh: &DecomposedHamiltonian, n_alpha: usize, n_beta: usize) -> f64 {
    let occ = hf_occupation(dh.n_orb(), n_alpha, n_beta);
    let occupied = |i: usize| occ.contains(&i);
    let one: f64 = dh.alpha_diag.iter().filter(|(i, _)| occupied(*i)).map(|(_, h)| h).sum();
    let two: f64 = dh.beta.iter().filter(|(i, j, _)| occupied(*i) && occupied(*j)).map(|(_, _, w)| w).sum();
    one + two
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermClass {
    OneBody,
    Coulomb,
    NonCoulomb,
}

impl TermClass {
    pub fn label(self) -> &'static str {
        match self {
            TermClass::OneBody => "one_body",
            TermClass::Coulomb => "coulomb",
            TermClass::NonCoulomb => "non_coulomb",
        }
    }
}

/// One classified coefficient for magnitude histograms.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramEntry {
    pub class: TermClass,
    pub magnitude: f64,
    pub indices: Vec<usize>,
}

/// All classified coefficients: diagonal and off-diagonal one-body terms,
/// Coulomb pair weights, and every non-Coulomb term (conjugates included).
pub fn histogram(dh: &DecomposedHamiltonian) -> Vec<HistogramEntry> {
    let mut out = Vec::new();
    for &(i, h) in &dh.alpha_diag {
        out.push(HistogramEntry { class: TermClass::OneBody, magnitude: h.abs(), indices: vec![i, i] });
    }
    for &(i, j, h) in &dh.alpha_offdiag {
        out.push(HistogramEntry { class: TermClass::OneBody, magnitude: h.abs(), indices: vec![i, j] });
    }
    for &(i, j, w) in &dh.beta {
        out.push(HistogramEntry { class: TermClass::Coulomb, magnitude: w.abs(), indices: vec![i, j] });
    }
    for t in &dh.gamma_sorted {
        let indices = t.create.iter().chain(&t.annihilate).copied().collect();
        out.push(HistogramEntry { class: TermClass::NonCoulomb, magnitude: t.coeff.abs(), indices });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_fixture(mags: &[f64]) -> DecomposedHamiltonian {
        let mut gamma_sorted = Vec::new();
        for (n, &m) in mags.iter().enumerate().step_by(2) {
            let t = FermionTerm::two_body(m, 0, 1, 2 + n, 3 + n);
            gamma_sorted.push(t.clone());
            gamma_sorted.push(FermionTerm::two_body(mags[n + 1], 2 + n, 3 + n, 0, 1));
        }
        DecomposedHamiltonian {
            n_so: 8,
            alpha_diag: vec![],
            alpha_offdiag: vec![],
            beta: vec![],
            gamma_sorted,
            e_core: 0.0,
        }
    }

    #[test]
    fn truncation_picks_nearest_pair_boundary() {
        let dh = gamma_fixture(&[0.4, 0.4, 0.1, 0.1]);
        let r = truncate(&dh, 0.75);
        assert_eq!(r.s_cut, 2);
        assert!((r.p_actual - 0.8).abs() < 1e-15);
        assert_eq!(r.kept.len(), 2);

        let r = truncate(&dh, 0.0);
        assert_eq!((r.s_cut, r.p_actual), (0, 0.0));
        assert!(r.kept.is_empty());

        let r = truncate(&dh, 1.0);
        assert_eq!((r.s_cut, r.p_actual), (4, 1.0));

        // exact tie between 0 and 0.5 goes to the smaller cut
        let even = gamma_fixture(&[0.25, 0.25, 0.25, 0.25]);
        assert_eq!(truncate(&even, 0.25).s_cut, 0);
        assert_eq!(truncate(&even, 0.75).s_cut, 2);

        let p = admissible_thresholds(&dh);
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 0.8).abs() < 1e-15);
        assert_eq!(p[2], 1.0);
    }

    #[test]
    fn empty_gamma() {
        let dh = gamma_fixture(&[]);
        assert_eq!(admissible_thresholds(&dh), vec![0.0]);
        let r = truncate(&dh, 1.0);
        assert_eq!((r.s_cut, r.p_actual), (0, 0.0));
    }

    #[test]
    fn adjoint_and_normal_order() {
        let t = FermionTerm::two_body(0.3, 0, 2, 1, 3);
        let adj = t.adjoint();
        assert_eq!((adj.create.clone(), adj.annihilate.clone()), (vec![3, 1], vec![2, 0]));
        let no = adj.normal_ordered();
        assert_eq!((no.create, no.annihilate, no.coeff), (vec![1, 3], vec![0, 2], 0.3));
        assert!(FermionTerm::two_body(0.3, 1, 3, 0, 2).is_conjugate_of(&t));
        assert!(!t.is_conjugate_of(&t));
    }

    #[test]
    fn hf_energy_diagonal_only() {
        let dh = DecomposedHamiltonian {
            n_so: 4,
            alpha_diag: vec![(0, -1.0), (1, -2.0), (2, -1.0), (3, -2.0)],
            alpha_offdiag: vec![],
            beta: vec![],
            gamma_sorted: vec![],
            e_core: 0.0,
        };
        assert_eq!(hf_energy(&dh, 1, 1), -2.0);
        assert_eq!(hf_occupation(6, 2, 2), vec![0, 1, 6, 7]);
    }
}
