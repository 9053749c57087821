mod common;

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvha_core::circuit::{
    build_hea, build_tvha, build_uccsd, exp_pauli, hea_initial_bits, hf_prep, peephole, tvha_blocks, AngleExpr,
    Circuit, Gate, PauliMerge, TvhaOptions,
};
use tvha_core::fcidump::load_fixture;
use tvha_core::hamiltonian::{classify, hf_energy, truncate};
use tvha_core::pauli::assemble_measurement_hamiltonian;
use tvha_core::sim::{expectation, run, StateVector};
use tvha_core::vqe::init_params_tvha;
use tvha_core::{FermionTerm, Pauli, PauliString};

fn random_string(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    loop {
        let axes: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|q| match rng.gen_range(0..4) {
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                3 => Some((q, Pauli::Z)),
                _ => None,
            })
            .collect();
        if !axes.is_empty() {
            return PauliString::from_axes(&axes);
        }
    }
}

fn random_circuit(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut c = Circuit::new(n, 2);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let angle = match rng.gen_range(0..3) {
            0 => AngleExpr::Const(rng.gen_range(-1.0..1.0)),
            1 => AngleExpr::Const(0.0),
            _ => AngleExpr::Param { index: rng.gen_range(0..2), coeff: rng.gen_range(-1.0..1.0) },
        };
        let g = match rng.gen_range(0..6) {
            0 => Gate::X(q),
            1 => Gate::H(q),
            2 => Gate::Rx(q, angle),
            3 => Gate::Ry(q, angle),
            4 => Gate::Rz(q, angle),
            _ => {
                let t = (q + rng.gen_range(1..n)) % n;
                Gate::Cnot { control: q, target: t }
            }
        };
        // repeat some gates so that cancellations actually occur
        c.gates.push(g);
        if rng.gen_bool(0.3) {
            c.gates.push(g);
        }
    }
    c
}

#[test]
fn exp_pauli_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let p = random_string(n, &mut rng);
        let c = rng.gen_range(-1.0..1.0);
        let theta = rng.gen_range(-3.0..3.0);
        let mut circ = Circuit::new(n, 1);
        circ.gates = exp_pauli(&p, c, Some(0)).unwrap();
        let got = circuit_unitary(&circ, &[theta]);
        let want = pauli_exp(&pauli_matrix(&p, n), theta * c);
        assert!(max_diff(&got, &want) < 1e-10, "{p} c={c} theta={theta}");
        assert_eq!(circ.metrics().cnot_count, 2 * (p.weight() - 1));
    }
}

#[test]
fn peephole_preserves_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params = [0.7, -1.3];
    for _ in 0..60 {
        let c = random_circuit(4, 30, &mut rng);
        let opt = peephole(&c);
        assert!(opt.gates.len() <= c.gates.len());
        assert!(max_diff(&circuit_unitary(&c, &params), &circuit_unitary(&opt, &params)) < 1e-10);
    }
}

#[test]
fn simulator_matches_gate_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let params = [0.3, 2.1];
    for _ in 0..20 {
        let c = random_circuit(3, 25, &mut rng);
        let u = circuit_unitary(&c, &params);
        for b in 0..8u64 {
            let s = run(&c, &params, &StateVector::basis(3, b).unwrap()).unwrap();
            for (row, amp) in s.amplitudes().iter().enumerate() {
                assert!((amp - u[(row, b as usize)]).norm() < 1e-12);
            }
        }
    }
}

/// Sub-Hamiltonian matrices with the identity part removed.
fn traceless(m: &CMat) -> CMat {
    let dim = m.nrows();
    m - CMat::identity(dim, dim) * (m.trace() / Complex64::new(dim as f64, 0.0))
}

#[test]
fn tvha_unitary_is_ordered_product_of_exponentials() {
    for name in ["h2", "ch2_as22"] {
        let (ints, _) = load_fixture(fixture(name)).unwrap();
        let dh = classify(&ints);
        let n = dh.n_so;
        for p in [0.5, 1.0] {
            let t = truncate(&dh, p);
            let opts = TvhaOptions::default();
            let blocks = tvha_blocks(&dh, &t, opts).unwrap();

            // block strings reproduce the fermionic sub-Hamiltonians
            let beta_terms: Vec<FermionTerm> =
                dh.beta.iter().map(|&(i, j, w)| FermionTerm::two_body(w, i, j, j, i)).collect();
            let alpha_terms: Vec<FermionTerm> =
                dh.alpha_diag.iter().map(|&(i, h)| FermionTerm::one_body(h, i, i)).collect();
            for (strings, terms) in
                [(&blocks.gamma, t.kept.clone()), (&blocks.beta, beta_terms), (&blocks.alpha, alpha_terms)]
            {
                let mut m = CMat::zeros(1 << n, 1 << n);
                for (s, c) in strings.iter() {
                    m += pauli_matrix(s, n) * Complex64::new(*c, 0.0);
                }
                assert!(max_diff(&m, &traceless(&fermion_matrix(&terms, n))) < 1e-10);
            }

            let n_steps = 2;
            let circ = build_tvha(&dh, &t, n_steps, opts).unwrap();
            let params = [0.3, -0.7, 1.1, 0.9, 0.2, -0.4];
            let mut want = CMat::identity(1 << n, 1 << n);
            for step in 0..n_steps {
                for (slot, strings) in [&blocks.gamma, &blocks.beta, &blocks.alpha].into_iter().enumerate() {
                    for (s, c) in strings.iter() {
                        want = pauli_exp(&pauli_matrix(s, n), params[3 * step + slot] * c) * want;
                    }
                }
            }
            assert!(max_diff(&circuit_unitary(&circ, &params), &want) < 1e-9, "{name} p={p}");
            assert!(max_diff(&circuit_unitary(&peephole(&circ), &params), &want) < 1e-9);
        }
    }
}

#[test]
fn coulomb_block_cost_and_angle() {
    // one Coulomb pair with g_0110 = g_1001 = 0.8
    let mut g = vec![0.0; 16];
    g[0b0110] = 0.8;
    g[0b1001] = 0.8;
    let ints = tvha_core::SpinOrbitalIntegrals::from_dense(2, vec![0.0; 4], g, 0.0).unwrap();
    let dh = classify(&ints);
    let c = build_tvha(&dh, &truncate(&dh, 1.0), 1, TvhaOptions::default()).unwrap();
    assert_eq!(c.metrics().cnot_count, 2);
    // ¼·g·Z0Z1 → Rz angle −2·(g/4)·β, magnitude g/2 per unit parameter
    let ladder_rz = c
        .gates
        .windows(3)
        .find_map(|w| match (&w[0], &w[1], &w[2]) {
            (Gate::Cnot { .. }, Gate::Rz(_, AngleExpr::Param { index: 1, coeff }), Gate::Cnot { .. }) => Some(*coeff),
            _ => None,
        })
        .unwrap();
    assert!((ladder_rz.abs() - 0.4).abs() < 1e-14);
}

#[test]
fn cnot_count_affine_in_steps() {
    let (ints, _) = load_fixture(fixture("h4")).unwrap();
    let dh = classify(&ints);
    let t = truncate(&dh, 0.5);
    let one = build_tvha(&dh, &t, 1, TvhaOptions::default()).unwrap().metrics();
    for n in [2, 3, 5] {
        let m = build_tvha(&dh, &t, n, TvhaOptions::default()).unwrap().metrics();
        assert_eq!(m.cnot_count, n * one.cnot_count);
        assert_eq!(m.param_count, 3 * n);
    }
}

#[test]
fn raw_cnot_count_monotone_in_threshold() {
    let opts = TvhaOptions { merge: PauliMerge::PerTerm, ..TvhaOptions::default() };
    for name in ["h2", "h4", "lih"] {
        let (ints, _) = load_fixture(fixture(name)).unwrap();
        let dh = classify(&ints);
        let mut last = 0;
        for (k, (_, p)) in dh.admissible_cuts().into_iter().enumerate() {
            if name == "lih" && k % 16 != 0 {
                continue;
            }
            let count = build_tvha(&dh, &truncate(&dh, p), 1, opts).unwrap().metrics().cnot_count;
            assert!(count >= last, "{name}: p={p} gave {count} < {last}");
            last = count;
        }
    }
}

#[test]
fn no_correlation_without_gamma() {
    let (ints, meta) = load_fixture(fixture("h2")).unwrap();
    let dh = classify(&ints);
    let n = dh.n_so;
    let hf = run(&hf_prep(n, 1, 1, 2), &[], &StateVector::zero(n).unwrap()).unwrap();
    let c = build_tvha(&dh, &truncate(&dh, 0.0), 1, TvhaOptions::default()).unwrap();
    let h = assemble_measurement_hamiltonian(&dh);
    let e = expectation(&run(&c, &init_params_tvha(1), &hf).unwrap(), &h).unwrap();
    assert!((e - hf_energy(&dh, meta.n_alpha, meta.n_beta)).abs() < 1e-12);
}

#[test]
fn uccsd_parameter_counts() {
    // independent count: same-spin singles plus αα, ββ and αβ doubles
    let choose2 = |k: usize| k * k.saturating_sub(1) / 2;
    let count = |n_orb: usize, na: usize, nb: usize| {
        let (va, vb) = (n_orb - na, n_orb - nb);
        na * va + nb * vb + choose2(na) * choose2(va) + choose2(nb) * choose2(vb) + na * va * nb * vb
    };
    for (n_orb, na, nb) in [(2, 1, 1), (4, 2, 2), (6, 2, 2), (3, 2, 1)] {
        let c = build_uccsd(2 * n_orb, na, nb).unwrap();
        assert_eq!(c.n_params, count(n_orb, na, nb));
    }
    assert_eq!(build_uccsd(4, 1, 1).unwrap().n_params, 3);
    assert_eq!(build_uccsd(8, 2, 2).unwrap().n_params, 26);
    assert_eq!(build_uccsd(12, 2, 2).unwrap().n_params, 92);
}

#[test]
fn zero_parameter_references() {
    for (n_orb, na, nb) in [(2, 1, 1), (4, 2, 2), (6, 2, 2)] {
        let n = 2 * n_orb;
        let hf_bits: u64 = (0..na).chain(n_orb..n_orb + nb).map(|q| 1u64 << q).sum();
        let zero = StateVector::zero(n).unwrap();

        let hea = build_hea(n, na, nb, n_orb, 3).unwrap();
        let s = run(&hea, &vec![0.0; hea.n_params], &zero).unwrap();
        assert!((s.probability(hf_bits) - 1.0).abs() < 1e-12);
        assert!(hea_initial_bits(n, na, nb, n_orb, 3) != 0);

        let u = build_uccsd(n, na, nb).unwrap();
        let hf = StateVector::basis(n, hf_bits).unwrap();
        let s = run(&u, &vec![0.0; u.n_params], &hf).unwrap();
        assert!((s.inner(&hf).norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn circuit_text_golden() {
    let mut c = Circuit::new(4, 3);
    c.gates = exp_pauli(&PauliString::from_axes(&[(0, Pauli::X), (2, Pauli::Y)]), 0.25, Some(2)).unwrap();
    let text = c.to_text();
    let expected = "QUBITS 4 PARAMS 3\nH 0\nRX 2 c1.5707963267948966\nCNOT 0 2\nRZ 2 p2*-0.5\nCNOT 0 2\nH 0\nRX 2 c-1.5707963267948966\n";
    assert_eq!(text, expected);
}
