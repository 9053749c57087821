mod common;

use common::*;
use tvha_core::circuit::{build_tvha, hf_prep, peephole, TvhaOptions};
use tvha_core::fcidump::{load_fixture, parse_fcidump, write_fcidump};
use tvha_core::hamiltonian::{admissible_thresholds, classify, hf_energy, histogram, truncate, TermClass};
use tvha_core::pauli::{assemble_measurement_hamiltonian, PauliSum};
use tvha_core::sim::{exact_ground, exact_ground_full, exact_ground_with_spin, expectation, run, StateVector};
use tvha_core::vqe::{init_params_tvha, run_vqe, OptimizerConfig};

const FIXTURES: [&str; 4] = ["h2", "h4", "lih", "ch2_as22"];

#[test]
fn fixture_shapes() {
    for (name, n_so, ne) in [("h2", 4, 1), ("h4", 8, 2), ("lih", 12, 2), ("ch2_as22", 4, 1)] {
        let (ints, meta) = load_fixture(fixture(name)).unwrap();
        assert_eq!(ints.n_so, n_so, "{name}");
        assert_eq!((meta.n_alpha, meta.n_beta), (ne, ne), "{name}");
        assert!(meta.e_fci <= meta.e_hf);
    }
}

#[test]
fn missing_fixture_is_io_error() {
    let err = load_fixture(fixture("does_not_exist")).unwrap_err();
    assert!(matches!(err, tvha_core::Error::Io { .. }));
}

#[test]
fn fcidump_round_trip_on_fixtures() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name).join("FCIDUMP")).unwrap();
        let si = parse_fcidump(&text).unwrap();
        let again = parse_fcidump(&write_fcidump(&si)).unwrap();
        assert_eq!(si, again, "{name}");
    }
}

#[test]
fn hartree_fock_energies() {
    for name in FIXTURES {
        let (ints, meta) = load_fixture(fixture(name)).unwrap();
        let dh = classify(&ints);
        let e_hf = hf_energy(&dh, meta.n_alpha, meta.n_beta);
        assert!((e_hf + dh.e_core - meta.e_hf).abs() < 1e-8, "{name}");

        let n = dh.n_so;
        let state =
            run(&hf_prep(n, meta.n_alpha, meta.n_beta, dh.n_orb()), &[], &StateVector::zero(n).unwrap()).unwrap();
        let h = assemble_measurement_hamiltonian(&dh);
        assert!((expectation(&state, &h).unwrap() - e_hf).abs() < 1e-10, "{name}");
    }
}

#[test]
fn exact_ground_matches_reference() {
    for name in FIXTURES {
        let (ints, meta) = load_fixture(fixture(name)).unwrap();
        let dh = classify(&ints);
        let h = assemble_measurement_hamiltonian(&dh);
        assert!(h.is_hermitian(1e-14));
        let (e, state) = exact_ground_with_spin(&h, meta.n_alpha, meta.n_beta, dh.n_orb(), meta.target_s2()).unwrap();
        assert!((e + dh.e_core - meta.e_fci).abs() < 1e-7, "{name}: {}", e + dh.e_core - meta.e_fci);
        assert!((state.norm() - 1.0).abs() < 1e-10);
        assert!((expectation(&state, &h).unwrap() - e).abs() < 1e-9);
    }
}

#[test]
fn sector_restriction_agrees_with_full_space() {
    for name in ["h2", "h4"] {
        let (ints, meta) = load_fixture(fixture(name)).unwrap();
        let dh = classify(&ints);
        let n_orb = dh.n_orb();
        let h = assemble_measurement_hamiltonian(&dh);
        let (sector, _) = exact_ground(&h, meta.n_alpha, meta.n_beta, n_orb).unwrap();

        // penalize wrong particle numbers in the full space
        let number = |range: std::ops::Range<usize>| {
            let terms: Vec<_> = range.map(|i| tvha_core::FermionTerm::one_body(1.0, i, i)).collect();
            tvha_core::pauli::map_terms(&terms, dh.n_so).unwrap()
        };
        let shift = |op: PauliSum, target: usize| {
            let mut d = op;
            d.add_term(tvha_core::PauliString::IDENTITY, (-(target as f64)).into());
            d.mul(&d).scaled(50.0.into())
        };
        let mut penalized = h.clone();
        penalized.add(&shift(number(0..n_orb), meta.n_alpha));
        penalized.add(&shift(number(n_orb..2 * n_orb), meta.n_beta));
        let (full, _) = exact_ground_full(&penalized.simplify(1e-14)).unwrap();
        assert!((full - sector).abs() < 1e-9, "{name}: {full} vs {sector}");
    }
}

#[test]
fn h2_has_three_thresholds() {
    let (ints, _) = load_fixture(fixture("h2")).unwrap();
    let dh = classify(&ints);
    let t = admissible_thresholds(&dh);
    assert_eq!(t.len(), 3);
    assert_eq!((t[0], t[2]), (0.0, 1.0));
}

#[test]
fn histogram_shapes() {
    let (ints, _) = load_fixture(fixture("lih")).unwrap();
    let dh = classify(&ints);
    let hist = histogram(&dh);
    let count = |c: TermClass| hist.iter().filter(|e| e.class == c).count();
    let non_coulomb = count(TermClass::NonCoulomb);
    assert!(non_coulomb > count(TermClass::OneBody) + count(TermClass::Coulomb));
    assert!(dh.gamma_sorted.len() > dh.alpha_diag.len() + dh.alpha_offdiag.len() + dh.beta.len());

    let (ints, _) = load_fixture(fixture("h2")).unwrap();
    let hist = histogram(&classify(&ints));
    let floor =
        hist.iter().filter(|e| e.class != TermClass::NonCoulomb).map(|e| e.magnitude).fold(f64::INFINITY, f64::min);
    let top = hist.iter().filter(|e| e.class == TermClass::NonCoulomb).map(|e| e.magnitude).fold(0.0, f64::max);
    assert!(top > 0.0 && top < floor);
}

#[test]
fn h2_cancellation_shrinks_full_circuit() {
    let (ints, _) = load_fixture(fixture("h2")).unwrap();
    let dh = classify(&ints);
    let pairs = dh.gamma_sorted.len() / 2;
    let full = tvha_core::circuit::tvha_blocks(&dh, &truncate(&dh, 1.0), TvhaOptions::default()).unwrap();
    assert!(full.gamma.len() < 8 * pairs);
}

#[test]
fn h2_vqe_reaches_chemical_accuracy() {
    let (ints, meta) = load_fixture(fixture("h2")).unwrap();
    let dh = classify(&ints);
    let h = assemble_measurement_hamiltonian(&dh);
    let hf = run(&hf_prep(4, 1, 1, 2), &[], &StateVector::zero(4).unwrap()).unwrap();
    let (e_ground, _) = exact_ground(&h, 1, 1, 2).unwrap();
    for (p, tol) in [(1.0, 1.5e-3), (0.0, 1e-8)] {
        let c = peephole(&build_tvha(&dh, &truncate(&dh, p), 1, TvhaOptions::default()).unwrap());
        let r = run_vqe(&c, &h, &hf, &init_params_tvha(1), &OptimizerConfig::default()).unwrap();
        let reference = if p == 0.0 { meta.e_hf } else { meta.e_fci };
        assert!((r.energy + dh.e_core - reference).abs() <= tol, "p={p}: {}", r.energy + dh.e_core - reference);
        assert!(r.energy <= r.init_energy + 1e-12);
        assert!(r.history.iter().all(|&(_, e)| e >= e_ground - 1e-9));
    }
}
