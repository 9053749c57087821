#!/usr/bin/env python3
"""Generate the committed integral fixtures (FCIDUMP + meta.json).

Runs restricted SCF with PySCF, exports MO-basis integrals in FCIDUMP form and
records HF / FCI (or CASCI) reference energies. Usage:

    python3 scripts/generate_fixtures.py [OUT_DIR]
"""
import json
import sys
from itertools import product
from pathlib import Path

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf

H2_BOND = 0.74279

SPECS = {
    "h2": dict(
        atom=[("H", (0, 0, 0)), ("H", (0, 0, H2_BOND))],
        basis="sto-3g",
        geometry=f"H-H {H2_BOND} Angstrom",
    ),
    "h4": dict(
        atom=[("H", (0, 0, i * H2_BOND)) for i in range(4)],
        basis="sto-3g",
        geometry=f"linear H4, uniform spacing {H2_BOND} Angstrom",
    ),
    "lih": dict(
        atom=[("Li", (0, 0, 0)), ("H", (0, 0, 1.596))],
        basis="sto-3g",
        geometry="Li-H 1.596 Angstrom",
    ),
    "ch2_as22": dict(
        atom=[
            ("C", (-0.00000000558058, 0.0, 0.27482875331272)),
            ("H", (0.99659455942822, 0.0, -0.13738437780928)),
            ("H", (-0.99659455384764, 0.0, -0.13738437550343)),
        ],
        basis="def2-svp",
        geometry="CH2 triplet equilibrium structure (B3LYP-D3BJ/def2-TZVP), Angstrom",
        active=(2, 2),
    ),
}


def det_energy(h1, eri, n_alpha, n_beta):
    """<D|H|D> for the determinant occupying the lowest orbitals per spin."""
    occ_a = range(n_alpha)
    occ_b = range(n_beta)
    e = sum(h1[i, i] for i in occ_a) + sum(h1[i, i] for i in occ_b)
    for i, j in product(occ_a, occ_a):
        e += 0.5 * (eri[i, i, j, j] - eri[i, j, j, i])
    for i, j in product(occ_b, occ_b):
        e += 0.5 * (eri[i, i, j, j] - eri[i, j, j, i])
    for i, j in product(occ_a, occ_b):
        e += eri[i, i, j, j]
    return e


def write_fcidump(path, h1, eri, e_core, nelec, ms2):
    n = h1.shape[0]
    lines = [f"&FCI NORB={n},NELEC={nelec},MS2={ms2},&END"]
    fmt = "{:.16e} {} {} {} {}"
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    v = eri[i, j, k, l]
                    if abs(v) > 1e-14:
                        lines.append(fmt.format(v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            v = h1[i, j]
            if abs(v) > 1e-14:
                lines.append(fmt.format(v, i + 1, j + 1, 0, 0))
    lines.append(fmt.format(e_core, 0, 0, 0, 0))
    path.write_text("\n".join(lines) + "\n")


def generate(name, spec, out_dir):
    active = spec.get("active")
    mol = gto.M(atom=spec["atom"], basis=spec["basis"], unit="Angstrom",
                spin=2 if active else 0, verbose=0)
    if active:
        # Orbitals from the triplet ROHF; the two singly occupied orbitals form
        # the active space, solved in the M_s = 0 sector.
        mf = scf.ROHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        n_elec_as, n_orb_as = active
        mc = mcscf.CASCI(mf, n_orb_as, (n_elec_as // 2, n_elec_as // 2))
        mc.fcisolver = fci.direct_spin1.FCI(mol)
        mc.fcisolver.conv_tol = 1e-12
        mc.kernel()
        h1, e_core = mc.get_h1eff()
        eri = ao2mo.restore(1, mc.get_h2eff(), n_orb_as)
        n_orb = n_orb_as
        n_alpha = n_beta = n_elec_as // 2
    else:
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        c = mf.mo_coeff
        h1 = c.T @ mf.get_hcore() @ c
        n_orb = c.shape[1]
        eri = ao2mo.restore(1, ao2mo.kernel(mol, c), n_orb)
        e_core = mol.energy_nuc()
        n_alpha, n_beta = mol.nelec
    h1 = 0.5 * (h1 + h1.T)
    e_hf = det_energy(h1, eri, n_alpha, n_beta) + e_core
    solver = fci.direct_spin1.FCI()
    solver.conv_tol = 1e-13
    solver.nroots = 4
    energies, vecs = solver.kernel(h1, eri, n_orb, (n_alpha, n_beta), ecore=e_core)
    multiplicity = None
    if active:
        # The reference is the lowest singlet of the active space; the M_s = 0
        # sector also holds the triplet component, which lies lower here.
        singlets = [e for e, c in zip(energies, vecs)
                    if abs(fci.spin_op.spin_square(c, n_orb, (n_alpha, n_beta))[0]) < 1e-6]
        e_fci = float(min(singlets))
        multiplicity = 1
    else:
        e_fci = float(np.min(energies))
    if not active:
        assert abs(e_hf - mf.e_tot) < 1e-8, (name, e_hf, mf.e_tot)
    d = out_dir / name
    d.mkdir(parents=True, exist_ok=True)
    write_fcidump(d / "FCIDUMP", h1, eri, e_core, n_alpha + n_beta, n_alpha - n_beta)
    meta = dict(
        name=name,
        n_alpha=int(n_alpha),
        n_beta=int(n_beta),
        e_core=float(e_core),
        e_hf=float(e_hf),
        e_fci=e_fci,
        basis=spec["basis"],
        geometry=spec["geometry"],
    )
    if multiplicity is not None:
        meta["multiplicity"] = multiplicity
    (d / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(name, n_orb, meta["e_hf"], meta["e_fci"], "corr", e_fci - e_hf,
          "roots", energies)


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures"
    for name, spec in SPECS.items():
        generate(name, spec, out)


if __name__ == "__main__":
    main()
