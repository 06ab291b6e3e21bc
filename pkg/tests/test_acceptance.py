"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION k: PASS|FAIL`` line (visible with
``pytest -s``; the lines are also collected into the terminal summary).
"""

import math

import numpy as np
import pytest
from scipy import special

from gps_spectra import cli
from gps_spectra.analysis import (SpectrumRequest, critical_screening, lowest_energy,
                                  solve_spectrum)
from gps_spectra.discretization import ATOMIC, FULL, FULL_HALVED, assemble_hamiltonian
from gps_spectra.mapping import GridSpec, build_grid
from gps_spectra.observables import overlap
from gps_spectra.potentials import (
    FAMILIES, NPO, SHO, ChargedOscillator, Coulomb, Harmonic, Hulthen, PowerLaw, Yukawa,
    exact_reference,
)
from oracles import box_levels, shooting_energy

RESULTS = {}


def record(k, ok, detail, capsys):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[k] = line
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def _worst(cases):
    """cases: iterable of (label, computed, expected, tol, kind) -> (ok, worst label, worst ratio)."""
    worst, ok, label = 0.0, True, ""
    for lab, got, want, tol, kind in cases:
        err = abs(got - want) / (abs(want) if kind == "rel" else 1.0)
        if err / tol > worst:
            worst, label = err / tol, f"{lab} err={err:.2e} tol={tol:g}"
        ok &= err <= tol
    return ok, label


def test_criterion_01_analytic_spectra(capsys):
    cases = []
    for l in range(10):
        res = solve_spectrum(SpectrumRequest(Coulomb(), l=l, n_states=10 - l))
        for k, e in enumerate(res.energies):
            n = k + l + 1
            cases.append((f"H n={n} l={l}", e, -0.5 / n**2, 1e-10, "abs"))
    for l in range(4):
        res = solve_spectrum(SpectrumRequest(Harmonic(0.5), l=l, n_states=10))
        for k, e in enumerate(res.energies):
            cases.append((f"HO n_r={k} l={l}", e, 2 * k + l + 1.5, 1e-10, "abs"))
    ok, worst = _worst(cases)
    n_bad = sum(abs(g - w) > t for _, g, w, t, _ in cases)
    record(1, ok, f"{len(cases) - n_bad}/{len(cases)} within 1e-10 at defaults; worst {worst}", capsys)


def test_criterion_01_diagnostic_larger_box(capsys):
    # the default r_max = 200 truncates the n >= 8 hydrogen tails; with the box
    # doubled every n <= 10 level meets the tolerance at the same N
    grid = GridSpec(300, 400.0, 25.0)
    cases = []
    for l in range(10):
        res = solve_spectrum(SpectrumRequest(Coulomb(), l=l, n_states=10 - l, grid=grid))
        cases += [(f"n={k + l + 1} l={l}", e, -0.5 / (k + l + 1) ** 2, 1e-10, "abs")
                  for k, e in enumerate(res.energies)]
    ok, worst = _worst(cases)
    with capsys.disabled():
        print(f"\n  (criterion 1 diagnostic, r_max=400: {'pass' if ok else 'fail'}; worst {worst})")
    assert ok


def test_criterion_02_quartic(capsys):
    grid = GridSpec(400, 20.0, 25.0)
    quartic = PowerLaw(1.0, 4.0)
    # independent oracle on the lowest state before trusting the high ones
    e0 = lowest_energy(quartic, grid=grid)
    shot = shooting_energy(lambda r: r**4, 0, 0.5, 0, 2.0, 3.0, r1=4.5)
    cases = [("shooting 1s", e0, shot, 1e-9, "abs")]
    for nu, l, want in ((48, 0, 250.183358697), (49, 1, 256.916238928), (48, 2, 250.096690608)):
        n_r = (nu - l) // 2
        cases.append((f"nu={nu} l={l}", lowest_energy(quartic, l=l, n_r=n_r, grid=grid), want,
                       1e-7, "abs"))
    ok, worst = _worst(cases)
    record(2, ok, f"quartic levels within 1e-7, shooting cross-check; worst {worst}", capsys)


def test_criterion_03_charged_oscillator(capsys):
    cases = [(f"lambda={lam:g}", lowest_energy(ChargedOscillator(lam), convention=FULL_HALVED),
              want, 1e-10, "abs")
             for lam, want in ((0.0, 1.5), (2.0, 2.5), (math.sqrt(20), 3.5))]
    ok, worst = _worst(cases)
    record(3, ok, f"charged oscillator within 1e-10; worst {worst}", capsys)


def test_criterion_04_spiked_oscillator(capsys):
    grid = GridSpec(600, 20.0, 400.0)
    table = ((4.0, 0.001, 0, 1.53438158545), (4.0, 1.0, 0, 2.24708899168),
             (6.0, 1000.0, 0, 6.35930853290), (4.0, 0.001, 5, 6.50002020182))
    cases = [(f"alpha={a:g} lambda={lam:g} l={l}",
              lowest_energy(SHO(lam, a), l=l, grid=grid, convention=FULL_HALVED), want, 1e-10, "abs")
             for a, lam, l, want in table]
    ok, worst = _worst(cases)
    record(4, ok, f"SHO within 1e-10; worst {worst}", capsys)


def test_criterion_05_hulthen(capsys):
    wide, dflt = GridSpec(300, 2000.0, 25.0), GridSpec()
    table = (("1s", 1.97, 0, 0, -0.0001125, wide), ("2p", 0.35, 1, 0, -0.00379309814702, dflt),
             ("4d", 0.075, 2, 1, -0.00383453307692, dflt),
             ("17s", 0.005, 0, 16, -0.0001332288062, wide))
    cases = []
    for lab, d, l, n_r, want, grid in table:
        e = lowest_energy(Hulthen(1.0, d), l=l, n_r=n_r, grid=grid)
        cases.append((lab, e, want, 1e-11, "abs"))
        if l == 0:
            cases.append((lab + " exact", e, exact_reference(Hulthen(1.0, d), 0, n_r), 1e-12, "abs"))
    ok, worst = _worst(cases)
    record(5, ok, f"Hulthen within 1e-11, s states vs closed form 1e-12; worst {worst}", capsys)


def test_criterion_06_yukawa(capsys):
    table = (("4d", 0.01, 2, 1, -0.02222779248980, GridSpec()),
             ("9s", 0.01, 0, 8, -0.0005858247612, GridSpec(300, 500.0, 25.0)),
             ("17s", 0.001, 0, 16, -0.000919120394, GridSpec(400, 1000.0, 25.0)))
    cases = [(lab, lowest_energy(Yukawa(1.0, lam), l=l, n_r=n_r, grid=g), want, 1e-10, "abs")
             for lab, lam, l, n_r, want, g in table]
    ok, worst = _worst(cases)
    record(6, ok, f"Yukawa within 1e-10; worst {worst}", capsys)


def test_criterion_07_power_law(capsys):
    airy = -special.ai_zeros(5)[0]
    lin = PowerLaw(2 ** 3.5, 1.0)
    cases = [(f"linear n={n}", lowest_energy(lin, n_r=n), 4 * airy[n], 1e-8, "rel") for n in (0, 2)]
    cases += [("linear n=0 vs table", cases[0][1], 9.352429641, 1e-8, "rel"),
              ("linear n=2 vs table", cases[1][1], 22.08223931, 1e-8, "rel"),
              ("r^-0.2 n=0", lowest_energy(PowerLaw(2 ** 1.7, -0.2)), -2.68602822, 1e-6, "abs")]
    ok, worst = _worst(cases)
    record(7, ok, f"Airy oracle rel 1e-8, r^-0.2 abs 1e-6; worst {worst}", capsys)


def test_criterion_08_npo_exact(capsys):
    table = ((0, 0.1, -0.46, 2.4), (0, 1.0, -10.0, -3.0), (2, 1.0, -18.0, -7.0),
             (2, 10.0, -1440.0, -133.0))
    cases = [(f"l={l} g={g} lambda={lam}", lowest_energy(NPO(g, lam), l=l, convention=FULL),
              want, 1e-10, "abs") for l, g, lam, want in table]
    ok, worst = _worst(cases)
    record(8, ok, f"NPO exact levels within 1e-10; worst {worst}", capsys)


def test_criterion_09_npo_table(capsys):
    cases = [("1s g=0.1", lowest_energy(NPO(0.1, 0.1), convention=FULL), 3.120081864016, 1e-9, "abs"),
             ("1p g=100", lowest_energy(NPO(100.0, 100.0), l=1, convention=FULL),
              5.993438790399, 1e-9, "abs")]
    ok, worst = _worst(cases)
    record(9, ok, f"NPO levels within 1e-9; worst {worst}", capsys)


def test_criterion_10_critical_screening(capsys):
    cases = [("yukawa 1s", critical_screening("yukawa", (0, 0), (1.0, 1.4)).gamma_c,
              1.1906, 1e-3, "abs")]
    for n in range(1, 5):
        g = critical_screening("hulthen", (n - 1, 0), (1.5 / n**2, 2.5 / n**2)).gamma_c
        cases.append((f"hulthen {n}s", g, 2.0 / n**2, 1e-4, "abs"))
    ok, worst = _worst(cases)
    record(10, ok, f"critical screening; worst {worst}", capsys)


def _properties():
    checks = {}
    # charge scaling of screened potentials
    checks["Z-scaling"] = all(
        math.isclose(lowest_energy(cls(**{"Z": 3.0, key: 0.1}), l=l),
                     9.0 * lowest_energy(cls(**{"Z": 1.0, key: 0.1 / 3.0}), l=l), rel_tol=1e-9)
        for cls, key in ((Hulthen, "delta"), (Yukawa, "lam")) for l in (0, 1))
    # coupling scaling of power laws
    checks["coupling-scaling"] = all(
        math.isclose(lowest_energy(PowerLaw(3.0, nu), grid=g),
                     3.0 ** (2 / (nu + 2)) * lowest_energy(PowerLaw(1.0, nu), grid=g), rel_tol=1e-9)
        for nu, g in ((1.0, GridSpec()), (2.0, GridSpec()), (-0.5, GridSpec(800, 100.0, 25.0))))
    # Coulomb <= Hulthen <= Yukawa at matched screening
    checks["ordering-inequality"] = all(
        -0.5 / (n_r + l + 1) ** 2 <= lowest_energy(Hulthen(1.0, g), l=l, n_r=n_r)
        <= lowest_energy(Yukawa(1.0, g), l=l, n_r=n_r)
        for g in (0.05, 0.1) for l, n_r in ((0, 0), (0, 1), (1, 0)))
    # node counts and orthogonality
    res = solve_spectrum(SpectrumRequest(Hulthen(1.0, 0.05), l=1, n_states=6))
    gram = np.array([[overlap(a, b) for b in res.states] for a in res.states])
    checks["nodes/orthogonality"] = ([s.node_count for s in res.states] == list(range(6))
                                     and np.max(np.abs(gram - np.eye(6))) < 1e-10)
    # spectral convergence to the rounding floor
    errs = [abs(lowest_energy(Coulomb(), grid=GridSpec(N=N)) + 0.5) for N in (40, 80, 160, 300)]
    checks["spectral-convergence"] = (errs[1] < errs[0] and all(
        b <= max(a, 1e-13) for a, b in zip(errs[1:], errs[2:])) and errs[-1] < 1e-10)
    # nearly linear map: free particle in a box
    H = assemble_hamiltonian(build_grid(GridSpec(80, 10.0, 1e4)), PowerLaw(1e-300, 2.0), 0, ATOMIC)
    ev = np.linalg.eigvalsh(H.matrix)[:6]
    checks["D2-box-oracle"] = bool(np.allclose(ev, box_levels(0.5, 10.0, 0, 6), rtol=1e-10, atol=0))
    return checks


def test_criterion_11_properties(capsys):
    checks = _properties()
    bad = [k for k, v in checks.items() if not v]
    record(11, not bad, f"{len(checks) - len(bad)}/{len(checks)} property suites"
           + (f"; failing {bad}" if bad else ""), capsys)


def test_criterion_12_scope(capsys):
    suites = set(cli.load_registry())
    ok = suites == {"trivial", *(f"table{i}" for i in range(1, 10))}
    ok &= not any("dft" in name or "rydberg" in name for name in FAMILIES)
    record(12, ok, f"registry suites {sorted(suites)}; no table10/table11", capsys)
