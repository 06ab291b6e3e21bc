"""Spectrum solves and the studies built on them."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .discretization import ATOMIC, Convention, assemble_hamiltonian
from .eigensolver import eigh
from .mapping import GridSpec, MappedGrid, build_grid
from .observables import RadialState, reconstruct_wavefunction
from .potentials import Hulthen, Yukawa

log = logging.getLogger(__name__)

THREADS_ENV = "GPS_SPECTRA_THREADS"

# near-threshold states are very diffuse: a huge box with a compact map scale
THRESHOLD_GRID = GridSpec.from_scale(N=400, r_max=1.0e5, L=20.0)
EPS_BIND = 1e-9


@lru_cache(maxsize=32)
def _grid(spec: GridSpec) -> MappedGrid:
    return build_grid(spec)


@dataclass(frozen=True)
class SpectrumRequest:
    potential: object
    l: int = 0
    n_states: int = 5
    grid: GridSpec = field(default_factory=GridSpec)
    convention: Convention = ATOMIC

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"l must be a non-negative integer, got {self.l}")
        if self.n_states < 1 or self.n_states > self.grid.N - 1:
            raise ValueError(f"n_states must be in 1..{self.grid.N - 1}, got {self.n_states}")

    def with_potential(self, potential) -> "SpectrumRequest":
        return SpectrumRequest(potential, self.l, self.n_states, self.grid, self.convention)

    def with_l(self, l: int) -> "SpectrumRequest":
        return SpectrumRequest(self.potential, l, self.n_states, self.grid, self.convention)


@dataclass(frozen=True)
class SpectrumResult:
    """Lowest eigenpairs of one l-channel.

    ``energies`` carry the report scale; ``eigenvalues`` are the raw matrix
    eigenvalues.  ``residuals`` are ``||H v - E v||`` per pair.
    """

    request: SpectrumRequest
    energies: np.ndarray
    eigenvalues: np.ndarray
    states: tuple[RadialState, ...]
    residuals: np.ndarray

    def energy(self, n_r: int) -> float:
        return float(self.energies[n_r])


def solve_spectrum(request: SpectrumRequest, with_states: bool = True) -> SpectrumResult:
    """Assemble and diagonalize; return the lowest ``n_states`` levels."""
    grid = _grid(request.grid)
    H = assemble_hamiltonian(grid, request.potential, request.l, request.convention)
    dec = eigh(H.matrix, n_states=request.n_states)
    scale = request.convention.report_scale
    states = ()
    if with_states:
        states = tuple(
            reconstruct_wavefunction(dec.eigenvectors[:, k], grid,
                                     energy=dec.eigenvalues[k] * scale, l=request.l)
            for k in range(dec.eigenvalues.size)
        )
    return SpectrumResult(request=request, energies=dec.eigenvalues * scale,
                          eigenvalues=dec.eigenvalues, states=states,
                          residuals=dec.residuals)


def lowest_energy(potential, l=0, n_r=0, grid: GridSpec | None = None,
                  convention: Convention = ATOMIC) -> float:
    """Energy of state ``(n_r, l)``; a thin convenience over :func:`solve_spectrum`."""
    req = SpectrumRequest(potential, l=l, n_states=n_r + 1,
                          grid=grid or GridSpec(), convention=convention)
    return solve_spectrum(req, with_states=False).energy(n_r)


# ---------------------------------------------------------------------------
# critical screening

@dataclass(frozen=True)
class CriticalScreeningResult:
    family: str
    n_r: int
    l: int
    gamma_c: float
    bracket_width: float
    lo: float
    hi: float

    def to_dict(self) -> dict:
        return {"family": self.family, "n_r": self.n_r, "l": self.l,
                "gamma_c": self.gamma_c, "bracket_width": self.bracket_width,
                "lo": self.lo, "hi": self.hi}


_SCREENED = {"hulthen": (Hulthen, "delta"), "yukawa": (Yukawa, "lam")}


def critical_screening(family: str, state: tuple[int, int], bracket: tuple[float, float],
                       tol: float = 1e-6, Z: float = 1.0,
                       grid: GridSpec = THRESHOLD_GRID, eps_bind: float = EPS_BIND,
                       convention: Convention = ATOMIC) -> CriticalScreeningResult:
    """Largest screening constant that still binds state ``(n_r, l)``.

    Bisection on the predicate "the n_r-th eigenvalue of channel l is below
    ``-eps_bind``".  ``bracket = (lo, hi)`` must have the state bound at lo
    and unbound at hi.
    """
    if family not in _SCREENED:
        raise ValueError(f"critical screening supports {sorted(_SCREENED)}, got {family!r}")
    cls, pname = _SCREENED[family]
    n_r, l = state
    lo, hi = map(float, bracket)
    if not 0 <= lo < hi:
        raise ValueError(f"bracket must satisfy 0 <= lo < hi, got {bracket}")

    def bound(gamma):
        pot = cls(**{"Z": Z, pname: gamma})
        return lowest_energy(pot, l=l, n_r=n_r, grid=grid, convention=convention) < -eps_bind

    if not bound(lo):
        raise ValueError(f"state ({n_r}, {l}) is not bound at lo={lo}; widen the bracket downward")
    if bound(hi):
        raise ValueError(f"state ({n_r}, {l}) is still bound at hi={hi}; widen the bracket upward")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bound(mid):
            lo = mid
        else:
            hi = mid
    return CriticalScreeningResult(family, n_r, l, 0.5 * (lo + hi), hi - lo, lo, hi)


def hulthen_critical_estimate(n: int, l: int) -> float:
    """Closed-form approximation to the Hulthen critical screening of (n, l)."""
    if n < 1 or not 0 <= l < n:
        raise ValueError("need n >= 1 and 0 <= l < n")
    return 1.0 / (n * math.sqrt(2.0) + 0.1645 * l + 0.0983 * l / n) ** 2


# ---------------------------------------------------------------------------
# sweeps

class SweepError(RuntimeError):
    def __init__(self, value, cause):
        super().__init__(f"solve failed at parameter value {value!r}: {cause}")
        self.value = value


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    values: np.ndarray
    labels: tuple[tuple[int, int], ...]
    energies: np.ndarray  # shape (len(values), len(labels))

    def series(self, n_r: int, l: int) -> np.ndarray:
        return self.energies[:, self.labels.index((n_r, l))]


def _threads(n_jobs):
    env = os.environ.get(THREADS_ENV)
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_jobs))


def _param_name(path: str) -> str:
    name = path.split(".")[-1]
    if path.count(".") > 1 or (path.count(".") == 1 and path.split(".")[0] not in ("params", "potential")):
        raise ValueError(f"cannot interpret parameter path {path!r}")
    return name


def parameter_sweep(base: SpectrumRequest, parameter: str, values: Sequence[float],
                    ls: Sequence[int] | None = None) -> SweepResult:
    """Solve at each parameter value, tracking levels by (node count, l).

    Points are solved concurrently (capped by ``GPS_SPECTRA_THREADS``) and
    returned in input order.
    """
    name = _param_name(parameter)
    pot0 = base.potential
    if name not in pot0.params():
        raise ValueError(f"{pot0.family} has no parameter {name!r}")
    values = np.asarray(values, dtype=float)
    if values.size > 1 and not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
        raise ValueError("sweep values must be strictly monotone")
    ls = [base.l] if ls is None else list(ls)
    labels = tuple((k, l) for l in ls for k in range(base.n_states))

    def point(value):
        row = {}
        try:
            pot = pot0.replace(**{name: float(value)})
            for l in ls:
                res = solve_spectrum(base.with_potential(pot).with_l(l))
                for k, st in enumerate(res.states):
                    key = (st.node_count, l)
                    if st.node_count != k:
                        log.warning("%s=%g l=%d: state %d has %d nodes; labeling by index",
                                    name, value, l, k, st.node_count)
                        key = (k, l)
                    row[key] = res.energies[k]
        except Exception as exc:  # noqa: BLE001 - rewrapped with the offending value
            raise SweepError(value, exc) from exc
        return [row[lab] for lab in labels]

    with ThreadPoolExecutor(max_workers=_threads(values.size)) as pool:
        rows = list(pool.map(point, values))
    return SweepResult(parameter=name, values=values, labels=labels,
                       energies=np.array(rows, dtype=float).reshape(values.size, len(labels)))


# ---------------------------------------------------------------------------
# level ordering, labels, degeneracy

LETTERS = "spdfghiklmnoqrtuvwxyz"
LETTERS_WITH_J = "spdfghijklmnopqrstuvwxyz"

POSITIVE_ORDER = ("1s", "1p", "2s", "1d", "2p", "1f", "3s", "2d", "1g", "3p", "2f", "1h")
NEGATIVE_ORDER = ("1s", "1p", "1d", "2s", "1f", "2p", "1g", "2d", "3s", "1h", "2f", "3p")


def spectroscopic_label(n_r: int, l: int, principal: bool = False, with_j: bool = False) -> str:
    """Level label.

    ``principal=False`` gives the oscillator style ``(n_r + 1)`` + letter;
    ``principal=True`` the hydrogenic ``(n_r + l + 1)`` + letter.  The letter
    sequence skips ``j`` unless ``with_j`` is set.
    """
    letters = LETTERS_WITH_J if with_j else LETTERS
    level = n_r + l + 1 if principal else n_r + 1
    return f"{level}{letters[l]}"


def parse_label(label: str, with_j: bool = False) -> tuple[int, int]:
    """Inverse of :func:`spectroscopic_label` for oscillator-style labels."""
    letters = LETTERS_WITH_J if with_j else LETTERS
    return int(label[:-1]) - 1, letters.index(label[-1])


@dataclass(frozen=True)
class LevelOrdering:
    sequence: tuple[str, ...]
    positive_violations: tuple[tuple[str, str], ...]
    negative_violations: tuple[tuple[str, str], ...]
    splittings: dict


def level_ordering(energies: dict, with_j: bool = False) -> LevelOrdering:
    """Order levels and compare with the two reference orderings.

    Parameters
    ----------
    energies : dict
        ``{(n_r, l): E}``.

    Returns
    -------
    LevelOrdering
        ``sequence`` of labels by increasing energy; for each reference
        ordering the adjacent pairs ``(a, b)`` present in ``energies`` with
        ``E_a > E_b``; and ``splittings`` ``{(n, (n_r, l), (n_r - 1, l + 2)):
        dE}`` within each oscillator shell ``n = 2 n_r + l``.
    """
    labelled = {spectroscopic_label(n_r, l, with_j=with_j): e for (n_r, l), e in energies.items()}
    sequence = tuple(sorted(labelled, key=labelled.get))

    def violations(order):
        out = []
        present = [lab for lab in order if lab in labelled]
        for a, b in zip(present, present[1:]):
            if labelled[a] > labelled[b]:
                out.append((a, b))
        return tuple(out)

    splittings = {}
    for (n_r, l), e in energies.items():
        partner = (n_r - 1, l + 2)
        if n_r >= 1 and partner in energies:
            splittings[(2 * n_r + l, (n_r, l), partner)] = e - energies[partner]
    return LevelOrdering(sequence, violations(POSITIVE_ORDER), violations(NEGATIVE_ORDER), splittings)


def degeneracy_count(n_dim: int, l: int) -> int:
    """Degeneracy of an l-level in ``n_dim`` dimensions (1 for l = 0)."""
    if n_dim < 2 or l < 0:
        raise ValueError("need n_dim >= 2 and l >= 0")
    if l == 0:
        return 1
    return (2 * l + n_dim - 2) * math.factorial(l + n_dim - 3) // (
        math.factorial(l) * math.factorial(n_dim - 2))
