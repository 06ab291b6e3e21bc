"""Algebraic map from the collocation interval [-1, 1] onto [0, r_max].

    r(x) = L (1 + x) / (1 - x + alpha),   alpha = 2 L / r_max

The map sends x = -1 to the origin and x = +1 to r_max and packs nodes
towards small r; smaller ``alpha`` (for fixed r_max) spreads them out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .orthopoly import CollocationSet, collocation_set

DEFAULT_N = 300
DEFAULT_RMAX = 200.0
DEFAULT_ALPHA = 25.0


@dataclass(frozen=True)
class GridSpec:
    """Collocation order and map parameters.

    ``r_max`` and ``alpha`` are the user-facing knobs; the map scale
    ``L = alpha * r_max / 2`` is derived.
    """

    N: int = DEFAULT_N
    r_max: float = DEFAULT_RMAX
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 8:
            raise ValueError(f"N must be an integer >= 8, got {self.N}")
        if not (np.isfinite(self.r_max) and self.r_max > 0):
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def L(self) -> float:
        return 0.5 * self.alpha * self.r_max

    @classmethod
    def from_scale(cls, N: int, r_max: float, L: float) -> "GridSpec":
        """Build from the map scale ``L`` instead of ``alpha``."""
        return cls(N=N, r_max=r_max, alpha=2.0 * L / r_max)

    def to_dict(self) -> dict:
        return {"N": int(self.N), "r_max": float(self.r_max),
                "alpha": float(self.alpha), "L": float(self.L)}


def map_radial(spec: GridSpec, x):
    """Map ``x`` to ``r`` and return ``(r, r', r'', r''')`` (derivatives in x)."""
    x = np.asarray(x, dtype=float)
    if np.any((x < -1.0) | (x > 1.0)):
        raise ValueError("x must lie in [-1, 1]")
    L, a = spec.L, spec.alpha
    den = 1.0 - x + a
    r = L * (1.0 + x) / den
    c = L * (2.0 + a)
    r1 = c / den**2
    r2 = 2.0 * c / den**3
    r3 = 6.0 * c / den**4
    return r, r1, r2, r3


def inverse_map(spec: GridSpec, r):
    """Inverse of :func:`map_radial`: the x with ``r(x) = r``."""
    r = np.asarray(r, dtype=float)
    L, a = spec.L, spec.alpha
    return (r * (1.0 + a) - L) / (r + L)


def vm_from_derivatives(r1, r2, r3):
    """Potential correction ``(3 r''^2 - 2 r''' r') / (8 r'^4)`` for any map."""
    r1, r2, r3 = (np.asarray(v, dtype=float) for v in (r1, r2, r3))
    return (3.0 * r2**2 - 2.0 * r3 * r1) / (8.0 * r1**4)


def vm_term(spec: GridSpec, x):
    """Map-induced potential correction at ``x``.

    Identically zero for this algebraic map (``3 r''^2 == 2 r''' r'``), but
    evaluated rather than assumed so that rounding shows up if it matters.
    """
    _, r1, r2, r3 = map_radial(spec, x)
    return vm_from_derivatives(r1, r2, r3)


@dataclass(frozen=True)
class MappedGrid:
    """Collocation set together with mapped radii and map derivatives.

    All arrays have length N + 1 and include both end points; the
    Hamiltonian only uses the interior slice ``[1:-1]``.
    """

    spec: GridSpec
    colloc: CollocationSet
    r: np.ndarray
    dr: np.ndarray
    d2r: np.ndarray
    d3r: np.ndarray
    vm: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def x(self) -> np.ndarray:
        return self.colloc.nodes

    @property
    def interior(self) -> slice:
        return slice(1, self.spec.N)

    @property
    def r_interior(self) -> np.ndarray:
        return self.r[1:-1]


def build_grid(spec: GridSpec) -> MappedGrid:
    """Map the LGL nodes of order ``spec.N`` onto [0, r_max]."""
    colloc = collocation_set(spec.N)
    r, r1, r2, r3 = map_radial(spec, colloc.nodes)
    r[0] = 0.0
    r[-1] = spec.r_max
    vm = vm_from_derivatives(r1, r2, r3)
    for arr in (r, r1, r2, r3, vm):
        arr.flags.writeable = False
    return MappedGrid(spec=spec, colloc=colloc, r=r, dr=r1, d2r=r2, d3r=r3, vm=vm)
