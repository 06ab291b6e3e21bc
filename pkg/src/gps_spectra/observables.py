"""Radial wavefunctions, normalization, node counts and expectation values."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .mapping import MappedGrid, inverse_map
from .orthopoly import cardinal_matrix, derivative_matrix

log = logging.getLogger(__name__)

_NODE_DUST = 1e-10
_ANTINODE_FRACTION = 1e-3


@dataclass(frozen=True)
class RadialState:
    """Normalized radial function u(r) = r R(r) sampled on interior nodes."""

    energy: float
    l: int
    node_count: int
    r: np.ndarray
    u: np.ndarray
    norm: float
    grid: MappedGrid

    @property
    def weights(self) -> np.ndarray:
        """Mapped quadrature weights ``w_j r'_j`` on interior nodes."""
        return self.grid.colloc.weights[1:-1] * self.grid.dr[1:-1]


def count_nodes(u) -> int:
    """Sign changes of ``u`` ignoring samples below 1e-10 of its peak."""
    u = np.asarray(u, dtype=float)
    big = u[np.abs(u) > _NODE_DUST * np.max(np.abs(u))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


def reconstruct_wavefunction(eigvec, grid: MappedGrid, energy: float = float("nan"),
                             l: int = 0) -> RadialState:
    """Turn a Hamiltonian eigenvector into a normalized :class:`RadialState`.

    ``u(r_j) = A_j P_N(x_j) / sqrt(r'_j)``, normalized so that
    ``sum_j w_j r'_j u_j^2 = 1`` and signed so the innermost lobe is positive.
    """
    A = np.asarray(eigvec, dtype=float)
    sl = grid.interior
    u = A * grid.colloc.pN_at_nodes[sl] / np.sqrt(grid.dr[sl])
    w = grid.colloc.weights[sl] * grid.dr[sl]
    norm2 = float(np.sum(w * u * u))
    u = u / np.sqrt(norm2)
    first = np.argmax(np.abs(u) >= _ANTINODE_FRACTION * np.max(np.abs(u)))
    if u[first] < 0:
        u = -u
    u.flags.writeable = False
    return RadialState(energy=float(energy), l=int(l), node_count=count_nodes(u),
                       r=grid.r_interior, u=u, norm=float(np.sum(w * u * u)), grid=grid)


def expectation_r_power(state: RadialState, k: int) -> float:
    """``<r^k> = sum_j w_j r'_j r_j^k u_j^2`` for integer k in [-3, 4].

    ``k = -3`` needs ``l >= 1``; ``k = -2`` with ``l = 0`` is allowed but
    logged, since it is finite only because u ~ r at the origin.  In that
    case ``u^2 / r^2 -> u'(0)^2`` does not vanish at r = 0, so the r = 0
    end node of the quadrature is included.
    """
    if int(k) != k or not -3 <= k <= 4:
        raise ValueError(f"k must be an integer in [-3, 4], got {k}")
    if k == -3 and state.l < 1:
        raise ValueError("<r^-3> diverges for l = 0")
    total = float(np.sum(state.weights * state.r**k * state.u**2))
    if k == -2 and state.l == 0:
        log.warning("<r^-2> for an s state relies on u(r) ~ r near the origin")
        grid = state.grid
        total += grid.colloc.weights[0] * grid.dr[0] * _slope_at_origin(state) ** 2
    return total


def _slope_at_origin(state: RadialState) -> float:
    """u'(0) from the interpolating polynomial f = u / sqrt(r')."""
    grid = state.grid
    f = np.zeros(grid.N + 1)
    f[grid.interior] = state.u / np.sqrt(grid.dr[grid.interior])
    df0 = derivative_matrix(grid.x)[0] @ f
    # u = sqrt(r') f and f(-1) = 0, so du/dr = f' / sqrt(r') at the origin
    return float(df0 / np.sqrt(grid.dr[0]))


def interpolate_u(state: RadialState, radii) -> np.ndarray:
    """u(r) at arbitrary radii in (0, r_max) by cardinal interpolation.

    The interpolated quantity is ``u / sqrt(r')`` (the polynomial in x), which
    vanishes at both end nodes.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    grid = state.grid
    if np.any((radii <= 0) | (radii >= grid.spec.r_max)):
        raise ValueError(f"radii must lie in (0, {grid.spec.r_max})")
    f = np.zeros(grid.N + 1)
    f[grid.interior] = state.u / np.sqrt(grid.dr[grid.interior])
    x = np.clip(inverse_map(grid.spec, radii), -1.0, 1.0)
    # snap to nodes that the inverse map reproduces only to rounding
    node = np.full(radii.shape, -1)
    idx = np.searchsorted(grid.x, x).clip(1, grid.N)
    for cand in (idx - 1, idx):
        close = np.abs(grid.r[cand] - radii) <= 4 * np.finfo(float).eps * radii
        x[close] = grid.x[cand[close]]
        node[close] = cand[close]
    g = cardinal_matrix(x, grid.x)
    den = 1.0 - x + grid.spec.alpha
    rp = grid.spec.L * (2.0 + grid.spec.alpha) / den**2
    out = (g @ f) * np.sqrt(rp)
    hit = (node >= 1) & (node <= grid.N - 1)
    out[hit] = state.u[node[hit] - 1]
    return out


def radial_density(state: RadialState, sample_radii) -> list[tuple[float, float]]:
    """Pairs ``(r, u(r)^2)`` at the requested radii."""
    radii = np.atleast_1d(np.asarray(sample_radii, dtype=float))
    u = interpolate_u(state, radii)
    return [(float(r), float(v * v)) for r, v in zip(radii, u)]


def overlap(a: RadialState, b: RadialState) -> float:
    """``int u_a u_b dr`` with the shared mapped quadrature."""
    if a.grid is not b.grid and a.grid.spec != b.grid.spec:
        raise ValueError("states live on different grids")
    return float(np.sum(a.weights * a.u * b.u))
