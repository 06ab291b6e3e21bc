"""Legendre polynomials and Legendre-Gauss-Lobatto collocation.

Everything here lives on the reference interval [-1, 1].  Node sets are
computed once per order and cached; arrays handed out are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_MAX_NEWTON = 100


@dataclass(frozen=True)
class CollocationSet:
    """LGL nodes of order ``N`` (N + 1 points) with quadrature weights.

    Attributes
    ----------
    N : int
        Polynomial order.
    nodes : ndarray, shape (N + 1,)
        Ascending nodes, ``nodes[0] == -1`` and ``nodes[-1] == 1``.
    weights : ndarray, shape (N + 1,)
        LGL quadrature weights, ``2 / (N (N + 1) P_N(x_j)^2)``.
    pN_at_nodes : ndarray, shape (N + 1,)
        ``P_N`` evaluated at the nodes.
    """

    N: int
    nodes: np.ndarray
    weights: np.ndarray
    pN_at_nodes: np.ndarray


def _legendre_arrays(n, x):
    """P_n(x) and P_{n-1}(x) by upward recurrence (n >= 1)."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    return p, p_prev


def legendre_eval(n: int, x):
    """Evaluate the Legendre polynomial P_n and its derivative.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    x : float or array_like
        Abscissae in [-1, 1].

    Returns
    -------
    p, dp : float or ndarray
        ``P_n(x)`` and ``P_n'(x)``.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ValueError("x must be finite")
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)

    # joint upward recurrence; P_k' = k P_{k-1} + x P_{k-1}' has no
    # (1 - x^2) division and so stays accurate right up to the endpoints
    p_prev, p = np.zeros_like(xa), np.ones_like(xa)
    dp = np.zeros_like(xa)
    for k in range(1, n + 1):
        dp = k * p + xa * dp
        p_prev, p = p, ((2 * k - 1) * xa * p - (k - 1) * p_prev) / k

    if scalar:
        return float(p[0]), float(dp[0])
    return p, dp


def _newton_interior(N):
    # Newton on P_N' (P_N'' comes from the Legendre ODE), seeded by the
    # Chebyshev-Lobatto points, which interlace closely with the LGL nodes.
    x = -np.cos(np.pi * np.arange(1, N) / N)
    for _ in range(_MAX_NEWTON):
        p, p_prev = _legendre_arrays(N, x)
        one_minus_x2 = (1.0 - x) * (1.0 + x)
        dp = N * (p_prev - x * p) / one_minus_x2
        d2p = (2.0 * x * dp - N * (N + 1) * p) / one_minus_x2
        step = dp / d2p
        x = x - step
        if np.max(np.abs(step)) <= 4.0 * np.finfo(float).eps:
            break
    else:
        raise RuntimeError(
            f"LGL Newton iteration did not converge for N={N} "
            f"(last max step {np.max(np.abs(step)):.3e})"
        )
    # Symmetrize: the root set is symmetric about zero.
    x = 0.5 * (x - x[::-1])
    if N % 2 == 0:
        x[N // 2 - 1] = 0.0
    return x


@lru_cache(maxsize=64)
def _collocation(N):
    if N < 2:
        raise ValueError(f"LGL order must be >= 2, got {N}")
    nodes = np.empty(N + 1)
    nodes[0], nodes[-1] = -1.0, 1.0
    nodes[1:-1] = _newton_interior(N)
    pN, _ = _legendre_arrays(N, nodes)
    weights = 2.0 / (N * (N + 1) * pN**2)
    for arr in (nodes, weights, pN):
        arr.flags.writeable = False
    return CollocationSet(N=N, nodes=nodes, weights=weights, pN_at_nodes=pN)


def lgl_nodes(N: int) -> np.ndarray:
    """Return the N + 1 Legendre-Gauss-Lobatto nodes on [-1, 1], ascending."""
    return _collocation(int(N)).nodes


def lgl_weights(nodes) -> np.ndarray:
    """LGL quadrature weights ``2 / (N (N + 1) P_N(x_j)^2)`` for the given nodes."""
    nodes = np.asarray(nodes, dtype=float)
    N = nodes.size - 1
    pN, _ = _legendre_arrays(N, nodes)
    return 2.0 / (N * (N + 1) * pN**2)


def collocation_set(N: int) -> CollocationSet:
    """Cached :class:`CollocationSet` of order ``N``."""
    return _collocation(int(N))


def cardinal_matrix(x, nodes) -> np.ndarray:
    """Values ``g_j(x_i)`` of all LGL cardinal functions at points ``x``.

    Returns an array of shape ``(len(x), N + 1)``.  Points that coincide with
    a node get the exact Kronecker row.
    """
    nodes = np.asarray(nodes, dtype=float)
    N = nodes.size - 1
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pN_nodes, _ = _legendre_arrays(N, nodes)
    pN_x, dpN_x = legendre_eval(N, x)
    numer = -(1.0 - x) * (1.0 + x) * np.atleast_1d(dpN_x)
    diff = x[:, None] - nodes[None, :]
    hit = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        g = numer[:, None] / (N * (N + 1) * pN_nodes[None, :] * diff)
    rows = hit.any(axis=1)
    g[rows] = hit[rows].astype(float)
    return g


def cardinal_eval(j: int, x: float, nodes) -> float:
    """Cardinal function ``g_j`` at a single point (equals 1 at ``x_j``)."""
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= j < nodes.size:
        raise IndexError(f"cardinal index {j} out of range for {nodes.size} nodes")
    if x == nodes[j]:
        return 1.0
    return float(cardinal_matrix([x], nodes)[0, j])


def derivative_matrix(nodes) -> np.ndarray:
    """Exact first-derivative collocation matrix on LGL nodes.

    ``D[j, k] = g_k'(x_j)``; applied to nodal values of a polynomial of degree
    <= N it returns the nodal values of its derivative.
    """
    nodes = np.asarray(nodes, dtype=float)
    N = nodes.size - 1
    pN, _ = _legendre_arrays(N, nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (pN[:, None] / pN[None, :]) / diff
    np.fill_diagonal(D, 0.0)
    D[0, 0] = -N * (N + 1) / 4.0
    D[N, N] = N * (N + 1) / 4.0
    return D
