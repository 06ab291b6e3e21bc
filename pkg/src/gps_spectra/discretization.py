"""Symmetric collocation Hamiltonian on the mapped LGL grid.

With u(r) the radial function, the unknowns are

    A_j = sqrt(r'(x_j)) u(r_j) / P_N(x_j),      j = 1 .. N-1

and the kinetic operator becomes ``diag(1/r') S diag(1/r')`` where ``S`` is
the interior block of the LGL second-derivative matrix expressed in these
variables.  ``S`` has the closed form

    S_jk = -2 / (x_j - x_k)^2                (j != k)
    S_jj = -N (N + 1) / (3 (1 - x_j^2))

and is exactly symmetric, so the discrete Hamiltonian is a real symmetric
matrix.  Dirichlet conditions at r = 0 and r = r_max follow from dropping
the two end nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .mapping import MappedGrid
from .orthopoly import derivative_matrix

log = logging.getLogger(__name__)

_ASYMMETRY_TOL = 1e-13


@dataclass(frozen=True)
class Convention:
    """Kinetic prefactor ``c`` in ``-c d^2/dr^2`` and a reporting scale.

    ``c = 0.5`` is atomic units.  ``c = 1`` is the ``p^2 + V`` form used for
    oscillator-type Hamiltonians; ``report_scale`` multiplies every reported
    energy (e.g. 0.5 to quote those in halved units).
    """

    c: float = 0.5
    report_scale: float = 1.0

    def __post_init__(self):
        if self.c not in (0.5, 1.0):
            raise ValueError(f"kinetic prefactor must be 0.5 or 1.0, got {self.c}")
        if not (np.isfinite(self.report_scale) and self.report_scale > 0):
            raise ValueError(f"report_scale must be positive, got {self.report_scale}")

    def to_dict(self) -> dict:
        return {"c": float(self.c), "s": float(self.report_scale)}


ATOMIC = Convention(0.5, 1.0)
FULL = Convention(1.0, 1.0)
FULL_HALVED = Convention(1.0, 0.5)


@dataclass(frozen=True)
class HamiltonianMatrix:
    matrix: np.ndarray
    grid: MappedGrid
    convention: Convention
    l: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _symmetric_kernel(x, N):
    """Closed-form interior second-derivative block in A-variables."""
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    S = -2.0 / (diff * diff)
    np.fill_diagonal(S, -N * (N + 1) / (3.0 * (1.0 - x) * (1.0 + x)))
    return S


def second_derivative_sym(grid: MappedGrid) -> np.ndarray:
    """Symmetric (N-1)x(N-1) matrix representing d^2/dr^2 on interior nodes."""
    x = grid.x[1:-1]
    rp = grid.dr[1:-1]
    S = _symmetric_kernel(x, grid.N)
    D2 = S / (rp[:, None] * rp[None, :])
    asym = np.max(np.abs(D2 - D2.T))
    if asym > 0.0:
        scale = np.max(np.abs(D2))
        if asym > _ASYMMETRY_TOL * scale:
            log.error("second-derivative matrix asymmetric by %.3e (scale %.3e)", asym, scale)
        D2 = 0.5 * (D2 + D2.T)
    return D2


def second_derivative_product(grid: MappedGrid) -> np.ndarray:
    """Same operator built as ``(D1)^2`` then rescaled; used as a cross-check.

    This route loses a few digits to cancellation at large N and is not used
    for assembly.
    """
    nodes = grid.x
    pN = grid.colloc.pN_at_nodes
    D1 = derivative_matrix(nodes)
    d2 = (D1 @ D1)[1:-1, 1:-1]
    p = pN[1:-1]
    rp = grid.dr[1:-1]
    # A-variables: S = diag(1/P) d2 diag(P)
    S = d2 * (p[None, :] / p[:, None])
    return S / (rp[:, None] * rp[None, :])


def assemble_hamiltonian(grid: MappedGrid, potential, l: int,
                         convention: Convention = ATOMIC) -> HamiltonianMatrix:
    """Build ``H = -c D2 + diag(V + c l(l+1)/r^2 + v_m)`` on interior nodes.

    Parameters
    ----------
    grid : MappedGrid
    potential : object with ``evaluate(r)``
        Any potential from :mod:`gps_spectra.potentials`.
    l : int
        Angular momentum, ``l >= 0``.
    convention : Convention

    Raises
    ------
    ValueError
        If the potential is not finite at some interior node.
    """
    if int(l) != l or l < 0:
        raise ValueError(f"l must be a non-negative integer, got {l}")
    c = convention.c
    r = grid.r_interior
    with np.errstate(all="ignore"):
        v = np.asarray(potential.evaluate(r), dtype=float)
    bad = ~np.isfinite(v)
    if bad.any():
        j = int(np.argmax(bad))
        raise ValueError(
            f"potential is not finite at interior node {j + 1} (r = {r[j]:.6e}); "
            "adjust r_max/alpha for this potential"
        )
    diag = v + c * l * (l + 1) / (r * r) + grid.vm[1:-1]
    H = -c * second_derivative_sym(grid)
    H[np.diag_indices_from(H)] += diag
    H.flags.writeable = False
    return HamiltonianMatrix(matrix=H, grid=grid, convention=convention, l=int(l))
