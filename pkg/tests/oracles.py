"""Independent reference computations used by the tests.

Nothing here imports the package under test.
"""

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.integrate import solve_ivp


def lgl_nodes_numpy(N):
    """LGL nodes from numpy's Legendre-series root finder."""
    coef = np.zeros(N + 1)
    coef[-1] = 1.0
    interior = np.sort(npleg.legroots(npleg.legder(coef)).real)
    return np.concatenate(([-1.0], interior, [1.0]))


def legendre_numpy(n, x):
    coef = np.zeros(n + 1)
    coef[-1] = 1.0
    return npleg.legval(x, coef), npleg.legval(x, npleg.legder(coef))


def box_levels(c, r_max, l, count):
    """V = 0, l = 0 levels in [0, r_max] with Dirichlet ends."""
    assert l == 0
    k = np.arange(1, count + 1)
    return c * (k * np.pi / r_max) ** 2


def _shoot(E, V, l, c, r0, r1):
    def rhs(r, y):
        return [y[1], ((V(r) + c * l * (l + 1) / r**2) - E) / c * y[0]]

    y0 = [r0 ** (l + 1), (l + 1) * r0**l]
    sol = solve_ivp(rhs, (r0, r1), y0, method="DOP853", rtol=1e-12, atol=1e-14,
                    dense_output=False)
    u = sol.y[0]
    nodes = int(np.count_nonzero(np.signbit(u[1:]) != np.signbit(u[:-1])))
    return nodes, u[-1]


def shooting_energy(V, l, c, n_r, lo, hi, r1, r0=1e-6, tol=1e-11):
    """Bound-state energy by node counting + bisection on the outer boundary value.

    ``lo`` must lie below and ``hi`` above the wanted level.  ``r1`` is a
    radius deep in the classically forbidden region.
    """
    def above(E):
        nodes, end = _shoot(E, V, l, c, r0, r1)
        if nodes != n_r:
            return nodes > n_r
        # with n_r nodes the tail diverges with sign (-1)^n_r below the level
        return end * (-1) ** n_r < 0

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
