import numpy as np
import pytest

from gps_spectra.discretization import (
    ATOMIC, FULL, Convention, assemble_hamiltonian, second_derivative_product,
    second_derivative_sym,
)
from gps_spectra.mapping import GridSpec, build_grid
from gps_spectra.potentials import Coulomb, Harmonic, PowerLaw
from oracles import box_levels


class Zero:
    def evaluate(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


class Scaled:
    def __init__(self, base, s):
        self.base, self.s = base, s

    def evaluate(self, r):
        return self.s * self.base.evaluate(r)


def test_convention_validation():
    assert Convention().to_dict() == {"c": 0.5, "s": 1.0}
    with pytest.raises(ValueError):
        Convention(c=2.0)
    with pytest.raises(ValueError):
        Convention(c=1.0, report_scale=0.0)


@pytest.mark.parametrize("N", [16, 100, 300])
def test_second_derivative_is_exactly_symmetric(N):
    D2 = second_derivative_sym(build_grid(GridSpec(N=N)))
    assert np.array_equal(D2, D2.T)


def test_closed_form_matches_product_route():
    grid = build_grid(GridSpec(N=60, r_max=40.0, alpha=5.0))
    a = second_derivative_sym(grid)
    b = second_derivative_product(grid)
    assert np.max(np.abs(a - b)) <= 1e-9 * np.max(np.abs(a))


def test_second_derivative_on_a_smooth_function():
    # A_j = sqrt(r') u / P_N, so apply D2 to those variables and map back
    grid = build_grid(GridSpec(N=80, r_max=60.0, alpha=20.0))
    sl = grid.interior
    r, rp, p = grid.r[sl], grid.dr[sl], grid.colloc.pN_at_nodes[sl]
    u = r**2 * np.exp(-r)
    A = np.sqrt(rp) * u / p
    d2u = (second_derivative_sym(grid) @ A) * p / np.sqrt(rp)
    exact = (2 - 4 * r + r**2) * np.exp(-r)
    assert np.max(np.abs(d2u - exact)) < 1e-8


def test_box_oracle():
    # nearly linear map (alpha >> 1) -> plain particle in a box
    grid = build_grid(GridSpec(N=80, r_max=10.0, alpha=1e4))
    H = assemble_hamiltonian(grid, Zero(), 0, ATOMIC).matrix
    ev = np.linalg.eigvalsh(H)[:6]
    np.testing.assert_allclose(ev, box_levels(0.5, 10.0, 0, 6), rtol=1e-10)


def test_centrifugal_barrier_cannot_bind():
    grid = build_grid(GridSpec(N=120, r_max=50.0))
    for l in (1, 2, 5):
        ev = np.linalg.eigvalsh(assemble_hamiltonian(grid, Zero(), l).matrix)
        assert ev.min() >= 0.0


@pytest.mark.parametrize("pot", [Coulomb(), Harmonic(0.5), PowerLaw(1.0, 4.0)])
def test_convention_covariance(pot):
    grid = build_grid(GridSpec(N=200, r_max=30.0))
    full = np.linalg.eigvalsh(assemble_hamiltonian(grid, pot, 1, FULL).matrix)
    half = np.linalg.eigvalsh(assemble_hamiltonian(grid, Scaled(pot, 0.5), 1, ATOMIC).matrix)
    low = slice(0, 10)
    np.testing.assert_allclose(full[low], 2 * half[low], rtol=1e-11)


def test_spectral_convergence_hydrogen():
    errs = {}
    for N in (40, 80, 160, 300):
        H = assemble_hamiltonian(build_grid(GridSpec(N=N)), Coulomb(), 0).matrix
        errs[N] = abs(np.linalg.eigvalsh(H)[0] + 0.5)
    # decreasing until the rounding floor (~1e-13 here) is reached
    floor = 1e-13
    assert errs[80] < errs[40]
    assert errs[160] <= max(errs[80], floor)
    assert errs[300] <= 1e-10


def test_refinement_stability():
    e = [np.linalg.eigvalsh(assemble_hamiltonian(build_grid(GridSpec(N=N)), Coulomb(), 0).matrix)[0]
         for N in (300, 350)]
    assert abs(e[1] - e[0]) <= 1e-9


def test_matrix_layout():
    grid = build_grid(GridSpec(N=30))
    H = assemble_hamiltonian(grid, Coulomb(), 2)
    assert H.dim == 29 and H.l == 2
    assert np.array_equal(H.matrix, H.matrix.T)
    with pytest.raises(ValueError):
        H.matrix[0, 0] = 1.0


def test_nonfinite_potential_names_node():
    class Bad:
        def evaluate(self, r):
            v = np.zeros_like(r)
            v[3] = np.nan
            return v

    grid = build_grid(GridSpec(N=20))
    with pytest.raises(ValueError, match="node 4"):
        assemble_hamiltonian(grid, Bad(), 0)


def test_negative_l_rejected():
    with pytest.raises(ValueError):
        assemble_hamiltonian(build_grid(GridSpec(N=20)), Coulomb(), -1)
