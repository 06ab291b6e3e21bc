"""Generalized pseudospectral solver for radial Schrodinger eigenproblems."""

from .analysis import (
    CriticalScreeningResult,
    SpectrumRequest,
    SpectrumResult,
    SweepResult,
    critical_screening,
    degeneracy_count,
    hulthen_critical_estimate,
    level_ordering,
    lowest_energy,
    parameter_sweep,
    solve_spectrum,
    spectroscopic_label,
)
from .discretization import ATOMIC, FULL, FULL_HALVED, Convention, assemble_hamiltonian
from .eigensolver import eigh
from .mapping import GridSpec, build_grid
from .observables import RadialState, expectation_r_power, reconstruct_wavefunction
from .potentials import (
    GSHO, NPO, SHO, ChargedOscillator, Coulomb, Harmonic, Hulthen, Logarithmic,
    PowerLaw, SexticSingular, Yukawa, classify, exact_reference, from_dict,
)

__version__ = "0.1.0"
