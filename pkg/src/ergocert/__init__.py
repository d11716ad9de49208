"""Thermodynamic entanglement certification from ergotropy.

Compares the global-minus-local ergotropy gap of a multi-qubit state with
bounds that every separable state obeys, and simulates the small circuits
used to prepare and passivize the test states.
"""

from .certify import (
                      Bipartition,
                      Bound,
                      CertificationReport,
                      NumericalInvariantError,
                      Verdict,
                      bound_g,
                      bound_gl,
                      bound_i,
                      certify,
                      delta,
                      ergotropy,
                      gl_threshold_formula,
                      local_ergotropy,
                      majorizes,
                      margins,
                      nielsen_kempe,
                      passive_state,
                      solve_threshold,
)
from .circuits import GateProgram, ProgramError, SimulationTrace, parse_program, run
from .hamiltonians import QubitHamiltonian, level_structure, named_system
from .states import (
                      DensityOperator,
                      InvalidStateError,
                      bell_diagonal,
                      ghz_classifier,
                      noisy_ghz,
                      pseudo_pure,
                      werner,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition", "Bound", "CertificationReport", "NumericalInvariantError", "Verdict",
    "bound_g", "bound_gl", "bound_i", "certify", "delta", "ergotropy", "gl_threshold_formula",
    "local_ergotropy", "majorizes", "margins", "nielsen_kempe", "passive_state", "solve_threshold",
    "GateProgram", "ProgramError", "SimulationTrace", "parse_program", "run",
    "QubitHamiltonian", "level_structure", "named_system",
    "DensityOperator", "InvalidStateError", "bell_diagonal", "ghz_classifier", "noisy_ghz",
    "pseudo_pure", "werner",
]
