"""Spectral localizer signatures for lattice index pairings.

The heavy lifting lives in the compiled extension; this package re-exports
its functions.
"""

from ._core import (
    ComputeError,
    build_hamiltonian,
    clifford,
    essential_codimension,
    fhs_chern,
    index_pairing,
    inertia,
    spectral_flow,
    weak_invariant_oracle,
    weak_run,
    winding_number,
)

__all__ = [
    "ComputeError",
    "build_hamiltonian",
    "clifford",
    "essential_codimension",
    "fhs_chern",
    "index_pairing",
    "inertia",
    "spectral_flow",
    "weak_invariant_oracle",
    "weak_run",
    "winding_number",
]

__version__ = "0.1.0"
