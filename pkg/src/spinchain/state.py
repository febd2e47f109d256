"""State vectors with an explicit picture tag.

Amplitudes live either in the interaction picture (D_m, drive-only
dynamics) or the Schrodinger picture (C_m, fast phases included).
The two differ by pure phases, so populations agree in both.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INTERACTION = "interaction"
SCHRODINGER = "schrodinger"


@dataclass
class StateVector:
    amps: np.ndarray
    picture: str = INTERACTION

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.ndim != 1:
            raise ValueError("state must be a 1-d amplitude vector")
        if self.picture not in (INTERACTION, SCHRODINGER):
            raise ValueError(f"unknown picture {self.picture!r}")

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0)


def basis_state(dim: int, x: int, picture: str = INTERACTION) -> StateVector:
    if not 0 <= x < dim:
        raise IndexError(f"basis index {x} out of range")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(amps, picture)


def as_amps(state) -> np.ndarray:
    """Accept a StateVector or a bare array; return the amplitude array."""
    if isinstance(state, StateVector):
        return state.amps
    return np.asarray(state, dtype=np.complex128)
