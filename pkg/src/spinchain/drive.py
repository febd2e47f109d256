"""Time-dependent RF drive and the interaction-picture equations of motion.

The drive couples every pair of basis states that differ in exactly one
bit (single-spin transitions), with magnitude Omega/2 and a carrier phase
factor.  Orientation convention: the element on the excited side of the
flipped bit carries exp(-i(w t + phi)), which makes the matrix Hermitian
and puts the slowly-rotating (secular) term on a transition whenever the
carrier matches its eigenvalue gap.  With this convention the two-pulse
protocol at phi=0 produces the minus-sign Bell state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainParams, eigenenergies, omega_mk
from .state import INTERACTION, SCHRODINGER, StateVector, as_amps


@dataclass(frozen=True)
class Pulse:
    """RF pulse: angular carrier frequency (rad/us), rotation angle and
    phase (radians).  Duration is angle / rabi."""

    carrier: float
    angle: float
    phase: float = 0.0

    def __post_init__(self):
        if self.angle <= 0.0:
            raise ValueError("pulse angle must be positive")

    def duration(self, params: ChainParams) -> float:
        return self.angle / params.rabi


def w_element(params: ChainParams, pulse: Pulse, t: float, m: int, k: int) -> complex:
    """Drive matrix element W_mk/hbar (rad/us); zero unless m, k differ in
    exactly one bit."""
    if not (0 <= m < params.dim and 0 <= k < params.dim):
        raise IndexError("basis index out of range")
    diff = m ^ k
    if diff == 0 or diff & (diff - 1):
        return 0.0 + 0.0j
    z = np.exp(-1j * (pulse.carrier * t + pulse.phase))
    if not m & diff:  # k holds the excited side
        z = np.conj(z)
    return -0.5 * params.rabi * z


def w_matrix(params: ChainParams, pulse: Pulse, t: float) -> np.ndarray:
    """Full W(t)/hbar matrix (Hermitian, Hamming-distance-1 sparsity)."""
    dim = params.dim
    w = np.zeros((dim, dim), dtype=np.complex128)
    z = np.exp(-1j * (pulse.carrier * t + pulse.phase))
    for k in range(dim):
        for q in range(params.n_spins):
            m = k ^ (1 << q)
            w[m, k] = -0.5 * params.rabi * (z if m & (1 << q) else np.conj(z))
    return w


def rhs(params: ChainParams, pulse: Pulse, t: float, d) -> np.ndarray:
    """Interaction-picture derivative dD_m/dt = -i sum_k W_mk/hbar D_k e^{i w_mk t}."""
    if isinstance(d, StateVector) and d.picture != INTERACTION:
        raise ValueError("rhs expects interaction-picture amplitudes")
    amps = as_amps(d)
    if amps.size != params.dim:
        raise ValueError(f"state dimension {amps.size} != {params.dim}")
    energies = eigenenergies(params)
    phase = np.exp(1j * energies * t)
    w = w_matrix(params, pulse, t)
    return -1j * phase * (w @ (np.conj(phase) * amps))


def to_schrodinger(d: StateVector, t: float, params: ChainParams) -> StateVector:
    """C_m = D_m e^{-i E_m t / hbar}: restore the fast diagonal phases."""
    if d.picture != INTERACTION:
        raise ValueError("input must be in the interaction picture")
    phases = np.exp(-1j * eigenenergies(params) * t)
    return StateVector(d.amps * phases, SCHRODINGER)


def to_interaction(c: StateVector, t: float, params: ChainParams) -> StateVector:
    """Inverse of to_schrodinger; the round trip is the identity."""
    if c.picture != SCHRODINGER:
        raise ValueError("input must be in the Schrodinger picture")
    phases = np.exp(1j * eigenenergies(params) * t)
    return StateVector(c.amps * phases, INTERACTION)
