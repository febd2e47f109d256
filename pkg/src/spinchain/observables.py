"""Populations, spin expectation values, target states, and overlap fidelity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import bit
from .state import INTERACTION, SCHRODINGER, StateVector, as_amps


@dataclass(frozen=True)
class SpinExpectations:
    """Per-spin Bloch components; each vector satisfies ix^2+iy^2+iz^2 <= 1/4."""

    iz: tuple[float, ...]
    ix: tuple[float, ...]
    iy: tuple[float, ...]


@dataclass(frozen=True)
class FidelityResult:
    value: complex

    @property
    def modulus(self) -> float:
        return abs(self.value)


def _n_spins(dim: int) -> int:
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    return n


def populations(c) -> np.ndarray:
    """|C_k|^2 for every basis state; picture-independent."""
    amps = as_amps(c)
    return np.abs(amps) ** 2


def expect_iz(c, q: int) -> float:
    """<I_q^z> = 1/2 sum_x (-1)^{bit_q(x)} |C_x|^2; picture-independent."""
    p = populations(c)
    n = _n_spins(p.size)
    if not 0 <= q < n:
        raise IndexError(f"spin index {q} out of range")
    signs = np.array([1.0 - 2.0 * bit(x, q) for x in range(p.size)])
    return 0.5 * float(signs @ p)


def expect_ixy(c, q: int) -> tuple[float, float]:
    """(<I_q^x>, <I_q^y>) from the single-flip coherences C*_{x+2^q} C_x.

    These rotate at the carrier scale, so they are only meaningful on
    Schrodinger-picture amplitudes; a mis-tagged StateVector is rejected.
    """
    if isinstance(c, StateVector) and c.picture != SCHRODINGER:
        raise ValueError("transverse spin components need Schrodinger-picture amplitudes")
    amps = as_amps(c)
    n = _n_spins(amps.size)
    if not 0 <= q < n:
        raise IndexError(f"spin index {q} out of range")
    total = 0.0 + 0.0j
    for x in range(amps.size):
        if not bit(x, q):
            total += np.conj(amps[x + (1 << q)]) * amps[x]
    return float(total.real), float(total.imag)


def spin_expectations(c) -> SpinExpectations:
    amps = as_amps(c)
    n = _n_spins(amps.size)
    xy = [expect_ixy(c, q) for q in range(n)]
    return SpinExpectations(iz=tuple(expect_iz(c, q) for q in range(n)),
                            ix=tuple(v[0] for v in xy),
                            iy=tuple(v[1] for v in xy))


def fidelity(expected, numerical, norm_tol: float = 1e-6) -> FidelityResult:
    """Complex overlap <expected|numerical> of two unit vectors."""
    a = as_amps(expected)
    b = as_amps(numerical)
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    for v in (a, b):
        if abs(float(np.vdot(v, v).real) - 1.0) > norm_tol:
            raise ValueError("fidelity requires unit-norm states")
    return FidelityResult(complex(np.vdot(a, b)))


def bell_target(sign: int, n_spins: int = 3) -> StateVector:
    """(|00...0> + sign * |10...1>)/sqrt(2): the two-pulse protocol target,
    expressed in the interaction picture."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    dim = 1 << n_spins
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = 1.0 / np.sqrt(2.0)
    amps[(dim >> 1) | 1] = sign / np.sqrt(2.0)
    return StateVector(amps, INTERACTION)
