"""Static algebra of the undriven Ising chain.

Energies are reported as E/hbar in rad/us.  Basis states are integers
0..2^N-1 where bit q holds the state of spin q (0 = ground), so the
decimal label of |101> is 5.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ChainParams:
    """Chain of spin-1/2 nuclei with first- and second-neighbor Ising couplings.

    All frequencies are angular (rad/us): ``larmor[q]`` is the Larmor
    frequency of spin q, ``j1``/``j2`` the first/second neighbor coupling
    constants, ``rabi`` the drive strength.
    """

    larmor: tuple[float, ...]
    j1: float
    j2: float
    rabi: float

    def __post_init__(self):
        object.__setattr__(self, "larmor", tuple(float(w) for w in self.larmor))
        if self.n_spins < 2:
            raise ValueError("need at least 2 spins")
        if any(w <= 0.0 for w in self.larmor):
            raise ValueError("Larmor frequencies must be positive")
        if len(set(self.larmor)) != self.n_spins:
            raise ValueError("Larmor frequencies must be pairwise distinct "
                             "(spins must be individually addressable)")
        if self.rabi <= 0.0:
            raise ValueError("Rabi frequency must be positive")
        if self.j1 < 0.0 or self.j2 < 0.0:
            raise ValueError("couplings must be non-negative")
        if self.n_spins < 3 and self.j2 != 0.0:
            raise ValueError("second-neighbor coupling needs at least 3 spins")

    @property
    def n_spins(self) -> int:
        return len(self.larmor)

    @property
    def dim(self) -> int:
        return 1 << self.n_spins

    @classmethod
    def from_cycles_mhz(cls, larmor, j1, j2, rabi) -> "ChainParams":
        """Build from values quoted in units of 2*pi x MHz."""
        return cls(tuple(TWO_PI * w for w in larmor),
                   TWO_PI * j1, TWO_PI * j2, TWO_PI * rabi)


def bit(x: int, q: int) -> int:
    return (x >> q) & 1


def state_label(x: int, n_spins: int) -> str:
    """Ket label with spin N-1 leftmost, e.g. 5 -> '|101>' for 3 spins."""
    bits = "".join(str(bit(x, q)) for q in reversed(range(n_spins)))
    return f"|{bits}>"


def _check_index(params: ChainParams, x: int) -> None:
    if not 0 <= x < params.dim:
        raise IndexError(f"basis index {x} out of range for {params.n_spins} spins")


def eigenenergy(params: ChainParams, x: int) -> float:
    """Diagonal eigenvalue E_x/hbar of the undriven chain (rad/us).

    -1/2 [ sum_q (-1)^{i_q} w_q + J sum (-1)^{i_q+i_{q+1}}
           + J' sum (-1)^{i_q+i_{q+2}} ], sums over valid neighbor pairs.
    """
    _check_index(params, x)
    n = params.n_spins
    sign = [1.0 - 2.0 * bit(x, q) for q in range(n)]
    total = sum(s * w for s, w in zip(sign, params.larmor))
    total += params.j1 * sum(sign[q] * sign[q + 1] for q in range(n - 1))
    total += params.j2 * sum(sign[q] * sign[q + 2] for q in range(n - 2))
    return -0.5 * total


def eigenenergies(params: ChainParams) -> np.ndarray:
    """All 2^N eigenvalues E_x/hbar in basis order."""
    return np.array([eigenenergy(params, x) for x in range(params.dim)])


def omega_mk(params: ChainParams, m: int, k: int) -> float:
    """Transition frequency (E_m - E_k)/hbar; antisymmetric in (m, k)."""
    return eigenenergy(params, m) - eigenenergy(params, k)


def flip_resonance(params: ChainParams, x: int, q: int) -> float:
    """Carrier frequency that resonantly flips spin q out of configuration x.

    The positive eigenvalue gap |omega_mk(x ^ 2^q, x)|; no closed-form
    table is used, so it stays consistent with eigenenergy by construction.
    """
    _check_index(params, x)
    if not 0 <= q < params.n_spins:
        raise IndexError(f"spin index {q} out of range")
    return abs(omega_mk(params, x ^ (1 << q), x))
