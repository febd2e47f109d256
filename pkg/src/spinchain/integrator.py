"""Fixed-step RK4 integration of the interaction-picture amplitude equations.

The step size is derived from the fastest frequency present (largest
eigenvalue gap plus the carrier) so the counter-rotating terms are
resolved; norm conservation is enforced to 1e-6 as a runtime assertion
on every sample.

``oracle_evolve`` is a deliberately independent cross-check: it works in
the Schrodinger picture, builds H0 and the drive from Kronecker-product
spin operators (not the bit-flip table the RK4 path uses), and applies a
frozen-midpoint matrix exponential per time slice.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .chain import ChainParams, eigenenergies
from .drive import Pulse
from .state import INTERACTION, StateVector, as_amps

NORM_TOL = 1e-6


class NormDriftError(RuntimeError):
    """Norm conservation broke the 1e-6 budget (step size too coarse)."""


class OracleError(RuntimeError):
    """Oracle slice count too small (unitarity drift detected)."""


@dataclass(frozen=True)
class StepPolicy:
    """Fixed-step policy: dt = min(max_dt, 2*pi / (points_per_period * w_fast))
    where w_fast is the largest eigenvalue gap plus the carrier."""

    points_per_period: int = 32
    max_dt: float = 1e-3
    convergence_check: bool = False

    def __post_init__(self):
        if self.points_per_period < 4:
            raise ValueError("points_per_period must be at least 4")
        if self.max_dt <= 0.0:
            raise ValueError("max_dt must be positive")

    def dt(self, params: ChainParams, pulse: Pulse) -> float:
        energies = eigenenergies(params)
        w_fast = (energies.max() - energies.min()) + abs(pulse.carrier)
        return min(self.max_dt, 2.0 * np.pi / (self.points_per_period * w_fast))


@dataclass
class Trajectory:
    """Time-ordered samples of the interaction-picture state."""

    times: np.ndarray
    states: np.ndarray          # (n_samples, dim) complex
    norm_errors: np.ndarray     # | ||D||^2 - 1 | per sample
    pulse_boundaries: list[float] = field(default_factory=list)

    @property
    def final_state(self) -> StateVector:
        return StateVector(self.states[-1].copy(), INTERACTION)

    @property
    def max_norm_error(self) -> float:
        return float(self.norm_errors.max())


def _flip_table(params: ChainParams):
    """(rows, cols, upper) for every single-bit pair; upper marks the
    excited side of the flipped bit."""
    rows, cols, upper = [], [], []
    for k in range(params.dim):
        for q in range(params.n_spins):
            m = k ^ (1 << q)
            rows.append(m)
            cols.append(k)
            upper.append(bool(m & (1 << q)))
    return (np.array(rows, dtype=np.int64),
            np.array(cols, dtype=np.int64),
            np.array(upper, dtype=np.bool_))


def step_rk4(params: ChainParams, pulse: Pulse, t: float, d, dt: float) -> np.ndarray:
    """One classical RK4 step of the interaction-picture equations."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    amps = as_amps(d).copy()
    rows, cols, upper = _flip_table(params)
    _kernel.rk4_span(amps, float(t), float(dt), 1, eigenenergies(params),
                     rows, cols, upper, pulse.carrier, pulse.phase,
                     0.5 * params.rabi)
    return amps


class _Recorder:
    """Accumulates samples for a Trajectory under the norm assertion."""

    def __init__(self, strict: bool):
        self.strict = strict
        self.times = []
        self.states = []
        self.norm_errors = []
        self.pulse_boundaries = []

    def add(self, t: float, amps: np.ndarray):
        err = abs(float(np.vdot(amps, amps).real) - 1.0)
        if err > NORM_TOL:
            msg = f"norm error {err:.3e} exceeds {NORM_TOL:.0e} at t={t:.6f} us"
            if self.strict:
                raise NormDriftError(msg)
            warnings.warn(msg, RuntimeWarning)
        self.times.append(t)
        self.states.append(amps.copy())
        self.norm_errors.append(err)

    def trajectory(self) -> Trajectory:
        return Trajectory(np.array(self.times),
                          np.array(self.states),
                          np.array(self.norm_errors),
                          self.pulse_boundaries)


def _evolve_pulse_into(rec, params, amps, pulse, policy, sample_every, t0):
    """Integrate one pulse, appending samples to rec; returns (amps, t_end)."""
    duration = pulse.duration(params)
    dt = policy.dt(params, pulse)
    n_full = int(duration / dt)
    remainder = duration - n_full * dt
    if remainder < 1e-12 * duration:
        remainder = 0.0

    energies = eigenenergies(params)
    rows, cols, upper = _flip_table(params)
    args = (energies, rows, cols, upper, pulse.carrier, pulse.phase,
            0.5 * params.rabi)

    done = 0
    while done < n_full:
        span = min(sample_every, n_full - done)
        _kernel.rk4_span(amps, t0 + done * dt, dt, span, *args)
        done += span
        rec.add(t0 + done * dt, amps)
    t_end = t0 + duration
    if remainder > 0.0:
        _kernel.rk4_span(amps, t0 + n_full * dt, remainder, 1, *args)
        rec.add(t_end, amps)
    elif rec.times:
        # the last in-loop sample is the pulse end; pin its time label
        rec.times[-1] = t_end
    return amps, t_end


def evolve_pulse(params: ChainParams, d0, pulse: Pulse,
                 policy: StepPolicy = StepPolicy(), sample_every: int = 100,
                 t0: float = 0.0, strict: bool = True) -> Trajectory:
    """Integrate a single pulse from t0; d0 must be unit-norm."""
    amps = as_amps(d0).copy()
    if abs(float(np.vdot(amps, amps).real) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    rec = _Recorder(strict)
    rec.add(t0, amps)
    rec.pulse_boundaries.append(t0)
    _, t_end = _evolve_pulse_into(rec, params, amps, pulse, policy,
                                  sample_every, t0)
    rec.pulse_boundaries.append(t_end)
    traj = rec.trajectory()
    if policy.convergence_check:
        _check_convergence(params, d0, pulse, policy, t0, traj)
    return traj


def run_sequence(params: ChainParams, initial: int, pulses: list[Pulse],
                 policy: StepPolicy = StepPolicy(), sample_every: int = 100,
                 strict: bool = True) -> Trajectory:
    """Chain pulses with continuous global time from the given basis state."""
    if not pulses:
        raise ValueError("pulse list must not be empty")
    amps = np.zeros(params.dim, dtype=np.complex128)
    if not 0 <= initial < params.dim:
        raise IndexError(f"basis index {initial} out of range")
    amps[initial] = 1.0
    rec = _Recorder(strict)
    rec.add(0.0, amps)
    t = 0.0
    rec.pulse_boundaries.append(t)
    for pulse in pulses:
        amps, t = _evolve_pulse_into(rec, params, amps, pulse, policy,
                                     sample_every, t)
        rec.pulse_boundaries.append(t)
    traj = rec.trajectory()
    if policy.convergence_check:
        _check_sequence_convergence(params, initial, pulses, policy, traj)
    return traj


def _check_convergence(params, d0, pulse, policy, t0, traj, tol=1e-7):
    fine = StepPolicy(points_per_period=2 * policy.points_per_period,
                      max_dt=0.5 * policy.max_dt, convergence_check=False)
    ref = evolve_pulse(params, d0, pulse, fine, sample_every=10**9,
                       t0=t0, strict=False)
    diff = np.abs(traj.states[-1] - ref.states[-1]).max()
    if diff > tol:
        raise NormDriftError(f"half-step check failed: diff {diff:.3e} > {tol:.0e}")


def _check_sequence_convergence(params, initial, pulses, policy, traj, tol=1e-7):
    fine = StepPolicy(points_per_period=2 * policy.points_per_period,
                      max_dt=0.5 * policy.max_dt, convergence_check=False)
    ref = run_sequence(params, initial, pulses, fine, sample_every=10**9,
                       strict=False)
    diff = np.abs(traj.states[-1] - ref.states[-1]).max()
    if diff > tol:
        raise NormDriftError(f"half-step check failed: diff {diff:.3e} > {tol:.0e}")


# --- independent oracle -----------------------------------------------------

_IZ = np.diag([0.5, -0.5]).astype(np.complex128)
_IPLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)


def _spin_op(single: np.ndarray, q: int, n: int) -> np.ndarray:
    """Embed a single-spin operator at position q (bit q least significant)."""
    op = np.eye(1, dtype=np.complex128)
    for pos in reversed(range(n)):
        op = np.kron(op, single if pos == q else np.eye(2, dtype=np.complex128))
    return op


def _oracle_operators(params: ChainParams):
    n = params.dim.bit_length() - 1
    iz = [_spin_op(_IZ, q, n) for q in range(n)]
    h0 = np.zeros((params.dim, params.dim), dtype=np.complex128)
    for q in range(n):
        h0 -= params.larmor[q] * iz[q]
    for q in range(n - 1):
        h0 -= 2.0 * params.j1 * iz[q] @ iz[q + 1]
    for q in range(n - 2):
        h0 -= 2.0 * params.j2 * iz[q] @ iz[q + 2]
    ladder_up = np.zeros((params.dim, params.dim), dtype=np.complex128)
    for q in range(n):
        ladder_up += _spin_op(_IPLUS, q, n)
    return np.ascontiguousarray(np.real(np.diag(h0))), ladder_up


def oracle_evolve(params: ChainParams, d0, pulse: Pulse,
                  n_slices: int | None = None, t0: float = 0.0,
                  max_rotation: float = 5e-3) -> np.ndarray:
    """Schrodinger-picture slice-propagator evolution over one pulse.

    Returns the final interaction-picture amplitudes at t0 + duration.
    """
    duration = pulse.duration(params)
    h0_diag, ladder_up = _oracle_operators(params)
    if n_slices is None:
        w_span = float(h0_diag.max() - h0_diag.min()) + abs(pulse.carrier)
        n_slices = max(1, math.ceil(duration * w_span / max_rotation))
    dt = duration / n_slices
    c = as_amps(d0) * np.exp(-1j * h0_diag * t0)
    c = np.ascontiguousarray(c)
    _kernel.oracle_span(c, t0, dt, n_slices, h0_diag, ladder_up,
                        pulse.carrier, pulse.phase, 0.5 * params.rabi)
    drift = abs(float(np.vdot(c, c).real) - float(np.vdot(as_amps(d0), as_amps(d0)).real))
    if not drift <= 1e-8:   # also catches NaN/inf from a diverged series
        raise OracleError(f"unitarity drift {drift:.3e}; increase n_slices")
    return c * np.exp(1j * h0_diag * (t0 + duration))


def oracle_sequence(params: ChainParams, initial: int, pulses: list[Pulse],
                    max_rotation: float = 5e-3) -> np.ndarray:
    """Chain oracle_evolve over a pulse list from a basis state."""
    amps = np.zeros(params.dim, dtype=np.complex128)
    amps[initial] = 1.0
    t = 0.0
    for pulse in pulses:
        amps = oracle_evolve(params, amps, pulse, t0=t, max_rotation=max_rotation)
        t += pulse.duration(params)
    return amps
