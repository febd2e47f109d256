"""Run configuration, scenario drivers, and file output.

Config files are plain ``key = value`` text.  All frequencies there are
quoted in units of 2*pi x MHz (the conventional way these parameter sets
are tabulated) and are converted to angular rad/us on ingestion.
Pulses are specified symbolically ("flip spin q out of configuration x",
resolved through the resonance algebra) or with an explicit carrier.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chain import TWO_PI, ChainParams, eigenenergy, flip_resonance, state_label
from .drive import Pulse, to_schrodinger
from .integrator import StepPolicy, Trajectory, run_sequence
from .observables import bell_target, expect_ixy, expect_iz, fidelity, populations
from .state import StateVector


class ConfigError(ValueError):
    """Malformed config file, unknown key, or non-physical value."""


@dataclass(frozen=True)
class PulseSpec:
    """One pulse as configured: symbolic transition or explicit carrier."""

    angle: float
    phase: float = 0.0
    flip_spin: int | None = None
    from_state: int | None = None
    carrier_mhz: float | None = None   # 2*pi x MHz units

    def resolve(self, params: ChainParams) -> Pulse:
        if self.carrier_mhz is not None:
            carrier = TWO_PI * self.carrier_mhz
        else:
            carrier = flip_resonance(params, self.from_state, self.flip_spin)
        return Pulse(carrier=carrier, angle=self.angle, phase=self.phase)

    def describe(self) -> str:
        if self.carrier_mhz is not None:
            head = f"carrier {_fmt(self.carrier_mhz)}"
        else:
            head = f"flip {self.flip_spin} from {self.from_state:b}"
        return f"{head} angle {_fmt(self.angle)} phase {_fmt(self.phase)}"


@dataclass(frozen=True)
class SweepSpec:
    """Grid of second- to first-neighbor coupling ratios J'/J."""

    start: float = 0.0
    stop: float = 0.2
    step: float = 0.005

    def __post_init__(self):
        if self.step <= 0.0:
            raise ConfigError("sweep step must be positive")
        if self.stop < self.start:
            raise ConfigError("sweep stop must be >= start")

    def ratios(self) -> list[float]:
        n = int(round((self.stop - self.start) / self.step))
        grid = [self.start + i * self.step for i in range(n + 1)]
        if not grid:
            raise ConfigError("sweep grid is empty")
        return grid


@dataclass
class RunConfig:
    params: ChainParams
    pulses: list[PulseSpec]
    policy: StepPolicy
    sweep: SweepSpec
    sample_stride: int = 100
    initial: int = 0

    def resolved_pulses(self) -> list[Pulse]:
        return [spec.resolve(self.params) for spec in self.pulses]

    def header_lines(self) -> list[str]:
        """Fully resolved configuration, embedded in every output file."""
        p = self.params
        lines = [
            f"larmor = {', '.join(_fmt(w / TWO_PI) for w in p.larmor)}",
            f"j1 = {_fmt(p.j1 / TWO_PI)}",
            f"j2 = {_fmt(p.j2 / TWO_PI)}",
            f"rabi = {_fmt(p.rabi / TWO_PI)}",
            f"initial = {self.initial:0{p.n_spins}b}",
            f"points_per_period = {self.policy.points_per_period}",
            f"max_dt = {_fmt(self.policy.max_dt)}",
            f"sample_stride = {self.sample_stride}",
            f"sweep_start = {_fmt(self.sweep.start)}",
            f"sweep_stop = {_fmt(self.sweep.stop)}",
            f"sweep_step = {_fmt(self.sweep.step)}",
        ]
        lines += [f"pulse = {spec.describe()}" for spec in self.pulses]
        return lines


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# --- parsing ----------------------------------------------------------------

_SCALAR_KEYS = {
    "larmor", "j1", "j2", "rabi", "initial", "points_per_period", "max_dt",
    "sample_stride", "sweep_start", "sweep_stop", "sweep_step",
}

_ANGLE_RE = re.compile(
    r"^\s*(?:(?P<a>[0-9.eE+-]+)\s*\*\s*)?(?P<pi>pi)?\s*(?:/\s*(?P<b>[0-9.eE+-]+))?\s*$")


def parse_angle(text: str) -> float:
    """Numbers plus 'pi' arithmetic: '1.5', 'pi', 'pi/2', '3*pi/4'."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE_RE.match(text)
    if not m or not m.group("pi"):
        raise ConfigError(f"cannot parse angle {text!r}")
    try:
        value = float(m.group("a")) if m.group("a") else 1.0
        value *= np.pi
        if m.group("b"):
            value /= float(m.group("b"))
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None
    return value


_PULSE_FLIP_RE = re.compile(
    r"^flip\s+(?P<q>\d+)\s+from\s+(?P<state>[01]+)"
    r"(?:\s+angle\s+(?P<angle>[^ ]+(?: ?\* ?[^ ]+)?))?"
    r"(?:\s+phase\s+(?P<phase>\S+))?$")
_PULSE_CARRIER_RE = re.compile(
    r"^carrier\s+(?P<carrier>\S+)"
    r"(?:\s+angle\s+(?P<angle>[^ ]+(?: ?\* ?[^ ]+)?))?"
    r"(?:\s+phase\s+(?P<phase>\S+))?$")


def parse_pulse(text: str) -> PulseSpec:
    text = text.strip()
    m = _PULSE_FLIP_RE.match(text)
    if m:
        if not m.group("angle"):
            raise ConfigError(f"pulse {text!r} is missing an angle")
        return PulseSpec(
            angle=parse_angle(m.group("angle")),
            phase=parse_angle(m.group("phase")) if m.group("phase") else 0.0,
            flip_spin=int(m.group("q")),
            from_state=int(m.group("state"), 2))
    m = _PULSE_CARRIER_RE.match(text)
    if m:
        if not m.group("angle"):
            raise ConfigError(f"pulse {text!r} is missing an angle")
        try:
            carrier = float(m.group("carrier"))
        except ValueError:
            raise ConfigError(f"bad carrier in pulse {text!r}") from None
        return PulseSpec(
            angle=parse_angle(m.group("angle")),
            phase=parse_angle(m.group("phase")) if m.group("phase") else 0.0,
            carrier_mhz=carrier)
    raise ConfigError(f"cannot parse pulse {text!r}")


DEFAULTS = {
    "larmor": "100, 200, 400",
    "j1": "5",
    "j2": "0.2",
    "rabi": "0.1",
    "initial": "000",
    "points_per_period": "32",
    "max_dt": "0.001",
    "sample_stride": "100",
    "sweep_start": "0",
    "sweep_stop": "0.2",
    "sweep_step": "0.005",
}

DEFAULT_PULSES = [
    "flip 0 from 000 angle pi/2 phase 0",
    "flip 2 from 001 angle pi phase 0",
]


def _read_pairs(path: Path) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: malformed line {raw.strip()!r} "
                              "(expected key = value)")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs.append((key, value))
    return pairs


def _float_key(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"value for {key!r} is not a number: {value!r}") from None


def _int_key(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"value for {key!r} is not an integer: {value!r}") from None


def load_config(path: str | Path | None = None,
                overrides: list[str] | None = None) -> RunConfig:
    """Parse a config file (or the built-in defaults) plus key=value overrides."""
    scalars = dict(DEFAULTS)
    pulse_texts = list(DEFAULT_PULSES)
    pairs: list[tuple[str, str]] = []
    if path is not None:
        pairs += _read_pairs(Path(path))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"malformed override {item!r} (expected key=value)")
        key, value = (part.strip() for part in item.split("=", 1))
        pairs.append((key, value))

    # any explicit pulse lines replace the default protocol wholesale
    if any(key == "pulse" for key, _ in pairs):
        pulse_texts = []
    for key, value in pairs:
        if key == "pulse":
            pulse_texts.append(value)
        elif key in _SCALAR_KEYS:
            scalars[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")

    larmor = []
    for tok in scalars["larmor"].split(","):
        larmor.append(_float_key("larmor", tok))
    j1 = _float_key("j1", scalars["j1"])
    j2 = _float_key("j2", scalars["j2"])
    rabi = _float_key("rabi", scalars["rabi"])
    try:
        params = ChainParams.from_cycles_mhz(larmor, j1, j2, rabi)
    except ValueError as exc:
        raise ConfigError(f"non-physical chain parameters: {exc}") from None

    try:
        initial = int(scalars["initial"], 2)
    except ValueError:
        raise ConfigError(f"initial state must be a bit string, got "
                          f"{scalars['initial']!r}") from None
    if not 0 <= initial < params.dim:
        raise ConfigError(f"initial state {scalars['initial']!r} out of range")

    try:
        policy = StepPolicy(points_per_period=_int_key("points_per_period",
                                                       scalars["points_per_period"]),
                            max_dt=_float_key("max_dt", scalars["max_dt"]))
    except ValueError as exc:
        raise ConfigError(f"non-physical step policy: {exc}") from None

    stride = _int_key("sample_stride", scalars["sample_stride"])
    if stride < 1:
        raise ConfigError("sample_stride must be at least 1")

    sweep = SweepSpec(start=_float_key("sweep_start", scalars["sweep_start"]),
                      stop=_float_key("sweep_stop", scalars["sweep_stop"]),
                      step=_float_key("sweep_step", scalars["sweep_step"]))

    pulses = [parse_pulse(text) for text in pulse_texts]
    if not pulses:
        raise ConfigError("at least one pulse is required")
    for spec in pulses:
        if spec.flip_spin is not None and spec.flip_spin >= params.n_spins:
            raise ConfigError(f"pulse flips spin {spec.flip_spin}, but the chain "
                              f"has {params.n_spins} spins")
        if spec.from_state is not None and spec.from_state >= params.dim:
            raise ConfigError("pulse reference state out of range")
    return RunConfig(params=params, pulses=pulses, policy=policy,
                     sweep=sweep, sample_stride=stride, initial=initial)


# --- scenario drivers -------------------------------------------------------

def resonance_table(config: RunConfig) -> str:
    """Eigenenergies and single-flip transition table; protocol carriers flagged."""
    p = config.params
    carriers = [(i + 1, spec.resolve(p).carrier) for i, spec in
                enumerate(config.pulses)]
    lines = ["# eigenenergies (E/hbar / 2pi, MHz)"]
    for x in range(p.dim):
        lines.append(f"{state_label(x, p.n_spins)}: "
                     f"{_fmt(eigenenergy(p, x) / TWO_PI)}")
    lines.append("")
    lines.append("# single-flip transitions (carrier / 2pi, MHz)")
    for x in range(p.dim):
        for q in range(p.n_spins):
            if x & (1 << q):
                continue
            freq = flip_resonance(p, x, q)
            row = (f"{state_label(x, p.n_spins)} -> "
                   f"{state_label(x | (1 << q), p.n_spins)}: "
                   f"{_fmt(freq / TWO_PI)}")
            flags = [f"pulse-{i} carrier" for i, c in carriers
                     if abs(freq - c) <= 1e-9 * max(freq, 1.0)]
            if flags:
                row += "   <- " + ", ".join(flags)
            lines.append(row)
    return "\n".join(lines) + "\n"


def _write(path: Path, config: RunConfig, body: list[str]) -> None:
    header = [f"# {line}" for line in config.header_lines()]
    path.write_text("\n".join(header + body) + "\n")


def run_evolution(config: RunConfig, strict: bool = True) -> Trajectory:
    return run_sequence(config.params, config.initial, config.resolved_pulses(),
                        config.policy, config.sample_stride, strict=strict)


def write_evolution_files(config: RunConfig, traj: Trajectory,
                          outdir: str | Path) -> dict:
    """Emit the time-series files and the run summary; returns the summary."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    p = config.params
    n = p.n_spins
    dim = p.dim
    tracked = [0, 5] if dim > 5 else [0]

    amp_rows = ["t_us," + ",".join(f"re_d{k},im_d{k}" for k in tracked)]
    pop_rows = ["t_us," + ",".join(f"p{k}" for k in range(dim))]
    z_rows = ["t_us," + ",".join(f"iz{q}" for q in range(n))]
    xy_rows = ["t_us," + ",".join(f"ix{q},iy{q}" for q in range(n))]
    for t, amps in zip(traj.times, traj.states):
        d = StateVector(amps.copy())
        c = to_schrodinger(d, t, p)
        amp_rows.append(",".join([_fmt(t)] + [v for k in tracked for v in
                                              (_fmt(amps[k].real), _fmt(amps[k].imag))]))
        pop_rows.append(",".join([_fmt(t)] + [_fmt(v) for v in populations(d)]))
        z_rows.append(",".join([_fmt(t)] + [_fmt(expect_iz(d, q)) for q in range(n)]))
        xy = [expect_ixy(c, q) for q in range(n)]
        xy_rows.append(",".join([_fmt(t)] + [_fmt(v) for pair in xy for v in pair]))

    _write(outdir / "amplitudes.csv", config, amp_rows)
    _write(outdir / "populations.csv", config, pop_rows)
    _write(outdir / "spin_z.csv", config, z_rows)
    _write(outdir / "spin_xy.csv", config, xy_rows)

    final = traj.final_state
    summary = {
        "final_time_us": traj.times[-1],
        "max_norm_error": traj.max_norm_error,
        "fidelity": None,
        "populations": populations(final).tolist(),
    }
    body = [f"final_time_us = {_fmt(traj.times[-1])}",
            f"max_norm_error = {_fmt(traj.max_norm_error)}"]
    if n == 3:
        f = fidelity(bell_target(-1), final)
        summary["fidelity"] = f.value
        body += [f"fidelity_re = {_fmt(f.value.real)}",
                 f"fidelity_im = {_fmt(f.value.imag)}",
                 f"fidelity_abs = {_fmt(f.modulus)}"]
    body += [f"population_{k} = {_fmt(v)}"
             for k, v in enumerate(summary["populations"])]
    _write(outdir / "summary.txt", config, body)
    return summary


def sweep_point(config: RunConfig, ratio: float, strict: bool = True) -> complex:
    """Fidelity of the full pulse sequence at second-neighbor ratio J'/J."""
    base = config.params
    params = ChainParams(base.larmor, base.j1, ratio * base.j1, base.rabi)
    pulses = [spec.resolve(params) for spec in config.pulses]
    traj = run_sequence(params, config.initial, pulses, config.policy,
                        sample_every=10 ** 9, strict=strict)
    return fidelity(bell_target(-1, params.n_spins), traj.final_state).value


def _sweep_worker(args) -> complex:
    config, ratio, strict = args
    return sweep_point(config, ratio, strict)


def run_sweep(config: RunConfig, jobs: int = 1, strict: bool = True
              ) -> list[tuple[float, complex]]:
    """Fidelity over the configured J'/J grid, rows in grid order."""
    ratios = config.sweep.ratios()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_sweep_worker,
                                   [(config, r, strict) for r in ratios]))
    else:
        values = [sweep_point(config, r, strict) for r in ratios]
    return list(zip(ratios, values))


def write_sweep_file(config: RunConfig, rows: list[tuple[float, complex]],
                     outdir: str | Path) -> Path:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    body = ["j2_over_j1,re_f,im_f,abs_f"]
    body += [",".join([_fmt(r), _fmt(f.real), _fmt(f.imag), _fmt(abs(f))])
             for r, f in rows]
    path = outdir / "sweep.csv"
    _write(path, config, body)
    return path
