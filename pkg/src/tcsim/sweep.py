"""
Time sweeps across backends and their CSV / JSON / SVG renderings.

Backends:

analytic  closed-form populations
circuit   circuit mapping on the statevector simulator; exact
          probabilities, or shot frequencies when ``shots`` is set
qme       master-equation integrator
volterra  memory-kernel integrator (needs kappa > 0)

The circuit backend prepares each time point from scratch, so its value at
grid point i depends on t_i alone. With shots, point i is sampled with
seed ``seed ^ i``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import analytic, oracles
from .analytic import PopulationVector, TCParams
from .circuit import angles_from_coefficients, build_circuit
from .errors import BackendUnavailable, InvalidParams
from .statevector import excitation_probabilities, run_circuit, sample_counts

BACKENDS = ("analytic", "circuit", "qme", "volterra")
DEFAULT_T_MAX = 2.0
DEFAULT_STEPS = 101
DEFAULT_SEED = 42


@dataclass(frozen=True)
class SweepSpec:
    params: TCParams
    t_max: float = DEFAULT_T_MAX
    steps: int = DEFAULT_STEPS
    backends: tuple[str, ...] = ("analytic",)
    shots: int | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        backends = tuple(self.backends)
        unknown = set(backends) - set(BACKENDS)
        if unknown:
            raise InvalidParams(f"unknown backends: {', '.join(sorted(unknown))}")
        if len(set(backends)) != len(backends):
            raise InvalidParams("duplicate backend")
        # canonical order keeps every output independent of flag order
        object.__setattr__(self, "backends", tuple(b for b in BACKENDS if b in backends))
        if self.steps < 2:
            raise InvalidParams("steps must be >= 2")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise InvalidParams("t_max must be positive")
        if self.shots is not None:
            if self.shots < 1:
                raise InvalidParams("shots must be positive")
            if "circuit" not in backends:
                raise InvalidParams("shots only apply to the circuit backend")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must fit in 64 unsigned bits")

    def t_grid(self) -> np.ndarray:
        return np.array([i * self.t_max / (self.steps - 1) for i in range(self.steps)])

    def to_dict(self) -> dict:
        p = self.params
        return {
            "n_atoms": p.n_atoms,
            "g": p.g,
            "kappa": p.kappa,
            "initial_coeffs": list(p.initial_coeffs),
            "t_max": self.t_max,
            "steps": self.steps,
            "backends": list(self.backends),
            "shots": self.shots,
            "seed": self.seed,
        }


@dataclass
class SweepReport:
    spec: SweepSpec
    t_grid: np.ndarray
    series: dict[str, list[PopulationVector]]
    diff_matrix: np.ndarray
    wall_clock: dict[str, float] = field(default_factory=dict)

    @property
    def backends(self) -> tuple[str, ...]:
        return self.spec.backends

    def channel_names(self) -> list[str]:
        return [f"p_s{n + 1}" for n in range(self.spec.params.n_atoms)] + ["p_env"]

    def as_array(self, backend: str) -> np.ndarray:
        """Shape (steps, N + 1): atom populations then the ground channel."""
        return np.array([pv.as_array() for pv in self.series[backend]])

    def max_diff(self, a: str, b: str) -> float:
        i, j = self.backends.index(a), self.backends.index(b)
        return float(self.diff_matrix[i, j])


def _circuit_series(spec: SweepSpec, grid: np.ndarray) -> list[PopulationVector]:
    p = spec.params
    out = []
    for i, t in enumerate(grid):
        coeffs = analytic.coefficients(p, t)
        state = run_circuit(build_circuit(angles_from_coefficients(coeffs)))
        if spec.shots is None:
            probs = excitation_probabilities(state)
        else:
            probs = sample_counts(state, spec.shots, spec.seed ^ i).excitation_frequencies()
        out.append(PopulationVector(float(t), probs[:-1], float(probs[-1])))
    return out


def _backend_series(name: str, spec: SweepSpec, grid: np.ndarray) -> list[PopulationVector]:
    p = spec.params
    if name == "analytic":
        return [analytic.populations(p, t) for t in grid]
    if name == "circuit":
        return _circuit_series(spec, grid)
    if name == "qme":
        return oracles.qme_evolve(p, oracles.IntegratorConfig.default(p, grid))
    if name == "volterra":
        if p.kappa == 0:
            raise BackendUnavailable("volterra backend needs kappa > 0")
        coeffs = oracles.volterra_evolve(p, oracles.KernelConfig(), grid)
        return [
            PopulationVector(c.t, c.values**2, 1.0 - math.fsum(c.values**2)) for c in coeffs
        ]
    raise BackendUnavailable(name)


def run_sweep(spec: SweepSpec) -> SweepReport:
    grid = spec.t_grid()
    series: dict[str, list[PopulationVector]] = {}
    wall: dict[str, float] = {}
    for name in spec.backends:
        start = time.perf_counter()
        series[name] = _backend_series(name, spec, grid)
        wall[name] = time.perf_counter() - start

    k = len(spec.backends)
    diff = np.zeros((k, k))
    arrays = [np.array([pv.as_array() for pv in series[b]]) for b in spec.backends]
    for i in range(k):
        for j in range(i + 1, k):
            diff[i, j] = diff[j, i] = float(np.max(np.abs(arrays[i] - arrays[j])))
    return SweepReport(spec, grid, series, diff, wall)


# --------------------------------------------------------------------------
# emitters


def _num(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def emit_csv(report: SweepReport) -> str:
    lines = [",".join(["t", "backend", *report.channel_names()])]
    for name in sorted(report.series):
        for pv in report.series[name]:
            lines.append(",".join([_num(pv.t), name, *(_num(v) for v in pv.as_array())]))
    return "\n".join(lines) + "\n"


def emit_json(report: SweepReport, include_timing: bool = False) -> str:
    """JSON mirror of the report.

    Wall-clock timings vary between runs, so they are only included on
    request; without them the output is byte-for-byte reproducible.
    """
    doc = {
        "spec": report.spec.to_dict(),
        "t_grid": [float(t) for t in report.t_grid],
        "series": {
            name: {
                "atom_populations": [[float(v) for v in pv.atom_populations] for pv in s],
                "ground_population": [float(pv.ground_population) for pv in s],
            }
            for name, s in report.series.items()
        },
        "diff_matrix": {
            "backends": list(report.backends),
            "values": [[float(v) for v in row] for row in report.diff_matrix],
        },
    }
    if include_timing:
        doc["wall_clock"] = {k: float(v) for k, v in report.wall_clock.items()}
    return json.dumps(doc, indent=2) + "\n"


_WIDTH, _HEIGHT = 800, 500
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 630, 30, 450
_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
_DASH = {"analytic": None, "circuit": "2,3", "qme": "8,4", "volterra": "12,3,2,3"}


def _fmt(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def emit_svg(report: SweepReport) -> str:
    """Static line plot of every (backend, channel) series on one set of axes."""
    t_max = report.spec.t_max
    sx = (_RIGHT - _LEFT) / t_max
    sy = _BOTTOM - _TOP

    def px(t):
        return _LEFT + t * sx

    def py(p):
        return _BOTTOM - p * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{_LEFT}" y1="{_BOTTOM}" x2="{_RIGHT}" y2="{_BOTTOM}"/>',
        f'<line x1="{_LEFT}" y1="{_BOTTOM}" x2="{_LEFT}" y2="{_TOP}"/>',
    ]
    x_ticks = [i * t_max / 5 for i in range(6)]
    y_ticks = [i / 5 for i in range(6)]
    for t in x_ticks:
        x = _fmt(px(t))
        out.append(f'<line x1="{x}" y1="{_BOTTOM}" x2="{x}" y2="{_BOTTOM + 5}"/>')
    for p in y_ticks:
        y = _fmt(py(p))
        out.append(f'<line x1="{_LEFT - 5}" y1="{y}" x2="{_LEFT}" y2="{y}"/>')
    out.append("</g>")

    out.append('<g class="labels" font-family="sans-serif" font-size="12" fill="black">')
    for t in x_ticks:
        out.append(
            f'<text x="{_fmt(px(t))}" y="{_BOTTOM + 20}" text-anchor="middle">{_num(round(t, 6))}</text>'
        )
    for p in y_ticks:
        out.append(
            f'<text x="{_LEFT - 8}" y="{_fmt(py(p) + 4)}" text-anchor="end">{_num(round(p, 6))}</text>'
        )
    out.append(
        f'<text x="{(_LEFT + _RIGHT) // 2}" y="{_BOTTOM + 40}" text-anchor="middle">t</text>'
    )
    out.append(
        f'<text x="20" y="{(_TOP + _BOTTOM) // 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {(_TOP + _BOTTOM) // 2})">population</text>'
    )
    out.append("</g>")

    channels = report.channel_names()
    out.append('<g class="series" fill="none" stroke-width="1.5">')
    for name in report.backends:
        data = report.as_array(name)
        dash = _DASH[name]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        for ch, label in enumerate(channels):
            pts = " ".join(
                f"{_fmt(px(t))},{_fmt(py(v))}" for t, v in zip(report.t_grid, data[:, ch])
            )
            colour = _PALETTE[ch % len(_PALETTE)]
            out.append(
                f'<polyline data-backend="{name}" data-channel="{label}" '
                f'stroke="{colour}"{dash_attr} points="{pts}"/>'
            )
    out.append("</g>")

    out.append('<g class="legend" font-family="sans-serif" font-size="12">')
    y = _TOP + 10
    for ch, label in enumerate(channels):
        colour = _PALETTE[ch % len(_PALETTE)]
        out.append(
            f'<line x1="{_RIGHT + 20}" y1="{y}" x2="{_RIGHT + 45}" y2="{y}" '
            f'stroke="{colour}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_RIGHT + 52}" y="{y + 4}">{label}</text>')
        y += 18
    y += 8
    for name in report.backends:
        dash = _DASH[name]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{_RIGHT + 20}" y1="{y}" x2="{_RIGHT + 45}" y2="{y}" '
            f'stroke="black" stroke-width="1.5"{dash_attr}/>'
        )
        out.append(f'<text x="{_RIGHT + 52}" y="{y + 4}">{name}</text>')
        y += 18
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
