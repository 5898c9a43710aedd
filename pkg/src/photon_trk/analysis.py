"""Parameter sweeps and level (anti)crossing searches over catalogued models."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .models import ModelDefinition, build
from .sumrules import channel, default_channel, diagonalize_model, matrix_elements, oscillator_strengths

JOBS_ENV = "SUMRULE_JOBS"


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        env = os.environ.get(JOBS_ENV, "").strip()
        jobs = int(env) if env else 1
    if jobs < 1:
        raise ValueError(f"job count must be >= 1, got {jobs}")
    return jobs


@dataclass(frozen=True)
class SweepRow:
    value: float
    omegas: tuple[float, ...]
    abs_q10_sq: float
    abs_p10_sq: float
    scaled_q10_sq: float
    sum_rule_total: float


def sweep_point(defn: ModelDefinition, param: str, value: float, levels: int, mode: str | None) -> SweepRow:
    model = build(defn.replace(**{param: value}))
    spec = diagonalize_model(model)
    ch = channel(model, mode or default_channel(model))
    q = matrix_elements(spec, ch.Q).elements
    p = matrix_elements(spec, ch.P).elements
    w10 = spec.omegas[1]
    q10 = abs(q[1, 0]) ** 2
    return SweepRow(
        value=float(value),
        omegas=tuple(float(w) for w in spec.omegas[:levels]),
        abs_q10_sq=float(q10),
        abs_p10_sq=float(abs(p[1, 0]) ** 2),
        scaled_q10_sq=float(w10**2 / ch.mu**2 * q10),
        sum_rule_total=float(oscillator_strengths(spec, q, ch.mu, 0).sum()),
    )


def _point(args):
    return sweep_point(*args)


def run_sweep(
    defn: ModelDefinition, param: str, values, levels: int = 6, mode: str | None = None, jobs: int | None = 1
) -> list[SweepRow]:
    """Evaluate every sweep point; rows come back in sweep order whatever the job count."""
    jobs = resolve_jobs(jobs)
    tasks = [(defn, param, float(v), levels, mode) for v in values]
    if jobs == 1 or len(tasks) < 2:
        return [_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_point, tasks))


def parity_classes(model, spec, levels: int) -> np.ndarray:
    """Parity of the lowest levels relative to the ground state (+1 same, -1 opposite)."""
    par = matrix_elements(spec, model.extra_ops["parity"], keep=levels).elements
    signs = np.sign(np.real(np.diag(par)))
    return signs * signs[0]


def parity_tracked_gap(defn: ModelDefinition, levels: int = 8) -> float:
    """Energy of the lowest excited same-parity level minus the second opposite-parity level.

    Below the Rabi 2-3 crossing this is ``omega_3 - omega_2 > 0``; above it the
    two states swap energy order and the gap turns negative.
    """
    model = build(defn)
    spec = diagonalize_model(model)
    cls = parity_classes(model, spec, levels)
    same = [k for k in range(1, levels) if cls[k] > 0]
    opposite = [k for k in range(1, levels) if cls[k] < 0]
    return float(spec.omegas[same[0]] - spec.omegas[opposite[1]])


def parity_crossing(defn: ModelDefinition, param: str, values) -> float:
    """Locate the sign change of :func:`parity_tracked_gap` on a grid, interpolated linearly."""
    values = [float(v) for v in values]
    gaps = [parity_tracked_gap(defn.replace(**{param: v})) for v in values]
    for (v0, g0), (v1, g1) in zip(zip(values, gaps), zip(values[1:], gaps[1:])):
        if g0 > 0 >= g1:
            return v0 + (v1 - v0) * g0 / (g0 - g1)
    raise ValueError("no parity-tracked level crossing on the grid")


def level_gap(defn: ModelDefinition, lower: int, upper: int) -> float:
    spec = diagonalize_model(build(defn), resolve=False)
    return float(spec.omegas[upper] - spec.omegas[lower])


def find_anticrossing(
    defn: ModelDefinition, param: str, lo: float, hi: float, lower: int = 3, upper: int = 4, grid: int = 61
) -> tuple[float, float]:
    """Parameter value minimizing ``omega_upper - omega_lower`` in ``[lo, hi]`` and the minimal gap."""
    xs = np.linspace(lo, hi, grid)
    gaps = [level_gap(defn.replace(**{param: x}), lower, upper) for x in xs]
    i = int(np.argmin(gaps))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    res = minimize_scalar(
        lambda x: level_gap(defn.replace(**{param: x}), lower, upper),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-9},
    )
    return float(res.x), float(res.fun)
