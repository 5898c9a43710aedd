"""Radiative rates, two-port transmission spectra and their integrated lines.

The system couples to two identical transmission lines through the field
coordinate ``Q`` with an ohmic spectral density ``g^2(omega) = alpha * omega``.
:func:`transmission` evaluates the closed-form spectrum;
:func:`linear_response_oracle` rebuilds it from first-order density-matrix
coherences of the zero-temperature dressed master equation and serves as an
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad

from .models import BuiltModel
from .sumrules import DressedSpectrum, _elements, diagonalize_model, matrix_elements

DEFAULT_ALPHA = 1e-3
LINE_WINDOW = 20.0
ORACLE_MAX_DIM = 1024

LINEWIDTHS = ("per_port", "summed_ports")


@dataclass(frozen=True)
class RateTable:
    """``gamma[k, j]`` for ``k > j`` (zero elsewhere) and the total widths ``gamma_total[k]``."""

    gamma: NDArray[np.float64]
    gamma_total: NDArray[np.float64]
    coupling_constant: float


@dataclass(frozen=True)
class LineWeight:
    k: int
    omega_k0: float
    gamma_k0: float
    gamma_k: float
    analytic: float
    numeric: float
    overlapping: bool = False


@dataclass(frozen=True)
class TransmissionCurve:
    omega_samples: NDArray[np.float64]
    T_values: NDArray[np.float64]
    line_weights: tuple[LineWeight, ...] = field(default_factory=tuple)


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be a positive finite number, got {alpha!r}")
    return float(alpha)


def _check_grid(omega_grid: ArrayLike) -> NDArray[np.float64]:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("frequency grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(grid)):
        raise ValueError("frequency grid contains non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("frequency grid must be strictly increasing")
    return grid


def _width_scale(linewidth: str) -> float:
    if linewidth not in LINEWIDTHS:
        raise ValueError(f"linewidth must be one of {LINEWIDTHS}, got {linewidth!r}")
    return 1.0 if linewidth == "per_port" else 2.0


def decay_rates(spec: DressedSpectrum, q_table, alpha: float = DEFAULT_ALPHA) -> RateTable:
    """``Gamma_kj = 2 pi alpha omega_kj |Q_kj|^2`` for ``k > j``, and ``Gamma_k = sum_j Gamma_kj``."""
    alpha = _check_alpha(alpha)
    q = _elements(q_table)
    w = spec.transition_matrix(q.shape[0])
    gamma = 2.0 * math.pi * alpha * np.clip(w, 0.0, None) * np.abs(q) ** 2
    gamma = np.tril(gamma, -1)
    return RateTable(gamma=gamma, gamma_total=gamma.sum(axis=1), coupling_constant=alpha)


def transmission(
    spec: DressedSpectrum,
    rates: RateTable,
    omega_grid: ArrayLike,
    linewidth: str = "per_port",
    with_lines: bool = True,
) -> TransmissionCurve:
    """``T(w) = w^2 |sum_k (G_k0/w_k0) / (w_k0 - w - i G_k)|^2`` over lines with ``G_k0 > 0``.

    ``linewidth="summed_ports"`` doubles every ``G_k`` in the denominator.
    """
    grid = _check_grid(omega_grid)
    scale = _width_scale(linewidth)
    w0 = spec.omegas[: rates.gamma.shape[0]]
    g0 = rates.gamma[:, 0]
    lines = np.flatnonzero(g0 > 0)
    amp = np.zeros(grid.shape, dtype=np.complex128)
    for k in lines:
        amp += (g0[k] / w0[k]) / (w0[k] - grid - 1j * scale * rates.gamma_total[k])
    t = grid**2 * np.abs(amp) ** 2
    weights = tuple(integrate_lines(spec, rates, linewidth=linewidth)) if with_lines else ()
    return TransmissionCurve(grid, t, weights)


def integrate_lines(
    spec: DressedSpectrum,
    rates: RateTable,
    linewidth: str = "per_port",
    window: float = LINE_WINDOW,
    levels: int | None = None,
    threshold: float = 1e-14,
) -> list[LineWeight]:
    """Integrated weight of each transmission line, analytic estimate and quadrature.

    The analytic estimate is ``pi G_k0^2 / G_k``.  The numeric value
    integrates line k's own term of the transmission,
    ``w^2 (G_k0/w_k0)^2 / ((w_k0 - w)^2 + G_k^2)``, over ``w_k0 +- window * G_k``.
    The full curve is not used: tails of intense neighbours dominate the
    windows of weak lines.  ``overlapping`` flags windows that intersect
    another line's window.  Lines whose ``G_k0``
    is below ``threshold * max G_k0`` (or zero) are returned with zero
    weight; if ``levels`` is given, every ``k < levels`` is listed.
    """
    scale = _width_scale(linewidth)
    n = rates.gamma.shape[0] if levels is None else min(levels, rates.gamma.shape[0])
    w0 = spec.omegas
    g0 = rates.gamma[:, 0]
    gt = scale * rates.gamma_total
    gmax = float(g0.max()) if g0.size else 0.0
    active = [k for k in range(1, rates.gamma.shape[0]) if gmax > 0 and g0[k] > threshold * gmax]
    listed = range(1, n) if levels is not None else active
    out = []
    for k in listed:
        if k not in active:
            out.append(LineWeight(k, float(w0[k]), float(g0[k]), float(gt[k]), 0.0, 0.0))
            continue
        lo, hi = w0[k] - window * gt[k], w0[k] + window * gt[k]
        overlap = any(
            j != k and (w0[j] + window * gt[j] > lo) and (w0[j] - window * gt[j] < hi) for j in active
        )
        amp = g0[k] / w0[k]

        def line(x, k=k, amp=amp):
            return x * x * amp * amp / ((w0[k] - x) ** 2 + gt[k] ** 2)

        numeric, _ = quad(line, lo, hi, points=[w0[k]], limit=200, epsabs=0.0, epsrel=1e-10)
        out.append(
            LineWeight(
                k=k,
                omega_k0=float(w0[k]),
                gamma_k0=float(g0[k]),
                gamma_k=float(gt[k]),
                analytic=float(math.pi * g0[k] ** 2 / gt[k]),
                numeric=float(numeric),
                overlapping=overlap,
            )
        )
    return out


def dissipator(rho: NDArray[np.complex128], port_rates: list[NDArray[np.float64]]) -> NDArray[np.complex128]:
    """Zero-temperature dressed Lindbladian ``sum_ports sum_{j>k} G_jk D[|k><j|] rho``.

    ``D[O] rho = O rho O^dag - (O^dag O rho + rho O^dag O) / 2``.
    """
    out = np.zeros_like(rho)
    pops = np.real(np.diag(rho))
    for rates in port_rates:
        # |k><j| rho |j><k| feeds population rho_jj into level k.
        out += np.diag(rates.T @ pops)
        decay = rates.sum(axis=1)
        out -= 0.5 * (decay[:, None] * rho + rho * decay[None, :])
    return out


def linear_response_oracle(
    model: BuiltModel,
    alpha: float = DEFAULT_ALPHA,
    omega_grid: ArrayLike = (),
    mode: str | None = None,
    beta: complex = 1.0,
    linewidth: str = "per_port",
    max_dim: int = ORACLE_MAX_DIM,
    spec: DressedSpectrum | None = None,
) -> TransmissionCurve:
    """Transmission from first-order coherences ``rho_n0`` of the driven master equation.

    The drive ``i X g(w) (beta e^{-iwt} - c.c.)`` with ``X = Q`` enters from
    the left port; the coherence decay of each ``|n><0|`` is read off by
    applying :func:`dissipator`; the output voltage on the right port is
    divided by the input voltage.  Impedance prefactors cancel and are set
    to one.
    """
    alpha = _check_alpha(alpha)
    grid = _check_grid(omega_grid)
    if grid[0] <= 0:
        raise ValueError("drive frequencies must be positive")
    dim = model.hamiltonian.shape[0]
    if dim > max_dim:
        raise ValueError(f"model dimension {dim} exceeds oracle limit {max_dim}")
    spec = spec or diagonalize_model(model)
    x = matrix_elements(spec, model.mode(mode or model.modes[0].label).Q).elements
    w = spec.omegas
    wjk = w[:, None] - w[None, :]
    # Per-port rates 2 pi g^2(w_jk) |X_jk|^2, nonzero only for downward j > k.
    per_port = np.tril(2.0 * math.pi * alpha * np.clip(wjk, 0.0, None) * np.abs(x) ** 2, -1)
    per_port *= _width_scale(linewidth)
    ports = [per_port, per_port]
    # L(|n><0|) = lam_n |n><0| for n >= 1, so a single application to the
    # column sum_n |n><0| reads off every coherence decay at once.
    column = np.zeros((dim, dim), dtype=np.complex128)
    column[:, 0] = 1.0
    lam = dissipator(column, ports)[:, 0]
    big_g = math.sqrt(alpha)  # g(w) = G sqrt(w)
    lam_k_phi = 2.0 * math.pi * big_g  # K * Phi_zpf / Lambda with Lambda = 1
    x0 = x[:, 0]
    out = np.empty(grid.shape)
    for idx, om in enumerate(grid):
        g_drive = big_g * math.sqrt(om)
        # (i(w_n0 - w) - lam_n) rho_n0 = g beta X_n0 for n >= 1
        rho = np.zeros(dim, dtype=np.complex128)
        rho[1:] = g_drive * beta * x0[1:] / (1j * (w[1:] - om) - lam[1:])
        v_out = 1j * lam_k_phi * om * np.sum(np.conj(x0) * rho)
        v_in = -1j * math.sqrt(om) * beta
        out[idx] = abs(v_out / v_in) ** 2
    return TransmissionCurve(grid, out)
