"""Dressed-state matrix elements and the field/atomic sum rules built from them.

Conventions: levels are labelled by ascending energy, ``omega_ij = omega_i - omega_j``,
and matrix elements are ``O_ij = <psi_i| O |psi_j>``.  Every sum over
intermediate states runs over all levels of the truncated space; the
``keep``/``levels`` arguments only choose how many rows are reported.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .linalg import DimensionError, EigenSystem, as_matrix, hermitian_eig, resolve_degeneracies
from .models import BuiltModel

ZERO_FREQUENCY_RTOL = 1e-9


class DegenerateTransitionWarning(UserWarning):
    """A zero-frequency transition with non-zero momentum element was left out of a sum."""


@dataclass(frozen=True)
class DressedSpectrum:
    omegas: NDArray[np.float64]
    basis: EigenSystem

    @property
    def dim(self) -> int:
        return len(self.omegas)

    def transition_matrix(self, k: int | None = None) -> NDArray[np.float64]:
        """``omega_i - omega_j`` over the lowest ``k`` levels."""
        w = self.omegas[: k or self.dim]
        return w[:, None] - w[None, :]


@dataclass(frozen=True)
class MatrixElementTable:
    operator_label: str
    elements: NDArray[np.complex128]

    @property
    def size(self) -> int:
        return self.elements.shape[0]


def diagonalize_model(model: BuiltModel, keep: int | None = None, resolve: bool = True) -> DressedSpectrum:
    """Diagonalize the model Hamiltonian and return frequencies relative to the ground state.

    When ``resolve`` is set and the model carries a first-order interaction
    operator, degenerate levels are rotated to diagonalize it (see
    :func:`photon_trk.linalg.resolve_degeneracies`).
    """
    dim = model.hamiltonian.shape[0]
    if keep is not None and not 1 <= keep <= dim:
        raise ValueError(f"keep={keep} must lie in [1, {dim}]")
    eig = hermitian_eig(model.hamiltonian)
    if resolve and model.perturbation is not None:
        eig = resolve_degeneracies(eig, model.perturbation)
    return DressedSpectrum(omegas=eig.values - eig.values[0], basis=eig)


def matrix_elements(
    spec: DressedSpectrum, op: ArrayLike, keep: int | None = None, label: str = ""
) -> MatrixElementTable:
    op = as_matrix(op)
    if op.shape != (spec.dim, spec.dim):
        raise DimensionError(f"operator shape {op.shape} does not match spectrum dimension {spec.dim}")
    v = spec.basis.vectors[:, : keep or spec.dim]
    return MatrixElementTable(label, v.conj().T @ op @ v)


def _elements(table) -> NDArray[np.complex128]:
    if isinstance(table, MatrixElementTable):
        return table.elements
    return as_matrix(table)


def quadrature_relation_residual(spec: DressedSpectrum, q_table, p_table, omega_m: float) -> NDArray[np.float64]:
    """``R_ij = |omega_m P_ij - i omega_ij Q_ij|``; zero when the interaction commutes with Q."""
    q, p = _elements(q_table), _elements(p_table)
    if q.shape != p.shape:
        raise DimensionError(f"Q table {q.shape} and P table {p.shape} differ")
    w = spec.transition_matrix(q.shape[0])
    return np.abs(omega_m * p - 1j * w * q)


def oscillator_strengths(spec: DressedSpectrum, q_table, omega_m: float, ref: int = 0) -> NDArray[np.float64]:
    """``F_ik = 2 (omega_k - omega_i)/omega_m |Q_ik|^2``; negative for levels below ``ref``."""
    q = _elements(q_table)
    if not 0 <= ref < q.shape[0]:
        raise IndexError(f"reference state {ref} outside table of size {q.shape[0]}")
    w = spec.omegas[: q.shape[0]]
    return 2.0 * (w - w[ref]) / omega_m * np.abs(q[ref]) ** 2


def partial_sums(f: ArrayLike) -> NDArray[np.float64]:
    return np.cumsum(np.asarray(f, dtype=float))


def generalized_trk_matrix(spec: DressedSpectrum, q_table, omega_m: float, k: int) -> NDArray[np.complex128]:
    """``G_ij = sum_k (omega_ki + omega_kj)/omega_m Q_ik Q_kj`` for ``i, j < k``.

    ``q_table`` should span all levels; it supplies the intermediate states.
    """
    q = _elements(q_table)
    n = q.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"block size {k} must lie in [1, {n}]")
    w = spec.omegas[:n]
    left = q[:k, :]
    right = q[:, :k]
    weighted = (left * w[None, :]) @ right
    plain = left @ right
    wi = w[:k]
    return (2.0 * weighted - (wi[:, None] + wi[None, :]) * plain) / omega_m


def _momentum_terms(spec: DressedSpectrum, p_table, omega_m: float, ref: int):
    p = _elements(p_table)
    if not 0 <= ref < p.shape[0]:
        raise IndexError(f"reference state {ref} outside table of size {p.shape[0]}")
    w = spec.omegas[: p.shape[0]] - spec.omegas[ref]
    tol = ZERO_FREQUENCY_RTOL * (1.0 + float(np.max(np.abs(spec.omegas))))
    zero = np.abs(w) <= tol
    mag2 = np.abs(p[ref]) ** 2
    degenerate = [int(k) for k in np.flatnonzero(zero) if np.sqrt(mag2[k]) > 1e-10]
    terms = np.zeros_like(w)
    terms[~zero] = mag2[~zero] / w[~zero]
    return 2.0 * omega_m * float(terms.sum()), degenerate


def momentum_sum_rule(spec: DressedSpectrum, p_table, omega_m: float, ref: int = 0) -> float:
    """``2 omega_m sum_k |P_ik|^2 / omega_ki``.

    Zero-frequency transitions are excluded; any of them carrying
    ``|P_ik| > 1e-10`` triggers a :class:`DegenerateTransitionWarning`.
    """
    total, degenerate = _momentum_terms(spec, p_table, omega_m, ref)
    if degenerate:
        warnings.warn(
            f"zero-frequency transitions {degenerate} from level {ref} carry non-zero momentum "
            "elements and were excluded",
            DegenerateTransitionWarning,
            stacklevel=2,
        )
    return total


def atomic_trk(spec: DressedSpectrum, x_table, mass: float, ref: int = 0) -> float:
    """``2 m sum_k omega_kj |x_kj|^2`` from reference level ``j = ref``."""
    x = _elements(x_table)
    w = spec.omegas[: x.shape[0]]
    return float(2.0 * mass * np.sum((w - w[ref]) * np.abs(x[:, ref]) ** 2))


@dataclass(frozen=True)
class Channel:
    """A coordinate/momentum pair obeying ``mu * P_ij = i omega_ij Q_ij`` when the rule holds.

    For a field mode ``mu`` is the mode frequency; for a particle coordinate it is ``1/m``.
    """

    label: str
    Q: NDArray[np.complex128]
    P: NDArray[np.complex128]
    mu: float


def channel(model: BuiltModel, name: str) -> Channel:
    if name == "x":
        if "x" not in model.extra_ops:
            raise KeyError(f"model {model.definition.kind} exposes no particle coordinate")
        mass = model.definition.params["mass"]
        return Channel("x", model.extra_ops["x"], model.extra_ops["p"], 1.0 / mass)
    mode = model.mode(name)
    return Channel(mode.label, mode.Q, mode.P, mode.omega)


def default_channel(model: BuiltModel) -> str:
    return "x" if model.definition.kind == "dipole_gauge_atom" else model.modes[0].label


@dataclass(frozen=True)
class SumRuleReport:
    mode_label: str
    reference_state: int
    omegas: NDArray[np.float64]
    abs_q_sq: NDArray[np.float64]
    abs_p_sq: NDArray[np.float64]
    F_terms: NDArray[np.float64]
    partial_sums: NDArray[np.float64]
    quad_residual: NDArray[np.float64]
    total: float
    momentum_total: float
    quadrature_residual_max: float
    generalized_identity_deviation: float
    degenerate_momentum_terms: tuple[int, ...] = ()

    @property
    def levels(self) -> int:
        return len(self.omegas)


def sum_rule_report(
    model: BuiltModel,
    spec: DressedSpectrum | None = None,
    mode: str | None = None,
    ref: int = 0,
    levels: int = 10,
) -> SumRuleReport:
    """Evaluate the quadrature relation and the sum rule of one channel from level ``ref``.

    ``levels`` is the display window; totals use every level of the space.
    """
    spec = spec or diagonalize_model(model)
    ch = channel(model, mode or default_channel(model))
    levels = min(levels, spec.dim)
    if not 0 <= ref < levels:
        raise IndexError(f"reference state {ref} outside display window of {levels} levels")
    q = matrix_elements(spec, ch.Q, label=f"Q_{ch.label}").elements
    p = matrix_elements(spec, ch.P, label=f"P_{ch.label}").elements
    f_all = oscillator_strengths(spec, q, ch.mu, ref)
    resid = quadrature_relation_residual(spec, q, p, ch.mu)
    g = generalized_trk_matrix(spec, q, ch.mu, levels)
    mom, degenerate = _momentum_terms(spec, p, ch.mu, ref)
    f = f_all[:levels]
    return SumRuleReport(
        mode_label=ch.label,
        reference_state=ref,
        omegas=spec.omegas[:levels].copy(),
        abs_q_sq=np.abs(q[ref, :levels]) ** 2,
        abs_p_sq=np.abs(p[ref, :levels]) ** 2,
        F_terms=f,
        partial_sums=partial_sums(f),
        quad_residual=resid[ref, :levels],
        total=float(f_all.sum()),
        momentum_total=mom,
        quadrature_residual_max=float(resid[:levels, :levels].max()),
        generalized_identity_deviation=float(np.max(np.abs(g - np.eye(levels)))),
        degenerate_momentum_terms=tuple(degenerate),
    )
