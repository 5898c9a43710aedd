"""Dense complex matrix helpers and a Hermitian eigensolver with a fixed phase convention.

Operators are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

ComplexMatrix = NDArray[np.complex128]

HERMITIAN_RTOL = 1e-12
UNITARITY_TOL = 1e-10
RECONSTRUCTION_RTOL = 1e-9


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class ConvergenceError(ArithmeticError):
    """The eigensolver did not produce an accurate decomposition."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching eigenvectors (as columns)."""

    values: NDArray[np.float64]
    vectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return len(self.values)


def as_matrix(a: ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _require_square(m: ComplexMatrix) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is not square: shape {m.shape}")


def hermiticity_error(m: ArrayLike) -> float:
    """Largest |M_ij - conj(M_ji)|."""
    m = as_matrix(m)
    _require_square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m: ArrayLike, rtol: float = HERMITIAN_RTOL) -> bool:
    m = as_matrix(m)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    return hermiticity_error(m) <= rtol * (1.0 + scale)


def check_hermitian(m: ArrayLike, rtol: float = HERMITIAN_RTOL) -> ComplexMatrix:
    m = as_matrix(m)
    _require_square(m)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    err = hermiticity_error(m)
    if err > rtol * (1.0 + scale):
        raise NotHermitianError(
            f"Hermiticity violated: max|M - M^dagger| = {err:.3e} "
            f"exceeds {rtol:g} * (1 + {scale:.3e})"
        )
    return m


def fix_phases(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so its largest-magnitude entry is real and non-negative.

    Entries within a relative 1e-10 of the column maximum count as ties; the
    lowest index among them wins, which keeps the choice stable against
    rounding noise.
    """
    v = np.array(vectors, dtype=np.complex128, copy=True)
    if v.size == 0:
        return v
    mags = np.abs(v)
    colmax = mags.max(axis=0)
    pivot = np.argmax(mags >= colmax * (1.0 - 1e-10), axis=0)
    ref = v[pivot, np.arange(v.shape[1])]
    phase = np.ones_like(ref)
    nz = np.abs(ref) > 0
    phase[nz] = np.abs(ref[nz]) / ref[nz]
    v *= phase[np.newaxis, :]
    # Exact zero imaginary part on the pivot entry.
    cols = np.arange(v.shape[1])
    v[pivot, cols] = np.abs(v[pivot, cols])
    return v


def hermitian_eig(m: ArrayLike, check: bool = True) -> EigenSystem:
    """Diagonalize a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix.
    check : bool
        Verify unitarity and reconstruction of the result and raise
        :class:`ConvergenceError` when either fails.

    Returns
    -------
    EigenSystem
        Ascending eigenvalues; eigenvectors with the phase convention of
        :func:`fix_phases`.
    """
    m = as_matrix(m)
    if m.size == 0:
        raise DimensionError("cannot diagonalize an empty matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    m = check_hermitian(m)
    # LAPACK reads only one triangle; symmetrize so both halves agree.
    h = 0.5 * (m + m.conj().T)
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed to converge: {exc}") from exc
    vectors = fix_phases(vectors)
    if check and len(values):
        unit = float(np.max(np.abs(vectors.conj().T @ vectors - np.eye(len(values)))))
        if unit > UNITARITY_TOL:
            raise ConvergenceError(f"eigenvectors not unitary (max dev {unit:.3e})", unit)
        resid = float(np.max(np.abs(h @ vectors - vectors * values[np.newaxis, :])))
        bound = RECONSTRUCTION_RTOL * (1.0 + float(np.max(np.abs(values))))
        if resid > bound:
            raise ConvergenceError(
                f"reconstruction residual {resid:.3e} exceeds {bound:.3e}", resid
            )
    return EigenSystem(values=np.asarray(values, dtype=float), vectors=vectors)


def degenerate_clusters(values: NDArray[np.float64], rtol: float = 1e-9) -> list[range]:
    """Index ranges of consecutive eigenvalues closer than ``rtol * (1 + max|values|)``."""
    if len(values) == 0:
        return []
    tol = rtol * (1.0 + float(np.max(np.abs(values))))
    clusters = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > tol:
            if k - start > 1:
                clusters.append(range(start, k))
            start = k
    return clusters


def resolve_degeneracies(
    eig: EigenSystem, perturbation: ArrayLike, rtol: float = 1e-9
) -> EigenSystem:
    """Fix the basis inside each degenerate eigenspace by diagonalizing ``perturbation`` there.

    Within a cluster the vectors are ordered by ascending perturbation
    eigenvalue, which is the energy order an infinitesimal step along the
    perturbation would produce.
    """
    w = as_matrix(perturbation)
    clusters = degenerate_clusters(eig.values, rtol)
    if not clusters:
        return eig
    vectors = eig.vectors.copy()
    for c in clusters:
        block = vectors[:, c.start:c.stop]
        sub = block.conj().T @ w @ block
        sub = 0.5 * (sub + sub.conj().T)
        _, u = np.linalg.eigh(sub)
        vectors[:, c.start:c.stop] = fix_phases(block @ u)
    return EigenSystem(values=eig.values, vectors=vectors)


_FUNCTIONS: dict[str, Callable[[NDArray[np.float64]], NDArray[np.float64]]] = {
    "cosine": np.cos,
    "sine": np.sin,
}


def apply_function(m: ArrayLike, f: Callable[[NDArray[np.float64]], ArrayLike]) -> ComplexMatrix:
    """V f(diag) V^dagger for Hermitian ``m`` and a scalar function ``f``."""
    eig = hermitian_eig(m)
    fv = np.asarray(f(eig.values), dtype=np.complex128)
    return (eig.vectors * fv[np.newaxis, :]) @ eig.vectors.conj().T


def hermitian_function(m: ArrayLike, kind: str) -> ComplexMatrix:
    """Operator cosine or sine of a Hermitian matrix (``kind`` is ``"cosine"`` or ``"sine"``)."""
    try:
        f = _FUNCTIONS[kind]
    except KeyError:
        raise ValueError(f"unknown function kind {kind!r}; expected one of {sorted(_FUNCTIONS)}") from None
    return apply_function(m, f)


def matmul(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a: ArrayLike) -> ComplexMatrix:
    return as_matrix(a).conj().T.copy()


def kron(*ops: ArrayLike) -> ComplexMatrix:
    if not ops:
        raise DimensionError("kron needs at least one operand")
    out = as_matrix(ops[0])
    for op in ops[1:]:
        out = np.kron(out, as_matrix(op))
    return out


def commutator(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    return matmul(a, b) - matmul(b, a)
