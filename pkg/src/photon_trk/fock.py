"""Truncated bosonic and two-level operators, and their embedding in product spaces.

Qubit basis ordering is (ground, excited) everywhere, with ``sigma_z = diag(-1, +1)``.
Composite basis states are stored in mixed-radix order over ``subsystem_dims``
with the last subsystem varying fastest.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .linalg import ComplexMatrix, DimensionError, as_matrix


@dataclass(frozen=True)
class HilbertSpace:
    subsystem_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.subsystem_dims)
        if not dims:
            raise ValueError("a Hilbert space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.subsystem_dims)

    def digits(self, index: int) -> tuple[int, ...]:
        """Decode a basis index into per-subsystem quantum numbers."""
        if not 0 <= index < self.total_dim:
            raise IndexError(f"basis index {index} out of range")
        out = []
        for d in reversed(self.subsystem_dims):
            index, r = divmod(index, d)
            out.append(r)
        return tuple(reversed(out))

    def index(self, digits: tuple[int, ...]) -> int:
        if len(digits) != len(self.subsystem_dims):
            raise DimensionError("digit count does not match subsystem count")
        idx = 0
        for q, d in zip(digits, self.subsystem_dims):
            if not 0 <= q < d:
                raise IndexError(f"quantum number {q} out of range for dimension {d}")
            idx = idx * d + q
        return idx


def _check_truncation(n: int) -> int:
    if int(n) != n or n < 2:
        raise ValueError(f"Fock truncation must be an integer >= 2, got {n!r}")
    return int(n)


def annihilation(n: int) -> ComplexMatrix:
    n = _check_truncation(n)
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(np.complex128)


def creation(n: int) -> ComplexMatrix:
    return annihilation(n).conj().T.copy()


def number(n: int) -> ComplexMatrix:
    n = _check_truncation(n)
    return np.diag(np.arange(n, dtype=float)).astype(np.complex128)


def quadratures(n: int) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Field coordinate ``(a + a^dag)/sqrt(2)`` and momentum ``i(a^dag - a)/sqrt(2)``."""
    a = annihilation(n)
    ad = a.conj().T
    return (a + ad) / np.sqrt(2.0), 1j * (ad - a) / np.sqrt(2.0)


def position(n: int) -> ComplexMatrix:
    """``a + a^dag`` (not normalized by sqrt(2))."""
    a = annihilation(n)
    return a + a.conj().T


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    # sigma_y = -i(sigma_+ - sigma_-) in the (g, e) ordering.
    "y": np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
    "z": np.array([[-1, 0], [0, 1]], dtype=np.complex128),
    # sigma_+ |g> = |e>
    "plus": np.array([[0, 0], [1, 0]], dtype=np.complex128),
    "minus": np.array([[0, 1], [0, 0]], dtype=np.complex128),
}


def pauli(which: str) -> ComplexMatrix:
    try:
        return _PAULI[which].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli operator {which!r}; expected one of {sorted(_PAULI)}") from None


def embed(op, space: HilbertSpace, position: int) -> ComplexMatrix:
    """``I x ... x op x ... x I`` with ``op`` acting on subsystem ``position``."""
    op = as_matrix(op)
    dims = space.subsystem_dims
    if not 0 <= position < len(dims):
        raise IndexError(f"position {position} out of range for {len(dims)} subsystems")
    if op.shape != (dims[position], dims[position]):
        raise DimensionError(
            f"operator shape {op.shape} does not match subsystem dimension {dims[position]}"
        )
    left = prod(dims[:position])
    right = prod(dims[position + 1:])
    out = op
    if left > 1:
        out = np.kron(np.eye(left), out)
    if right > 1:
        out = np.kron(out, np.eye(right))
    return out.astype(np.complex128, copy=False)


def photon_parity(n: int) -> ComplexMatrix:
    n = _check_truncation(n)
    return np.diag((-1.0) ** np.arange(n)).astype(np.complex128)


def project(op, space: HilbertSpace, keep: tuple[int, ...]) -> ComplexMatrix:
    """Restrict ``op`` to basis states whose digits satisfy ``digit[i] < keep[i]``."""
    op = as_matrix(op)
    if op.shape != (space.total_dim, space.total_dim):
        raise DimensionError("operator does not act on the given space")
    if len(keep) != len(space.subsystem_dims):
        raise DimensionError("keep must name one dimension per subsystem")
    grids = np.indices(space.subsystem_dims).reshape(len(keep), -1)
    mask = np.all(grids < np.asarray(keep)[:, None], axis=0)
    idx = np.flatnonzero(mask)
    return op[np.ix_(idx, idx)]
