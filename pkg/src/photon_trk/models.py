"""Catalogued light-matter Hamiltonians on truncated Hilbert spaces.

All quantities use hbar = 1 and are expressed in units of the model's
reference frequency (``omega_c`` for single-cavity models, the qubit
reference frequency for the two-resonator converter).

Operator powers and trigonometric functions of the field coordinate are
evaluated in a workspace enlarged by ``workspace_pad`` Fock states and then
projected back, so truncation-edge corruption of ``(a + a^dag)^k`` or
``cos(c (a + a^dag))`` stays out of the kept levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import fock
from .fock import HilbertSpace
from .linalg import ComplexMatrix, apply_function, check_hermitian, kron

DEFAULT_WORKSPACE_PAD = 20


class ModelError(ValueError):
    """A model definition is incomplete or outside its physical domain."""


@dataclass(frozen=True)
class KindSpec:
    params: tuple[str, ...]
    truncations: tuple[str, ...]
    defaults: Mapping[str, float]
    default_truncations: Mapping[str, int]
    positive: tuple[str, ...] = ()
    nonnegative: tuple[str, ...] = ()


_SINGLE = ("n_fock",)

KINDS: dict[str, KindSpec] = {
    "rabi_coulomb": KindSpec(
        params=("omega_c", "omega_0", "eta"),
        truncations=_SINGLE,
        defaults={"omega_c": 1.0, "omega_0": 1.0, "eta": 0.5},
        default_truncations={"n_fock": 60},
        positive=("omega_c", "omega_0"),
        nonnegative=("eta",),
    ),
    "jaynes_cummings": KindSpec(
        params=("omega_c", "omega_0", "eta"),
        truncations=_SINGLE,
        defaults={"omega_c": 1.0, "omega_0": 1.0, "eta": 0.5},
        default_truncations={"n_fock": 60},
        positive=("omega_c", "omega_0"),
        nonnegative=("eta",),
    ),
    "nonlinear_resonator": KindSpec(
        params=("omega_c", "eta"),
        truncations=_SINGLE,
        defaults={"omega_c": 1.0, "eta": 0.12},
        default_truncations={"n_fock": 50},
        positive=("omega_c",),
        nonnegative=("eta",),
    ),
    "kerr_resonator": KindSpec(
        params=("omega_c", "chi"),
        truncations=_SINGLE,
        defaults={"omega_c": 1.0, "chi": 0.1},
        default_truncations={"n_fock": 30},
        positive=("omega_c",),
    ),
    "two_resonator_qubit": KindSpec(
        params=("omega_a", "omega_b", "omega_0", "g_a", "g_b", "theta"),
        truncations=("n_a", "n_b"),
        defaults={
            "omega_a": 3.0,
            "omega_b": 2.0,
            "omega_0": 1.0,
            "g_a": 0.2,
            "g_b": 0.2,
            "theta": math.pi / 6,
        },
        default_truncations={"n_a": 8, "n_b": 8},
        positive=("omega_a", "omega_b", "omega_0"),
    ),
    "dipole_gauge_atom": KindSpec(
        params=("mass", "charge", "omega_0", "omega_c", "A_0"),
        truncations=("n_particle", "n_cavity"),
        # q * omega_c * A_0 * x_zpf = 0.3 omega_0 with x_zpf = 1/sqrt(2 m omega_0)
        defaults={
            "mass": 1.0,
            "charge": 1.0,
            "omega_0": 1.0,
            "omega_c": 1.0,
            "A_0": 0.3 * math.sqrt(2.0),
        },
        default_truncations={"n_particle": 30, "n_cavity": 30},
        positive=("mass", "omega_0", "omega_c"),
    ),
    "optomech_standard": KindSpec(
        params=("omega_c", "omega_mech", "g"),
        truncations=("n_cavity", "n_mech"),
        defaults={"omega_c": 1.0, "omega_mech": 2.0, "g": 0.05},
        default_truncations={"n_cavity": 30, "n_mech": 30},
        positive=("omega_c", "omega_mech"),
    ),
    "optomech_law": KindSpec(
        params=("omega_c", "omega_mech", "g"),
        truncations=("n_cavity", "n_mech"),
        defaults={"omega_c": 1.0, "omega_mech": 2.0, "g": 0.05},
        default_truncations={"n_cavity": 30, "n_mech": 30},
        positive=("omega_c", "omega_mech"),
    ),
}


@dataclass(frozen=True)
class ModelDefinition:
    kind: str
    params: Mapping[str, float]
    truncations: Mapping[str, int]
    workspace_pad: int = DEFAULT_WORKSPACE_PAD

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "truncations", dict(self.truncations))
        check_definition(self)
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})

    def replace(self, **params: float) -> "ModelDefinition":
        """Copy with some physical parameters changed."""
        return ModelDefinition(self.kind, {**self.params, **params}, self.truncations, self.workspace_pad)

    def with_truncations(self, **truncations: int) -> "ModelDefinition":
        return ModelDefinition(self.kind, self.params, {**self.truncations, **truncations}, self.workspace_pad)


def check_definition(defn: ModelDefinition) -> None:
    spec = KINDS.get(defn.kind)
    if spec is None:
        raise ModelError(f"unknown model kind {defn.kind!r}; valid kinds: {', '.join(sorted(KINDS))}")
    missing = [p for p in spec.params if p not in defn.params]
    extra = [p for p in defn.params if p not in spec.params]
    if missing:
        raise ModelError(f"{defn.kind}: missing parameters {missing}")
    if extra:
        raise ModelError(f"{defn.kind}: unknown parameters {extra}; expected {list(spec.params)}")
    for name, value in defn.params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ModelError(f"{defn.kind}: parameter {name} must be a finite number, got {value!r}")
    for name in spec.positive:
        if defn.params[name] <= 0:
            raise ModelError(f"{defn.kind}: parameter {name} must be > 0, got {defn.params[name]!r}")
    for name in spec.nonnegative:
        if defn.params[name] < 0:
            raise ModelError(f"{defn.kind}: parameter {name} must be >= 0, got {defn.params[name]!r}")
    missing = [t for t in spec.truncations if t not in defn.truncations]
    extra = [t for t in defn.truncations if t not in spec.truncations]
    if missing:
        raise ModelError(f"{defn.kind}: missing truncations {missing}")
    if extra:
        raise ModelError(f"{defn.kind}: unknown truncations {extra}; expected {list(spec.truncations)}")
    for name, value in defn.truncations.items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 2:
            raise ModelError(f"{defn.kind}: truncation {name} must be an integer >= 2, got {value!r}")
    pad = defn.workspace_pad
    if isinstance(pad, bool) or not isinstance(pad, int) or pad < 0:
        raise ModelError(f"workspace_pad must be a non-negative integer, got {pad!r}")


def catalog_default(kind: str) -> ModelDefinition:
    spec = KINDS.get(kind)
    if spec is None:
        raise ModelError(f"unknown model kind {kind!r}; valid kinds: {', '.join(sorted(KINDS))}")
    return ModelDefinition(kind, dict(spec.defaults), dict(spec.default_truncations))


@dataclass(frozen=True)
class Mode:
    """A bosonic field mode: its quadratures embedded in the full space and its bare frequency."""

    label: str
    Q: ComplexMatrix
    P: ComplexMatrix
    omega: float


@dataclass(frozen=True)
class BuiltModel:
    definition: ModelDefinition
    hamiltonian: ComplexMatrix
    space: HilbertSpace
    modes: tuple[Mode, ...]
    extra_ops: Mapping[str, ComplexMatrix] = field(default_factory=dict)
    # First-order interaction operator; selects the basis inside degenerate levels.
    perturbation: ComplexMatrix | None = None

    def mode(self, label: str) -> Mode:
        for m in self.modes:
            if m.label == label:
                return m
        raise KeyError(f"model {self.definition.kind} has no mode {label!r}; modes: {[m.label for m in self.modes]}")


def padded_function(n: int, pad: int, f: Callable[[np.ndarray], np.ndarray]) -> ComplexMatrix:
    """``f(a + a^dag)`` computed on ``n + pad`` Fock states, projected to the lowest ``n``."""
    x = fock.position(n + pad)
    return apply_function(x, f)[:n, :n]


def padded_power(n: int, pad: int, power: int) -> ComplexMatrix:
    x = fock.position(n + pad)
    return np.linalg.matrix_power(x, power)[:n, :n]


def _mode(label: str, n: int, space: HilbertSpace, position: int, omega: float) -> Mode:
    q, p = fock.quadratures(n)
    return Mode(label, fock.embed(q, space, position), fock.embed(p, space, position), float(omega))


def _finish(defn, h, space, modes, extra=None, perturbation=None) -> BuiltModel:
    h = check_hermitian(h)
    return BuiltModel(defn, h, space, tuple(modes), dict(extra or {}), perturbation)


def _expect(defn: ModelDefinition, *kinds: str) -> None:
    if defn.kind not in kinds:
        raise ModelError(f"builder for {kinds} got a {defn.kind!r} definition")


def build_rabi_coulomb(defn: ModelDefinition) -> BuiltModel:
    _expect(defn, "rabi_coulomb")
    p = defn.params
    wc, w0, eta = p["omega_c"], p["omega_0"], p["eta"]
    if eta < 0:
        raise ModelError("eta must be >= 0")
    n, pad = defn.truncations["n_fock"], defn.workspace_pad
    space = HilbertSpace((n, 2))
    c = padded_function(n, pad, lambda x: np.cos(2 * eta * x))
    s = padded_function(n, pad, lambda x: np.sin(2 * eta * x))
    sz, sy = fock.pauli("z"), fock.pauli("y")
    h = wc * kron(fock.number(n), np.eye(2)) + 0.5 * w0 * (kron(c, sz) + kron(s, sy))
    # d H / d eta
    dc = padded_function(n, pad, lambda x: -2 * x * np.sin(2 * eta * x))
    ds = padded_function(n, pad, lambda x: 2 * x * np.cos(2 * eta * x))
    dh = 0.5 * w0 * (kron(dc, sz) + kron(ds, sy))
    parity = kron(fock.photon_parity(n), sz)
    return _finish(defn, h, space, [_mode("a", n, space, 0, wc)], {"parity": parity}, dh)


def build_jaynes_cummings(defn: ModelDefinition) -> BuiltModel:
    _expect(defn, "jaynes_cummings")
    p = defn.params
    wc, w0, eta = p["omega_c"], p["omega_0"], p["eta"]
    if eta < 0:
        raise ModelError("eta must be >= 0")
    n = defn.truncations["n_fock"]
    space = HilbertSpace((n, 2))
    a = fock.annihilation(n)
    hop = kron(a, fock.pauli("plus"))
    v = wc * (hop + hop.conj().T)
    h = wc * kron(fock.number(n), np.eye(2)) + 0.5 * w0 * kron(np.eye(n), fock.pauli("z")) + eta * v
    parity = kron(fock.photon_parity(n), fock.pauli("z"))
    return _finish(defn, h, space, [_mode("a", n, space, 0, wc)], {"parity": parity}, v)


def build_nonlinear_resonator(defn: ModelDefinition) -> BuiltModel:
    _expect(defn, "nonlinear_resonator")
    wc, eta = defn.params["omega_c"], defn.params["eta"]
    n, pad = defn.truncations["n_fock"], defn.workspace_pad
    space = HilbertSpace((n,))
    v = wc * (padded_power(n, pad, 3) + 0.1 * padded_power(n, pad, 4))
    h = wc * fock.number(n) + eta * v
    return _finish(defn, h, space, [_mode("a", n, space, 0, wc)], {}, v)


def build_kerr_resonator(defn: ModelDefinition) -> BuiltModel:
    _expect(defn, "kerr_resonator")
    wc, chi = defn.params["omega_c"], defn.params["chi"]
    n = defn.truncations["n_fock"]
    space = HilbertSpace((n,))
    a = fock.annihilation(n)
    ad = a.conj().T
    v = ad @ ad @ a @ a
    h = wc * fock.number(n) + chi * v
    return _finish(defn, h, space, [_mode("a", n, space, 0, wc)], {}, v)


def build_two_resonator_qubit(defn: ModelDefinition) -> BuiltModel:
    _expect(defn, "two_resonator_qubit")
    p = defn.params
    na, nb = defn.truncations["n_a"], defn.truncations["n_b"]
    space = HilbertSpace((na, nb, 2))
    xa = fock.embed(fock.position(na), space, 0)
    xb = fock.embed(fock.position(nb), space, 1)
    qubit = math.cos(p["theta"]) * fock.pauli("x") + math.sin(p["theta"]) * fock.pauli("z")
    q = fock.embed(qubit, space, 2)
    h = (
        p["omega_a"] * fock.embed(fock.number(na), space, 0)
        + p["omega_b"] * fock.embed(fock.number(nb), space, 1)
        + 0.5 * p["omega_0"] * fock.embed(fock.pauli("z"), space, 2)
        + (p["g_a"] * xa + p["g_b"] * xb) @ q
    )
    modes = [_mode("a", na, space, 0, p["omega_a"]), _mode("b", nb, space, 1, p["omega_b"])]
    return _finish(defn, h, space, modes, {}, (xa + xb) @ q)


def build_dipole_gauge_atom(defn: ModelDefinition) -> BuiltModel:
    """Harmonically bound charge coupled to one cavity mode in the dipole gauge.

    The particle is expanded in its bare oscillator basis,
    ``x = (b + b^dag)/sqrt(2 m w0)``, ``p = i sqrt(m w0 / 2)(b^dag - b)``.
    The cavity's own energy ``omega_c a^dag a`` is included; without it the
    spectrum has no truncation limit.
    """
    _expect(defn, "dipole_gauge_atom")
    p = defn.params
    m, q, w0, wc, a0 = p["mass"], p["charge"], p["omega_0"], p["omega_c"], p["A_0"]
    if m <= 0 or w0 <= 0:
        raise ModelError("mass and omega_0 must be > 0")
    n_p, n_c, pad = defn.truncations["n_particle"], defn.truncations["n_cavity"], defn.workspace_pad
    space = HilbertSpace((n_p, n_c))
    x_zpf = 1.0 / math.sqrt(2.0 * m * w0)
    p_zpf = math.sqrt(m * w0 / 2.0)
    b = fock.annihilation(n_p)
    x = x_zpf * (b + b.conj().T)
    mom = 1j * p_zpf * (b.conj().T - b)
    bw = fock.annihilation(n_p + pad)
    xw = x_zpf * (bw + bw.conj().T)
    pw = 1j * p_zpf * (bw.conj().T - bw)
    x2 = (xw @ xw)[:n_p, :n_p]
    p2 = (pw @ pw)[:n_p, :n_p]
    a = fock.annihilation(n_c)
    field_p = a.conj().T - a
    h_particle = p2 / (2 * m) + 0.5 * m * w0**2 * x2 + q**2 * wc * a0**2 * x2
    h = (
        fock.embed(h_particle, space, 0)
        + wc * fock.embed(fock.number(n_c), space, 1)
        + 1j * q * wc * a0 * kron(x, field_p)
    )
    dh = 2 * q**2 * wc * a0 * fock.embed(x2, space, 0) + 1j * q * wc * kron(x, field_p)
    extra = {"x": fock.embed(x, space, 0), "p": fock.embed(mom, space, 0)}
    return _finish(defn, h, space, [_mode("a", n_c, space, 1, wc)], extra, dh)


def build_optomech(defn: ModelDefinition, variant: str | None = None) -> BuiltModel:
    """Cavity plus mechanical oscillator with radiation-pressure coupling.

    ``standard``: ``g a^dag a (b + b^dag)``; ``law``: ``g (a + a^dag)^2 (b + b^dag)``.
    """
    _expect(defn, "optomech_standard", "optomech_law")
    implied = defn.kind.removeprefix("optomech_")
    variant = variant or implied
    if variant not in ("standard", "law"):
        raise ModelError(f"unknown optomechanical variant {variant!r}")
    if variant != implied:
        raise ModelError(f"variant {variant!r} does not match kind {defn.kind!r}")
    p = defn.params
    nc, nm, pad = defn.truncations["n_cavity"], defn.truncations["n_mech"], defn.workspace_pad
    space = HilbertSpace((nc, nm))
    cav = fock.number(nc) if variant == "standard" else padded_power(nc, pad, 2)
    v = kron(cav, fock.position(nm))
    h = (
        p["omega_c"] * fock.embed(fock.number(nc), space, 0)
        + p["omega_mech"] * fock.embed(fock.number(nm), space, 1)
        + p["g"] * v
    )
    modes = [_mode("a", nc, space, 0, p["omega_c"]), _mode("b", nm, space, 1, p["omega_mech"])]
    return _finish(defn, h, space, modes, {}, v)


_BUILDERS: dict[str, Callable[[ModelDefinition], BuiltModel]] = {
    "rabi_coulomb": build_rabi_coulomb,
    "jaynes_cummings": build_jaynes_cummings,
    "nonlinear_resonator": build_nonlinear_resonator,
    "kerr_resonator": build_kerr_resonator,
    "two_resonator_qubit": build_two_resonator_qubit,
    "dipole_gauge_atom": build_dipole_gauge_atom,
    "optomech_standard": build_optomech,
    "optomech_law": build_optomech,
}


def build(defn: ModelDefinition) -> BuiltModel:
    return _BUILDERS[defn.kind](defn)
