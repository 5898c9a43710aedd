"""Reader and validator for model-definition files.

Grammar, one construct per line (surrounding whitespace ignored)::

    # comment            whole-line comments only
    [section]            section header, name matches [A-Za-z_][A-Za-z0-9_]*
    key = value          key matches the same pattern; value is non-empty

Values that match ``[+-]?digits`` are integers, values matching a decimal
with optional exponent are floats, anything else is a string.  A ``#``
inside a value is an error.  See ``docs/model_format.md``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .models import DEFAULT_WORKSPACE_PAD, KINDS, ModelDefinition, ModelError
from .response import DEFAULT_ALPHA, LINEWIDTHS

Scalar = str | int | float

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_SECTION_RE = re.compile(rf"^\[\s*({_NAME})\s*\]$")
_ENTRY_RE = re.compile(rf"^({_NAME})\s*=\s*(.*)$")
_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")

SECTIONS = ("model", "truncation", "sweep", "response")
REQUIRED_SECTIONS = ("model", "truncation")
DEFAULT_SAMPLES = 4001


class ModelSpecError(ValueError):
    """Malformed or invalid model file; ``line`` is 1-based (0 when no line applies)."""

    def __init__(self, message: str, line: int = 0, lines: tuple[int, ...] = ()):
        self.message = message
        self.line = line
        self.lines = lines or ((line,) if line else ())
        where = f"line {line}: " if line else ""
        super().__init__(where + message)


@dataclass
class ParsedDocument:
    sections: dict[str, dict[str, Scalar]] = field(default_factory=dict)
    # (section, key) -> line; (section, None) -> header line
    source_positions: dict[tuple[str, str | None], int] = field(default_factory=dict)
    n_lines: int = 0

    def line_of(self, section: str, key: str | None = None) -> int:
        return self.source_positions.get((section, key), self.source_positions.get((section, None), 0))


def parse_scalar(text: str) -> Scalar:
    if _INT_RE.match(text):
        return int(text)
    if _FLOAT_RE.match(text):
        return float(text)
    return text


def parse_model_file(text: str | bytes) -> ParsedDocument:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            line = bytes(text).count(b"\n", 0, exc.start) + 1
            raise ModelSpecError(f"input is not valid UTF-8 (byte offset {exc.start})", line) from None
    doc = ParsedDocument()
    lines = text.split("\n")
    doc.n_lines = len(lines) - 1 if len(lines) > 1 and lines[-1] == "" else len(lines)
    current: str | None = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            name = m.group(1)
            if (name, None) in doc.source_positions:
                first = doc.source_positions[(name, None)]
                raise ModelSpecError(
                    f"duplicate section [{name}] (first defined on line {first})", lineno, (first, lineno)
                )
            doc.sections[name] = {}
            doc.source_positions[(name, None)] = lineno
            current = name
            continue
        m = _ENTRY_RE.match(line)
        if not m:
            raise ModelSpecError(f"malformed line {raw.strip()!r}; expected [section] or key = value", lineno)
        key, value = m.group(1), m.group(2).strip()
        if current is None:
            raise ModelSpecError(f"entry {key!r} appears before any [section]", lineno)
        if not value:
            raise ModelSpecError(f"entry {key!r} has no value", lineno)
        if "#" in value:
            raise ModelSpecError("inline comments are not supported; put comments on their own line", lineno)
        if key in doc.sections[current]:
            first = doc.source_positions[(current, key)]
            raise ModelSpecError(
                f"duplicate key {key!r} in [{current}] (first defined on line {first})", lineno, (first, lineno)
            )
        try:
            doc.sections[current][key] = parse_scalar(value)
        except ValueError:
            raise ModelSpecError(f"value of {key!r} is not a representable number", lineno) from None
        doc.source_positions[(current, key)] = lineno
    return doc


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    step: float

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(n)]


@dataclass(frozen=True)
class ResponseSpec:
    omega_min: float
    omega_max: float
    alpha: float = DEFAULT_ALPHA
    samples: int = DEFAULT_SAMPLES
    linewidth: str = "per_port"

    def grid(self):
        import numpy as np

        return np.linspace(self.omega_min, self.omega_max, self.samples)


@dataclass(frozen=True)
class ModelFile:
    """A validated model file: the model plus optional sweep and response settings."""

    model: ModelDefinition
    sweep: SweepSpec | None = None
    response: ResponseSpec | None = None


def _number(doc: ParsedDocument, section: str, key: str, integer: bool = False) -> float | int:
    value = doc.sections[section][key]
    line = doc.line_of(section, key)
    if isinstance(value, str):
        raise ModelSpecError(f"[{section}] {key} must be a number, got {value!r}", line)
    if integer:
        if not isinstance(value, int):
            raise ModelSpecError(f"[{section}] {key} must be an integer, got {value!r}", line)
        return value
    try:
        value = float(value)
    except OverflowError:
        raise ModelSpecError(f"[{section}] {key} is out of range", line) from None
    if not math.isfinite(value):
        raise ModelSpecError(f"[{section}] {key} must be finite", line)
    return value


def _reject_extra(doc: ParsedDocument, section: str, allowed) -> None:
    for key in doc.sections[section]:
        if key not in allowed:
            raise ModelSpecError(
                f"unknown key {key!r} in [{section}]; allowed: {', '.join(allowed)}", doc.line_of(section, key)
            )


def _require(doc: ParsedDocument, section: str, keys) -> None:
    for key in keys:
        if key not in doc.sections[section]:
            raise ModelSpecError(f"[{section}] is missing required key {key!r}", doc.line_of(section))


def validate(doc: ParsedDocument) -> ModelFile:
    for name in doc.sections:
        if name not in SECTIONS:
            raise ModelSpecError(
                f"unknown section [{name}]; allowed: {', '.join(SECTIONS)}", doc.line_of(name)
            )
    for name in REQUIRED_SECTIONS:
        if name not in doc.sections:
            raise ModelSpecError(f"missing required section [{name}]", doc.n_lines)

    model = doc.sections["model"]
    if "kind" not in model:
        raise ModelSpecError("[model] is missing required key 'kind'", doc.line_of("model"))
    kind = model["kind"]
    if kind not in KINDS:
        raise ModelSpecError(
            f"unknown model kind {kind!r}; valid kinds: {', '.join(sorted(KINDS))}", doc.line_of("model", "kind")
        )
    spec = KINDS[kind]
    _reject_extra(doc, "model", ("kind",) + spec.params)
    _require(doc, "model", spec.params)
    params = {p: _number(doc, "model", p) for p in spec.params}

    _reject_extra(doc, "truncation", spec.truncations + ("workspace_pad",))
    _require(doc, "truncation", spec.truncations)
    truncs = {t: _number(doc, "truncation", t, integer=True) for t in spec.truncations}
    pad = DEFAULT_WORKSPACE_PAD
    if "workspace_pad" in doc.sections["truncation"]:
        pad = _number(doc, "truncation", "workspace_pad", integer=True)

    try:
        defn = ModelDefinition(kind, params, truncs, pad)
    except ModelError as exc:
        line = doc.line_of("model")
        for key in list(params) + list(truncs) + ["workspace_pad"]:
            if re.search(rf"\b{re.escape(key)}\b", str(exc)):
                section = "model" if key in params else "truncation"
                line = doc.line_of(section, key)
                break
        raise ModelSpecError(str(exc), line) from None

    return ModelFile(defn, _validate_sweep(doc, kind), _validate_response(doc))


def _validate_sweep(doc: ParsedDocument, kind: str) -> SweepSpec | None:
    if "sweep" not in doc.sections:
        return None
    keys = ("param", "start", "stop", "step")
    _reject_extra(doc, "sweep", keys)
    _require(doc, "sweep", keys)
    param = doc.sections["sweep"]["param"]
    if not isinstance(param, str) or param not in KINDS[kind].params:
        raise ModelSpecError(
            f"sweep parameter {param!r} is not a parameter of {kind}; choose from {', '.join(KINDS[kind].params)}",
            doc.line_of("sweep", "param"),
        )
    start, stop, step = (_number(doc, "sweep", k) for k in ("start", "stop", "step"))
    if step <= 0:
        raise ModelSpecError(f"sweep step must be > 0, got {step!r}", doc.line_of("sweep", "step"))
    if start > stop:
        raise ModelSpecError(f"sweep start {start!r} exceeds stop {stop!r}", doc.line_of("sweep", "start"))
    return SweepSpec(param, start, stop, step)


def _validate_response(doc: ParsedDocument) -> ResponseSpec | None:
    if "response" not in doc.sections:
        return None
    allowed = ("alpha", "omega_min", "omega_max", "samples", "linewidth")
    _reject_extra(doc, "response", allowed)
    _require(doc, "response", ("omega_min", "omega_max"))
    sec = doc.sections["response"]
    lo, hi = _number(doc, "response", "omega_min"), _number(doc, "response", "omega_max")
    if not 0 < lo < hi:
        raise ModelSpecError("[response] needs 0 < omega_min < omega_max", doc.line_of("response", "omega_min"))
    alpha = _number(doc, "response", "alpha") if "alpha" in sec else DEFAULT_ALPHA
    if alpha <= 0:
        raise ModelSpecError("[response] alpha must be > 0", doc.line_of("response", "alpha"))
    samples = _number(doc, "response", "samples", integer=True) if "samples" in sec else DEFAULT_SAMPLES
    if samples < 2:
        raise ModelSpecError("[response] samples must be >= 2", doc.line_of("response", "samples"))
    linewidth = sec.get("linewidth", "per_port")
    if linewidth not in LINEWIDTHS:
        raise ModelSpecError(
            f"[response] linewidth must be one of {', '.join(LINEWIDTHS)}", doc.line_of("response", "linewidth")
        )
    return ResponseSpec(lo, hi, alpha, samples, linewidth)


def load(text: str | bytes) -> ModelFile:
    return validate(parse_model_file(text))


def load_path(path) -> ModelFile:
    with open(path, "rb") as fh:
        return load(fh.read())


def _fmt(value: Scalar) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_text(mf: ModelFile | ModelDefinition) -> str:
    """Canonical serialization; ``load(to_text(x))`` reproduces ``x``."""
    if isinstance(mf, ModelDefinition):
        mf = ModelFile(mf)
    d = mf.model
    out = ["[model]", f"kind = {d.kind}"]
    out += [f"{k} = {_fmt(float(d.params[k]))}" for k in KINDS[d.kind].params]
    out += ["", "[truncation]"]
    out += [f"{k} = {d.truncations[k]}" for k in KINDS[d.kind].truncations]
    out.append(f"workspace_pad = {d.workspace_pad}")
    if mf.sweep:
        s = mf.sweep
        out += ["", "[sweep]", f"param = {s.param}", f"start = {_fmt(s.start)}", f"stop = {_fmt(s.stop)}",
                f"step = {_fmt(s.step)}"]
    if mf.response:
        r = mf.response
        out += ["", "[response]", f"alpha = {_fmt(r.alpha)}", f"omega_min = {_fmt(r.omega_min)}",
                f"omega_max = {_fmt(r.omega_max)}", f"samples = {r.samples}", f"linewidth = {r.linewidth}"]
    return "\n".join(out) + "\n"
