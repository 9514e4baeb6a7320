"""Plain-text netlists for circuit models.

A netlist is a small YAML document declaring primitive components and the
combinators that wire them together:

    version: 1
    components:
      - {name: ph, kind: phase, phi: pi}
      - {name: rest, kind: identity, ports: 1}
      - {name: b1, kind: beamsplitter, theta: pi/4}
      - {name: b2, kind: beamsplitter, theta: -pi/4}
    circuit:
      - {name: inner, op: concat, of: [ph, rest]}
      - {name: switch, op: series, of: [b2, inner, b1]}

Component kinds are ``phase``, ``beamsplitter``, ``drive`` and
``identity``; combinator ops are ``series`` (n-ary, leftmost operand acts
last), ``concat`` (n-ary, first operand owns the first ports) and
``feedback`` (one operand plus ``output``/``input`` port numbers).  The
model denoted by the document is the last ``circuit`` entry, or the sole
declared component when ``circuit`` is empty or absent.

Angles are radians.  Rational multiples of pi keep the exact symbolic
spelling ``pi``, ``-pi/4``, ``3pi/4`` through parse/serialize round trips,
so binary control phases survive I/O bit-exactly; everything else is
serialized with ``repr`` which round-trips IEEE doubles.  Serialization is
deterministic and ``parse -> serialize`` is idempotent after one pass.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import yaml

from .core import CircuitError, SlhModel, concat, feedback, identity, series
from .components import beamsplitter, coherent_drive, phase_shift

__all__ = [
    "ComponentDecl",
    "CombinatorDecl",
    "Netlist",
    "NetlistError",
    "elaborate",
    "format_angle",
    "parse_angle",
    "parse_netlist",
    "serialize_netlist",
]

NETLIST_VERSION = 1

_KINDS = ("phase", "beamsplitter", "drive", "identity")
_OPS = ("series", "concat", "feedback")

# symbolic angle token: optional sign, optional integer multiple, pi,
# optional integer divisor
_ANGLE_RE = re.compile(r"^([+-]?)(\d+)?pi(?:/(\d+))?$")

# divisors worth a symbolic spelling on output
_NICE_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12)

# names must survive the flow-style emitter unquoted
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")


class NetlistError(CircuitError, ValueError):
    """Malformed or unresolvable netlist; ``location`` points at the node."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def parse_angle(token, location: str = "angle") -> float:
    """Angle from a YAML scalar: number, ``pi`` token, or numeric string."""
    if isinstance(token, bool):
        raise NetlistError(location, f"expected an angle, got {token!r}")
    if isinstance(token, (int, float)):
        value = float(token)
    elif isinstance(token, str):
        m = _ANGLE_RE.match(token.strip())
        if m:
            sign = -1.0 if m.group(1) == "-" else 1.0
            num = int(m.group(2)) if m.group(2) else 1
            den = int(m.group(3)) if m.group(3) else 1
            if den == 0:
                raise NetlistError(location, f"zero divisor in angle {token!r}")
            value = sign * (num * math.pi / den)
        else:
            try:
                value = float(token)
            except ValueError:
                raise NetlistError(
                    location, f"cannot parse angle {token!r}"
                ) from None
    else:
        raise NetlistError(location, f"expected an angle, got {token!r}")
    if not math.isfinite(value):
        raise NetlistError(location, f"angle must be finite, got {token!r}")
    return value


def format_angle(x: float) -> str:
    """Shortest faithful spelling of an angle.

    Tries ``k*pi/d`` for small d, accepting a spelling only when re-parsing
    it reproduces the exact same float; falls back to ``repr``.
    """
    x = float(x)
    if x == 0.0:
        return "0"
    for den in _NICE_DENOMINATORS:
        k = round(x * den / math.pi)
        if k != 0 and k * math.pi / den == x:
            sign = "-" if k < 0 else ""
            mag = abs(k)
            head = "pi" if mag == 1 else f"{mag}pi"
            tail = "" if den == 1 else f"/{den}"
            return f"{sign}{head}{tail}"
    return repr(x)


@dataclass(frozen=True)
class ComponentDecl:
    """One primitive declaration; ``value`` holds the kind's parameter:
    phi / theta (float), ports (int), or a tuple of complex amplitudes."""

    name: str
    kind: str
    value: object

    def build(self) -> SlhModel:
        if self.kind == "phase":
            return phase_shift(self.value)
        if self.kind == "beamsplitter":
            return beamsplitter(self.value)
        if self.kind == "identity":
            return identity(self.value)
        return coherent_drive(list(self.value))


@dataclass(frozen=True)
class CombinatorDecl:
    name: str
    op: str
    operands: tuple
    output: int = 0
    input: int = 0


@dataclass(frozen=True)
class Netlist:
    components: tuple = ()
    circuit: tuple = ()


def _require_map(node, location: str) -> dict:
    if not isinstance(node, dict):
        raise NetlistError(location, f"expected a mapping, got {type(node).__name__}")
    return node


def _take(node: dict, key: str, location: str):
    if key not in node:
        raise NetlistError(location, f"missing required key {key!r}")
    return node[key]


def _check_keys(node: dict, allowed, location: str):
    extra = sorted(set(node) - set(allowed))
    if extra:
        raise NetlistError(location, f"unknown keys {extra}")


def _parse_name(node: dict, location: str) -> str:
    name = _take(node, "name", location)
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise NetlistError(
            location,
            f"name must match {_NAME_RE.pattern!r}, got {name!r}",
        )
    return name


def _parse_component(node, location: str) -> ComponentDecl:
    node = _require_map(node, location)
    name = _parse_name(node, location)
    kind = _take(node, "kind", location)
    if kind not in _KINDS:
        raise NetlistError(location, f"unknown kind {kind!r} (expected one of {_KINDS})")
    if kind == "phase":
        _check_keys(node, ("name", "kind", "phi"), location)
        value = parse_angle(_take(node, "phi", location), f"{location}.phi")
    elif kind == "beamsplitter":
        _check_keys(node, ("name", "kind", "theta"), location)
        value = parse_angle(_take(node, "theta", location), f"{location}.theta")
    elif kind == "identity":
        _check_keys(node, ("name", "kind", "ports"), location)
        ports = _take(node, "ports", location)
        if isinstance(ports, bool) or not isinstance(ports, int) or ports < 1:
            raise NetlistError(
                f"{location}.ports", f"ports must be a positive integer, got {ports!r}"
            )
        value = ports
    else:  # drive
        _check_keys(node, ("name", "kind", "amplitudes"), location)
        raw = _take(node, "amplitudes", location)
        if not isinstance(raw, list) or not raw:
            raise NetlistError(
                f"{location}.amplitudes", "amplitudes must be a nonempty list"
            )
        amps = []
        for j, entry in enumerate(raw):
            where = f"{location}.amplitudes[{j}]"
            if isinstance(entry, list):
                if len(entry) != 2:
                    raise NetlistError(where, "complex amplitude needs [re, im]")
                re_part = parse_angle(entry[0], where)
                im_part = parse_angle(entry[1], where)
                amps.append(complex(re_part, im_part))
            else:
                amps.append(complex(parse_angle(entry, where), 0.0))
        value = tuple(amps)
    return ComponentDecl(name, kind, value)


def _parse_combinator(node, location: str) -> CombinatorDecl:
    node = _require_map(node, location)
    name = _parse_name(node, location)
    op = _take(node, "op", location)
    if op not in _OPS:
        raise NetlistError(location, f"unknown op {op!r} (expected one of {_OPS})")
    operands = _take(node, "of", location)
    if not isinstance(operands, list) or not all(
        isinstance(x, str) and x for x in operands
    ):
        raise NetlistError(f"{location}.of", "operands must be a list of names")
    if op == "feedback":
        _check_keys(node, ("name", "op", "of", "output", "input"), location)
        if len(operands) != 1:
            raise NetlistError(
                f"{location}.of", f"feedback takes exactly one operand, got {len(operands)}"
            )
        ports = []
        for key in ("output", "input"):
            v = _take(node, key, location)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise NetlistError(
                    f"{location}.{key}", f"{key} must be a positive port number, got {v!r}"
                )
            ports.append(v)
        return CombinatorDecl(name, op, tuple(operands), ports[0], ports[1])
    _check_keys(node, ("name", "op", "of"), location)
    if len(operands) < 2:
        raise NetlistError(
            f"{location}.of", f"{op} needs at least two operands, got {len(operands)}"
        )
    return CombinatorDecl(name, op, tuple(operands))


def parse_netlist(text: str) -> Netlist:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise NetlistError("document", f"not valid YAML: {exc}") from None
    doc = _require_map(doc, "document")
    _check_keys(doc, ("version", "components", "circuit"), "document")
    version = _take(doc, "version", "document")
    if version != NETLIST_VERSION:
        raise NetlistError(
            "document.version", f"unsupported version {version!r} (expected {NETLIST_VERSION})"
        )
    raw_components = doc.get("components") or []
    if not isinstance(raw_components, list):
        raise NetlistError("document.components", "components must be a list")
    raw_circuit = doc.get("circuit") or []
    if not isinstance(raw_circuit, list):
        raise NetlistError("document.circuit", "circuit must be a list")

    seen = set()
    components = []
    for i, node in enumerate(raw_components):
        decl = _parse_component(node, f"components[{i}]")
        if decl.name in seen:
            raise NetlistError(f"components[{i}]", f"duplicate name {decl.name!r}")
        seen.add(decl.name)
        components.append(decl)
    circuit = []
    for i, node in enumerate(raw_circuit):
        decl = _parse_combinator(node, f"circuit[{i}]")
        if decl.name in seen:
            raise NetlistError(f"circuit[{i}]", f"duplicate name {decl.name!r}")
        for j, ref in enumerate(decl.operands):
            if ref not in seen:
                raise NetlistError(
                    f"circuit[{i}].of[{j}]", f"unresolved reference {ref!r}"
                )
        seen.add(decl.name)
        circuit.append(decl)
    if not components:
        raise NetlistError("document.components", "at least one component is required")
    if not circuit and len(components) != 1:
        raise NetlistError(
            "document.circuit",
            "an empty circuit needs exactly one component to denote the model",
        )
    return Netlist(tuple(components), tuple(circuit))


def _amp_tokens(z: complex) -> str:
    return f"[{format_angle(z.real)}, {format_angle(z.imag)}]"


def serialize_netlist(nl: Netlist) -> str:
    """Deterministic canonical YAML for a netlist (fixed key order,
    flow-style entries, symbolic angles preserved)."""
    lines = [f"version: {NETLIST_VERSION}", "components:"]
    for c in nl.components:
        if c.kind == "phase":
            param = f"phi: {format_angle(c.value)}"
        elif c.kind == "beamsplitter":
            param = f"theta: {format_angle(c.value)}"
        elif c.kind == "identity":
            param = f"ports: {c.value}"
        else:
            inner = ", ".join(_amp_tokens(z) for z in c.value)
            param = f"amplitudes: [{inner}]"
        lines.append(f"  - {{name: {c.name}, kind: {c.kind}, {param}}}")
    if nl.circuit:
        lines.append("circuit:")
        for d in nl.circuit:
            refs = ", ".join(d.operands)
            entry = f"  - {{name: {d.name}, op: {d.op}, of: [{refs}]"
            if d.op == "feedback":
                entry += f", output: {d.output}, input: {d.input}"
            lines.append(entry + "}")
    return "\n".join(lines) + "\n"


def elaborate(nl: Netlist) -> SlhModel:
    """Build the model a netlist denotes, resolving references in order."""
    built = {}
    for c in nl.components:
        built[c.name] = c.build()
    result = built[nl.components[0].name] if len(nl.components) == 1 else None
    for i, d in enumerate(nl.circuit):
        location = f"circuit[{i}]"
        parts = [built[ref] for ref in d.operands]
        try:
            if d.op == "series":
                model = parts[0]
                for nxt in parts[1:]:
                    model = series(model, nxt)
            elif d.op == "concat":
                model = parts[0]
                for nxt in parts[1:]:
                    model = concat(model, nxt)
            else:
                model = feedback(parts[0], d.output, d.input)
        except CircuitError as exc:
            raise NetlistError(location, str(exc)) from exc
        built[d.name] = model
        result = model
    if result is None:
        raise NetlistError(
            "document.circuit",
            "an empty circuit needs exactly one component to denote the model",
        )
    return result
