"""Loading and validating the versioned JSON input document.

A document has the top-level sections ``version``, ``paths``, ``orbits``,
``surfaces``, ``scenarios`` and ``differential``; only ``version`` is
required.  The structure is checked against a JSON schema (unknown fields
are errors), then every cross-reference is resolved.

Path expressions use the grammar::

    expr := NAME | FUNC "(" arg ("," arg)* ")"
    FUNC := rotation | pos_hyp | neg_hyp | shear | sum | concat | prod
          | twist | iterate

where ``NAME`` refers to another entry of ``paths``.  ``twist`` takes
``(expr, delta, +|-)``: ``+`` marks a positive puncture, ``-`` a negative one.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from . import symplectic as sp
from .algebra import AlgebraElement, DifferentialData
from .errors import SchemaError
from .index import DecoratedSurface, Puncture
from .orbits import OrbitDescriptor

VERSION = 1


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("sftorient").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate_schema(data: Any, name: str) -> None:
    schema = load_schema(name)
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {e.message}")


# path expressions ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)|(?P<op>[(),+-]))")

_SCALAR = {
    "rotation": sp.rotation,
    "pos_hyp": sp.positive_hyperbolic,
    "neg_hyp": sp.negative_hyperbolic,
    "shear": sp.shear,
}


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SchemaError(f"cannot parse path expression {text!r} at offset {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, resolve):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.resolve = resolve

    def fail(self, msg):
        raise SchemaError(f"path expression {self.text!r}: {msg}")

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            self.fail(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok[1]

    def parse(self):
        out = self.expr()
        if self.i != len(self.tokens):
            self.fail(f"trailing input {self.peek()[1]!r}")
        return out

    def number(self):
        return float(self.take("num"))

    def args(self, parse_one):
        self.take("op", "(")
        items = [parse_one()]
        while self.peek() == ("op", ","):
            self.take()
            items.append(parse_one())
        self.take("op", ")")
        return items

    def expr(self):
        name = self.take("name")
        if self.peek() != ("op", "("):
            return self.resolve(name)
        if name in _SCALAR:
            values = self.args(self.number)
            if len(values) != 1:
                self.fail(f"{name} takes exactly one number")
            (value,) = values
            return _SCALAR[name](value)
        if name in ("sum", "concat", "prod"):
            parts = self.args(self.expr)
            if name == "sum":
                return sp.direct_sum(*parts)
            if name == "concat":
                return sp.concatenate(*parts)
            out = parts[0]
            for p in parts[1:]:
                out = sp.product(out, p)
            return out
        if name == "iterate":
            self.take("op", "(")
            base = self.expr()
            self.take("op", ",")
            m = self.number()
            self.take("op", ")")
            if m != int(m) or m < 1:
                self.fail("iterate needs a positive integer count")
            return sp.iterate(base, int(m))
        if name == "twist":
            self.take("op", "(")
            base = self.expr()
            self.take("op", ",")
            delta = self.number()
            self.take("op", ",")
            sign = self.take("op")
            self.take("op", ")")
            if sign not in "+-":
                self.fail("twist orientation must be + or -")
            side = sp.POSITIVE if sign == "+" else sp.NEGATIVE
            return sp.twist(base, delta, side)
        self.fail(f"unknown constructor {name!r}")


def parse_path(text: str, named: Mapping[str, sp.SymplecticPath] | None = None) -> sp.SymplecticPath:
    """Parse one expression; bare names are looked up in ``named``."""
    named = named or {}

    def resolve(name):
        if name not in named:
            raise SchemaError(f"unknown path {name!r}")
        return named[name]

    return _Parser(text, resolve).parse()


def _build_paths(raw: Mapping[str, Any]) -> dict[str, sp.SymplecticPath]:
    built: dict[str, sp.SymplecticPath] = {}
    active: list[str] = []

    def resolve(name):
        if name in built:
            return built[name]
        if name not in raw:
            raise SchemaError(f"unknown path {name!r}")
        if name in active:
            raise SchemaError(f"cyclic path definition: {' -> '.join(active + [name])}")
        active.append(name)
        body = raw[name]
        if isinstance(body, str):
            built[name] = _Parser(body, resolve).parse()
        else:
            built[name] = sp.sample_table(body["times"], body["matrices"])
        active.pop()
        return built[name]

    for name in raw:
        resolve(name)
    return built


# orbit references --------------------------------------------------------------


def parse_label(label: str) -> tuple[str, int]:
    """``"h^2"`` to ``("h", 2)``; a bare id means multiplicity 1."""
    oid, sep, m = label.rpartition("^")
    if not sep:
        oid, m = label, "1"
    if not oid or not m.isdigit() or int(m) < 1:
        raise SchemaError(f"malformed orbit label {label!r}")
    return oid, int(m)


@dataclass
class Document:
    paths: dict[str, sp.SymplecticPath] = field(default_factory=dict)
    orbits: dict[tuple[str, int], OrbitDescriptor] = field(default_factory=dict)
    surfaces: dict[str, DecoratedSurface] = field(default_factory=dict)
    scenarios: dict[str, dict] = field(default_factory=dict)
    differential_raw: dict | None = None

    def orbit(self, oid: str, multiplicity: int = 1) -> OrbitDescriptor:
        try:
            return self.orbits[(oid, multiplicity)]
        except KeyError:
            raise SchemaError(f"unknown orbit {oid}^{multiplicity}") from None

    def orbit_by_label(self, label: str) -> OrbitDescriptor:
        return self.orbit(*parse_label(label))

    def family(self, oid: str) -> list[OrbitDescriptor]:
        members = [o for key, o in sorted(self.orbits.items()) if key[0] == oid]
        if not members:
            raise SchemaError(f"unknown orbit family {oid!r}")
        return members

    def path(self, name: str) -> sp.SymplecticPath:
        try:
            return self.paths[name]
        except KeyError:
            raise SchemaError(f"unknown path {name!r}") from None

    def surface(self, name: str) -> DecoratedSurface:
        try:
            return self.surfaces[name]
        except KeyError:
            raise SchemaError(f"unknown surface {name!r}") from None

    def scenario(self, name: str) -> dict:
        try:
            return self.scenarios[name]
        except KeyError:
            raise SchemaError(f"unknown scenario {name!r}") from None

    def differential(self) -> DifferentialData:
        """Build the generator map; classification happens here, so it may be slow."""
        if self.differential_raw is None:
            raise SchemaError("the document has no differential section")
        raw = self.differential_raw
        images = {
            self.orbit_by_label(label): _element(self, terms, raw["n"])
            for label, terms in raw["images"].items()
        }
        return DifferentialData(images, raw["n"])


def _element(doc: Document, terms, n: int) -> AlgebraElement:
    return AlgebraElement.from_terms(
        (
            ([doc.orbit_by_label(f) for f in term["monomial"]], Fraction(term["coefficient"]))
            for term in terms
        ),
        n,
    )


def _puncture(doc: Document, raw: dict) -> Puncture:
    orbit = doc.orbit(raw["orbit"], raw.get("multiplicity", 1))
    return Puncture(orbit, raw.get("marker", 0))


def _check_scenario_refs(doc: Document, name: str, sc: dict) -> None:
    def refs(value):
        return [value] if isinstance(value, str) else list(value)

    for key in ("surface", "first", "second", "top", "bottom"):
        if key in sc:
            for s in refs(sc[key]):
                doc.surface(s)
    for oid in sc.get("family", ()):
        doc.family(oid)


def build_document(data: Any) -> Document:
    validate_schema(data, "document")
    doc = Document()
    doc.paths = _build_paths(data.get("paths", {}))
    for raw in data.get("orbits", []):
        key = (raw["id"], raw.get("multiplicity", 1))
        if key in doc.orbits:
            raise SchemaError(f"orbit {key[0]}^{key[1]} is declared twice")
        doc.orbits[key] = OrbitDescriptor(
            raw["id"], doc.path(raw["simple_path"]), key[1], raw.get("action")
        )
    for name, raw in data.get("surfaces", {}).items():
        doc.surfaces[name] = DecoratedSurface(
            genus=raw["genus"],
            n=raw["n"],
            positives=tuple(_puncture(doc, p) for p in raw.get("positives", [])),
            negatives=tuple(_puncture(doc, p) for p in raw.get("negatives", [])),
            chern=raw.get("chern", 0),
        )
    for name, sc in data.get("scenarios", {}).items():
        _check_scenario_refs(doc, name, sc)
        doc.scenarios[name] = dict(sc)
    if "differential" in data:
        raw = data["differential"]
        for label, terms in raw["images"].items():
            doc.orbit_by_label(label)
            for term in terms:
                for f in term["monomial"]:
                    doc.orbit_by_label(f)
                if re.fullmatch(r"-?\d+/0+", term["coefficient"]):
                    raise SchemaError(f"coefficient {term['coefficient']!r} has a zero denominator")
        doc.differential_raw = raw
    return doc


def load_document(path: str | Path) -> Document:
    """Read and validate a document; raises ``FileNotFoundError`` or :class:`SchemaError`."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None
    return build_document(data)
