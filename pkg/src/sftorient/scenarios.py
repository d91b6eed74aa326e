"""Batch evaluation of sign scenarios with human-readable rule traces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import signs
from .document import Document
from .errors import SchemaError
from .orbits import OrbitClass, OrbitDescriptor, classify, cz_index, orientation_choice_set
from .signs import Configuration, Sign
from .symplectic import NONDEGENERACY_TOL


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    kind: str
    sign: Sign | None
    trace: tuple[str, ...]
    data: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"[{self.name}] {self.kind}"]
        out += [f"  {t}" for t in self.trace]
        if self.sign is not None:
            out.append(f"sign = {self.sign}")
        return out

    def as_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "trace": list(self.trace)}
        if self.sign is not None:
            out["sign"] = int(self.sign)
        out.update(self.data)
        return out


def _parity(eps: int) -> str:
    return "odd" if eps % 2 else "even"


def _sum_text(values: Sequence[int]) -> str:
    return "+".join(str(v) for v in values) if values else "0"


def describe_cover(orbit: OrbitDescriptor, tol: float = NONDEGENERACY_TOL) -> str:
    """``"h^2: bad (mu_1=1, mu_2=2)"``."""
    cls = classify(orbit, tol)
    simple = orbit.cover(1)
    detail = f"mu_1={cz_index(simple, tol)}"
    if orbit.multiplicity > 1:
        detail += f", mu_{orbit.multiplicity}={cz_index(orbit, tol)}"
    return f"{orbit.label()}: {cls} ({detail})"


def _refs(doc: Document, value) -> Configuration:
    names = [value] if isinstance(value, str) else list(value)
    return Configuration(tuple(doc.surface(s) for s in names))


def _presentation(doc: Document, value):
    config = _refs(doc, value)
    return config.components[0] if len(config.components) == 1 else config


def _swap(doc, sc, tol):
    surface = doc.surface(sc["surface"])
    side, l = sc["side"], sc["position"]
    sign = signs.swap_adjacent(surface, l, side, tol)
    punctures = surface.punctures(side)
    a, b = signs.gradings(punctures[l : l + 2], surface.n, tol)
    labels = ",".join(p.label() for p in punctures[l : l + 2])
    trace = [
        f"swap {side} punctures {l},{l + 1} ({labels}): gradings {a}, {b}",
        f"reorder: epsilon = ({a})*({b}) = {a * b}, {_parity(a * b)} -> {sign}",
    ]
    return sign, trace


def _permute(doc, sc, tol):
    surface = doc.surface(sc["surface"])
    trace = []
    total = 0
    for side, key in ((signs.POSITIVE, "perm_pos"), (signs.NEGATIVE, "perm_neg")):
        if key not in sc:
            continue
        punctures = surface.punctures(side)
        perm = signs.check_permutation(sc[key], len(punctures))
        weights = signs.gradings(punctures, surface.n, tol)
        eps = signs.inversion_parity(weights, perm)
        total += eps
        trace.append(f"{side} order {list(perm)} with gradings {weights}: epsilon = {eps}")
    sign = signs.permutation_sign(surface, sc.get("perm_pos"), sc.get("perm_neg"), tol)
    trace.append(f"reorder: total epsilon = {total}, {_parity(total)} -> {sign}")
    return sign, trace


def _union(doc, sc, tol):
    first, second = _refs(doc, sc["first"]), _refs(doc, sc["second"])
    neg = signs.gradings(first.negatives, first.n, tol)
    pos = signs.gradings(second.positives, second.n, tol)
    a, b = sum(neg), sum(pos)
    sign = signs.union_sign(first, second, tol)
    trace = [
        f"first negatives gradings [{_sum_text(neg)}] = {a}; second positives gradings [{_sum_text(pos)}] = {b}",
        f"union: epsilon = ({a})*({b}) = {a * b}, {_parity(a * b)} -> {sign}",
        "union: relates o(first + second) to o(second) + o(first)",
    ]
    return sign, trace


def _glue(doc, sc, tol):
    top, bottom, t = _presentation(doc, sc["top"]), _presentation(doc, sc["bottom"]), sc["t"]
    a, b = signs.glue_epsilon(top, bottom, t, tol)
    sign = signs.glue_sign(top, bottom, t, tol)
    if t == top.s_minus and t == bottom.s_plus:
        return sign, [
            f"glue at t = {t}: all negatives of the top meet all positives of the bottom",
            f"totglue: complete gluing, epsilon sums empty -> {sign}",
        ]
    leftover = signs.gradings(top.negatives[: top.s_minus - t], top.n, tol)
    extra = signs.gradings(bottom.positives[t:], bottom.n, tol)
    return sign, [
        f"glue at t = {t}: leftover top negatives [{_sum_text(leftover)}] = {a}; "
        f"extra bottom positives [{_sum_text(extra)}] = {b}",
        f"glue: epsilon = ({a})*({b}) = {a * b}, {_parity(a * b)} -> {sign}",
    ]


def _rotate(doc, sc, tol):
    surface = doc.surface(sc["surface"])
    side, pos, j = sc["side"], sc["position"], sc.get("j", 1)
    sign = signs.rotate_marker(surface, side, pos, j, tol)
    orbit = surface.punctures(side)[pos].orbit
    trace = [f"rotate {side} marker {pos} by j = {j}: {describe_cover(orbit, tol)}"]
    if classify(orbit, tol) is OrbitClass.GOOD:
        trace.append(f"marker: good orbit, rotation preserves orientation -> {sign}")
    else:
        k = j % orbit.multiplicity
        trace.append(f"marker: bad orbit, (-1)^({j} mod {orbit.multiplicity}) = (-1)^{k} -> {sign}")
    return sign, trace


def choices(doc: Document, family: Sequence[str], n: int, tol: float = NONDEGENERACY_TOL):
    members = [o for oid in family for o in doc.family(oid)]
    return orientation_choice_set(members, n, tol)


def format_choice(oid: str, needed: Sequence[int]) -> str:
    return f"{oid}: {{{', '.join(str(m) for m in needed)}}}"


_SIGNED = {
    "swap": _swap,
    "permute": _permute,
    "union": _union,
    "glue": _glue,
    "rotate_marker": _rotate,
}


def evaluate(doc: Document, name: str, tol: float = NONDEGENERACY_TOL) -> ScenarioResult:
    sc = doc.scenario(name)
    kind = sc["kind"]
    if kind == "choices":
        result = choices(doc, sc["family"], sc["n"], tol)
        trace = tuple(f"choices: {format_choice(oid, m)}" for oid, m in result)
        data = {"choices": {oid: list(m) for oid, m in result}}
        return ScenarioResult(name, kind, None, trace, data)
    if kind not in _SIGNED:
        raise SchemaError(f"scenario {name!r} has unknown kind {kind!r}")
    sign, trace = _SIGNED[kind](doc, sc, tol)
    return ScenarioResult(name, kind, sign, tuple(trace))


def evaluate_all(doc: Document, names: Sequence[str] | None = None, tol: float = NONDEGENERACY_TOL):
    """Results in input order; each scenario is evaluated independently."""
    names = list(doc.scenarios) if names is None else list(names)
    return [evaluate(doc, name, tol) for name in names]
