"""Graded supercommutative algebra over Q generated by good orbits.

Generators are :class:`OrbitDescriptor` objects graded by ``mu + n - 3``.
Monomials are kept sorted by ``(id, multiplicity)`` with the Koszul sign of
the sorting permutation; odd generators square to zero.  Coefficients are
exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import BadOrbitGenerator, FamilyError, GradingViolation
from .orbits import OrbitDescriptor, grading, is_good
from .signs import Sign, inversion_parity
from .symplectic import NONDEGENERACY_TOL

Factors = tuple[OrbitDescriptor, ...]


@dataclass(frozen=True)
class Monomial:
    factors: Factors
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


def sort_key(orbit: OrbitDescriptor) -> tuple[str, int]:
    return orbit.key


def check_generator(orbit: OrbitDescriptor, tol: float = NONDEGENERACY_TOL) -> None:
    if not is_good(orbit, tol):
        raise BadOrbitGenerator(f"bad orbit {orbit.label()} cannot be a generator")


def degree(factors: Iterable[OrbitDescriptor], n: int) -> int:
    return sum(grading(f, n) for f in factors)


def normalize(monomial: Monomial | Sequence[OrbitDescriptor], n: int) -> tuple[Monomial, int]:
    """Sort the factors; return the sorted monomial and its sign (0 if it vanishes)."""
    factors = monomial.factors if isinstance(monomial, Monomial) else tuple(monomial)
    for f in factors:
        check_generator(f)
    weights = [grading(f, n) for f in factors]
    order = sorted(range(len(factors)), key=lambda i: sort_key(factors[i]))
    epsilon = inversion_parity(weights, order)
    ordered = tuple(factors[i] for i in order)
    for i in range(len(ordered) - 1):
        a, b = ordered[i], ordered[i + 1]
        if a.key == b.key:
            if a != b:
                raise FamilyError(f"two different orbits share the key {a.label()}")
            if weights[order[i]] % 2:
                return Monomial(ordered, True), 0
    return Monomial(ordered, True), Sign.from_parity(epsilon)


class AlgebraElement:
    """Finite rational combination of normalized monomials; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Factors, Fraction | int] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(k)] = c
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def terms(self) -> dict[Factors, Fraction]:
        return dict(self._terms)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Sequence[OrbitDescriptor], Fraction | int]], n: int):
        """Build an element from unsorted monomials, applying Koszul signs."""
        acc: dict[Factors, Fraction] = {}
        for factors, c in terms:
            mono, sign = normalize(factors, n)
            if sign:
                acc[mono.factors] = acc.get(mono.factors, Fraction(0)) + sign * Fraction(c)
        return cls(acc)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return AlgebraElement(acc)

    def __neg__(self):
        return AlgebraElement({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Fraction | int) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement({k: c * v for k, v in self._terms.items()})

    def degrees(self, n: int) -> set[int]:
        return {degree(k, n) for k in self._terms}

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"


def zero() -> AlgebraElement:
    return AlgebraElement()


def one() -> AlgebraElement:
    return AlgebraElement({(): 1})


def generator(orbit: OrbitDescriptor, coefficient: Fraction | int = 1) -> AlgebraElement:
    check_generator(orbit)
    return AlgebraElement({(orbit,): coefficient})


def multiply(x: AlgebraElement, y: AlgebraElement, n: int) -> AlgebraElement:
    """Bilinear product: concatenate monomials and normalize."""
    acc: dict[Factors, Fraction] = {}
    for kx, cx in x._terms.items():
        for ky, cy in y._terms.items():
            mono, sign = normalize(kx + ky, n)
            if sign:
                acc[mono.factors] = acc.get(mono.factors, Fraction(0)) + sign * cx * cy
    return AlgebraElement(acc)


def _term_key(factors: Factors):
    return (len(factors), [f.key for f in factors])


def format_element(x: AlgebraElement) -> str:
    if not x:
        return "0"
    parts = []
    for factors in sorted(x._terms, key=_term_key):
        c = x._terms[factors]
        mono = "*".join(f.label() for f in factors)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag} {mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


@dataclass(frozen=True)
class DifferentialData:
    """Images of generators under a degree -1 derivation."""

    images: Mapping[OrbitDescriptor, AlgebraElement]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "images", dict(self.images))
        for g, image in self.images.items():
            check_generator(g)
            want = grading(g, self.n) - 1
            for factors in image._terms:
                for f in factors:
                    check_generator(f)
                got = degree(factors, self.n)
                if got != want:
                    label = "*".join(f.label() for f in factors) or "1"
                    raise GradingViolation(
                        f"d({g.label()}) contains {label} of degree {got}, expected {want}"
                    )

    def image(self, g: OrbitDescriptor) -> AlgebraElement:
        return self.images.get(g, zero())

    def generators(self) -> list[OrbitDescriptor]:
        return sorted(self.images, key=sort_key)


def apply_differential(d: DifferentialData, x: AlgebraElement) -> AlgebraElement:
    """Extend ``d`` by ``d(uv) = d(u) v + (-1)^|u| u d(v)``."""
    n = d.n
    out = zero()
    for factors, c in x._terms.items():
        sign = 1
        for i, f in enumerate(factors):
            left = AlgebraElement({factors[:i]: sign * c})
            right = AlgebraElement({factors[i + 1 :]: 1})
            out = out + multiply(multiply(left, d.image(f), n), right, n)
            if grading(f, n) % 2:
                sign = -sign
    return out


class Residual(NamedTuple):
    generator: OrbitDescriptor
    value: AlgebraElement


def verify_d_squared(d: DifferentialData) -> list[Residual]:
    """Generators on which ``d o d`` does not vanish, with the residuals."""
    report = []
    for g in d.generators():
        value = apply_differential(d, d.image(g))
        if value:
            report.append(Residual(g, value))
    return report
