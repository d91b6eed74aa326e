"""Decorated punctured surfaces, Fredholm index, expected dimension and gluing."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

from .errors import BadArity, MismatchedAmbient, MismatchedOrbits, SurfaceError
from .orbits import OrbitDescriptor, cz_index
from .symplectic import NEGATIVE, NONDEGENERACY_TOL, POSITIVE, PUNCTURE_SIDES


class Puncture(NamedTuple):
    """A puncture asymptotic to ``orbit``, with its asymptotic marker in ``Z_m``."""

    orbit: OrbitDescriptor
    marker: int = 0

    def label(self) -> str:
        return self.orbit.label() if not self.marker else f"{self.orbit.label()}@{self.marker}"


def _punctures(items) -> tuple[Puncture, ...]:
    out = []
    for p in items:
        if isinstance(p, OrbitDescriptor):
            p = Puncture(p)
        out.append(Puncture(*p))
    return tuple(out)


@dataclass(frozen=True)
class DecoratedSurface:
    """Combinatorial data of a moduli space of punctured curves.

    Punctures are ordered and identified by position.  ``chern`` is the first
    Chern number ``c1(E)``; the index formulas use ``2 * chern``.
    """

    genus: int
    n: int
    positives: tuple[Puncture, ...] = ()
    negatives: tuple[Puncture, ...] = ()
    chern: int = 0

    def __post_init__(self):
        object.__setattr__(self, "positives", _punctures(self.positives))
        object.__setattr__(self, "negatives", _punctures(self.negatives))
        if self.genus < 0:
            raise SurfaceError(f"genus must be non-negative, got {self.genus}")
        if self.n < 2:
            raise SurfaceError(f"ambient half-dimension must be at least 2, got {self.n}")
        for p in self.positives + self.negatives:
            if p.orbit.n != self.n:
                raise MismatchedAmbient(
                    f"orbit {p.orbit.label()} lives in dimension {2 * p.orbit.n}, surface in {2 * self.n}"
                )
            if not 0 <= p.marker < p.orbit.multiplicity:
                raise SurfaceError(
                    f"marker {p.marker} of {p.orbit.label()} is outside 0..{p.orbit.multiplicity - 1}"
                )

    def punctures(self, side: str) -> tuple[Puncture, ...]:
        if side == POSITIVE:
            return self.positives
        if side == NEGATIVE:
            return self.negatives
        raise SurfaceError(f"side must be one of {PUNCTURE_SIDES}, got {side!r}")

    def with_punctures(self, side: str, punctures: Sequence[Puncture]) -> "DecoratedSurface":
        self.punctures(side)
        key = "positives" if side == POSITIVE else "negatives"
        return replace(self, **{key: tuple(punctures)})

    @property
    def s_plus(self) -> int:
        return len(self.positives)

    @property
    def s_minus(self) -> int:
        return len(self.negatives)


def euler_characteristic(surface: DecoratedSurface) -> int:
    """Euler characteristic of the closed surface, ``2 - 2g``."""
    return 2 - 2 * surface.genus


def fredholm_index(surface: DecoratedSurface, tol: float = NONDEGENERACY_TOL) -> int:
    n = surface.n
    top = sum(cz_index(p.orbit, tol) - (n - 1) for p in surface.positives)
    bottom = sum(cz_index(p.orbit, tol) + (n - 1) for p in surface.negatives)
    return top - bottom + n * euler_characteristic(surface) + 2 * surface.chern


def moduli_dimension(surface: DecoratedSurface, tol: float = NONDEGENERACY_TOL) -> int:
    """Expected dimension; no correction for the R-action on symplectizations."""
    n = surface.n
    top = sum(cz_index(p.orbit, tol) for p in surface.positives)
    bottom = sum(cz_index(p.orbit, tol) for p in surface.negatives)
    punctures = surface.s_plus + surface.s_minus
    return top - bottom + (n - 3) * (euler_characteristic(surface) - punctures) + 2 * surface.chern


def check_gluable(top: DecoratedSurface, bottom: DecoratedSurface, t: int) -> None:
    """Raise unless the last ``t`` negatives of ``top`` match the first ``t`` positives of ``bottom``.

    Negative puncture ``s - m`` of ``top`` (0-based, ``s = top.s_minus``) is
    matched with positive puncture ``m`` of ``bottom`` for ``m < t``.
    """
    if top.n != bottom.n:
        raise MismatchedAmbient(f"cannot glue surfaces with n = {top.n} and n = {bottom.n}")
    if not 1 <= t <= min(top.s_minus, bottom.s_plus):
        raise BadArity(
            f"t = {t} must lie in 1..min({top.s_minus}, {bottom.s_plus})"
        )
    s = top.s_minus
    for m in range(t):
        upper, lower = top.negatives[s - 1 - m], bottom.positives[m]
        if upper.orbit != lower.orbit or upper.marker != lower.marker:
            raise MismatchedOrbits(
                f"negative puncture {s - 1 - m} ({upper.label()}) of the top does not match "
                f"positive puncture {m} ({lower.label()}) of the bottom"
            )


def glue_surfaces(top: DecoratedSurface, bottom: DecoratedSurface, t: int) -> DecoratedSurface:
    """Glue ``t`` necks; both inputs and the result are connected."""
    check_gluable(top, bottom, t)
    return DecoratedSurface(
        genus=top.genus + bottom.genus + t - 1,
        n=top.n,
        positives=top.positives + bottom.positives[t:],
        negatives=top.negatives[: top.s_minus - t] + bottom.negatives,
        chern=top.chern + bottom.chern,
    )
