"""Relative signs of coherent orientations.

Everything here compares two presentations of the same determinant line:
reordering punctures, taking disjoint unions, gluing and rotating asymptotic
markers.  Only parities of gradings ``mu + n - 3`` enter.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Union

from .errors import MismatchedAmbient, SurfaceError
from .index import DecoratedSurface, Puncture, check_gluable
from .orbits import OrbitClass, classify, grading
from .symplectic import NEGATIVE, NONDEGENERACY_TOL, POSITIVE


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    def __mul__(self, other):
        if isinstance(other, Sign):
            return Sign(int(self) * int(other))
        return int(self) * other

    __rmul__ = __mul__

    @classmethod
    def from_parity(cls, epsilon: int) -> "Sign":
        """``(-1)^epsilon``."""
        return cls.MINUS if epsilon % 2 else cls.PLUS

    def __str__(self):
        return "+1" if self is Sign.PLUS else "-1"


@dataclass(frozen=True)
class Configuration:
    """An ordered disjoint union; its puncture lists are the concatenated lists."""

    components: tuple[DecoratedSurface, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise SurfaceError("a configuration needs at least one component")
        if len({c.n for c in self.components}) != 1:
            raise MismatchedAmbient("components of a configuration must share n")

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def positives(self) -> tuple[Puncture, ...]:
        return tuple(p for c in self.components for p in c.positives)

    @property
    def negatives(self) -> tuple[Puncture, ...]:
        return tuple(p for c in self.components for p in c.negatives)

    @property
    def s_plus(self) -> int:
        return len(self.positives)

    @property
    def s_minus(self) -> int:
        return len(self.negatives)


Presentation = Union[DecoratedSurface, Configuration]


def as_configuration(x: Presentation | Sequence[DecoratedSurface]) -> Configuration:
    if isinstance(x, Configuration):
        return x
    if isinstance(x, DecoratedSurface):
        return Configuration((x,))
    return Configuration(tuple(x))


def gradings(punctures: Sequence[Puncture], n: int, tol: float = NONDEGENERACY_TOL) -> list[int]:
    return [grading(p.orbit, n, tol) for p in punctures]


def _side(surface, side):
    if side == POSITIVE:
        return surface.positives
    if side == NEGATIVE:
        return surface.negatives
    raise SurfaceError(f"side must be 'positive' or 'negative', got {side!r}")


def swap_adjacent(
    surface: DecoratedSurface, l: int, side: str = NEGATIVE, tol: float = NONDEGENERACY_TOL
) -> Sign:
    """Sign for exchanging punctures ``l`` and ``l + 1`` (0-based) on one end.

    The orientations disagree exactly when both gradings are odd.
    """
    punctures = _side(surface, side)
    if not 0 <= l < len(punctures) - 1:
        raise SurfaceError(f"cannot swap {side} punctures {l} and {l + 1} of {len(punctures)}")
    a, b = gradings(punctures[l : l + 2], surface.n, tol)
    return Sign.from_parity(a * b)


def swap_adjacent_negative(surface: DecoratedSurface, l: int, tol: float = NONDEGENERACY_TOL) -> Sign:
    return swap_adjacent(surface, l, NEGATIVE, tol)


def swap_adjacent_positive(surface: DecoratedSurface, l: int, tol: float = NONDEGENERACY_TOL) -> Sign:
    return swap_adjacent(surface, l, POSITIVE, tol)


def swapped(surface: DecoratedSurface, l: int, side: str = NEGATIVE) -> DecoratedSurface:
    punctures = list(_side(surface, side))
    punctures[l], punctures[l + 1] = punctures[l + 1], punctures[l]
    return surface.with_punctures(side, punctures)


def check_permutation(perm: Sequence[int], size: int) -> tuple[int, ...]:
    perm = tuple(int(i) for i in perm)
    if sorted(perm) != list(range(size)):
        raise SurfaceError(f"{list(perm)} is not a permutation of 0..{size - 1}")
    return perm


def inversion_parity(weights: Sequence[int], perm: Sequence[int]) -> int:
    """Sum of ``w_i w_j`` over the pairs of elements that ``perm`` puts out of order.

    ``perm`` lists old positions in their new order: ``new[i] = old[perm[i]]``.
    """
    return sum(
        weights[perm[i]] * weights[perm[j]]
        for i, j in combinations(range(len(perm)), 2)
        if perm[i] > perm[j]
    )


def permutation_sign(
    surface: DecoratedSurface,
    perm_pos: Sequence[int] | None = None,
    perm_neg: Sequence[int] | None = None,
    tol: float = NONDEGENERACY_TOL,
) -> Sign:
    """Sign of reordering both puncture lists; ``new[i] = old[perm[i]]``."""
    epsilon = 0
    for punctures, perm in ((surface.positives, perm_pos), (surface.negatives, perm_neg)):
        if perm is None:
            continue
        perm = check_permutation(perm, len(punctures))
        epsilon += inversion_parity(gradings(punctures, surface.n, tol), perm)
    return Sign.from_parity(epsilon)


def permuted(
    surface: DecoratedSurface,
    perm_pos: Sequence[int] | None = None,
    perm_neg: Sequence[int] | None = None,
) -> DecoratedSurface:
    out = surface
    if perm_pos is not None:
        perm = check_permutation(perm_pos, surface.s_plus)
        out = out.with_punctures(POSITIVE, [surface.positives[i] for i in perm])
    if perm_neg is not None:
        perm = check_permutation(perm_neg, surface.s_minus)
        out = out.with_punctures(NEGATIVE, [surface.negatives[i] for i in perm])
    return out


def union_epsilon(
    first: Presentation, second: Presentation, tol: float = NONDEGENERACY_TOL
) -> tuple[int, int]:
    """Grading sums over all negatives of ``first`` and all positives of ``second``."""
    first, second = as_configuration(first), as_configuration(second)
    if first.n != second.n:
        raise MismatchedAmbient(f"cannot unite configurations with n = {first.n} and {second.n}")
    return (
        sum(gradings(first.negatives, first.n, tol)),
        sum(gradings(second.positives, second.n, tol)),
    )


def union_sign(first: Presentation, second: Presentation, tol: float = NONDEGENERACY_TOL) -> Sign:
    """Sign relating the coherent orientation of ``first + second`` to ``o_second (+) o_first``."""
    a, b = union_epsilon(first, second, tol)
    return Sign.from_parity(a * b)


def glue_epsilon(
    top: Presentation, bottom: Presentation, t: int, tol: float = NONDEGENERACY_TOL
) -> tuple[int, int]:
    """Grading sums over the unglued negatives of ``top`` and unglued positives of ``bottom``."""
    check_gluable(top, bottom, t)
    return (
        sum(gradings(top.negatives[: top.s_minus - t], top.n, tol)),
        sum(gradings(bottom.positives[t:], bottom.n, tol)),
    )


def glue_sign(
    top: Presentation, bottom: Presentation, t: int, tol: float = NONDEGENERACY_TOL
) -> Sign:
    """Sign by which the coherent orientation of the glued data differs from ``o_top # o_bottom``.

    A complete gluing (no leftover negatives on top or no extra positives at
    the bottom) always gives ``+1``.  Configurations are accepted; their
    concatenated puncture lists are used.
    """
    a, b = glue_epsilon(top, bottom, t, tol)
    return Sign.from_parity(a * b)


def _marker_puncture(surface, side, position):
    punctures = _side(surface, side)
    if not 0 <= position < len(punctures):
        raise SurfaceError(f"no {side} puncture at position {position}")
    return punctures[position]


def rotate_marker(
    surface: DecoratedSurface, side: str, position: int, j: int = 1, tol: float = NONDEGENERACY_TOL
) -> Sign:
    """Sign of rotating the marker at a puncture by ``j`` steps of ``2 pi / m``.

    Good orbits: always ``+1``.  Bad orbits (``m`` even): ``(-1)^j``.
    """
    orbit = _marker_puncture(surface, side, position).orbit
    if classify(orbit, tol) is OrbitClass.GOOD:
        return Sign.PLUS
    return Sign.from_parity(j % orbit.multiplicity)


def rotated_marker(surface: DecoratedSurface, side: str, position: int, j: int = 1) -> DecoratedSurface:
    punctures = list(_side(surface, side))
    p = _marker_puncture(surface, side, position)
    punctures[position] = Puncture(p.orbit, (p.marker + j) % p.orbit.multiplicity)
    return surface.with_punctures(side, punctures)
