"""Closed Reeb orbit descriptors, good/bad classification and orientation choices."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .errors import FamilyError, InternalInconsistency, PathError
from .symplectic import (
    NONDEGENERACY_TOL,
    SymplecticPath,
    is_nondegenerate,
    iterate,
    maslov_index_rs,
)


class OrbitClass(enum.Enum):
    GOOD = "good"
    BAD = "bad"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class OrbitDescriptor:
    """The ``multiplicity``-fold cover of the simple orbit ``id``.

    ``simple_path`` is the linearized Reeb flow of the simple orbit in a fixed
    trivialization of the contact planes, so its dimension is ``2n - 2``.  The
    pair ``(id, multiplicity)`` identifies the orbit; descriptors sharing an
    ``id`` form a family of covers of one simple orbit.  ``action`` is carried
    as metadata only.
    """

    id: str
    simple_path: SymplecticPath
    multiplicity: int = 1
    action: float | None = None
    _mu: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise PathError(f"orbit {self.id}: multiplicity must be a positive integer")
        if self.action is not None and not self.action > 0:
            raise PathError(f"orbit {self.id}: action must be positive")
        for k in range(1, self.multiplicity + 1):
            if not is_nondegenerate(iterate(self.simple_path, k)):
                raise PathError(f"orbit {self.id}: the {k}-fold cover is degenerate")

    @property
    def key(self) -> tuple[str, int]:
        return (self.id, self.multiplicity)

    @property
    def n(self) -> int:
        """Half-dimension of the ambient cobordism."""
        return self.simple_path.dim // 2 + 1

    @property
    def path(self) -> SymplecticPath:
        return iterate(self.simple_path, self.multiplicity)

    def cover(self, m: int) -> "OrbitDescriptor":
        """The ``m``-fold cover of the underlying simple orbit."""
        if m == self.multiplicity:
            return self
        return OrbitDescriptor(self.id, self.simple_path, m, None, self._mu)

    def __eq__(self, other):
        if not isinstance(other, OrbitDescriptor):
            return NotImplemented
        return self.key == other.key and self.simple_path == other.simple_path

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.multiplicity == 1:
            return f"Orbit({self.id})"
        return f"Orbit({self.id}^{self.multiplicity})"

    def label(self) -> str:
        return self.id if self.multiplicity == 1 else f"{self.id}^{self.multiplicity}"


def _cover_index(orbit: OrbitDescriptor, m: int, tol: float) -> int:
    # the memo is shared by all covers of one simple path
    key = (m, tol)
    if key not in orbit._mu:
        orbit._mu[key] = maslov_index_rs(iterate(orbit.simple_path, m), tol)
    return orbit._mu[key]


def cz_index(orbit: OrbitDescriptor, tol: float = NONDEGENERACY_TOL) -> int:
    """Conley-Zehnder index of the orbit, i.e. of the iterated linearized flow."""
    return _cover_index(orbit, orbit.multiplicity, tol)


def grading(orbit: OrbitDescriptor, n: int, tol: float = NONDEGENERACY_TOL) -> int:
    """``mu + n - 3``; its parity drives every reordering and gluing sign."""
    if n < 2:
        raise PathError(f"ambient half-dimension must be at least 2, got {n}")
    if orbit.n != n:
        raise PathError(f"orbit {orbit.label()} has path dimension {orbit.simple_path.dim}, not {2 * n - 2}")
    return cz_index(orbit, tol) + n - 3


def classify(orbit: OrbitDescriptor, tol: float = NONDEGENERACY_TOL) -> OrbitClass:
    """Bad iff ``mu(gamma_m) - mu(gamma)`` is odd; bad orbits always have even ``m``."""
    diff = cz_index(orbit, tol) - _cover_index(orbit, 1, tol)
    if diff % 2 == 0:
        return OrbitClass.GOOD
    if orbit.multiplicity % 2:
        raise InternalInconsistency(
            f"orbit {orbit.label()} is bad with odd multiplicity {orbit.multiplicity}"
        )
    return OrbitClass.BAD


def is_good(orbit: OrbitDescriptor, tol: float = NONDEGENERACY_TOL) -> bool:
    return classify(orbit, tol) is OrbitClass.GOOD


def orientation_choice_set(
    orbits: Iterable[OrbitDescriptor], n: int, tol: float = NONDEGENERACY_TOL
) -> list[tuple[str, tuple[int, ...]]]:
    """Minimal orientation choices per simple orbit, as ``(id, multiplicities)``.

    Odd covers inherit a canonical orientation from the simple orbit.  The
    double cover's orientation extends to all even covers, so a family with an
    even cover needs ``{1, 2}``.  When ``n = 2`` the simple orbit suffices as
    long as every even cover present is good.
    """
    families: dict[str, list[OrbitDescriptor]] = {}
    for orbit in orbits:
        members = families.setdefault(orbit.id, [])
        if members and members[0].simple_path != orbit.simple_path:
            raise FamilyError(f"descriptors with id {orbit.id} have different simple paths")
        members.append(orbit)
    out = []
    for oid in sorted(families):
        evens = [o for o in families[oid] if o.multiplicity % 2 == 0]
        if not evens:
            needed = (1,)
        elif n == 2 and all(is_good(o, tol) for o in evens):
            needed = (1,)
        else:
            needed = (1, 2)
        out.append((oid, needed))
    return out
