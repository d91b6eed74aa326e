"""Small constructors for orbits and surfaces with prescribed indices.

These are used by ``selftest`` and handy in tests: an odd index ``2j + 1`` is
realized by ``rotation(j + 1/2)``, an even index ``2k`` by the hyperbolic
path ``diag(e^t, e^-t)`` dragged through ``k`` full turns.  Extra dimensions
are padded with ``pos_hyp(1)`` blocks, which have index zero.
"""
from __future__ import annotations

from .orbits import OrbitDescriptor
from .symplectic import SymplecticPath, direct_sum, positive_hyperbolic, product, rotation


def path_with_index(mu: int, dim: int = 2) -> SymplecticPath:
    if dim < 2 or dim % 2:
        raise ValueError(f"dimension must be even and positive, got {dim}")
    if mu % 2:
        core = rotation((mu - 1) // 2 + 0.5)
    else:
        core = product(rotation(mu // 2), positive_hyperbolic(1.0))
    if dim == 2:
        return core
    return direct_sum(core, *[positive_hyperbolic(1.0)] * (dim // 2 - 1))


def orbit_with_index(oid: str, mu: int, n: int = 2) -> OrbitDescriptor:
    """A simple orbit in a cobordism of half-dimension ``n`` with index ``mu``."""
    return OrbitDescriptor(oid, path_with_index(mu, 2 * n - 2))


# generator name, index; n = 2 so the grading is mu - 1
_DGA_GENERATORS = (("s", 1), ("t", 1), ("v", 2), ("w", 2), ("u", 3), ("q", 3))

# image terms (coefficient, monomial); d(s) = d(t) = 0
_DGA_IMAGES = {
    "v": ((1, "s"),),
    "w": ((1, "t"),),
    "u": ((1, "vt"), (-1, "sw")),
    "q": ((1, "ws"), (-1, "vt")),
}


def dga_terms() -> list[tuple[str, int]]:
    """Every ``(generator, term index)`` of the six-generator fixture."""
    return [(g, i) for g, terms in _DGA_IMAGES.items() for i in range(len(terms))]


def dga_fixture(flip: tuple[str, int] | None = None):
    """Six good generators with ``d o d = 0``; ``flip`` negates one image term.

    Gradings are 0 for ``s, t``, 1 for ``v, w`` and 2 for ``u, q``.  Every
    term is needed for a cancellation, so any single flip breaks ``d o d = 0``.
    """
    from .algebra import AlgebraElement, DifferentialData

    gens = {name: orbit_with_index(name, mu, 2) for name, mu in _DGA_GENERATORS}
    images = {}
    for g, terms in _DGA_IMAGES.items():
        images[gens[g]] = AlgebraElement.from_terms(
            (
                ([gens[c] for c in mono], -coeff if flip == (g, i) else coeff)
                for i, (coeff, mono) in enumerate(terms)
            ),
            2,
        )
    return gens, DifferentialData(images, 2)
