"""Deterministic analytic cross-checks behind ``sftorient selftest``."""
from __future__ import annotations

import math
from typing import Callable, Iterator, NamedTuple

from . import symplectic as sp
from .algebra import verify_d_squared
from .fixtures import dga_fixture, dga_terms, orbit_with_index
from .index import DecoratedSurface, fredholm_index, glue_surfaces, moduli_dimension
from .orbits import OrbitDescriptor, classify, cz_index
from .signs import glue_sign, rotate_marker, swap_adjacent, union_sign


class Check(NamedTuple):
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def line(self) -> str:
        status = "ok  " if self.ok else "FAIL"
        return f"{status} {self.name}: expected {self.expected}, got {self.got}"


def _mu(path) -> int:
    return sp.maslov_index_rs(path)


def _index_checks() -> Iterator[Check]:
    for theta in (0.3, 0.5, 1.25, 2.5, 3.75, 4.9, -0.25, -1.6):
        yield Check(f"mu(rotation({theta}))", 2 * math.floor(theta) + 1, _mu(sp.rotation(theta)))
    yield Check(
        "mu(sum(rotation(0.5), rotation(2.5)))",
        6,
        _mu(sp.direct_sum(sp.rotation(0.5), sp.rotation(2.5))),
    )
    nh = sp.negative_hyperbolic(1.0)
    for m in (1, 2, 3):
        yield Check(f"mu(iterate(neg_hyp(1), {m}))", m, _mu(sp.iterate(nh, m)))
    yield Check("mu(iterate(rotation(0.3), 3))", 1, _mu(sp.iterate(sp.rotation(0.3), 3)))
    base = sp.rotation(0.5)
    yield Check("mu(twist(rotation(0.5), 0.25, +))", 0, _mu(sp.twist(base, 0.25, sp.POSITIVE)))
    yield Check("mu(twist(rotation(0.5), 0.25, -))", 2, _mu(sp.twist(base, 0.25, sp.NEGATIVE)))
    yield Check("mu(resample(rotation(2.5), 64))", 5, _mu(sp.resample(sp.rotation(2.5), 64)))


def _orbit_checks() -> Iterator[Check]:
    nh = sp.negative_hyperbolic(1.0)
    for m, want in ((1, "good"), (2, "bad"), (3, "good"), (4, "bad")):
        yield Check(f"classify(neg_hyp(1)^{m})", want, str(classify(OrbitDescriptor("h", nh, m))))
    e = OrbitDescriptor("e", sp.rotation(0.3), 6)
    got = [str(classify(e.cover(m))) for m in range(1, 7)]
    yield Check("classify(rotation(0.3)^1..6)", ["good"] * 6, got)
    yield Check("cz(rotation(0.3)^3)", 1, cz_index(e.cover(3)))


def _surface_checks() -> Iterator[Check]:
    def orb(name, mu, n):
        return orbit_with_index(name, mu, n)

    yield Check("fredholm(sphere, n=2)", 4, fredholm_index(DecoratedSurface(0, 2)))
    s = DecoratedSurface(0, 2, positives=(orb("a", 3, 2),))
    yield Check("fredholm(sphere, +mu3, n=2)", 6, fredholm_index(s))
    yield Check("dim(sphere, +mu3, n=2)", 2, moduli_dimension(s))
    b = orb("b", 2, 3)
    torus = DecoratedSurface(1, 3, positives=(b,), negatives=(b,))
    yield Check("fredholm(torus, +mu2 -mu2, n=3)", -4, fredholm_index(torus))
    c = orb("c", 1, 3)
    s = DecoratedSurface(0, 3, positives=(b, b), negatives=(c,), chern=1)
    yield Check("dim(sphere, +mu2 +mu2 -mu1, n=3, c1=1)", 5, moduli_dimension(s))
    cyl = DecoratedSurface(0, 3, positives=(c,), negatives=(c,))
    yield Check("dim(trivial cylinder)", 0, moduli_dimension(cyl))
    top = DecoratedSurface(0, 3, positives=(b,), negatives=(c, b))
    bottom = DecoratedSurface(0, 3, positives=(b, c), negatives=(c,))
    glued = glue_surfaces(top, bottom, 2)
    yield Check("genus(glue at t=2)", 1, glued.genus)
    yield Check(
        "fredholm additivity at t=2",
        fredholm_index(top) + fredholm_index(bottom) - 4,
        fredholm_index(glued),
    )


def _sign_checks() -> Iterator[Check]:
    # n = 3, so the grading equals mu
    g = {k: orbit_with_index(f"g{k}", k, 3) for k in (1, 2, 3, 4)}

    def surf(pos=(), neg=()):
        return DecoratedSurface(0, 3, tuple(g[k] for k in pos), tuple(g[k] for k in neg))

    yield Check("swap gradings 2,4", 1, int(swap_adjacent(surf(neg=(2, 4)), 0)))
    yield Check("swap gradings 1,3", -1, int(swap_adjacent(surf(neg=(1, 3)), 0)))
    yield Check("swap gradings 1,2", 1, int(swap_adjacent(surf(neg=(1, 2)), 0)))
    yield Check("union {1} | {1}", -1, int(union_sign(surf(neg=(1,)), surf(pos=(1,)))))
    yield Check("union {1,2} | {3}", -1, int(union_sign(surf(neg=(1, 2)), surf(pos=(3,)))))
    top = surf(neg=(1, 3))
    yield Check("complete gluing", 1, int(glue_sign(top, surf(pos=(3, 1)), 2)))
    yield Check("glue leftovers {1} | {1}", -1, int(glue_sign(top, surf(pos=(3, 1)), 1)))
    yield Check(
        "glue leftovers {2} | {1,3}",
        1,
        int(glue_sign(surf(neg=(2, 4)), surf(pos=(4, 1, 3)), 1)),
    )
    h = OrbitDescriptor("h", sp.negative_hyperbolic(1.0), 2)
    e = OrbitDescriptor("e", sp.rotation(0.3), 3)
    bad = DecoratedSurface(0, 2, positives=(h,))
    good = DecoratedSurface(0, 2, positives=(e,))
    yield Check("rotate good marker j=2", 1, int(rotate_marker(good, sp.POSITIVE, 0, 2)))
    yield Check("rotate bad marker j=1", -1, int(rotate_marker(bad, sp.POSITIVE, 0, 1)))
    yield Check("rotate bad marker j=m", 1, int(rotate_marker(bad, sp.POSITIVE, 0, 2)))


def _algebra_checks() -> Iterator[Check]:
    _, d = dga_fixture()
    yield Check("d^2 = 0 on the six-generator fixture", 0, len(verify_d_squared(d)))
    broken = sum(1 for f in dga_terms() if verify_d_squared(dga_fixture(f)[1]))
    yield Check("single sign flips detected", len(dga_terms()), broken)


SECTIONS: tuple[tuple[str, Callable[[], Iterator[Check]]], ...] = (
    ("indices", _index_checks),
    ("orbits", _orbit_checks),
    ("surfaces", _surface_checks),
    ("signs", _sign_checks),
    ("algebra", _algebra_checks),
)


def run_checks() -> list[tuple[str, Check]]:
    return [(section, c) for section, gen in SECTIONS for c in gen()]


def report_lines(results: list[tuple[str, Check]]) -> list[str]:
    lines = []
    current = None
    for section, check in results:
        if section != current:
            lines.append(f"# {section}")
            current = section
        lines.append(check.line())
    passed = sum(c.ok for _, c in results)
    lines.append(f"selftest: {passed}/{len(results)} passed")
    return lines
