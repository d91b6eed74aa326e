"""Independent index oracles and random fixtures shared by the tests.

The winding oracle never looks at crossing forms: for a path in Sp(2) it
tracks how far each unit vector turns, and reads the index off the interval
of normalized turning numbers.  If that interval contains an integer k the
index is 2k, otherwise it is 2 floor(interval) + 1.
"""
from __future__ import annotations

import math

import numpy as np

from sftorient import symplectic as sp
from sftorient.errors import IrregularCrossing, UnresolvedCrossing

ROTATION_GRID = 4001
DIRECTIONS = 181


def winding_interval(path, samples: int = ROTATION_GRID, directions: int = DIRECTIONS):
    ts = np.linspace(0.0, 1.0, samples)
    mats = path.values(ts)
    phis = np.linspace(0.0, math.pi, directions, endpoint=False)
    vs = np.stack([np.cos(phis), np.sin(phis)])
    images = mats @ vs
    angles = np.unwrap(np.arctan2(images[:, 1, :], images[:, 0, :]), axis=0)
    turns = (angles[-1] - angles[0]) / (2 * math.pi)
    return float(turns.min()), float(turns.max())


def winding_index_2d(path) -> int:
    if path.dim != 2:
        raise ValueError("the winding oracle needs a 2x2 path")
    lo, hi = winding_interval(path)
    k = math.ceil(lo)
    if k <= hi:
        return 2 * k
    return 2 * math.floor(lo) + 1


def winding_index(blocks) -> int:
    """Oracle for a direct sum given as its list of 2x2 blocks."""
    return sum(winding_index_2d(b) for b in blocks)


def fine_index(path) -> int:
    """The main routine at ten times the default starting grid."""
    return sp.maslov_index_rs(path, grid=10 * sp.INITIAL_GRID)


# random expression paths in dimension 2 ---------------------------------------


def random_leaf(rng: np.random.Generator):
    kind = rng.integers(4)
    if kind == 0:
        return sp.rotation(rng.uniform(-2.5, 2.5))
    if kind == 1:
        return sp.shear(rng.uniform(-1.5, 1.5))
    if kind == 2:
        return sp.positive_hyperbolic(rng.uniform(0.2, 1.0))
    return sp.negative_hyperbolic(rng.uniform(0.2, 1.0))


def random_path_2d(rng: np.random.Generator, depth: int = 2):
    """A random expression tree of 2x2 constructors."""
    if depth == 0:
        return random_leaf(rng)
    kind = rng.integers(5)
    if kind == 0:
        return random_leaf(rng)
    if kind == 1:
        parts = [random_path_2d(rng, depth - 1) for _ in range(rng.integers(2, 4))]
        return sp.concatenate(*parts)
    if kind == 2:
        return sp.product(sp.rotation(int(rng.integers(-2, 3))), random_path_2d(rng, depth - 1))
    if kind == 3:
        return sp.iterate(random_leaf(rng), int(rng.integers(2, 4)))
    return sp.product(random_leaf(rng), random_leaf(rng))


def margin(path) -> float:
    return abs(np.linalg.det(path.endpoint - np.eye(path.dim)))


def is_regular(path) -> bool:
    """False when the index routine declines the path as irregular or too close to degenerate."""
    try:
        sp.maslov_index_rs(path)
    except (IrregularCrossing, UnresolvedCrossing):
        return False
    return True


def nondegenerate_2d(rng: np.random.Generator, min_margin: float = 1e-2):
    """Rejection-sample a random regular 2x2 path with a clearly nondegenerate endpoint."""
    while True:
        p = random_path_2d(rng)
        if margin(p) > min_margin and is_regular(p):
            return p


def nondegenerate_blocks(rng: np.random.Generator, count: int, min_margin: float = 1e-2):
    return [nondegenerate_2d(rng, min_margin) for _ in range(count)]


def _admissible(path, deltas) -> bool:
    return all(sp.twist_is_admissible(path, d, side) for d in deltas for side in sp.PUNCTURE_SIDES)


def twist_ready(rng: np.random.Generator, dim: int, deltas, tries: int = 10000):
    """A random block path for which every listed twist satisfies the gap condition.

    The gap condition holds for a direct sum iff it holds for every block, so
    blocks are drawn one at a time.
    """
    blocks = []
    for _ in range(tries):
        p = random_path_2d(rng)
        if margin(p) > 1e-2 and _admissible(p, deltas) and is_regular(p):
            blocks.append(p)
            if len(blocks) == dim // 2:
                path = blocks[0] if dim == 2 else sp.direct_sum(*blocks)
                assert _admissible(path, deltas)
                return blocks, path
    raise RuntimeError("no admissible path found")
