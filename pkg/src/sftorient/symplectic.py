"""Symplectic matrices, symplectic paths and the Robbin-Salamon index.

Coordinates are ordered ``x1, y1, ..., xm, ym`` with the standard form
``omega0 = sum dx_i ^ dy_i``.  In matrix terms ``omega0(u, v) = u^T Omega v``
with ``Omega = -J0`` and ``J0 = blockdiag([[0, -1], [1, 0]], ...)``; a matrix
``A`` is symplectic iff ``A^T J0 A = J0``.

All paths are parameterized by ``t`` in ``[0, 1]`` and start at the identity.
Two kinds of path bodies exist: expression trees built from the constructors
below (evaluated and differentiated in closed form) and :class:`SampleTable`
(matrices at strictly increasing sample times).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import expm, logm

from .errors import (
    DegenerateEndpoint,
    InternalInconsistency,
    IrregularCrossing,
    PathError,
    UnresolvedCrossing,
)

SYMPLECTIC_TOL = 1e-8
NONDEGENERACY_TOL = 1e-6
INITIAL_GRID = 256
MIN_CELL = 1e-5
CLUSTER_SAMPLES = 256
MAX_CELLS = 50_000
# interval width to which a crossing time is refined
CROSSING_RESOLUTION = 1e-9
MIN_SAMPLES = 16
MAX_SAMPLE_JUMP = 0.5

POSITIVE = "positive"
NEGATIVE = "negative"
PUNCTURE_SIDES = (POSITIVE, NEGATIVE)


def complex_structure(m: int) -> np.ndarray:
    """Standard complex structure ``J0`` on ``R^{2m}``."""
    return np.kron(np.eye(m), np.array([[0.0, -1.0], [1.0, 0.0]]))


def symplectic_form(m: int) -> np.ndarray:
    """Matrix ``Omega`` with ``omega0(u, v) = u @ Omega @ v``."""
    return -complex_structure(m)


def symplectic_defect(a: np.ndarray) -> float:
    """``max |A^T J0 A - J0|`` relative to the squared size of ``A``."""
    a = np.asarray(a, dtype=float)
    j0 = complex_structure(a.shape[0] // 2)
    scale = max(1.0, float(np.max(np.abs(a)))) ** 2
    return float(np.max(np.abs(a.T @ j0 @ a - j0))) / scale


def is_symplectic(a, tol: float = SYMPLECTIC_TOL) -> bool:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        return False
    if symplectic_defect(a) > tol:
        return False
    scale = max(1.0, float(np.max(np.abs(a)))) ** a.shape[0]
    return abs(np.linalg.det(a) - 1.0) <= tol * scale


def _rot(phi: np.ndarray) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    out = np.empty(phi.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def _rotate_lines(phi: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """Left-multiply each ``mats[i]`` by the rotation ``phi[i]`` on every complex line."""
    r = _rot(phi)
    out = np.empty_like(mats)
    for b in range(0, mats.shape[1], 2):
        out[:, b : b + 2, :] = np.einsum("tij,tjk->tik", r, mats[:, b : b + 2, :])
    return out


def _as_times(t) -> np.ndarray:
    return np.atleast_1d(np.asarray(t, dtype=float))


class SymplecticPath:
    """Base class of symplectic paths ``A: [0, 1] -> Sp(2m)`` with ``A(0) = Id``.

    Subclasses implement ``_values(ts)`` and ``_derivs(ts, side)`` on arrays of
    times, returning stacks of shape ``(len(ts), dim, dim)``.  ``side`` selects
    the one-sided derivative at a breakpoint (``+1`` right, ``-1`` left).
    """

    dim: int

    def _values(self, ts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derivs(self, ts: np.ndarray, side: int = 1) -> np.ndarray:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior times where the derivative may jump."""
        return ()

    # interpolated bodies are re-checked with a looser tolerance
    _eval_tol_factor = 1.0

    def values(self, ts) -> np.ndarray:
        return self._values(_as_times(ts))

    def derivatives(self, ts, side: int = 1) -> np.ndarray:
        return self._derivs(_as_times(ts), side)

    def __call__(self, t: float) -> np.ndarray:
        return path_eval(self, t)

    def derivative(self, t: float, side: int = 1) -> np.ndarray:
        return self._derivs(_as_times(t), side)[0]

    @cached_property
    def endpoint(self) -> np.ndarray:
        return self._values(np.array([1.0]))[0]


def path_eval(path: SymplecticPath, t: float, tol: float = SYMPLECTIC_TOL) -> np.ndarray:
    """Evaluate ``path`` at ``t`` and check that the result is symplectic."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise PathError(f"t = {t} is outside [0, 1]")
    a = path._values(np.array([t]))[0]
    if not is_symplectic(a, tol * path._eval_tol_factor):
        raise PathError(
            f"matrix at t = {t} violates the symplectic tolerance "
            f"(defect {symplectic_defect(a):.3e})"
        )
    return a


@dataclass(frozen=True)
class Rotation(SymplecticPath):
    """``t -> R(2 pi theta t)`` on ``R^2``."""

    theta: float
    dim = 2

    def _values(self, ts):
        return _rot(2 * math.pi * self.theta * ts)

    def _derivs(self, ts, side=1):
        w = 2 * math.pi * self.theta
        return w * _rot(w * ts + math.pi / 2)


@dataclass(frozen=True)
class PositiveHyperbolic(SymplecticPath):
    """``t -> diag(e^{a t}, e^{-a t})``."""

    a: float
    dim = 2

    def _values(self, ts):
        out = np.zeros(ts.shape + (2, 2))
        out[:, 0, 0] = np.exp(self.a * ts)
        out[:, 1, 1] = np.exp(-self.a * ts)
        return out

    def _derivs(self, ts, side=1):
        out = np.zeros(ts.shape + (2, 2))
        out[:, 0, 0] = self.a * np.exp(self.a * ts)
        out[:, 1, 1] = -self.a * np.exp(-self.a * ts)
        return out


@dataclass(frozen=True)
class NegativeHyperbolic(SymplecticPath):
    """``t -> R(pi t) diag(e^{a t}, e^{-a t})``, ending at ``-diag(e^a, e^-a)``."""

    a: float
    dim = 2

    def _values(self, ts):
        return _rot(math.pi * ts) @ PositiveHyperbolic(self.a)._values(ts)

    def _derivs(self, ts, side=1):
        h = PositiveHyperbolic(self.a)
        r = _rot(math.pi * ts)
        dr = math.pi * _rot(math.pi * ts + math.pi / 2)
        return dr @ h._values(ts) + r @ h._derivs(ts)


@dataclass(frozen=True)
class Shear(SymplecticPath):
    """``t -> [[1, s t], [0, 1]]``; degenerate on its own, useful inside concatenations."""

    slope: float
    dim = 2

    def _values(self, ts):
        out = np.zeros(ts.shape + (2, 2))
        out[:, 0, 0] = out[:, 1, 1] = 1.0
        out[:, 0, 1] = self.slope * ts
        return out

    def _derivs(self, ts, side=1):
        out = np.zeros(ts.shape + (2, 2))
        out[:, 0, 1] = self.slope
        return out


@dataclass(frozen=True)
class DirectSum(SymplecticPath):
    parts: tuple[SymplecticPath, ...]

    def __post_init__(self):
        if not self.parts:
            raise PathError("direct_sum needs at least one path")

    @property
    def dim(self):
        return sum(p.dim for p in self.parts)

    def _blocks(self, stacks):
        out = np.zeros((stacks[0].shape[0], self.dim, self.dim))
        i = 0
        for s in stacks:
            d = s.shape[1]
            out[:, i : i + d, i : i + d] = s
            i += d
        return out

    def _values(self, ts):
        return self._blocks([p._values(ts) for p in self.parts])

    def _derivs(self, ts, side=1):
        return self._blocks([p._derivs(ts, side) for p in self.parts])

    @property
    def breakpoints(self):
        return tuple(sorted({b for p in self.parts for b in p.breakpoints}))


def _piece_index(s: np.ndarray, count: int, side: int) -> np.ndarray:
    """Index of the unit piece containing ``s`` in ``[0, count]``."""
    if side < 0:
        k = np.ceil(s) - 1
    else:
        k = np.floor(s)
    return np.clip(k, 0, count - 1).astype(int)


@dataclass(frozen=True)
class Concatenation(SymplecticPath):
    """Run the parts one after another, each continuing from the previous endpoint.

    On ``[j/k, (j+1)/k]`` the value is ``parts[j](k t - j) @ P_j`` where
    ``P_j`` is the product of the endpoints of the earlier parts.
    """

    parts: tuple[SymplecticPath, ...]

    def __post_init__(self):
        if not self.parts:
            raise PathError("concat needs at least one path")
        if len({p.dim for p in self.parts}) != 1:
            raise PathError("concat parts must share a dimension")

    @property
    def dim(self):
        return self.parts[0].dim

    @cached_property
    def _prefixes(self):
        acc = np.eye(self.dim)
        out = []
        for p in self.parts:
            out.append(acc)
            acc = p.endpoint @ acc
        return out

    def _eval(self, ts, side, deriv):
        k = len(self.parts)
        s = k * ts
        idx = _piece_index(s, k, side)
        out = np.empty((ts.shape[0], self.dim, self.dim))
        for j in np.unique(idx):
            mask = idx == j
            local = s[mask] - j
            part = self.parts[j]
            m = k * part._derivs(local, side) if deriv else part._values(local)
            out[mask] = m @ self._prefixes[j]
        return out

    def _values(self, ts):
        return self._eval(ts, 1, False)

    def _derivs(self, ts, side=1):
        return self._eval(ts, side, True)

    @property
    def breakpoints(self):
        k = len(self.parts)
        pts = {j / k for j in range(1, k)}
        for j, p in enumerate(self.parts):
            pts.update((j + b) / k for b in p.breakpoints)
        return tuple(sorted(pts))


@dataclass(frozen=True)
class Iterate(SymplecticPath):
    """``t -> A({m t}) A(1)^floor(m t)``: the linearized flow over ``m`` periods."""

    base: SymplecticPath
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise PathError(f"iterate needs a positive integer multiplicity, got {self.m}")

    @property
    def dim(self):
        return self.base.dim

    @cached_property
    def _powers(self):
        a1 = self.base.endpoint
        out = [np.eye(self.dim)]
        for _ in range(self.m - 1):
            out.append(out[-1] @ a1)
        return out

    def _eval(self, ts, side, deriv):
        s = self.m * ts
        idx = _piece_index(s, self.m, side)
        out = np.empty((ts.shape[0], self.dim, self.dim))
        for j in np.unique(idx):
            mask = idx == j
            local = s[mask] - j
            m = self.m * self.base._derivs(local, side) if deriv else self.base._values(local)
            out[mask] = m @ self._powers[j]
        return out

    def _values(self, ts):
        if self.m == 1:
            return self.base._values(ts)
        return self._eval(ts, 1, False)

    def _derivs(self, ts, side=1):
        if self.m == 1:
            return self.base._derivs(ts, side)
        return self._eval(ts, side, True)

    @property
    def breakpoints(self):
        pts = {j / self.m for j in range(1, self.m)}
        for j in range(self.m):
            pts.update((j + b) / self.m for b in self.base.breakpoints)
        return tuple(sorted(pts))


@dataclass(frozen=True)
class Product(SymplecticPath):
    """Pointwise product ``t -> L(t) R(t)``."""

    left: SymplecticPath
    right: SymplecticPath

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise PathError("prod factors must share a dimension")

    @property
    def dim(self):
        return self.left.dim

    def _values(self, ts):
        return self.left._values(ts) @ self.right._values(ts)

    def _derivs(self, ts, side=1):
        return self.left._derivs(ts, side) @ self.right._values(ts) + self.left._values(
            ts
        ) @ self.right._derivs(ts, side)

    @property
    def breakpoints(self):
        return tuple(sorted(set(self.left.breakpoints) | set(self.right.breakpoints)))


@dataclass(frozen=True)
class Twist(SymplecticPath):
    """``t -> e^{-+ 2 pi i delta t} (Id_2 (+) A(t))``.

    The scalar acts on every complex line, including the new leading ``R^2``
    summand.  The minus sign is used at a positive puncture, the plus sign at
    a negative one.
    """

    base: SymplecticPath
    delta: float
    orientation: str

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise PathError(f"twist rate delta must lie in (0, 1), got {self.delta}")
        if self.orientation not in PUNCTURE_SIDES:
            raise PathError(f"twist orientation must be one of {PUNCTURE_SIDES}")

    @property
    def dim(self):
        return self.base.dim + 2

    @property
    def rate(self) -> float:
        sign = -1.0 if self.orientation == POSITIVE else 1.0
        return sign * 2 * math.pi * self.delta

    def _padded(self, stack, identity_block):
        out = np.zeros((stack.shape[0], self.dim, self.dim))
        if identity_block:
            out[:, 0, 0] = out[:, 1, 1] = 1.0
        out[:, 2:, 2:] = stack
        return out

    def _values(self, ts):
        return _rotate_lines(self.rate * ts, self._padded(self.base._values(ts), True))

    def _derivs(self, ts, side=1):
        w = self.rate
        inner = self._padded(self.base._values(ts), True)
        dinner = self._padded(self.base._derivs(ts, side), False)
        rotated = _rotate_lines(w * ts + math.pi / 2, inner)
        return w * rotated + _rotate_lines(w * ts, dinner)

    @property
    def breakpoints(self):
        return self.base.breakpoints


@dataclass(frozen=True, eq=False)
class SampleTable(SymplecticPath):
    """A path given by samples ``A(t_0) = Id, ..., A(t_N)`` with ``t_0 = 0 < ... < t_N = 1``.

    Between samples the path follows ``A_i expm(s log(A_i^{-1} A_{i+1}))``,
    which stays symplectic; derivatives come from second-order central
    differences of the samples (one-sided at the ends), interpolated linearly.
    """

    times: np.ndarray
    matrices: np.ndarray
    tol: float = SYMPLECTIC_TOL

    _eval_tol_factor = 10.0

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        mats = np.array(self.matrices, dtype=float)
        if times.ndim != 1 or mats.ndim != 3 or mats.shape[0] != times.shape[0]:
            raise PathError("sample table needs one square matrix per sample time")
        if mats.shape[1] != mats.shape[2] or mats.shape[1] % 2:
            raise PathError("sample matrices must be square of even size")
        if times.shape[0] < MIN_SAMPLES:
            raise PathError(f"sample table needs at least {MIN_SAMPLES} samples")
        if times[0] != 0.0 or times[-1] != 1.0 or np.any(np.diff(times) <= 0):
            raise PathError("sample times must increase strictly from 0 to 1")
        if np.max(np.abs(mats[0] - np.eye(mats.shape[1]))) > self.tol:
            raise PathError("sample table must start at the identity")
        for i, a in enumerate(mats):
            if not is_symplectic(a, self.tol):
                raise PathError(f"sample {i} is not symplectic")
        jumps = np.max(np.abs(np.diff(mats, axis=0)), axis=(1, 2))
        if np.any(jumps >= MAX_SAMPLE_JUMP):
            i = int(np.argmax(jumps))
            raise PathError(
                f"samples {i} and {i + 1} differ by {jumps[i]:.3f} >= {MAX_SAMPLE_JUMP}; "
                "sampling too coarse"
            )
        times.setflags(write=False)
        mats.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "matrices", mats)

    def __eq__(self, other):
        return (
            isinstance(other, SampleTable)
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.matrices, other.matrices)
        )

    def __hash__(self):
        return hash((self.times.tobytes(), self.matrices.tobytes()))

    @property
    def dim(self):
        return self.matrices.shape[1]

    @cached_property
    def _logs(self):
        logs = []
        for a, b in zip(self.matrices[:-1], self.matrices[1:]):
            step = np.linalg.solve(a, b)
            lg = logm(step)
            if np.max(np.abs(np.imag(lg))) > 1e-9:
                raise PathError("consecutive samples have no real logarithm; sampling too coarse")
            logs.append(np.real(lg))
        return np.array(logs)

    @cached_property
    def _sample_derivs(self):
        return np.gradient(self.matrices, self.times, axis=0, edge_order=2)

    def _locate(self, ts):
        i = np.clip(np.searchsorted(self.times, ts, side="right") - 1, 0, len(self.times) - 2)
        s = (ts - self.times[i]) / (self.times[i + 1] - self.times[i])
        return i, s

    def _values(self, ts):
        i, s = self._locate(ts)
        steps = expm(s[:, None, None] * self._logs[i])
        return self.matrices[i] @ steps

    def _derivs(self, ts, side=1):
        i, s = self._locate(ts)
        d = self._sample_derivs
        return d[i] + s[:, None, None] * (d[i + 1] - d[i])


# constructors --------------------------------------------------------------


def rotation(theta: float) -> Rotation:
    return Rotation(float(theta))


def positive_hyperbolic(a: float) -> PositiveHyperbolic:
    return PositiveHyperbolic(float(a))


def negative_hyperbolic(a: float) -> NegativeHyperbolic:
    return NegativeHyperbolic(float(a))


def shear(slope: float) -> Shear:
    return Shear(float(slope))


def direct_sum(*paths: SymplecticPath) -> SymplecticPath:
    return DirectSum(tuple(paths))


def concatenate(*paths: SymplecticPath) -> SymplecticPath:
    return Concatenation(tuple(paths))


def product(left: SymplecticPath, right: SymplecticPath) -> Product:
    return Product(left, right)


def twist(path: SymplecticPath, delta: float, orientation: str) -> Twist:
    """Path ``A'`` obtained by adding a trivial summand and rotating all lines by ``-+delta``.

    At a positive puncture ``mu(A') = mu(A) - 1``, at a negative puncture
    ``mu(A') = mu(A) + 1``, provided ``delta`` is inside the spectral gap
    (see :func:`twist_is_admissible`).
    """
    return Twist(path, float(delta), orientation)


def iterate(path: SymplecticPath, m: int) -> SymplecticPath:
    if m == 1:
        return path
    return Iterate(path, m)


def sample_table(times: Sequence[float], matrices, tol: float = SYMPLECTIC_TOL) -> SampleTable:
    return SampleTable(np.asarray(times, dtype=float), np.asarray(matrices, dtype=float), tol)


def resample(path: SymplecticPath, count: int) -> SampleTable:
    """Sample ``path`` at ``count`` uniform times."""
    ts = np.linspace(0.0, 1.0, count)
    return sample_table(ts, path.values(ts))


# index ----------------------------------------------------------------------


def is_nondegenerate(path: SymplecticPath, tol: float = NONDEGENERACY_TOL) -> bool:
    """True iff 1 is not an eigenvalue of the endpoint, i.e. ``|det(A(1) - Id)| > tol``."""
    a1 = path.endpoint
    return bool(abs(np.linalg.det(a1 - np.eye(path.dim))) > tol)


def twist_is_admissible(
    path: SymplecticPath, delta: float, orientation: str, samples: int = 2048
) -> bool:
    """Whether ``delta`` lies in the spectral gap needed for the twist index shift.

    The shift holds when ``e^{-+ 2 pi i s delta} A(1)`` has no eigenvalue 1 for
    all ``s`` in ``[0, 1]``.  The check is conservative: the smallest singular
    value of ``e^{...} A(1) - Id`` on an ``s``-grid must exceed the variation
    it can have between grid points.
    """
    rate = Twist(path, delta, orientation).rate
    a1 = path.endpoint
    s = np.linspace(0.0, 1.0, samples + 1)
    rotated = _rotate_lines(rate * s, np.broadcast_to(a1, (s.shape[0],) + a1.shape).copy())
    sig = np.linalg.svd(rotated - np.eye(path.dim), compute_uv=False)[:, -1]
    lipschitz = abs(rate) * np.linalg.norm(a1, 2)
    return bool(np.min(sig) > lipschitz / samples)


class Crossing(NamedTuple):
    """An interior crossing: time, kernel dimension and twice its index contribution."""

    t: float
    kernel_dim: int
    doubled_contribution: int
    at_breakpoint: bool


def _sym(m):
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def _signature(form: np.ndarray, tol: float, where: str) -> int:
    eig = np.linalg.eigvalsh(form)
    if eig.size and np.min(np.abs(eig)) <= tol:
        raise IrregularCrossing(
            f"crossing form at {where} is singular (eigenvalue {np.min(np.abs(eig)):.3e})"
        )
    return int(np.sum(eig > 0) - np.sum(eig < 0))


def start_signature(path: SymplecticPath, tol: float = NONDEGENERACY_TOL) -> int:
    """Signature of the crossing form at ``t = 0`` on the whole space."""
    omega = symplectic_form(path.dim // 2)
    d0 = path.derivative(0.0, side=1)
    scale = 1.0 + np.linalg.norm(d0, 2)
    return _signature(_sym(omega @ d0), tol * scale, "t = 0")


def _kernel_form(path, t, kernel, side, omega):
    d = path.derivative(t, side)
    return kernel.T @ _sym(omega @ d) @ kernel


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo: float, hi: float, width: float) -> tuple[float, float]:
    """Golden-section search for a minimum of a unimodal ``f`` on ``[lo, hi]``.

    scipy's bounded Brent stops at a relative tolerance of about 1.5e-8, too
    coarse for locating zeros of ``sigma_min`` that vanish linearly.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _sigma_min(path: SymplecticPath, ts: np.ndarray) -> np.ndarray:
    return np.linalg.svd(path._values(ts) - np.eye(path.dim), compute_uv=False)[:, -1]


def _sigma_and_speed(path: SymplecticPath, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``sigma_min(A(t) - Id)`` and ``|A'(t)|`` (both one-sided derivatives at breakpoints)."""
    speed = np.linalg.norm(path._derivs(ts, 1), ord=2, axis=(1, 2))
    if path.breakpoints:
        speed = np.maximum(speed, np.linalg.norm(path._derivs(ts, -1), ord=2, axis=(1, 2)))
    return _sigma_min(path, ts), speed


def _start_gap(path: SymplecticPath, n: int) -> float:
    """Length ``tau`` of an interval ``(0, tau]`` that provably holds no crossing.

    Near the start ``|A(t) - Id - t A'(0)| <= t^2 M / 2`` with ``M`` a bound on
    ``|A''|``, so ``sigma_min(A(t) - Id) >= t (s0 - t M / 2)`` where ``s0`` is
    the smallest singular value of ``A'(0)``; it is positive for ``t <= s0 / M``.
    """
    h = 1.0 / n
    s0 = np.linalg.svd(path.derivative(0.0, 1), compute_uv=False)[-1]
    ts = np.linspace(0.0, h, 65)
    d = path._derivs(ts)
    jumps = np.linalg.norm(np.diff(d, axis=0), ord=2, axis=(1, 2)) / (ts[1] - ts[0])
    bound = 2.0 * float(np.max(jumps))
    tau = h if bound <= 0 else min(h, s0 / bound)
    for b in path.breakpoints:
        if b > 0:
            tau = min(tau, 0.5 * b)
            break
    return tau


def _suspicious_intervals(
    path: SymplecticPath, tol: float, n: int
) -> tuple[float, list[tuple[float, float]]]:
    """The start gap and the maximal intervals where ``sigma_min(A(t) - Id)`` is not certified above ``tol``.

    Cells of the grid are bisected until either the Lipschitz lower bound
    ``(g(a) + g(b)) / 2 - L (b - a) / 2`` clears the threshold (``L`` is 1.5
    times the larger speed ``|A'|`` at the two ends) or the cell is
    shorter than :data:`MIN_CELL`.
    """
    tau = _start_gap(path, n)
    grid = np.union1d(np.linspace(tau, 1.0, n + 1), [b for b in path.breakpoints if tau < b < 1])
    g, dn = _sigma_and_speed(path, grid)
    threshold = tol * (1.0 + 1.5 * float(np.max(dn)))
    a, b, ga, gb, da, db = grid[:-1], grid[1:], g[:-1], g[1:], dn[:-1], dn[1:]
    total = 0
    while True:
        lip = 1.5 * np.maximum(da, db) + 1e-12
        keep = 0.5 * (ga + gb) - 0.5 * lip * (b - a) <= threshold
        a, b, ga, gb, da, db = (x[keep] for x in (a, b, ga, gb, da, db))
        total += a.size
        if total > MAX_CELLS:
            raise UnresolvedCrossing(
                f"more than {MAX_CELLS} cells stay near a crossing; the path is too close to degenerate"
            )
        if a.size == 0 or np.max(b - a) < MIN_CELL:
            break
        mid = 0.5 * (a + b)
        gm, dm = _sigma_and_speed(path, mid)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        ga, gb = np.concatenate([ga, gm]), np.concatenate([gm, gb])
        da, db = np.concatenate([da, dm]), np.concatenate([dm, db])
        order = np.argsort(a, kind="stable")
        a, b, ga, gb, da, db = (x[order] for x in (a, b, ga, gb, da, db))
    out: list[tuple[float, float]] = []
    for lo, hi in zip(a.tolist(), b.tolist()):
        if out and lo <= out[-1][1] + 1e-15:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tau, out


def crossings(
    path: SymplecticPath, tol: float = NONDEGENERACY_TOL, grid: int = INITIAL_GRID
) -> list[Crossing]:
    """Interior crossings of ``path`` with their kernel dimensions and contributions."""
    omega = symplectic_form(path.dim // 2)

    def smin(t):
        return float(_sigma_min(path, np.array([t]))[0])

    found: list[Crossing] = []
    tau, clusters = _suspicious_intervals(path, tol, grid)
    for lo, hi in clusters:
        for t_star, g_star, at_break in _cluster_minima(path, lo, hi, smin):
            if t_star <= tau:
                # the edge of the certified start gap, however small sigma_min is there
                continue
            c = _classify_minimum(path, tol, grid, t_star, g_star, at_break, omega)
            if c is None or (found and abs(found[-1].t - c.t) < 10 * CROSSING_RESOLUTION):
                continue
            found.append(c)
    return found


def _cluster_minima(path, lo, hi, smin):
    """Local minima of ``sigma_min`` on a dense grid over ``[lo, hi]``, refined by golden section."""
    inner = [b for b in path.breakpoints if lo <= b <= hi]
    pts = np.union1d(np.linspace(lo, hi, CLUSTER_SAMPLES + 1), inner)
    g = _sigma_min(path, pts)
    last = len(pts) - 1
    out = []
    for i in range(len(pts)):
        if (i > 0 and g[i] > g[i - 1]) or (i < last and g[i] > g[i + 1]):
            continue
        a, b = pts[max(i - 1, 0)], pts[min(i + 1, last)]
        t_star, g_star = _golden_min(smin, a, b, CROSSING_RESOLUTION * 1e-4)
        if g[i] < g_star:
            t_star, g_star = float(pts[i]), float(g[i])
        at_break = False
        for bp in inner:
            if a <= bp <= b:
                gb = smin(bp)
                if gb <= g_star * 10 + 1e-14:
                    t_star, g_star, at_break = bp, gb, True
                break
        out.append((t_star, g_star, at_break))
    return out


def _classify_minimum(path, tol, grid, t_star, g_star, at_break, omega):
    """The crossing at a local minimum of ``sigma_min``, or None if it is clear of zero."""
    identity = np.eye(path.dim)
    scale = 1.0 + np.linalg.norm(path.derivative(t_star), 2)
    zero_tol = 1e-3 * tol * scale
    # near the start A(t) - Id ~ t A'(0), so smallness there is measured relative to t
    relative = g_star / min(1.0, t_star * grid)
    if g_star > zero_tol and relative > tol * scale:
        return None
    if g_star > zero_tol:
        raise UnresolvedCrossing(
            f"near-crossing at t = {t_star:.12f}: sigma_min = {g_star:.3e} "
            f"is neither zero nor clear of tol"
        )
    if t_star >= 1.0 - CROSSING_RESOLUTION:
        raise UnresolvedCrossing("a crossing accumulates at the endpoint t = 1")
    _, sv, vt = np.linalg.svd(path._values(np.array([t_star]))[0] - identity)
    k = int(np.sum(sv <= zero_tol))
    if k < path.dim and sv[-k - 1] <= tol * scale:
        raise UnresolvedCrossing(
            f"crossings near t = {t_star:.12f} are not separated at resolution {tol}"
        )
    kernel = vt[-k:].T
    where = f"t = {t_star:.12f}"
    if at_break:
        left = _signature(_kernel_form(path, t_star, kernel, -1, omega), tol * scale, where)
        right = _signature(_kernel_form(path, t_star, kernel, 1, omega), tol * scale, where)
        doubled = left + right
    else:
        doubled = 2 * _signature(_kernel_form(path, t_star, kernel, 1, omega), tol * scale, where)
    return Crossing(t_star, k, doubled, at_break)


def maslov_index_rs(
    path: SymplecticPath, tol: float = NONDEGENERACY_TOL, grid: int = INITIAL_GRID
) -> int:
    """Robbin-Salamon index of a path with nondegenerate endpoint.

    ``mu = sign(Gamma(0)) / 2 + sum of sign(Gamma(t))`` over interior
    crossings, where ``Gamma(t)(v) = omega0(v, A'(t) v)`` on ``ker(A(t) - Id)``.
    A crossing at a breakpoint contributes the mean of its one-sided
    signatures.
    """
    if not is_nondegenerate(path, tol):
        det = np.linalg.det(path.endpoint - np.eye(path.dim))
        raise DegenerateEndpoint(f"1 is an eigenvalue of A(1) (|det(A(1) - Id)| = {abs(det):.3e})")
    doubled = start_signature(path, tol)
    doubled += sum(c.doubled_contribution for c in crossings(path, tol, grid))
    if doubled % 2:
        raise InternalInconsistency(f"half-integer Robbin-Salamon index {doubled}/2")
    return doubled // 2
