"""Containers for signals, complex grids and lattices, plus the Gaussian
weighted norms used throughout the package.

Conventions
-----------
A phase-space point ``lambda = (l1, l2)`` is identified with the complex
number ``l1 + 1j * l2``.  Field arrays are indexed ``[j, k]`` with ``j``
running over the real axis ``x`` and ``k`` over the imaginary axis ``xi``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np


class PolyfockError(Exception):
    """Base class for errors raised by the package."""


class HypothesisViolation(PolyfockError):
    """A density hypothesis required by an expansion does not hold."""


class NumericalQualityError(PolyfockError):
    """A truncation or convergence diagnostic failed."""


class TruncationWarning(UserWarning):
    """The computational domain does not capture the Gaussian decay."""


class AccuracyWarning(UserWarning):
    """An evaluation point lies outside the validated accuracy region."""


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# signals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled complex signal on ``[t_min, t_max)``.

    Sample ``j`` sits at ``t_min + j * dt`` with ``dt = (t_max - t_min) / N``.
    """
    samples: np.ndarray
    t_min: float
    t_max: float

    def __post_init__(self):
        s = _frozen(self.samples)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a Signal needs at least two samples")
        if not self.t_max > self.t_min:
            raise ValueError("t_max must exceed t_min")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "t_min", float(self.t_min))
        object.__setattr__(self, "t_max", float(self.t_max))

    @property
    def N(self) -> int:
        return self.samples.size

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / self.N

    @property
    def t(self) -> np.ndarray:
        return self.t_min + np.arange(self.N) * self.dt

    def norm(self) -> float:
        """L2 norm by the rectangle rule."""
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.dt))

    def inner(self, other: "Signal") -> complex:
        """``<self, other>``, linear in the first slot."""
        check_same_grid(self, other)
        return complex(np.sum(self.samples * np.conj(other.samples)) * self.dt)

    def tail_mass(self) -> float:
        """Fraction of the energy carried by the outer 5% of the samples."""
        e = np.abs(self.samples) ** 2
        tot = e.sum()
        if tot == 0:
            return 0.0
        k = max(1, int(math.ceil(0.025 * self.N)))
        return float((e[:k].sum() + e[-k:].sum()) / tot)

    def same_grid(self, other: "Signal") -> bool:
        return (self.N == other.N and math.isclose(self.t_min, other.t_min, abs_tol=1e-12)
                and math.isclose(self.t_max, other.t_max, abs_tol=1e-12))

    def with_samples(self, samples) -> "Signal":
        return Signal(samples, self.t_min, self.t_max)

    def __add__(self, other):
        check_same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other):
        check_same_grid(self, other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, c):
        return self.with_samples(self.samples * c)

    __rmul__ = __mul__


def check_same_grid(f: Signal, g: Signal):
    if not f.same_grid(g):
        raise ValueError("signals live on different sample grids")


def signal_from_function(func, t_min: float, t_max: float, N: int) -> Signal:
    t = t_min + np.arange(N) * ((t_max - t_min) / N)
    return Signal(func(t), t_min, t_max)


# ---------------------------------------------------------------------------
# complex grids and fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexGrid:
    """Midpoint grid on the square ``[-R, R]^2`` with ``M`` nodes per axis."""
    R: float
    M: int

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("grid radius must be positive")
        if self.M < 2 or self.M % 2:
            raise ValueError("grid size M must be even and at least 2")
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "M", int(self.M))

    @property
    def h(self) -> float:
        return 2 * self.R / self.M

    @property
    def dz(self) -> float:
        return self.h ** 2

    @property
    def axis(self) -> np.ndarray:
        return -self.R + (np.arange(self.M) + 0.5) * self.h

    @property
    def z(self) -> np.ndarray:
        x = self.axis
        return x[:, None] + 1j * x[None, :]

    def outer_ring(self) -> np.ndarray:
        m = np.zeros((self.M, self.M), bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m


def gaussian_weight(z, p: float = 1.0) -> np.ndarray:
    """``exp(-pi p |z|^2 / 2)``."""
    return np.exp(-np.pi * p * np.abs(z) ** 2 / 2)


@dataclass(frozen=True, eq=False)
class PolyFockField:
    """Values of a polyanalytic function on a :class:`ComplexGrid`.

    ``order`` is the true poly-Fock index ``n``: the field belongs to the
    space of order ``n + 1``.  For a superposition of channels ``0..n`` the
    same attribute holds the highest channel index.
    """
    grid: ComplexGrid
    values: np.ndarray
    order: int = 0
    p: float = 2.0

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.grid.M, self.grid.M):
            raise ValueError("field values do not match the grid shape")
        if not np.all(np.isfinite(v)):
            raise NumericalQualityError("field has non-finite values")
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if not (1 <= self.p <= np.inf):
            raise ValueError("p must lie in [1, inf]")
        object.__setattr__(self, "values", v)

    @property
    def weighted(self) -> np.ndarray:
        return self.values * gaussian_weight(self.grid.z)

    def truncation_ok(self, rel: float = 1e-8) -> bool:
        w = np.abs(self.weighted)
        peak = w.max()
        return bool(peak == 0 or w[self.grid.outer_ring()].max() <= rel * peak)

    def with_values(self, values, order=None) -> "PolyFockField":
        return PolyFockField(self.grid, values, self.order if order is None else order, self.p)

    def __add__(self, other):
        _check_same_field_grid(self, other)
        return self.with_values(self.values + other.values, max(self.order, other.order))

    def __sub__(self, other):
        _check_same_field_grid(self, other)
        return self.with_values(self.values - other.values, max(self.order, other.order))

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def _check_same_field_grid(F, G):
    if F.grid != G.grid:
        raise ValueError("fields live on different grids")


def field_from_function(func, grid: ComplexGrid, order: int = 0, p: float = 2.0) -> PolyFockField:
    return PolyFockField(grid, func(grid.z), order, p)


def warn_truncation(F: PolyFockField, what: str = "field"):
    if not F.truncation_ok():
        warnings.warn(f"{what}: weighted magnitude on the outer grid ring exceeds 1e-8 of its peak",
                      TruncationWarning, stacklevel=3)


def weighted_p_norm(F: PolyFockField, p: float | None = None) -> float:
    """Gaussian weighted ``L_p`` norm of a field.

    ``(sum |F|^p exp(-pi p |z|^2 / 2) dz)^(1/p)``, or the weighted sup norm
    for ``p = inf``.
    """
    p = F.p if p is None else float(p)
    if not (1 <= p <= np.inf):
        raise ValueError("p must lie in [1, inf]")
    warn_truncation(F)
    w = np.abs(F.weighted)
    if np.isinf(p):
        return float(w.max())
    if not w.any():
        return 0.0
    return float((np.sum(w ** p) * F.grid.dz) ** (1 / p))


def weighted_inner(F: PolyFockField, G: PolyFockField) -> complex:
    """``<F, G>`` in the Gaussian weighted ``L_2`` space."""
    _check_same_field_grid(F, G)
    return complex(np.sum(F.weighted * np.conj(G.weighted)) * F.grid.dz)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def reduce_basis(b1: complex, b2: complex) -> tuple[complex, complex]:
    """Lagrange-Gauss reduction of a planar lattice basis.

    Returns ``(b1, b2)`` with ``|b1| <= |b2|``, ``|Re(b2 conj(b1))| <= |b1|^2/2``
    and ``Re(b2 conj(b1)) >= 0``.
    """
    b1, b2 = complex(b1), complex(b2)
    if abs(b2) < abs(b1):
        b1, b2 = b2, b1
    # swap only on a strict relative decrease so round-off ties cannot cycle
    for _ in range(10_000):
        b2 = b2 - round((b2 * b1.conjugate()).real / abs(b1) ** 2) * b1
        if abs(b2) >= abs(b1) * (1 - 1e-12):
            break
        b1, b2 = b2, b1
    else:
        raise ValueError("basis reduction did not terminate")
    if (b2 * b1.conjugate()).real < 0:
        b2 = -b2
    return b1, b2


@dataclass(frozen=True)
class Lattice:
    """Lattice ``l1 Z + l2 Z`` in the complex plane, with ``Im(l1/l2) > 0``."""
    l1: complex
    l2: complex

    def __post_init__(self):
        l1, l2 = complex(self.l1), complex(self.l2)
        det = l1.real * l2.imag - l1.imag * l2.real
        if l1 == 0 or l2 == 0 or abs(det) < 1e-12 * max(abs(l1), abs(l2)) ** 2:
            raise ValueError("degenerate lattice generators")
        if (l1 / l2).imag < 0:
            l1, l2 = l2, l1
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "l2", l2)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.l1.real, self.l2.real], [self.l1.imag, self.l2.imag]])

    @property
    def size(self) -> float:
        return float(abs(np.linalg.det(self.matrix)))

    def reduced(self) -> tuple[complex, complex]:
        return reduce_basis(self.l1, self.l2)

    def coordinates(self, z) -> np.ndarray:
        """Real coordinates of ``z`` with respect to ``(l1, l2)``; shape ``(2, ...)``."""
        z = np.asarray(z, complex)
        return np.tensordot(np.linalg.inv(self.matrix), np.stack([z.real, z.imag]), 1)

    def contains(self, z, tol: float = 1e-9) -> np.ndarray:
        c = self.coordinates(z)
        return np.all(np.abs(c - np.round(c)) < tol, axis=0)

    def points(self, radius: float, center: complex = 0.0) -> np.ndarray:
        """Lattice points with ``|lambda - center| <= radius``.

        Order is deterministic: by modulus, then by argument.
        """
        b1, b2 = self.reduced()
        A = np.array([[b1.real, b2.real], [b1.imag, b2.imag]])
        c0 = np.linalg.solve(A, [center.real, center.imag]) if center else np.zeros(2)
        K = int(math.ceil(radius * np.linalg.norm(np.linalg.inv(A), 2))) + 1
        m = np.arange(-K, K + 1)
        m1 = np.round(c0[0]) + m[:, None]
        m2 = np.round(c0[1]) + m[None, :]
        lam = (m1 * b1 + m2 * b2).ravel()
        lam = lam[np.abs(lam - center) <= radius * (1 + 1e-12)]
        lam = np.where(np.abs(lam) < 1e-14 * max(abs(b1), 1.0), 0, lam)
        order = np.lexsort((np.round(np.angle(lam), 12), np.round(np.abs(lam), 12)))
        return lam[order]

    def equivalent(self, other: "Lattice", tol: float = 1e-9) -> bool:
        return bool(np.all(self.contains([other.l1, other.l2], tol))
                    and np.all(other.contains([self.l1, self.l2], tol)))

    def scaled(self, c: float) -> "Lattice":
        return Lattice(self.l1 * c, self.l2 * c)

    def to_json(self) -> dict:
        return {"l1": [self.l1.real, self.l1.imag], "l2": [self.l2.real, self.l2.imag]}


def make_lattice(l1: complex, l2: complex) -> Lattice:
    """Lattice spanned by ``l1`` and ``l2``, ordered so ``Im(l1/l2) > 0``."""
    return Lattice(l1, l2)


def square_lattice(alpha: float) -> Lattice:
    """``alpha (Z + iZ)``."""
    return Lattice(alpha, 1j * alpha)


def separable_lattice(alpha: float, beta: float) -> Lattice:
    """``alpha Z x beta Z``."""
    return Lattice(alpha, 1j * beta)


_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def adjoint_lattice(lat: Lattice) -> Lattice:
    """Adjoint lattice: all ``mu`` with ``l1 mu2 - l2 mu1`` integer for every
    ``lambda`` in ``lat``.  Time-frequency shifts along it commute with those
    along ``lat``.
    """
    G = np.linalg.solve(_J, np.linalg.inv(lat.matrix).T)
    mu1, mu2 = G[0, 0] + 1j * G[1, 0], G[0, 1] + 1j * G[1, 1]
    return Lattice(*reduce_basis(mu1, mu2))


# ---------------------------------------------------------------------------
# samples on a lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampleSet:
    """Raw field values ``F(lambda)`` at finitely many lattice points."""
    lattice: Lattice
    points: np.ndarray
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = _frozen(np.atleast_1d(self.points))
        vals = _frozen(np.zeros(pts.shape) if self.values is None else np.atleast_1d(self.values))
        if pts.shape != vals.shape or pts.ndim != 1:
            raise ValueError("points and values must be matching 1-d arrays")
        if pts.size and not np.all(self.lattice.contains(pts, 1e-7)):
            raise ValueError("sample points must lie on the lattice")
        if np.unique(np.round(pts, 9)).size != pts.size:
            raise ValueError("sample points must be distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.points.size

    @property
    def weighted(self) -> np.ndarray:
        return self.values * gaussian_weight(self.points)

    def with_values(self, values) -> "SampleSet":
        return SampleSet(self.lattice, self.points, values)


def sample_p_norm(samples: SampleSet, p: float = 2.0) -> float:
    """``(sum |F(lambda)|^p exp(-pi p |lambda|^2 / 2))^(1/p)``."""
    if len(samples) == 0:
        raise ValueError("empty sample set")
    w = np.abs(samples.weighted)
    if np.isinf(p):
        return float(w.max())
    return float(np.sum(w ** p) ** (1 / p))
