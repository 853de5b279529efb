"""Interpolation and sampling series for true poly-Fock spaces on lattices.

Interpolation (sparse lattices, ``s > n + 1``)::

    F(z) = sum_lambda a_lambda exp(pi conj(lambda) z - pi |lambda|^2 / 2) S^n_Lambda(z - lambda)

Sampling (dense lattices, ``s < 1/(n + 1)``), with ``S`` built on the
adjoint lattice::

    F(z) = s(Lambda) sum_lambda F(lambda) exp(pi conj(lambda) z - pi |lambda|^2) S^n_{Lambda0}(z - lambda)

The Gaussian power, phase and scalar in the sampling weight were selected by
:func:`calibrate_reconstruction_weight` among a finite candidate set and are
frozen in :data:`RECONSTRUCTION_WEIGHT`.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .core import (AccuracyWarning, Lattice, NumericalQualityError, PolyFockField, SampleSet,
                   adjoint_lattice, sample_p_norm, weighted_p_norm)
from .elliptic import SigmaContext, interpolator_eval, require_density

__all__ = ["SampleSet", "WeightChoice", "RECONSTRUCTION_WEIGHT", "sigma_context", "interpolate",
           "sample_field", "reconstruct_from_samples", "reconstruct_vector",
           "calibrate_reconstruction_weight", "norm_equivalence_report", "default_sample_radius"]


@lru_cache(maxsize=32)
def sigma_context(lattice: Lattice) -> SigmaContext:
    """Cached :class:`SigmaContext` (contexts are immutable)."""
    return SigmaContext(lattice)


def default_sample_radius(lattice: Lattice, R: float) -> float:
    return R + 3 / math.sqrt(lattice.size)


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def interpolate(lattice: Lattice, n: int, a: SampleSet, z):
    """Evaluate the interpolating series for weighted data ``a_lambda``.

    ``a.values`` holds ``a_lambda``; the result satisfies
    ``F(lambda) exp(-pi |lambda|^2 / 2) = a_lambda``.
    """
    require_density(lattice, n, "interpolation")
    if not a.lattice.equivalent(lattice):
        raise ValueError("data are indexed by a different lattice")
    ctx = sigma_context(lattice)
    z = np.asarray(z, complex)
    lam, vals = a.points, a.values
    flat = z.ravel()
    out = np.zeros(flat.shape, complex)
    nz = vals != 0
    lam, vals = lam[nz], vals[nz]
    for i in range(0, flat.size, 256):
        zz = flat[i:i + 256, None]
        w = np.exp(np.pi * np.conj(lam) * zz - np.pi * np.abs(lam) ** 2 / 2)
        out[i:i + 256] = np.sum(vals * w * interpolator_eval(ctx, n, zz - lam), axis=1)
    return out.reshape(z.shape)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_field(F, lattice: Lattice, R_lattice: float) -> SampleSet:
    """Raw values ``F(lambda)`` for ``|lambda| <= R_lattice``.

    ``F`` may be a callable (evaluated exactly) or a :class:`PolyFockField`,
    which is interpolated with tensor cubic splines applied to the smooth
    STFT-like quantity ``exp(i pi x xi - pi |z|^2 / 2) F(z)``.  Lattice
    points outside the grid interior are dropped with a warning.
    """
    pts = lattice.points(R_lattice)
    if callable(F):
        return SampleSet(lattice, pts, np.asarray(F(pts), complex) * np.ones(pts.shape))
    grid = F.grid
    x = grid.axis
    inside = (np.abs(pts.real) <= x[-1]) & (np.abs(pts.imag) <= x[-1])
    if not inside.all():
        warnings.warn(f"{int((~inside).sum())} lattice points outside the field grid were dropped",
                      AccuracyWarning, stacklevel=2)
        pts = pts[inside]
    z = grid.z
    U = np.exp(1j * np.pi * z.real * z.imag) * F.weighted
    xy = np.stack([pts.real, pts.imag], axis=-1)
    re = RegularGridInterpolator((x, x), U.real, method="cubic")(xy)
    im = RegularGridInterpolator((x, x), U.imag, method="cubic")(xy)
    vals = (re + 1j * im) * np.exp(-1j * np.pi * pts.real * pts.imag + np.pi * np.abs(pts) ** 2 / 2)
    return SampleSet(lattice, pts, vals)


@dataclass(frozen=True)
class WeightChoice:
    """Sampling-series weight ``c exp(pi conj(nu) z - power pi |nu|^2 + i pi phase nu1 nu2)``."""
    power: float
    phase: int
    scalar: str

    def scale(self, lattice: Lattice, n: int) -> float:
        if self.scalar == "one":
            return 1.0
        if self.scalar == "size":
            return lattice.size
        if self.scalar == "poly":
            return math.sqrt(math.pi ** n / math.factorial(n))
        raise ValueError(f"unknown scalar {self.scalar!r}")

    def describe(self) -> str:
        ph = {0: "1", 1: "exp(+i pi l1 l2)", -1: "exp(-i pi l1 l2)"}[self.phase]
        sc = {"one": "1", "size": "s(Lambda)", "poly": "(pi^n/n!)^(1/2)"}[self.scalar]
        return f"{sc} * exp(pi conj(l) z - {self.power:g} pi |l|^2) * {ph}"


RECONSTRUCTION_WEIGHT = WeightChoice(power=1.0, phase=0, scalar="size")

CANDIDATE_WEIGHTS = tuple(WeightChoice(p, ph, sc) for p, ph, sc in
                          itertools.product((0.5, 1.0), (0, 1, -1), ("one", "size", "poly")))


def _unique_eval(func, d):
    """``func`` on the distinct entries of ``d`` only.

    Differences between lattice points repeat heavily, so evaluating the
    interpolator on unique values is much cheaper for node evaluations.
    """
    flat = d.ravel()
    key = np.round(flat.real, 11) + 1j * np.round(flat.imag, 11)
    u, inv = np.unique(key, return_inverse=True)
    if u.size > 0.7 * flat.size:
        return func(d)
    first = np.zeros(u.size, int)
    first[inv[::-1]] = np.arange(flat.size)[::-1]
    return func(flat[first])[inv].reshape(d.shape)


def _sampling_series(samples: SampleSet, n: int, z, weight: WeightChoice):
    lattice = samples.lattice
    ctx = sigma_context(adjoint_lattice(lattice))
    z = np.asarray(z, complex)
    nu, vals = samples.points, samples.values
    nz = vals != 0
    nu, vals = nu[nz], vals[nz]
    flat = z.ravel()
    out = np.zeros(flat.shape, complex)
    if nu.size:
        c = weight.scale(lattice, n)
        base = vals * np.exp(-weight.power * np.pi * np.abs(nu) ** 2
                             + 1j * np.pi * weight.phase * nu.real * nu.imag)
        step = max(1, (1 << 21) // nu.size)
        for i in range(0, flat.size, step):
            zz = flat[i:i + step, None]
            S = _unique_eval(lambda d: interpolator_eval(ctx, n, d), zz - nu)
            out[i:i + step] = c * np.sum(base * np.exp(np.pi * np.conj(nu) * zz) * S, axis=1)
    return out.reshape(z.shape)


def reconstruct_from_samples(samples: SampleSet, n: int, z, weight: WeightChoice = RECONSTRUCTION_WEIGHT):
    """Rebuild a field of the true poly-Fock space of order ``n + 1`` from
    its lattice samples; requires ``s(Lambda) < 1/(n+1)``."""
    require_density(samples.lattice, n, "sampling")
    return _sampling_series(samples, n, z, weight)


def reconstruct_vector(samples: SampleSet, n: int, z, method: str = "nested"):
    """Rebuild a field of the full poly-Fock space ``F^1 + ... + F^{n+1}``.

    ``method="nested"`` (default) recovers the components from the top order
    down: ``F_n = R_n(F)`` and ``F_k = R_k(F - F_{k+1} - ... - F_n)``, where
    ``R_k`` is the order-``k`` sampling series and the subtracted components
    are evaluated at the sample points.  The series ``R_k`` annihilates lower
    orders but not higher ones, so the plain sum ``sum_k R_k(F)``
    (``method="series"``) carries cross terms ``R_k(F_j)``, ``j > k``.
    """
    require_density(samples.lattice, n, "sampling")
    if method == "series":
        return sum(_sampling_series(samples, k, z, RECONSTRUCTION_WEIGHT) for k in range(n + 1))
    if method != "nested":
        raise ValueError("method must be 'nested' or 'series'")
    z = np.asarray(z, complex)
    resid = samples
    total = np.zeros(z.shape, complex)
    for k in range(n, -1, -1):
        total = total + _sampling_series(resid, k, z, RECONSTRUCTION_WEIGHT)
        if k:
            at_nodes = _sampling_series(resid, k, resid.points, RECONSTRUCTION_WEIGHT)
            resid = resid.with_values(resid.values - at_nodes)
    return total


def calibrate_reconstruction_weight(lattice: Lattice, n: int, candidates=CANDIDATE_WEIGHTS):
    """Score every candidate weight on ``F = B^{n+1} h_0``.

    For ``n = 0`` this is the constant field 1.  Errors are measured at
    ``0``, ``l1/2`` and ``(l1 + l2)/3``.  Returns ``(best, scores)`` where
    ``scores`` maps each candidate to its maximum absolute error.
    """
    from .bargmann import hermite_field
    require_density(lattice, n, "sampling")

    def F(z):
        return hermite_field(n, 0, z)
    R = default_sample_radius(lattice, 1.0)
    samples = sample_field(F, lattice, R)
    z = np.array([0.0, lattice.l1 / 2, (lattice.l1 + lattice.l2) / 3])
    target = F(z)
    scores = {}
    for w in candidates:
        scores[w] = float(np.max(np.abs(_sampling_series(samples, n, z, w) - target)))
    best = min(candidates, key=lambda w: scores[w])
    return best, scores


def norm_equivalence_report(fields, lattice: Lattice, p: float = 2.0, R_lattice: float | None = None,
                            require_positive: bool = True) -> dict:
    """Ratios ``||samples||_p / ||F||_p`` over a set of fields."""
    ratios = []
    for F in fields:
        R = R_lattice if R_lattice is not None else F.grid.axis[-1]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            smp = sample_field(F, lattice, R)
        nF = weighted_p_norm(F, p)
        if nF == 0:
            raise ValueError("norm equivalence is undefined for a zero field")
        ratios.append(sample_p_norm(smp, p) / nF)
    ratios = np.array(ratios)
    rep = {"min": float(ratios.min()), "max": float(ratios.max()),
           "width": float(ratios.max() - ratios.min()), "ratios": ratios.tolist(), "p": p}
    if require_positive and not rep["min"] > 0:
        raise NumericalQualityError("sampling norm vanished on a test field")
    return rep
