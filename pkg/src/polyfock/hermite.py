"""L2-normalized Hermite functions ``h_n`` and sampled Hermite windows.

``h_n(t) = (2 pi)^(1/4) psi_n(sqrt(2 pi) t)`` where ``psi_n`` are the classical
orthonormal Hermite functions, so ``h_0(t) = 2^(1/4) exp(-pi t^2)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import AccuracyWarning, Signal

T_GUARD = 40.0


def hermite_functions(nmax: int, t) -> np.ndarray:
    """All of ``h_0 .. h_nmax`` at ``t``; shape ``(nmax + 1,) + t.shape``.

    Uses the three-term recurrence
    ``psi_{k+1} = sqrt(2/(k+1)) u psi_k - sqrt(k/(k+1)) psi_{k-1}``,
    which is stable and exactly parity preserving.
    """
    if nmax < 0:
        raise ValueError("order must be non-negative")
    t = np.asarray(t, float)
    out = np.zeros((nmax + 1,) + t.shape)
    far = np.abs(t) >= T_GUARD
    u = np.sqrt(2 * np.pi) * np.where(far, 0.0, t)
    p_prev = np.zeros_like(u)
    p = np.pi ** -0.25 * np.exp(-u * u / 2)
    out[0] = p
    for k in range(nmax):
        p_prev, p = p, np.sqrt(2 / (k + 1)) * u * p - np.sqrt(k / (k + 1)) * p_prev
        out[k + 1] = p
    out *= (2 * np.pi) ** 0.25
    out[:, far] = 0.0
    return out


def hermite_eval(n: int, t):
    """``h_n(t)``; zero (with a warning) where ``|t| >= 40``."""
    t = np.asarray(t, float)
    if np.any(np.abs(t) >= T_GUARD):
        warnings.warn("|t| >= 40: Hermite function returned as 0", AccuracyWarning, stacklevel=2)
    v = hermite_functions(n, t)[n]
    return float(v) if v.ndim == 0 else v


def essential_support(n: int) -> float:
    return math.sqrt(n) + 3.0


@dataclass(frozen=True, eq=False)
class HermiteWindow:
    order: int
    signal: Signal


def hermite_window(n: int, t_min: float, t_max: float, N: int) -> HermiteWindow:
    """Sampled ``h_n`` renormalized to unit discrete norm.

    Raises ``ValueError`` when ``[t_min, t_max]`` does not contain the
    essential support ``[-(sqrt(n)+3), sqrt(n)+3]``.
    """
    r = essential_support(n)
    if t_min > -r or t_max < r:
        raise ValueError(f"interval [{t_min}, {t_max}] too small for h_{n}: needs +-{r:.3f}")
    dt = (t_max - t_min) / N
    t = t_min + np.arange(N) * dt
    v = hermite_functions(n, t)[n]
    v = v / math.sqrt(np.sum(v * v) * dt)
    return HermiteWindow(n, Signal(v, t_min, t_max))


def hermite_signal(n: int, like: Signal) -> Signal:
    """``h_n`` sampled on the grid of ``like`` (no renormalization)."""
    return like.with_samples(hermite_functions(n, like.t)[n])


def hermite_expansion(coeffs, like: Signal) -> Signal:
    """``sum_m coeffs[m] h_m`` sampled on the grid of ``like``."""
    coeffs = np.asarray(coeffs, complex)
    H = hermite_functions(coeffs.size - 1, like.t)
    return like.with_samples(coeffs @ H)


def hermite_rodrigues(n: int, t):
    """Reference ``h_n`` from the Rodrigues form, via physicists' polynomials.

    Only intended as an independent check for small ``n``.
    """
    from numpy.polynomial.hermite import hermval
    t = np.asarray(t, float)
    u = np.sqrt(2 * np.pi) * t
    c = np.zeros(n + 1)
    c[n] = 1.0
    norm = (2 * np.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return norm * hermval(u, c) * np.exp(-u * u / 2)
