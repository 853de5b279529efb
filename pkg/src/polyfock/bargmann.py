"""Bargmann and true polyanalytic Bargmann transforms, reproducing kernels and
orthogonal projections onto the true poly-Fock spaces.

Normalization: ``B h_m = e_m`` with ``e_m(z) = (pi^m / m!)^(1/2) z^m`` and

    B^{n+1} f(z) = exp(-i pi x xi + pi |z|^2 / 2) V_{h_n} f(x, -xi),

which is an isometry from ``L^2(R)`` onto the true poly-Fock space of order
``n + 1``.  In derivative form

    B^{n+1} f = (pi^n n!)^(-1/2) sum_k C(n,k) (-pi conj(z))^k d^{n-k}/dz^{n-k} B f.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, eval_laguerre, gammaln

from .core import (ComplexGrid, PolyFockField, Signal, TruncationWarning, gaussian_weight,
                   warn_truncation, weighted_p_norm)
from .hermite import HermiteWindow, hermite_functions, hermite_signal
from .tfa import stft

MAX_KERNEL_ORDER = 30
DEFAULT_SIGNAL_GRID = (-8.0, 8.0, 1024)


def _exact_window(n: int, like: Signal) -> HermiteWindow:
    return HermiteWindow(n, hermite_signal(n, like))


def true_poly_bargmann(f: Signal, n: int, grid: ComplexGrid) -> PolyFockField:
    """``B^{n+1} f`` on ``grid`` through the STFT with window ``h_n``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    V = stft(f, _exact_window(n, f), grid)[:, ::-1]  # V(x, -xi): the xi axis is symmetric
    z = grid.z
    vals = np.exp(-1j * np.pi * z.real * z.imag + np.pi * np.abs(z) ** 2 / 2) * V
    F = PolyFockField(grid, vals, n)
    warn_truncation(F, "Bargmann field")
    return F


def bargmann(f: Signal, grid: ComplexGrid) -> PolyFockField:
    """Classical Bargmann transform, ``B h_0 = 1``."""
    return true_poly_bargmann(f, 0, grid)


def poly_bargmann(f_vec, grid: ComplexGrid) -> PolyFockField:
    """``B^1 f_1 + ... + B^n f_n`` for ``1 <= n <= 12`` signals."""
    f_vec = list(f_vec)
    if not f_vec:
        raise ValueError("empty signal vector")
    if len(f_vec) > 12:
        raise ValueError("at most 12 channels are supported")
    vals = sum(true_poly_bargmann(f, k, grid).values for k, f in enumerate(f_vec))
    return PolyFockField(grid, vals, len(f_vec) - 1)


def inverse_true_poly_bargmann(F: PolyFockField, n: int, like: Signal | None = None,
                               return_residual: bool = False):
    """Adjoint of ``B^{n+1}``, a left inverse on its range.

    ``f(t) = sum_{x, xi} V(x, xi) exp(2 pi i xi t) h_n(t - x) dz`` with
    ``V(x, -xi) = exp(i pi x xi - pi |z|^2 / 2) F(z)``.  Signals are returned
    on the grid of ``like`` (default ``[-8, 8)`` with 1024 samples).  The
    frequency spacing of ``F.grid`` must stay below the reciprocal width of
    the window support to avoid aliasing; spacing 1/16 or finer is safe.

    When ``return_residual`` is true the relative out-of-range residual
    ``||B^{n+1} f - F|| / ||F||`` is returned as well; it is flagged with a
    warning when above 1e-3.
    """
    if like is None:
        like = Signal(np.zeros(DEFAULT_SIGNAL_GRID[2]), *DEFAULT_SIGNAL_GRID[:2])
    grid = F.grid
    x = grid.axis
    z = grid.z
    W = np.exp(1j * np.pi * z.real * z.imag) * F.weighted        # V(x_j, -xi_k)
    t = like.t
    A = W @ np.exp(-2j * np.pi * np.outer(x, t))                   # sum over xi' = -xi
    H = hermite_functions(n, t[None, :] - x[:, None])[n]
    f = like.with_samples(np.sum(A * H, axis=0) * grid.dz)
    res = 0.0
    nF = weighted_p_norm(F, 2)
    if nF > 0:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            back = true_poly_bargmann(f, n, grid)
            res = weighted_p_norm(PolyFockField(grid, back.values - F.values, n), 2) / nF
        if res > 1e-3:
            warnings.warn(f"field is not in the range of B^{n + 1}: residual {res:.2e}",
                          TruncationWarning, stacklevel=2)
    return (f, res) if return_residual else f


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def fock_monomial(m: int, z):
    """``e_m(z) = (pi^m / m!)^(1/2) z^m``."""
    return np.sqrt(np.pi ** m / math.factorial(m)) * np.asarray(z, complex) ** m


def hermite_field(n: int, m: int, z):
    """``B^{n+1} h_m(z)`` in closed form (generalized Laguerre polynomials).

    Prefer :func:`hermite_field_weighted` for large ``m`` or ``|z|``.
    """
    return hermite_field_weighted(n, m, z) * np.exp(np.pi * np.abs(np.asarray(z)) ** 2 / 2)


def hermite_field_weighted(n: int, m: int, z):
    """``exp(-pi |z|^2 / 2) B^{n+1} h_m(z)``."""
    z = np.asarray(z, complex)
    x = np.pi * np.abs(z) ** 2
    r = np.abs(z)
    lr = np.log(np.where(r > 0, r, 1.0))
    ph = np.angle(z)
    lpre = (-0.5 * (n * math.log(math.pi) + gammaln(n + 1))
            + 0.5 * (m * math.log(math.pi) - gammaln(m + 1)) - x / 2)
    if m >= n:
        mag = np.exp(lpre + gammaln(n + 1) + (m - n) * lr)
        if m > n:
            mag = np.where(r > 0, mag, 0.0)
        return mag * np.exp(1j * (m - n) * ph) * eval_genlaguerre(n, m - n, x)
    mag = np.exp(lpre + gammaln(m + 1) + (n - m) * (lr + math.log(math.pi)))
    mag = np.where(r > 0, mag, 0.0)
    return mag * (-np.exp(-1j * ph)) ** (n - m) * eval_genlaguerre(m, n - m, x)


def polyanalytic_polynomial(k: int, m: int, z):
    """``e_{k,m}(z) = exp(pi |z|^2) d^k/dz^k [exp(-pi |z|^2) e_m(z)]``.

    ``B^{k+1} h_m = (pi^k k!)^(-1/2) e_{k,m}``.
    """
    z = np.asarray(z, complex)
    c = math.sqrt(math.pi ** m / math.factorial(m))
    out = np.zeros_like(z)
    for j in range(k + 1):
        p = m - (k - j)
        if p < 0:
            continue
        out = out + math.comb(k, j) * (-np.pi * np.conj(z)) ** j * (math.factorial(m) / math.factorial(p)) * z ** p
    return c * out


def fock_shift(func, lam: complex):
    """Bargmann-Fock shift matching ``B^{n+1} pi_lambda = beta_lambda B^{n+1}``.

    ``beta_lambda F(z) = exp(i pi l1 l2 + pi lambda z - pi |lambda|^2 / 2) F(z - conj(lambda))``.
    """
    lam = complex(lam)

    def shifted(z):
        z = np.asarray(z, complex)
        return (np.exp(1j * np.pi * lam.real * lam.imag + np.pi * lam * z - np.pi * abs(lam) ** 2 / 2)
                * func(z - lam.conjugate()))
    return shifted


# ---------------------------------------------------------------------------
# kernels and projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    order: int

    def __post_init__(self):
        if not 0 <= self.order <= MAX_KERNEL_ORDER:
            raise ValueError(f"kernel order must lie in [0, {MAX_KERNEL_ORDER}]")


def kernel_eval(spec: KernelSpec | int, w, z):
    """``K^n(w, z) = sum_k C(n,k) (-pi |w-z|^2)^k / k! exp(pi conj(z) w)``."""
    n = spec.order if isinstance(spec, KernelSpec) else KernelSpec(spec).order
    w = np.asarray(w, complex)
    z = np.asarray(z, complex)
    x = np.pi * np.abs(w - z) ** 2
    s = sum(math.comb(n, k) * (-x) ** k / math.factorial(k) for k in range(n + 1))
    return s * np.exp(np.pi * np.conj(z) * w)


def project(F: PolyFockField, n: int, cutoff: float = 1e-17, return_report: bool = False):
    """``P^n F(w) = int F(z) K^n(w, z) exp(-pi |z|^2) dz`` by grid quadrature.

    In weighted form the integral is a twisted convolution,

        G_out(w) = int G(z) L_n(pi |w-z|^2) exp(-pi |w-z|^2 / 2) exp(i pi (a d - b c)) dz

    with ``G = F exp(-pi |z|^2 / 2)``, ``z = a + ib`` and ``w = c + id``.  It
    is evaluated one imaginary-axis offset at a time with an FFT convolution
    along the real axis.  Offsets whose kernel column stays below ``cutoff``
    are skipped.
    """
    KernelSpec(n)
    warn_truncation(F, "projection input")
    grid = F.grid
    M, h, x = grid.M, grid.h, grid.axis
    G = F.weighted
    out = np.zeros((M, M), complex)
    u1 = np.arange(-(M - 1), M) * h
    L = 4 * M
    for k in range(-(M - 1), M):
        r2 = np.pi * (u1 ** 2 + (k * h) ** 2)
        kcol = eval_laguerre(n, r2) * np.exp(-r2 / 2)
        if np.max(np.abs(kcol)) < cutoff:
            continue
        b = np.arange(max(0, -k), min(M, M - k))
        d = b + k
        X = G[:, b].T * np.exp(1j * np.pi * np.outer(x[d], x))
        T = np.fft.ifft(np.fft.fft(X, L, axis=1) * np.fft.fft(kcol, L), axis=1)[:, M - 1:2 * M - 1]
        out[:, d] += (np.exp(-1j * np.pi * np.outer(x[b], x)) * T).T
    out *= grid.dz
    P = PolyFockField(grid, out / gaussian_weight(grid.z), n, F.p)
    if not return_report:
        return P
    nF = weighted_p_norm(F)
    return P, {"norm_ratio": weighted_p_norm(P) / nF if nF > 0 else 0.0}
