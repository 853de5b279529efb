"""Short-time Fourier transform, time-frequency shifts and Gabor synthesis on
sampled signals.

The STFT is ``V_g f(x, xi) = int f(t) conj(g(t - x)) exp(-2 pi i xi t) dt``,
so that ``V_g f(lambda) = <f, pi_lambda g>`` with
``pi_lambda f(t) = exp(2 pi i l2 t) f(t - l1)``.
"""
from __future__ import annotations

import warnings

import numpy as np

from .core import ComplexGrid, SampleSet, Signal, TruncationWarning, check_same_grid
from .hermite import HermiteWindow, hermite_functions

_ALIGN_TOL = 1e-9


def _is_aligned(shift, dt) -> bool:
    q = np.asarray(shift, float) / dt
    return bool(np.all(np.abs(q - np.round(q)) < _ALIGN_TOL))


def _shift_rows(g: Signal, shifts, interpolate: bool) -> np.ndarray:
    """Rows ``g(t_j - x)`` for each ``x`` in ``shifts``; zero fill outside."""
    shifts = np.atleast_1d(np.asarray(shifts, float))
    N, dt = g.N, g.dt
    out = np.zeros((shifts.size, N), complex)
    if _is_aligned(shifts, dt):
        for i, k in enumerate(np.round(shifts / dt).astype(int)):
            if k >= 0:
                if k < N:
                    out[i, k:] = g.samples[:N - k]
            elif -k < N:
                out[i, :N + k] = g.samples[-k:]
        return out
    if not interpolate:
        raise ValueError("time shift is not a multiple of dt; request interpolation mode")
    # band-limited shift on a zero-padded period of length 2N
    L = 2 * N
    nu = np.fft.fftfreq(L, d=dt)
    G = np.fft.fft(g.samples, L)
    rows = np.fft.ifft(G[None, :] * np.exp(-2j * np.pi * nu[None, :] * shifts[:, None]), axis=1)
    return rows[:, :N]


def _window_rows(g, like: Signal, shifts, interpolate: bool = True) -> np.ndarray:
    """Shifted window samples; Hermite windows are evaluated exactly."""
    if isinstance(g, HermiteWindow):
        sig = g.signal
        check_same_grid(like, sig)
        raw = hermite_functions(g.order, like.t)[g.order]
        scale = np.vdot(raw, sig.samples).real / np.vdot(raw, raw).real
        tt = like.t[None, :] - np.atleast_1d(shifts)[:, None]
        return scale * hermite_functions(g.order, tt)[g.order]
    check_same_grid(like, g)
    return _shift_rows(g, shifts, interpolate)


def tf_shift(f: Signal, lam: complex, interpolate: bool = False) -> Signal:
    """``pi_lambda f(t) = exp(2 pi i l2 t) f(t - l1)``, zero filled.

    Off-grid ``l1`` requires ``interpolate=True`` (band-limited shift).
    """
    lam = complex(lam)
    row = _shift_rows(f, [lam.real], interpolate)[0]
    return f.with_samples(np.exp(2j * np.pi * lam.imag * f.t) * row)


def stft_points(f: Signal, g, points, interpolate: bool = True) -> np.ndarray:
    """``V_g f`` at arbitrary phase-space points ``l1 + i l2``."""
    pts = np.asarray(points, complex)
    flat = pts.ravel()
    out = np.empty(flat.shape, complex)
    # group by time shift so each window row is built once
    xs, inv = np.unique(np.round(flat.real, 12), return_inverse=True)
    rows = _window_rows(g, f, xs, interpolate)
    prod = f.samples[None, :] * np.conj(rows)
    t = f.t
    for i in range(xs.size):
        sel = np.nonzero(inv == i)[0]
        E = np.exp(-2j * np.pi * np.outer(t, flat[sel].imag))
        out[sel] = prod[i] @ E
    return (out * f.dt).reshape(pts.shape)


def stft(f: Signal, g, grid: ComplexGrid, interpolate: bool = True) -> np.ndarray:
    """``V_g f`` on the nodes of ``grid``; array ``[j, k]`` at ``(x_j, xi_k)``.

    Each time-shift row is transformed by a direct DFT evaluated at the grid
    frequencies, which is exact for the sampled model.
    """
    if isinstance(g, Signal):
        check_same_grid(f, g)
    x = grid.axis
    rows = _window_rows(g, f, x, interpolate)
    E = np.exp(-2j * np.pi * np.outer(f.t, x))
    return (f.samples[None, :] * np.conj(rows)) @ E * f.dt


def istft(coeffs: SampleSet, gamma: Signal, interpolate: bool = False) -> Signal:
    """Gabor synthesis ``sum_lambda c_lambda pi_lambda gamma``."""
    pts = coeffs.points
    vals = coeffs.values
    out = np.zeros(gamma.N, complex)
    if pts.size == 0:
        return gamma.with_samples(out)
    t = gamma.t
    xs, inv = np.unique(np.round(pts.real, 12), return_inverse=True)
    rows = _window_rows(gamma, gamma, xs, interpolate)
    for i in range(xs.size):
        sel = np.nonzero(inv == i)[0]
        mod = np.exp(2j * np.pi * np.outer(t, pts[sel].imag)) @ vals[sel]
        out += rows[i] * mod
    return gamma.with_samples(out)


def default_phase_grid(f: Signal) -> ComplexGrid:
    R = float(np.ceil(max(abs(f.t_min), abs(f.t_max), 4.0)))
    return ComplexGrid(R, int(16 * R))


def modulation_norm(f: Signal, p: float = 2.0, grid: ComplexGrid | None = None, window=None) -> float:
    """``||V_g f||_{L^p}`` over a phase-space grid, ``g = h_0`` by default."""
    if not (1 <= p <= np.inf):
        raise ValueError("p must lie in [1, inf]")
    from .hermite import hermite_window
    grid = grid or default_phase_grid(f)
    if window is None:
        window = hermite_window(0, f.t_min, f.t_max, f.N)
    V = np.abs(stft(f, window, grid))
    ring = grid.outer_ring()
    if V.max() > 0 and V[ring].max() > 1e-8 * V.max():
        warnings.warn("STFT does not decay on the outer grid ring", TruncationWarning, stacklevel=2)
    if np.isinf(p):
        return float(V.max())
    return float((np.sum(V ** p) * grid.dz) ** (1 / p))
