"""Gabor frames ``{pi_lambda h_n : lambda in Lambda}``: frame bounds, frame
operator, canonical dual windows and biorthogonality checks.

Frame bounds come from a Hermite-Galerkin model.  In the basis
``h_0 .. h_{M-1}`` the frame operator has matrix

    G_jk = sum_lambda <h_j, pi_lambda h_n> conj(<h_k, pi_lambda h_n>)

and ``<h_m, pi_lambda h_n> = exp(-i pi l1 l2 - pi |lambda|^2 / 2) B^{n+1} h_m(conj(lambda))``
is known in closed form, so no quadrature enters.  A dense periodic discrete
Gabor model is provided as an independent cross-check.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .bargmann import hermite_field_weighted
from .core import (HypothesisViolation, Lattice, NumericalQualityError, SampleSet, Signal,
                   adjoint_lattice)
from .hermite import HermiteWindow, essential_support, hermite_functions, hermite_signal
from .tfa import istft, stft_points

CERTIFY_RATIO = 1e-6
CONVERGENCE_TOL = 0.05
DEFAULT_GALERKIN = 256


@dataclass(frozen=True, eq=False)
class FrameReport:
    A: float
    B: float
    order: int
    lattice: Lattice
    method: str
    certified: bool
    converged: bool = True
    M: int = 0
    A_half: float = float("nan")
    B_half: float = float("nan")
    dual: Signal | None = None
    extra: dict = field(default_factory=dict)

    @property
    def condition(self) -> float:
        return self.B / self.A if self.A > 0 else float("inf")

    def to_json(self) -> dict:
        return {"A": self.A, "B": self.B, "condition": self.condition, "certified": self.certified,
                "converged": self.converged, "method": self.method, "order": self.order,
                "galerkin": self.M, "A_half": self.A_half, "B_half": self.B_half,
                "lattice": self.lattice.to_json(), "size": self.lattice.size}


def window_coefficients(m_max: int, n: int, points) -> np.ndarray:
    """``<h_m, pi_lambda h_n>`` for ``m < m_max``; shape ``(m_max, len(points))``."""
    lam = np.asarray(points, complex)
    ph = np.exp(-1j * np.pi * lam.real * lam.imag)
    return np.array([ph * hermite_field_weighted(n, m, np.conj(lam)) for m in range(m_max)])


def _galerkin_matrix(n: int, lattice: Lattice, M: int) -> np.ndarray:
    radius = math.sqrt(M / math.pi) + 5 + math.sqrt(n)
    C = window_coefficients(M, n, lattice.points(radius))
    return np.conj(C) @ C.T


def frame_bounds(n: int, lattice: Lattice, M: int = DEFAULT_GALERKIN) -> FrameReport:
    """Galerkin estimates of the frame bounds of ``G(h_n, Lambda)``.

    The bounds at ``M/2`` (leading block of the same matrix) serve as the
    convergence diagnostic; a change above 5% clears ``converged``.
    """
    if M < 8:
        raise ValueError("Galerkin dimension must be at least 8")
    G = _galerkin_matrix(n, lattice, M)
    ev = np.linalg.eigvalsh(G)
    evh = np.linalg.eigvalsh(G[:M // 2, :M // 2])
    A, B = max(float(ev[0]), 0.0), float(ev[-1])
    Ah, Bh = max(float(evh[0]), 0.0), float(evh[-1])
    moved = max(abs(A - Ah) / max(A, 1e-300), abs(B - Bh) / B)
    converged = moved <= CONVERGENCE_TOL
    certified = bool(A > CERTIFY_RATIO * B and converged)
    return FrameReport(A, B, n, lattice, "hermite-galerkin", certified, converged, M, Ah, Bh)


def discrete_frame_bounds(n: int, alpha: float, beta: float, T: float, L: int) -> tuple[float, float]:
    """Frame bounds of the periodic discrete model on ``[-T/2, T/2)``.

    ``L`` samples, time step ``alpha`` and frequency step ``beta``; both
    ``alpha L / T`` and ``beta T`` must be integers dividing ``L``.
    """
    dt = T / L
    a = round(alpha / dt)
    b = round(beta * T)
    if abs(a * dt - alpha) > 1e-9 or abs(b - beta * T) > 1e-9 or L % a or L % b:
        raise ValueError("lattice steps incompatible with the discrete model")
    t = (np.arange(L) - L // 2) * dt
    g = sum(hermite_functions(n, t + k * T)[n] for k in range(-2, 3))
    j = np.arange(L)
    cols = [np.exp(2j * np.pi * l * b * j / L) * np.roll(g, k * a)
            for k in range(L // a) for l in range(L // b)]
    V = np.array(cols).T
    ev = np.linalg.eigvalsh(V @ V.conj().T * dt)
    return float(ev[0]), float(ev[-1])


# ---------------------------------------------------------------------------
# frame operator on sampled signals
# ---------------------------------------------------------------------------

def lattice_box(lattice: Lattice, x_range, xi_range) -> np.ndarray:
    """Lattice points inside the rectangle ``x_range x xi_range``."""
    r = math.hypot(max(abs(v) for v in x_range), max(abs(v) for v in xi_range))
    p = lattice.points(r + 1e-9)
    sel = ((p.real >= x_range[0]) & (p.real <= x_range[1])
           & (p.imag >= xi_range[0]) & (p.imag <= xi_range[1]))
    return p[sel]


def default_box(f: Signal, lattice: Lattice, n: int = 0) -> np.ndarray:
    """Lattice points whose shifted windows touch the sampled phase space.

    The box spans the signal interval and the whole sampled frequency band
    ``|xi| <= 1/(2 dt)``, each widened by the window support, so that the
    truncated frame operator is well conditioned on every sampled signal.
    """
    w = essential_support(n) + 1
    xi = 0.5 / f.dt + w
    return lattice_box(lattice, (f.t_min - w, f.t_max + w), (-xi, xi))


def _as_window(g, like: Signal):
    if isinstance(g, int):
        return HermiteWindow(g, hermite_signal(g, like))
    return g


def _synthesis_matrix(g, like: Signal, points) -> np.ndarray:
    """Columns ``pi_lambda g`` sampled on ``like``."""
    from .tfa import _window_rows
    xs, inv = np.unique(np.round(points.real, 12), return_inverse=True)
    rows = _window_rows(g, like, xs, interpolate=True)
    return (rows[inv] * np.exp(2j * np.pi * np.outer(points.imag, like.t))).T


def frame_operator_apply(f: Signal, g, lattice: Lattice, points=None) -> Signal:
    """``S f = sum_lambda <f, pi_lambda g> pi_lambda g`` over a truncated lattice."""
    g = _as_window(g, f)
    n = g.order if isinstance(g, HermiteWindow) else 0
    pts = default_box(f, lattice, n) if points is None else np.asarray(points, complex)
    if f.tail_mass() > 1e-8:
        warnings.warn("signal energy near the interval ends; the lattice box may not cover it",
                      UserWarning, stacklevel=2)
    Phi = _synthesis_matrix(g, f, pts)
    return f.with_samples(Phi @ (Phi.conj().T @ f.samples) * f.dt)


def gabor_coefficients(f: Signal, n: int, lattice: Lattice, points=None) -> SampleSet:
    """``<f, pi_lambda h_n>`` over a truncated lattice."""
    pts = default_box(f, lattice, n) if points is None else np.asarray(points, complex)
    return SampleSet(lattice, pts, stft_points(f, _as_window(n, f), pts))


def gabor_synthesis(coeffs: SampleSet, gamma: Signal) -> Signal:
    """``sum_lambda c_lambda pi_lambda gamma``."""
    return istft(coeffs, gamma, interpolate=True)


def dual_window(n: int, lattice: Lattice, like: Signal, report: FrameReport | None = None,
                tol: float = 1e-12, maxiter: int = 500) -> Signal:
    """Canonical dual window ``S^{-1} h_n`` by conjugate gradients.

    ``like`` fixes the sample grid.  Raises :class:`HypothesisViolation` when
    the frame is not certified and :class:`NumericalQualityError` when CG
    does not converge.
    """
    report = report or frame_bounds(n, lattice)
    if not report.certified:
        raise HypothesisViolation(f"G(h_{n}, Lambda) is not certified as a frame (A={report.A:.3g})")
    pts = default_box(like, lattice, n)
    Phi = _synthesis_matrix(_as_window(n, like), like, pts)
    dt = like.dt

    def mv(v):
        return Phi @ (Phi.conj().T @ v) * dt
    S = LinearOperator((like.N, like.N), matvec=mv, dtype=complex)
    h = hermite_signal(n, like).samples.astype(complex)
    rel = {"it": 0}

    def count(_):
        rel["it"] += 1
    gamma, info = cg(S, h, rtol=tol, atol=0.0, maxiter=maxiter, callback=count)
    res = np.linalg.norm(mv(gamma) - h) / np.linalg.norm(h)
    if info != 0 and res > 1e-8:
        raise NumericalQualityError(f"CG did not converge in {maxiter} iterations, residual {res:.2e}")
    return like.with_samples(gamma)


def biorthogonality_check(gamma: Signal, n: int, lattice: Lattice, radius: float = 3.0) -> dict:
    """Deviation of ``s^{-1} <gamma, pi_mu h_n>`` from ``delta_{mu,0}`` over
    ``mu`` in the adjoint lattice with ``|mu| <= radius``."""
    mus = adjoint_lattice(lattice).points(radius)
    vals = stft_points(gamma, _as_window(n, gamma), mus) / lattice.size
    target = (np.abs(mus) < 1e-12).astype(float)
    dev = np.abs(vals - target)
    zero = np.abs(mus) < 1e-12
    return {"max_deviation": float(dev.max()), "center": complex(vals[zero][0]),
            "off_center_max": float(dev[~zero].max()) if (~zero).any() else 0.0,
            "count": int(mus.size)}


def riesz_lower_bound(n: int, lattice: Lattice, like: Signal, radius: float = 2.5) -> float:
    """Smallest Gram eigenvalue of ``{pi_mu h_n : mu in Lambda, |mu| <= radius}``."""
    pts = lattice.points(radius)
    Phi = _synthesis_matrix(_as_window(n, like), like, pts)
    return float(np.linalg.eigvalsh(Phi.conj().T @ Phi * like.dt)[0])


def window_m1_norm(gamma: Signal) -> float:
    """``||gamma||_{M^1}``, a finite-value witness for the dual window."""
    from .tfa import modulation_norm
    return modulation_norm(gamma, 1.0)
