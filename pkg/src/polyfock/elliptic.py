"""Weierstrass sigma and zeta functions on arbitrary lattices, the modified
sigma ``sigma_Lambda(z) = sigma(z) exp(a z^2)`` and the polyanalytic
interpolating functions ``S^n_Lambda``.

Evaluation strategy
-------------------
The plain Weierstrass product converges slowly and only conditionally once
truncated to a disk.  Instead ``sigma`` is represented on a disk of twice the
Voronoi circumradius by its Taylor polynomial.  The coefficients come from an
FFT of the product on a circle, where each factor is damped by a smooth
complementary-error-function taper in ``|lambda|``; the taper width is tied
to the dual lattice so the tapered sum is spectrally close to the full
lattice sum.  Everywhere else the quasi-periodicity

    sigma(z0 + lambda) = psi(lambda) exp(eta(lambda) (z0 + lambda/2)) sigma(z0)

reduces ``z`` to the cell of its nearest lattice point.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import erfc

from .core import AccuracyWarning, HypothesisViolation, Lattice, NumericalQualityError, reduce_basis

TAYLOR_NODES = 128
CAUCHY_NODES = 64
MAX_INTERP_ORDER = 8
_CHUNK = 1 << 20


def _circumradius(b1: complex, b2: complex) -> float:
    a, b, c = abs(b1), abs(b2), abs(b2 - b1)
    area = abs((b1.conjugate() * b2).imag) / 2
    return a * b * c / (4 * area)


def _points(b1: complex, b2: complex, radius: float) -> np.ndarray:
    A = np.array([[b1.real, b2.real], [b1.imag, b2.imag]])
    K = int(math.ceil(radius * np.linalg.norm(np.linalg.inv(A), 2))) + 1
    m = np.arange(-K, K + 1)
    lam = (m[:, None] * b1 + m[None, :] * b2).ravel()
    return lam[(np.abs(lam) <= radius) & (np.abs(lam) > 0)]


def sigma_product(lattice: Lattice, z, radius: float | None = None):
    """Plain truncated Weierstrass product over ``0 < |lambda| <= radius``.

    Accurate only to roughly 1e-3..1e-5 at ``radius = 12/sqrt(s)``; kept as
    an independent reference.
    """
    radius = 12 / math.sqrt(lattice.size) if radius is None else radius
    b1, b2 = lattice.reduced()
    lam = _points(b1, b2, radius)
    z = np.asarray(z, complex)
    u = z[..., None] / lam
    return z * np.exp(np.sum(np.log(1 - u) + u + u * u / 2, axis=-1))


class SigmaContext:
    """Precomputed sigma model for one lattice.

    Attributes
    ----------
    lattice : Lattice
    R_sigma : float
        Outer radius of the tapered product used to fit the Taylor model.
    a : complex
        Modifier making ``|sigma_Lambda(z)| exp(-pi |z|^2 / (2 s))`` periodic.
    eta1, eta2 : complex
        Quasi-periods ``2 zeta(l1 / 2)``, ``2 zeta(l2 / 2)``.
    """

    def __init__(self, lattice: Lattice, nodes: int = TAYLOR_NODES):
        self.lattice = lattice
        self.s = lattice.size
        b1, b2 = reduce_basis(lattice.l1, lattice.l2)
        self._b = (b1, b2)
        self._B = np.array([[b1.real, b2.real], [b1.imag, b2.imag]])
        self._Binv = np.linalg.inv(self._B)
        self.r_cell = _circumradius(b1, b2) * (1 + 1e-9)
        d1, _ = reduce_basis(*(complex(*col) for col in np.linalg.inv(self._B).T))
        delta = 2.0 / abs(d1)
        rho = 2 * self.r_cell
        r_mid = rho + 6 * delta
        self.R_sigma = r_mid + 6 * delta
        lam = _points(b1, b2, self.R_sigma)
        w = 0.5 * erfc((np.abs(lam) - r_mid) / delta)
        zc = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        u = zc[:, None] / lam[None, :]
        vals = zc * np.exp((np.log(1 - u) + u + u * u / 2) @ w)
        c = np.fft.fft(vals) / nodes / rho ** np.arange(nodes)
        # sigma is odd: sigma(z) = z * sum_k q_k z^(2k)
        q = c[1::2].copy()
        r_eval = self.r_cell + self.contour_radius
        mag = np.abs(q) * r_eval ** (2 * np.arange(q.size))
        keep = np.nonzero(mag > 1e-18 * mag.max())[0]
        self._q = q[:keep[-1] + 1]
        self._eta_b = np.array([self._zeta_local(b1 / 2), self._zeta_local(b2 / 2)]) * 2
        # quasi-periods of the canonical generators
        m = np.rint(self._Binv @ np.array([[lattice.l1.real, lattice.l2.real],
                                            [lattice.l1.imag, lattice.l2.imag]])).astype(int)
        self.eta1 = complex(m[0, 0] * self._eta_b[0] + m[1, 0] * self._eta_b[1])
        self.eta2 = complex(m[0, 1] * self._eta_b[0] + m[1, 1] * self._eta_b[1])
        l1, l2 = lattice.l1, lattice.l2
        self.legendre_residual = abs(self.eta1 * l2 - self.eta2 * l1 + 2j * math.pi)
        a1 = (math.pi * l1.conjugate() / self.s - self.eta1) / (2 * l1)
        a2 = (math.pi * l2.conjugate() / self.s - self.eta2) / (2 * l2)
        if abs(a1 - a2) > 1e-6 * max(1.0, abs(a1)):
            raise NumericalQualityError(f"modifier mismatch between generators: {abs(a1 - a2):.2e}")
        self.a = complex(a1)
        self.modifier_mismatch = abs(a1 - a2)

    @property
    def contour_radius(self) -> float:
        b1, _ = reduce_basis(self.lattice.l1, self.lattice.l2)
        return min(0.25, abs(b1) / 4)

    # -- local model ---------------------------------------------------------
    def _odd_poly(self, z0):
        """``(sigma(z0) / z0, sigma'(z0))`` from the Taylor model."""
        w = z0 * z0
        p = np.zeros_like(z0)
        dp = np.zeros_like(z0)
        for k in range(self._q.size - 1, -1, -1):
            dp = dp * w + (2 * k + 1) * self._q[k]
            p = p * w + self._q[k]
        return p, dp

    def _odd_value(self, z0):
        """``sigma(z0) / z0`` from the Taylor model."""
        w = z0 * z0
        p = np.full_like(z0, self._q[-1])
        for k in range(self._q.size - 2, -1, -1):
            p = p * w + self._q[k]
        return p

    def _zeta_local(self, z0):
        p, dp = self._odd_poly(np.asarray(z0, complex))
        return dp / (z0 * p)

    def _reduce(self, z):
        """Nearest lattice point ``m1 b1 + m2 b2`` among the four cell corners."""
        co = np.tensordot(self._Binv, np.stack([z.real, z.imag]), 1)
        f = np.floor(co)
        b1, b2 = self._b
        best = None
        for d1 in (0, 1):
            for d2 in (0, 1):
                m1, m2 = f[0] + d1, f[1] + d2
                d = np.abs(z - (m1 * b1 + m2 * b2))
                if best is None:
                    best = [d, m1, m2]
                else:
                    up = d < best[0]
                    best = [np.where(up, d, best[0]), np.where(up, m1, best[1]), np.where(up, m2, best[2])]
        return best[1], best[2]

    def _parts(self, z):
        """``(log_factor, sigma(z0)/z0, z0, central)`` such that
        ``sigma(z) = exp(log_factor) * z0 * (sigma(z0)/z0)``."""
        m1, m2 = self._reduce(z)
        b1, b2 = self._b
        lam = m1 * b1 + m2 * b2
        z0 = z - lam
        eta = m1 * self._eta_b[0] + m2 * self._eta_b[1]
        odd = np.mod(m1 + m2 + m1 * m2, 2) == 1
        E = eta * (z0 + lam / 2) + 1j * np.pi * odd
        p = self._odd_value(z0)
        return E, p, z0, (m1 == 0) & (m2 == 0)

    def _check_region(self, z):
        if np.any(np.abs(z) > 40 / math.sqrt(self.s)):
            warnings.warn("sigma evaluated far outside the tested region; overflow is possible",
                          AccuracyWarning, stacklevel=3)

    # -- public evaluation -----------------------------------------------------
    def sigma(self, z):
        z = np.asarray(z, complex)
        self._check_region(z)
        E, p, z0, _ = self._parts(z)
        return np.exp(E) * z0 * p

    def modified_sigma(self, z):
        z = np.asarray(z, complex)
        self._check_region(z)
        E, p, z0, _ = self._parts(z)
        return np.exp(E + self.a * z * z) * z0 * p

    def zeta(self, z):
        z = np.asarray(z, complex)
        m1, m2 = self._reduce(z)
        b1, b2 = self._b
        z0 = z - (m1 * b1 + m2 * b2)
        if np.any(np.abs(z0) < 1e-6):
            raise ValueError("zeta evaluated within 1e-6 of a lattice point")
        return self._zeta_local(z0) + m1 * self._eta_b[0] + m2 * self._eta_b[1]

    def G(self, z, n: int):
        """``sigma_Lambda(z)^(n+1) / (n! z)``, an entire function."""
        z = np.asarray(z, complex)
        E, p, z0, central = self._parts(z)
        E = E + self.a * z * z
        # sigma(z)/z: on the central cell z0 == z and the division cancels exactly
        zs = np.where(central, 1.0, z)
        ep = np.exp(E) * p
        sig = ep * z0
        soz = np.where(central, ep, sig / zs)
        return soz * sig ** n / math.factorial(n)


def weierstrass_sigma(ctx: SigmaContext, z):
    """Weierstrass ``sigma`` of ``ctx.lattice``."""
    return ctx.sigma(z)


def weierstrass_zeta(ctx: SigmaContext, z):
    """Weierstrass ``zeta = sigma' / sigma``; raises near lattice points."""
    return ctx.zeta(z)


def sigma_modifier(lattice: Lattice) -> complex:
    """``a(Lambda) = (pi conj(l1) / s - eta1) / (2 l1)``."""
    return SigmaContext(lattice).a


def modified_sigma(ctx: SigmaContext, z):
    """``sigma(z) exp(a z^2)``."""
    return ctx.modified_sigma(z)


def _check_order(n: int):
    if not 0 <= n <= MAX_INTERP_ORDER:
        raise ValueError(f"interpolator order must lie in [0, {MAX_INTERP_ORDER}]")


def holomorphic_derivatives(func, z, jmax: int, radius: float, nodes: int = CAUCHY_NODES):
    """Derivatives ``f^(j)(z)``, ``j = 0..jmax``, by the trapezoidal Cauchy
    integral on a circle of the given radius; shape ``(jmax + 1,) + z.shape``."""
    z = np.asarray(z, complex)
    zeta = z[..., None] + radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    co = np.fft.fft(func(zeta), axis=-1) / nodes
    j = np.arange(jmax + 1)
    fac = np.array([math.factorial(k) for k in j]) / radius ** j
    return np.moveaxis(co[..., :jmax + 1] * fac, -1, 0)


def interpolator_eval(ctx: SigmaContext, n: int, z, radius: float | None = None):
    """``S^n_Lambda(z) = sum_k C(n,k) (-pi conj(z))^k G^(n-k)(z)``,
    ``G = sigma_Lambda^(n+1) / (n! z)``.

    ``S^n(0) = 1`` and ``S^n`` vanishes on the rest of the lattice.
    """
    _check_order(n)
    z = np.asarray(z, complex)
    r = ctx.contour_radius if radius is None else radius
    flat = z.ravel()
    out = np.empty(flat.shape, complex)
    step = max(1, _CHUNK // CAUCHY_NODES)
    for i in range(0, flat.size, step):
        zz = flat[i:i + step]
        D = holomorphic_derivatives(lambda w: ctx.G(w, n), zz, n, r)
        acc = np.zeros_like(zz)
        for k in range(n + 1):
            acc = acc + math.comb(n, k) * (-np.pi * np.conj(zz)) ** k * D[n - k]
        out[i:i + step] = acc
    return out.reshape(z.shape)


def vector_interpolator(ctx: SigmaContext, n: int, z):
    """``sum_{k=0}^n S^k_Lambda(z)``."""
    _check_order(n)
    return sum(interpolator_eval(ctx, k, z) for k in range(n + 1))


def require_density(lattice: Lattice, n: int, kind: str):
    """Raise :class:`HypothesisViolation` unless ``s > n+1`` (interpolation)
    or ``s < 1/(n+1)`` (sampling)."""
    s = lattice.size
    if kind == "interpolation" and not s > n + 1:
        raise HypothesisViolation(f"interpolation needs s(Lambda) > {n + 1}, got {s:.6g}")
    if kind == "sampling" and not s < 1 / (n + 1):
        raise HypothesisViolation(f"sampling needs s(Lambda) < 1/{n + 1}, got {s:.6g}")
