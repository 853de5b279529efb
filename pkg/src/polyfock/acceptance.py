"""Acceptance checks shared by the test suite and ``polyfock selftest``.

Each check returns a :class:`CheckResult` whose ``metrics`` hold only
deterministic numbers, so serialized reports are byte-stable.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bargmann as bg
from .core import (ComplexGrid, HypothesisViolation, PolyFockField, Signal, square_lattice, make_lattice,
                   weighted_inner, weighted_p_norm)
from .elliptic import interpolator_eval
from .frames import (biorthogonality_check, discrete_frame_bounds, dual_window, frame_bounds,
                     gabor_coefficients, gabor_synthesis)
from .hermite import hermite_expansion, hermite_functions, hermite_signal
from .multiplex import add_noise, mux_decode, mux_encode
from .sampling import (RECONSTRUCTION_WEIGHT, calibrate_reconstruction_weight, default_sample_radius,
                       interpolate, reconstruct_from_samples, reconstruct_vector, sample_field,
                       sigma_context)
from .core import SampleSet

SEED = 20240611


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}"


def _signal_grid(t=8.0, N=1024) -> Signal:
    return Signal(np.zeros(N), -t, t)


def _random_hermite(rng, like, mmax):
    c = rng.standard_normal(mmax + 1) + 1j * rng.standard_normal(mmax + 1)
    return hermite_expansion(c / np.linalg.norm(c), like)


def _disk_points(rng, radius, count):
    r = radius * np.sqrt(rng.uniform(0, 1, count))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, count))


# ---------------------------------------------------------------------------

def check_01_hermite(quick=False):
    like = _signal_grid(8.0, 2048)
    H = hermite_functions(12, like.t)
    G = H @ H.T * like.dt
    err = float(np.abs(G - np.eye(13)).max())
    return CheckResult(1, "Hermite orthonormality h_0..h_12", err < 1e-7, {"max_abs_G_minus_I": err})


def check_02_bargmann_basis(quick=False):
    like = _signal_grid()
    grid = ComplexGrid(4.0, 128)
    disk = np.abs(grid.z) <= 2
    errs = []
    for m in range(6):
        F = bg.bargmann(hermite_signal(m, like), grid)
        e = bg.fock_monomial(m, grid.z)
        errs.append(float(np.abs(F.values - e)[disk].max() / np.abs(e)[disk].max()))
    worst = max(errs)
    return CheckResult(2, "Bargmann basis B h_m = e_m on |z|<=2, m<=5", worst < 1e-5,
                       {"max_rel_error": worst, "per_m": errs})


def _iso_setup(quick):
    rng = np.random.default_rng(SEED)
    like = _signal_grid()
    grid = ComplexGrid(6.0, 192)
    count = 4 if quick else 10
    return rng, like, grid, [_random_hermite(rng, like, 8) for _ in range(count)]


def check_03_isometry(quick=False):
    rng, like, grid, fs = _iso_setup(quick)
    worst = 0.0
    for f in fs:
        nf = f.norm()
        for n in range(5):
            worst = max(worst, abs(weighted_p_norm(bg.true_poly_bargmann(f, n, grid)) - nf))
    # normalization lock: B^2 h_0 = -sqrt(pi) conj(z)
    g2 = ComplexGrid(4.0, 128)
    F = bg.true_poly_bargmann(hermite_signal(0, like), 1, g2)
    lock = float(np.abs(F.values + math.sqrt(math.pi) * np.conj(g2.z))[np.abs(g2.z) <= 2].max()
                 / (2 * math.sqrt(math.pi)))
    ok = worst < 1e-4 and lock < 1e-5
    return CheckResult(3, "True-poly isometry n<=4, random f in span h_0..h_8", ok,
                       {"max_norm_gap": worst, "B2h0_rel_error": lock, "signals": len(fs)})


def check_04_orthogonality(quick=False):
    rng, like, grid, fs = _iso_setup(True)
    worst = 0.0
    pairs = 2 if quick else 4
    for i in range(pairs):
        f, g = fs[i % len(fs)], fs[(i + 1) % len(fs)]
        Bf = [bg.true_poly_bargmann(f, j, grid) for j in range(4)]
        Bg = [bg.true_poly_bargmann(g, k, grid) for k in range(4)]
        for j in range(4):
            for k in range(4):
                if j != k:
                    worst = max(worst, abs(weighted_inner(Bf[j], Bg[k])))
    return CheckResult(4, "Orthogonal decomposition across orders j!=k<=3", worst < 1e-5,
                       {"max_abs_inner": worst, "pairs": pairs})


def check_05_projection(quick=False):
    grid = ComplexGrid(4.5, 144)
    rng = np.random.default_rng(SEED + 5)
    top = 2 if quick else 3
    repro, annih = 0.0, 0.0
    for n in range(top + 1):
        for m in range(top + 1):
            F = PolyFockField(grid, bg.hermite_field(n, m, grid.z), n)
            nF = weighted_p_norm(F)
            for k in range(top + 1):
                P = bg.project(F, k)
                if k == n:
                    repro = max(repro, weighted_p_norm(P - F) / nF)
                elif k in (n - 1, n + 1) or not quick:
                    annih = max(annih, weighted_p_norm(P) / nF)
    c = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    mixed = PolyFockField(grid, sum(c[n, m] * bg.hermite_field(n, m, grid.z)
                                    for n in range(4) for m in range(4)), 3)
    idem = 0.0
    for k in range(top + 1):
        P1 = bg.project(mixed, k)
        P2 = bg.project(P1, k)
        idem = max(idem, weighted_p_norm(P2 - P1) / weighted_p_norm(P1))
    ok = repro < 1e-4 and annih < 1e-4 and idem < 1e-4
    return CheckResult(5, "Kernel projection: reproduce, idempotent, annihilate", ok,
                       {"reproducing": repro, "annihilation": annih, "idempotence": idem})


def _sheared_s5():
    r = math.sqrt(5.0)
    return make_lattice(r, r * (0.3 + 1j))


def check_06_sigma(quick=False):
    out = {}
    ok = True
    for label, lat in (("square_1", square_lattice(1.0)), ("sheared_2.39", make_lattice(1.3 + 0.2j, 0.4 + 1.9j)),
                       ("sheared_5", _sheared_s5())):
        ctx = sigma_context(lat)
        lam = lat.points(3.0)
        zeros = float(np.abs(ctx.modified_sigma(lam)).max())
        u = (np.arange(20) + 0.5) / 20
        cell = (u[:, None] * lat.l1 + u[None, :] * lat.l2).ravel()

        def per(z):
            return np.abs(ctx.modified_sigma(z)) * np.exp(-np.pi * np.abs(z) ** 2 / (2 * lat.size))
        base = per(cell)
        period = float(max(np.max(np.abs(per(cell + lat.l1) - base) / base),
                           np.max(np.abs(per(cell + lat.l2) - base) / base)))
        out[label] = {"zero_set": zeros, "periodicity": period, "legendre": ctx.legendre_residual,
                      "modifier_mismatch": ctx.modifier_mismatch}
        ok &= zeros < 1e-8 and period < 1e-6 and ctx.legendre_residual < 1e-8
    a0 = abs(sigma_context(square_lattice(1.0)).a)
    out["a_square"] = a0
    return CheckResult(6, "Sigma zero set, periodicity, Legendre, a(Z+iZ)=0", bool(ok and a0 < 1e-6), out)


def check_07_deltas(quick=False):
    out = {}
    worst = 0.0
    for label, lat in (("square_s4", square_lattice(2.0)), ("sheared_s5", _sheared_s5())):
        ctx = sigma_context(lat)
        lam = lat.points(2.5)
        target = (np.abs(lam) < 1e-12).astype(float)
        devs = [float(np.abs(interpolator_eval(ctx, n, lam) - target).max()) for n in range(4)]
        out[label] = {"points": int(lam.size), "max_dev_by_n": devs}
        worst = max(worst, max(devs))
    out["max_dev"] = worst
    return CheckResult(7, "Interpolator deltas S(lambda)=delta, n<=3", worst < 1e-6, out)


def check_08_interpolation(quick=False):
    rng = np.random.default_rng(SEED + 8)
    lat = square_lattice(2.0)
    pts = lat.points(4.0)
    a = SampleSet(lat, pts, rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size))
    inner = lat.points(2.5)
    F = interpolate(lat, 2, a, inner)
    idx = [int(np.argmin(np.abs(pts - p))) for p in inner]
    res = float(np.max(np.abs(F * np.exp(-np.pi * np.abs(inner) ** 2 / 2) - a.values[idx])))
    try:
        interpolate(square_lattice(1.0), 1, SampleSet(square_lattice(1.0), [0], [1.0]), [0.0])
        refused = False
    except HypothesisViolation:
        refused = True
    return CheckResult(8, "Interpolation series s=4, n=2; refusal at s=1, n=1", res < 1e-4 and refused,
                       {"interior_residual": res, "data_points": int(pts.size), "refused_s1_n1": refused})


def check_09_reconstruction(quick=False):
    rng = np.random.default_rng(SEED + 9)
    count = 60 if quick else 150
    z = _disk_points(rng, 1.5, count)
    lat = square_lattice(0.6)

    def F(w):
        return bg.hermite_field(1, 0, w)
    smp = sample_field(F, lat, default_sample_radius(lat, 1.5))
    rec = reconstruct_from_samples(smp, 1, z)
    err = float(np.abs(rec - F(z)).max() / np.abs(F(z)).max())
    lat2 = square_lattice(0.5)

    def F2(w):
        return bg.hermite_field(0, 0, w) + bg.hermite_field(1, 0, w)
    zv = z[: count // 2]
    smp2 = sample_field(F2, lat2, default_sample_radius(lat2, 1.5))
    scale = np.abs(F2(zv)).max()
    vec = float(np.abs(reconstruct_vector(smp2, 1, zv) - F2(zv)).max() / scale)
    series = float(np.abs(reconstruct_vector(smp2, 1, zv, method="series") - F2(zv)).max() / scale)
    best, scores = calibrate_reconstruction_weight(lat, 1)
    calib = {"selected": best.describe(), "frozen": RECONSTRUCTION_WEIGHT.describe(),
             "selected_error": scores[best],
             "runner_up_error": sorted(scores.values())[1]}
    ok = err < 1e-3 and vec < 1e-3 and best == RECONSTRUCTION_WEIGHT
    return CheckResult(9, "Sampling reconstruction B^2 h_0 on 0.6(Z+iZ); vector variant", ok,
                       {"max_rel_error": err, "samples": len(smp), "vector_nested_rel_error": vec,
                        "vector_plain_series_rel_error": series, "calibration": calib})


def check_10_frames(quick=False):
    M = 128 if quick else 256
    out = {}
    ok = True
    for n, s in ((1, 0.36), (2, 0.25), (0, 0.8)):
        r = frame_bounds(n, square_lattice(math.sqrt(s)), M)
        out[f"n{n}_s{s}"] = {"A": r.A, "B": r.B, "A_half": r.A_half, "certified": r.certified}
        ok &= r.certified
    r = frame_bounds(0, square_lattice(math.sqrt(1.2)), M)
    collapse = r.A < 1e-3 * r.B
    out["n0_s1.2"] = {"A": r.A, "B": r.B, "certified": r.certified, "collapse": collapse}
    r0 = frame_bounds(0, square_lattice(0.5), M)
    dA, dB = discrete_frame_bounds(0, 0.5, 0.5, 12.0, 240)
    cross = max(abs(r0.A - dA) / dA, abs(r0.B - dB) / dB)
    out["discrete_crosscheck_n0_s0.25"] = {"galerkin": [r0.A, r0.B], "discrete": [dA, dB], "rel_gap": cross}
    ok = bool(ok and collapse and not r.certified and cross < 0.1)
    return CheckResult(10, "Frame certification and A-collapse above critical density", ok, out)


def check_11_duality(quick=False):
    like = _signal_grid(12.0, 768)
    cases = ((0, 0.25),) if quick else ((0, 0.25), (1, 0.36))
    out = {}
    ok = True
    rng = np.random.default_rng(SEED + 11)
    for n, s in cases:
        lat = square_lattice(math.sqrt(s))
        gamma = dual_window(n, lat, like)
        bio = biorthogonality_check(gamma, n, lat, 3.0)
        f = hermite_expansion(rng.standard_normal(6), like)
        rec = gabor_synthesis(gabor_coefficients(f, n, lat), gamma)
        res = (rec - f).norm() / f.norm()
        out[f"n{n}_s{s}"] = {"biorthogonality": bio["max_deviation"], "reconstruction": res}
        ok &= bio["max_deviation"] < 1e-4 and res < 1e-5
    return CheckResult(11, "Dual window biorthogonality and Gabor reconstruction", bool(ok), out)


def check_12_multiplex(quick=False):
    like = _signal_grid()
    grid = ComplexGrid(5.0, 160)
    fs = [hermite_signal(m, like) for m in (0, 3, 5)]
    pk = mux_encode(fs, grid)
    energy = abs(weighted_p_norm(pk.field) ** 2 - 3.0)
    _, rep = mux_decode(pk, like, fs)
    clean = max(c["rel_error"] for c in rep["channels"])
    trials = 3 if quick else 10
    rng = np.random.default_rng(SEED + 12)
    gain, snr = [], []
    for _ in range(trials):
        _, r = mux_decode(add_noise(pk, -40.0, rng), like, fs)
        for c in r["channels"]:
            gain.append(c["field_snr_out_db"] - c["field_snr_in_db"])
            snr.append(c["snr_db"])
    metrics = {"clean_max_rel_error": clean, "energy_gap": energy, "trials": trials,
               "mean_projection_gain_db": float(np.mean(gain)), "min_projection_gain_db": float(np.min(gain)),
               "mean_channel_snr_db": float(np.mean(snr)), "min_channel_snr_db": float(np.min(snr))}
    ok = clean < 1e-3 and energy < 1e-4 and min(gain) > 0 and min(snr) >= 30.0
    return CheckResult(12, "Multiplex round trip, energy, noisy-channel gain", bool(ok), metrics)


def check_13_determinism(quick=False):
    a = [check_01_hermite(True), check_06_sigma(True), check_08_interpolation(True)]
    b = [check_01_hermite(True), check_06_sigma(True), check_08_interpolation(True)]
    sa = serialize(a)
    sb = serialize(b)
    return CheckResult(13, "Deterministic artifacts across repeated runs", sa == sb,
                       {"bytes": len(sa), "identical": sa == sb})


CHECKS = (check_01_hermite, check_02_bargmann_basis, check_03_isometry, check_04_orthogonality,
          check_05_projection, check_06_sigma, check_07_deltas, check_08_interpolation,
          check_09_reconstruction, check_10_frames, check_11_duality, check_12_multiplex,
          check_13_determinism)


def run_check(number: int, quick: bool = False) -> CheckResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return CHECKS[number - 1](quick)


def run_all(quick: bool = False, only=None) -> list[CheckResult]:
    nums = only or range(1, len(CHECKS) + 1)
    return [run_check(i, quick) for i in nums]


def serialize(results) -> bytes:
    from .io import _clean
    doc = {f"{r.number:02d}": {"name": r.name, "passed": r.passed, "metrics": r.metrics} for r in results}
    return (json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n").encode()
