import math
import warnings

import numpy as np
import pytest

from polyfock import (ComplexGrid, HypothesisViolation, PolyFockField, SampleSet, SigmaContext,
                      hermite_field, interpolate, interpolator_eval, make_lattice, reconstruct_from_samples,
                      reconstruct_vector, sample_field, square_lattice, vector_interpolator)
from polyfock.elliptic import sigma_product
from polyfock.sampling import default_sample_radius, norm_equivalence_report, sigma_context

SHEARED = make_lattice(1.3 + 0.2j, 0.4 + 1.9j)


def test_sigma_matches_product_oracle():
    ctx = SigmaContext(SHEARED)
    z = np.array([0.3 + 0.2j, -0.5 + 0.7j, 0.9 - 0.4j])
    ref = sigma_product(SHEARED, z, radius=60)
    assert np.abs(ctx.sigma(z) - ref).max() / np.abs(ref).max() < 1e-4


def test_zeta_is_odd_and_refuses_lattice_points():
    ctx = SigmaContext(SHEARED)
    z = np.array([0.31 + 0.17j, -0.6 + 0.9j, 1.7 - 0.2j])
    assert np.allclose(ctx.zeta(-z), -ctx.zeta(z), atol=1e-10)
    with pytest.raises(ValueError):
        ctx.zeta(SHEARED.l1)


def test_square_quasi_period_and_modifier():
    ctx = SigmaContext(square_lattice(1.0))
    # generators are ordered as (i, 1): eta(1) = pi, eta(i) = -i pi
    assert ctx.lattice.l2 == 1
    assert ctx.eta2 == pytest.approx(math.pi, abs=1e-10)
    assert ctx.eta1 == pytest.approx(-1j * math.pi, abs=1e-10)
    assert abs(ctx.a) < 1e-10


def test_modifier_scaling():
    a1 = SigmaContext(SHEARED).a
    a2 = SigmaContext(SHEARED.scaled(2.0)).a
    assert a2 == pytest.approx(a1 / 4, abs=1e-10)


def test_vector_interpolator_at_origin():
    ctx = sigma_context(square_lattice(2.0))
    for n in range(4):
        assert vector_interpolator(ctx, n, np.array([0.0]))[0] == pytest.approx(n + 1, abs=1e-10)


def test_weighted_deltas_far_from_origin():
    # the raw value S^n(lambda) loses absolute accuracy like exp((n+1) pi |lambda|^2 / (2s));
    # the series only use the Gaussian-weighted value, which stays at round-off when s > n+1
    for lat in (square_lattice(2.0), SHEARED.scaled(2.0)):
        ctx = sigma_context(lat)
        lam = lat.points(8.0)
        for n in range(4):
            if not lat.size > n + 1:
                continue
            S = interpolator_eval(ctx, n, lam)
            S[0] -= 1
            assert (np.abs(S) * np.exp(-np.pi * np.abs(lam) ** 2 / 2)).max() < 1e-12


def test_density_hypotheses_enforced():
    a = SampleSet(square_lattice(1.0), [0], [1.0])
    with pytest.raises(HypothesisViolation):
        interpolate(square_lattice(1.0), 0, a, [0.0])
    s = SampleSet(square_lattice(0.8), [0], [1.0])
    with pytest.raises(HypothesisViolation):
        reconstruct_from_samples(s, 1, [0.0])


def test_interpolation_is_linear():
    lat = square_lattice(2.0)
    pts = lat.points(4.0)
    rng = np.random.default_rng(3)
    u, v = (rng.standard_normal(pts.size) for _ in range(2))
    z = np.array([0.3 + 0.1j, -1.1 + 0.4j])
    fu = interpolate(lat, 1, SampleSet(lat, pts, u), z)
    fv = interpolate(lat, 1, SampleSet(lat, pts, v), z)
    fuv = interpolate(lat, 1, SampleSet(lat, pts, 2 * u - 3j * v), z)
    assert np.allclose(fuv, 2 * fu - 3j * fv, atol=1e-10)


def test_interpolation_then_sampling_recovers_data():
    lat = square_lattice(2.0)
    pts = lat.points(4.0)
    a = SampleSet(lat, pts, np.cos(np.arange(pts.size)))
    inner = lat.points(2.1)
    F = lambda z: interpolate(lat, 1, a, z)  # noqa: E731
    got = sample_field(F, lat, 2.1).weighted
    assert np.abs(got - a.values[: inner.size]).max() < 1e-8


def test_sampling_reconstruction_of_order_zero_field():
    lat = square_lattice(0.6)
    F = lambda z: hermite_field(0, 2, z)  # noqa: E731
    smp = sample_field(F, lat, default_sample_radius(lat, 1.0))
    z = np.array([0.2 + 0.3j, -0.5 + 0.1j, 0.7 - 0.6j])
    rec = reconstruct_from_samples(smp, 0, z)
    assert np.abs(rec - F(z)).max() / np.abs(F(z)).max() < 1e-6


def test_vector_reconstruction_methods():
    lat = square_lattice(0.5)
    F = lambda z: hermite_field(0, 1, z) + 0.5 * hermite_field(1, 0, z)  # noqa: E731
    smp = sample_field(F, lat, default_sample_radius(lat, 1.0))
    z = np.array([0.2 + 0.3j, -0.5 + 0.1j])
    assert np.abs(reconstruct_vector(smp, 1, z) - F(z)).max() < 1e-8
    with pytest.raises(ValueError):
        reconstruct_vector(smp, 1, z, method="other")


def test_norm_equivalence_and_sigma_collapse():
    g = ComplexGrid(8.0, 256)
    lat = square_lattice(math.sqrt(1.2))
    gauss = PolyFockField(g, np.ones_like(g.z), 0)
    sig = PolyFockField(g, sigma_context(lat).modified_sigma(g.z), 0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = norm_equivalence_report([gauss], square_lattice(0.5), R_lattice=6.0)
        assert 0.5 < rep["min"] <= rep["max"] < 10
        low = norm_equivalence_report([gauss, sig], lat, R_lattice=6.0, require_positive=False)
        assert low["min"] < 1e-3 * low["max"]
    with pytest.raises(ValueError):
        norm_equivalence_report([gauss.with_values(gauss.values * 0)], lat, R_lattice=6.0)
