import math

import numpy as np
import pytest
import sympy as sp
from scipy.special import eval_genlaguerre

from polyfock import (ComplexGrid, PolyFockField, Signal, fock_shift, hermite_field,
                      hermite_signal, inverse_true_poly_bargmann, kernel_eval, project, tf_shift,
                      true_poly_bargmann, weighted_p_norm)
from polyfock.bargmann import KernelSpec, bargmann, polyanalytic_polynomial

pytestmark = pytest.mark.filterwarnings("ignore::polyfock.TruncationWarning")

Z = np.array([0.3 + 0.4j, -0.7 + 0.1j, 1.1 - 0.6j, 0.0])


def test_kernel_laguerre_form():
    w = np.array([0.2 - 0.5j, 1.0 + 0.3j])
    z = np.array([-0.4 + 0.2j, 0.6 - 0.1j])
    for n in range(5):
        ref = eval_genlaguerre(n, 0, np.pi * np.abs(w - z) ** 2) * np.exp(np.pi * np.conj(z) * w)
        assert np.allclose(kernel_eval(n, w, z), ref, rtol=1e-12)


def test_kernel_diagonal():
    for n in range(4):
        assert np.allclose(kernel_eval(n, Z, Z), np.exp(np.pi * np.abs(Z) ** 2), rtol=1e-13)


def test_kernel_order_limits():
    with pytest.raises(ValueError):
        KernelSpec(31)
    with pytest.raises(ValueError):
        KernelSpec(-1)


def test_derivative_form_symbolic():
    z, zb = sp.symbols("z zb")
    for n in range(4):
        for m in range(4):
            em = sp.sqrt(sp.pi ** m / sp.factorial(m)) * z ** m
            expr = sp.exp(sp.pi * z * zb) * sp.diff(sp.exp(-sp.pi * z * zb) * em, z, n)
            expr = sp.simplify(expr / sp.sqrt(sp.pi ** n * sp.factorial(n)))
            f = sp.lambdify((z, zb), expr, "numpy")
            assert np.allclose(f(Z, np.conj(Z)) * np.ones_like(Z), hermite_field(n, m, Z), atol=1e-12)


def test_polyanalytic_degree_in_conj_z():
    # e_{k,m} is a polynomial of degree min(k, m) in conj(z)
    for k in range(4):
        for m in range(4):
            c = math.sqrt(math.pi ** k * math.factorial(k))
            assert np.allclose(polyanalytic_polynomial(k, m, Z) / c, hermite_field(k, m, Z), atol=1e-12)


def test_bargmann_of_gaussian_is_one(like):
    g = ComplexGrid(3.0, 64)
    F = bargmann(hermite_signal(0, like), g)
    assert np.abs(F.values - 1)[np.abs(g.z) <= 2].max() < 1e-10


def test_intertwining(like):
    g = ComplexGrid(2.0, 32)
    lam = complex(round(0.75 / like.dt) * like.dt, -0.4)
    for n in range(3):
        F = true_poly_bargmann(tf_shift(hermite_signal(1, like), lam), n, g)
        ref = fock_shift(lambda z: hermite_field(n, 1, z), lam)(g.z)
        assert np.abs(F.values - ref).max() / np.abs(ref).max() < 1e-9


def test_inverse_round_trip(like):
    g = ComplexGrid(6.0, 192)
    f = hermite_signal(2, like) * (1 - 0.5j) + hermite_signal(0, like)
    for n in range(3):
        back = inverse_true_poly_bargmann(true_poly_bargmann(f, n, g), n, like)
        assert (back - f).norm() / f.norm() < 1e-8


def test_projection_is_contraction_and_splits_orders():
    g = ComplexGrid(4.5, 144)
    F = PolyFockField(g, hermite_field(0, 2, g.z) + hermite_field(2, 1, g.z), 2)
    P0, rep = project(F, 0, return_report=True)
    P2 = project(F, 2)
    assert rep["norm_ratio"] <= 1 + 1e-8
    assert weighted_p_norm(P0 - PolyFockField(g, hermite_field(0, 2, g.z), 0)) < 1e-6
    assert weighted_p_norm(P2 - PolyFockField(g, hermite_field(2, 1, g.z), 2)) < 1e-6
    assert weighted_p_norm(project(F, 1)) < 1e-6
