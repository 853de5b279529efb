import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyfock import Signal, hermite_functions, hermite_signal, hermite_window, tf_shift
from polyfock.hermite import hermite_rodrigues
from polyfock.tfa import modulation_norm, stft_points


def test_recurrence_matches_rodrigues():
    t = np.linspace(-5, 5, 301)
    H = hermite_functions(10, t)
    for n in range(11):
        assert np.abs(H[n] - hermite_rodrigues(n, t)).max() < 1e-12


def test_parity_and_zero_count():
    t = np.linspace(-6, 6, 4001)
    H = hermite_functions(7, t)
    for n in range(8):
        assert np.allclose(H[n][::-1], (-1) ** n * H[n], atol=1e-14)
        assert np.count_nonzero(np.diff(np.sign(H[n][np.abs(H[n]) > 1e-12])) != 0) == n


def test_window_support_error():
    with pytest.raises(ValueError):
        hermite_window(9, -2.0, 2.0, 128)
    w = hermite_window(2, -8, 8, 512)
    assert w.signal.norm() == pytest.approx(1.0, abs=1e-14)


def test_shift_commutation_on_adjoint_pair():
    like = Signal(np.zeros(512), -8, 8)
    f = hermite_signal(1, like)
    # lam = (0.5, 0) and mu = (0, 2) have symplectic product 1, so shifts commute
    a = tf_shift(tf_shift(f, 0.5), 2j)
    b = tf_shift(tf_shift(f, 2j), 0.5)
    assert (a - b).norm() < 1e-12


def test_off_grid_shift_requires_interpolation():
    like = Signal(np.zeros(256), -8, 8)
    with pytest.raises(ValueError):
        tf_shift(hermite_signal(0, like), 0.01)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_stft_covariance(x, xi):
    like = Signal(np.zeros(1024), -10, 10)
    lam = complex(round(x / like.dt) * like.dt, xi)
    f = hermite_signal(2, like)
    g = hermite_signal(0, like)
    z = np.array([0.3 - 0.2j, -0.4 + 0.1j])
    lhs = stft_points(tf_shift(f, lam), g, z)
    rhs = stft_points(f, g, z - lam) * np.exp(-2j * np.pi * lam.real * (z.imag - lam.imag))
    assert np.abs(lhs - rhs).max() < 1e-9


def test_modulation_norm_of_gaussian():
    like = Signal(np.zeros(512), -8, 8)
    # ||V_g g||_2 = ||g||^2 = 1 (Moyal)
    assert modulation_norm(hermite_signal(0, like), 2.0) == pytest.approx(1.0, abs=1e-6)
