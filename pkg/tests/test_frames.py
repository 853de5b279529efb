import math

import numpy as np
import pytest

from polyfock import (HypothesisViolation, Signal, adjoint_lattice, biorthogonality_check, dual_window,
                      frame_bounds, hermite_signal, square_lattice, tf_shift)
from polyfock.frames import discrete_frame_bounds, frame_operator_apply, riesz_lower_bound

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


@pytest.fixture
def sig():
    like = Signal(np.zeros(512), -8, 8)
    return hermite_signal(1, like) * (1 + 1j) + hermite_signal(0, like)


def test_frame_operator_self_adjoint(sig):
    lat = square_lattice(0.5)
    g = hermite_signal(3, sig)
    Sf = frame_operator_apply(sig, 1, lat)
    Sg = frame_operator_apply(g, 1, lat)
    assert abs(Sf.inner(g) - sig.inner(Sg)) < 1e-12


def test_frame_operator_commutes_with_lattice_shifts(sig):
    lat = square_lattice(0.5)
    lam = 0.5 + 0.5j
    Sf = frame_operator_apply(sig, 1, lat)
    lhs = frame_operator_apply(tf_shift(sig, lam), 1, lat)
    assert (lhs - tf_shift(Sf, lam)).norm() / Sf.norm() < 1e-10


@pytest.mark.parametrize("n", [0, 1])
def test_fine_lattice_is_nearly_tight(n):
    like = Signal(np.zeros(512), -10, 10)
    lat = square_lattice(math.sqrt(0.1))
    rep = frame_bounds(n, lat)
    assert rep.A == pytest.approx(1 / lat.size, rel=1e-4)
    assert rep.B == pytest.approx(1 / lat.size, rel=1e-4)
    gamma = dual_window(n, lat, like, rep)
    h = hermite_signal(n, like) * lat.size
    assert (gamma - h).norm() / h.norm() < 1e-4


def test_biorthogonality_detects_wrong_window():
    like = Signal(np.zeros(768), -12, 12)
    lat = square_lattice(0.6)
    rep = frame_bounds(1, lat)
    naive = hermite_signal(1, like) * (2 / (rep.A + rep.B))
    assert biorthogonality_check(naive, 1, lat)["max_deviation"] > 1e-2
    gamma = dual_window(1, lat, like, rep)
    assert biorthogonality_check(gamma, 1, lat)["max_deviation"] < 1e-6


def test_adjoint_lattice_gives_riesz_sequence():
    like = Signal(np.zeros(512), -8, 8)
    lat = square_lattice(0.5)
    assert riesz_lower_bound(0, adjoint_lattice(lat), like) > 0.5
    assert riesz_lower_bound(0, lat, like) < 1e-10


def test_frame_bounds_reject_dense_window():
    lat = square_lattice(math.sqrt(1.2))
    rep = frame_bounds(0, lat)
    assert not rep.certified and rep.condition > 1e3
    with pytest.raises(HypothesisViolation):
        dual_window(0, lat, Signal(np.zeros(256), -8, 8), rep)


def test_report_json_and_argument_checks():
    rep = frame_bounds(1, square_lattice(0.6), 64)
    doc = rep.to_json()
    assert {"A", "B", "condition", "certified", "galerkin"} <= set(doc)
    with pytest.raises(ValueError):
        frame_bounds(0, square_lattice(0.5), 4)
    with pytest.raises(ValueError):
        discrete_frame_bounds(0, 0.37, 0.5, 12.0, 240)
