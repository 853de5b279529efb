import numpy as np
import pytest

from polyfock import ComplexGrid, Signal, add_noise, hermite_signal, mux_decode, mux_encode, weighted_p_norm
from polyfock.multiplex import MuxPacket, channel_project

pytestmark = pytest.mark.filterwarnings("ignore::polyfock.TruncationWarning")

GRID = ComplexGrid(5.0, 128)


@pytest.fixture
def sigs():
    like = Signal(np.zeros(512), -8, 8)
    return [hermite_signal(0, like), hermite_signal(2, like) * 1j]


def test_channels_are_independent_of_order(sigs):
    a, _ = mux_decode(mux_encode(sigs, GRID), sigs[0])
    b, _ = mux_decode(mux_encode(sigs[::-1], GRID), sigs[0])
    # swapping inputs swaps the recovered signals
    assert (a[0] - sigs[0]).norm() < 1e-8 and (b[1] - sigs[0]).norm() < 1e-8
    assert (a[1] - sigs[1]).norm() < 1e-8 and (b[0] - sigs[1]).norm() < 1e-8


def test_encoding_is_linear(sigs):
    F = mux_encode(sigs, GRID).field
    G = mux_encode([s * 2 for s in sigs], GRID).field
    assert weighted_p_norm(G - F * 2) < 1e-12


def test_noise_is_seeded_and_scaled(sigs):
    pk = mux_encode(sigs, GRID)
    n1 = add_noise(pk, -40, np.random.default_rng(1))
    n2 = add_noise(pk, -40, np.random.default_rng(1))
    assert np.array_equal(n1.field.values, n2.field.values)
    assert n1.noise_level > 0


def test_packet_validation(sigs):
    pk = mux_encode(sigs, GRID)
    with pytest.raises(IndexError):
        channel_project(pk, 3)
    with pytest.raises(ValueError):
        MuxPacket(pk.field, 3)
    with pytest.raises(ValueError):
        mux_encode([sigs[0]] * 9, GRID)
