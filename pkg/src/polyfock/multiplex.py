"""Multiplexing several signals into orthogonal true poly-Fock channels.

Channel ``k`` (1-based) carries ``B^k f_k``.  The superposition is a single
field; each channel is recovered by the orthogonal projection onto its true
poly-Fock space followed by the adjoint transform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bargmann import inverse_true_poly_bargmann, poly_bargmann, project, true_poly_bargmann
from .core import ComplexGrid, PolyFockField, Signal, weighted_p_norm

MAX_CHANNELS = 8


@dataclass(frozen=True, eq=False)
class MuxPacket:
    field: PolyFockField
    n_channels: int
    noise_level: float = 0.0

    def __post_init__(self):
        if not 1 <= self.n_channels <= MAX_CHANNELS:
            raise ValueError(f"channel count must lie in [1, {MAX_CHANNELS}]")
        if self.field.order != self.n_channels - 1:
            raise ValueError("field order does not match the channel count")
        if self.noise_level < 0:
            raise ValueError("noise level must be non-negative")


def mux_encode(f_vec, grid: ComplexGrid) -> MuxPacket:
    """Superpose ``B^1 f_1 + ... + B^n f_n`` on ``grid``."""
    f_vec = list(f_vec)
    if not 1 <= len(f_vec) <= MAX_CHANNELS:
        raise ValueError(f"channel count must lie in [1, {MAX_CHANNELS}]")
    return MuxPacket(poly_bargmann(f_vec, grid), len(f_vec))


def add_noise(packet: MuxPacket, snr_db: float, rng: np.random.Generator) -> MuxPacket:
    """Complex white noise on the weighted field at ``snr_db`` relative to
    the weighted field energy (e.g. ``-40`` for noise 40 dB below signal)."""
    F = packet.field
    w = F.weighted
    p_sig = np.mean(np.abs(w) ** 2)
    p_noise = p_sig * 10 ** (snr_db / 10)
    noise = rng.standard_normal(w.shape) + 1j * rng.standard_normal(w.shape)
    noise *= math.sqrt(p_noise / 2)
    vals = (w + noise) / np.exp(-np.pi * np.abs(F.grid.z) ** 2 / 2)
    return MuxPacket(F.with_values(vals), packet.n_channels, p_noise)


def channel_project(packet: MuxPacket, k: int) -> PolyFockField:
    """Channel ``k`` (1-based): projection onto the true poly-Fock space of order ``k``."""
    if not 1 <= k <= packet.n_channels:
        raise IndexError(f"channel {k} out of range 1..{packet.n_channels}")
    if packet.n_channels == 1 and packet.noise_level == 0:
        return packet.field
    return project(packet.field, k - 1)


def snr_db(reference, estimate) -> float:
    """``10 log10(||ref||^2 / ||est - ref||^2)`` for signals or fields."""
    if isinstance(reference, Signal):
        num, den = reference.norm(), (estimate - reference).norm()
    else:
        num = weighted_p_norm(reference, 2)
        den = weighted_p_norm(estimate - reference, 2)
    return float("inf") if den == 0 else 20 * math.log10(num / den)


def mux_decode(packet: MuxPacket, like: Signal | None = None, truth=None):
    """Recover every channel.

    Returns ``(signals, report)``.  With ``truth`` the report lists the
    relative L2 error and the SNR of each channel; with noise it also lists
    the field-domain SNR before and after projection.
    """
    signals, report = [], {"channels": []}
    for k in range(1, packet.n_channels + 1):
        Fk = channel_project(packet, k)
        f = inverse_true_poly_bargmann(Fk, k - 1, like)
        signals.append(f)
        entry = {"channel": k}
        if truth is not None:
            ref = truth[k - 1]
            entry["rel_error"] = (f - ref).norm() / ref.norm()
            entry["snr_db"] = snr_db(ref, f)
            if packet.noise_level > 0:
                clean = true_poly_bargmann(ref, k - 1, packet.field.grid)
                raw = PolyFockField(clean.grid, packet.field.values - _others(packet, truth, k), k - 1)
                entry["field_snr_in_db"] = snr_db(clean, raw)
                entry["field_snr_out_db"] = snr_db(clean, Fk)
        report["channels"].append(entry)
    return signals, report


def _others(packet: MuxPacket, truth, k: int) -> np.ndarray:
    """Sum of the clean fields of every channel except ``k``."""
    grid = packet.field.grid
    return sum((true_poly_bargmann(f, j, grid).values for j, f in enumerate(truth) if j != k - 1),
               np.zeros((grid.M, grid.M), complex))
