"""CSV and JSON readers and writers with round-trippable floats.

Formats
-------
signal   ``t,re,im``
field    ``x,xi,re,im`` row-major over ``(j, k)``
samples  ``lre,lim,re,im``
lattice  ``{"l1": [re, im], "l2": [re, im]}``
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import ComplexGrid, Lattice, PolyFockField, SampleSet, Signal


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_rows(path, header, cols):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([fmt(v) for v in row])


def _read_rows(path, header) -> np.ndarray:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        got = next(r, None)
        if got != list(header):
            raise ValueError(f"{path}: expected header {','.join(header)}")
        data = [[float(v) for v in row] for row in r if row]
    if not data:
        raise ValueError(f"{path}: no data rows")
    return np.array(data)


def write_signal(path, f: Signal):
    _write_rows(path, ("t", "re", "im"), (f.t, f.samples.real, f.samples.imag))


def read_signal(path) -> Signal:
    a = _read_rows(path, ("t", "re", "im"))
    if a.shape[0] < 2:
        raise ValueError(f"{path}: a signal needs at least two samples")
    dt = (a[-1, 0] - a[0, 0]) / (a.shape[0] - 1)
    if not np.allclose(np.diff(a[:, 0]), dt, rtol=1e-9, atol=1e-12):
        raise ValueError(f"{path}: samples are not uniformly spaced")
    return Signal(a[:, 1] + 1j * a[:, 2], a[0, 0], a[0, 0] + a.shape[0] * dt)


def write_field(path, F: PolyFockField):
    z = F.grid.z.ravel()
    v = F.values.ravel()
    _write_rows(path, ("x", "xi", "re", "im"), (z.real, z.imag, v.real, v.imag))


def read_field(path, order: int = 0, p: float = 2.0) -> PolyFockField:
    a = _read_rows(path, ("x", "xi", "re", "im"))
    x = np.unique(a[:, 0])
    M = x.size
    if a.shape[0] != M * M:
        raise ValueError(f"{path}: field is not on a square grid")
    h = (x[-1] - x[0]) / (M - 1)
    grid = ComplexGrid(-x[0] + h / 2, M)
    if not np.allclose(grid.axis, x, atol=1e-9):
        raise ValueError(f"{path}: nodes are not a symmetric midpoint grid")
    return PolyFockField(grid, (a[:, 2] + 1j * a[:, 3]).reshape(M, M), order, p)


def write_samples(path, s: SampleSet):
    _write_rows(path, ("lre", "lim", "re", "im"),
                (s.points.real, s.points.imag, s.values.real, s.values.imag))


def read_samples(path, lattice: Lattice) -> SampleSet:
    a = _read_rows(path, ("lre", "lim", "re", "im"))
    return SampleSet(lattice, a[:, 0] + 1j * a[:, 1], a[:, 2] + 1j * a[:, 3])


def read_lattice(path) -> Lattice:
    d = json.loads(Path(path).read_text())
    if set(d) != {"l1", "l2"}:
        raise ValueError(f"{path}: lattice JSON needs exactly the keys l1, l2")
    return Lattice(complex(*d["l1"]), complex(*d["l2"]))


def write_lattice(path, lattice: Lattice):
    write_json(path, lattice.to_json())


def _clean(o):
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, (np.bool_, bool)):
        return bool(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    if isinstance(o, (float, np.floating)):
        o = float(o)
        return o if np.isfinite(o) else str(o)
    return o


def write_json(path, obj):
    Path(path).write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
