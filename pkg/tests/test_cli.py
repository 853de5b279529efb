import json

import numpy as np
import pytest

from polyfock import ComplexGrid, PolyFockField, SampleSet, Signal, hermite_signal, io, square_lattice
from polyfock.cli import main, parse_config


@pytest.fixture
def work(tmp_path):
    like = Signal(np.zeros(512), -8, 8)
    io.write_signal(tmp_path / "a.csv", hermite_signal(0, like))
    io.write_signal(tmp_path / "b.csv", hermite_signal(1, like))
    io.write_lattice(tmp_path / "sparse.json", square_lattice(2.0))
    io.write_lattice(tmp_path / "fine.json", square_lattice(0.5))
    io.write_lattice(tmp_path / "dense.json", square_lattice(1.1))
    return tmp_path


def test_csv_round_trips(tmp_path):
    like = Signal(np.zeros(64), -4, 4)
    f = hermite_signal(3, like) * (0.3 - 0.1j)
    io.write_signal(tmp_path / "f.csv", f)
    g = io.read_signal(tmp_path / "f.csv")
    assert np.array_equal(g.samples, f.samples) and (g.t_min, g.t_max) == (f.t_min, f.t_max)
    grid = ComplexGrid(2.0, 16)
    F = PolyFockField(grid, np.exp(grid.z), 0)
    io.write_field(tmp_path / "F.csv", F)
    assert np.array_equal(io.read_field(tmp_path / "F.csv").values, F.values)
    lat = square_lattice(0.5)
    pts = lat.points(1.0)
    s = SampleSet(lat, pts, np.arange(pts.size) * 1j)
    io.write_samples(tmp_path / "s.csv", s)
    assert np.array_equal(io.read_samples(tmp_path / "s.csv", lat).values, s.values)


def test_stft_and_bargmann(work):
    assert main(["stft", "--window", "hermite:1", "--signal", str(work / "a.csv"),
                 "--grid", "4,32", "--out", str(work / "v.csv")]) == 0
    assert main(["bargmann", "--order", "0", "--signal", str(work / "a.csv"),
                 "--grid", "4,64", "--out", str(work / "B.csv")]) == 0
    F = io.read_field(work / "B.csv")
    disk = np.abs(F.grid.z) <= 2
    assert np.abs(F.values - 1)[disk].max() < 1e-8


def test_strict_escalates_truncation(work):
    args = ["bargmann", "--order", "0", "--signal", str(work / "a.csv"), "--grid", "2,16",
            "--out", str(work / "B.csv")]
    assert main(args) == 0
    assert main(args + ["--strict"]) == 4


def test_sigma_writes_two_fields(work):
    assert main(["sigma", "--lattice", str(work / "sparse.json"), "--order", "1", "--grid", "2,16",
                 "--out", str(work / "S.csv")]) == 0
    assert (work / "S_sigma.csv").exists()
    S = io.read_field(work / "S.csv", 1)
    assert abs(S.values).max() > 0


def test_interpolate_and_reconstruct_exit_codes(work):
    lat = square_lattice(2.0)
    io.write_samples(work / "a_s.csv", SampleSet(lat, lat.points(3.0), np.ones(lat.points(3.0).size)))
    assert main(["interpolate", "--lattice", str(work / "sparse.json"), "--order", "1",
                 "--samples", str(work / "a_s.csv"), "--grid", "2,8", "--out", str(work / "I.csv")]) == 0
    lat = square_lattice(1.1)
    io.write_samples(work / "d_s.csv", SampleSet(lat, lat.points(2.0), np.ones(lat.points(2.0).size)))
    code = main(["reconstruct", "--samples", str(work / "d_s.csv"), "--lattice", str(work / "dense.json"),
                 "--order", "0", "--grid", "2,8", "--out", str(work / "R.csv")])
    assert code == 3


def test_framebounds_and_dualwindow(work):
    assert main(["framebounds", "--order", "0", "--lattice", str(work / "fine.json"),
                 "--galerkin", "64", "--out", str(work / "fb.json")]) == 0
    doc = json.loads((work / "fb.json").read_text())
    assert doc["certified"] and doc["A"] > 0
    assert main(["dualwindow", "--order", "0", "--lattice", str(work / "dense.json"),
                 "--out", str(work / "g.csv")]) == 3
    assert main(["dualwindow", "--order", "0", "--lattice", str(work / "fine.json"),
                 "--signal-grid", "-8,8,256", "--out", str(work / "g.csv")]) == 0
    assert io.read_signal(work / "g.csv").N == 256


def test_mux_demux_files(work):
    sig = ",".join(str(work / n) for n in ("a.csv", "b.csv"))
    assert main(["mux", "--signals", sig, "--grid", "6,96", "--out", str(work / "pk.csv")]) == 0
    assert main(["demux", "--packet", str(work / "pk.csv"), "--channels", "2",
                 "--out-prefix", str(work / "ch"), "--signal-grid", "-8,8,512"]) == 0
    for k, name in ((1, "a.csv"), (2, "b.csv")):
        ref = io.read_signal(work / name)
        got = io.read_signal(work / f"ch{k}.csv")
        assert (got - ref).norm() < 1e-6


def test_mux_noise_is_seeded(work):
    base = ["mux", "--signals", str(work / "a.csv"), "--grid", "4,32", "--noise-db", "-30"]
    for name in ("p1", "p2"):
        assert main(base + ["--seed", "5", "--out", str(work / f"{name}.csv")]) == 0
    assert (work / "p1.csv").read_bytes() == (work / "p2.csv").read_bytes()


def test_config_merge_and_precedence(work):
    cfg = work / "c.json"
    cfg.write_text(json.dumps({"window": "hermite:0", "grid": "9,8", "out": str(work / "v.csv")}))
    rc = parse_config(["stft", "--config", str(cfg), "--signal", str(work / "a.csv"), "--grid", "3,16"])
    assert rc.params["grid"] == ComplexGrid(3.0, 16) and rc.params["window"] == 0
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["stft", "--config", str(cfg)]) == 2


@pytest.mark.parametrize("argv", [
    ["stft", "--window", "gauss", "--signal", "x", "--grid", "3,16", "--out", "y"],
    ["stft", "--window", "hermite:0", "--signal", "missing.csv", "--grid", "3,16", "--out", "y"],
    ["bargmann", "--order", "0", "--signal", "x", "--grid", "3,15", "--out", "y"],
    ["demux", "--packet", "x", "--channels", "9", "--out-prefix", "c"],
    ["framebounds", "--order", "0"],
    ["nosuch"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_selftest_subset(tmp_path, capsys):
    assert main(["selftest", "--quick", "--only", "1,7", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "[PASS]  1" in out and "2/2 checks passed" in out
    assert json.loads((tmp_path / "acceptance.json").read_text())["07"]["passed"]
