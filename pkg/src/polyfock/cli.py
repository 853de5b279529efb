"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 violated density hypothesis,
4 numerical-quality failure (truncation or convergence flags; warnings are
promoted to failures by ``--strict``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from contextlib import nullcontext
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .core import (AccuracyWarning, ComplexGrid, HypothesisViolation, NumericalQualityError, PolyFockField,
                   Signal, TruncationWarning)

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_NUMERICAL = 0, 2, 3, 4
COMMANDS = ("stft", "bargmann", "sigma", "interpolate", "reconstruct", "framebounds", "dualwindow",
            "mux", "demux", "selftest")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# value parsers
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> ComplexGrid:
    try:
        r, m = text.split(",")
        return ComplexGrid(float(r), int(m))
    except ValueError as e:
        raise UsageError(f"--grid expects R,M with M even, got {text!r} ({e})") from None


def parse_signal_grid(text: str) -> Signal:
    try:
        a, b, n = text.split(",")
        return Signal(np.zeros(int(n)), float(a), float(b))
    except ValueError as e:
        raise UsageError(f"--signal-grid expects tmin,tmax,N, got {text!r} ({e})") from None


def parse_window(text: str) -> int:
    kind, _, order = text.partition(":")
    if kind != "hermite" or not order.isdigit():
        raise UsageError(f"--window expects hermite:n, got {text!r}")
    return int(order)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with parameter defaults; flags win")
    p.add_argument("--strict", action="store_true", default=None, help="treat accuracy warnings as failures")
    p.add_argument("--seed", type=int, help="random seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyfock", description="Gabor analysis with Hermite windows "
                                 "and polyanalytic Fock spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stft", help="STFT of a signal with a Hermite window")
    p.add_argument("--window", help="hermite:n")
    p.add_argument("--signal", help="signal CSV")
    p.add_argument("--grid", help="R,M")
    p.add_argument("--out", help="field CSV")

    p = sub.add_parser("bargmann", help="true polyanalytic Bargmann transform")
    p.add_argument("--order", type=int)
    p.add_argument("--signal")
    p.add_argument("--grid")
    p.add_argument("--out")

    p = sub.add_parser("sigma", help="modified sigma and interpolating function fields")
    p.add_argument("--lattice")
    p.add_argument("--order", type=int)
    p.add_argument("--grid")
    p.add_argument("--out", help="field CSV for S^n; sigma goes to --sigma-out")
    p.add_argument("--sigma-out", help="field CSV for sigma_Lambda (default <out>_sigma.csv)")

    p = sub.add_parser("interpolate", help="interpolating series from weighted data")
    p.add_argument("--lattice")
    p.add_argument("--order", type=int)
    p.add_argument("--samples", help="samples CSV holding a_lambda")
    p.add_argument("--grid")
    p.add_argument("--out")

    p = sub.add_parser("reconstruct", help="sampling reconstruction from lattice values")
    p.add_argument("--samples")
    p.add_argument("--lattice")
    p.add_argument("--order", type=int)
    p.add_argument("--grid")
    p.add_argument("--out")
    p.add_argument("--vector", action="store_true", default=None,
                   help="full poly-Fock field of orders 1..n+1")

    p = sub.add_parser("framebounds", help="Galerkin frame bounds")
    p.add_argument("--order", type=int)
    p.add_argument("--lattice")
    p.add_argument("--galerkin", type=int, help="Galerkin dimension M (default 256)")
    p.add_argument("--out")

    p = sub.add_parser("dualwindow", help="canonical dual window")
    p.add_argument("--order", type=int)
    p.add_argument("--lattice")
    p.add_argument("--signal-grid", help="tmin,tmax,N (default -12,12,768)")
    p.add_argument("--out")

    p = sub.add_parser("mux", help="multiplex signals into one field")
    p.add_argument("--signals", help="comma-separated signal CSVs")
    p.add_argument("--grid")
    p.add_argument("--noise-db", type=float, help="noise level relative to the field, e.g. -40")
    p.add_argument("--out")

    p = sub.add_parser("demux", help="recover channels from a packet")
    p.add_argument("--packet")
    p.add_argument("--channels", type=int)
    p.add_argument("--out-prefix")
    p.add_argument("--signal-grid", help="tmin,tmax,N (default -8,8,1024)")

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", default=None)
    p.add_argument("--out-dir", help="artifact directory (default selftest-artifacts)")
    p.add_argument("--only", help="comma-separated check numbers")

    for name, sp in sub.choices.items():
        _common(sp)
    return ap


REQUIRED = {
    "stft": ("window", "signal", "grid", "out"),
    "bargmann": ("order", "signal", "grid", "out"),
    "sigma": ("lattice", "order", "grid", "out"),
    "interpolate": ("lattice", "order", "samples", "grid", "out"),
    "reconstruct": ("samples", "lattice", "order", "grid", "out"),
    "framebounds": ("order", "lattice", "out"),
    "dualwindow": ("order", "lattice", "out"),
    "mux": ("signals", "grid", "out"),
    "demux": ("packet", "channels", "out-prefix"),
    "selftest": (),
}
DEFAULTS = {"strict": False, "seed": 0, "galerkin": 256, "quick": False, "vector": False,
            "out_dir": "selftest-artifacts"}


VALUE_FLAGS = ("--grid", "--signal-grid", "--noise-db")


def _join_negative(argv):
    """Rewrite ``--grid -8,8,512`` as ``--grid=-8,8,512`` so argparse keeps
    values that start with a minus sign."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def parse_config(argv) -> RunConfig:
    """Parse and validate arguments, merging ``--config`` defaults."""
    ap = build_parser()
    ns = ap.parse_args(_join_negative(list(argv)))
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    if ns.config:
        try:
            cfg = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"--config: cannot read {ns.config}: {e}") from None
        if not isinstance(cfg, dict):
            raise UsageError("--config must hold a JSON object")
        for key, val in cfg.items():
            dest = key.replace("-", "_")
            if dest not in params:
                raise UsageError(f"--config: unknown key {key!r} for {ns.command}")
            if params[dest] is None:
                params[dest] = val
    for k, v in DEFAULTS.items():
        if k in params and params[k] is None:
            params[k] = v
    missing = [r for r in REQUIRED[ns.command] if params.get(r.replace("-", "_")) is None]
    if missing:
        raise UsageError(f"{ns.command}: missing --{', --'.join(missing)}")
    _validate(ns.command, params)
    return RunConfig(ns.command, params)


def _validate(cmd, p):
    if p.get("grid") is not None and not isinstance(p["grid"], ComplexGrid):
        p["grid"] = parse_grid(str(p["grid"]))
    if p.get("signal_grid") is not None:
        p["signal_grid"] = parse_signal_grid(str(p["signal_grid"]))
    if p.get("window") is not None:
        p["window"] = parse_window(str(p["window"]))
    for k in ("order", "channels", "galerkin", "seed"):
        if p.get(k) is not None:
            try:
                p[k] = int(p[k])
            except (TypeError, ValueError):
                raise UsageError(f"--{k} expects an integer") from None
    if p.get("order") is not None and p["order"] < 0:
        raise UsageError("--order must be non-negative")
    if p.get("channels") is not None and not 1 <= p["channels"] <= 8:
        raise UsageError("--channels must lie in 1..8")
    if p.get("galerkin") is not None and p["galerkin"] < 8:
        raise UsageError("--galerkin must be at least 8")
    if p.get("noise_db") is not None:
        p["noise_db"] = float(p["noise_db"])
    if cmd == "selftest" and p.get("only"):
        try:
            p["only"] = [int(v) for v in str(p["only"]).split(",")]
        except ValueError:
            raise UsageError("--only expects comma-separated integers") from None
        if not all(1 <= v <= 13 for v in p["only"]):
            raise UsageError("--only: check numbers lie in 1..13")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read_input(fn, path, *args):
    try:
        return fn(path, *args)
    except (OSError, ValueError) as e:
        raise UsageError(str(e)) from None


def cmd_stft(p):
    from .hermite import HermiteWindow, hermite_signal
    from .tfa import stft
    f = _read_input(io.read_signal, p["signal"])
    V = stft(f, HermiteWindow(p["window"], hermite_signal(p["window"], f)), p["grid"])
    io.write_field(p["out"], PolyFockField(p["grid"], V, 0))


def cmd_bargmann(p):
    from .bargmann import true_poly_bargmann
    f = _read_input(io.read_signal, p["signal"])
    io.write_field(p["out"], true_poly_bargmann(f, p["order"], p["grid"]))


def cmd_sigma(p):
    from .elliptic import interpolator_eval
    from .sampling import sigma_context
    lat = _read_input(io.read_lattice, p["lattice"])
    ctx = sigma_context(lat)
    g = p["grid"]
    out = Path(p["out"])
    sig_out = p.get("sigma_out") or str(out.with_name(out.stem + "_sigma" + out.suffix))
    io.write_field(sig_out, PolyFockField(g, ctx.modified_sigma(g.z), 0))
    io.write_field(out, PolyFockField(g, interpolator_eval(ctx, p["order"], g.z), p["order"]))


def cmd_interpolate(p):
    from .sampling import interpolate
    lat = _read_input(io.read_lattice, p["lattice"])
    a = _read_input(io.read_samples, p["samples"], lat)
    g = p["grid"]
    io.write_field(p["out"], PolyFockField(g, interpolate(lat, p["order"], a, g.z), p["order"]))


def cmd_reconstruct(p):
    from .sampling import reconstruct_from_samples, reconstruct_vector
    lat = _read_input(io.read_lattice, p["lattice"])
    s = _read_input(io.read_samples, p["samples"], lat)
    g = p["grid"]
    fn = reconstruct_vector if p["vector"] else reconstruct_from_samples
    io.write_field(p["out"], PolyFockField(g, fn(s, p["order"], g.z), p["order"]))


def cmd_framebounds(p):
    from .frames import frame_bounds
    lat = _read_input(io.read_lattice, p["lattice"])
    r = frame_bounds(p["order"], lat, p["galerkin"])
    io.write_json(p["out"], r.to_json())
    if p["strict"] and not r.converged:
        raise NumericalQualityError("Galerkin bounds did not converge")


def cmd_dualwindow(p):
    from .frames import dual_window
    lat = _read_input(io.read_lattice, p["lattice"])
    like = p.get("signal_grid") or parse_signal_grid("-12,12,768")
    io.write_signal(p["out"], dual_window(p["order"], lat, like))


def cmd_mux(p):
    from .multiplex import add_noise, mux_encode
    paths = [s for s in str(p["signals"]).split(",") if s]
    fs = [_read_input(io.read_signal, s) for s in paths]
    try:
        pk = mux_encode(fs, p["grid"])
    except ValueError as e:
        raise UsageError(str(e)) from None
    if p.get("noise_db") is not None:
        pk = add_noise(pk, p["noise_db"], np.random.default_rng(p["seed"]))
    io.write_field(p["out"], pk.field)


def cmd_demux(p):
    from .multiplex import MuxPacket, mux_decode
    k = p["channels"]
    F = _read_input(io.read_field, p["packet"], k - 1)
    like = p.get("signal_grid") or parse_signal_grid("-8,8,1024")
    sigs, _ = mux_decode(MuxPacket(F, k), like)
    for i, f in enumerate(sigs, 1):
        io.write_signal(f"{p['out_prefix']}{i}.csv", f)


def cmd_selftest(p):
    from .acceptance import run_all, serialize
    results = run_all(p["quick"], p.get("only"))
    out = Path(p["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "acceptance.json").write_bytes(serialize(results))
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        raise NumericalQualityError(f"failed checks: {failed}")


DISPATCH = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(config: RunConfig) -> int:
    """Execute a validated configuration and return the exit code."""
    threads = os.environ.get("POLYFOCK_THREADS")
    try:
        limit = int(threads) if threads else None
    except ValueError:
        print("polyfock: POLYFOCK_THREADS must be an integer", file=sys.stderr)
        return EXIT_USAGE
    if limit is not None:
        from threadpoolctl import threadpool_limits
        ctx = threadpool_limits(limits=limit)
    else:
        ctx = nullcontext()
    try:
        with ctx, warnings.catch_warnings():
            if config.params.get("strict"):
                warnings.simplefilter("error", TruncationWarning)
                warnings.simplefilter("error", AccuracyWarning)
            else:
                warnings.simplefilter("ignore", TruncationWarning)
            DISPATCH[config.command](config.params)
    except UsageError as e:
        print(f"polyfock {config.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolation as e:
        print(f"polyfock {config.command}: hypothesis violated: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (NumericalQualityError, TruncationWarning, AccuracyWarning) as e:
        print(f"polyfock {config.command}: numerical quality: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"polyfock: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
