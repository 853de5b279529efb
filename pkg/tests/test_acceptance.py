"""Acceptance criteria 1..13, one pass/fail line per criterion.

The lines are collected into an "acceptance criteria" section at the end
of the pytest run; ``pytest -s`` also shows the measured metrics.
"""
import pytest

from polyfock import acceptance

from conftest import ACCEPTANCE_LINES
from polyfock.cli import main

TOLERANCES = {
    1: "||G - I||_max < 1e-7",
    2: "max relative error < 1e-5",
    3: "norm gap < 1e-4",
    4: "cross inner products < 1e-5",
    5: "reproducing, idempotence, annihilation < 1e-4",
    6: "zeros < 1e-8, periodicity < 1e-6, Legendre < 1e-8, a < 1e-6",
    7: "delta deviation < 1e-6",
    8: "residual < 1e-4 and refusal raised",
    9: "max relative error < 1e-3 (scalar and vector)",
    10: "A > 1e-6 B and converged; collapse A < 1e-3 B",
    11: "biorthogonality < 1e-4, reconstruction < 1e-5",
    12: "clean error < 1e-3, energy < 1e-4, SNR gain > 0 over 10 trials",
    13: "byte-identical reports",
}


@pytest.mark.parametrize("number", range(1, 14))
def test_criterion(number):
    res = acceptance.run_check(number)
    line = f"{res.line()}  [{TOLERANCES[number]}]"
    ACCEPTANCE_LINES.append(line)
    print(line, res.metrics)
    assert res.passed, res.metrics


def test_criterion_13_cli_selftest_bytes(tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        assert main(["selftest", "--quick", "--only", "1,6,8", "--out-dir", str(d)]) == 0
        outs.append((d / "acceptance.json").read_bytes())
    print(f"[{'PASS' if outs[0] == outs[1] else 'FAIL'}] 13 selftest report bytes identical via CLI")
    assert outs[0] == outs[1]
