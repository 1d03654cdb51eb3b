"""Every acceptance criterion at desk scale, master seed 2024.

Each test prints one ``criterion N: PASS/FAIL`` line (visible with ``-s`` or
in the captured output of a failure) and asserts both the statistical verdict
and, where one applies, the runtime limit.
"""

import json

import pytest

from pvdcov import acceptance
from pvdcov.cli import main

pytestmark = pytest.mark.slow


def check(result):
    print(result.line())
    print(f"  values: {json.dumps(acceptance._plain(result.values), sort_keys=True)}")
    if result.timing:
        print(f"  timing: {json.dumps(acceptance._plain(result.timing), sort_keys=True)}")
    # a timing-only criterion carries passed=None and its verdict in timing_passed
    assert result.passed is not False, result.values
    assert result.timing_passed is not False, result.timing
    assert result.ok


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 7])
def test_criterion(number):
    fn = getattr(acceptance, f"criterion_{number}")
    check(fn(scale="desk", seed=acceptance.DEFAULT_SEED))


def test_criterion_8_library():
    check(acceptance.criterion_8(scale="desk", seed=acceptance.DEFAULT_SEED))


def test_criterion_8_cli_reports_identical_across_workers(tmp_path, capsys):
    reports = []
    for workers in ("1", "2"):
        out = tmp_path / f"w{workers}"
        code = main(["selftest", "--scale", "quick", "--criteria", "1,3,7", "--workers", workers, "--out", str(out)])
        assert code == 0, capsys.readouterr().out
        reports.append((out / "selftest_report.json").read_bytes())
    assert reports[0] == reports[1]
    print(f"criterion 8: {'PASS' if reports[0] == reports[1] else 'FAIL'}  CLI selftest report bytes, workers 1 vs 2")
