"""The demo scripts must run clean and print what they promise."""

import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def run_demo(name: str) -> str:
    proc = subprocess.run(
        [sys.executable, str(DEMOS / name)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr == ""
    return proc.stdout


@pytest.mark.parametrize(
    "name, markers",
    [
        (
            "taxonomy_walkthrough.py",
            ["-> intact", "-> complete", "-> partial",
             "-> additive_infix", "-> additive_affix", "-> missing"],
        ),
        (
            "decay_experiment.py",
            ["matches the analytic prediction exactly", "2/2"],
        ),
        (
            "noise_pipeline.py",
            ["built 17 contrastive pairs", "corruption frequency by noise model"],
        ),
    ],
)
def test_demo_runs_and_reports(name, markers):
    out = run_demo(name)
    for marker in markers:
        assert marker in out, f"{name} output lacks {marker!r}"


def test_seeded_demos_are_reproducible():
    assert run_demo("noise_pipeline.py") == run_demo("noise_pipeline.py")
