import runpy
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script, argv", [
    ("tour.py", []),
    ("invalc_walkthrough.py", ["--mutants", "5"]),
    ("nsl_probe.py", ["60"]),
])
def test_demo_runs(script, argv, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [script] + argv)
    runpy.run_path(str(DEMOS / script), run_name="__main__")
    assert capsys.readouterr().out.strip()
