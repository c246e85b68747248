"""Regenerate the CLI golden reports in tests/golden/.

Run from anywhere; paths in the cases are relative to the repository root.

    python scripts/regen_goldens.py
"""
import io
import json
import os
from pathlib import Path

from ltikit import Constant, simulate_continuous
from ltikit.cli import run
from ltikit.files import parse_model

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def main():
    os.chdir(ROOT)
    model = parse_model("models/rotation_unit.json")
    traj = simulate_continuous(model, [1.0, 0.0], Constant(1.0), 0.0, 3.141592653589793, 100)
    traj.to_csv(GOLDEN / "rotation_unit_y.csv")
    for case in json.loads((GOLDEN / "cases.json").read_text()):
        buf = io.StringIO()
        code = run(case["argv"] + ["--reproducible"], stdout=buf)
        if code != case["exit"]:
            raise SystemExit(f"{case['name']}: exit {code}, expected {case['exit']}")
        (GOLDEN / f"{case['name']}.json").write_text(buf.getvalue(), newline="\n")
        print(f"{case['name']}: exit {code}")


if __name__ == "__main__":
    main()
