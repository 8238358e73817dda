from __future__ import annotations

import json
import subprocess
import sys

import pytest

from arborloose.arboreal import LooseReport
from arborloose.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_loose_report_table(capsys):
    code, out, _ = run(capsys, "loose-report", "--n", "3", "--w", "0->2,1->3")
    assert code == 0
    assert "cells=10 loose=6 link_loose=false vanishing=false" in out


def test_loose_report_json_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "loose-report", "--n", "3", "--w", "0->2,1->3", "--format", "json")
    assert code == 0
    report = LooseReport.from_json(out)
    assert report.to_json() == out
    _, again, _ = run(capsys, "loose-report", "--n", "3", "--w", "0->2,1->3", "--format", "json")
    assert again == out
    assert json.loads(out)["vanishing"] is False


def test_loose_report_from_flags(capsys, tmp_path):
    flags = tmp_path / "flags.txt"
    lines = [f"{a},{b} {'proper' if (a, b) in {(0, 2), (1, 3)} else 'full'}" for a in range(5) for b in range(a + 1, 5)]
    flags.write_text("\n".join(lines) + "\n")
    dot = tmp_path / "faces.dot"
    code, out, _ = run(capsys, "loose-report", "--n", "3", "--flags", str(flags), "--faces-dot", str(dot))
    assert code == 0 and "loose=6" in out
    assert dot.read_text().startswith("digraph faces")


def test_closure_all(capsys):
    code, out, _ = run(capsys, "closure", "--n", "2", "--w", "0->2,1->3")
    assert code == 0
    assert "morphisms: 10" in out


def test_closure_json(capsys):
    _, out, _ = run(capsys, "closure", "--n", "2", "--w", "0->2", "--format", "json")
    assert json.loads(out)["closure"] == "0->0,0->2,1->1,2->2,3->3"


def test_localize(capsys, tmp_path):
    code, out, _ = run(capsys, "localize", "--n", "2", "--w", "0->2", "--table")
    assert code == 0 and "max hom-set size: 2" in out and "composition:" in out
    _, out, _ = run(capsys, "localize", "--n", "2", "--w", "0->2", "--format", "json")
    assert json.loads(out)["hom_sizes"][1][1] == 2
    target = tmp_path / "loc.dot"
    run(capsys, "localize", "--n", "2", "--w", "0->2", "--format", "dot", "--out", str(target))
    assert target.read_text().startswith("digraph")


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--n", "2", "--w", "0->2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["oracles"]["reps"]["agrees"] and data["oracles"]["representable"]["agrees"]


def test_identity_rejected(capsys):
    code, _, err = run(capsys, "closure", "--n", "2", "--w", "1->1")
    assert code == 3 and "identity" in err


def test_malformed_morphism(capsys):
    code, _, _ = run(capsys, "closure", "--n", "2", "--w", "3->1")
    assert code == 3


def test_capacity_exit(capsys):
    code, _, err = run(capsys, "oracle", "--n", "3", "--dmax", "3", "--kind", "reps")
    assert code == 4 and "exceeds" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["closure"])
    assert exc.value.code == 2


def test_front(capsys, tmp_path):
    svg = tmp_path / "front.svg"
    code, out, _ = run(capsys, "front", "--tree", "root;0;1", "--out", str(svg), "--census")
    assert code == 0 and "bounded: 3" in out and "unbounded: 1" in out
    assert svg.read_text().startswith("<svg")
    code, _, _ = run(capsys, "front", "--tree", "root;0;1", "--census", "--resolution", "100")
    assert code == 3
    venn = tmp_path / "venn.svg"
    assert run(capsys, "front", "--venn", "3", "--out", str(venn))[0] == 0
    assert venn.read_text().count("<circle") == 3


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--max-n", "2", "--only", "4,5")
    assert code == 0
    assert out.count("PASS") == 2


def test_selftest_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "arborloose", "selftest", "--max-n", "3"],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "9/9 checks passed" in proc.stdout
