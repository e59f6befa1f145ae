from __future__ import annotations

import csv
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from lamespiral import cli
from lamespiral.relations import sector_to_arc

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *args):
    status = cli.main(list(args))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_verify_n2_passes(capsys):
    status, out, _ = run(capsys, "verify", "--n", "2")
    assert status == 0
    rows = json.loads(out)
    assert rows and all(r["pass"] for r in rows)
    # fixed schema and deterministic order
    for r in rows:
        assert list(r) == ["name", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass"]
        assert isinstance(r["lhs"], float) and isinstance(r["pass"], bool)
    names = [r["name"] for r in rows]
    assert names == sorted(names)


def test_verify_n1_fundamental(capsys):
    _, out, _ = run(capsys, "verify", "--n", "1")
    row = next(r for r in json.loads(out) if r["name"].startswith("fundamental"))
    assert math.isclose(row["lhs"], math.pi / 2, rel_tol=1e-15)
    assert math.isclose(row["rhs"], math.pi / 2, rel_tol=1e-15)


@pytest.mark.parametrize(
    "args",
    [
        ("verify", "--n", "0"),
        ("verify", "--n", "-2"),
        ("verify",),
        ("frobnicate", "--n", "2"),
        ("verify", "--n", "2", "--tol", "0"),
        ("table", "--n", "2", "--samples", "1"),
        ("schedule", "--n", "2.5"),
        ("render", "--n", "2", "--figure", "torus"),
    ],
)
def test_usage_errors_exit_64(capsys, args):
    status, out, err = run(capsys, *args)
    assert status == 64
    assert out == "" and "usage error" in err


def test_failed_identity_exits_1(capsys):
    # a tolerance below double rounding makes some check fail honestly
    status, out, _ = run(capsys, "verify", "--n", "3", "--tol", "1e-300")
    assert status == 1
    assert not all(r["pass"] for r in json.loads(out))


def test_numeric_failure_exits_2(capsys, monkeypatch):
    from lamespiral.errors import ConvergenceError

    def boom(*_args, **_kw):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "run_suite", boom)
    status, out, err = run(capsys, "verify", "--n", "2")
    assert status == 2 and out == "" and "numerical failure" in err


def test_parallel_verify_is_identical(capsys):
    _, serial, _ = run(capsys, "verify", "--n", "2.5")
    _, parallel, _ = run(capsys, "verify", "--n", "2.5", "--jobs", "3")
    assert serial == parallel


def test_csv_round_trip(capsys, tmp_path):
    path = tmp_path / "v.csv"
    assert run(capsys, "verify", "--n", "3", "--format", "csv", "--out", str(path))[0] == 0
    reports = cli.run_suite(3.0, 1e-9)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(reports)
    for row, rep in zip(rows, reports):
        assert row["name"] == rep.name
        for key in ("lhs", "rhs", "abs_err", "rel_err", "tol"):
            assert float(row[key]) == getattr(rep, key)
        assert row["pass"] == "true"


def test_table_examples(capsys):
    _, out, _ = run(capsys, "table", "--n", "2", "--samples", "3")
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["theta", "spiral_r", "lame_r", "policle_r"]
    assert [float(v) for v in rows[1]] == [0.0, 1.0, 1.0, 1.0]
    mid = [float(v) for v in rows[2]]
    assert math.isclose(mid[0], math.pi / 8) and math.isclose(mid[1], 2**-0.25, rel_tol=1e-15)
    last = [float(v) for v in rows[3]]
    assert math.isclose(last[2], 2**0.25, rel_tol=1e-15) and math.isclose(last[3], 2**0.25, rel_tol=1e-15)


def test_table_json_marks_off_leaf_rows(capsys):
    _, out, _ = run(capsys, "table", "--n", "4", "--samples", "5", "--format", "json")
    rows = json.loads(out)
    assert rows[-1]["spiral_r"] is None  # theta = pi/4 lies between leaves for n = 4
    assert rows[0]["spiral_r"] == 1.0


def test_simulate_dual(capsys):
    _, out, _ = run(capsys, "simulate", "--n", "3", "--samples", "49")
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 49
    assert float(rows[0]["lame_x"]) == 1.0 and float(rows[0]["lame_y"]) == 0.0
    for row in rows:
        a, l = float(row["swept_area"]), float(row["traversed_length"])
        assert abs(l - 2 ** (4 / 3) * a) <= 1e-8


def test_simulate_force(capsys):
    status, out, _ = run(capsys, "simulate", "--n", "2", "--mode", "force")
    assert status == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert max(float(r["curve_residual"]) for r in rows) <= 1e-6
    assert max(float(r["angular_momentum_drift"]) for r in rows) <= 1e-9


@pytest.mark.parametrize("n, lines", [(3, 24), (2, 8), (1, 8)])
def test_schedule_lengths(capsys, n, lines):
    _, out, _ = run(capsys, "schedule", "--n", str(n))
    assert len(out.splitlines()) == lines
    assert out.splitlines()[0] == "(P1,Q1)"


def _svg(capsys, *args):
    status, out, _ = run(capsys, "render", *args)
    assert status == 0
    root = ET.fromstring(out.split("\n", 1)[1])
    assert root.get("viewBox") == "-1.5 -1.5 3 3"
    return {
        el.get("id"): el
        for el in root.iter()
        if el.tag in (SVG + "polyline", SVG + "polygon", SVG + "circle")
    }


def _points(el):
    return [tuple(map(float, p.split(","))) for p in el.get("points").split()]


def test_render_spiral_closed(capsys):
    pts = _points(_svg(capsys, "--figure", "spiral", "--n", "5")["spiral"])
    assert len(pts) >= 256
    assert math.dist(pts[0], pts[-1]) <= 1e-9
    # every point lies on the spiral
    for x, y in pts[::7]:
        r = math.hypot(x, y)
        if r > 1e-12:
            assert math.isclose(r**5, math.cos(5 * math.atan2(y, x)), abs_tol=1e-12)


def test_render_relation(capsys):
    els = _svg(capsys, "--figure", "relation", "--n", "3", "--alpha", "0.5")
    sector = _points(els["sector"])
    assert sector[0] == (0.0, 0.0) and sector[-1] == (0.0, 0.0)
    arc = _points(els["arc"])
    beta = sector_to_arc(3, 0.5).beta
    assert math.isclose(math.atan2(arc[0][1], arc[0][0]), beta, rel_tol=1e-12)
    # the arc ends at the leaf edge pi/6, which is the origin
    assert math.hypot(*arc[-1]) <= 1e-12
    assert math.isclose(math.atan2(arc[-2][1], arc[-2][0]), math.pi / 6, rel_tol=1e-2)


def test_render_policle(capsys, tmp_path):
    path = tmp_path / "p.svg"
    assert cli.main(["render", "--figure", "policle", "--n", "3", "--out", str(path)]) == 0
    root = ET.parse(path).getroot()
    els = {el.get("id"): el for el in root.iter() if el.get("id")}
    pol = _points(els["policle"])
    assert pol[0] == (1.0, 0.0)
    assert len(pol) >= 256
    for ident in ("B", "Bprime", "C", "P"):
        assert ident in els


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lamespiral.cli", "schedule", "--n", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "(P8,Q4)"
