import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from patrolppd import Poly, cli


@pytest.fixture
def scenario(tmp_path):
    def write(text, name="s.yaml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_ppd_csv_shape(capsys, scenario):
    path = scenario("environment: perimeter\nd: 16\nt: 12\nmovement: dcp\n")
    code, out, _ = run(capsys, "ppd", "--scenario", path)
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["segment", "p", "ppd"]
    assert len(table) == 16 * 101


def test_dncp_dominates_dcp(capsys, scenario):
    base = "environment: perimeter\nN: 32\nk: 2\nt: 12\nmovement: {}\n"
    _, dcp, _ = run(capsys, "ppd", "--scenario", scenario(base.format("dcp"), "a.yaml"))
    _, dncp, _ = run(capsys, "ppd", "--scenario", scenario(base.format("dncp"), "b.yaml"))
    a = np.array([float(r["ppd"]) for r in rows(dcp)])
    b = np.array([float(r["ppd"]) for r in rows(dncp)])
    assert np.all(a <= b + 1e-10)


def test_fence_json_has_all_pairs(capsys, scenario):
    code, out, _ = run(capsys, "ppd", "--scenario", scenario("environment: fence\nd: 8\nt: 10\n"),
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert {(c["location"], c["segment"]) for c in doc["curves"]} == {
        (j, i) for j in range(1, 9) for i in range(1, 9)
    }


def test_fence_csv_has_location_column(capsys, scenario):
    _, out, _ = run(capsys, "ppd", "--scenario", scenario("environment: fence\nd: 3\nt: 3\n"), "--grid", "5")
    table = rows(out)
    assert list(table[0]) == ["segment", "location", "p", "ppd"]
    assert len(table) == 9 * 5


def test_csv_round_trips_through_json_coefficients(capsys, scenario):
    path = scenario("environment: perimeter\nd: 7\nt: 5\nsensing: impdetlrange\nL: 1\nV_S: [0.9, 0.4]\n")
    _, text, _ = run(capsys, "ppd", "--scenario", path, "--grid", "33")
    _, js, _ = run(capsys, "ppd", "--scenario", path, "--format", "json")
    curves = {c["segment"]: Poly(c["coefficients"]) for c in json.loads(js)["curves"]}
    for r in rows(text):
        assert curves[int(r["segment"])](float(r["p"])) == float(r["ppd"])


def test_optimize_sweep_numbers(capsys, scenario):
    for d, expected in ((9, 0.423), (15, 0.05)):
        _, out, _ = run(capsys, "optimize", "--scenario", scenario(f"d: {d}\nt: 8\n"))
        (row,) = rows(out)
        assert float(row["value"]) == pytest.approx(expected, abs=0.01)
        assert row["witness_segments"] and row["candidates"]


def test_optimize_fence_one_line_per_location(capsys, scenario):
    _, out, _ = run(capsys, "optimize", "--scenario", scenario("environment: fence\nd: 8\nt: 10\n"))
    assert [int(r["location"]) for r in rows(out)] == list(range(1, 9))
    _, js, _ = run(capsys, "optimize", "--scenario", scenario("environment: fence\nd: 8\nt: 10\n"),
                   "--format", "json")
    assert len(json.loads(js)) == 8


def test_sweep_over_d(capsys, scenario):
    code, out, _ = run(capsys, "sweep", "--scenario", scenario("d: 9\nt: 8\n"), "--vary", "d=8..15")
    table = rows(out)
    assert code == 0
    assert table[0]["status"] == "TPenetrationTooLong" and table[0]["p_opt"] == ""
    values = [float(r["maximin_value"]) for r in table[1:]]
    assert [int(r["param"]) for r in table[1:]] == list(range(9, 16))
    assert values[0] == pytest.approx(0.423, abs=0.01) and values[-1] == pytest.approx(0.05, abs=0.01)
    assert all(a > b for a, b in zip(values, values[1:]))


def test_sweep_over_t_per_segment(capsys, scenario):
    path = scenario("d: 16\nt: 9\n")
    _, out, _ = run(capsys, "sweep", "--scenario", path, "--vary", "t=9..15", "--per-segment", "--jobs", "3")
    table = rows(out)
    values = [float(r["maximin_value"]) for r in table]
    assert all(a < b for a, b in zip(values, values[1:]))
    for r in table:
        segs = np.array([float(r[f"seg_{i}"]) for i in range(1, 17)])
        assert segs.min() == pytest.approx(float(r["maximin_value"]), abs=1e-9)
        k = int(np.flatnonzero(segs <= segs.min() + 1e-9)[0])
        assert segs[0] > segs[k] < segs[k:].max()
    _, serial, _ = run(capsys, "sweep", "--scenario", path, "--vary", "t=9..15", "--per-segment")
    assert serial == out


def test_simulate_deterministic_patrol(capsys, scenario):
    code, out, _ = run(capsys, "simulate", "--scenario", scenario("d: 9\nt: 8\n"), "--p", "1",
                       "--adversary", "full", "--trials", "100000", "--seed", "1")
    assert code == 0
    assert float(rows(out)[0]["fraction"]) == 0.0


def test_simulate_reproducible_and_matches_sweep_value(capsys, scenario):
    path = scenario("d: 9\nt: 8\n")
    args = ("simulate", "--scenario", path, "--p", "opt", "--trials", "1000000", "--seed", "0")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    (r,) = rows(a)
    assert abs(float(r["fraction"]) - 0.423) <= float(r["halfwidth"])


def test_simulate_fixed_segment_and_random(capsys, scenario):
    path = scenario("environment: fence\nd: 5\nt: 6\nmovement: dncp\n")
    code, out, _ = run(capsys, "simulate", "--scenario", path, "--p", "0.4", "--segment", "2",
                       "--location", "4", "--trials", "1000")
    assert code == 0 and rows(out)[0]["segment"] == "2"
    code, out, _ = run(capsys, "simulate", "--scenario", path, "--p", "0.4", "--adversary", "random",
                       "--trials", "1000", "--format", "json")
    assert code == 0 and json.loads(out)["segment"] is None


@pytest.mark.parametrize(
    "text, name",
    [
        ("d: 16\nt: 12\ncolour: red\n", "ScenarioError"),
        ("d: 8\nt: 8\n", "TPenetrationTooLong"),
        ("d: 16\nt: 2\n", "TPenetrationTooShort"),
        ("N: 17\nk: 2\nt: 8\n", "NonUniformPlacement"),
        ("d: 9\nt: 8\nsensing: impdetect\np_d: 2\n", "InvalidParameter"),
        ("d: 9\nt: 7\nmovement: bmp\nsensing: lrange\nL: 1\n", "UnsupportedCombination"),
        ("d: 9\nt: 8\nmovement: hover\n", "ScenarioError"),
        ("- just\n- a list\n", "ScenarioError"),
    ],
)
def test_invalid_scenarios_exit_2(capsys, scenario, text, name):
    code, out, err = run(capsys, "ppd", "--scenario", scenario(text))
    assert code == 2
    assert out == ""
    assert err.startswith(name)


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "optimize", "--scenario", str(tmp_path / "nope.yaml"))
    assert code == 2 and "ScenarioError" in err


def test_exact_rational_cross_check(capsys, scenario):
    path = scenario("environment: fence\nd: 4\nt: 4\nsensing: impdetect\np_d: 0.5\n")
    code, out, _ = run(capsys, "ppd", "--scenario", path, "--exact-rational", "--format", "json")
    assert code == 0
    first = json.loads(out)["curves"][0]
    assert all("/" in x or x.lstrip("-").isdigit() for x in first["exact"])


def test_exact_rational_mismatch_exit_3(capsys, scenario, monkeypatch):
    real = cli.find_func

    def skewed(cfg, exact=False):
        prof = real(cfg, exact)
        if exact:
            return prof
        curves = (prof.curves[0] + Poly([1e-6]),) + prof.curves[1:]
        return type(prof)(curves, prof.config)

    monkeypatch.setattr(cli, "find_func", skewed)
    code, _, err = run(capsys, "ppd", "--scenario", scenario("d: 5\nt: 4\n"), "--exact-rational")
    assert code == 3 and "NumericalFailure" in err


def test_byte_identical_output(capsys, scenario):
    path = scenario("environment: fence\nd: 5\nt: 5\nmovement: bmp\n")
    outs = {run(capsys, "optimize", "--scenario", path, "--format", "json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_module_entry_point(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("d: 9\nt: 8\n")
    proc = subprocess.run([sys.executable, "-m", "patrolppd", "optimize", "--scenario", str(path)],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("p_opt,value")
