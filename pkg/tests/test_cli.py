import csv
import json
import stat
import sys

import numpy as np
import pytest

from sboc import cli
from sboc.bench import get_function
from sboc.core import BoxDomain


def script(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(f"#!{sys.executable}\nimport sys\n{body}\n")
    p.chmod(p.stat().st_mode | stat.S_IEXEC)
    return p


LOGGING_ECHO = ("open(sys.argv[0] + '.log', 'a').write(' '.join(sys.argv[1:]) + '\\n')\n"
                "print(sys.argv[1])")


def read_trace(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_run_named_function_with_trace(tmp_path, capsys):
    t = tmp_path / "t.csv"
    rc = cli.main(["run", "--fn", "six-hump-camel-back", "--surrogate", "rbf", "--kmax", "50",
                   "--seed", "7", "--trace", str(t)])
    out = capsys.readouterr().out
    assert rc == 0
    rows = read_trace(t)
    assert 50 <= len(rows) <= 52
    f_best = float(out.split("f_best:")[1].split()[0])
    assert f_best == min(float(r["f"]) for r in rows)
    assert f"evaluations: {len(rows)}" in out


def test_run_branin_never_below_optimum(capsys):
    assert cli.main(["run", "--fn", "branin", "--kmax", "60", "--seed", "1"]) == 0
    f_best = float(capsys.readouterr().out.split("f_best:")[1].split()[0])
    assert f_best >= 0.397887 - 1e-9


def test_run_exec_identity(tmp_path, capsys):
    exe = script(tmp_path, "f", LOGGING_ECHO)
    t = tmp_path / "t.csv"
    rc = cli.main(["run", "--exec", str(exe), "--bounds", "0,1", "--kmax", "30", "--trace", str(t)])
    out = capsys.readouterr().out
    assert rc == 0
    x_best = float(out.split("x_best:")[1].split()[0])
    assert abs(x_best) <= 0.01
    logged = [float(l) for l in (tmp_path / "f.log").read_text().split()]
    # counter equals trace length equals the reported count; all calls in bounds
    assert len(logged) == len(read_trace(t))
    assert f"evaluations: {len(logged)}" in out
    assert all(0.0 <= v <= 1.0 for v in logged)


def test_run_exec_respects_bounds_2d(tmp_path, capsys):
    exe = script(tmp_path, "g", "open(sys.argv[0] + '.log', 'a').write(' '.join(sys.argv[1:]) + '\\n')\n"
                                "x, y = map(float, sys.argv[1:])\nprint((x - 3) ** 2 + (y + 1) ** 2)")
    assert cli.main(["run", "--exec", str(exe), "--bounds", "2,5;-4,-0.5", "--kmax", "25"]) == 0
    pts = np.loadtxt(tmp_path / "g.log", ndmin=2)
    assert np.all(pts[:, 0] >= 2) and np.all(pts[:, 0] <= 5)
    assert np.all(pts[:, 1] >= -4) and np.all(pts[:, 1] <= -0.5)


def test_run_persistent_mode(tmp_path, capsys):
    exe = script(tmp_path, "p", "for line in sys.stdin:\n    print(float(line.split()[0]) ** 2, flush=True)")
    assert cli.main(["run", "--exec", str(exe), "--mode", "persistent", "--bounds", "-1,1",
                     "--kmax", "20", "--timeout", "10"]) == 0
    assert float(capsys.readouterr().out.split("f_best:")[1].split()[0]) < 1e-3


def test_init_points(tmp_path, capsys):
    fn = get_function(1)
    pts = fn.domain.denormalize(np.array([[0.2, 0.3], [0.7, 0.1], [0.4, 0.9], [0.9, 0.9]]))
    p = tmp_path / "init.csv"
    np.savetxt(p, pts, delimiter=",")
    t = tmp_path / "t.csv"
    assert cli.main(["run", "--fn", "1", "--kmax", "4", "--init-points", str(p), "--trace", str(t)]) == 0
    rows = read_trace(t)
    assert [r["strategy"] for r in rows] == ["initial"] * 4
    np.testing.assert_allclose([[float(r["x1"]), float(r["x2"])] for r in rows],
                               [[0.2, 0.3], [0.7, 0.1], [0.4, 0.9], [0.9, 0.9]], atol=1e-15)


def test_same_command_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        t = tmp_path / f"{name}.csv"
        cli.main(["run", "--fn", "hosaki", "--kmax", "30", "--seed", "4", "--trace", str(t)])
        outs.append(t.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ["run"],
    ["run", "--fn", "branin", "--exec", "x"],
    ["run", "--exec", "/bin/true"],
    ["run", "--exec", "/bin/true", "--bounds", "1,0"],
    ["run", "--exec", "/bin/true", "--bounds", "a,b"],
    ["run", "--fn", "no-such-function"],
    ["run", "--fn", "branin", "--kmax", "0"],
    ["run", "--fn", "branin", "--init-points", "/nonexistent/file"],
    ["bench", "--runs", "0"],
    ["bench", "--ids", "99"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2


def test_objective_failure_exit_3(tmp_path, capsys):
    exe = script(tmp_path, "bad", "print('NaN')")
    t = tmp_path / "t.csv"
    assert cli.main(["run", "--exec", str(exe), "--bounds", "0,1", "--trace", str(t)]) == 3
    assert "objective failure" in capsys.readouterr().err
    assert t.exists()


def test_surrogate_failure_exit_4(monkeypatch, capsys):
    import sboc.engine as eng
    from sboc.exceptions import SingularSystem

    def bad(self, data, rng, y=None):
        raise SingularSystem("no")

    monkeypatch.setattr(eng.SurrogateSpec, "train", bad)
    assert cli.main(["run", "--fn", "branin", "--kmax", "30"]) == 4


def test_bench_one_function(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["bench", "--ids", "1", "--runs", "10", "--seed", "1", "--kmax", "20",
                     "--out", str(out), "--csv", str(tmp_path / "r.csv")]) == 0
    body = json.loads(out.read_text())
    assert len(body["functions"]) == 1 and len(body["functions"][0]["runs"]) == 10
    assert set(body["functions"][0]["median"]) == {"delta_x", "delta_f", "gamma"}
    assert "S = " in capsys.readouterr().out


def test_bench_single_run_medians(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["bench", "--ids", "5", "--runs", "1", "--kmax", "20", "--out", str(out)]) == 0
    f = json.loads(out.read_text())["functions"][0]
    assert f["median"] == {k: f["runs"][0][k] for k in ("delta_x", "delta_f", "gamma")}


def test_bench_report_byte_identical(tmp_path, capsys):
    texts = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.json"
        cli.main(["bench", "--ids", "28,43", "--runs", "2", "--kmax", "20", "--out", str(out)])
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]


def test_parse_bounds():
    d = cli.parse_bounds("-5,10;0,15")
    assert d == BoxDomain([-5, 0], [10, 15])
