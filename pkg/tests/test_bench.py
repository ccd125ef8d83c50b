import csv
import io
import json
import math

import numpy as np
import pytest

from sboc.bench import (
    REGISTRY, SUBSET_2D, BenchmarkReport, delta_f, delta_x, discrepancy_list, evaluate, gamma,
    get_function, median, run_seeds, run_suite, select, self_check,
)
from sboc.exceptions import BelowOptimum

SHCB = get_function(1)


def test_registry_shape():
    assert len(REGISTRY) == 52
    assert [f.id for f in REGISTRY] == list(range(1, 53))
    assert sum(f.motf for f in REGISTRY) == 16
    assert sum(f.multimodal for f in REGISTRY) == 46
    for f in REGISTRY:
        assert f.minimizers_array.shape[1] == f.dim
        assert np.all((f.minimizers_array >= 0) & (f.minimizers_array <= 1))
        if f.motf:
            np.testing.assert_array_equal(f.minimizers_array, 0.5)
    dims = [f.dim for f in REGISTRY]
    assert sum(d <= 4 for d in dims) == 40 and sum(d > 4 for d in dims) == 12


@pytest.mark.parametrize("fid,dim,bounds", [
    (1, 2, ((-2, 2), (-1, 1))), (5, 2, ((-5, 10), (0, 15))), (19, 5, ((-25, 25),) * 5),
    (44, 2, ((0, 5), (0, 6))), (50, 10, ((0, 10),) * 10), (51, 10, ((-math.pi, math.pi),) * 10),
])
def test_registry_fields(fid, dim, bounds):
    f = get_function(fid)
    assert f.dim == dim
    np.testing.assert_allclose(f.bounds, bounds)


def test_shcb_values():
    assert evaluate(SHCB, np.array([0.0, 1.0])) == pytest.approx(1.7333, abs=5e-5)
    assert evaluate(SHCB, np.array([0.0, 0.0])) == pytest.approx(5.7333, abs=5e-5)
    assert evaluate(SHCB, np.array([0.5225, 0.1437])) == pytest.approx(-1.0316, abs=1e-3)


def test_self_check_and_discrepancies():
    entries, bad = self_check()
    ok_fns = {e.id for e in entries} - set(bad)
    assert len(ok_fns) >= 48
    listed = discrepancy_list()
    assert {d["id"] for d in listed} == set(bad)
    for d in listed:
        assert abs(d["computed"] - d["listed"]) > get_function(d["id"]).tolerance
    assert get_function(20).consistent  # rescaled six-dimensional Hartmann


def test_lookup():
    assert get_function("six-hump-camel-back") is SHCB
    assert get_function("Branin").id == 5 and get_function("5").id == 5
    assert get_function("rastrigin-6d").id == 25
    with pytest.raises(KeyError):
        get_function("rastrigin")
    with pytest.raises(KeyError):
        get_function(53)
    assert [f.id for f in select(suite="2d")] == list(SUBSET_2D)


def test_delta_x_examples():
    assert delta_x(np.array([0.5225, 0.1437]), SHCB) == 0.0
    assert delta_x(np.array([0.4776, 0.8564]), SHCB) == pytest.approx(1.0e-4, rel=1e-6)
    for N in (1, 3, 7):
        assert delta_x(np.ones(N), np.zeros((1, N))) == pytest.approx(1.0)


def test_delta_f_examples():
    assert delta_f(-1.0316, SHCB) == 0.0
    assert delta_f(-0.7150, SHCB) == pytest.approx((-0.7150 + 1.0316) / 1.0316, rel=1e-12)
    assert delta_f(-0.7150, SHCB) == pytest.approx(0.3069, abs=5e-5)
    assert delta_f(2.5, 0.0) == 1.0
    assert delta_f(-1e-12, 0.0) == 0.0
    with pytest.raises(BelowOptimum):
        delta_f(-1.1, SHCB)
    with pytest.raises(BelowOptimum):
        delta_f(-1e-3, 0.0)


def test_gamma_examples():
    hist = np.concatenate([np.full(33, 0.5), [-1.0316], np.full(16, 0.0)])
    g, k = gamma(hist, SHCB, 50)
    assert (g, k) == (pytest.approx(0.68), 34)
    assert gamma([-1.0316, 3.0], SHCB, 50) == (1 / 50, 1)
    assert gamma(np.full(52, 2.0), SHCB, 50) == (1.0, 50)


def test_metric_fuzz_ranges():
    g = np.random.default_rng(0)
    for _ in range(300):
        f = REGISTRY[g.integers(52)]
        x = g.random(f.dim)
        hist = [evaluate(f, g.random(f.dim)) for _ in range(5)]
        assert 0 <= delta_x(x, f) <= 1
        assert 0 <= delta_f(min(hist), f) <= 1
        gm, k = gamma(hist, f, 5)
        assert 0 < gm <= 1 and 1 <= k <= 5


def test_delta_f_monotone_and_kstar_monotone():
    g = np.random.default_rng(1)
    hist = [evaluate(SHCB, g.random(2)) for _ in range(40)] + [-1.0316]
    best = np.minimum.accumulate(hist)
    dfs = [delta_f(b, SHCB) for b in best]
    assert all(b <= a for a, b in zip(dfs, dfs[1:]))
    ks = [gamma(hist[:n], SHCB, 41)[1] for n in range(1, 42)]
    assert all(b <= a for a, b in zip(ks, ks[1:]))


def test_median_oracle():
    g = np.random.default_rng(2)
    for n in range(1, 30):
        v = g.normal(size=n)
        s = sorted(v)
        oracle = s[n // 2] if n % 2 else (s[n // 2 - 1] + s[n // 2]) / 2
        assert median(v) == oracle
    with pytest.raises(ValueError):
        median([])


def test_run_seeds_distinct():
    s = run_seeds(1, 5, 10)
    assert len(set(s)) == 10 and s == run_seeds(1, 5, 10)


def test_single_run_medians_equal_run(tmp_path):
    rep = run_suite([5], runs=1, seed=0, k_max=30)
    e = rep.entry(5)
    r = e["runs"][0]
    assert e["median"] == {k: r[k] for k in ("delta_x", "delta_f", "gamma")}


def test_report_schema_and_summary(tmp_path):
    rep = run_suite([1, 43], runs=2, seed=3, k_max=30)
    path = tmp_path / "r.json"
    rep.write(path, tmp_path / "r.csv")
    body = json.loads(path.read_text())
    assert body["schema"] == "sboc-report/1"
    assert [f["id"] for f in body["functions"]] == [1, 43]
    s = body["summary"]
    assert s["S"] == s["n_success"] / s["n_functions"]
    assert s["S"] == sum(f["success"] for f in body["functions"]) / 2
    assert set(s["by_dim"]) == {"2"}
    assert s["motf"]["n_functions"] == 1 and s["non_motf"]["n_functions"] == 1
    assert (tmp_path / "r.json.timing.json").exists()
    rows = list(csv.DictReader(io.StringIO((tmp_path / "r.csv").read_text())))
    assert len(rows) == 4
    for f in body["functions"]:
        for r in f["runs"]:
            assert all(0 <= r[k] <= 1 for k in ("delta_x", "delta_f", "gamma"))
    # identical settings give identical report text
    assert run_suite([1, 43], runs=2, seed=3, k_max=30).to_json() == path.read_text()


def test_failed_runs_reported(monkeypatch):
    import sboc.bench.harness as h
    from sboc.exceptions import ObjectiveFailure
    real = h.run
    n = []

    def flaky(*a, **k):
        n.append(1)
        if len(n) == 1:
            raise ObjectiveFailure("bad value")
        return real(*a, **k)

    monkeypatch.setattr(h, "run", flaky)
    rep = run_suite([28], runs=3, seed=0, k_max=20)
    e = rep.entry(28)
    assert e["n_failed"] == 1 and e["runs"][0]["status"] == "failed"
    assert e["median"]["delta_f"] == median(r["delta_f"] for r in e["runs"][1:])


def test_parallel_jobs_match_serial():
    a = run_suite([28, 43], runs=2, seed=1, k_max=20, jobs=1)
    b = run_suite([28, 43], runs=2, seed=1, k_max=20, jobs=2)
    assert a.to_json() == b.to_json()
