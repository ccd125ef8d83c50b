"""Multi-run assessment over registry functions, with medians and success rates.

Report layout (JSON, ``schema == "sboc-report/1"``)::

    {"schema", "settings": {runs, seed, k_max, surrogate, threshold},
     "functions": [{"id", "name", "dim", "motf", "k_max",
                    "runs": [{"seed", "status", "error", "x_best", "f_best",
                              "delta_x", "delta_f", "gamma", "k_star", "k_final"}],
                    "n_failed", "median": {"delta_x", "delta_f", "gamma"} | null,
                    "success"}],
     "summary": {"n_functions", "n_success", "S",
                 "by_dim": {"<N>": {"n_functions", "n_success", "S"}},
                 "motf": {...}, "non_motf": {...}}}

Wall-clock time is kept out of the report so identical settings give
byte-identical files; ``write_report`` puts it in ``<path>.timing.json``.
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..engine import SbocConfig, run
from ..exceptions import ObjectiveFailure
from ..surrogate import SurrogateSpec
from .functions import get_function
from .metrics import SUCCESS_THRESHOLD, median, run_metrics

SCHEMA = "sboc-report/1"


def run_seeds(seed, fn_id, runs):
    """Distinct per-run seeds derived from the master seed and the function id."""
    out = []
    for r in range(runs):
        ss = np.random.SeedSequence(int(seed), spawn_key=(int(fn_id), r))
        out.append(int(ss.generate_state(1, np.uint32)[0]))
    if len(set(out)) != len(out):
        raise RuntimeError("derived seeds collide")
    return out


def _one_run(fn_id, seed, k_max, surrogate, threshold, backend):
    fn = get_function(fn_id)
    cfg = SbocConfig(k_max=k_max, seed=seed, surrogate=SurrogateSpec(surrogate), backend=backend)
    t0 = time.perf_counter()
    rec = {"seed": seed, "status": "ok", "error": None}
    try:
        res = run(fn.raw, fn.domain, cfg)
    except ObjectiveFailure as exc:
        rec.update(status="failed", error=str(exc))
        return rec, time.perf_counter() - t0
    m = run_metrics(res, fn, k_max, threshold)
    rec.update(x_best=[float(v) for v in res.x_best], f_best=float(res.f_best), **m.to_dict())
    return rec, time.perf_counter() - t0


def _rate(entries):
    n = len(entries)
    k = sum(1 for e in entries if e["success"])
    return {"n_functions": n, "n_success": k, "S": (k / n) if n else None}


@dataclass
class BenchmarkReport:
    settings: dict
    functions: list
    timing: list = field(default_factory=list)

    @property
    def summary(self):
        by_dim = {}
        for e in self.functions:
            by_dim.setdefault(str(e["dim"]), []).append(e)
        s = _rate(self.functions)
        s["by_dim"] = {k: _rate(v) for k, v in sorted(by_dim.items(), key=lambda kv: int(kv[0]))}
        s["motf"] = _rate([e for e in self.functions if e["motf"]])
        s["non_motf"] = _rate([e for e in self.functions if not e["motf"]])
        return s

    @property
    def success_rate(self):
        return self.summary["S"]

    def entry(self, fn_id):
        for e in self.functions:
            if e["id"] == fn_id:
                return e
        raise KeyError(fn_id)

    def to_dict(self):
        return {"schema": SCHEMA, "settings": self.settings, "functions": self.functions,
                "summary": self.summary}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self):
        """Flat table: one row per run, with the function's medians repeated."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "name", "dim", "motf", "seed", "status", "f_best", "delta_x", "delta_f",
                    "gamma", "k_star", "k_final", "median_delta_x", "median_delta_f",
                    "median_gamma", "success"])
        for e in self.functions:
            med = e["median"] or {}
            for r in e["runs"]:
                w.writerow([e["id"], e["name"], e["dim"], int(e["motf"]), r["seed"], r["status"],
                            *(repr(r[k]) if r.get(k) is not None else "" for k in
                              ("f_best", "delta_x", "delta_f", "gamma")),
                            r.get("k_star", ""), r.get("k_final", ""),
                            *(repr(med[k]) if k in med else "" for k in ("delta_x", "delta_f", "gamma")),
                            int(e["success"])])
        return buf.getvalue()

    def summary_text(self):
        s = self.summary
        lines = [f"{'id':>3}  {'function':<22}{'N':>3}  {'med dx':>9}  {'med df':>9}  {'med gamma':>9}  ok"]
        for e in self.functions:
            med = e["median"]
            cols = (f"{med['delta_x']:9.3e}  {med['delta_f']:9.3e}  {med['gamma']:9.3f}" if med
                    else f"{'-':>9}  {'-':>9}  {'-':>9}")
            lines.append(f"{e['id']:>3}  {e['name']:<22}{e['dim']:>3}  {cols}  {'yes' if e['success'] else 'no'}")
        lines.append(f"S = {s['n_success']}/{s['n_functions']} = {s['S']:.3f}")
        return "\n".join(lines)

    def write(self, path, csv_path=None):
        with open(path, "w") as fh:
            fh.write(self.to_json())
        with open(f"{path}.timing.json", "w") as fh:
            json.dump({"schema": SCHEMA + "/timing", "runs": self.timing}, fh, indent=2)
            fh.write("\n")
        if csv_path:
            with open(csv_path, "w", newline="") as fh:
                fh.write(self.to_csv())


def write_report(report, path, csv_path=None):
    report.write(path, csv_path)


def run_suite(functions, runs=10, seed=0, k_max=None, surrogate="rbf",
              threshold=SUCCESS_THRESHOLD, jobs=1, backend=None):
    """Run every function ``runs`` times and aggregate.

    ``k_max`` defaults to 100 N per function.  Failed runs are listed but
    excluded from the medians; a function with no successful run has no
    medians and is not a success.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    fns = [get_function(f) if not hasattr(f, "id") else f for f in functions]
    tasks = []
    for fn in fns:
        km = k_max if k_max is not None else 100 * fn.dim
        for s in run_seeds(seed, fn.id, runs):
            tasks.append((fn.id, s, km, surrogate, threshold, backend))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_one_run, *zip(*tasks)))
    else:
        outs = [_one_run(*t) for t in tasks]

    entries = []
    timing = []
    pos = 0
    for fn in fns:
        recs = []
        for _ in range(runs):
            rec, secs = outs[pos]
            recs.append(rec)
            timing.append({"id": fn.id, "seed": rec["seed"], "seconds": secs})
            pos += 1
        ok = [r for r in recs if r["status"] == "ok"]
        med = None
        if ok:
            med = {k: median(r[k] for r in ok) for k in ("delta_x", "delta_f", "gamma")}
        entries.append({
            "id": fn.id, "name": fn.name, "dim": fn.dim, "motf": fn.motf,
            "k_max": tasks[pos - 1][2], "runs": recs, "n_failed": len(recs) - len(ok),
            "median": med, "success": bool(med is not None and med["delta_f"] <= threshold),
        })
    settings = {"runs": runs, "seed": seed, "k_max": k_max, "surrogate": surrogate,
                "threshold": threshold}
    return BenchmarkReport(settings, entries, timing)
