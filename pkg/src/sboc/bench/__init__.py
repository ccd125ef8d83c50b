from .functions import REGISTRY, SUBSET_2D, TestFunction, discrepancy_list, evaluate, get_function, select, self_check
from .harness import SCHEMA, BenchmarkReport, run_seeds, run_suite, write_report
from .metrics import SUCCESS_THRESHOLD, RunMetrics, delta_f, delta_x, gamma, median, run_metrics

__all__ = [
    "REGISTRY", "SUBSET_2D", "TestFunction", "discrepancy_list", "evaluate", "get_function",
    "select", "self_check", "SCHEMA", "BenchmarkReport", "run_seeds", "run_suite", "write_report",
    "SUCCESS_THRESHOLD", "RunMetrics", "delta_f", "delta_x", "gamma", "median", "run_metrics",
]
