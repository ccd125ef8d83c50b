import stat
import sys

import numpy as np
import pytest

from sboc.blackbox import BlackBoxEvaluator, blackbox_evaluate, format_vector, parse_value
from sboc.exceptions import NonNumericOutput, NonZeroExit, ObjectiveFailure, Timeout


def script(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(f"#!{sys.executable}\nimport sys, time\n{body}\n")
    p.chmod(p.stat().st_mode | stat.S_IEXEC)
    return p


SUM = "print(sum(float(a) for a in sys.argv[1:]))"
LINE_SUM = ("for line in sys.stdin:\n"
            "    print(sum(float(a) for a in line.split()), flush=True)")


def test_per_call_sum(tmp_path):
    ev = BlackBoxEvaluator(script(tmp_path, "s", SUM))
    assert blackbox_evaluate(ev, np.array([1.5, 2.5])) == 4.0
    assert ev.calls == 1
    np.testing.assert_array_equal(ev.log[0], [1.5, 2.5])


def test_persistent_sum(tmp_path):
    with BlackBoxEvaluator(script(tmp_path, "p", LINE_SUM), mode="persistent", timeout=10) as ev:
        assert ev(np.array([1.5, 2.5])) == 4.0
        assert ev(np.array([1.0, -3.0])) == -2.0
        assert ev.calls == 2


def test_round_trip_exact_arguments(tmp_path):
    echo = script(tmp_path, "e", "print(sys.argv[1])")
    ev = BlackBoxEvaluator(echo)
    for v in (0.1, 1 / 3, 1e-300, -2.5e17, np.nextafter(1.0, 2.0)):
        assert ev(np.array([v])) == v
    assert format_vector([0.1, 1e-5]) == ["0.1", "1e-05"]


def test_nan_rejected(tmp_path):
    with pytest.raises(NonNumericOutput):
        BlackBoxEvaluator(script(tmp_path, "n", "print('NaN')"))(np.array([0.0]))


@pytest.mark.parametrize("text", ["", "abc", "1 2", "inf"])
def test_parse_value_rejects(text):
    with pytest.raises(NonNumericOutput):
        parse_value(text)


def test_timeout(tmp_path):
    ev = BlackBoxEvaluator(script(tmp_path, "t", "time.sleep(5)\nprint(1)"), timeout=0.3)
    with pytest.raises(Timeout):
        ev(np.array([0.0]))
    ev = BlackBoxEvaluator(script(tmp_path, "tp", "time.sleep(5)"), mode="persistent", timeout=0.3)
    with pytest.raises(Timeout):
        ev(np.array([0.0]))


def test_nonzero_exit(tmp_path):
    with pytest.raises(NonZeroExit):
        BlackBoxEvaluator(script(tmp_path, "x", "sys.exit(3)"))(np.array([0.0]))
    with pytest.raises(NonZeroExit):
        BlackBoxEvaluator(script(tmp_path, "xp", "sys.exit(0)"), mode="persistent", timeout=5)(np.array([0.0]))
    with pytest.raises(NonZeroExit):
        BlackBoxEvaluator(tmp_path / "missing")(np.array([0.0]))


def test_errors_are_objective_failures():
    assert issubclass(Timeout, ObjectiveFailure)
    assert issubclass(NonNumericOutput, ObjectiveFailure)
    assert issubclass(NonZeroExit, ObjectiveFailure)
