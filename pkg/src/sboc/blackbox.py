"""Objective evaluation through an external executable.

Wire protocol:

* every coordinate is sent as Python's ``repr`` of the float, the shortest
  decimal string that parses back to the identical double (scientific
  notation such as ``1e-05`` may appear);
* per-call mode runs ``exe x1 x2 ... xN`` once per evaluation and reads
  exactly one number from standard output; the exit status must be 0;
* persistent mode starts ``exe`` once, writes ``x1 x2 ... xN\\n`` to its
  standard input per evaluation and reads one line holding one number.

The reply must parse as a finite float; anything else is NonNumericOutput.
"""

import logging
import math
import os
import selectors
import subprocess
import time

import numpy as np

from .exceptions import NonNumericOutput, NonZeroExit, ObjectiveFailure, Timeout

log = logging.getLogger(__name__)

MODES = ("per-call", "persistent")


def format_vector(x):
    return [repr(float(v)) for v in np.asarray(x, dtype=float).ravel()]


def parse_value(text):
    tokens = text.split()
    if len(tokens) != 1:
        raise NonNumericOutput(f"expected one number, got {text.strip()[:200]!r}")
    try:
        v = float(tokens[0])
    except ValueError:
        raise NonNumericOutput(f"not a number: {tokens[0][:200]!r}") from None
    if not math.isfinite(v):
        raise NonNumericOutput(f"non-finite value {tokens[0]!r}")
    return v


class BlackBoxEvaluator:
    """Callable wrapper around an executable; counts calls and logs arguments."""

    def __init__(self, executable, mode="per-call", timeout=None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.executable = os.fspath(executable)
        self.mode = mode
        self.timeout = timeout
        self.calls = 0
        self.log = []
        self._proc = None
        self._buf = b""

    def __call__(self, x_raw):
        args = format_vector(x_raw)
        self.calls += 1
        self.log.append(np.asarray(x_raw, dtype=float).copy())
        try:
            if self.mode == "per-call":
                return self._per_call(args)
            return self._persistent(args)
        except ObjectiveFailure as exc:
            log.error("black-box exchange %d failed for input %s: %s", self.calls, " ".join(args), exc)
            raise

    def _per_call(self, args):
        try:
            cp = subprocess.run([self.executable, *args], capture_output=True, text=True,
                                timeout=self.timeout)
        except subprocess.TimeoutExpired:
            raise Timeout(f"no answer within {self.timeout} s") from None
        except OSError as exc:
            raise NonZeroExit(f"could not run {self.executable}: {exc}") from exc
        if cp.returncode != 0:
            raise NonZeroExit(f"exit status {cp.returncode}: {cp.stderr.strip()[:200]}")
        return parse_value(cp.stdout)

    def _start(self):
        try:
            self._proc = subprocess.Popen([self.executable], stdin=subprocess.PIPE,
                                          stdout=subprocess.PIPE, bufsize=0)
        except OSError as exc:
            raise NonZeroExit(f"could not start {self.executable}: {exc}") from exc
        self._buf = b""

    def _read_line(self):
        deadline = None if self.timeout is None else time.monotonic() + self.timeout
        fd = self._proc.stdout.fileno()
        with selectors.DefaultSelector() as sel:
            sel.register(fd, selectors.EVENT_READ)
            while b"\n" not in self._buf:
                wait = None if deadline is None else deadline - time.monotonic()
                if wait is not None and wait <= 0:
                    self.close()
                    raise Timeout(f"no answer within {self.timeout} s")
                if not sel.select(wait):
                    continue
                chunk = os.read(fd, 65536)
                if not chunk:
                    code = self._proc.wait()
                    self._proc = None
                    raise NonZeroExit(f"process ended (status {code}) before answering")
                self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode(errors="replace")

    def _persistent(self, args):
        if self._proc is None:
            self._start()
        try:
            self._proc.stdin.write((" ".join(args) + "\n").encode())
            self._proc.stdin.flush()
        except BrokenPipeError:
            code = self._proc.wait()
            self._proc = None
            raise NonZeroExit(f"process ended (status {code}) before reading input") from None
        return parse_value(self._read_line())

    def close(self):
        if self._proc is not None:
            proc, self._proc = self._proc, None
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=1.0)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def blackbox_evaluate(evaluator, x_raw):
    return evaluator(x_raw)
