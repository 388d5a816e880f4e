"""Shared plumbing for scenario runs: ordered check lists, errors, mutations."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from ..monoid import MonoidError
from ..obstruction import ObstructionError
from ..report import CheckResult, Report, Verdict
from ..scalars import AlgebraError, is_prime

__all__ = ["ScenarioError", "Checklist", "MUTATIONS", "require_prime", "executor_map", "check_mutation"]

MUTATIONS = {
    "flip-psi43-sign": "surface",
    "wrong-char": "curve",
    "trivial-kernel": "curve",
    "drop-unit-factor": "curve",
}


class ScenarioError(ValueError):
    """Bad scenario parameters (usage error, not a verification failure)."""


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ScenarioError(f"p must be prime, got {p}")


def check_mutation(mutate, scenario: str) -> None:
    if mutate is None:
        return
    if mutate not in MUTATIONS:
        raise ScenarioError(f"unknown mutation {mutate!r}; known: {', '.join(sorted(MUTATIONS))}")
    if MUTATIONS[mutate] != scenario:
        raise ScenarioError(f"mutation {mutate!r} applies to the {MUTATIONS[mutate]} scenario")


@contextmanager
def executor_map(jobs: int):
    """A ``map`` that preserves order; threaded when jobs > 1."""
    if jobs <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        yield ex.map


_EXPECTED = (AlgebraError, MonoidError, ObstructionError, ZeroDivisionError)


class Checklist:
    """Checks registered in report order; each thunk returns a Verdict or a
    list of (suffix, Verdict) pairs expanding into several records."""

    def __init__(self):
        self._items = []

    def add(self, name: str, anchor: str, fn) -> None:
        self._items.append(("run", name, anchor, fn))

    def skip(self, name: str, anchor: str, detail: str) -> None:
        self._items.append(("skip", name, anchor, detail))

    @staticmethod
    def _run_one(item):
        mode, name, anchor, fn = item
        if mode == "skip":
            return [CheckResult.skipped(name, fn, anchor)]
        try:
            out = fn()
        except _EXPECTED as exc:
            return [CheckResult.of(name, Verdict(False, f"error: {exc}"), anchor)]
        if isinstance(out, Verdict):
            return [CheckResult.of(name, out, anchor)]
        return [CheckResult.of(f"{name} {suffix}", v, anchor) for suffix, v in out]

    def run(self, report: Report, mapper=map) -> Report:
        for records in mapper(self._run_one, self._items):
            report.extend(records)
        return report


def timed(fn, timing: bool):
    start = time.perf_counter()
    report = fn()
    if timing:
        report.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 1)
    return report
