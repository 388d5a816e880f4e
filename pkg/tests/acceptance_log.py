"""Collects one verdict line per acceptance criterion; conftest prints them at the end."""

_RESULTS: dict = {}


def record(n: int, ok: bool, summary: str) -> str:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {summary}"
    _RESULTS[n] = line
    print(line)
    return line


def lines() -> list:
    return [_RESULTS[n] for n in sorted(_RESULTS)]
