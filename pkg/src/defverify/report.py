"""Check records and report emission (text / JSON)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["Verdict", "CheckResult", "Report", "emit_report", "FORMATS"]

FORMATS = ("text", "json")
STATUSES = ("pass", "fail", "skipped")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str
    anchor: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @classmethod
    def of(cls, name: str, verdict, anchor: str, detail: str = None) -> "CheckResult":
        ok = bool(verdict)
        if detail is None:
            detail = verdict.detail if isinstance(verdict, Verdict) else ""
        return cls(name, "pass" if ok else "fail", detail, anchor)

    @classmethod
    def skipped(cls, name: str, detail: str, anchor: str) -> "CheckResult":
        return cls(name, "skipped", detail, anchor)

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail, "anchor": self.anchor}


@dataclass
class Report:
    scenario: str
    p: int
    checks: list = field(default_factory=list)
    elapsed_ms: Optional[float] = None

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def first_failure(self) -> Optional[CheckResult]:
        return next((c for c in self.checks if c.status == "fail"), None)

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "p": self.p,
            "checks": [c.as_dict() for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
        }


def _text(r: Report) -> str:
    lines = [f"scenario {r.scenario}, p = {r.p}"]
    for c in r.checks:
        lines.append(f"  [{c.status.upper():4}] {c.name}: {c.detail}")
        lines.append(f"         anchor: {c.anchor}")
    verdict = "PASS" if r.passed else "FAIL"
    tail = f"overall: {verdict} ({sum(c.status == 'pass' for c in r.checks)}/{len(r.checks)} checks passed"
    if r.elapsed_ms is not None:
        tail += f", {r.elapsed_ms:.0f} ms"
    tail += ")"
    lines.append(tail)
    first = r.first_failure()
    if first is not None:
        lines.append(f"first failing check: {first.name}")
    return "\n".join(lines) + "\n"


def emit_report(reports, fmt: str = "text") -> bytes:
    """Serialise one report or a list of reports.

    JSON output uses a fixed key order; a single report is an object, several
    reports are an array of objects.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    single = isinstance(reports, Report)
    rs = [reports] if single else list(reports)
    if fmt == "json":
        payload = rs[0].as_dict() if single else [r.as_dict() for r in rs]
        return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    return "\n".join(_text(r) for r in rs).encode("utf-8")
