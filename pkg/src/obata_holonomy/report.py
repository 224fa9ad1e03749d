"""Structured check reports shared by every verifier and the CLI."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    id: str
    paper_anchor: str
    status: str
    expected: str
    actual: str
    elapsed_ms: float = 0.0


@dataclass
class CheckReport:
    checks: list[Check] = field(default_factory=list)
    config_echo: dict = field(default_factory=dict)

    def __post_init__(self):
        self._ids = {c.id for c in self.checks}
        self._clock = time.perf_counter()

    def add(self, id: str, anchor: str, expected, actual, ok: bool | None = None) -> bool:
        """Record a check; passes iff ``ok`` (default: ``str(expected) == str(actual)``).

        Elapsed time is measured since the previous ``add`` on this report.
        """
        if id in self._ids:
            raise ValueError(f"duplicate check id {id!r}")
        expected, actual = str(expected), str(actual)
        if ok is None:
            ok = expected == actual
        now = time.perf_counter()
        self.checks.append(
            Check(id, anchor, PASS if ok else FAIL, expected, actual,
                  round((now - self._clock) * 1000.0, 3))
        )
        self._ids.add(id)
        self._clock = now
        return ok

    def skip(self, id: str, anchor: str, reason: str) -> None:
        if id in self._ids:
            raise ValueError(f"duplicate check id {id!r}")
        self.checks.append(Check(id, anchor, SKIPPED, "-", reason))
        self._ids.add(id)
        self._clock = time.perf_counter()

    def restart_clock(self) -> None:
        self._clock = time.perf_counter()

    def extend(self, other: "CheckReport") -> "CheckReport":
        for c in other.checks:
            if c.id in self._ids:
                raise ValueError(f"duplicate check id {c.id!r}")
            self.checks.append(c)
            self._ids.add(c.id)
        return self

    def __getitem__(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def __contains__(self, id: str) -> bool:
        return id in self._ids

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self) -> dict:
        return {
            "total": len(self.checks),
            "passed": sum(c.status == PASS for c in self.checks),
            "failed": sum(c.status == FAIL for c in self.checks),
            "skipped": sum(c.status == SKIPPED for c in self.checks),
        }

    def to_dict(self) -> dict:
        return {
            "checks": [asdict(c) for c in sorted(self.checks, key=lambda c: c.id)],
            "summary": self.summary(),
            "config": self.config_echo,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            tag = {PASS: "PASS", FAIL: "FAIL", SKIPPED: "SKIP"}[c.status]
            line = f"[{tag}] {c.id}: {c.actual}"
            if c.status != PASS:
                line += f" (expected {c.expected})"
            lines.append(line)
        s = self.summary()
        lines.append(f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped")
        return "\n".join(lines) + "\n"
