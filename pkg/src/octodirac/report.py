"""Verification reports: named pass/fail checks with exact values."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction


def exact_str(x) -> str:
    """Render a value exactly: rationals as ``p/q``, containers element-wise."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(exact_str(v) for v in x) + "]"
    return str(x)


@dataclass
class CheckRecord:
    check_id: str
    passed: bool
    value: str = ""
    detail: str = ""
    elapsed: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass
class VerificationReport:
    suite: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def add(self, check_id: str, passed: bool, value="", detail: str = "", elapsed: float = 0.0) -> CheckRecord:
        rec = CheckRecord(check_id, bool(passed), exact_str(value), detail, elapsed)
        self.checks.append(rec)
        return rec

    @contextmanager
    def timed(self):
        """Stamp the block's wall time on every record added inside it."""
        start = time.perf_counter()
        n = len(self.checks)
        yield
        dt = time.perf_counter() - start
        for rec in self.checks[n:]:
            rec.elapsed = dt

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, timing: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = {"id": c.check_id, "status": c.status, "value": c.value}
            if c.detail:
                d["detail"] = c.detail
            if timing:
                d["elapsed_s"] = round(c.elapsed, 6)
            checks.append(d)
        return {"suite": self.suite, "status": self.status, "checks": checks}

    def render_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, ensure_ascii=False)

    def render_text(self, timing: bool = True) -> str:
        lines = [f"== {self.suite} =="]
        width = max((len(c.check_id) for c in self.checks), default=0)
        for c in self.checks:
            line = f"  {c.status.upper():4}  {c.check_id:<{width}}  {c.value}"
            if c.detail:
                line += f"  -- {c.detail}"
            if timing:
                line += f"  [{c.elapsed:.3f}s]"
            lines.append(line.rstrip())
        lines.append(f"  overall: {self.status.upper()} ({len(self.checks) - len(self.failures())}/{len(self.checks)} checks)")
        return "\n".join(lines)
