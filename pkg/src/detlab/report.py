"""Check records and report serialisation."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA = "detlab.report/1"
STATUSES = ("PASS", "FAIL", "BUDGET", "UNDETERMINED")
WITNESS_LIMIT = 500


@dataclass
class CheckResult:
    tag: str
    anchor: str
    status: str
    certification: Optional[str] = None
    witnesses: Dict[str, Any] = field(default_factory=dict)
    detail: str = ""
    timing_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == "PASS"

    def to_dict(self, with_timing: bool = True) -> dict:
        out = {"tag": self.tag, "anchor": self.anchor, "status": self.status,
               "certification": self.certification, "detail": self.detail,
               "witnesses": _jsonable(self.witnesses)}
        if with_timing:
            out["timing_ms"] = round(self.timing_ms, 3)
        return out


def _jsonable(x):
    from .poly import Polynomial
    if isinstance(x, Polynomial):
        return x.to_str()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


@dataclass
class Report:
    scenario: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def exit_code(self) -> int:
        statuses = {c.status for c in self.checks}
        if "FAIL" in statuses:
            return 1
        if statuses - {"PASS"}:
            return 3
        return 0

    def to_dict(self, with_timing: bool = True) -> dict:
        return {"schema": SCHEMA, "scenario": _jsonable(self.scenario),
                "checks": [c.to_dict(with_timing) for c in self.checks]}

    def determinism_hash(self) -> str:
        body = json.dumps(self.to_dict(with_timing=False), sort_keys=True).encode()
        return hashlib.sha256(body).hexdigest()


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        data = report.to_dict()
        data["determinism_hash"] = report.determinism_hash()
        return (json.dumps(data, indent=2, sort_keys=True) + "\n").encode()
    if fmt == "table":
        return render_table(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _shorten(text: str) -> str:
    if len(text) <= WITNESS_LIMIT:
        return text
    digest = hashlib.sha256(text.encode()).hexdigest()[:12]
    return text[:WITNESS_LIMIT] + f"... [truncated, sha256:{digest}]"


def render_table(report: Report) -> str:
    header = ("tag", "status", "cert", "ms", "anchor", "detail")
    rows = []
    for c in report.checks:
        rows.append((c.tag, c.status, c.certification or "-", f"{c.timing_ms:.0f}", c.anchor, c.detail))
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r, c in zip(rows, report.checks):
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        for key, val in sorted(c.witnesses.items()):
            text = json.dumps(_jsonable(val), sort_keys=True) if not isinstance(val, str) else val
            lines.append(f"    {key}: {_shorten(text)}")
    return "\n".join(lines) + "\n"
