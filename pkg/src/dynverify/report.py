"""Structured verification outcomes and machine-readable report files.

Every check reduces to a margin compared against a tolerance: ``pass`` means
margin >= tolerance, with the convention that larger margins are safer.  For
distance checks the margin is the measured distance and the tolerance the
required floor; for residual checks the margin is ``bound - residual`` with
tolerance 0 and the raw residual recorded in ``params``.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from pathlib import Path

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_INDETERMINATE = "indeterminate"
REPORT_VERSION = "1"


def _plain(value):
    """Coerce numpy scalars and containers to JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, bool):
        return value
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (int, float, str)) or value is None:
        return value
    return str(value)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification check."""

    id: str
    status: str
    margin: float
    tolerance: float
    params: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        if self.status not in (STATUS_PASS, STATUS_FAIL, STATUS_INDETERMINATE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == STATUS_PASS and not self.margin >= self.tolerance:
            raise ValueError(f"check {self.id}: pass requires margin >= tolerance")
        object.__setattr__(self, "margin", float(self.margin))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        object.__setattr__(self, "params", _plain(self.params))

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "params": self.params,
            "notes": self.notes,
        }


def make_check(check_id: str, margin: float, tolerance: float, params: dict | None = None, notes: str = "") -> CheckReport:
    """Build a check whose status is decided by margin >= tolerance."""
    status = STATUS_PASS if margin >= tolerance else STATUS_FAIL
    return CheckReport(check_id, status, float(margin), float(tolerance), params or {}, notes)


def indeterminate_check(check_id: str, params: dict | None = None, notes: str = "") -> CheckReport:
    return CheckReport(check_id, STATUS_INDETERMINATE, float("nan"), 0.0, params or {}, notes)


def report_payload(reports: list[CheckReport], timestamp: str | None = None) -> dict:
    """Assemble the report object; checks are ordered by id."""
    ids = [r.id for r in reports]
    if len(set(ids)) != len(ids):
        raise ValueError("check ids must be unique within a run")
    if timestamp is None:
        timestamp = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()
    return {
        "version": REPORT_VERSION,
        "timestamp": timestamp,
        "checks": [r.as_dict() for r in sorted(reports, key=lambda r: r.id)],
    }


def emit_report(reports: list[CheckReport], path) -> Path:
    """Write the JSON report; byte-stable across runs except the timestamp."""
    path = Path(path)
    payload = report_payload(reports)
    try:
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def all_passed(reports: list[CheckReport]) -> bool:
    return all(r.passed for r in reports)
