"""Pass/fail reports shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, check_id: str, ok: bool, witness=None):
        entry = {"id": check_id, "status": "pass" if ok else "fail"}
        if not ok and witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if c["status"] != "pass"]

    def summary(self) -> dict:
        bad = len(self.failures())
        return {"total": len(self.checks), "passed": len(self.checks) - bad, "failed": bad}

    def to_json(self) -> dict:
        return {"title": self.title, "checks": self.checks, "summary": self.summary()}
