"""Check reports with a stable JSON shape for CLI and CI consumption."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    check: str
    kind: str
    n: int
    D: int
    asserted: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)
    findings: dict = field(default_factory=dict)

    def record_violation(self, relation: str, witness: str, residual: str) -> None:
        self.violations.append(
            {"relation": relation, "witnessState": witness, "residual": residual}
        )

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "kind": self.kind,
            "n": self.n,
            "D": self.D,
            "asserted": self.asserted,
            "skipped": self.skipped,
            "violations": self.violations,
        }
        if self.findings:
            out["findings"] = self.findings
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
