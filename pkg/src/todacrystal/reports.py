"""Verification reports shared by the tau/hirota/matrix/factorization suites.

The JSON schema is fixed: {command, parameters, checks: [...], pass} with
each check carrying {name, lhs, rhs, equal, guaranteed_order}.  Reports are
built deterministically so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    lhs: str
    rhs: str
    equal: bool
    guaranteed_order: int | None = None

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
            "guaranteed_order": self.guaranteed_order,
        }


@dataclass
class Report:
    command: str
    parameters: dict
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.equal for c in self.checks)

    def add(self, name, lhs, rhs, equal, guaranteed_order=None) -> Check:
        check = Check(str(name), str(lhs), str(rhs), bool(equal), guaranteed_order)
        self.checks.append(check)
        return check

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.equal), None)

    def to_dict(self):
        out = {
            "command": self.command,
            "parameters": self.parameters,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)
