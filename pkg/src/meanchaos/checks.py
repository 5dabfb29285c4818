"""Pass/fail certificates for inequality checks."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field


@dataclass
class CheckEntry:
    name: str
    lhs: float
    rhs: float
    relation: str = "<="
    margin: float = 0.0
    passed: bool = False
    status: str = "checked"  # or "skipped"
    anchor: str = ""
    note: str = ""

    def to_dict(self):
        d = asdict(self)
        for key in ("lhs", "rhs", "margin"):
            d[key] = _json_float(d[key])
        return d


@dataclass
class CheckReport:
    title: str = ""
    entries: list = field(default_factory=list)

    def add(self, name, lhs, rhs, relation="<=", tol=0.0, anchor="", note=""):
        """Record ``lhs <relation> rhs`` with slack ``tol``; returns the entry.

        ``margin`` is signed: positive means the inequality holds strictly.
        """
        lhs, rhs = float(lhs), float(rhs)
        if relation in ("<=", "<"):
            margin = rhs - lhs
        elif relation in (">=", ">"):
            margin = lhs - rhs
        elif relation == "==":
            margin = -abs(lhs - rhs)
        else:
            raise ValueError(f"unknown relation {relation!r}")
        if relation in ("<", ">"):
            ok = margin > -tol if tol else margin > 0
        else:
            ok = margin >= -tol
        entry = CheckEntry(name, lhs, rhs, relation, margin, bool(ok),
                           anchor=anchor, note=note)
        self.entries.append(entry)
        return entry

    def skip(self, name, note="", anchor=""):
        entry = CheckEntry(name, math.nan, math.nan, status="skipped",
                           passed=True, anchor=anchor, note=note)
        self.entries.append(entry)
        return entry

    def extend(self, other: "CheckReport", prefix=""):
        for e in other.entries:
            if prefix:
                e = CheckEntry(**{**asdict(e), "name": prefix + e.name})
            self.entries.append(e)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self):
        return [e for e in self.entries if not e.passed]

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self):
        return {"title": self.title, "passed": self.passed,
                "entries": [e.to_dict() for e in self.entries]}

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for e in self.entries:
            flag = "skip" if e.status == "skipped" else ("ok" if e.passed else "FAIL")
            lines.append(f"  [{flag:4}] {e.name}: {e.lhs:.6g} {e.relation} {e.rhs:.6g}"
                         f" (margin {e.margin:.3g})")
        return "\n".join(lines)


def _json_float(x):
    if x is None or not isinstance(x, float):
        return x
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x
