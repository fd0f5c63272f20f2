"""Verification reports and run configuration shared by all campaigns."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNDECIDED = 2


@dataclass
class RunConfig:
    precision: int = 128
    threads: int = 1
    scale: float = 1.0
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def certifying(self) -> bool:
        return self.scale == 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.15g}")
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


@dataclass
class VerificationReport:
    campaign: str
    params: dict = field(default_factory=dict)
    status: str = "pass"  # pass | fail | undecided
    min_margin: float | None = None
    certifying: bool = True
    witnesses: list = field(default_factory=list)
    cases: list = field(default_factory=list)
    wall_clock: float = 0.0
    notes: list = field(default_factory=list)
    children: list = field(default_factory=list)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "undecided"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "undecided":
            self.certifying = False

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def exit_code(self) -> int:
        if self.status == "fail":
            return EXIT_FAIL
        if self.status == "pass" and self.certifying:
            return EXIT_PASS
        return EXIT_UNDECIDED

    @classmethod
    def fold(cls, campaign: str, reports: list["VerificationReport"], params=None, wall_clock: float = 0.0):
        statuses = [r.status for r in reports]
        status = "fail" if "fail" in statuses else ("undecided" if "undecided" in statuses else "pass")
        margins = [r.min_margin for r in reports if r.min_margin is not None]
        return cls(
            campaign=campaign,
            params=params or {},
            status=status,
            min_margin=min(margins) if margins else None,
            certifying=all(r.certifying for r in reports),
            witnesses=[w for r in reports for w in r.witnesses][:200],
            wall_clock=wall_clock,
            children=list(reports),
        )

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "campaign": self.campaign,
            "status": self.status,
            "certifying": self.certifying,
            "min_margin": self.min_margin,
            "params": self.params,
            "cases": self.cases,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }
        if timing:
            d["wall_clock_s"] = round(self.wall_clock, 3)
        if self.children:
            d["children"] = [c.to_dict(timing) for c in self.children]
        return _jsonable(d)

    def case_count(self) -> int:
        return len(self.cases) + sum(c.case_count() for c in self.children)

    def to_json(self, timing: bool = False) -> str:
        # very large reports are written without indentation
        indent = 2 if self.case_count() <= 20_000 else None
        return json.dumps(self.to_dict(timing), indent=indent, sort_keys=False, ensure_ascii=False)

    def summary(self) -> str:
        lines = []
        self._summary(lines, 0)
        return "\n".join(lines)

    def _summary(self, lines, depth):
        pad = "  " * depth
        mm = "n/a" if self.min_margin is None else f"{self.min_margin:.6g}"
        cert = "" if self.certifying else " (non-certifying)"
        lines.append(f"{pad}{self.campaign}: {self.status.upper()}{cert}  min margin {mm}  [{self.wall_clock:.1f}s]")
        for c in self.children:
            c._summary(lines, depth + 1)
