"""Data types for validation scenarios and their persisted results."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..errors import DomainError

PROVENANCE = ("analytic", "monte_carlo")
COMPARATORS = ("abs", "rel", "interval", "ratio_interval", "exceeds")


@dataclass(frozen=True)
class Curve:
    """A sampled function ``y(x)`` with a strictly increasing abscissa."""

    name: str
    x_label: str
    x: tuple
    y_label: str
    y: tuple
    provenance: str
    formula: tuple | None = None

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise DomainError(f"curve {self.name!r}: {len(x)} abscissae but {len(y)} ordinates")
        if len(x) > 1 and not np.all(np.diff(x) > 0):
            raise DomainError(f"curve {self.name!r}: abscissa must be strictly increasing")
        if self.provenance not in PROVENANCE:
            raise DomainError(f"provenance must be one of {PROVENANCE}, got {self.provenance!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.formula is not None:
            f = tuple(str(v) for v in self.formula)
            if len(f) != len(x):
                raise DomainError(f"curve {self.name!r}: one formula label per point is required")
            object.__setattr__(self, "formula", f)

    def to_csv(self) -> str:
        """Header row, then ``x, y, provenance[, formula]`` with round-trip float text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = [self.x_label, self.y_label, "provenance"]
        if self.formula is not None:
            head.append("formula")
        w.writerow(head)
        for i, (a, b) in enumerate(zip(self.x, self.y)):
            row = [repr(a), repr(b), self.provenance]
            if self.formula is not None:
                row.append(self.formula[i])
            w.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, name: str, text: str) -> "Curve":
        rows = list(csv.reader(io.StringIO(text)))
        head, body = rows[0], rows[1:]
        prov = body[0][2] if body else "analytic"
        formula = [r[3] for r in body] if len(head) > 3 else None
        return cls(name, head[0], [float(r[0]) for r in body], head[1], [float(r[1]) for r in body], prov, formula)


@dataclass(frozen=True)
class Source:
    """Reference to a named value producer plus its keyword arguments."""

    name: str
    args: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "args": dict(sorted(self.args.items()))}

    @classmethod
    def from_dict(cls, d: dict) -> "Source":
        return cls(d["name"], dict(d.get("args", {})))


@dataclass(frozen=True)
class Check:
    """One comparison between a predicted and a measured number.

    Comparators:

    * ``abs``: ``|measured - predicted| <= tolerance``
    * ``rel``: ``|measured - predicted| <= tolerance * |predicted|``
    * ``interval``: ``lo <= measured <= hi`` with ``tolerance = (lo, hi)``
    * ``ratio_interval``: ``lo <= measured / predicted <= hi``
    * ``exceeds``: ``measured - predicted >= tolerance`` (a strict margin)
    """

    id: str
    paper_anchor: str
    predicted: Source
    measured: Source
    comparator: str
    tolerance: Any

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise DomainError(f"unknown comparator {self.comparator!r}")
        if not self.paper_anchor:
            raise DomainError(f"check {self.id!r} needs an anchor")

    @property
    def tolerance_ok(self) -> bool:
        t = self.tolerance
        if self.comparator in ("interval", "ratio_interval"):
            return len(t) == 2 and float(t[0]) < float(t[1])
        return float(t) > 0

    def compare(self, predicted: float, measured: float) -> bool:
        if not (math.isfinite(predicted) and math.isfinite(measured)):
            return False
        c, t = self.comparator, self.tolerance
        if c == "abs":
            return abs(measured - predicted) <= t
        if c == "rel":
            return abs(measured - predicted) <= t * abs(predicted)
        if c == "interval":
            return t[0] <= measured <= t[1]
        if c == "ratio_interval":
            return predicted != 0 and t[0] <= measured / predicted <= t[1]
        return measured - predicted >= t

    def to_dict(self) -> dict:
        tol = list(self.tolerance) if isinstance(self.tolerance, (tuple, list)) else self.tolerance
        return {
            "id": self.id,
            "paper_anchor": self.paper_anchor,
            "predicted": self.predicted.to_dict(),
            "measured": self.measured.to_dict(),
            "comparator": self.comparator,
            "tolerance": tol,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        tol = d["tolerance"]
        return cls(
            d["id"],
            d["paper_anchor"],
            Source.from_dict(d["predicted"]),
            Source.from_dict(d["measured"]),
            d["comparator"],
            tuple(tol) if isinstance(tol, list) else tol,
        )


@dataclass(frozen=True)
class Scenario:
    """A named, code-free bundle of checks with its default parameters."""

    id: str
    description: str
    params: dict
    checks: tuple
    persist_frames: bool = False

    def __post_init__(self):
        ids = [c.id for c in self.checks]
        if len(set(ids)) != len(ids):
            raise DomainError(f"scenario {self.id!r} has duplicate check ids")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "params": dict(sorted(self.params.items())),
            "checks": [c.to_dict() for c in self.checks],
            "persist_frames": self.persist_frames,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(
            d["id"],
            d.get("description", ""),
            dict(d.get("params", {})),
            tuple(Check.from_dict(c) for c in d["checks"]),
            bool(d.get("persist_frames", False)),
        )


@dataclass
class CheckResult:
    id: str
    paper_anchor: str
    predicted: float
    measured: float
    tolerance: Any
    comparator: str
    passed: bool
    reason: str = "ok"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if isinstance(self.tolerance, tuple):
            d["tolerance"] = list(self.tolerance)
        for k in ("predicted", "measured"):
            v = d[k]
            d[k] = v if math.isfinite(v) else repr(v)
        return d


@dataclass
class RunManifest:
    scenario: str
    seed: int
    params: dict
    checks: list
    verdict: bool
    versions: dict
    timestamp: str
    definition: dict
    digests: dict = field(default_factory=dict)
    execution: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "params": self.params,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": "pass" if self.verdict else "fail",
            "versions": self.versions,
            "timestamp": self.timestamp,
            "definition": self.definition,
            "digests": self.digests,
            "execution": self.execution,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        checks = []
        for c in d["checks"]:
            tol = c["tolerance"]
            checks.append(
                CheckResult(
                    c["id"], c["paper_anchor"], float(c["predicted"]), float(c["measured"]),
                    tuple(tol) if isinstance(tol, list) else tol, c["comparator"], bool(c["pass"]), c["reason"],
                )
            )
        return cls(
            d["scenario"], int(d["seed"]), d["params"], checks, d["verdict"] == "pass",
            d["versions"], d["timestamp"], d["definition"], d.get("digests", {}), d.get("execution", {}),
        )
