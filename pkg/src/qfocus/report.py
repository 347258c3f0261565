"""Scenario reports: named checks with measured value, expectation and tolerance."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Check", "ScenarioReport", "to_jsonable", "complex_to_json", "complex_from_json"]


def complex_to_json(a):
    """Nested ``[re, im]`` pairs for a complex scalar, vector or matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_to_json(x) for x in a]


def complex_from_json(obj) -> np.ndarray:
    def conv(o):
        if isinstance(o, list) and len(o) == 2 and all(isinstance(x, (int, float)) for x in o):
            return complex(o[0], o[1])
        return [conv(x) for x in o]
    return np.array(conv(obj), dtype=complex)


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return complex_to_json(x)
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else int(x.numerator)
    return x


@dataclass
class Check:
    name: str
    measured: object
    expected: object
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": to_jsonable(self.measured),
            "expected": to_jsonable(self.expected),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
        }


@dataclass
class ScenarioReport:
    scenario: str
    seed: int = 0
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime: float = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name, measured, expected=None, tol=0.0, *, passed=None):
        """Record a check. By default passes when ``|measured - expected| <= tol``."""
        if passed is None:
            if isinstance(measured, (bool, np.bool_)) or expected is None:
                passed = bool(measured) if expected is None else measured == expected
            elif not isinstance(measured, (int, float, np.number)):
                passed = measured == expected
            else:
                passed = bool(abs(measured - expected) <= tol)
        c = Check(name, measured, expected, tol, bool(passed))
        self.checks.append(c)
        return c

    def check_le(self, name, measured, bound):
        """Pass when ``measured <= bound``."""
        return self.check(name, measured, 0.0, bound, passed=bool(measured <= bound))

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "scenario": self.scenario,
            "passed": self.passed,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if self.tables:
            d["tables"] = to_jsonable(self.tables)
        if timing and self.runtime is not None:
            d["runtime_s"] = self.runtime
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "check", "measured", "expected", "tolerance", "passed"])
        for c in self.checks:
            d = c.to_dict()
            w.writerow([self.scenario, c.name, json.dumps(d["measured"]), json.dumps(d["expected"]),
                        c.tolerance, c.passed])
        for name, rows in self.tables.items():
            w.writerow([])
            w.writerow([f"# table: {name}"])
            for row in to_jsonable(rows):
                w.writerow(row if isinstance(row, list) else [row])
        return buf.getvalue()
