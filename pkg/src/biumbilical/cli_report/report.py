"""Check records, reports and a deterministic JSON writer with 17-digit floats."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Record:
    check: str
    tag: str  # the identity or equation family being checked
    max_residual: float
    tolerance: float
    passed: bool
    samples: int

    @classmethod
    def below(cls, check, tag, residual, tolerance, samples):
        """Passes when ``residual <= tolerance`` (NaN never passes)."""
        residual = float(residual)
        return cls(check, tag, residual, float(tolerance), bool(residual <= tolerance), int(samples))

    @classmethod
    def above(cls, check, tag, residual, threshold, samples):
        """Negative control: passes when ``residual > threshold``."""
        residual = float(residual)
        return cls(check, tag, residual, float(threshold), bool(residual > threshold), int(samples))


@dataclass
class Report:
    command: str
    records: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, record):
        self.records.append(record)
        return record

    def extend(self, records):
        self.records.extend(records)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def to_dict(self):
        return {
            "command": self.command,
            "verdict": "pass" if self.passed else "fail",
            "records": [
                {
                    "check": r.check,
                    "tag": r.tag,
                    "max_residual": r.max_residual,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                    "samples": r.samples,
                }
                for r in self.records
            ],
            "info": self.info,
        }

    def to_json(self):
        return dumps(self.to_dict()) + "\n"


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    if x == 0.0:
        return "0.0" if math.copysign(1.0, x) > 0 else "-0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj, indent=2, _level=0):
    """JSON text with floats at 17 significant digits; dict order is preserved."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
