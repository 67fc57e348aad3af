"""Scenario configuration: one JSON object per run plus command-line overrides."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    a: float = 0.6
    b: float = 0.8
    c: tuple = (1.0, 1.0, 1.0, 1.0)
    seed: int = 0
    samples: int = 200
    tol: float | None = None  # overrides the per-check default when set
    x_range: tuple = (-2.0, 2.0)  # sampling box for pointwise checks
    y_range: tuple = (-math.pi, math.pi)
    w_range: tuple = (-2.0, 2.0)
    grid_x: tuple = (-1.0, 1.0)  # solver and mesh grids
    grid_y: tuple = (-1.0, 1.0)
    nx: int | None = None
    ny: int | None = None
    tamper: bool = False
    c4_values: tuple | None = None
    n_steps: int = 100
    perturbation: float = 0.05
    rotate: bool = False
    max_iter: int = 50
    stencil_order: int = 4
    w_values: tuple = (0.0,)
    projection: object = "drop4"
    field_out: str | None = None
    mesh_out: str | None = None
    out: str | None = None

    def grid_size(self, default):
        return (self.nx or default, self.ny or self.nx or default)


FIELDS = {f.name for f in dataclasses.fields(Scenario)}
_TUPLES = {"c", "x_range", "y_range", "w_range", "grid_x", "grid_y", "c4_values", "w_values"}


def _normalize(key, value):
    if key in _TUPLES and value is not None:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key} must be a list")
        value = tuple(float(v) for v in value)
        if key == "c" and len(value) != 4:
            raise ConfigError("c must hold four coefficients c0..c3")
        if key.endswith("_range") or key.startswith("grid_"):
            if len(value) != 2 or not value[0] < value[1]:
                raise ConfigError(f"{key} must be an increasing pair")
    if key == "projection" and isinstance(value, list):
        value = tuple(float(v) for v in value)
    return value


def make_scenario(values):
    """Build a Scenario from a mapping; unknown keys are errors."""
    unknown = sorted(set(values) - FIELDS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    try:
        return Scenario(**{k: _normalize(k, v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_scenario(path=None, overrides=None):
    values = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed configuration {path}: {exc}") from None
        if not isinstance(values, dict):
            raise ConfigError("configuration must be a JSON object")
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return make_scenario(values)
