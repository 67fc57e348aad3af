"""Explicit solution families: the sphere l, the scalar solutions r, the normal n
and the bi-umbilical hypersurface X in explicit and compact form.

Every function accepts plain floats, numpy arrays or :class:`~biumbilical.jets.Jet`
arguments.  Vec4 results carry the component axis first (shape ``(4, ...)``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .jets import cos, cosh, sin, sinh, stack

X_MAX = 3.0

_UNIT_TOL = 1e-14


class ExplicitFormUndefined(ValueError):
    """The explicit and compact coordinate formulas divide by b; use the envelope construction."""


@dataclass(frozen=True)
class SolutionParams:
    """Constants of the closed-form families: a = cos(alpha), b = sin(alpha), c0..c3."""

    a: float
    b: float
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def __post_init__(self):
        values = (self.a, self.b, self.c0, self.c1, self.c2, self.c3)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("solution parameters must be finite")
        if abs(self.a * self.a + self.b * self.b - 1.0) > _UNIT_TOL:
            raise ValueError(f"a^2 + b^2 must equal 1, got {self.a ** 2 + self.b ** 2!r}")
        if self.a == 0.0:
            raise ValueError("a = 0 gives a degenerate (zero-radius) sphere")

    @classmethod
    def from_angle(cls, alpha, c0=0.0, c1=0.0, c2=0.0, c3=0.0):
        return cls(math.cos(alpha), math.sin(alpha), c0, c1, c2, c3)

    @property
    def coefficients(self):
        return (self.c0, self.c1, self.c2, self.c3)

    def with_coefficients(self, c0, c1, c2, c3):
        return SolutionParams(self.a, self.b, c0, c1, c2, c3)

    def _require_b(self):
        if self.b == 0.0:
            raise ExplicitFormUndefined(
                "b = 0: the explicit coordinate functions divide by b; "
                "build the hypersurface with biumbilical.envelope instead"
            )


def param_change(x):
    """Isothermal parameter change u = -pi/2 + 2 arctan(e^x)."""
    return -0.5 * math.pi + 2.0 * jets.arctan(jets.exp(x))


def sphere_l_uv(params, u, v):
    """The 2-sphere S^3(1) ∩ {z4 = b} in the non-isothermal (u, v) parameters."""
    a, b = params.a, params.b
    return stack([a * cos(u) * cos(v), a * cos(u) * sin(v), a * sin(u), b + 0.0 * u])


def sphere_l(params, x, y):
    """Isothermal parametrization (1/cosh x)(a cos y, a sin y, a sinh x, b cosh x)."""
    a, b = params.a, params.b
    sech = 1.0 / cosh(x)
    return stack([a * cos(y) * sech, a * sin(y) * sech, a * sinh(x) * sech, b + 0.0 * x + 0.0 * y])


def r_general(params, x, y):
    """General solution c0 + (c1 cos y + c2 sin y + c3 sinh x) / cosh x."""
    return params.c0 + (params.c1 * cos(y) + params.c2 * sin(y) + params.c3 * sinh(x)) / cosh(x)


def normal_n(params, x, y):
    """Unit normal (1/cosh x)(b cos y, b sin y, b sinh x, -a cosh x) of the sphere inside S^3."""
    a, b = params.a, params.b
    sech = 1.0 / cosh(x)
    return stack([b * cos(y) * sech, b * sin(y) * sech, b * sinh(x) * sech, -a + 0.0 * x + 0.0 * y])


def _bracket(params, x, y, w):
    a, b = params.a, params.b
    p = params.c1 * cos(y) + params.c2 * sin(y) + params.c3 * sinh(x)
    return a * params.c0 + b * w - (b * b / a) * p / cosh(x)


def hypersurface_X_explicit(params, x, y, w):
    """The four coordinate functions X^1..X^4 written out term by term."""
    params._require_b()
    a, b = params.a, params.b
    bracket = _bracket(params, x, y, w)
    sech = 1.0 / cosh(x)
    return stack(
        [
            cos(y) * sech * bracket + params.c1 / a,
            sin(y) * sech * bracket + params.c2 / a,
            sinh(x) * sech * bracket + params.c3 / a,
            -(a / b) * bracket + params.c0 / b,
        ]
    )


def focal_function(params, x, y, w):
    """f = (a/b) c0 + w - b (c1 cos y + c2 sin y + c3 sinh x) / (a cosh x); X = f n + C."""
    params._require_b()
    a, b = params.a, params.b
    p = params.c1 * cos(y) + params.c2 * sin(y) + params.c3 * sinh(x)
    return (a / b) * params.c0 + w - (b / a) * p / cosh(x)


def focal_point(params):
    """The constant vector C = (c1/a, c2/a, c3/a, c0/b)."""
    params._require_b()
    return np.array([params.c1 / params.a, params.c2 / params.a, params.c3 / params.a, params.c0 / params.b])


def hypersurface_X_compact(params, x, y, w):
    """X = f(x, y, w) n(x, y) + C."""
    f = focal_function(params, x, y, w)
    n = normal_n(params, x, y)
    C = focal_point(params)
    shape = n.shape if isinstance(n, jets.Jet) else np.shape(n)
    return n * f + C.reshape((4,) + (1,) * (len(shape) - 1))
