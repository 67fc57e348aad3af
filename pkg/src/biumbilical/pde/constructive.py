"""Constructive integration of the r-system by separation of variables.

With r = G(y) / cosh x + f(x) the system splits into two ODEs sharing a
separation constant c4:

    G'' + G = c4,                       G(0) = c1 + c4, G'(0) = c2
    (cosh^2 x f')' = c4 (sinh x)',      f(0) = c0 - c4, f'(0) = c3

Both are integrated with classical RK4; the assembled r must not depend on c4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..grid import GridField
from .fit import fit_r_family


class StepCountError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructiveResult:
    field: GridField
    coefficients: tuple  # recovered (c0, c1, c2, c3)
    fit_residual: float
    step_error: float  # max change when the step count is doubled
    c4: float


def _rk4(rhs, state, t0, t1, nsub):
    h = (t1 - t0) / nsub
    t = t0
    s = np.asarray(state, dtype=float)
    for _ in range(nsub):
        k1 = rhs(t, s)
        k2 = rhs(t + h / 2, s + h / 2 * k1)
        k3 = rhs(t + h / 2, s + h / 2 * k2)
        k4 = rhs(t + h, s + h * k3)
        s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return s


def _march(rhs, state0, nodes, h_max):
    """Integrate from t = 0 outwards, returning the state at every node."""
    out = np.empty((nodes.size, np.size(state0)))
    for side in (1, -1):
        sel = np.nonzero(nodes * side >= 0)[0] if side == 1 else np.nonzero(nodes < 0)[0]
        sel = sel[np.argsort(np.abs(nodes[sel]), kind="stable")]
        t, s = 0.0, np.asarray(state0, dtype=float)
        for k in sel:
            target = nodes[k]
            nsub = max(1, math.ceil(abs(target - t) / h_max - 1e-9))
            if target != t:
                s = _rk4(rhs, s, t, target, nsub)
                t = target
            out[k] = s
    return out


def _assemble(c, x, y, n_steps):
    c0, c1, c2, c3, c4 = c
    hy = (y[-1] - y[0]) / n_steps
    hx = (x[-1] - x[0]) / n_steps
    G = _march(lambda t, s: np.array([s[1], c4 - s[0]]), [c1 + c4, c2], y, hy)[:, 0]
    f = _march(lambda t, s: np.array([(c4 * math.sinh(t) + c3) / math.cosh(t) ** 2]), [c0 - c4], x, hx)[:, 0]
    return G[None, :] / np.cosh(x)[:, None] + f[:, None]


def solve_r_constructive(c0, c1, c2, c3, c4, x_range=(-1.0, 1.0), y_range=(-1.0, 1.0), n_steps=100, tol=1e-7):
    """Assemble r on an (n_steps+1)^2 grid from the two separated ODEs."""
    if n_steps < 4:
        raise StepCountError("need at least 4 steps per direction")
    x = np.linspace(x_range[0], x_range[1], n_steps + 1)
    y = np.linspace(y_range[0], y_range[1], n_steps + 1)
    consts = (c0, c1, c2, c3, c4)
    r = _assemble(consts, x, y, n_steps)
    r_fine = _assemble(consts, x, y, 2 * n_steps)
    step_error = float(np.max(np.abs(r - r_fine)))
    if step_error > tol:
        raise StepCountError(f"n_steps={n_steps} gives step-doubling error {step_error:.3e} > {tol:.1e}")
    field = GridField(r, x[1] - x[0], y[1] - y[0], (x[0], y[0]))
    coeffs, fit_res = fit_r_family(field)
    return ConstructiveResult(field, coeffs, fit_res, step_error, float(c4))
