"""Damped Gauss-Newton solver for the constrained l-system on a grid.

Unknowns are the Vec4 values of l at interior nodes; boundary nodes carry
Dirichlet data.  At every interior node the residual stacks

    (l_uu - l_vv - (E_u/E) l_u + (E_v/E) l_v) / E     (4)
    (2 l_uv - (E_v/E) l_u - (E_u/E) l_v) / E          (4)
    (E - G) / E,  F / E,  g(l, l) - 1                 (3)

with E = g(l_u, l_u), E_u = 2 g(l_uu, l_u), E_v = 2 g(l_uv, l_u).  Derivatives
come from finite-difference operators; the Jacobian is assembled exactly from
per-node complex-step sensitivities composed with those operators.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from ..grid import GridError, GridField
from .operators import derivative_operators, interior_mask

log = logging.getLogger(__name__)

N_RESIDUALS = 11
_CSTEP = 1e-30


class ConvergenceError(RuntimeError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


@dataclass
class GaussNewtonReport:
    converged: bool = False
    iterations: int = 0
    residual_history: list = field(default_factory=list)  # ||F|| before each step, then final
    step_history: list = field(default_factory=list)  # max-norm of each accepted update
    halvings: list = field(default_factory=list)

    @property
    def final_residual(self):
        return self.residual_history[-1]

    @property
    def monotone(self):
        h = self.residual_history
        return all(b <= a for a, b in zip(h, h[1:]))


@dataclass(frozen=True)
class LSolution:
    field: GridField
    report: GaussNewtonReport


def node_residuals(l, l_u, l_v, l_uu, l_uv, l_vv):
    """Residual components (11, ...) from per-node derivative arrays of shape (4, ...)."""
    E = np.sum(l_u * l_u, axis=0)
    G = np.sum(l_v * l_v, axis=0)
    F = np.sum(l_u * l_v, axis=0)
    E_u = 2 * np.sum(l_uu * l_u, axis=0)
    E_v = 2 * np.sum(l_uv * l_u, axis=0)
    a = (l_uu - l_vv - (E_u / E) * l_u + (E_v / E) * l_v) / E
    b = (2 * l_uv - (E_v / E) * l_u - (E_u / E) * l_v) / E
    unit = np.sum(l * l, axis=0) - 1.0
    return np.concatenate([a, b, ((E - G) / E)[None], (F / E)[None], unit[None]])


class _Discretization:
    def __init__(self, grid, order):
        nx, ny = grid.nx, grid.ny
        self.inner = interior_mask(nx, ny)
        self.m = int(self.inner.sum())
        ops = derivative_operators(nx, ny, grid.hx, grid.hy, order)
        self.rows = [D[self.inner] for D in ops]
        self.cols = [D[:, self.inner].tocsc() for D in self.rows]

    def derivatives(self, L):
        return [(D @ L.T).T for D in self.rows]

    def residual(self, L):
        return node_residuals(*self.derivatives(L)).ravel()

    def jacobian(self, L):
        d = self.derivatives(L)
        sens = np.empty((6, 4, N_RESIDUALS, self.m))
        for k in range(6):
            for c in range(4):
                dd = [a.astype(complex) for a in d]
                dd[k][c] += _CSTEP * 1j
                sens[k, c] = node_residuals(*dd).imag / _CSTEP
        blocks = [
            [sum(sp.diags(sens[k, c, r]) @ self.cols[k] for k in range(6)) for c in range(4)]
            for r in range(N_RESIDUALS)
        ]
        return sp.bmat(blocks, format="csc")


def _as_field(source, x_range, y_range, nx, ny):
    if isinstance(source, GridField):
        return source
    return GridField.sample(source, x_range, y_range, nx, ny)


def smooth_perturbation(grid, amplitude, seed=0, modes=3):
    """Random low-frequency Vec4 perturbation vanishing on the boundary, max-norm ``amplitude``."""
    rng = np.random.default_rng(seed)
    X, Y = grid.mesh()
    sx = (X - X.min()) / (X.max() - X.min())
    sy = (Y - Y.min()) / (Y.max() - Y.min())
    out = np.zeros((4,) + X.shape)
    for p in range(1, modes + 1):
        for q in range(1, modes + 1):
            coef = rng.normal(size=4) / (p * q)
            out += coef[:, None, None] * (np.sin(np.pi * p * sx) * np.sin(np.pi * q * sy))[None]
    return amplitude * out / np.max(np.abs(out))


def solve_l_gauss_newton(
    boundary,
    initial=None,
    x_range=(-1.0, 1.0),
    y_range=(-1.0, 1.0),
    nx=21,
    ny=21,
    max_iter=50,
    tol=1e-9,
    order=4,
    max_halvings=20,
):
    """Minimize the squared l-system residual over interior values of l.

    ``boundary`` and ``initial`` are callables (X, Y) -> (4, nx, ny) or Vec4
    GridFields; ``initial`` defaults to the boundary source.  Convergence is
    declared when an accepted update has max-norm below ``tol``.  Raises
    ConvergenceError on divergence or when ``max_iter`` is exhausted.
    """
    bfield = _as_field(boundary, x_range, y_range, nx, ny)
    if not bfield.is_vector:
        raise GridError("boundary data must be a Vec4 field")
    grid = bfield
    start = bfield if initial is None else _as_field(initial, x_range, y_range, grid.nx, grid.ny)
    if start.values.shape != grid.values.shape:
        raise GridError("initial guess and boundary grids differ")

    disc = _Discretization(grid, order)
    L = grid.values.reshape(4, -1).copy()
    L[:, disc.inner] = start.values.reshape(4, -1)[:, disc.inner]

    report = GaussNewtonReport()
    F = disc.residual(L)
    f = float(F @ F)
    if not np.isfinite(f):
        raise ConvergenceError("initial guess has vanishing E at interior nodes", report)
    report.residual_history.append(np.sqrt(f))

    for it in range(1, max_iter + 1):
        J = disc.jacobian(L)
        try:
            delta = spl.splu((J.T @ J).tocsc()).solve(-(J.T @ F))
        except RuntimeError as exc:
            raise ConvergenceError(f"singular Gauss-Newton system: {exc}", report) from None
        delta = delta.reshape(4, disc.m)
        t = 1.0
        for halving in range(max_halvings + 1):
            trial = L.copy()
            trial[:, disc.inner] += t * delta
            F_trial = disc.residual(trial)
            f_trial = float(F_trial @ F_trial)
            if np.isfinite(f_trial) and f_trial <= f:
                break
            t *= 0.5
        else:
            raise ConvergenceError(f"residual increased after {max_halvings} halvings", report)
        step = float(np.max(np.abs(t * delta)))
        L, F, f = trial, F_trial, f_trial
        report.iterations = it
        report.residual_history.append(np.sqrt(f))
        report.step_history.append(step)
        report.halvings.append(halving)
        log.debug("gauss-newton iter %d: |F|=%.3e step=%.3e halvings=%d", it, np.sqrt(f), step, halving)
        if step <= tol:
            report.converged = True
            break
    else:
        raise ConvergenceError(f"no convergence within {max_iter} iterations", report)

    return LSolution(grid.with_values(L.reshape(grid.values.shape)), report)
