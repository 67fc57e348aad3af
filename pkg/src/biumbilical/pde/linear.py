"""Least-squares grid solver for the linear r-system in isothermal (x, y) coordinates.

Both equations

    r_xx - r_yy + 2 tanh(x) r_x = 0,    r_xy + tanh(x) r_y = 0

are imposed at every interior node; Dirichlet data fix the boundary nodes.  The
overdetermined system is solved through its normal equations.  One defect
correction sweep (fourth-order stencils evaluated on the second-order solution)
removes the leading discretization error before the family fit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from ..grid import GridError, GridField
from .fit import fit_r_family
from .operators import derivative_operators, interior_mask

DIRECT_LIMIT = 129


class RankDeficientError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarGridSolution:
    field: GridField  # second-order solution
    corrected: GridField  # after one defect-correction sweep
    coefficients: tuple  # family fit of the reported field
    fit_residual: float
    pde_residual: float  # rms of the discrete equations at the second-order solution


def _system(X, hx, hy, order):
    nx, ny = X.shape
    I, Dx, Dy, Dxx, Dxy, Dyy = derivative_operators(nx, ny, hx, hy, order)
    T = sp.diags(np.tanh(X).ravel())
    return sp.vstack([Dxx - Dyy + 2 * T @ Dx, Dxy + T @ Dy]).tocsr()


class _NormalSolver:
    def __init__(self, A, large):
        self.A = A
        self.large = large
        if not large:
            try:
                self.lu = spl.splu((A.T @ A).tocsc())
            except RuntimeError as exc:
                raise RankDeficientError(f"normal equations are singular: {exc}") from None

    def solve(self, rhs):
        if not self.large:
            out = self.lu.solve(self.A.T @ rhs)
            if not np.all(np.isfinite(out)):
                raise RankDeficientError("normal equations are singular")
            return out
        sol = spl.lsqr(self.A, rhs, atol=1e-14, btol=1e-14, iter_lim=20 * self.A.shape[1])
        if sol[1] not in (1, 2, 4, 5):
            raise RankDeficientError(f"iterative least squares did not converge (istop={sol[1]})")
        return sol[0]


def solve_r_grid(boundary, x_range=(-1.0, 1.0), y_range=(-1.0, 1.0), nx=33, ny=33, correct=True):
    """Solve the r-system with Dirichlet data and fit the four-parameter family.

    ``boundary`` is a callable r(X, Y) or a GridField (only its edge values are
    used).  The family fit uses the corrected field when ``correct`` is set.
    """
    if isinstance(boundary, GridField):
        field0 = boundary
    else:
        field0 = GridField.sample(boundary, x_range, y_range, nx, ny)
    if field0.is_vector:
        raise GridError("boundary data must be scalar")
    nx, ny = field0.nx, field0.ny
    X, _ = field0.mesh()
    inner = interior_mask(nx, ny)
    data = np.where(inner, 0.0, field0.values.ravel())

    rows = np.repeat(inner[None], 2, axis=0).ravel()
    A2 = _system(X, field0.hx, field0.hy, 2)[rows]
    Au = A2[:, inner]
    solver = _NormalSolver(Au, max(nx, ny) > DIRECT_LIMIT)
    rhs = -(A2 @ data)
    r2 = data.copy()
    r2[inner] = solver.solve(rhs)
    pde_res = float(np.sqrt(np.mean((A2 @ r2) ** 2)))

    rc = r2
    if correct:
        A4 = _system(X, field0.hx, field0.hy, 4)[rows]
        tau = (A4 - A2) @ r2
        rc = data.copy()
        rc[inner] = solver.solve(rhs - tau)

    base = field0.with_values(r2.reshape(nx, ny))
    corrected = field0.with_values(rc.reshape(nx, ny))
    coeffs, fit_res = fit_r_family(corrected if correct else base)
    return ScalarGridSolution(base, corrected, coeffs, fit_res, pde_res)
