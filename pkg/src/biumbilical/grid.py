"""Uniform rectangular grids and finite-difference operators on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = ["GridField", "GridError", "fd_weights", "diff_matrix"]


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridField:
    """Scalar or Vec4 samples on a uniform (x, y) grid.

    ``values`` has shape ``(nx, ny)`` for scalar fields and ``(4, nx, ny)`` for
    Vec4 fields; axis ``-2`` runs along x and axis ``-1`` along y.
    """

    values: np.ndarray
    hx: float
    hy: float
    origin: tuple = (0.0, 0.0)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        if values.ndim not in (2, 3) or (values.ndim == 3 and values.shape[0] != 4):
            raise GridError(f"values must have shape (nx, ny) or (4, nx, ny), got {values.shape}")
        if not (self.hx > 0 and self.hy > 0):
            raise GridError("grid spacing must be positive")
        if min(values.shape[-2:]) < 5:
            raise GridError("need at least 5 nodes per direction")

    @classmethod
    def from_coords(cls, x, y, values, rtol=1e-10):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        for name, c in (("x", x), ("y", y)):
            steps = np.diff(c)
            if steps.size == 0 or np.max(np.abs(steps - steps[0])) > rtol * abs(steps[0]):
                raise GridError(f"non-uniform grid along {name}")
        return cls(values, x[1] - x[0], y[1] - y[0], (x[0], y[0]))

    @classmethod
    def sample(cls, fn, x_range, y_range, nx, ny):
        """Sample ``fn(X, Y)`` on an ``nx`` x ``ny`` node grid covering the ranges."""
        x = np.linspace(x_range[0], x_range[1], nx)
        y = np.linspace(y_range[0], y_range[1], ny)
        X, Y = np.meshgrid(x, y, indexing="ij")
        return cls(np.asarray(fn(X, Y), dtype=float), x[1] - x[0], y[1] - y[0], (x[0], y[0]))

    @property
    def nx(self):
        return self.values.shape[-2]

    @property
    def ny(self):
        return self.values.shape[-1]

    @property
    def is_vector(self):
        return self.values.ndim == 3

    @property
    def x(self):
        return self.origin[0] + self.hx * np.arange(self.nx)

    @property
    def y(self):
        return self.origin[1] + self.hy * np.arange(self.ny)

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def with_values(self, values):
        return GridField(values, self.hx, self.hy, self.origin, dict(self.meta))


def fd_weights(offsets, m):
    """Weights w with sum_k w_k f(x0 + offsets_k h) ~ h^m f^(m)(x0) (Vandermonde solve)."""
    offsets = np.asarray(offsets, dtype=float)
    n = offsets.size
    V = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(V, rhs)


def diff_matrix(n, h, m, order=2):
    """Sparse n x n matrix of the m-th derivative with formal accuracy ``order``.

    Rows use centred stencils where they fit and one-sided stencils of
    ``m + order`` nodes next to the ends.
    """
    if order % 2:
        raise GridError("accuracy order must be even")
    centred = 2 * ((m + 1) // 2) - 1 + order
    half = centred // 2
    edge = m + order
    if edge > n:
        raise GridError("grid too small for requested stencil")
    rows, cols, vals = [], [], []
    for i in range(n):
        if i - half >= 0 and i + half <= n - 1:
            idx = np.arange(i - half, i + half + 1)
        elif i - half < 0:
            idx = np.arange(0, edge)
        else:
            idx = np.arange(n - edge, n)
        w = fd_weights(idx - i, m) / h**m
        rows.extend([i] * idx.size)
        cols.extend(idx)
        vals.extend(w)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
