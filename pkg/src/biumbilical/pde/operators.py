"""Sparse 2-D derivative operators on flattened (nx, ny) grids (C order, x major)."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..grid import diff_matrix

SLOTS = ("value", "u", "v", "uu", "uv", "vv")


def derivative_operators(nx, ny, hx, hy, order=2):
    """Operators for (f, f_u, f_v, f_uu, f_uv, f_vv) acting on f.ravel()."""
    Ix, Iy = sp.identity(nx, format="csr"), sp.identity(ny, format="csr")
    Dx, Dxx = diff_matrix(nx, hx, 1, order), diff_matrix(nx, hx, 2, order)
    Dy, Dyy = diff_matrix(ny, hy, 1, order), diff_matrix(ny, hy, 2, order)
    return (
        sp.identity(nx * ny, format="csr"),
        sp.kron(Dx, Iy, format="csr"),
        sp.kron(Ix, Dy, format="csr"),
        sp.kron(Dxx, Iy, format="csr"),
        sp.kron(Dx, Dy, format="csr"),
        sp.kron(Ix, Dyy, format="csr"),
    )


def interior_mask(nx, ny):
    mask = np.zeros((nx, ny), dtype=bool)
    mask[1:-1, 1:-1] = True
    return mask.ravel()
