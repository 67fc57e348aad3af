"""Least-squares fit of a scalar grid field to the four-parameter r family."""
from __future__ import annotations

import numpy as np


def r_family_basis(X, Y):
    return np.stack([np.ones_like(X), np.cos(Y) / np.cosh(X), np.sin(Y) / np.cosh(X), np.tanh(X)], axis=-1)


def fit_r_family(field):
    """Return ((c0, c1, c2, c3), max |field - fit|)."""
    X, Y = field.mesh()
    B = r_family_basis(X, Y).reshape(-1, 4)
    values = field.values.ravel()
    coeffs, *_ = np.linalg.lstsq(B, values, rcond=None)
    residual = float(np.max(np.abs(B @ coeffs - values)))
    return tuple(float(c) for c in coeffs), residual
