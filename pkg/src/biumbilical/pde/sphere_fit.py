"""Fit of sampled surface points to a 2-sphere lying in a hyperplane of E^4."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grid import GridField


class FitAmbiguousError(ValueError):
    """The sample points span fewer than three dimensions."""


@dataclass(frozen=True)
class FitResult:
    hyperplane_normal: np.ndarray
    hyperplane_offset: float
    center: np.ndarray
    radius: float
    max_residual: float

    @property
    def curvature(self):
        return 1.0 / self.radius**2


def verify_sphere_theorem(field, tol=1e-10):
    """Hyperplane <l, e> = beta by SVD of centred data, then an in-plane sphere by linear LSQ.

    ``field`` is a Vec4 GridField or an array of shape (4, N).  The normal is
    oriented so that beta >= 0.
    """
    P = field.values.reshape(4, -1).T if isinstance(field, GridField) else np.asarray(field, dtype=float).T
    mean = P.mean(axis=0)
    _, s, Vt = np.linalg.svd(P - mean, full_matrices=False)
    if s[2] <= tol * s[0]:
        raise FitAmbiguousError("points span fewer than three dimensions")
    e = Vt[3]
    beta = float(mean @ e)
    if beta < 0 or (beta == 0 and e[np.argmax(np.abs(e))] < 0):
        e, beta = -e, -beta
    basis = Vt[:3]
    q = (P - mean) @ basis.T
    M = np.column_stack([2 * q, np.ones(len(q))])
    sol, *_ = np.linalg.lstsq(M, np.sum(q * q, axis=1), rcond=None)
    c3, k = sol[:3], sol[3]
    radius = float(np.sqrt(k + c3 @ c3))
    center = mean + c3 @ basis
    off_plane = (P - mean) @ e
    radial = np.linalg.norm(q - c3, axis=1) - radius
    max_res = float(np.max(np.hypot(off_plane, radial)))
    return FitResult(e, beta, center, radius, max_res)
