"""Envelope of a two-parameter family of hyperplanes and its shape operator.

The hyperplanes are <z, l(x, y)> = r(x, y) with l a unit isothermal surface on
S^3.  The envelope is ruled by the straight lines w -> X(x, y, w) along the
fourth frame vector n.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .geom_kernel import fourth_frame_vector, hodge_dual, inner

ISOTHERMAL_TOL = 1e-8
ZERO_EIGEN_TOL = 1e-8
REGULAR_TOL = 1e-12


class NotIsothermalError(ValueError):
    pass


class DegeneratePointError(ValueError):
    """The hypersurface map is not an immersion at this point (singular metric)."""


@dataclass(frozen=True)
class HypersurfaceJet:
    """X(x, y, w) with first partials ``d1[i]`` and second partials ``d2[i][j]`` (i, j over x, y, w)."""

    value: np.ndarray
    d1: np.ndarray  # (3, 4)
    d2: np.ndarray  # (3, 3, 4)
    point: tuple = (0.0, 0.0, 0.0)

    @property
    def asymmetry(self):
        return float(np.max(np.abs(self.d2 - np.swapaxes(self.d2, 0, 1))))


@dataclass(frozen=True)
class ShapeData:
    """Metric, second fundamental form and shape operator at a point of M^3.

    ``eigenvectors`` holds g-orthonormal tangent coordinate vectors as columns,
    ordered like ``eigenvalues`` (descending absolute value).
    """

    metric: np.ndarray
    second_form: np.ndarray
    shape_operator: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class BiumbilicalReport:
    status: str  # "regular" or "degenerate"
    is_type_two: bool
    is_biumbilical: bool
    eigenvalues: tuple


def envelope_point(l_jet, r_jet, w, iso_tol=ISOTHERMAL_TOL):
    """X = r l + (r_u/E) l_u + (r_v/E) l_v + w n for isothermal l."""
    E = inner(l_jet.d_u, l_jet.d_u)
    G = inner(l_jet.d_v, l_jet.d_v)
    F = inner(l_jet.d_u, l_jet.d_v)
    if np.any(E <= 0):
        raise NotIsothermalError("E must be positive")
    if np.any(np.abs(E - G) > iso_tol * E) or np.any(np.abs(F) > iso_tol * E):
        raise NotIsothermalError("l jet is not isothermal at this point")
    n = fourth_frame_vector(l_jet.value, l_jet.d_u, l_jet.d_v)
    return r_jet.value * l_jet.value + (r_jet.d_u / E) * l_jet.d_u + (r_jet.d_v / E) * l_jet.d_v + w * n


def envelope_map(l_fn, r_fn, x, y, w):
    """Envelope X(x, y, w) for surface/scalar callables; accepts floats, arrays or jets.

    On order-k jets the result is an order-(k-1) jet, since the construction
    consumes first derivatives of l and r.
    """
    if isinstance(x, jets.Jet):
        l = l_fn(x, y)
        r = r_fn(x, y)
        l_x, l_y = l.partial(0), l.partial(1)
        r_x, r_y = r.partial(0), r.partial(1)
        E = inner(l_x, l_x)
        n = fourth_frame_vector(l, l_x, l_y)
        return r * l + (r_x / E) * l_x + (r_y / E) * l_y + n * w
    # plain arrays: take the needed first derivatives with an order-1 jet
    xj, yj = jets.variables(x, y, order=1)
    l = l_fn(xj, yj)
    r = r_fn(xj, yj)
    from .geom_kernel import Jet2Surface, ScalarJet2

    zero = np.zeros_like(l.value)
    lj = Jet2Surface(l.value, l.grad(0), l.grad(1), zero, zero, zero)
    rj = ScalarJet2(r.value, r.grad(0), r.grad(1), 0.0, 0.0, 0.0)
    return envelope_point(lj, rj, w)


def _pack(X, point):
    d1 = np.stack([X.deriv(*e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])
    idx = {}
    for i in range(3):
        for j in range(3):
            alpha = [0, 0, 0]
            alpha[i] += 1
            alpha[j] += 1
            idx[i, j] = X.deriv(*alpha)
    d2 = np.stack([np.stack([idx[i, j] for j in range(3)]) for i in range(3)])
    return HypersurfaceJet(X.value, d1, d2, point)


def hypersurface_jet(X_fn, x, y, w, method="analytic", h=1e-3):
    """Jet of a 3-parameter map X_fn(x, y, w) into E^4.

    ``method="analytic"`` evaluates X_fn on order-2 Taylor jets;
    ``method="numeric"`` treats X_fn as a sampled patch and uses central
    differences with one Richardson step (spacing ``h``).
    """
    point = (float(x), float(y), float(w))
    if not all(np.isfinite(point)):
        raise ValueError("parameter point must be finite")
    if method == "analytic":
        xj, yj, wj = jets.variables(x, y, w, order=2)
        X = X_fn(xj, yj, wj)
        if not isinstance(X, jets.Jet):
            X = jets.Jet.constant(np.asarray(X, dtype=float), 3, 2)
        return _pack(X, point)
    if method == "numeric":
        return _numeric_jet(X_fn, np.array(point), h)
    raise ValueError(f"unknown method {method!r}")


def envelope_hypersurface_jet(l_fn, r_fn, x, y, w):
    """Analytic jet of the envelope map (needs third derivatives of l and r)."""
    point = (float(x), float(y), float(w))
    xj, yj, wj = jets.variables(x, y, w, order=3)
    return _pack(envelope_map(l_fn, r_fn, xj, yj, wj), point)


def _numeric_jet(X_fn, p, h):
    def f(q):
        return np.asarray(X_fn(*q), dtype=float)

    def derivs(s):
        e = np.eye(3) * s
        value = f(p)
        d1 = np.stack([(f(p + e[i]) - f(p - e[i])) / (2 * s) for i in range(3)])
        d2 = np.empty((3, 3) + value.shape)
        for i in range(3):
            d2[i, i] = (f(p + e[i]) - 2 * value + f(p - e[i])) / s**2
            for j in range(i + 1, 3):
                d2[i, j] = (
                    f(p + e[i] + e[j]) - f(p + e[i] - e[j]) - f(p - e[i] + e[j]) + f(p - e[i] - e[j])
                ) / (4 * s * s)
                d2[j, i] = d2[i, j]
        return value, d1, d2

    value, d1h, d2h = derivs(h)
    _, d1H, d2H = derivs(2 * h)
    return HypersurfaceJet(value, (4 * d1h - d1H) / 3, (4 * d2h - d2H) / 3, tuple(p))


def _sym_sqrt_inv(g):
    s, Q = np.linalg.eigh(g)
    return (Q / np.sqrt(s)) @ Q.T


def shape_data(jet, regular_tol=REGULAR_TOL):
    """Second fundamental form and shape operator of a hypersurface jet.

    Raises DegeneratePointError where det g < regular_tol * (tr g / 3)^3.
    """
    T = jet.d1
    g = T @ T.T
    if np.linalg.det(g) < regular_tol * (np.trace(g) / 3.0) ** 3:
        raise DegeneratePointError(f"singular metric at {jet.point}")
    N = hodge_dual(T[0], T[1], T[2])
    N = N / np.linalg.norm(N)
    h = np.einsum("ijk,k->ij", jet.d2, N)
    h = 0.5 * (h + h.T)
    A = np.linalg.solve(g, h)
    root_inv = _sym_sqrt_inv(g)
    S = root_inv @ h @ root_inv
    nu, V = np.linalg.eigh(0.5 * (S + S.T))
    order = np.argsort(-np.abs(nu), kind="stable")
    return ShapeData(g, h, A, nu[order], root_inv @ V[:, order], N)


def biumbilical_check(s, tol=ZERO_EIGEN_TOL):
    """Type number and bi-umbilicity from shape-operator eigenvalues (relative tolerance).

    ``s`` may be None for a degenerate point, which yields status "degenerate".
    """
    if s is None:
        return BiumbilicalReport("degenerate", False, False, ())
    nu = np.asarray(s.eigenvalues if isinstance(s, ShapeData) else s, dtype=float)
    scale = np.max(np.abs(nu))
    if scale == 0.0:
        return BiumbilicalReport("regular", False, False, tuple(nu))
    zero = np.abs(nu) <= tol * scale
    type_two = int(zero.sum()) == nu.size - 2
    nonzero = nu[~zero]
    biumb = type_two and abs(nonzero[0] - nonzero[1]) <= tol * scale
    return BiumbilicalReport("regular", bool(type_two), bool(biumb), tuple(float(v) for v in nu))


def classify_point(X_fn, x, y, w, tol=ZERO_EIGEN_TOL, method="analytic"):
    try:
        s = shape_data(hypersurface_jet(X_fn, x, y, w, method=method))
    except DegeneratePointError:
        s = None
    return biumbilical_check(s, tol)


def round_cylinder(x, y, w):
    """S^1 x R^2 in E^4: principal curvatures (1, 0, 0); a type-one control surface."""
    return jets.stack([jets.cos(y), jets.sin(y), w + 0.0 * x, x + 0.0 * w])
