"""2-jets of maps into Euclidean 4-space, fundamental forms and frame completion.

Vec4 values are numpy arrays with the component axis first: shape ``(4,)`` for a
single point or ``(4, ...)`` for a batch.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import closed_forms as cf
from . import jets
from .grid import GridError, GridField

DEGENERACY_TOL = 1e-10


class SingularPointError(ValueError):
    """Tangent vectors fail to span a plane (EG - F^2 <= 0)."""


class DegenerateFrameError(ValueError):
    """Inputs to the frame completion are linearly dependent."""


def inner(u, v):
    """Euclidean inner product g(u, v) over the component axis."""
    return jets.dot(u, v)


@dataclass(frozen=True)
class Jet2Surface:
    """A Vec4-valued map and its first and second partials at (u, v)."""

    value: np.ndarray
    d_u: np.ndarray
    d_v: np.ndarray
    d_uu: np.ndarray
    d_uv: np.ndarray
    d_vv: np.ndarray
    u: float = 0.0
    v: float = 0.0
    asymmetry: float = 0.0


@dataclass(frozen=True)
class ScalarJet2:
    value: float
    d_u: float
    d_v: float
    d_uu: float
    d_uv: float
    d_vv: float
    u: float = 0.0
    v: float = 0.0
    asymmetry: float = 0.0


@dataclass(frozen=True)
class FirstFundamentalForm:
    E: float
    F: float
    G: float

    @property
    def det(self):
        return self.E * self.G - self.F * self.F

    def is_isothermal(self, rtol=1e-12):
        scale = np.abs(self.E)
        return bool(np.all(np.abs(self.E - self.G) <= rtol * scale) and np.all(np.abs(self.F) <= rtol * scale))


# -- analytic jets --------------------------------------------------------

FAMILIES = {
    "sphere_l": cf.sphere_l,
    "sphere_l_uv": cf.sphere_l_uv,
    "normal_n": cf.normal_n,
    "r_general": cf.r_general,
}


def jet2_of(fn, u, v):
    """Second-order jet of ``fn(u, v)`` (Vec4 or scalar valued) via Taylor arithmetic."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValueError("jet evaluation point must be finite")
    ju, jv = jets.variables(u, v, order=2)
    out = fn(ju, jv)
    base = np.broadcast_shapes(u.shape, v.shape)
    if not isinstance(out, jets.Jet):
        out = np.asarray(out, dtype=float)
        out = jets.Jet.constant(np.broadcast_to(out.reshape(out.shape + (1,) * len(base)), out.shape + base), 2, 2)
    parts = [out.value, out.deriv(1, 0), out.deriv(0, 1), out.deriv(2, 0), out.deriv(1, 1), out.deriv(0, 2)]
    cls = ScalarJet2 if out.shape == base else Jet2Surface
    return cls(*parts, u=_scalar(u), v=_scalar(v))


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def eval_jet2_analytic(family, params, u, v):
    """Jet of a registered closed-form family at (u, v); ``r_general`` yields a ScalarJet2."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise KeyError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None
    return jet2_of(lambda a, b: fn(params, a, b), u, v)


# -- numeric jets ---------------------------------------------------------


def _central(f, i, j, hx, hy, s):
    """Central-difference derivatives of f (axes -2, -1) at (i, j) with stride s."""
    c = f[..., i, j]
    ip, im, jp, jm = f[..., i + s, j], f[..., i - s, j], f[..., i, j + s], f[..., i, j - s]
    dx, dy = s * hx, s * hy
    d_u = (ip - im) / (2 * dx)
    d_v = (jp - jm) / (2 * dy)
    d_uu = (ip - 2 * c + im) / dx**2
    d_vv = (jp - 2 * c + jm) / dy**2
    corners = f[..., i + s, j + s] - f[..., i + s, j - s] - f[..., i - s, j + s] + f[..., i - s, j - s]
    d_uv = corners / (4 * dx * dy)
    # same stencil composed in the other order: D_u(D_v f)
    dv_p = (f[..., i + s, j + s] - f[..., i + s, j - s]) / (2 * dy)
    dv_m = (f[..., i - s, j + s] - f[..., i - s, j - s]) / (2 * dy)
    d_vu = (dv_p - dv_m) / (2 * dx)
    return c, d_u, d_v, d_uu, d_uv, d_vv, d_vu


def eval_jet2_numeric(field, i, j, richardson=False):
    """Finite-difference jet of a GridField at interior node (i, j).

    Central second-order differences; with ``richardson`` one extrapolation step
    combines spacings h and 2h (needs two nodes of margin).
    """
    if not isinstance(field, GridField):
        raise GridError("eval_jet2_numeric expects a GridField")
    margin = 2 if richardson else 1
    if not (margin <= i < field.nx - margin and margin <= j < field.ny - margin):
        raise GridError(f"node ({i}, {j}) is too close to the boundary for the stencil")
    f = field.values
    h1 = _central(f, i, j, field.hx, field.hy, 1)
    if richardson:
        h2 = _central(f, i, j, field.hx, field.hy, 2)
        parts = [h1[0]] + [(4 * a - b) / 3 for a, b in zip(h1[1:], h2[1:])]
    else:
        parts = list(h1)
    value, d_u, d_v, d_uu, d_uv, d_vv, d_vu = parts
    asym = float(np.max(np.abs(d_uv - d_vu)))
    u = field.origin[0] + i * field.hx
    v = field.origin[1] + j * field.hy
    cls = Jet2Surface if field.is_vector else ScalarJet2
    return cls(value, d_u, d_v, d_uu, d_uv, d_vv, u=u, v=v, asymmetry=asym)


# -- forms and frames ---------------------------------------------------------


def first_form(jet):
    """Coefficients E, F, G of the first fundamental form of a surface jet."""
    E = inner(jet.d_u, jet.d_u)
    F = inner(jet.d_u, jet.d_v)
    G = inner(jet.d_v, jet.d_v)
    det = E * G - F * F
    if np.any(det <= 1e-14 * E * G) or np.any(E <= 0) or np.any(G <= 0):
        raise SingularPointError("degenerate jet: EG - F^2 <= 0 (singular point)")
    return FirstFundamentalForm(E, F, G)


def _det3(a, b, c, cols):
    i, j, k = cols
    return (
        a[i] * (b[j] * c[k] - b[k] * c[j])
        - a[j] * (b[i] * c[k] - b[k] * c[i])
        + a[k] * (b[i] * c[j] - b[j] * c[i])
    )


def hodge_dual(a, b, c):
    """Generalized cross product in 4-space: g(hodge_dual(a, b, c), z) = det[a, b, c, z]."""
    comps = []
    for i in range(4):
        cols = [k for k in range(4) if k != i]
        sign = 1.0 if i % 2 else -1.0  # cofactor sign (-1)^(4+i) for rows (a, b, c, e_i)
        comps.append(sign * _det3(a, b, c, cols))
    return jets.stack(comps)


def fourth_frame_vector(l, l_u, l_v, tol=DEGENERACY_TOL):
    """Unit vector orthogonal to l, l_u, l_v; oriented as the Hodge dual of (l_u, l_v, l)."""
    n = hodge_dual(l_u, l_v, l)
    norm2 = inner(n, n)
    scale2 = inner(l, l) * inner(l_u, l_u) * inner(l_v, l_v)
    val = (lambda q: q.value if isinstance(q, jets.Jet) else q)
    if np.any(val(norm2) < tol**2 * val(scale2)):
        raise DegenerateFrameError("l, l_u, l_v are linearly dependent")
    return n / jets.sqrt(norm2)
