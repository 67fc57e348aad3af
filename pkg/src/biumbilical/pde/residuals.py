"""Residuals of the l- and r-systems, and the Householder form of the l-system."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..geom_kernel import ScalarJet2, inner

E_TOL = 1e-14


class LSystemResidual(NamedTuple):
    pde_a: np.ndarray  # l_uu - l_vv - (E_u/E) l_u + (E_v/E) l_v
    pde_b: np.ndarray  # 2 l_uv - (E_v/E) l_u - (E_u/E) l_v
    e_minus_g: float
    f: float
    unit: float  # g(l, l) - 1

    def max_abs(self):
        return max(
            float(np.max(np.linalg.norm(self.pde_a, axis=0))),
            float(np.max(np.linalg.norm(self.pde_b, axis=0))),
            float(np.max(np.abs(self.e_minus_g))),
            float(np.max(np.abs(self.f))),
            float(np.max(np.abs(self.unit))),
        )


def _check_E(E):
    if np.any(np.asarray(E) <= E_TOL):
        raise ValueError("metric coefficient E is below tolerance")


def metric_from_l(l_jet):
    """First-order jet of E = g(l_u, l_u); second derivatives are not available (NaN)."""
    E = inner(l_jet.d_u, l_jet.d_u)
    E_u = 2 * inner(l_jet.d_uu, l_jet.d_u)
    E_v = 2 * inner(l_jet.d_uv, l_jet.d_u)
    nan = np.full_like(np.asarray(E, dtype=float), np.nan)
    return ScalarJet2(E, E_u, E_v, nan, nan, nan, l_jet.u, l_jet.v)


def residual_l_system(l_jet):
    """Both vector equations and the three pointwise constraints of the l-system."""
    E_jet = metric_from_l(l_jet)
    E, E_u, E_v = E_jet.value, E_jet.d_u, E_jet.d_v
    _check_E(E)
    a = l_jet.d_uu - l_jet.d_vv - (E_u / E) * l_jet.d_u + (E_v / E) * l_jet.d_v
    b = 2 * l_jet.d_uv - (E_v / E) * l_jet.d_u - (E_u / E) * l_jet.d_v
    G = inner(l_jet.d_v, l_jet.d_v)
    F = inner(l_jet.d_u, l_jet.d_v)
    unit = inner(l_jet.value, l_jet.value) - 1.0
    return LSystemResidual(a, b, E - G, F, unit)


def residual_r_system(r_jet, E_jet):
    """The two scalar equations for r; E_jet needs value, d_u and d_v."""
    E, E_u, E_v = E_jet.value, E_jet.d_u, E_jet.d_v
    _check_E(E)
    first = r_jet.d_uu - r_jet.d_vv - (E_u / E) * r_jet.d_u + (E_v / E) * r_jet.d_v
    second = 2 * r_jet.d_uv - (E_v / E) * r_jet.d_u - (E_u / E) * r_jet.d_v
    return first, second


@dataclass(frozen=True)
class HouseholderPair:
    A: np.ndarray
    B: np.ndarray


def _reflection(v):
    v = np.asarray(v, dtype=float)
    vv = v @ v
    if vv <= E_TOL:
        raise ValueError("cannot build a reflection from a (near) zero vector")
    return np.eye(v.size) - 2.0 * np.outer(v, v) / vv


def householder_pair(l_jet):
    """A = I - 2 l_u l_u^T / |l_u|^2 and B = I - 2 l_v l_v^T / |l_v|^2 at a single point."""
    return HouseholderPair(_reflection(l_jet.d_u), _reflection(l_jet.d_v))


def char_det(pair, mu):
    """det(mu A + B) as a function of mu = lambda^2."""
    return float(np.linalg.det(mu * pair.A + pair.B))


def char_poly(pair, mu):
    """det(mu I + A^{-1} B), the characteristic determinant of the normal form."""
    n = pair.A.shape[0]
    with np.errstate(divide="ignore"):  # exact zero pivots at the roots
        return float(np.linalg.det(mu * np.eye(n) + np.linalg.solve(pair.A, pair.B)))


def quartic_char_poly(mu):
    """The quartic (mu + 1)^4 proposed for the characteristic determinant."""
    return (mu + 1.0) ** 4


def reflection_char_poly(l_u, l_v, mu):
    """det(mu I + A B) for reflections along l_u and l_v meeting at angle theta.

    AB rotates span(l_u, l_v) by 2 theta and fixes its complement, hence
    (mu + 1)^2 (mu^2 + 2 mu cos(2 theta) + 1); on isothermal jets this is
    (mu + 1)^2 (mu - 1)^2.
    """
    l_u, l_v = np.asarray(l_u, dtype=float), np.asarray(l_v, dtype=float)
    cos_t = (l_u @ l_v) / np.sqrt((l_u @ l_u) * (l_v @ l_v))
    cos_2t = 2.0 * cos_t * cos_t - 1.0
    return (mu + 1.0) ** 2 * (mu * mu + 2.0 * mu * cos_2t + 1.0)


def householder_form(l_jet, sign=-1.0):
    """A l_uu + sign * B l_vv at a single point.

    With ``sign=-1`` this vanishes exactly when the first vector equation of the
    l-system holds under the isothermal constraints; ``sign=+1`` does not.
    """
    pair = householder_pair(l_jet)
    return pair.A @ l_jet.d_uu + sign * (pair.B @ l_jet.d_vv)
