"""Pointwise curvature of hypersurfaces of flat space via the Gauss equation.

R(X, Y)Z = g(AY, Z) AX - g(AX, Z) AY, where A is the shape operator.  Also the
semi-symmetry residual R(X, Y).R, the nullity distribution, the intrinsic Gauss
curvature of isothermal surfaces and the derivative-formula checks for surfaces
on S^3.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .envelope import ShapeData
from .geom_kernel import ScalarJet2, eval_jet2_numeric, fourth_frame_vector, inner
from .grid import GridField

AMBIGUITY_FACTOR = 1e3
ROUNDOFF_FACTOR = 1e3


@dataclass(frozen=True)
class AlgebraicCurvature:
    metric: np.ndarray
    shape_operator: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.metric, dtype=float)
        A = np.asarray(self.shape_operator, dtype=float)
        if g.shape != A.shape or g.shape not in ((2, 2), (3, 3)):
            raise ValueError("metric and shape operator must be matching 2x2 or 3x3 matrices")
        object.__setattr__(self, "metric", g)
        object.__setattr__(self, "shape_operator", A)

    @property
    def dimension(self):
        return self.metric.shape[0]

    @classmethod
    def from_shape_data(cls, s: ShapeData):
        return cls(s.metric, s.shape_operator)

    def orthonormal_frame(self):
        """Columns form a g-orthonormal basis (g^{-1/2})."""
        s, Q = np.linalg.eigh(self.metric)
        return (Q / np.sqrt(s)) @ Q.T

    def symmetric_operator(self):
        """The shape operator in the orthonormal frame, g^{1/2} A g^{-1/2}."""
        P = self.orthonormal_frame()
        S = np.linalg.solve(P, self.shape_operator @ P)
        return 0.5 * (S + S.T)


@dataclass(frozen=True)
class NullityData:
    nullity_dim: int
    nullity_basis: list
    conullity_basis: list
    is_conullity_two: bool
    ambiguous: bool


def curvature_apply(c: AlgebraicCurvature, X, Y, Z):
    """R(X, Y)Z from the Gauss equation (coordinate tangent vectors)."""
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    n = c.dimension
    if X.shape != (n,) or Y.shape != (n,) or Z.shape != (n,):
        raise ValueError(f"tangent vectors must have dimension {n}")
    A, g = c.shape_operator, c.metric
    AX, AY = A @ X, A @ Y
    return (AY @ g @ Z) * AX - (AX @ g @ Z) * AY


def curvature_tensor(c: AlgebraicCurvature):
    """Components R[i, j, k, l] = g(R(e_i, e_j) e_k, e_l) in the g-orthonormal frame."""
    S = c.symmetric_operator()
    return np.einsum("jk,il->ijkl", S, S) - np.einsum("ik,jl->ijkl", S, S)


def semisymmetry_residual(c: AlgebraicCurvature):
    """max ||(R(X, Y).R)(Z, W)V|| over orthonormal basis vectors, divided by ||R||^2."""
    R = curvature_tensor(c)  # R(e_i,e_j)e_k = sum_l R[i,j,k,l] e_l
    norm2 = float(np.sum(R * R))
    S = c.symmetric_operator()
    # R at roundoff level (rank <= 1 operators) vanishes identically
    if norm2 <= (ROUNDOFF_FACTOR * np.finfo(float).eps * float(np.sum(S * S))) ** 2:
        return 0.0
    # (R(e_a, e_b) u)_l = sum_k u_k R[a,b,k,l]
    t1 = np.einsum("zwvp,abpl->abzwvl", R, R)  # R(X,Y)(R(Z,W)V)
    t2 = np.einsum("abzq,qwvl->abzwvl", R, R)  # R(R(X,Y)Z, W)V
    t3 = np.einsum("abwq,zqvl->abzwvl", R, R)  # R(Z, R(X,Y)W)V
    t4 = np.einsum("abvq,zwql->abzwvl", R, R)  # R(Z, W)(R(X,Y)V)
    residual = t1 - t2 - t3 - t4
    return float(np.max(np.linalg.norm(residual, axis=-1)) / norm2)


def nullity(c: AlgebraicCurvature, tol=1e-8):
    """Nullity space of the Gauss-equation curvature and its orthogonal complement.

    Bases are returned as g-orthonormal coordinate tangent vectors.
    """
    S = c.symmetric_operator()
    nu, V = np.linalg.eigh(S)
    P = c.orthonormal_frame()
    scale = np.max(np.abs(nu))
    if scale == 0.0:
        rel = np.zeros_like(nu)
    else:
        rel = np.abs(nu) / scale
    zero = rel <= tol
    ambiguous = bool(np.any((rel > tol) & (rel <= AMBIGUITY_FACTOR * tol)))
    rank = int((~zero).sum())
    vecs = [P @ V[:, k] for k in range(nu.size)]
    if rank >= 2:
        null = [vecs[k] for k in range(nu.size) if zero[k]]
        conull = [vecs[k] for k in range(nu.size) if not zero[k]]
    else:
        # rank <= 1 makes every R(X, Y) vanish
        null, conull = vecs, []
    dim = len(null)
    return NullityData(dim, null, conull, dim == c.dimension - 2 and rank == 2, ambiguous)


def sectional_curvature(c: AlgebraicCurvature, X, Y):
    g = c.metric
    num = curvature_apply(c, X, Y, Y) @ g @ X
    den = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return float(num / den)


# -- intrinsic curvature of isothermal surfaces ------------------------------


def gauss_curvature_2d(E_jet: ScalarJet2):
    """K = -(1 / 2E) Laplacian(log E) for an isothermal metric E (du^2 + dv^2)."""
    E = E_jet.value
    if np.any(E <= 0):
        raise ValueError("metric coefficient E must be positive")
    lap_log = (E_jet.d_uu + E_jet.d_vv) / E - (E_jet.d_u**2 + E_jet.d_v**2) / E**2
    return -lap_log / (2.0 * E)


def metric_jet(l_fn, u, v):
    """Analytic 2-jet of E = g(l_u, l_u) from third-order Taylor arithmetic."""
    uj, vj = jets.variables(u, v, order=3)
    l = l_fn(uj, vj)
    l_u = l.partial(0)
    E = inner(l_u, l_u)
    return ScalarJet2(E.value, E.deriv(1, 0), E.deriv(0, 1), E.deriv(2, 0), E.deriv(1, 1), E.deriv(0, 2), u, v)


def metric_jet_numeric(field: GridField, i, j):
    """2-jet of E from a sampled Vec4 field; needs two nodes of margin at (i, j)."""
    f = field.values
    l_u = (f[:, 2:, 1:-1] - f[:, :-2, 1:-1]) / (2 * field.hx)
    E = np.sum(l_u * l_u, axis=0)
    inner_field = GridField(E, field.hx, field.hy, (field.origin[0] + field.hx, field.origin[1] + field.hy))
    return eval_jet2_numeric(inner_field, i - 1, j - 1)


# -- derivative formulas of surfaces on S^3 --------------------------------------


@dataclass(frozen=True)
class DerivativeFormulaReport:
    formula_residual: float  # max over the three second-derivative formulas
    normal_residual: float  # n_u + (c/E) l_u and n_v + (c/E) l_v
    c_over_E: np.ndarray
    c0_spread: float
    extrinsic_K: np.ndarray
    n1_derivative: float  # max ||d n1||, zero when c0 != 0 per the frame relations
    n2_residual: float  # max ||d n2 + sqrt(1 + c0^2) d l||
    n_derivative: float  # max ||d n||, zero when c0 = 0


def verify_derivative_formulas(l_fn, u, v):
    """Residuals of the Gauss-Weingarten formulas of an isothermal solution l on S^3.

    ``u``, ``v`` may be arrays of sample points; n is the Hodge-dual frame vector.
    """
    uj, vj = jets.variables(np.asarray(u, float), np.asarray(v, float), order=3)
    l = l_fn(uj, vj)
    l_u, l_v = l.partial(0), l.partial(1)
    n = fourth_frame_vector(l, l_u, l_v)
    l_uu, l_uv, l_vv = l_u.partial(0), l_u.partial(1), l_v.partial(1)
    E = inner(l_u, l_u)
    c = inner(l_uu, n)

    L, Lu, Lv = l.value, l_u.value, l_v.value
    Luu, Luv, Lvv = l_uu.value, l_uv.value, l_vv.value
    N, Ev, Cv = n.value, E.value, c.value
    E_u = 2 * inner(Luu, Lu)
    E_v = 2 * inner(Luv, Lu)
    r1 = Luu - (E_u / (2 * Ev) * Lu - E_v / (2 * Ev) * Lv - Ev * L + Cv * N)
    r2 = Luv - (E_v / (2 * Ev) * Lu + E_u / (2 * Ev) * Lv)
    r3 = Lvv - (-E_u / (2 * Ev) * Lu + E_v / (2 * Ev) * Lv - Ev * L + Cv * N)
    scale = np.maximum(Ev, 1.0)
    formula = max(float(np.max(np.linalg.norm(r, axis=0) / scale)) for r in (r1, r2, r3))

    n_u, n_v = n.grad(0), n.grad(1)
    k = Cv / Ev
    normal = max(
        float(np.max(np.linalg.norm(n_u + k * Lu, axis=0))),
        float(np.max(np.linalg.norm(n_v + k * Lv, axis=0))),
    )

    c_jet = inner(l_uu, n)
    E1 = E.truncate(1)
    root = jets.sqrt(c_jet * c_jet + E1 * E1)
    lt = l.truncate(1)
    nt = n.truncate(1)
    n1 = (lt * c_jet + nt * E1) / root
    n2 = (-(lt * E1) + nt * c_jet) / root
    kk = np.sqrt(1 + k * k)
    n1_d = max(float(np.max(np.linalg.norm(n1.grad(i), axis=0))) for i in (0, 1))
    n2_r = max(float(np.max(np.linalg.norm(n2.grad(i) + kk * l.grad(i), axis=0))) for i in (0, 1))
    n_d = max(float(np.max(np.linalg.norm(n.grad(i), axis=0))) for i in (0, 1))

    k_arr = np.atleast_1d(k)
    return DerivativeFormulaReport(
        formula_residual=formula,
        normal_residual=normal,
        c_over_E=k_arr,
        c0_spread=float(np.max(k_arr) - np.min(k_arr)),
        extrinsic_K=1.0 + k_arr**2,
        n1_derivative=n1_d,
        n2_residual=n2_r,
        n_derivative=n_d,
    )
