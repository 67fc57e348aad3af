import math
from functools import partial

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from biumbilical import closed_forms as cf
from biumbilical import curvature as cv
from biumbilical import envelope as ev
from biumbilical.grid import GridField
from oracles import brute_force_semisymmetry

P = cf.SolutionParams(0.6, 0.8, 1.0, 1.0, 1.0, 1.0)
mat3 = arrays(float, (3, 3), elements=st.floats(-2, 2))


def _spd(M):
    return M @ M.T + 0.5 * np.eye(3)


def _sym(M):
    return 0.5 * (M + M.T)


def _closed_form_curvature(x, y, w):
    s = ev.shape_data(ev.hypersurface_jet(partial(cf.hypersurface_X_compact, P), x, y, w))
    return s, cv.AlgebraicCurvature.from_shape_data(s)


@given(mat3, mat3)
def test_semisymmetry_tensor_route_matches_brute_force(M, S):
    g = _spd(M)
    A = np.linalg.solve(g, _sym(S))  # g-self-adjoint
    c = cv.AlgebraicCurvature(g, A)
    R = cv.curvature_tensor(c)
    assume(np.sum(R * R) > 1e-12 * np.sum(A * A) ** 2)
    assert cv.semisymmetry_residual(c) == pytest.approx(brute_force_semisymmetry(g, A), abs=1e-9)


@given(mat3, st.floats(0.2, 3), st.floats(0.2, 3))
def test_conullity_two_is_semisymmetric(M, n1, n2):
    Q, _ = np.linalg.qr(M + 3 * np.eye(3))
    A = Q @ np.diag([n1, -n2, 0.0]) @ Q.T
    c = cv.AlgebraicCurvature(np.eye(3), A)
    assert brute_force_semisymmetry(np.eye(3), A) <= 1e-12
    assert cv.semisymmetry_residual(c) <= 1e-12


def test_generic_rank_three_is_not_semisymmetric():
    A = np.diag([1.0, 2.0, -3.0])
    assert brute_force_semisymmetry(np.eye(3), A) > 1e-2
    assert cv.semisymmetry_residual(cv.AlgebraicCurvature(np.eye(3), A)) > 1e-2


def test_rank_one_operator_has_zero_residual():
    c = cv.AlgebraicCurvature(np.eye(3), np.ones((3, 3)))
    assert cv.semisymmetry_residual(c) == 0.0


def test_two_dimensional_curvature_is_semisymmetric():
    c = cv.AlgebraicCurvature(np.diag([1.0, 2.0]), np.array([[1.0, 0.3], [0.15, 2.0]]))
    assert cv.semisymmetry_residual(c) < 1e-14


def test_unit_sphere_curvature_operator():
    c = cv.AlgebraicCurvature(np.eye(2), np.eye(2))
    X, Y, Z = np.array([1.0, 0]), np.array([0, 1.0]), np.array([0.3, 0.7])
    np.testing.assert_allclose(cv.curvature_apply(c, X, Y, Z), (Y @ Z) * X - (X @ Z) * Y)
    assert cv.sectional_curvature(c, X, Y) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        cv.curvature_apply(c, np.ones(3), Y, Z)


@given(mat3, mat3, arrays(float, (4, 3), elements=st.floats(-1, 1)))
def test_curvature_symmetries(M, S, V):
    g = _spd(M)
    c = cv.AlgebraicCurvature(g, np.linalg.solve(g, _sym(S)))
    X, Y, Z, W = V
    R = partial(cv.curvature_apply, c)
    np.testing.assert_allclose(R(X, Y, Z), -R(Y, X, Z), atol=1e-10)
    np.testing.assert_allclose(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y), 0.0, atol=1e-10)
    assert R(X, Y, Z) @ g @ W == pytest.approx(-(R(X, Y, W) @ g @ Z), abs=1e-10)


def test_kernel_direction_kills_curvature():
    A = np.diag([2.0, 2.0, 0.0])
    c = cv.AlgebraicCurvature(np.eye(3), A)
    e = np.eye(3)
    for Y in e:
        for Z in e:
            np.testing.assert_array_equal(cv.curvature_apply(c, e[2], Y, Z), 0.0)


def test_nullity_cases():
    nd = cv.nullity(cv.AlgebraicCurvature(np.eye(3), np.diag([2.0, 2.0, 0.0])))
    assert nd.nullity_dim == 1 and nd.is_conullity_two and not nd.ambiguous
    np.testing.assert_allclose(np.abs(nd.nullity_basis[0]), [0, 0, 1])
    assert cv.nullity(cv.AlgebraicCurvature(np.eye(2), np.eye(2))).nullity_dim == 0
    nd = cv.nullity(cv.AlgebraicCurvature(np.eye(3), np.zeros((3, 3))))
    assert nd.nullity_dim == 3 and not nd.is_conullity_two
    assert cv.nullity(cv.AlgebraicCurvature(np.eye(3), np.diag([1.0, 0.0, 0.0]))).nullity_dim == 3
    assert cv.nullity(cv.AlgebraicCurvature(np.eye(3), np.diag([1.0, 1.0, 1e-6]))).ambiguous


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        cv.AlgebraicCurvature(np.eye(3), np.eye(2))


@pytest.mark.parametrize("x, y, w", [(0.3, 0.5, 0.2), (-1.1, 2.0, -0.8), (1.5, -2.5, 1.3)])
def test_closed_form_nullity_is_the_ruling(x, y, w):
    s, c = _closed_form_curvature(x, y, w)
    nd = cv.nullity(c)
    assert nd.nullity_dim == 1 and nd.is_conullity_two
    v = nd.nullity_basis[0]
    assert abs(v[0]) + abs(v[1]) < 1e-9 * abs(v[2])
    assert cv.semisymmetry_residual(c) < 1e-12


def test_conullity_sectional_curvature_is_eigenvalue_product():
    s, c = _closed_form_curvature(0.4, 0.1, 0.6)
    X, Y = s.eigenvectors[:, 0], s.eigenvectors[:, 1]
    K = cv.sectional_curvature(c, X, Y)
    assert K == pytest.approx(s.eigenvalues[0] * s.eigenvalues[1], rel=1e-10)
    assert K == pytest.approx(s.eigenvalues[0] ** 2, rel=1e-8)


@given(st.floats(-2.5, 2.5), st.floats(-3, 3), st.floats(0.1, 1.45))
def test_gauss_curvature_of_isothermal_sphere(x, y, t):
    p = cf.SolutionParams.from_angle(t)
    K = cv.gauss_curvature_2d(cv.metric_jet(partial(cf.sphere_l, p), x, y))
    assert K == pytest.approx(1 + p.b**2 / p.a**2, rel=1e-10)
    assert 1 / math.sqrt(K) == pytest.approx(p.a, rel=1e-10)


def test_great_sphere_has_unit_curvature():
    K = cv.gauss_curvature_2d(cv.metric_jet(partial(cf.sphere_l, cf.SolutionParams(1.0, 0.0)), 0.7, 0.3))
    assert K == pytest.approx(1.0, abs=1e-13)


def test_gauss_curvature_from_sampled_field():
    p = cf.SolutionParams(0.6, 0.8)
    field = GridField.sample(partial(cf.sphere_l, p), (-0.5, 0.5), (-0.5, 0.5), 201, 201)
    K = cv.gauss_curvature_2d(cv.metric_jet_numeric(field, 100, 100))
    assert K == pytest.approx(1 / 0.36, rel=1e-4)


def test_gauss_curvature_needs_positive_E():
    from biumbilical.geom_kernel import ScalarJet2

    with pytest.raises(ValueError):
        cv.gauss_curvature_2d(ScalarJet2(0.0, 0, 0, 0, 0, 0))


def test_derivative_formulas_on_sphere():
    p = cf.SolutionParams(0.6, 0.8)
    x = np.linspace(-2, 2, 9)
    d = cv.verify_derivative_formulas(partial(cf.sphere_l, p), x, 0.4 + 0 * x)
    assert d.formula_residual < 1e-12 and d.normal_residual < 1e-12
    np.testing.assert_allclose(np.abs(d.c_over_E), p.b / p.a, rtol=1e-12)
    np.testing.assert_allclose(d.extrinsic_K, 1 / p.a**2, rtol=1e-12)
    assert d.c0_spread < 1e-12 and d.n1_derivative < 1e-12 and d.n2_residual < 1e-12


def test_derivative_formulas_great_sphere_has_constant_normal():
    d = cv.verify_derivative_formulas(partial(cf.sphere_l, cf.SolutionParams(1.0, 0.0)), 0.3, 0.8)
    np.testing.assert_allclose(d.c_over_E, 0.0, atol=1e-15)
    assert d.n_derivative < 1e-14
