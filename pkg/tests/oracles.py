"""Independent reference computations used as test oracles."""
import itertools
import math

import numpy as np


def sphere_l_derivatives(a, b, x, y):
    """Hand-differentiated sphere l = (a cos y sech x, a sin y sech x, a tanh x, b)."""
    s, t = 1 / math.cosh(x), math.tanh(x)
    cy, sy = math.cos(y), math.sin(y)
    # d/dx sech = -sech tanh, d2/dx2 sech = sech (tanh^2 - sech^2), d/dx tanh = sech^2
    sp, spp = -s * t, s * (t * t - s * s)
    value = np.array([a * cy * s, a * sy * s, a * t, b])
    d_x = np.array([a * cy * sp, a * sy * sp, a * s * s, 0.0])
    d_y = np.array([-a * sy * s, a * cy * s, 0.0, 0.0])
    d_xx = np.array([a * cy * spp, a * sy * spp, -2 * a * s * s * t, 0.0])
    d_xy = np.array([-a * sy * sp, a * cy * sp, 0.0, 0.0])
    d_yy = np.array([-a * cy * s, -a * sy * s, 0.0, 0.0])
    return value, d_x, d_y, d_xx, d_xy, d_yy


def complex_step_grad(fn, point, h=1e-30):
    """First derivatives of a real-analytic fn at ``point`` by complex step."""
    point = np.asarray(point, dtype=float)
    out = []
    for i in range(point.size):
        p = point.astype(complex)
        p[i] += 1j * h
        out.append(np.imag(fn(*p)) / h)
    return np.array(out)


def central_hessian(fn, point, h=1e-4):
    point = np.asarray(point, dtype=float)
    n = point.size
    e = np.eye(n) * h
    H = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            H[i][j] = (fn(*(point + e[i] + e[j])) - fn(*(point + e[i] - e[j])) - fn(*(point - e[i] + e[j])) + fn(*(point - e[i] - e[j]))) / (4 * h * h)
    return np.array(H)


def brute_force_semisymmetry(metric, A):
    """max |(R(X,Y).R)(Z,W)V| / |R|^2 over all g-orthonormal basis vectors, by explicit loops."""
    s, Q = np.linalg.eigh(metric)
    P = (Q / np.sqrt(s)) @ Q.T
    basis = [P[:, k] for k in range(metric.shape[0])]
    g = metric

    def R(X, Y, Z):
        AX, AY = A @ X, A @ Y
        return (AY @ g @ Z) * AX - (AX @ g @ Z) * AY

    def gnorm(v):
        return math.sqrt(v @ g @ v)

    norm2 = sum(gnorm(R(X, Y, Z)) ** 2 for X, Y, Z in itertools.product(basis, repeat=3))
    if norm2 == 0:
        return 0.0
    worst = 0.0
    for X, Y, Z, W, V in itertools.product(basis, repeat=5):
        val = (
            R(X, Y, R(Z, W, V))
            - R(R(X, Y, Z), W, V)
            - R(Z, R(X, Y, W), V)
            - R(Z, W, R(X, Y, V))
        )
        worst = max(worst, gnorm(val))
    return worst / norm2


def explicit_X_reference(a, b, c0, c1, c2, c3, x, y, w):
    """Coordinate functions written out independently of the package."""
    ch = math.cosh(x)
    br = a * c0 + b * w - (b * b / a) * (c1 * math.cos(y) + c2 * math.sin(y) + c3 * math.sinh(x)) / ch
    return np.array(
        [
            math.cos(y) / ch * br + c1 / a,
            math.sin(y) / ch * br + c2 / a,
            math.sinh(x) / ch * br + c3 / a,
            -(a / b) * br + c0 / b,
        ]
    )
