"""Truncated multivariate Taylor arithmetic.

A :class:`Jet` stores the Taylor coefficients of a smooth function of ``nvars``
variables up to total degree ``order`` around a base point.  Arithmetic and the
elementary functions below propagate those coefficients exactly, so evaluating a
closed-form expression on jets yields its partial derivatives to machine
precision.  Order 2 is the usual second-order dual number; order 3 is needed
when a construction itself consumes first derivatives (e.g. the envelope map)
and second derivatives of the result are wanted.

Coefficient arrays have shape ``S + (M,)`` where ``S`` is the (broadcastable)
value shape and ``M`` the number of monomials.  Vector-valued jets put the
component axis first, matching the ``(4, ...)`` layout used for Vec4 fields.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "Jet",
    "variables",
    "stack",
    "dot",
    "sin",
    "cos",
    "sinh",
    "cosh",
    "tanh",
    "exp",
    "log",
    "sqrt",
    "arctan",
]


@lru_cache(maxsize=None)
def _monomials(nvars, order):
    """Multi-indices of total degree <= order, sorted by degree then lexicographically."""
    monos = []
    for deg in range(order + 1):
        block = [a for a in itertools.product(range(deg + 1), repeat=nvars) if sum(a) == deg]
        monos.extend(sorted(block, reverse=True))
    return tuple(monos)


@lru_cache(maxsize=None)
def _index(nvars, order):
    return {m: i for i, m in enumerate(_monomials(nvars, order))}


@lru_cache(maxsize=None)
def _product_table(nvars, order):
    monos = _monomials(nvars, order)
    idx = _index(nvars, order)
    M = len(monos)
    table = np.zeros((M, M, M))
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            c = tuple(p + q for p, q in zip(a, b))
            if sum(c) <= order:
                table[i, j, idx[c]] = 1.0
    return table


@lru_cache(maxsize=None)
def _truncation(nvars, order_from, order_to):
    src = _index(nvars, order_from)
    return np.array([src[m] for m in _monomials(nvars, order_to)])


class Jet:
    """Truncated Taylor polynomial in ``nvars`` variables up to degree ``order``."""

    __array_ufunc__ = None  # make numpy scalars/arrays defer to our reflected operators

    def __init__(self, coef, nvars, order):
        self.coef = np.asarray(coef, dtype=np.result_type(coef, float))
        self.nvars = nvars
        self.order = order
        if self.coef.shape[-1] != len(_monomials(nvars, order)):
            raise ValueError("coefficient array does not match (nvars, order)")

    # -- construction -------------------------------------------------

    @classmethod
    def constant(cls, value, nvars, order):
        value = np.asarray(value)
        coef = np.zeros(value.shape + (len(_monomials(nvars, order)),), dtype=np.result_type(value, float))
        coef[..., 0] = value
        return cls(coef, nvars, order)

    def _lift(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets over different variable sets")
            return other
        return Jet.constant(other, self.nvars, self.order)

    def _common(self, other):
        other = self._lift(other)
        order = min(self.order, other.order)
        return self.truncate(order), other.truncate(order), order

    def truncate(self, order):
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.coef[..., _truncation(self.nvars, self.order, order)], self.nvars, order)

    # -- access -------------------------------------------------------

    @property
    def shape(self):
        return self.coef.shape[:-1]

    @property
    def value(self):
        return self.coef[..., 0]

    def deriv(self, *alpha):
        """Partial derivative d^alpha at the base point (alpha is a multi-index)."""
        if len(alpha) != self.nvars:
            raise ValueError(f"multi-index must have {self.nvars} entries")
        if sum(alpha) > self.order:
            raise ValueError("derivative order exceeds jet order")
        scale = math.prod(math.factorial(k) for k in alpha)
        return scale * self.coef[..., _index(self.nvars, self.order)[tuple(alpha)]]

    def grad(self, i):
        alpha = [0] * self.nvars
        alpha[i] = 1
        return self.deriv(*alpha)

    def partial(self, i):
        """The jet of d/dvar_i, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        src = _index(self.nvars, self.order)
        monos = _monomials(self.nvars, self.order - 1)
        coef = np.empty(self.shape + (len(monos),), dtype=self.coef.dtype)
        for k, m in enumerate(monos):
            up = list(m)
            up[i] += 1
            coef[..., k] = (m[i] + 1) * self.coef[..., src[tuple(up)]]
        return Jet(coef, self.nvars, self.order - 1)

    def __getitem__(self, key):
        # indexes the value axes only; the monomial axis is trailing
        return Jet(self.coef[key], self.nvars, self.order)

    def __len__(self):
        return self.shape[0]

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, shape={self.shape})"

    # -- arithmetic ---------------------------------------------------

    def __neg__(self):
        return Jet(-self.coef, self.nvars, self.order)

    def __pos__(self):
        return self

    def __add__(self, other):
        a, b, order = self._common(other)
        return Jet(a.coef + b.coef, self.nvars, order)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, order = self._common(other)
        return Jet(a.coef - b.coef, self.nvars, order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            return Jet(self.coef * other[..., None], self.nvars, self.order)
        a, b, order = self._common(other)
        table = _product_table(self.nvars, order)
        return Jet(np.einsum("...i,...j,ijk->...k", a.coef, b.coef, table, optimize=True), self.nvars, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other))
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(np.ones(self.shape), self.nvars, self.order)
            for _ in range(p):
                out = out * self
            return out
        return _compose(self, lambda c, k: _power_derivs(c, p, k))


# -- composition with univariate functions -------------------------------


def _compose(x, derivs):
    """f(x) via f(c + h) = sum_k f^(k)(c) h^k / k!, with h nilpotent."""
    c = x.value
    d = derivs(c, x.order)
    h = Jet(x.coef.copy(), x.nvars, x.order)
    h.coef[..., 0] = 0.0
    out = Jet.constant(d[0], x.nvars, x.order)
    hk = None
    for k in range(1, x.order + 1):
        hk = h if hk is None else hk * h
        out = out + hk * (d[k] / math.factorial(k))
    return out


def _power_derivs(c, p, n):
    out = []
    coeff = 1.0
    for k in range(n + 1):
        out.append(coeff * c ** (p - k))
        coeff *= p - k
    return out


def _cycle(funcs):
    def derivs(c, n):
        vals = [f(c) for f in funcs]
        return [vals[k % len(vals)] for k in range(n + 1)]

    return derivs


def _dispatch(npfunc, derivs):
    def f(x):
        if isinstance(x, Jet):
            return _compose(x, derivs)
        return npfunc(x)

    f.__name__ = npfunc.__name__
    return f


sin = _dispatch(np.sin, _cycle([np.sin, np.cos, lambda c: -np.sin(c), lambda c: -np.cos(c)]))
cos = _dispatch(np.cos, _cycle([np.cos, lambda c: -np.sin(c), lambda c: -np.cos(c), np.sin]))
sinh = _dispatch(np.sinh, _cycle([np.sinh, np.cosh]))
cosh = _dispatch(np.cosh, _cycle([np.cosh, np.sinh]))
exp = _dispatch(np.exp, lambda c, n: [np.exp(c)] * (n + 1))
log = _dispatch(
    np.log,
    lambda c, n: [np.log(c)] + [(-1) ** (k - 1) * math.factorial(k - 1) / c**k for k in range(1, n + 1)],
)


def reciprocal(x):
    if isinstance(x, Jet):
        return _compose(x, lambda c, n: [(-1) ** k * math.factorial(k) / c ** (k + 1) for k in range(n + 1)])
    return 1.0 / x


def sqrt(x):
    if isinstance(x, Jet):
        return _compose(x, lambda c, n: _power_derivs(c, 0.5, n))
    return np.sqrt(x)


def tanh(x):
    if isinstance(x, Jet):
        return sinh(x) / cosh(x)
    return np.tanh(x)


def _arctan_derivs(c, n):
    if n > 3:
        raise NotImplementedError("arctan jets are available up to order 3")
    q = 1.0 + c * c
    return [np.arctan(c), 1.0 / q, -2.0 * c / q**2, (6.0 * c * c - 2.0) / q**3][: n + 1]


arctan = _dispatch(np.arctan, _arctan_derivs)


# -- helpers -------------------------------------------------------------


def variables(*point, order=2):
    """Independent-variable jets at ``point``; each coordinate may be an array."""
    nvars = len(point)
    point = np.broadcast_arrays(*[np.asarray(p, dtype=float) for p in point])
    idx = _index(nvars, order)
    out = []
    for i, p in enumerate(point):
        jet = Jet.constant(p, nvars, order)
        if order >= 1:
            unit = [0] * nvars
            unit[i] = 1
            jet.coef[..., idx[tuple(unit)]] = 1.0
        out.append(jet)
    return out


def stack(components):
    """Stack scalar jets (or plain numbers) along a new leading axis."""
    ref = next((c for c in components if isinstance(c, Jet)), None)
    if ref is None:
        return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in components]))
    order = min(c.order for c in components if isinstance(c, Jet))
    jets = [ref._lift(c).truncate(order) if isinstance(c, Jet) else Jet.constant(c, ref.nvars, order) for c in components]
    shape = np.broadcast_shapes(*[j.coef.shape for j in jets])
    return Jet(np.stack([np.broadcast_to(j.coef, shape) for j in jets]), ref.nvars, order)


def dot(u, v):
    """Euclidean inner product over the leading (component) axis."""
    if isinstance(u, Jet) or isinstance(v, Jet):
        n = len(u) if isinstance(u, Jet) else np.shape(u)[0]
        out = u[0] * v[0]
        for i in range(1, n):
            out = out + u[i] * v[i]
        return out
    return np.sum(np.asarray(u) * np.asarray(v), axis=0)
