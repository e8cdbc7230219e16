"""Forward-mode differentiation with (nestable) dual numbers.

A :class:`Dual` holds a primal part and a single tangent part.  Either part
may itself be a ``Dual``, which gives exact second derivatives by nesting,
or a numpy array, which evaluates many points (or many seed directions) in
one pass.
"""

import numpy as np


class Dual:
    __slots__ = ("real", "eps")
    # make ndarray <op> Dual defer to the reflected Dual method
    __array_ufunc__ = None

    def __init__(self, real, eps=0.0):
        self.real = real
        self.eps = eps

    def __repr__(self):
        return f"Dual({self.real!r}, {self.eps!r})"

    def __neg__(self):
        return Dual(-self.real, -self.eps)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.real + other.real, self.eps + other.eps)
        return Dual(self.real + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.real - other.real, self.eps - other.eps)
        return Dual(self.real - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.real, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.real * other.real,
                        self.real * other.eps + self.eps * other.real)
        return Dual(self.real * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.real
            q = self.real * inv
            return Dual(q, (self.eps - q * other.eps) * inv)
        return Dual(self.real / other, self.eps / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.real
        q = other * inv
        return Dual(q, -q * inv * self.eps)

    def __pow__(self, p):
        if isinstance(p, Dual):
            raise TypeError("Dual exponents are not supported")
        if isinstance(p, (int, np.integer)):
            if p == 0:
                return Dual(self.real * 0.0 + 1.0, self.eps * 0.0)
            if p == 1:
                return self
            if p > 1:
                # repeated multiplication keeps integer powers exact at zero
                lower = self ** (p - 1)
                return Dual(lower.real * self.real,
                            p * lower.real * self.eps)
        lower = self.real ** (p - 1)
        return Dual(lower * self.real, p * lower * self.eps)


def primal(x):
    """Strip every tangent level and return the underlying value."""
    while isinstance(x, Dual):
        x = x.real
    return x


def sqrt(x):
    if isinstance(x, Dual):
        return x ** 0.5
    return np.sqrt(x)


def seed(x, direction):
    """Wrap the components of ``x`` into duals carrying ``direction``."""
    return [Dual(xi, di) for xi, di in zip(x, direction)]


def tangent(y):
    return y.eps if isinstance(y, Dual) else 0.0 * y


def directional_derivative(f, x, u):
    """d/dt f(x + t u) at t = 0.

    ``x`` and ``u`` are sequences of equal length whose entries may be scalars
    or broadcast-compatible arrays.  ``f`` receives a list of duals.
    """
    return tangent(f(seed(x, u)))


def second_directional_derivative(f, x, u, w):
    """d^2/ds dt f(x + s u + t w) at s = t = 0, by nesting two dual levels."""
    inner = [Dual(xi, ui) for xi, ui in zip(x, u)]
    outer = [Dual(xi, Dual(wi, 0.0 * wi)) for xi, wi in zip(inner, w)]
    y = f(outer)
    return tangent(tangent(y)) if isinstance(y, Dual) else 0.0 * y


def gradient(f, x):
    x = [np.asarray(xi, dtype=float) for xi in x]
    k = len(x)
    out = []
    for i in range(k):
        u = [np.ones_like(xi) if j == i else np.zeros_like(xi)
             for j, xi in enumerate(x)]
        out.append(directional_derivative(f, x, u))
    return np.array(out)


def hessian(f, x):
    """Full Hessian matrix (leading two axes) by nested forward mode."""
    x = [np.asarray(xi, dtype=float) for xi in x]
    k = len(x)
    basis = [[np.ones_like(xi) if j == i else np.zeros_like(xi)
              for j, xi in enumerate(x)] for i in range(k)]
    rows = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            hij = second_directional_derivative(f, x, basis[i], basis[j])
            rows[i][j] = rows[j][i] = hij
    return np.array(rows)


def central_difference(f, x, i, h=1e-5):
    """Finite-difference oracle for the i-th partial of a plain function."""
    xp = np.array(x, dtype=float)
    xm = xp.copy()
    xp[i] += h
    xm[i] -= h
    return (f(xp) - f(xm)) / (2.0 * h)


def central_difference_hessian(f, x, h=1e-5):
    """Second partials by central differences of the function values."""
    x = np.asarray(x, dtype=float)
    k = x.size
    H = np.empty((k, k))
    f0 = f(x)
    for i in range(k):
        for j in range(i, k):
            if i == j:
                xp = x.copy(); xp[i] += h
                xm = x.copy(); xm[i] -= h
                H[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / h**2
            else:
                pp = x.copy(); pp[i] += h; pp[j] += h
                pm = x.copy(); pm[i] += h; pm[j] -= h
                mp = x.copy(); mp[i] -= h; mp[j] += h
                mm = x.copy(); mm[i] -= h; mm[j] -= h
                H[i, j] = H[j, i] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h)
    return H


def nested_pairs(f, x, u, w):
    """Evaluate many (u_p, w_p) seed pairs in one nested pass.

    ``u`` and ``w`` are lists (one entry per input of ``f``) of arrays whose
    leading axis enumerates the pairs.  Returns ``(D_u f, D_w D_u f)`` with
    that leading axis; trailing axes broadcast against the entries of ``x``.
    """
    args = [Dual(Dual(xi, ui), Dual(wi, 0.0 * wi)) for xi, ui, wi in zip(x, u, w)]
    y = f(args)
    if not isinstance(y, Dual):
        z = 0.0 * np.asarray(u[0], dtype=float)
        return z, z
    first = tangent(y.real)
    second = tangent(y.eps)
    return first, second
