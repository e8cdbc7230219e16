"""Tensor fields with polynomial coefficients: the metric-like G and the one-form A."""

import itertools
from collections import Counter
from functools import cached_property
from math import factorial

import numpy as np

from .polynomial import PolynomialBank, PolynomialScalarField


def _multiplicity(index):
    """Number of distinct orderings of a sorted index tuple."""
    out = factorial(len(index))
    for c in Counter(index).values():
        out //= factorial(c)
    return out


def _as_poly(dimension, value):
    if isinstance(value, PolynomialScalarField):
        if value.dimension != dimension:
            raise ValueError("coefficient dimension mismatch")
        return value
    return PolynomialScalarField.constant(dimension, float(value))


class SymmetricTensorField:
    """Fully symmetric covariant tensor of even degree ``2N`` on R^m.

    Only non-decreasing index tuples are stored; a component given for an
    unsorted tuple is filed under its sorted form.
    """

    def __init__(self, dimension, degree, coefficients):
        if degree < 2 or degree % 2:
            raise ValueError(f"degree must be even and >= 2, got {degree}")
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = int(dimension)
        self.degree = int(degree)
        coeffs = {}
        for index, value in dict(coefficients).items():
            index = tuple(sorted(int(i) for i in index))
            if len(index) != degree or not all(0 <= i < dimension for i in index):
                raise ValueError(f"bad index tuple {index}")
            poly = _as_poly(dimension, value)
            coeffs[index] = coeffs[index] + poly if index in coeffs else poly
        self.coefficients = {k: v for k, v in coeffs.items() if not v.is_zero()}
        self._keys = sorted(self.coefficients)
        self._weights = [float(_multiplicity(k)) for k in self._keys]

    @property
    def N(self):
        return self.degree // 2

    def __repr__(self):
        return (f"SymmetricTensorField(dimension={self.dimension}, "
                f"degree={self.degree}, terms={len(self._keys)})")

    def component(self, index, q):
        """Value of G_{index}(q) for an arbitrary (unsorted) index tuple."""
        key = tuple(sorted(index))
        poly = self.coefficients.get(key)
        return 0.0 if poly is None else poly(q)

    def contract(self, q, v):
        """Full contraction G_{a1..a2N}(q) v^a1 ... v^a2N.

        Works for floats, arrays (batched along trailing axes) and duals.
        """
        total = 0.0
        for key, w in zip(self._keys, self._weights):
            term = w * self.coefficients[key](q)
            for a in key:
                term = term * v[a]
            total = term + total
        return total

    # numeric (dense) evaluation used by the integrator

    @cached_property
    def _bank(self):
        return PolynomialBank(self.dimension,
                              [self.coefficients[k] for k in self._keys])

    @cached_property
    def _gather(self):
        lookup = {k: i for i, k in enumerate(self._keys)}
        missing = len(self._keys)
        shape = (self.dimension,) * self.degree
        idx = np.full(shape, missing, dtype=int)
        for multi in itertools.product(range(self.dimension), repeat=self.degree):
            idx[multi] = lookup.get(tuple(sorted(multi)), missing)
        return idx

    def dense(self, q):
        """All m^(2N) components at ``q`` as an ndarray."""
        if self.is_constant:
            return self._dense_constant
        vals = np.append(self._bank.values(q), 0.0)
        return vals[self._gather]

    def dense_gradient(self, q):
        """Array of shape (m, m, ..., m): axis 0 is the derivative index."""
        grads = self._bank.gradients(q)  # (terms, m)
        grads = np.vstack([grads, np.zeros((1, self.dimension))])
        return np.moveaxis(grads[self._gather], -1, 0)

    @cached_property
    def is_constant(self):
        return all(p.is_constant() for p in self.coefficients.values())

    @cached_property
    def _dense_constant(self):
        vals = np.append(self._bank.values(np.zeros(self.dimension)), 0.0)
        return vals[self._gather]

    # constructors

    @classmethod
    def from_metric(cls, matrix):
        """Degree-2 field from a constant symmetric matrix."""
        g = np.asarray(matrix, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or not np.allclose(g, g.T):
            raise ValueError("metric must be a symmetric square matrix")
        m = g.shape[0]
        coeffs = {(a, b): g[a, b] for a in range(m) for b in range(a, m)
                  if g[a, b] != 0.0}
        return cls(m, 2, coeffs)

    @classmethod
    def from_dense(cls, tensor):
        """Field with constant coefficients read from a symmetric ndarray."""
        t = np.asarray(tensor, dtype=float)
        m, degree = t.shape[0], t.ndim
        coeffs = {}
        for key in itertools.combinations_with_replacement(range(m), degree):
            if t[key] != 0.0:
                coeffs[key] = t[key]
        return cls(m, degree, coeffs)


def minkowski_metric(m):
    """diag(+1, -1, ..., -1)."""
    return np.diag([1.0] + [-1.0] * (m - 1))


def minkowski(m=4):
    return SymmetricTensorField.from_metric(minkowski_metric(m))


def euclidean(m):
    return SymmetricTensorField.from_metric(np.eye(m))


def quartic_eta2(m=4):
    """Symmetrized eta (x) eta, so that G(v) = (eta(v, v))**2 with N = 2."""
    eta = minkowski_metric(m)
    coeffs = {}
    for a, b, c, d in itertools.combinations_with_replacement(range(m), 4):
        val = (eta[a, b] * eta[c, d] + eta[a, c] * eta[b, d]
               + eta[a, d] * eta[b, c]) / 3.0
        if val:
            coeffs[(a, b, c, d)] = val
    return SymmetricTensorField(m, 4, coeffs)


CATALOG = {
    "minkowski": minkowski,
    "euclidean": euclidean,
    "quartic-eta2": quartic_eta2,
}


class OneFormField:
    """Covector field A_mu(q) with polynomial components."""

    def __init__(self, components):
        comps = list(components)
        if not comps:
            raise ValueError("a one-form needs at least one component")
        dims = {c.dimension for c in comps if isinstance(c, PolynomialScalarField)}
        m = len(comps)
        if dims and dims != {m}:
            raise ValueError("component count must equal the dimension")
        self.dimension = m
        self.components = [_as_poly(m, c) for c in comps]

    def __repr__(self):
        return f"OneFormField(dimension={self.dimension})"

    def __call__(self, q):
        return [c(q) for c in self.components]

    def pair(self, q, v):
        """A_mu(q) v^mu, generic over floats, arrays and duals."""
        total = 0.0
        for mu, c in enumerate(self.components):
            if c.is_zero():
                continue
            total = c(q) * v[mu] + total
        return total

    @cached_property
    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    @cached_property
    def _bank(self):
        return PolynomialBank(self.dimension, self.components)

    def values(self, q):
        return self._bank.values(q)

    def field_strength(self, q):
        """F_{lam mu} = d_lam A_mu - d_mu A_lam as an m x m ndarray."""
        grad = self._bank.gradients(q)  # grad[mu, lam] = d_lam A_mu
        return grad.T - grad

    @classmethod
    def zero(cls, m):
        return cls([PolynomialScalarField(m, {}) for _ in range(m)])

    @classmethod
    def constant(cls, values):
        values = [float(x) for x in values]
        m = len(values)
        return cls([PolynomialScalarField.constant(m, x) for x in values])

    @classmethod
    def uniform_field(cls, F, offset=None):
        """Linear potential A_mu = offset_mu - F_{mu nu} q^nu / 2 with constant field strength F."""
        F = np.asarray(F, dtype=float)
        m = F.shape[0]
        if not np.allclose(F, -F.T):
            raise ValueError("field strength must be antisymmetric")
        offset = np.zeros(m) if offset is None else np.asarray(offset, dtype=float)
        comps = []
        for mu in range(m):
            p = PolynomialScalarField.constant(m, offset[mu])
            for nu in range(m):
                if F[mu, nu]:
                    p = p + PolynomialScalarField.coordinate(m, nu, -0.5 * F[mu, nu])
            comps.append(p)
        return cls(comps)


def field_strength_matrix(m, pairs):
    """Antisymmetric m x m matrix from ``{(lam, mu): value}`` with lam < mu."""
    F = np.zeros((m, m))
    for (a, b), val in dict(pairs).items():
        F[a, b] = val
        F[b, a] = -val
    return F


# random fields for property checks

def random_polynomial(rng, m, max_degree=2, n_terms=4, scale=0.1):
    terms = {}
    for _ in range(n_terms):
        exps = [0] * m
        deg = int(rng.integers(0, max_degree + 1))
        for _ in range(deg):
            exps[int(rng.integers(0, m))] += 1
        terms[tuple(exps)] = terms.get(tuple(exps), 0.0) + scale * rng.standard_normal()
    return PolynomialScalarField(m, terms)


def random_tensor_field(rng, m=4, N=1, scale=0.1, max_degree=2):
    """Catalog base (Minkowski for N=1, eta^2 for N=2) plus random polynomial terms."""
    if N == 1:
        base = minkowski(m)
    elif N == 2:
        base = quartic_eta2(m)
    else:
        raise ValueError("random fields are provided for N in {1, 2}")
    coeffs = dict(base.coefficients)
    keys = list(itertools.combinations_with_replacement(range(m), 2 * N))
    for _ in range(2 * m):
        key = keys[int(rng.integers(0, len(keys)))]
        extra = random_polynomial(rng, m, max_degree=max_degree, scale=scale)
        coeffs[key] = coeffs[key] + extra if key in coeffs else extra
    return SymmetricTensorField(m, 2 * N, coeffs)


def random_one_form(rng, m=4, scale=0.5, max_degree=2):
    return OneFormField([random_polynomial(rng, m, max_degree=max_degree, scale=scale)
                         for _ in range(m)])
