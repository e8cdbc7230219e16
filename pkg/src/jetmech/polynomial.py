"""Multivariate polynomials used as coefficient functions of tensor fields."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PolynomialScalarField:
    """Sum of ``c * prod(q[k] ** e[k])`` over stored terms.

    ``terms`` maps exponent tuples to coefficients; duplicates are merged on
    construction and zero coefficients dropped.
    """

    dimension: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        merged = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.dimension:
                raise ValueError(
                    f"exponent tuple {exps} has length {len(exps)}, "
                    f"expected {self.dimension}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            merged[exps] = merged.get(exps, 0.0) + float(c)
        merged = {k: v for k, v in merged.items() if v != 0.0}
        object.__setattr__(self, "terms", merged)

    @classmethod
    def from_terms(cls, dimension, pairs):
        """Build from an iterable of ``(coefficient, exponents)`` pairs."""
        terms = {}
        for c, exps in pairs:
            exps = tuple(int(e) for e in exps)
            terms[exps] = terms.get(exps, 0.0) + float(c)
        return cls(dimension, terms)

    @classmethod
    def constant(cls, dimension, value):
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def coordinate(cls, dimension, index, scale=1.0):
        exps = [0] * dimension
        exps[index] = 1
        return cls(dimension, {tuple(exps): scale})

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def __call__(self, q):
        """Evaluate at ``q``; entries may be floats, arrays or duals."""
        total = 0.0
        for exps, c in self.terms.items():
            term = c
            for k, e in enumerate(exps):
                if e:
                    term = term * (q[k] ** e if e > 1 else q[k])
            total = term + total
        if not self.terms:
            # keep the batch shape of array inputs
            return 0.0 * np.asarray(q[0], dtype=float) if len(q) else 0.0
        return total

    def diff(self, index):
        """Exact partial derivative with respect to coordinate ``index``."""
        out = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            out[tuple(new)] = out.get(tuple(new), 0.0) + c * e
        return PolynomialScalarField(self.dimension, out)

    def __add__(self, other):
        if not isinstance(other, PolynomialScalarField):
            other = PolynomialScalarField.constant(self.dimension, other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0.0) + v
        return PolynomialScalarField(self.dimension, terms)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, PolynomialScalarField):
            return PolynomialScalarField(
                self.dimension, {k: v * other for k, v in self.terms.items()})
        terms = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                terms[k] = terms.get(k, 0.0) + va * vb
        return PolynomialScalarField(self.dimension, terms)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)


class PolynomialBank:
    """Vectorized evaluation of many polynomials sharing one monomial table.

    Used on hot paths (integration) where per-term Python loops would
    dominate.  ``values(q)`` returns every polynomial at ``q`` and
    ``gradients(q)`` their partials, shape ``(count, m)``.
    """

    def __init__(self, dimension, polynomials):
        self.dimension = dimension
        self.count = len(polynomials)
        monomials = sorted({e for p in polynomials for e in p.terms})
        if not monomials:
            monomials = [(0,) * dimension]
        self._exps = np.array(monomials, dtype=int).reshape(-1, dimension)
        index = {e: i for i, e in enumerate(monomials)}
        C = np.zeros((self.count, len(monomials)))
        for r, p in enumerate(polynomials):
            for e, c in p.terms.items():
                C[r, index[e]] = c
        self._coef = C
        self.constant = bool(np.all(self._exps == 0))
        if self.constant:
            self._const_values = C[:, 0].copy()
        # derivative tables: for each coordinate k, exponents lowered by one
        self.affine = bool(np.all(self._exps.sum(axis=1) <= 1))
        self._dexps = []
        self._dfac = []
        for k in range(dimension):
            fac = self._exps[:, k].astype(float)
            lowered = self._exps.copy()
            lowered[:, k] = np.maximum(lowered[:, k] - 1, 0)
            self._dexps.append(lowered)
            self._dfac.append(fac)
        if self.affine:
            self._const_grad = self._gradients(np.zeros(dimension))

    def _monomials(self, q, exps):
        q = np.asarray(q, dtype=float)
        return np.prod(q[None, :] ** exps, axis=1)

    def values(self, q):
        if self.constant:
            return self._const_values
        return self._coef @ self._monomials(q, self._exps)

    def gradients(self, q):
        if self.affine:
            return self._const_grad
        return self._gradients(q)

    def _gradients(self, q):
        cols = [self._coef @ (self._dfac[k] * self._monomials(q, self._dexps[k]))
                for k in range(self.dimension)]
        return np.stack(cols, axis=1)
