"""First-order jets of n-dimensional submanifolds and of sections, and maps between them."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonRegularInChart, SingularTransition
from .polynomial import PolynomialScalarField

MAX_CONDITION = 1e12
REGULARITY_TOL = 1e-9


@dataclass(frozen=True)
class ChartPartition:
    """Which coordinates play the base role x^a and which the fibre role y^i."""

    m: int
    base_indices: tuple
    fiber_indices: tuple = None

    def __post_init__(self):
        base = tuple(int(i) for i in self.base_indices)
        if self.fiber_indices is None:
            fiber = tuple(i for i in range(self.m) if i not in base)
        else:
            fiber = tuple(int(i) for i in self.fiber_indices)
        n = len(base)
        if not 1 <= n < self.m:
            raise ValueError(f"need 1 <= n < m, got n={n}, m={self.m}")
        if sorted(base + fiber) != list(range(self.m)):
            raise ValueError("base and fiber indices must partition range(m)")
        object.__setattr__(self, "base_indices", base)
        object.__setattr__(self, "fiber_indices", fiber)

    @property
    def n(self):
        return len(self.base_indices)

    @classmethod
    def leading(cls, m, n):
        return cls(m, tuple(range(n)))


@dataclass(frozen=True)
class SubmanifoldJet:
    partition: ChartPartition
    point: np.ndarray
    slopes: np.ndarray

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        slopes = np.asarray(self.slopes, dtype=float)
        p = self.partition
        if slopes.ndim == 1 and p.n == 1:
            slopes = slopes[:, None]
        if point.shape != (p.m,):
            raise ValueError(f"point must have {p.m} coordinates")
        if slopes.shape != (p.m - p.n, p.n):
            raise ValueError(f"slopes must have shape {(p.m - p.n, p.n)}, got {slopes.shape}")
        if not (np.all(np.isfinite(point)) and np.all(np.isfinite(slopes))):
            raise ValueError("jet entries must be finite")
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "slopes", slopes)


@dataclass(frozen=True)
class SectionJet:
    sigma: np.ndarray
    point: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        sigma = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        point = np.asarray(self.point, dtype=float)
        vel = np.asarray(self.velocity, dtype=float)
        if vel.ndim == 1:
            vel = vel[:, None]
        if vel.shape != (point.size, sigma.size):
            raise ValueError(f"velocity must have shape {(point.size, sigma.size)}")
        for arr in (sigma, point, vel):
            if not np.all(np.isfinite(arr)):
                raise ValueError("jet entries must be finite")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "velocity", vel)


@dataclass(frozen=True)
class ChartTransition:
    """Coordinate change z -> z' with its Jacobian dz'/dz.

    ``target`` is the partition of the new chart (defaults to the source's
    index layout).  ``domain`` optionally bounds the source coordinates by
    ``(lower, upper)`` arrays.
    """

    forward: object
    jacobian: object
    description: str = ""
    target: ChartPartition = None
    domain: tuple = None
    inverse_fn: object = field(default=None, repr=False)

    def check_domain(self, z):
        if self.domain is None:
            return
        lo, hi = (np.asarray(b, dtype=float) for b in self.domain)
        if np.any(z < lo) or np.any(z > hi):
            raise DomainError(f"{self.description or 'transition'} evaluated outside its domain at {z}")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        self.check_domain(z)
        return np.asarray(self.forward(z), dtype=float)

    def jac(self, z):
        z = np.asarray(z, dtype=float)
        self.check_domain(z)
        return np.asarray(self.jacobian(z), dtype=float)

    def then(self, other):
        """The composite chart change: first ``self``, then ``other``."""
        def forward(z):
            return other(self(z))

        def jacobian(z):
            return other.jac(self(z)) @ self.jac(z)

        inverse_fn = None
        if self.inverse_fn is not None and other.inverse_fn is not None:
            def inverse_fn():
                return other.inverse().then(self.inverse())
        return ChartTransition(forward, jacobian,
                               f"({self.description}) then ({other.description})",
                               target=other.target, inverse_fn=inverse_fn)

    def inverse(self):
        if self.inverse_fn is None:
            raise NotImplementedError(f"no inverse known for {self.description!r}")
        return self.inverse_fn()


# catalog

def identity_transition(m):
    eye = np.eye(m)
    t = ChartTransition(lambda z: np.array(z, dtype=float), lambda z: eye, "identity",
                        inverse_fn=lambda: identity_transition(m))
    return t


def affine_transition(matrix, offset=None, description="affine"):
    """z' = M z + b."""
    M = np.asarray(matrix, dtype=float)
    m = M.shape[0]
    b = np.zeros(m) if offset is None else np.asarray(offset, dtype=float)

    def inverse():
        Minv = np.linalg.inv(M)
        return affine_transition(Minv, -Minv @ b, f"inverse of {description}")

    return ChartTransition(lambda z: M @ z + b, lambda z: M, description,
                           inverse_fn=inverse)


def swap_transition(m, i, j):
    P = np.eye(m)
    P[[i, j]] = P[[j, i]]
    return affine_transition(P, description=f"swap {i}<->{j}")


def lorentz_boost(m, rapidity=None, ch=None, sh=None, axis=1):
    """Boost mixing coordinate 0 with ``axis``; pass a rapidity or (ch, sh)."""
    if rapidity is not None:
        ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    if ch is None or sh is None:
        raise ValueError("give either a rapidity or both ch and sh")
    B = np.eye(m)
    B[0, 0] = B[axis, axis] = ch
    B[0, axis] = B[axis, 0] = -sh
    return affine_transition(B, description=f"boost ch={ch:g} sh={sh:g}")


def polynomial_transition(components, description="polynomial", domain=None):
    """z'^A = P^A(z) for polynomial components; Jacobian by exact differentiation."""
    comps = list(components)
    m = len(comps)
    jac_polys = [[p.diff(k) for k in range(m)] for p in comps]

    def forward(z):
        return np.array([p(z) for p in comps], dtype=float)

    def jacobian(z):
        return np.array([[d(z) for d in row] for row in jac_polys], dtype=float)

    return ChartTransition(forward, jacobian, description, domain=domain)


def shear_transition(m, target, source, coefficient, power=2):
    """z'^target = z^target + c (z^source)^power; other coordinates unchanged.

    Invertible for any coefficient; its inverse subtracts the same term.
    """
    def build(c, desc):
        comps = []
        for a in range(m):
            p = PolynomialScalarField.coordinate(m, a)
            if a == target:
                exps = [0] * m
                exps[source] += power
                p = p + PolynomialScalarField(m, {tuple(exps): c})
            comps.append(p)
        t = polynomial_transition(comps, desc)
        return ChartTransition(t.forward, t.jacobian, desc,
                               inverse_fn=lambda: build(-c, f"inverse of {desc}"))

    if target == source:
        raise ValueError("shear needs distinct target and source coordinates")
    return build(coefficient, f"shear z{target} += {coefficient:g} z{source}^{power}")


# operations

def _checked_inverse(M, what):
    cond = np.linalg.cond(M)
    if not cond < MAX_CONDITION:
        raise SingularTransition(f"{what} is numerically singular (condition {cond:.3g})")
    return np.linalg.inv(M)


def transform_jet(jet, t):
    """Slopes in the new chart: (dy'/dy Y + dy'/dx) (dx'/dy Y + dx'/dx)^-1."""
    src = jet.partition
    dst = t.target or src
    if dst.m != src.m or dst.n != src.n:
        raise ValueError("target partition must have the same m and n")
    z = jet.point
    J = t.jac(z)
    xb, yb = list(src.base_indices), list(src.fiber_indices)
    xt, yt = list(dst.base_indices), list(dst.fiber_indices)
    # tangent vectors of the submanifold in source coordinates, columns a = 1..n
    M = J[np.ix_(xt, yb)] @ jet.slopes + J[np.ix_(xt, xb)]
    Minv = _checked_inverse(M, "base block M of the transition")
    num = J[np.ix_(yt, yb)] @ jet.slopes + J[np.ix_(yt, xb)]
    return SubmanifoldJet(dst, t(z), num @ Minv)


def transform_section_jet(jet, t):
    """Velocity transforms with the Jacobian: z'_mu = (dz'/dz) z_mu."""
    return SectionJet(jet.sigma, t(jet.point), t.jac(jet.point) @ jet.velocity)


def is_regular(jet, tol=REGULARITY_TOL):
    if not tol > 0:
        raise ValueError("tol must be positive")
    sv = np.linalg.svd(jet.velocity, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return False
    return bool(sv[-1] > tol * sv[0])


def section_to_submanifold(jet, partition, tol=REGULARITY_TOL):
    """Slopes y^i_a = y^i_mu (x^-1)^mu_a read off a section jet in ``partition``."""
    V = jet.velocity
    if V.shape[0] != partition.m or V.shape[1] != partition.n:
        raise ValueError("velocity shape does not match the partition")
    X = V[list(partition.base_indices)]
    Y = V[list(partition.fiber_indices)]
    scale = np.linalg.norm(V, 2)
    sv = np.linalg.svd(X, compute_uv=False)
    if scale == 0 or not sv[-1] > tol * scale:
        raise NonRegularInChart(
            "base block of the velocity is singular in this chart; try another partition")
    slopes = np.linalg.solve(X.T, Y.T).T
    return SubmanifoldJet(partition, jet.point, slopes)


def submanifold_to_sections(jet, base_velocity, sigma=None):
    """A section jet over ``jet`` with the given x-block of the velocity."""
    p = jet.partition
    X = np.atleast_2d(np.asarray(base_velocity, dtype=float))
    if X.shape != (p.n, p.n):
        raise ValueError(f"base_velocity must be {p.n} x {p.n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("base_velocity entries must be finite")
    V = np.empty((p.m, p.n))
    V[list(p.base_indices)] = X
    V[list(p.fiber_indices)] = jet.slopes @ X
    sigma = np.zeros(p.n) if sigma is None else sigma
    return SectionJet(sigma, jet.point, V)


def three_velocity(four_velocity, time_index=0):
    """n = 1 shortcut: q^i_0 = q^i_tau / q^0_tau."""
    v = np.asarray(four_velocity, dtype=float)
    m = v.size
    part = ChartPartition(m, (time_index,))
    jet = section_to_submanifold(SectionJet(0.0, np.zeros(m), v), part)
    return jet.slopes[:, 0]
