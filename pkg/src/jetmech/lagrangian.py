"""The gauge-invariant relativistic Lagrangian G^(1/2N) + A(q).q_tau and its variational derivatives."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import simpson

from .autodiff import nested_pairs, primal
from .errors import NonPositiveG
from .fields import OneFormField, SymmetricTensorField


@dataclass(frozen=True)
class TrajectoryState:
    tau: float
    q: np.ndarray
    q_tau: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        v = np.asarray(self.q_tau, dtype=float)
        if q.shape != v.shape:
            raise ValueError("q and q_tau must have the same shape")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(v))
                and np.isfinite(self.tau)):
            raise ValueError("trajectory state entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q_tau", v)
        object.__setattr__(self, "tau", float(self.tau))


class RelativisticLagrangian:
    """L = G^(1/2N) + q_tau^mu A_mu(q), defined where G > 0."""

    def __init__(self, G: SymmetricTensorField, A: OneFormField = None):
        if A is None:
            A = OneFormField.zero(G.dimension)
        if G.dimension != A.dimension:
            raise ValueError(
                f"G has dimension {G.dimension} but A has {A.dimension}")
        self.G = G
        self.A = A

    @property
    def N(self):
        return self.G.N

    @property
    def dimension(self):
        return self.G.dimension

    def __repr__(self):
        return f"RelativisticLagrangian(m={self.dimension}, N={self.N})"

    def density(self, q, v):
        """Density value; generic over floats, arrays and duals, no domain check."""
        g = self.G.contract(q, v)
        return g ** (1.0 / (2 * self.N)) + self.A.pair(q, v)

    @cached_property
    def _A_constant(self):
        return all(c.is_constant() for c in self.A.components)

    @cached_property
    def _uniform_F(self):
        """Field strength if A is affine in q (then F is constant), else None."""
        if all(c.degree <= 1 for c in self.A.components):
            return self.A.field_strength(np.zeros(self.dimension))
        return None

    @cached_property
    def _constant_mass(self):
        """(W, cond(W), W^-1) when the mass matrix does not depend on the state."""
        if self.N == 1 and self.G.is_constant:
            W = self.G.dense(np.zeros(self.dimension))
            cond = np.linalg.cond(W)
            inv = np.linalg.inv(W) if cond < 1e12 else None
            return W, cond, inv
        return None


def eval_G(G, q, v):
    return G.contract(np.asarray(q, dtype=float), np.asarray(v, dtype=float))


def _require_positive(g, what="G"):
    g = np.asarray(primal(g))
    if np.any(~(g > 0)):
        raise NonPositiveG(f"{what} must be positive, got min {float(np.min(g)):.6g}")


def eval_lagrangian(L, s):
    g = eval_G(L.G, s.q, s.q_tau)
    _require_positive(g)
    return float(g ** (1.0 / (2 * L.N)) + L.A.pair(s.q, s.q_tau))


def _split(L, x):
    m = L.dimension
    return L.density(x[:m], x[m:])


def variational_derivative(L, q, v, a):
    """Euler-Lagrange covector d_lam L - d_tau (dL/dv^lam).

    ``q``, ``v``, ``a`` have shape ``(m,)`` or ``(m, batch)``.  The total
    derivative is the directional derivative of dL/dv^lam along (v, a),
    obtained with one nested dual pass per component.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    a = np.asarray(a, dtype=float)
    m = L.dimension
    _require_positive(L.G.contract(q, v))
    batch = q.shape[1:]
    x = list(q) + list(v)
    eye = np.eye(2 * m).reshape((2 * m, 2 * m) + (1,) * len(batch))
    u = [eye[:, k] for k in range(2 * m)]
    flow = np.concatenate([v, a])
    w = [np.broadcast_to(fk, (2 * m,) + batch) for fk in flow]
    first, second = nested_pairs(lambda y: _split(L, y), x, u, w)
    first = np.broadcast_to(first, (2 * m,) + batch)
    second = np.broadcast_to(second, (2 * m,) + batch)
    return first[:m] - second[m:]


def noether_defect(L, q, v, a):
    """q_tau^lam E_lam; vanishes identically for every Lagrangian of this family."""
    E = variational_derivative(L, q, v, a)
    return np.sum(np.asarray(v, dtype=float) * E, axis=0)


class _Kinematics:
    """Dense tensor contractions shared by eval_E, mass_matrix and acceleration."""

    __slots__ = ("g", "P", "Gvv", "D")

    def __init__(self, L, q, v):
        G = L.G
        N = L.N
        T = G.dense(q)
        for _ in range(2 * N - 2):
            T = T @ v
        self.Gvv = T                      # G_{b m a3..} v^a3..
        self.P = T @ v                    # G_{b a2..} v^a2..
        self.g = float(self.P @ v)
        if G.is_constant:
            self.D = None
        else:
            D = G.dense_gradient(q)
            for _ in range(2 * N - 1):
                D = D @ v
            self.D = D                    # D[k, b] = d_k G_{b a2..} v^a2..


def _force_terms(L, kin, q, v):
    """Acceleration-free part of E: the dG bracket plus the Lorentz-type term."""
    N = L.N
    m = L.dimension
    rhs = np.zeros(m)
    if kin.D is not None:
        rhs += kin.D @ v / (2 * N) - kin.D.T @ v
    if not L._A_constant:
        F = L._uniform_F
        if F is None:
            F = L.A.field_strength(q)
        rhs += kin.g ** (1.0 - 1.0 / (2 * N)) * (F @ v)
    return rhs


def eval_E(L, s, q_tautau):
    """Components E_beta of the relativistic equation at a state and acceleration."""
    q, v = s.q, s.q_tau
    kin = _Kinematics(L, q, v)
    _require_positive(kin.g)
    W = (2 * L.N - 1) * kin.Gvv
    return _force_terms(L, kin, q, v) - W @ np.asarray(q_tautau, dtype=float)


def projector_form(L, s, q_tautau):
    """E_beta [delta^beta_lam - q^beta G_lam.. v.. / G] G^(1/2N - 1).

    Equals the Euler-Lagrange covector identically; used as a cross-check.
    """
    kin = _Kinematics(L, s.q, s.q_tau)
    _require_positive(kin.g)
    E = eval_E(L, s, q_tautau)
    proj = E - (s.q_tau @ E) * kin.P / kin.g
    return proj * kin.g ** (1.0 / (2 * L.N) - 1.0)


def field_strength(L, q):
    return L.A.field_strength(np.asarray(q, dtype=float))


# action integrals and reparametrization

@dataclass
class Path:
    """A parametrized curve on [a, b] with its velocity, both vectorized in tau."""

    position: object
    velocity: object
    a: float
    b: float


@dataclass
class Reparametrization:
    """Monotone map phi from [a, b] onto the parameter interval of a path."""

    phi: object
    dphi: object
    a: float
    b: float


def action(L, path, panels=10_000):
    """Composite Simpson estimate of the action integral along ``path``.

    Points where G vanishes exactly contribute zero (the density is
    degree-1 homogeneous in the velocity); negative G is an error.
    """
    if panels % 2:
        panels += 1
    tau = np.linspace(path.a, path.b, panels + 1)
    q = np.asarray(path.position(tau), dtype=float)
    v = np.asarray(path.velocity(tau), dtype=float)
    g = L.G.contract(q, v)
    g = np.broadcast_to(np.asarray(g, dtype=float), tau.shape)
    if np.any(g < 0):
        bad = int(np.argmin(g))
        raise NonPositiveG("G < 0 along path", tau=float(tau[bad]))
    dens = g ** (1.0 / (2 * L.N)) + L.A.pair(q, v)
    dens = np.broadcast_to(np.asarray(dens, dtype=float), tau.shape)
    return float(simpson(dens, x=tau))


def reparametrize(path, reparam):
    """Path sigma -> q(phi(sigma)) with velocity q'(phi(sigma)) phi'(sigma)."""

    def position(s):
        return path.position(reparam.phi(s))

    def velocity(s):
        return np.asarray(path.velocity(reparam.phi(s))) * reparam.dphi(s)

    return Path(position, velocity, reparam.a, reparam.b)


def gauge_action_invariance(L, path, reparam, panels=10_000):
    """Action of ``path`` and of its reparametrization by ``reparam``."""
    before = action(L, path, panels)
    after = action(L, reparametrize(path, reparam), panels)
    return before, after
