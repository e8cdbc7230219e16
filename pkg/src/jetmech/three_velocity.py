"""Chart-local description by three-velocities q^i_0 = dq^i/dq^0.

The reduced Lagrangian is only defined on one chart; states with a
non-positive reduced G are refused rather than moved to another chart.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicHermiteSpline

from .autodiff import nested_pairs, primal
from .dynamics import Trajectory
from .errors import NonPositiveReducedG, SingularReducedHessian
from .lagrangian import variational_derivative

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class ReducedState:
    q0: float
    qi: np.ndarray
    vi: np.ndarray

    def __post_init__(self):
        qi = np.atleast_1d(np.asarray(self.qi, dtype=float))
        vi = np.atleast_1d(np.asarray(self.vi, dtype=float))
        if qi.shape != vi.shape:
            raise ValueError("qi and vi must have the same shape")
        if not (np.all(np.isfinite(qi)) and np.all(np.isfinite(vi))
                and np.isfinite(self.q0)):
            raise ValueError("reduced state entries must be finite")
        object.__setattr__(self, "q0", float(self.q0))
        object.__setattr__(self, "qi", qi)
        object.__setattr__(self, "vi", vi)

    @property
    def q(self):
        return np.concatenate([[self.q0], self.qi])


def _reduced_G(G, q, vi):
    return G.contract(q, [1.0] + list(vi))


def reduce_G(G, s):
    """G evaluated on the velocity (1, v^1, ..., v^{m-1})."""
    return float(_reduced_G(G, s.q, s.vi))


def _reduced_density(L, x):
    m = L.dimension
    q, vi = x[:m], x[m:]
    gbar = _reduced_G(L.G, q, vi)
    out = gbar ** (1.0 / (2 * L.N))
    A = L.A
    for mu, comp in enumerate(A.components):
        if comp.is_zero():
            continue
        out = out + (comp(q) if mu == 0 else comp(q) * vi[mu - 1])
    return out


def reduced_lagrangian(L, s):
    gbar = reduce_G(L.G, s)
    if not gbar > 0:
        raise NonPositiveReducedG(
            f"reduced G = {gbar:.6g} is not positive; state is outside this chart")
    q = s.q
    A = L.A.values(q)
    return float(gbar ** (1.0 / (2 * L.N)) + A[1:] @ s.vi + A[0])


def _check_chart(L, q, vi):
    gbar = primal(_reduced_G(L.G, q, vi))
    if not np.all(np.asarray(gbar) > 0):
        raise NonPositiveReducedG(
            f"reduced G = {float(np.min(gbar)):.6g} is not positive; "
            "state is outside this chart")


def _reduced_parts(L, q, vi):
    """Return (E(0), H): E(a) = E(0) - H a is the reduced Euler-Lagrange covector.

    One batched nested pass yields the q^i gradient, the explicit part of the
    total q^0 derivative of the momenta, and the velocity Hessian.
    """
    m = L.dimension
    n = m - 1
    k = 2 * m - 1
    x = list(q) + list(vi)
    eye = np.eye(k)
    flow = np.concatenate([[1.0], vi, np.zeros(n)])
    U, W = [], []
    for i in range(n):                        # d L / d q^i
        U.append(eye[1 + i]); W.append(np.zeros(k))
    for i in range(n):                        # (d_0 + v^j d_j) dL/dv^i
        U.append(eye[m + i]); W.append(flow)
    for i in range(n):                        # d^2 L / dv^i dv^j
        for j in range(n):
            U.append(eye[m + i]); W.append(eye[m + j])
    U = np.array(U).T
    W = np.array(W).T
    first, second = nested_pairs(lambda y: _reduced_density(L, y), x, list(U), list(W))
    grad = first[:n]
    explicit = second[n:2 * n]
    H = second[2 * n:].reshape(n, n)
    return grad - explicit, H


def reduced_euler_lagrange(L, s, acc):
    """(E_i, E_0) of the reduced Lagrangian at a state and acceleration d^2q^i/dq0^2.

    E_i comes from the reduced Lagrangian; E_0 is obtained independently from
    the four-velocity operator lifted with q^0_tau = 1, so that the identity
    E_0 = -v^i E_i can be checked rather than assumed.
    """
    q, vi = s.q, s.vi
    _check_chart(L, q, vi)
    acc = np.asarray(acc, dtype=float)
    E0, H = _reduced_parts(L, q, vi)
    Ei = E0 - H @ acc
    v4 = np.concatenate([[1.0], vi])
    a4 = np.concatenate([[0.0], acc])
    full = variational_derivative(L, q, v4, a4)
    return Ei, float(full[0])


def reduced_acceleration(L, s):
    q, vi = s.q, s.vi
    _check_chart(L, q, vi)
    E0, H = _reduced_parts(L, q, vi)
    cond = np.linalg.cond(H)
    if not cond < MAX_CONDITION:
        raise SingularReducedHessian(f"velocity Hessian condition number {cond:.3g}")
    return np.linalg.solve(H, E0)


@dataclass
class ReducedTrajectory:
    q0: np.ndarray
    qi: np.ndarray
    vi: np.ndarray
    Gbar: np.ndarray

    def __len__(self):
        return len(self.q0)

    def state(self, k):
        return ReducedState(self.q0[k], self.qi[k], self.vi[k])

    def interpolate(self, q0):
        """Cubic Hermite interpolation of q^i at arbitrary chart times."""
        spline = CubicHermiteSpline(self.q0, self.qi, self.vi, axis=0)
        return spline(q0)


def integrate_reduced(L, initial, step, span):
    """RK4 in the chart time q^0 for (q^i, v^i) over ``span``."""
    n = int(np.floor(span / abs(step) + 1e-9))
    q0s = initial.q0 + step * np.arange(n + 1)
    qi = initial.qi.copy()
    vi = initial.vi.copy()
    Q = np.empty((n + 1, qi.size))
    V = np.empty((n + 1, qi.size))
    Gb = np.empty(n + 1)

    def acc(t, x, y, k):
        try:
            return reduced_acceleration(L, ReducedState(t, x, y))
        except NonPositiveReducedG as exc:
            raise exc.with_context(q0=float(q0s[k]))

    h = step
    for k in range(n + 1):
        Q[k], V[k] = qi, vi
        Gb[k] = _reduced_G(L.G, np.concatenate([[q0s[k]], qi]), vi)
        if k == n:
            break
        t = q0s[k]
        a1 = acc(t, qi, vi, k)
        x2, y2 = qi + 0.5 * h * vi, vi + 0.5 * h * a1
        a2 = acc(t + 0.5 * h, x2, y2, k)
        x3, y3 = qi + 0.5 * h * y2, vi + 0.5 * h * a2
        a3 = acc(t + 0.5 * h, x3, y3, k)
        x4, y4 = qi + h * y3, vi + h * a3
        a4 = acc(t + h, x4, y4, k)
        qi = qi + (h / 6.0) * (vi + 2.0 * y2 + 2.0 * y3 + y4)
        vi = vi + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return ReducedTrajectory(q0s, Q, V, Gb)


def reconstruct_tau(L, path, sign=1, tau0=0.0):
    """tau(q^0) = tau0 +/- cumulative integral of Gbar^(1/2N) dq^0 (composite Simpson).

    On the constraint (q^0_tau)^(2N) Gbar = 1 the rate dq^0/dtau equals
    Gbar^(-1/2N), so proper parameter accumulates as Gbar^(+1/2N).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    gbar = np.asarray(path.Gbar, dtype=float)
    if np.any(~(gbar > 0)):
        k = int(np.argmin(gbar))
        raise NonPositiveReducedG("reduced G is not positive along the path",
                                  q0=float(path.q0[k]))
    integrand = gbar ** (1.0 / (2 * L.N))
    if len(path.q0) < 3:
        raise ValueError("need at least three samples for Simpson quadrature")
    return tau0 + sign * cumulative_simpson(integrand, x=path.q0, initial=0.0)


def lift(L, path, sign=1, tau0=0.0):
    """Four-velocity trajectory from a chart solution, on the constraint G = 1."""
    tau = reconstruct_tau(L, path, sign, tau0)
    v0 = sign * np.asarray(path.Gbar) ** (-1.0 / (2 * L.N))
    v = np.column_stack([v0, v0[:, None] * path.vi])
    q = np.column_stack([path.q0, path.qi])
    G = np.array([L.G.contract(qk, vk) for qk, vk in zip(q, v)])
    return Trajectory(tau, q, v, G)


def project(traj):
    """Three-velocity picture of a four-velocity trajectory: v^i / v^0."""
    v0 = traj.v[:, 0]
    if np.any(v0 == 0):
        raise NonPositiveReducedG("q0_tau vanishes; trajectory leaves the chart")
    return ReducedTrajectory(traj.q[:, 0], traj.q[:, 1:], traj.v[:, 1:] / v0[:, None],
                             np.full(len(traj), np.nan))
