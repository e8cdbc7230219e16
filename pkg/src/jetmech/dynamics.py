"""Fixed-step integration of the relativistic equation E = 0 on the constraint G = 1."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DriftExceeded, JetMechError, NonPositiveG, SingularMassMatrix
from .lagrangian import TrajectoryState, _force_terms, _Kinematics

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class IntegratorConfig:
    """Classical RK4 settings.

    ``t_end`` is the span of tau covered; a negative ``step`` integrates
    towards decreasing tau.
    """

    step: float
    t_end: float
    projection: bool = False
    drift_abort: float = 1e-6
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")
        if not self.step or not math.isfinite(self.step):
            raise ValueError("step must be a finite non-zero number")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.drift_abort > 0:
            raise ValueError("drift_abort must be positive")

    @property
    def n_steps(self):
        # tolerate t_end/step landing a hair below an integer
        return int(math.floor(self.t_end / abs(self.step) + 1e-9))


@dataclass
class Trajectory:
    tau: np.ndarray
    q: np.ndarray
    v: np.ndarray
    G: np.ndarray

    def __len__(self):
        return len(self.tau)

    def state(self, k):
        return TrajectoryState(self.tau[k], self.q[k], self.v[k])

    @property
    def states(self):
        return [self.state(k) for k in range(len(self))]

    @property
    def final(self):
        return self.state(-1)

    @property
    def max_drift(self):
        return float(np.max(np.abs(self.G - 1.0)))


def mass_matrix(L, s):
    """(2N - 1) G_{b m a3..} v^a3..; the coefficient of the acceleration in -E."""
    kin = _Kinematics(L, s.q, s.q_tau)
    return (2 * L.N - 1) * kin.Gvv


def _solve_acceleration(L, q, v, check=True):
    kin = _Kinematics(L, q, v)
    if not kin.g > 0:
        raise NonPositiveG(f"G must be positive, got {kin.g:.6g}")
    W = (2 * L.N - 1) * kin.Gvv
    rhs = _force_terms(L, kin, q, v)
    const = L._constant_mass
    cond = const[1] if const is not None else np.linalg.cond(W)
    if not cond < MAX_CONDITION:
        raise SingularMassMatrix(f"mass matrix condition number {cond:.3g}")
    acc = const[2] @ rhs if const is not None else np.linalg.solve(W, rhs)
    if check:
        Wa = W @ acc
        resid = np.abs(rhs - Wa).max()
        scale = 1.0 + np.abs(rhs).sum() + np.abs(Wa).sum()
        if resid > 1e-10 * scale:
            raise SingularMassMatrix(f"post-solve residual {resid:.3g} too large")
    return acc


def acceleration(L, s):
    """The unique q_tautau solving E_beta = 0 at ``s``."""
    return _solve_acceleration(L, s.q, s.q_tau)


def normalize_velocity(L, q, v, sign=1):
    """Rescale ``v`` onto G = 1; ``sign`` picks one of the two solutions."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    v = np.asarray(v, dtype=float)
    g = L.G.contract(np.asarray(q, dtype=float), v)
    if not g > 0:
        raise NonPositiveG(f"G must be positive to normalize, got {g:.6g}")
    return sign * v / g ** (1.0 / (2 * L.N))


def integrate(L, initial, cfg, initial_tol=1e-12):
    q = np.array(initial.q, dtype=float)
    v = np.array(initial.q_tau, dtype=float)
    g0 = L.G.contract(q, v)
    if abs(g0 - 1.0) > initial_tol:
        raise ValueError(
            f"initial state is off the constraint surface: |G - 1| = {abs(g0 - 1):.3g};"
            " normalize the velocity first")
    n = cfg.n_steps
    h = cfg.step
    m = q.size
    taus = initial.tau + h * np.arange(n + 1)
    Q = np.empty((n + 1, m))
    V = np.empty((n + 1, m))
    Gs = np.empty(n + 1)
    Q[0], V[0], Gs[0] = q, v, g0

    def acc(qq, vv, k):
        try:
            return _solve_acceleration(L, qq, vv)
        except JetMechError as exc:
            raise exc.with_context(tau=float(taus[k]))

    for k in range(n):
        a1 = acc(q, v, k)
        q2, v2 = q + 0.5 * h * v, v + 0.5 * h * a1
        a2 = acc(q2, v2, k)
        q3, v3 = q + 0.5 * h * v2, v + 0.5 * h * a2
        a3 = acc(q3, v3, k)
        q4, v4 = q + h * v3, v + h * a3
        a4 = acc(q4, v4, k)
        q = q + (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        g = L.G.contract(q, v)
        if cfg.projection:
            v = normalize_velocity(L, q, v, 1)
            g = L.G.contract(q, v)
        if abs(g - 1.0) > cfg.drift_abort:
            raise DriftExceeded(f"constraint drift |G - 1| = {abs(g - 1):.3g}",
                                tau=float(taus[k + 1]))
        Q[k + 1], V[k + 1], Gs[k + 1] = q, v, g
    return Trajectory(taus, Q, V, Gs)
