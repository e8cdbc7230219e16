"""Nambu-Goto area density of a two-dimensional sheet in a flat target."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .autodiff import nested_pairs, primal
from .errors import DegenerateWorldsheet


@dataclass(frozen=True)
class FlatTargetMetric:
    """Constant metric eta_AB; ``signature`` multiplies det h under the root.

    Use ``signature=-1`` for Lorentzian sheets in a Minkowski target.
    """

    eta: np.ndarray
    signature: int = 1

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float)
        if eta.ndim != 2 or eta.shape[0] != eta.shape[1]:
            raise ValueError("eta must be a square matrix")
        if not np.allclose(eta, eta.T):
            raise ValueError("eta must be symmetric")
        if np.linalg.det(eta) == 0:
            raise ValueError("eta must be non-degenerate")
        if self.signature not in (1, -1):
            raise ValueError("signature must be +1 or -1")
        object.__setattr__(self, "eta", eta)

    @property
    def dimension(self):
        return self.eta.shape[0]

    @classmethod
    def euclidean(cls, m):
        return cls(np.eye(m))

    @classmethod
    def minkowski(cls, m, signature=-1):
        return cls(np.diag([1.0] + [-1.0] * (m - 1)), signature)


@dataclass(frozen=True)
class WorldsheetJet:
    z: np.ndarray
    z1: np.ndarray
    z2: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        z1 = np.asarray(self.z1, dtype=float)
        z2 = np.asarray(self.z2, dtype=float)
        m = z.shape[0]
        if z1.shape != (m, 2) or z2.shape != (m, 2, 2):
            raise ValueError("expected z1 of shape (m, 2) and z2 of shape (m, 2, 2)")
        if not np.allclose(z2, np.swapaxes(z2, 1, 2)):
            raise ValueError("second jet must be symmetric in its parameter indices")
        for arr in (z, z1, z2):
            if not np.all(np.isfinite(arr)):
                raise ValueError("jet entries must be finite")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)


def induced_metric(metric, z1):
    z1 = np.asarray(z1, dtype=float)
    return np.einsum("ab,a...i,b...j->...ij", metric.eta, z1, z1) if z1.ndim > 2 \
        else z1.T @ metric.eta @ z1


def _eta_pair(eta, x, y):
    """eta(x, y) for sequences of (possibly dual) components."""
    m = len(x)
    total = 0.0
    for a in range(m):
        for b in range(m):
            e = eta[a, b]
            if e:
                total = e * x[a] * y[b] + total
    return total


def _density(metric, t1, t2):
    """(s det h)^(1/2) from the two tangent vectors, generic over duals."""
    eta = metric.eta
    h11 = _eta_pair(eta, t1, t1)
    h22 = _eta_pair(eta, t2, t2)
    h12 = _eta_pair(eta, t1, t2)
    return (metric.signature * (h11 * h22 - h12 * h12)) ** 0.5


def _det_expanded(metric, z1):
    z1 = np.asarray(z1, dtype=float)
    eta = metric.eta
    a, b = z1[:, 0], z1[:, 1]
    return (a @ eta @ a) * (b @ eta @ b) - (a @ eta @ b) ** 2


def ng_density(metric, z1):
    z1 = np.asarray(z1, dtype=float)
    sdet = metric.signature * np.linalg.det(induced_metric(metric, z1))
    if not sdet > 0:
        raise DegenerateWorldsheet(f"signature * det h = {sdet:.6g} is not positive")
    return float(np.sqrt(sdet))


def ng_variational_derivative(metric, jets):
    """E_A = -d_mu (dL/dz^A_mu) for one jet or a batch.

    ``jets`` is a :class:`WorldsheetJet` or a tuple ``(z1, z2)`` of arrays
    with a trailing batch axis: z1 (m, 2, B), z2 (m, 2, 2, B).  The total
    derivative only acts through the second jet because eta is constant.
    """
    if isinstance(jets, WorldsheetJet):
        z1, z2 = jets.z1, jets.z2
    else:
        z1, z2 = (np.asarray(a, dtype=float) for a in jets)
    m = metric.dimension
    batch = z1.shape[2:]
    x = [z1[a, mu] for mu in range(2) for a in range(m)]
    k = 2 * m

    def f(y):
        return _density(metric, y[:m], y[m:])

    sdet = metric.signature * primal(_det_expanded_batch(metric, z1))
    if np.any(~(np.asarray(sdet) > 0)):
        raise DegenerateWorldsheet("signature * det h is not positive")

    eye = np.eye(k).reshape((k, k) + (1,) * len(batch))
    U = [eye[:, j] for j in range(k)]
    # pass (A, mu) differentiates along e_{A mu}, then along z2[:, :, mu]
    W = []
    for nu in range(2):
        for b in range(m):
            col = np.stack([z2[b, nu, mu] * np.ones(batch) for mu in range(2)
                            for _ in range(m)])
            W.append(col)
    _, second = nested_pairs(f, x, U, W)
    second = np.broadcast_to(second, (k,) + batch)
    # sum over mu of passes (A, mu)
    return -(second[:m] + second[m:])


def _det_expanded_batch(metric, z1):
    eta = metric.eta
    a, b = z1[:, 0], z1[:, 1]
    aa = np.einsum("ij,i...,j...->...", eta, a, a)
    bb = np.einsum("ij,i...,j...->...", eta, b, b)
    ab = np.einsum("ij,i...,j...->...", eta, a, b)
    return aa * bb - ab ** 2


def noether_contractions(jet_z1, E):
    """z^A_nu E_A for nu = 1, 2."""
    return np.einsum("ai...,a...->i...", np.asarray(jet_z1), np.asarray(E))


@dataclass
class Sheet:
    """Immersion of a rectangle: ``tangents(u, v)`` returns an array (m, 2, ...)."""

    tangents: object
    u_range: tuple = (0.0, 1.0)
    v_range: tuple = (0.0, 1.0)


@dataclass
class Diffeo:
    """Orientation-preserving map of the parameter rectangle onto the sheet's.

    ``jacobian(u, v)`` returns the 2x2 Jacobian with shape (2, 2, ...).
    """

    forward: object
    jacobian: object
    u_range: tuple = (0.0, 1.0)
    v_range: tuple = (0.0, 1.0)


def _sheet_action(metric, tangents, u_range, v_range, panels):
    if panels % 2:
        panels += 1
    u = np.linspace(*u_range, panels + 1)
    v = np.linspace(*v_range, panels + 1)
    U, V = np.meshgrid(u, v, indexing="ij")
    z1 = np.asarray(tangents(U, V), dtype=float)
    sdet = metric.signature * _det_expanded_batch(metric, z1)
    # a reparametrization may flatten an edge of the rectangle (u -> u^2 at
    # u = 0); such nodes carry zero area, but the interior must be regular
    interior = sdet[1:-1, 1:-1]
    if np.any(~(interior > 0)) or np.any(~(sdet >= 0)):
        raise DegenerateWorldsheet("signature * det h is not positive on the sheet")
    dens = np.sqrt(sdet)
    return float(simpson(simpson(dens, x=v, axis=1), x=u))


def ng_action(metric, sheet, panels=256):
    return _sheet_action(metric, sheet.tangents, sheet.u_range, sheet.v_range, panels)


def ng_action_invariance(metric, sheet, diffeo, panels=256):
    """Area action before and after pulling the sheet back by ``diffeo``."""
    before = ng_action(metric, sheet, panels)

    def pulled(u, v):
        uu, vv = diffeo.forward(u, v)
        t = np.asarray(sheet.tangents(uu, vv), dtype=float)
        J = np.asarray(diffeo.jacobian(u, v), dtype=float)
        if np.any(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0] < 0):
            raise ValueError("diffeomorphism must preserve orientation")
        return np.einsum("am...,mn...->an...", t, J)

    after = _sheet_action(metric, pulled, diffeo.u_range, diffeo.v_range, panels)
    return before, after
