"""Independent reference computations used by several test modules."""

import itertools

import numpy as np


def brute_force_tensor(G, q):
    """Dense tensor from per-component evaluation (no gather tables)."""
    m, d = G.dimension, G.degree
    T = np.zeros((m,) * d)
    for idx in itertools.product(range(m), repeat=d):
        T[idx] = G.component(idx, q)
    return T


def contract_all(T, v):
    out = T
    for _ in range(T.ndim):
        out = out @ v
    return out


def constant_field_motion(F, eta, q0, v0, tau):
    """Exact solution of eta a = F v (m = e = 1) by eigendecomposition.

    v(t) = exp(M t) v0 with M = eta^-1 F;  q(t) = q0 + int_0^t v.
    """
    M = np.linalg.solve(eta, F)
    lam, V = np.linalg.eig(M)
    c = np.linalg.solve(V, v0.astype(complex))
    tau = np.atleast_1d(tau)
    vel = np.empty((tau.size, len(v0)))
    pos = np.empty((tau.size, len(v0)))
    for k, t in enumerate(tau):
        growth = np.exp(lam * t)
        small = np.abs(lam) < 1e-14
        integral = np.where(small, t, (growth - 1.0) / np.where(small, 1.0, lam))
        vel[k] = (V @ (growth * c)).real
        pos[k] = q0 + (V @ (integral * c)).real
    return pos, vel


def fd_euler_lagrange(density, q, v, a, h=1e-5):
    """Euler-Lagrange covector from central differences of a plain density.

    E_l = dL/dq^l - [d2L/dq^m dv^l v^m + d2L/dv^m dv^l a^m], every partial by
    differencing the first derivative, which is itself a central difference.
    """
    m = len(q)
    x0 = np.concatenate([q, v])

    def f(x):
        return density(x[:m], x[m:])

    def d1(x, i):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        return (f(xp) - f(xm)) / (2 * h)

    def d2(x, i, j, hh=1e-4):
        xp, xm = x.copy(), x.copy()
        xp[j] += hh
        xm[j] -= hh
        return (d1(xp, i) - d1(xm, i)) / (2 * hh)

    E = np.empty(m)
    for lam in range(m):
        total = d1(x0, lam)
        for mu in range(m):
            total -= d2(x0, m + lam, mu) * v[mu] + d2(x0, m + lam, m + mu) * a[mu]
        E[lam] = total
    return E


def fd_worldsheet_euler_lagrange(momentum, z1, z2, h=1e-5):
    """E_A = -sum_mu d/dt P_{A mu}(z1 + t Z_mu) with Z_mu[:, nu] = z2[:, nu, mu].

    ``momentum(w)`` returns the (m, 2) array of dL/dz^A_mu; the total
    derivative is a central difference of it.
    """
    E = np.zeros(z1.shape[0])
    for mu in range(2):
        Z = z2[:, :, mu]
        E -= (momentum(z1 + h * Z)[:, mu] - momentum(z1 - h * Z)[:, mu]) / (2 * h)
    return E
