"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line with the measured quantities; the
lines are printed together at the end of the pytest run (see conftest.py).
Run this file alone with ``pytest tests/test_acceptance.py``.
"""

import time

import numpy as np

from jetmech.autodiff import central_difference, gradient, hessian
from jetmech.dynamics import IntegratorConfig, integrate, normalize_velocity
from jetmech.fields import (OneFormField, SymmetricTensorField, field_strength_matrix, minkowski,
                            quartic_eta2, random_one_form, random_tensor_field)
from jetmech.jets import (ChartPartition, SubmanifoldJet, affine_transition, lorentz_boost,
                          shear_transition, transform_jet)
from jetmech.lagrangian import (Path, RelativisticLagrangian, Reparametrization, TrajectoryState,
                                gauge_action_invariance, variational_derivative)
from jetmech.nambu_goto import (Diffeo, FlatTargetMetric, Sheet, _density,
                                ng_action_invariance, ng_variational_derivative,
                                noether_contractions)
from jetmech.polynomial import PolynomialScalarField
from jetmech.three_velocity import (_reduced_density, integrate_reduced, project,
                                    reconstruct_tau)

from oracles import constant_field_motion

RESULTS = []
SEED = 20261018


def record(number, title, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def charged_particle():
    F = field_strength_matrix(4, {(1, 2): 1.0})
    return RelativisticLagrangian(minkowski(4), OneFormField.uniform_field(F)), F


GYRATION = TrajectoryState(0.0, np.zeros(4), np.array([1.25, 0.75, 0.0, 0.0]))
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def sample_states(rng, L, count, min_G=0.1):
    Q, V = np.empty((4, count)), np.empty((4, count))
    for k in range(count):
        while True:
            q, v = rng.uniform(-1, 1, 4), rng.uniform(-1.5, 1.5, 4)
            if L.G.contract(q, v) > min_G:
                break
        Q[:, k], V[:, k] = q, v
    return Q, V, rng.uniform(-1, 1, (4, count))


def test_criterion_1_noether_identity_particle():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst, pairs = 0.0, 0
    for N in (1, 2):
        for _ in range(3):
            L = RelativisticLagrangian(random_tensor_field(rng, 4, N), random_one_form(rng, 4))
            Q, V, Acc = sample_states(rng, L, 1000)
            E = variational_derivative(L, Q, V, Acc)
            defect = np.abs(np.sum(V * E, axis=0)) / (1 + np.sum(np.abs(E), axis=0))
            worst = max(worst, float(defect.max()))
            pairs += 1
    elapsed = time.perf_counter() - start
    record(1, "Noether identity v.E = 0", worst <= 1e-9 and elapsed < 5.0,
           f"{pairs} (G, A) pairs x 1000 states, max |v.E|/(1+|E|_1) = {worst:.2e} "
           f"(<= 1e-9), runtime {elapsed:.2f} s (< 5 s)")


def test_criterion_2_noether_identities_worldsheet():
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    metric = FlatTargetMetric.euclidean(4)
    B = 1000
    z1 = rng.standard_normal((4, 2, B))
    z2 = rng.standard_normal((4, 2, 2, B))
    z2 = 0.5 * (z2 + np.swapaxes(z2, 1, 2))
    E = ng_variational_derivative(metric, (z1, z2))
    c = np.abs(noether_contractions(z1, E))
    scale = 1 + np.sum(np.abs(E), axis=0) * np.max(np.abs(z1), axis=(0, 1))
    worst = float(np.max(c / scale))
    elapsed = time.perf_counter() - start
    record(2, "worldsheet Noether identities z_nu.E = 0", worst <= 1e-9 and elapsed < 5.0,
           f"{B} jets, max contraction/scale = {worst:.2e} (<= 1e-9), "
           f"runtime {elapsed:.2f} s (< 5 s)")


def test_criterion_3_charged_particle_oracle():
    L, F = charged_particle()
    start = time.perf_counter()
    traj = integrate(L, GYRATION, IntegratorConfig(1e-3, 2 * np.pi))
    elapsed = time.perf_counter() - start
    pos, _ = constant_field_motion(F, ETA, np.zeros(4), GYRATION.q_tau, traj.tau[-1])
    err = float(np.max(np.abs(traj.final.q - pos[0])))
    drift = traj.max_drift
    record(3, "constant-field gyration vs analytic solution",
           err <= 1e-6 and drift <= 1e-10 and elapsed < 2.0,
           f"position error after one period {err:.2e} (<= 1e-6), max |G-1| = {drift:.2e} "
           f"(<= 1e-10), runtime {elapsed:.2f} s (< 2 s)")


def test_criterion_4_picture_equivalence():
    L, _ = charged_particle()
    start = time.perf_counter()
    traj = integrate(L, GYRATION, IntegratorConfig(1e-3, 2 * np.pi))
    s0 = project(traj).state(0)
    span = traj.q[-1, 0] - traj.q[0, 0]
    step = span / np.ceil(span / 0.0125)
    path = integrate_reduced(L, s0, step, span)
    qi_err = float(np.max(np.abs(path.interpolate(traj.q[:, 0]) - traj.q[:, 1:])))
    tau = reconstruct_tau(L, path)
    tau_on_grid = np.interp(traj.q[:, 0], path.q0, tau)
    # piecewise-linear interpolation of a linear function is exact here
    tau_err = float(np.max(np.abs(tau_on_grid - traj.tau)))
    elapsed = time.perf_counter() - start
    record(4, "four-velocity and three-velocity pictures agree",
           qi_err <= 1e-6 and tau_err <= 1e-6 and elapsed < 5.0,
           f"max |q^i difference| = {qi_err:.2e} (<= 1e-6), max |tau difference| = "
           f"{tau_err:.2e} (<= 1e-6), runtime {elapsed:.2f} s (< 5 s)")


def _random_transition(rng, m, kind):
    if kind == 0:
        return lorentz_boost(m, rapidity=rng.uniform(-1, 1), axis=int(rng.integers(1, m)))
    if kind == 1:
        return affine_transition(np.eye(m) + 0.2 * rng.standard_normal((m, m)),
                                 rng.standard_normal(m))
    a, b = rng.choice(m, 2, replace=False)
    return shear_transition(m, int(a), int(b), rng.uniform(-0.3, 0.3))


def test_criterion_5_chart_algebra():
    rng = np.random.default_rng(SEED + 5)
    round_trip = cocycle = 0.0
    boosts = 0
    for k in range(1000):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(1, m))
        part = ChartPartition(m, tuple(sorted(rng.choice(m, n, replace=False))))
        jet = SubmanifoldJet(part, rng.standard_normal(m), 0.3 * rng.standard_normal((m - n, n)))
        t1 = _random_transition(rng, m, k % 3)
        t2 = _random_transition(rng, m, int(rng.integers(0, 3)))
        boosts += (k % 3 == 0)
        back = transform_jet(transform_jet(jet, t1), t1.inverse())
        round_trip = max(round_trip, float(np.max(np.abs(back.slopes - jet.slopes))),
                         float(np.max(np.abs(back.point - jet.point))))
        two = transform_jet(transform_jet(jet, t1), t2)
        one = transform_jet(jet, t1.then(t2))
        cocycle = max(cocycle, float(np.max(np.abs(two.slopes - one.slopes))))
    curve = SubmanifoldJet(ChartPartition(4, (0,)), np.zeros(4), [[0.5], [0.0], [0.0]])
    u = transform_jet(curve, lorentz_boost(4, ch=1.25, sh=0.75)).slopes[0, 0]
    subtraction = abs(u + 1 / 7)
    record(5, "chart transition round trip, cocycle and boost",
           round_trip <= 1e-12 and cocycle <= 1e-10 and subtraction <= 1e-12,
           f"1000 jets ({boosts} boosts first), round trip {round_trip:.2e} (<= 1e-12), "
           f"cocycle {cocycle:.2e} (<= 1e-10), |u' + 1/7| = {subtraction:.2e} (<= 1e-12)")


def _helix():
    def pos(t):
        return np.array([1.25 * t, 0.75 * np.sin(t), 0.75 * (1 - np.cos(t)), 0 * t])

    def vel(t):
        return np.array([1.25 + 0 * t, 0.75 * np.cos(t), 0.75 * np.sin(t), 0 * t])
    return Path(pos, vel, 0.0, 3.0)


def _reparams(a, b):
    span = b - a
    e1 = np.e - 1
    return [
        Reparametrization(lambda s: a + span * ((s - a) / span) ** 2,
                          lambda s: 2 * (s - a) / span, a, b),
        Reparametrization(lambda s: a + span * (np.exp((s - a) / span) - 1) / e1,
                          lambda s: np.exp((s - a) / span) / e1, a, b),
    ]


def test_criterion_6_gauge_invariance():
    rng = np.random.default_rng(SEED + 6)
    charged, _ = charged_particle()
    lagrangians = [charged, RelativisticLagrangian(quartic_eta2(4), random_one_form(rng, 4, 0.3))]
    particle = 0.0
    for L in lagrangians:
        path = _helix()
        for rp in _reparams(path.a, path.b):
            before, after = gauge_action_invariance(L, path, rp)
            particle = max(particle, abs(before - after))
    euclid = FlatTargetMetric.euclidean(4)

    def square(u, v):
        t = np.zeros((4, 2) + np.shape(u))
        t[0, 0], t[1, 1] = 1.0, 1.0
        return t

    def cylinder(u, v):
        t = np.zeros((4, 2) + np.shape(u))
        t[0, 0], t[1, 0], t[2, 1] = -np.sin(u), np.cos(u), 1.0
        return t

    def jac_square(u, v):
        J = np.zeros((2, 2) + u.shape)
        J[0, 0], J[1, 1] = 2 * u, 1.0
        return J

    def jac_shear(u, v):
        J = np.zeros((2, 2) + u.shape)
        J[0, 0] = 1 + 0.2 * np.cos(np.pi * u) * v
        J[0, 1] = 0.2 * np.sin(np.pi * u) / np.pi
        J[1, 1] = 1.0
        return J

    sheet = 0.0
    for tangents, diffeo in [
        (square, Diffeo(lambda u, v: (u ** 2, v), jac_square)),
        (cylinder, Diffeo(lambda u, v: (u + 0.2 * np.sin(np.pi * u) * v / np.pi, v), jac_shear)),
    ]:
        before, after = ng_action_invariance(euclid, Sheet(tangents), diffeo, panels=256)
        sheet = max(sheet, abs(before - after))
    record(6, "action invariance under reparametrization", particle <= 1e-6 and sheet <= 1e-6,
           f"particle paths max |dS| = {particle:.2e} (<= 1e-6), sheets at 256x256 panels "
           f"max |dS| = {sheet:.2e} (<= 1e-6)")


def _check_partials(f_dual, f_plain, X, h=1e-5):
    """Worst relative AD/FD disagreement over first partials and the Hessian.

    First partials are compared with central differences of f; each Hessian
    column with central differences of the AD gradient.
    """
    k = X.shape[0]
    xs = list(X)
    g = np.array(gradient(f_dual, xs))
    H = np.array(hessian(f_dual, xs))
    worst = 0.0
    for i in range(k):
        xp, xm = X.copy(), X.copy()
        xp[i] += h
        xm[i] -= h
        fd = (f_plain(xp) - f_plain(xm)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(g[i] - fd) / np.maximum(1.0, np.abs(fd)))))
        col = (np.array(gradient(f_dual, list(xp))) - np.array(gradient(f_dual, list(xm)))) / (2 * h)
        worst = max(worst, float(np.max(np.abs(H[:, i] - col) / np.maximum(1.0, np.abs(col)))))
    return worst


def test_criterion_7_ad_validity():
    rng = np.random.default_rng(SEED + 7)
    P = 200
    worst = {}
    # relativistic density at N = 1 and N = 2
    for N in (1, 2):
        L = RelativisticLagrangian(random_tensor_field(rng, 4, N), random_one_form(rng, 4))
        Q, V, _ = sample_states(rng, L, P)
        X = np.vstack([Q, V])

        def f(x, L=L):
            return L.density(x[:4], x[4:])
        worst[f"relativistic N={N}"] = _check_partials(f, f, X)
    # reduced density on states with positive reduced G
    L = RelativisticLagrangian(random_tensor_field(rng, 4, 1, scale=0.05), random_one_form(rng, 4))
    X = np.vstack([rng.uniform(-1, 1, (4, P)), rng.uniform(-0.4, 0.4, (3, P))])

    def fr(x):
        return _reduced_density(L, list(x))
    worst["reduced"] = _check_partials(fr, fr, X)
    # worldsheet density
    metric = FlatTargetMetric.euclidean(4)
    X = rng.standard_normal((8, P))

    def fn(x):
        return _density(metric, list(x[:4]), list(x[4:]))
    worst["worldsheet"] = _check_partials(fn, fn, X)
    overall = max(worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(7, "AD partials vs central differences (step 1e-5)", overall <= 1e-6,
           f"{P} points per density, worst relative error: {detail} (<= 1e-6)")


def _curved_free_particle():
    g00 = PolynomialScalarField.constant(4, 1.0) + PolynomialScalarField(4, {(0, 2, 0, 0): 0.05})
    g11 = PolynomialScalarField.constant(4, -1.0) + PolynomialScalarField(4, {(0, 0, 2, 0): -0.05})
    G = SymmetricTensorField(4, 2, {(0, 0): g00, (1, 1): g11, (2, 2): -1.0, (3, 3): -1.0})
    return RelativisticLagrangian(G)


def test_criterion_8_rk4_order():
    # free particle in a position-dependent metric, against a fine-step reference
    L = _curved_free_particle()
    q = np.array([0.0, 0.5, 0.2, 0.0])
    s = TrajectoryState(0, q, normalize_velocity(L, q, [1.0, 0.4, 0.3, 0.1]))
    ref = integrate(L, s, IntegratorConfig(0.1 / 64, 10)).final.q
    free = [np.max(np.abs(integrate(L, s, IntegratorConfig(h, 10)).final.q - ref))
            for h in (0.2, 0.1, 0.05)]
    # charged particle against the analytic solution
    Lc, F = charged_particle()
    charged = []
    for h in (0.1, 0.05, 0.025):
        traj = integrate(Lc, GYRATION, IntegratorConfig(h, 10, drift_abort=1e-2))
        pos, _ = constant_field_motion(F, ETA, np.zeros(4), GYRATION.q_tau, traj.tau[-1])
        charged.append(np.max(np.abs(traj.final.q - pos[0])))
    ratios = [free[0] / free[1], free[1] / free[2], charged[0] / charged[1],
              charged[1] / charged[2]]
    record(8, "RK4 global error ratio under step halving", min(ratios) >= 14.0,
           "free (curved metric) ratios {:.2f}, {:.2f}; charged ratios {:.2f}, {:.2f} "
           "(>= 14)".format(*ratios))


if __name__ == "__main__":
    import pytest
    raise SystemExit(pytest.main([__file__, "-q"]))
