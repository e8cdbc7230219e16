"""Command line entry point: ``jetmech <command> --config scenario.json``.

Exit status is 0 on success, 1 when a check fails (or a computation
error aborts it) and 2 on invalid input.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import scenario as sc_mod
from .dynamics import integrate, normalize_velocity
from .errors import ConfigError, JetMechError
from .jets import (ChartPartition, SubmanifoldJet, affine_transition, identity_transition,
                   lorentz_boost, shear_transition, swap_transition, transform_jet)
from .lagrangian import Path, Reparametrization, TrajectoryState, gauge_action_invariance, \
    variational_derivative
from .nambu_goto import FlatTargetMetric, _det_expanded_batch, ng_variational_derivative, \
    noether_contractions
from .three_velocity import ReducedState, integrate_reduced, lift, reconstruct_tau

COMMAND_KIND = {
    ("simulate",): "simulate",
    ("check", "noether"): "check-noether",
    ("check", "gauge"): "check-gauge",
    ("transform",): "transform",
    ("reduce",): "reduce",
    ("string", "check"): "string-check",
}


def _fmt(x):
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _initial_state(sc, L):
    init = sc.raw["initial"]
    m = sc.dimension
    q = sc_mod._vector(init["q"], m, "initial.q")
    v = sc_mod._vector(init["v"], m, "initial.v")
    sign = init.get("sign", 1)
    if init.get("normalize", True):
        try:
            v = normalize_velocity(L, q, v, sign)
        except JetMechError as exc:
            raise exc.with_context(field="initial.v")
    return TrajectoryState(float(init.get("tau", 0.0)), q, v)


def _tol(sc, key, default):
    return float(sc.tolerances.get(key, default))


# workflows; each returns (pass, max_defect, samples, extra)

def run_simulate(sc):
    L = sc_mod.build_lagrangian(sc)
    cfg = sc_mod.build_integrator(sc)
    s0 = _initial_state(sc, L)
    try:
        traj = integrate(L, s0, cfg)
    except JetMechError as exc:
        raise exc.with_context(field="integrator")
    m = sc.dimension
    out = sc.output.get("csv")
    if out:
        header = ["tau"] + [f"q{i}" for i in range(m)] + [f"v{i}" for i in range(m)] + ["G"]
        rows = np.column_stack([traj.tau, traj.q, traj.v, traj.G])
        write_csv(out, header, rows)
    drift = traj.max_drift
    return drift <= _tol(sc, "drift", cfg.drift_abort), drift, len(traj), {}


def _sample_states(sc, L, rng_for, count, offset=0):
    """Seed+index addressed sampling, rejecting until G > min_G."""
    m = sc.dimension
    box = sc.raw.get("sampling", {})
    q_lo, q_hi = box.get("q_box", [-1.0, 1.0])
    v_lo, v_hi = box.get("v_box", [-1.5, 1.5])
    a_lo, a_hi = box.get("a_box", [-1.0, 1.0])
    min_G = float(box.get("min_G", 0.1))
    Q = np.empty((m, count))
    V = np.empty((m, count))
    Acc = np.empty((m, count))
    for k in range(count):
        rng = rng_for(offset + k)
        for _ in range(10_000):
            q = rng.uniform(q_lo, q_hi, m)
            v = rng.uniform(v_lo, v_hi, m)
            if L.G.contract(q, v) > min_G:
                break
        else:
            raise JetMechError("could not sample a state with G > min_G", sample=offset + k)
        Q[:, k], V[:, k] = q, v
        Acc[:, k] = rng.uniform(a_lo, a_hi, m)
    return Q, V, Acc


def run_check_noether(sc):
    pairs = int(sc.raw.get("pairs", 1))
    tol = _tol(sc, "defect", 1e-9)
    worst = 0.0
    for p in range(pairs):
        field_rng = np.random.default_rng([sc.seed, 1_000_000 + p])
        L = sc_mod.build_lagrangian(sc, field_rng)
        Q, V, Acc = _sample_states(
            sc, L, lambda k: np.random.default_rng([sc.seed, p, k]), sc.samples)
        try:
            E = variational_derivative(L, Q, V, Acc)
        except JetMechError as exc:
            raise exc.with_context(field="G", pair=p)
        defect = np.abs(np.sum(V * E, axis=0)) / (1.0 + np.sum(np.abs(E), axis=0))
        worst = max(worst, float(defect.max()))
    return worst <= tol, worst, sc.samples * pairs, {"pairs": pairs}


def _path_from(sc):
    spec = sc.raw["path"]
    m = sc.dimension
    kind = spec.get("type", "straight")
    a, b = float(spec.get("start", 0.0)), float(spec.get("end", 1.0))
    q0 = sc_mod._vector(spec.get("q", [0.0] * m), m, "path.q")
    if kind == "straight":
        v = sc_mod._vector(_require_path(spec, "v"), m, "path.v")
        return Path(lambda t: q0[:, None] + np.outer(v, t),
                    lambda t: np.outer(v, np.ones_like(t)), a, b)
    if kind == "helix":
        c = float(spec.get("time_rate", 1.25))
        r = float(spec.get("radius", 0.75))
        w = float(spec.get("frequency", 1.0))
        if m < 3:
            raise ConfigError("helix paths need dimension >= 3", field="path.type")

        def pos(t):
            out = np.zeros((m,) + np.shape(t))
            out[0] = c * t
            out[1] = r * np.sin(w * t)
            out[2] = r * (1 - np.cos(w * t))
            return q0.reshape((m,) + (1,) * np.ndim(t)) + out

        def vel(t):
            out = np.zeros((m,) + np.shape(t))
            out[0] = c
            out[1] = r * w * np.cos(w * t)
            out[2] = r * w * np.sin(w * t)
            return out

        return Path(pos, vel, a, b)
    raise ConfigError(f"unknown path type {kind!r}", field="path.type")


def _require_path(spec, key):
    if key not in spec:
        raise ConfigError(f"missing required field path.{key}", field=f"path.{key}")
    return spec[key]


def _reparam_from(sc, path):
    spec = sc.raw.get("reparametrization", {"type": "identity"})
    a, b = path.a, path.b
    span = b - a
    kind = spec.get("type", "identity")
    if kind == "identity":
        return Reparametrization(lambda s: s, lambda s: np.ones_like(s), a, b)
    if kind == "power":
        p = float(spec.get("exponent", 2.0))
        if p <= 0:
            raise ConfigError("exponent must be positive", field="reparametrization.exponent")
        return Reparametrization(lambda s: a + span * ((s - a) / span) ** p,
                                 lambda s: p * ((s - a) / span) ** (p - 1), a, b)
    if kind == "exp":
        e1 = np.e - 1.0
        return Reparametrization(lambda s: a + span * (np.exp((s - a) / span) - 1) / e1,
                                 lambda s: np.exp((s - a) / span) / e1, a, b)
    raise ConfigError(f"unknown reparametrization {kind!r}", field="reparametrization.type")


def run_check_gauge(sc):
    L = sc_mod.build_lagrangian(sc)
    path = _path_from(sc)
    reparam = _reparam_from(sc, path)
    panels = int(sc.raw.get("panels", 10_000))
    try:
        before, after = gauge_action_invariance(L, path, reparam, panels)
    except JetMechError as exc:
        raise exc.with_context(field="path")
    defect = abs(before - after)
    return defect <= _tol(sc, "action", 1e-6), defect, panels + 1, \
        {"action_before": before, "action_after": after}


def _transition_from(spec, m):
    kind = spec.get("type")
    if kind == "identity":
        return identity_transition(m)
    if kind == "swap":
        return swap_transition(m, int(spec["i"]), int(spec["j"]))
    if kind == "boost":
        if "rapidity" in spec:
            return lorentz_boost(m, rapidity=float(spec["rapidity"]), axis=int(spec.get("axis", 1)))
        return lorentz_boost(m, ch=float(spec["ch"]), sh=float(spec["sh"]),
                             axis=int(spec.get("axis", 1)))
    if kind == "affine":
        return affine_transition(np.array(spec["matrix"], dtype=float),
                                 spec.get("offset"))
    if kind == "shear":
        return shear_transition(m, int(spec["target"]), int(spec["source"]),
                                float(spec["coefficient"]), int(spec.get("power", 2)))
    raise ConfigError(f"unknown transition type {kind!r}", field="transition.type")


def run_transform(sc):
    m = sc.dimension
    jspec = sc.raw["jet"]
    try:
        part = ChartPartition(m, tuple(jspec.get("base", [0])))
        jet = SubmanifoldJet(part, jspec.get("point", [0.0] * m), jspec["slopes"])
        t = _transition_from(sc.raw["transition"], m)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid jet or transition: {exc}", field="jet") from exc
    try:
        new = transform_jet(jet, t)
        back = transform_jet(new, t.inverse())
    except JetMechError as exc:
        raise exc.with_context(field="transition")
    defect = float(np.max(np.abs(back.slopes - jet.slopes)))
    result = {"point": new.point.tolist(), "slopes": new.slopes.tolist()}
    out = sc.output.get("json")
    if out:
        with open(out, "w") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return defect <= _tol(sc, "round_trip", 1e-12), defect, 1, {"result": result}


def run_reduce(sc):
    L = sc_mod.build_lagrangian(sc)
    m = sc.dimension
    init = sc.raw["initial"]
    q = sc_mod._vector(init["q"], m, "initial.q")
    if "vi" in init:
        vi = sc_mod._vector(init["vi"], m - 1, "initial.vi")
    elif "v" in init:
        v = sc_mod._vector(init["v"], m, "initial.v")
        if v[0] == 0:
            raise ConfigError("initial.v has a vanishing time component", field="initial.v")
        vi = v[1:] / v[0]
    else:
        raise ConfigError("missing required field initial.vi", field="initial.vi")
    integ = sc.raw["integrator"]
    step = sc_mod._number(integ["step"], "integrator.step")
    span = sc_mod._number(integ["t_end"], "integrator.t_end")
    if step <= 0 or span <= 0:
        raise ConfigError("integrator.step and integrator.t_end must be positive",
                          field="integrator")
    sign = int(init.get("sign", 1))
    try:
        path = integrate_reduced(L, ReducedState(q[0], q[1:], vi), step, span)
        tau = reconstruct_tau(L, path, sign, float(init.get("tau", 0.0)))
        lifted = lift(L, path, sign, float(init.get("tau", 0.0)))
    except JetMechError as exc:
        raise exc.with_context(field="initial")
    out = sc.output.get("csv")
    if out:
        header = (["q0"] + [f"q{i}" for i in range(1, m)] + [f"v{i}" for i in range(1, m)]
                  + ["Gbar", "tau_reconstructed"])
        write_csv(out, header, np.column_stack([path.q0, path.qi, path.vi, path.Gbar, tau]))
    drift = lifted.max_drift
    return drift <= _tol(sc, "drift", 1e-10), drift, len(path), {}


def _metric_from(sc):
    spec = sc.raw.get("metric", "euclidean")
    m = sc.dimension
    if spec == "euclidean":
        return FlatTargetMetric.euclidean(m)
    if spec == "minkowski":
        return FlatTargetMetric.minkowski(m)
    if isinstance(spec, dict) and "eta" in spec:
        try:
            return FlatTargetMetric(np.array(spec["eta"], dtype=float), int(spec.get("signature", 1)))
        except ValueError as exc:
            raise ConfigError(str(exc), field="metric.eta") from exc
    raise ConfigError("metric must be 'euclidean', 'minkowski' or {eta, signature}",
                      field="metric")


def run_string_check(sc):
    metric = _metric_from(sc)
    m = sc.dimension
    n = sc.samples
    Z1 = np.empty((m, 2, n))
    Z2 = np.empty((m, 2, 2, n))
    for k in range(n):
        rng = np.random.default_rng([sc.seed, k])
        for _ in range(10_000):
            z1 = rng.standard_normal((m, 2))
            if metric.signature * _det_expanded_batch(metric, z1) > 0.1:
                break
        else:
            raise JetMechError("could not sample a non-degenerate sheet", sample=k)
        z2 = rng.standard_normal((m, 2, 2))
        Z1[..., k] = z1
        Z2[..., k] = 0.5 * (z2 + z2.transpose(0, 2, 1))
    E = ng_variational_derivative(metric, (Z1, Z2))
    contr = np.abs(noether_contractions(Z1, E))
    scale = 1.0 + np.sum(np.abs(E), axis=0) * np.max(np.abs(Z1), axis=(0, 1))
    defect = float(np.max(contr / scale))
    return defect <= _tol(sc, "defect", 1e-9), defect, n, {}


WORKFLOWS = {
    "simulate": run_simulate,
    "check-noether": run_check_noether,
    "check-gauge": run_check_gauge,
    "transform": run_transform,
    "reduce": run_reduce,
    "string-check": run_string_check,
}


def run(sc):
    """Execute a parsed scenario and return ``(report, exit_code)``."""
    start = time.perf_counter()
    report = {"kind": sc.kind, "seed": sc.seed}
    try:
        ok, defect, samples, extra = WORKFLOWS[sc.kind](sc)
        report.update(extra)
        report.update({"pass": bool(ok), "max_defect": float(defect), "samples": int(samples)})
        code = 0 if ok else 1
    except ConfigError:
        raise
    except JetMechError as exc:
        report.update({"pass": False, "max_defect": None, "samples": 0,
                       "error": f"{type(exc).__name__}: {exc}"})
        code = 1
    elapsed = (time.perf_counter() - start) * 1e3
    report["runtime_ms"] = round(elapsed, 3) if sc.output.get("timing", True) else None
    return report, code


def build_parser():
    parser = argparse.ArgumentParser(prog="jetmech", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario JSON file")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--tol", type=float, help="override the main check tolerance")
    common.add_argument("--quiet", action="store_true", help="do not print the report")
    common.add_argument("--report", help="also write the JSON report to this file")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="integrate a trajectory to CSV")
    sim.add_argument("--out", help="CSV output path")
    check = sub.add_parser("check", help="property checks")
    csub = check.add_subparsers(dest="check", required=True)
    csub.add_parser("noether", parents=[common], help="Noether identity on random states")
    csub.add_parser("gauge", parents=[common], help="action invariance under reparametrization")
    tr = sub.add_parser("transform", parents=[common], help="change chart of a submanifold jet")
    tr.add_argument("--out", help="JSON output path for the transformed jet")
    red = sub.add_parser("reduce", parents=[common], help="three-velocity integration to CSV")
    red.add_argument("--out", help="CSV output path")
    string = sub.add_parser("string", help="Nambu-Goto checks")
    ssub = string.add_subparsers(dest="string", required=True)
    ssub.add_parser("check", parents=[common], help="Noether identities for random sheets")
    return parser


_TOL_KEY = {"simulate": "drift", "check-noether": "defect", "check-gauge": "action",
            "transform": "round_trip", "reduce": "drift", "string-check": "defect"}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    words = [args.command] + [w for w in (getattr(args, "check", None),
                                          getattr(args, "string", None)) if w]
    kind = COMMAND_KIND[tuple(words)]
    try:
        sc = sc_mod.load(args.config)
        if sc.kind != kind:
            raise ConfigError(f"scenario kind {sc.kind!r} does not match command {kind!r}",
                              field="kind")
        if args.seed is not None:
            sc.seed = args.seed
        if args.tol is not None:
            sc.tolerances[_TOL_KEY[kind]] = args.tol
        out = getattr(args, "out", None)
        if out:
            sc.output["json" if kind == "transform" else "csv"] = out
        report, code = run(sc)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report or sc.output.get("report"):
        with open(args.report or sc.output["report"], "w") as fh:
            fh.write(text + "\n")
    if not args.quiet:
        print(text)
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
