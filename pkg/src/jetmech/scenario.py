"""JSON scenario documents: validation and construction of model objects."""

import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorConfig
from .errors import ConfigError
from .fields import (CATALOG, OneFormField, SymmetricTensorField,
                     field_strength_matrix, random_one_form, random_tensor_field)
from .lagrangian import RelativisticLagrangian
from .polynomial import PolynomialScalarField

KINDS = ("simulate", "check-noether", "check-gauge", "transform", "reduce", "string-check")


@dataclass
class Scenario:
    kind: str
    dimension: int
    degree: int
    raw: dict
    seed: int = 0
    samples: int = 1000
    tolerances: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def section(self, name, required=True):
        if name not in self.raw:
            if required:
                raise ConfigError(f"missing required field {name!r}", field=name)
            return None
        return self.raw[name]


def _require(mapping, key, path, kind=None):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"missing required field {path}.{key}".lstrip("."),
                          field=f"{path}.{key}".lstrip("."))
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"field {path}.{key} has the wrong type".lstrip("."),
                          field=f"{path}.{key}".lstrip("."))
    return value


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {path} must be a number", field=path)
    return float(value)


def _vector(value, length, path):
    if not isinstance(value, list) or len(value) != length:
        raise ConfigError(f"field {path} must be a list of {length} numbers", field=path)
    return np.array([_number(x, f"{path}[{i}]") for i, x in enumerate(value)])


def load(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}", field="<file>") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario is not valid JSON: {exc}", field="<file>") from exc
    return parse(raw)


def parse(raw):
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a JSON object", field="<root>")
    kind = _require(raw, "kind", "", str)
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {KINDS}", field="kind")
    m = _require(raw, "dimension", "", int)
    if isinstance(m, bool) or m < 2:
        raise ConfigError("dimension must be an integer >= 2", field="dimension")
    N = raw.get("degree", 1)
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ConfigError("degree N must be an integer >= 1", field="degree")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed must be a non-negative integer", field="seed")
    samples = raw.get("samples", 1000)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise ConfigError("samples must be a positive integer", field="samples")
    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances must be an object", field="tolerances")
    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output must be an object", field="output")
    sc = Scenario(kind, m, N, raw, seed, samples, dict(tolerances), dict(output))
    _validate_kind(sc)
    return sc


def _validate_kind(sc):
    raw = sc.raw
    if sc.kind in ("simulate", "reduce"):
        integ = _require(raw, "integrator", "", dict)
        _number(_require(integ, "step", "integrator"), "integrator.step")
        _number(_require(integ, "t_end", "integrator"), "integrator.t_end")
        _require(raw, "initial", "", dict)
        _require(raw["initial"], "q", "initial")
    if sc.kind == "simulate":
        _require(raw["initial"], "v", "initial")
    if sc.kind == "transform":
        _require(raw, "jet", "", dict)
        _require(raw, "transition", "", dict)
    if sc.kind == "check-gauge":
        _require(raw, "path", "", dict)


def build_G(sc, rng=None, spec=None, path="G"):
    spec = sc.raw.get("G", "minkowski") if spec is None else spec
    m, N = sc.dimension, sc.degree
    if isinstance(spec, str):
        spec = {"catalog": spec}
    if not isinstance(spec, dict):
        raise ConfigError("G must be a catalog name or an object", field=path)
    if "catalog" in spec:
        name = spec["catalog"]
        if name == "random":
            if rng is None:
                rng = np.random.default_rng(sc.seed)
            return random_tensor_field(rng, m, N, scale=float(spec.get("scale", 0.1)))
        if name not in CATALOG:
            raise ConfigError(f"unknown G catalog entry {name!r}", field=f"{path}.catalog")
        G = CATALOG[name](m)
        if G.N != N:
            raise ConfigError(f"catalog entry {name!r} has N={G.N}, scenario degree is {N}",
                              field="degree")
        return G
    if "terms" in spec:
        coeffs = {}
        for k, entry in enumerate(spec["terms"]):
            p = f"{path}.terms[{k}]"
            index = _require(entry, "index", p, list)
            if len(index) != 2 * N:
                raise ConfigError(f"{p}.index must have {2 * N} entries", field=f"{p}.index")
            coeffs[tuple(index)] = _polynomial(entry.get("coefficient", 0.0), m, f"{p}.coefficient")
        try:
            return SymmetricTensorField(m, 2 * N, coeffs)
        except ValueError as exc:
            raise ConfigError(str(exc), field=f"{path}.terms") from exc
    raise ConfigError("G needs a 'catalog' or 'terms' entry", field=path)


def _polynomial(value, m, path):
    """A number, or a list of [coefficient, [exponents...]] pairs."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return PolynomialScalarField.constant(m, float(value))
    if isinstance(value, list):
        try:
            return PolynomialScalarField.from_terms(m, [(c, e) for c, e in value])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad polynomial at {path}: {exc}", field=path) from exc
    raise ConfigError(f"field {path} must be a number or a term list", field=path)


def build_A(sc, rng=None, spec=None, path="A"):
    spec = sc.raw.get("A", "zero") if spec is None else spec
    m = sc.dimension
    if spec == "zero":
        return OneFormField.zero(m)
    if spec == "random":
        if rng is None:
            rng = np.random.default_rng(sc.seed)
        return random_one_form(rng, m)
    if not isinstance(spec, dict):
        raise ConfigError("A must be 'zero', 'random' or an object", field=path)
    if "constant" in spec:
        return OneFormField.constant(_vector(spec["constant"], m, f"{path}.constant"))
    if "field_strength" in spec:
        pairs = {}
        for k, entry in enumerate(spec["field_strength"]):
            p = f"{path}.field_strength[{k}]"
            if not isinstance(entry, list) or len(entry) != 3:
                raise ConfigError(f"{p} must be [lambda, mu, value]", field=p)
            lam, mu, val = entry
            if not (isinstance(lam, int) and isinstance(mu, int) and 0 <= lam < m and 0 <= mu < m
                    and lam != mu):
                raise ConfigError(f"{p} has invalid indices", field=p)
            pairs[(lam, mu)] = _number(val, f"{p}[2]")
        offset = spec.get("offset")
        offset = None if offset is None else _vector(offset, m, f"{path}.offset")
        return OneFormField.uniform_field(field_strength_matrix(m, pairs), offset)
    if "components" in spec:
        comps = spec["components"]
        if not isinstance(comps, list) or len(comps) != m:
            raise ConfigError(f"{path}.components must list {m} polynomials",
                              field=f"{path}.components")
        return OneFormField([_polynomial(c, m, f"{path}.components[{i}]")
                             for i, c in enumerate(comps)])
    raise ConfigError("A needs 'constant', 'field_strength' or 'components'", field=path)


def build_lagrangian(sc, rng=None):
    return RelativisticLagrangian(build_G(sc, rng), build_A(sc, rng))


def build_integrator(sc):
    integ = sc.raw["integrator"]
    try:
        return IntegratorConfig(
            step=_number(integ["step"], "integrator.step"),
            t_end=_number(integ["t_end"], "integrator.t_end"),
            projection=bool(integ.get("projection", False)),
            drift_abort=_number(integ.get("drift_abort", 1e-6), "integrator.drift_abort"),
            method=integ.get("method", "rk4"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), field="integrator") from exc
