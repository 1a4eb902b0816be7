"""Built-in exact spacetimes and the metric definition file loader.

Every metric — built in or user supplied — is ten component expressions in
the coordinates x0..x3 plus parameters; evaluation on truncated-series
coordinates produces the jets that feed the two models. Connections for
the metric-affine model default to Levi-Civita and can be overridden
componentwise from a file.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .exprparse import (FUNCTIONS, VARIABLES, evaluate, free_names,
                        parse_expression)
from .fieldspace import EHJetPoint, EPJetPoint, prolong
from .geometry import christoffel, dg_matrices, metric_inverse_density
from .indexing import DIM, PAIRS, pair_index
from .series import JetScalar


@dataclass(frozen=True)
class MetricSpec:
    """Ten component expressions with parameters, sample box, vacuum flag."""

    name: str
    components: tuple          # 10 syntax trees, ordered-pair layout
    params: dict = field(default_factory=dict)
    domain: tuple = (((-1.0, 1.0),) * DIM)
    vacuum: str = "unknown"    # yes | no | unknown
    connection: dict = field(default_factory=dict)  # (l,m,n) -> syntax tree

    def __post_init__(self):
        if len(self.components) != len(PAIRS):
            raise ConfigError("a metric needs its 10 ordered components")
        if len(self.domain) != DIM:
            raise ConfigError("the sample box needs 4 intervals")
        for lo, hi in self.domain:
            if not lo < hi:
                raise ConfigError(f"empty domain interval {lo}..{hi}")
        if self.vacuum not in ("yes", "no", "unknown"):
            raise ConfigError(f"bad vacuum flag {self.vacuum!r}")
        known = set(VARIABLES) | set(self.params)
        for c in tuple(self.components) + tuple(self.connection.values()):
            unknown = free_names(c) - known
            if unknown:
                raise ConfigError(
                    f"unknown identifier {sorted(unknown)[0]!r} in metric "
                    f"{self.name!r}")

    def contains(self, x) -> bool:
        return all(lo <= xi <= hi for xi, (lo, hi) in zip(x, self.domain))


def _env_at(spec: MetricSpec, x, order: int) -> dict:
    env = {f"x{i}": JetScalar.variable(i, tuple(x), order=order)
           for i in range(DIM)}
    env.update(spec.params)
    return env


def metric_jet_at(spec: MetricSpec, x, order: int = 4):
    """The ten component series centered at x, ready for prolongation."""
    if not spec.contains(x):
        raise DomainError(f"point {tuple(x)} outside the sample box of "
                          f"{spec.name!r}")
    env = _env_at(spec, x, order)
    const = JetScalar.constant(0.0, tuple(x), order=order)
    out = []
    for c in spec.components:
        v = evaluate(c, env)
        out.append(v if isinstance(v, JetScalar) else const + v)
    return out


def eh_point_at(spec: MetricSpec, x, order: int = 4) -> EHJetPoint:
    return prolong(metric_jet_at(spec, x, order=order), order=order)


def ep_point_at(spec: MetricSpec, x) -> EPJetPoint:
    """First-order metric-affine point over x: the metric jet with its
    Levi-Civita connection (or file overrides), extended with the second
    derivatives needed for tangent lifts."""
    series = metric_jet_at(spec, x, order=4)
    ks = series[0].order - 1
    g_tr = [s.truncate(ks) for s in series]
    dg_tr = [[s.partial(mu) for mu in range(DIM)] for s in series]
    ginv, _ = metric_inverse_density(g_tr)
    gam = christoffel(ginv, dg_matrices(dg_tr))
    if spec.connection:
        env = _env_at(spec, x, ks)
        const = JetScalar.constant(0.0, tuple(x), order=ks)
        for (l, m, n), tree in spec.connection.items():
            v = evaluate(tree, env)
            gam[l][m][n] = v if isinstance(v, JetScalar) else const + v

    def deriv(s, idx):
        mlt = [0] * DIM
        for mu in idx:
            mlt[mu] += 1
        return s.derivative(mlt)

    Gamma = np.array([[[gam[a][b][c].value() for c in range(DIM)]
                       for b in range(DIM)] for a in range(DIM)])
    dGamma = np.array([[[[deriv(gam[a][b][c], (r,)) for r in range(DIM)]
                         for c in range(DIM)]
                        for b in range(DIM)] for a in range(DIM)])
    d2Gamma = np.array([[[[deriv(gam[a][b][c], pr) for pr in PAIRS]
                          for c in range(DIM)]
                         for b in range(DIM)] for a in range(DIM)])
    g = np.array([s.value() for s in series])
    dg = np.array([[deriv(s, (mu,)) for mu in range(DIM)] for s in series])
    d2g = np.array([[deriv(s, pr) for pr in PAIRS] for s in series])
    return EPJetPoint(x=np.asarray(x, dtype=float), g=g, Gamma=Gamma, dg=dg,
                      dGamma=dGamma, d2g=d2g, d2Gamma=d2Gamma)


def _validate(spec: MetricSpec) -> MetricSpec:
    """Spot-check nondegenerate Lorentzian signature on a 3^4 grid."""
    axes = [np.linspace(lo, hi, 3) for (lo, hi) in spec.domain]
    for x in itertools.product(*axes):
        env = {f"x{i}": float(x[i]) for i in range(DIM)}
        env.update(spec.params)
        m = np.zeros((DIM, DIM))
        for i, (a, b) in enumerate(PAIRS):
            m[a, b] = m[b, a] = evaluate(spec.components[i], env)
        det = np.linalg.det(m)
        ev = np.linalg.eigvalsh(m)
        if abs(det) < 1e-14 or ev[0] >= 0 or ev[1] <= 0:
            raise DomainError(
                f"metric {spec.name!r} is not Lorentzian at grid point "
                f"{tuple(float(v) for v in x)}")
    return spec


def _spec(name, diag=None, entries=None, params=None, domain=None,
          vacuum="unknown"):
    comps = ["0"] * len(PAIRS)
    if diag is not None:
        for mu in range(DIM):
            comps[pair_index(mu, mu)] = diag[mu]
    for (a, b), text in (entries or {}).items():
        comps[pair_index(a, b)] = text
    return _validate(MetricSpec(
        name=name, components=tuple(parse_expression(c) for c in comps),
        params=dict(params or {}),
        domain=tuple(domain) if domain else (((-1.0, 1.0),) * DIM),
        vacuum=vacuum))


# -- builtin registry -------------------------------------------------------

def _kasner(p1=2.0 / 3.0, p2=2.0 / 3.0, p3=-1.0 / 3.0):
    ps = (p1, p2, p3)
    vac = (abs(sum(ps) - 1) < 1e-12 and abs(sum(p * p for p in ps) - 1) < 1e-12)
    return _spec(
        "kasner",
        diag=["-1"] + [f"exp(2*p{i}*ln(x0))" for i in (1, 2, 3)],
        params={"p1": p1, "p2": p2, "p3": p3},
        domain=[(1.0, 3.0)] + [(-1.0, 1.0)] * 3,
        vacuum="yes" if vac else "no")


def _flrw(a="1 + 0.1*x0"):
    sq = f"({a})*({a})"
    return _spec("flrw", diag=["-1", sq, sq, sq],
                 domain=[(0.0, 2.0)] + [(-1.0, 1.0)] * 3, vacuum="no")


_BUILTINS = {
    "minkowski": lambda: _spec("minkowski", diag=["-1", "1", "1", "1"],
                               vacuum="yes"),
    "spherical-flat": lambda: _spec(
        "spherical-flat",
        diag=["-1", "1", "x1^2", "x1^2*sin(x2)^2"],
        domain=[(-1.0, 1.0), (1.0, 3.0), (0.3, 2.8), (0.0, 6.0)],
        vacuum="yes"),
    "schwarzschild": lambda m=1.0: _spec(
        "schwarzschild",
        diag=["-(1 - 2*m/x1)", "1/(1 - 2*m/x1)", "x1^2",
              "x1^2*sin(x2)^2"],
        params={"m": m},
        domain=[(-1.0, 1.0), (3.0 * m, 10.0 * m), (0.3, 2.8), (0.0, 6.0)],
        vacuum="yes"),
    "kasner": _kasner,
    "ppwave": lambda: _spec(
        "ppwave", diag=["x2^2 - x3^2", "0", "1", "1"],
        entries={(0, 1): "1"}, vacuum="yes"),
    "flrw": _flrw,
    "desitter": lambda H=1.0: _spec(
        "desitter",
        diag=["-1", "exp(2*H*x0)", "exp(2*H*x0)", "exp(2*H*x0)"],
        params={"H": H}, domain=[(0.0, 1.0)] + [(-1.0, 1.0)] * 3,
        vacuum="no"),
}


def list_builtins():
    return sorted(_BUILTINS)


def builtin(name: str, **params) -> MetricSpec:
    if name not in _BUILTINS:
        raise ConfigError(f"unknown builtin metric {name!r}")
    try:
        return _BUILTINS[name](**params)
    except TypeError:
        raise ConfigError(f"bad parameters for builtin {name!r}: {params}")


# -- metric definition files ------------------------------------------------

def load_metric_file(path: str) -> MetricSpec:
    """INI-like format: [metric] with `g a b = expr` lines and `name = ..`,
    [params], [domain] with `xN = lo..hi`, optional [connection] with
    `Gamma l m n = expr`. UTF-8; `#` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read metric file {path!r}: {e}")

    name = "user-metric"
    comps = {i: "0" for i in range(len(PAIRS))}
    params, domain, conn, vacuum = {}, {}, {}, "unknown"
    section = None
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("metric", "params", "domain", "connection"):
                raise ConfigError(f"line {lineno}: unknown section "
                                  f"[{section}]")
            continue
        if section is None or "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if section == "metric":
            if key == "name":
                name = val
            elif key == "vacuum":
                vacuum = val
            else:
                parts = key.split()
                if len(parts) != 3 or parts[0] != "g":
                    raise ConfigError(f"line {lineno}: expected `g a b = "
                                      f"expr`, got {key!r}")
                try:
                    a, b = int(parts[1]), int(parts[2])
                    comps[pair_index(a, b)] = val
                except (ValueError, IndexError):
                    raise ConfigError(f"line {lineno}: bad metric indices "
                                      f"{key!r}")
        elif section == "params":
            try:
                params[key] = float(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: parameter {key!r} is "
                                  f"not a number")
        elif section == "domain":
            if not (len(key) == 2 and key[0] == "x" and key[1].isdigit()):
                raise ConfigError(f"line {lineno}: expected `xN = lo..hi`")
            lo, sep, hi = val.partition("..")
            if not sep:
                raise ConfigError(f"line {lineno}: expected `lo..hi`")
            try:
                domain[int(key[1])] = (float(lo), float(hi))
            except ValueError:
                raise ConfigError(f"line {lineno}: bad interval {val!r}")
        else:  # connection
            parts = key.split()
            if len(parts) != 4 or parts[0] != "Gamma":
                raise ConfigError(f"line {lineno}: expected `Gamma l m n = "
                                  f"expr`")
            try:
                l, m, n = (int(v) for v in parts[1:])
            except ValueError:
                raise ConfigError(f"line {lineno}: bad connection indices")
            if not all(0 <= v < DIM for v in (l, m, n)):
                raise ConfigError(f"line {lineno}: connection indices out "
                                  f"of range")
            conn[(l, m, n)] = val

    box = tuple(domain.get(i, (-1.0, 1.0)) for i in range(DIM))
    spec = MetricSpec(
        name=name,
        components=tuple(parse_expression(comps[i])
                         for i in range(len(PAIRS))),
        params=params, domain=box, vacuum=vacuum,
        connection={k: parse_expression(v) for k, v in conn.items()})
    return _validate(spec)
