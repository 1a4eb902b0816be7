"""Jet coordinates for the second-order metric bundle and the first-order
metric-affine bundle, plus fiber differentiation and total derivatives.

Fiber functions are plain callables evaluated on a point view whose entries
may be floats, Tan/Jet2 tangents, or JetScalar series; differentiation is
tangent propagation through that generic arithmetic, never finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateMetricError
from .indexing import (DIM, PAIRS, QUADS, TRIPLES, pair_index, quad_index,
                       triple_index)
from .series import JetScalar
from .tangents import Tan

# Flat coordinate layout of the order-3 metric jet space:
# x(4), g(10), dg(10x4), d2g(10x10), d3g(10x20) -> 354 coordinates.
EH_NX = DIM
EH_NG = len(PAIRS)
EH_NDG = EH_NG * DIM
EH_ND2G = EH_NG * len(PAIRS)
EH_ND3G = EH_NG * len(TRIPLES)
EH_OFF = {"x": 0, "g": EH_NX, "dg": EH_NX + EH_NG,
          "d2g": EH_NX + EH_NG + EH_NDG,
          "d3g": EH_NX + EH_NG + EH_NDG + EH_ND2G}
EH_DIM_J3 = EH_NX + EH_NG + EH_NDG + EH_ND2G + EH_ND3G
EH_DIM_E = EH_NX + EH_NG

# First-order metric-affine bundle: x(4), g(10), Gamma(64), dg(40),
# dGamma(256) -> 374 coordinates; the underlying bundle has 78.
EP_NGAMMA = DIM ** 3
EP_OFF = {"x": 0, "g": EH_NX, "Gamma": EH_NX + EH_NG,
          "dg": EH_NX + EH_NG + EP_NGAMMA,
          "dGamma": EH_NX + EH_NG + EP_NGAMMA + EH_NDG}
EP_DIM_J1 = EH_NX + EH_NG + EP_NGAMMA + EH_NDG + EP_NGAMMA * DIM
EP_DIM_E = EH_NX + EH_NG + EP_NGAMMA


def _check_lorentzian(g10):
    m = np.zeros((DIM, DIM))
    for i, (a, b) in enumerate(PAIRS):
        m[a, b] = m[b, a] = g10[i]
    det = np.linalg.det(m)
    if abs(det) < 1e-14:
        raise DegenerateMetricError(f"metric determinant {det} is degenerate")
    ev = np.linalg.eigvalsh(m)
    if not (ev[0] < 0 and ev[1] > 0):
        raise DegenerateMetricError(f"metric signature is not (-,+,+,+): {ev}")


def _frozen(a):
    a = np.asarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class EHJetPoint:
    """A point of the order-3 metric jet space, optionally extended to order 4.

    Symmetric blocks are stored over ordered index tuples; `dg[a, mu]` is the
    first-order coordinate for metric pair `PAIRS[a]`, `d2g[a, m]` the
    second-order one for derivative pair `PAIRS[m]`, and so on.
    """

    x: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    d3g: np.ndarray
    d4g: np.ndarray | None = field(default=None)

    def __post_init__(self):
        shapes = {"x": (DIM,), "g": (EH_NG,), "dg": (EH_NG, DIM),
                  "d2g": (EH_NG, len(PAIRS)), "d3g": (EH_NG, len(TRIPLES))}
        for name, shape in shapes.items():
            arr = _frozen(getattr(self, name))
            if arr.shape != shape:
                raise ConfigError(f"{name} block has shape {arr.shape}, want {shape}")
            object.__setattr__(self, name, arr)
        if self.d4g is not None:
            arr = _frozen(self.d4g)
            if arr.shape != (EH_NG, len(QUADS)):
                raise ConfigError("order-4 block has wrong shape")
            object.__setattr__(self, "d4g", arr)
        _check_lorentzian(self.g)


@dataclass(frozen=True)
class EPJetPoint:
    """A point of the first-order metric-affine jet space.

    The connection carries no symmetry: all 64 components are independent.
    The optional second-derivative blocks extend a section for tangent lifts.
    """

    x: np.ndarray
    g: np.ndarray
    Gamma: np.ndarray
    dg: np.ndarray
    dGamma: np.ndarray
    d2g: np.ndarray | None = field(default=None)
    d2Gamma: np.ndarray | None = field(default=None)

    def __post_init__(self):
        shapes = {"x": (DIM,), "g": (EH_NG,), "Gamma": (DIM, DIM, DIM),
                  "dg": (EH_NG, DIM), "dGamma": (DIM, DIM, DIM, DIM)}
        for name, shape in shapes.items():
            arr = _frozen(getattr(self, name))
            if arr.shape != shape:
                raise ConfigError(f"{name} block has shape {arr.shape}, want {shape}")
            object.__setattr__(self, name, arr)
        for name, shape in (("d2g", (EH_NG, len(PAIRS))),
                            ("d2Gamma", (DIM, DIM, DIM, len(PAIRS)))):
            arr = getattr(self, name)
            if arr is not None:
                arr = _frozen(arr)
                if arr.shape != shape:
                    raise ConfigError(f"{name} extension has wrong shape")
                object.__setattr__(self, name, arr)
        _check_lorentzian(self.g)


# -- prolongation -----------------------------------------------------------

def _unit(mu):
    e = [0] * DIM
    e[mu] += 1
    return e


def prolong(metric_series, order: int = 3) -> EHJetPoint:
    """Lift 10 metric component series to a holonomic order-3 (or 4) point.

    Jet coordinates are m! times the Taylor coefficients, so the holonomy
    relations hold by construction.
    """
    if order not in (3, 4):
        raise ConfigError("prolongation order must be 3 or 4")
    s0 = metric_series[0]
    if len(metric_series) != EH_NG:
        raise ConfigError("need the 10 ordered metric component series")
    for s in metric_series:
        if s.base != s0.base or s.order != s0.order:
            raise ConfigError("metric series have mixed base points or orders")
        if s.order < order:
            raise ConfigError("metric series truncated below prolongation order")

    def deriv(s, idx):
        m = [0] * DIM
        for mu in idx:
            m[mu] += 1
        return s.derivative(m)

    g = np.array([s.derivative((0, 0, 0, 0)) for s in metric_series])
    dg = np.array([[deriv(s, (mu,)) for mu in range(DIM)] for s in metric_series])
    d2g = np.array([[deriv(s, p) for p in PAIRS] for s in metric_series])
    d3g = np.array([[deriv(s, t) for t in TRIPLES] for s in metric_series])
    d4g = None
    if order == 4:
        d4g = np.array([[deriv(s, q) for q in QUADS] for s in metric_series])
    return EHJetPoint(x=np.array(s0.base), g=g, dg=dg, d2g=d2g, d3g=d3g, d4g=d4g)


# -- lifted views and fiber differentiation ---------------------------------

class PointView:
    """Mutable nested-list copy of a jet point, entries of any scalar type."""

    __slots__ = ("x", "g", "dg", "d2g", "d3g", "d4g",
                 "Gamma", "dGamma", "d2Gamma")

    def __init__(self, p):
        for name in self.__slots__:
            arr = getattr(p, name, None)
            setattr(self, name, arr.tolist() if arr is not None else None)

    def set(self, cid, val):
        block, idx = cid[0], cid[1:]
        target = getattr(self, block)
        if target is None:
            raise ConfigError(f"point carries no {block} block")
        for i in idx[:-1]:
            target = target[i]
        target[idx[-1]] = val

    def get(self, cid):
        block, idx = cid[0], cid[1:]
        target = getattr(self, block)
        for i in idx:
            target = target[i]
        return target


def lift(p, seeds: dict) -> PointView:
    view = PointView(p)
    for cid, val in seeds.items():
        view.set(cid, val)
    return view


def fiber_gradient(f, p, coords) -> Tan:
    """Evaluate f with all listed fiber coordinates seeded at once."""
    n = len(coords)
    view = PointView(p)
    for i, cid in enumerate(coords):
        view.set(cid, Tan.seed(view.get(cid), n, i))
    out = f(view)
    if not isinstance(out, Tan):
        out = Tan(out, np.zeros(n))
    return out


def fiber_jacobian(f, p, coords):
    """Values and Jacobian of a fiber function returning a flat list."""
    n = len(coords)
    view = PointView(p)
    for i, cid in enumerate(coords):
        view.set(cid, Tan.seed(view.get(cid), n, i))
    out = f(view)
    vals = np.array([o.v if isinstance(o, Tan) else float(o) for o in out])
    jac = np.array([o.g if isinstance(o, Tan) else np.zeros(n) for o in out])
    return vals, jac


def fiber_partial(f, cid, p) -> float:
    """Exact partial of f with respect to one ordered fiber coordinate."""
    return float(fiber_gradient(f, p, [cid]).g[0])


def eh_coords(p, *, max_order=3, include_x=True):
    """Coordinate ids of the order-3 jet space, in flat layout order."""
    out = []
    if include_x:
        out += [("x", mu) for mu in range(DIM)]
    out += [("g", a) for a in range(EH_NG)]
    if max_order >= 1:
        out += [("dg", a, mu) for a in range(EH_NG) for mu in range(DIM)]
    if max_order >= 2:
        out += [("d2g", a, m) for a in range(EH_NG) for m in range(len(PAIRS))]
    if max_order >= 3:
        out += [("d3g", a, m) for a in range(EH_NG) for m in range(len(TRIPLES))]
    return out


def ep_coords(include_x=True):
    out = []
    if include_x:
        out += [("x", mu) for mu in range(DIM)]
    out += [("g", a) for a in range(EH_NG)]
    out += [("Gamma", l, m, n) for l in range(DIM) for m in range(DIM)
            for n in range(DIM)]
    out += [("dg", a, mu) for a in range(EH_NG) for mu in range(DIM)]
    out += [("dGamma", l, m, n, r) for l in range(DIM) for m in range(DIM)
            for n in range(DIM) for r in range(DIM)]
    return out


def flat_index(cid) -> int:
    """Position of a coordinate id in the flat layout of its jet space."""
    block, idx = cid[0], cid[1:]
    if block == "x":
        return idx[0]
    if block == "g":
        return EH_OFF["g"] + idx[0]
    if block == "dg":
        return EH_OFF["dg"] + idx[0] * DIM + idx[1]
    if block == "d2g":
        return EH_OFF["d2g"] + idx[0] * len(PAIRS) + idx[1]
    if block == "d3g":
        return EH_OFF["d3g"] + idx[0] * len(TRIPLES) + idx[1]
    raise ConfigError(f"no flat slot for coordinate {cid}")


def ep_flat_index(cid) -> int:
    block, idx = cid[0], cid[1:]
    if block == "x":
        return idx[0]
    if block == "g":
        return EP_OFF["g"] + idx[0]
    if block == "Gamma":
        l, m, n = idx
        return EP_OFF["Gamma"] + (l * DIM + m) * DIM + n
    if block == "dg":
        return EP_OFF["dg"] + idx[0] * DIM + idx[1]
    if block == "dGamma":
        l, m, n, r = idx
        return EP_OFF["dGamma"] + ((l * DIM + m) * DIM + n) * DIM + r
    raise ConfigError(f"no flat slot for coordinate {cid}")


# -- total derivatives ------------------------------------------------------

def _eh_shift_seeds(p: EHJetPoint, taus, max_order):
    """Seed values implementing the total-derivative coordinate shifts."""
    nt = len(taus)
    seeds = {}

    def put(cid, vals):
        seeds[cid] = vals

    for sigma in range(DIM):
        put(("x", sigma), [1.0 if sigma == t else 0.0 for t in taus])
    for a in range(EH_NG):
        put(("g", a), [p.dg[a, t] for t in taus])
        if max_order >= 1:
            for mu in range(DIM):
                put(("dg", a, mu), [p.d2g[a, pair_index(mu, t)] for t in taus])
        if max_order >= 2:
            for m, (mu, nu) in enumerate(PAIRS):
                put(("d2g", a, m), [p.d3g[a, triple_index(mu, nu, t)] for t in taus])
        if max_order >= 3:
            if p.d4g is None:
                raise ConfigError(
                    "total derivative of an order-3 coordinate needs the "
                    "order-4 block")
            for m, (mu, nu, lam) in enumerate(TRIPLES):
                put(("d3g", a, m),
                    [p.d4g[a, quad_index(mu, nu, lam, t)] for t in taus])
    return seeds, nt


def _ep_shift_seeds(p: EPJetPoint, taus, with_first_order):
    seeds = {}
    for sigma in range(DIM):
        seeds[("x", sigma)] = [1.0 if sigma == t else 0.0 for t in taus]
    for a in range(EH_NG):
        seeds[("g", a)] = [p.dg[a, t] for t in taus]
    for l in range(DIM):
        for m in range(DIM):
            for n in range(DIM):
                seeds[("Gamma", l, m, n)] = [p.dGamma[l, m, n, t] for t in taus]
    if with_first_order:
        if p.d2g is None or p.d2Gamma is None:
            raise ConfigError(
                "total derivative of first-order coordinates needs the "
                "section's second-derivative extension")
        for a in range(EH_NG):
            for mu in range(DIM):
                seeds[("dg", a, mu)] = [p.d2g[a, pair_index(mu, t)] for t in taus]
        for l in range(DIM):
            for m in range(DIM):
                for n in range(DIM):
                    for r in range(DIM):
                        seeds[("dGamma", l, m, n, r)] = [
                            p.d2Gamma[l, m, n, pair_index(r, t)] for t in taus]
    return seeds


def total_derivatives(f, p, taus=range(DIM), *, max_order=None,
                      with_first_order=True):
    """All requested total derivatives of f in one tangent pass.

    For an order-3 point the default seeds every coordinate, so the point
    must carry the order-4 block; pass max_order=2 when f only reaches the
    second-order coordinates.
    """
    taus = list(taus)
    if isinstance(p, EHJetPoint):
        if max_order is None:
            max_order = 3
        seeds, _ = _eh_shift_seeds(p, taus, max_order)
    else:
        seeds = _ep_shift_seeds(p, taus, with_first_order)
    n = len(taus)
    view = PointView(p)
    for cid, vals in seeds.items():
        view.set(cid, Tan(view.get(cid), vals))
    out = f(view)
    if not isinstance(out, Tan):
        return np.zeros(n)
    return out.g


def total_derivatives_vec(f, p, taus=range(DIM), *, max_order=None,
                          with_first_order=True):
    """total_derivatives for a fiber function returning a flat list."""
    taus = list(taus)
    if isinstance(p, EHJetPoint):
        seeds, _ = _eh_shift_seeds(p, taus, 3 if max_order is None else max_order)
    else:
        seeds = _ep_shift_seeds(p, taus, with_first_order)
    view = PointView(p)
    for cid, vals in seeds.items():
        view.set(cid, Tan(view.get(cid), vals))
    out = f(view)
    return np.array([o.g if isinstance(o, Tan) else np.zeros(len(taus))
                     for o in out])


def total_derivative(f, tau: int, p, **kw) -> float:
    """D_tau f: the base derivative plus the jet-coordinate shift terms."""
    return float(total_derivatives(f, p, [tau], **kw)[0])
