"""The first-order metric-affine model: Lagrangian, momenta, Hamiltonian,
Poincare-Cartan 5-form, the five constraint families, the projective gauge
shift, and projectability checks.

The connection is an independent field with no symmetry assumed; curvature
comes from the same generic Ricci polynomial as the metric model, which is
what makes the torsionless-metric gauge comparison a genuine cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .exterior import (CoordDifferential, DenseCovector, FormTerm,
                       contract_terms, volume_factors)
from .fieldspace import (EP_DIM_J1, EPJetPoint, PointView, _ep_shift_seeds,
                         ep_flat_index, fiber_gradient, fiber_jacobian)
from .geometry import (metric_inverse_density, metric_matrix,
                       ricci_from_connection_generic, scalar_curvature)
from .indexing import APAIRS, DIM, PAIRS
from .tangents import Jet2

NPAIR = len(PAIRS)


# -- generic fiber functions ------------------------------------------------

def lagrangian_fn(pt):
    """rho g^{ab} R_ab(Gamma, dGamma); never reads dg."""
    ginv, rho = metric_inverse_density(pt.g)
    ric = ricci_from_connection_generic(pt.Gamma, pt.dGamma)
    return rho * scalar_curvature(ginv, ric)


def momenta_closed_fn(pt):
    """Closed-form momenta rho (g^{cb} d^s_a - g^{cs} d^b_a), flat 256 list.

    Component order matches the (a, b, c, s) layout of the derivative
    coordinates Gamma^a_{bc,s}.
    """
    ginv, rho = metric_inverse_density(pt.g)
    out = []
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                for s in range(DIM):
                    v = 0.0
                    if s == a:
                        v = v + ginv[c][b]
                    if b == a:
                        v = v - ginv[c][s]
                    out.append(rho * v)
    return out


def hamiltonian_fn(pt):
    """Legendre combination; linearity of L in dGamma kills all dGamma terms,
    so the result depends on (g, Gamma) alone."""
    lmom = momenta_closed_fn(pt)
    h = 0.0
    i = 0
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                for s in range(DIM):
                    h = h + lmom[i] * pt.dGamma[a][b][c][s]
                    i += 1
    return h - lagrangian_fn(pt)


# -- coordinate id helpers --------------------------------------------------

_G_COORDS = [("g", a) for a in range(NPAIR)]
_GAMMA_COORDS = [("Gamma", a, b, c) for a in range(DIM)
                 for b in range(DIM) for c in range(DIM)]
_DGAMMA_COORDS = [("dGamma", a, b, c, s) for a in range(DIM)
                  for b in range(DIM) for c in range(DIM) for s in range(DIM)]
_GGAMMA_COORDS = _G_COORDS + _GAMMA_COORDS


# -- momenta and Hamiltonian ------------------------------------------------

@dataclass(frozen=True)
class EPMomenta:
    Lmom_ad: np.ndarray      # (4, 4, 4, 4): d L / d Gamma^a_{bc,s}
    Lmom_closed: np.ndarray
    H: float


def lagrangian_ep(p: EPJetPoint) -> float:
    return float(lagrangian_fn(p))


def momenta_ep(p: EPJetPoint) -> EPMomenta:
    ad = fiber_gradient(lagrangian_fn, p, _DGAMMA_COORDS).g.reshape(
        DIM, DIM, DIM, DIM)
    closed = np.array(momenta_closed_fn(PointView(p))).reshape(
        DIM, DIM, DIM, DIM)
    return EPMomenta(Lmom_ad=ad, Lmom_closed=closed,
                     H=float(hamiltonian_fn(PointView(p))))


# -- constraint families ----------------------------------------------------

def constraint_c0(p: EPJetPoint) -> np.ndarray:
    """dH/dg minus the momenta-variation term, over ordered metric pairs.

    One mixed-second-order pass: the inner tangent is the single direction
    along the point's own dGamma values, the outer seeds are the 10 metric
    coordinates, so the mixed block is exactly d(Lmom . dGamma)/dg.
    """
    view = PointView(p)
    for cid in _DGAMMA_COORDS:
        val = view.get(cid)
        view.set(cid, Jet2(val, np.array([val]), np.zeros(NPAIR),
                           np.zeros((1, NPAIR))))
    for j, cid in enumerate(_G_COORDS):
        view.set(cid, Jet2.seed(view.get(cid), 1, NPAIR, i2=j))
    out = lagrangian_fn(view)
    dmom_dot = out.m[0]            # d(Lmom . dGamma)/dg
    dh_dg = dmom_dot - out.b       # H = Lmom . dGamma - L
    return dh_dg - dmom_dot


def trace_removal(T: np.ndarray) -> np.ndarray:
    """Remove the delta-trace part of a (1,2) tensor antisymmetric below."""
    tr = np.einsum("mmg->g", T)
    out = T.copy()
    for a in range(DIM):
        out[a, a, :] -= tr / 3.0
        out[a, :, a] += tr / 3.0
    return out


def _apairs_of(T3: np.ndarray) -> np.ndarray:
    return np.array([[T3[a, b, c] for (b, c) in APAIRS] for a in range(DIM)])


def constraint_premetricity(p: EPJetPoint) -> np.ndarray:
    """Compatibility of the metric derivative with the connection up to the
    projective trace part, (10, 4) over (ordered pair, direction)."""
    gm = np.array(metric_matrix(p.g))
    gam = p.Gamma
    ttr = np.einsum("llm->m", gam) - np.einsum("lml->m", gam)
    out = np.empty((NPAIR, DIM))
    for i, (r, s) in enumerate(PAIRS):
        for mu in range(DIM):
            out[i, mu] = (p.dg[i, mu]
                          - float(gm[s] @ gam[:, mu, r])
                          - float(gm[r] @ gam[:, mu, s])
                          - (2.0 / 3.0) * gm[r, s] * ttr[mu])
    return out


def constraint_torsion(p: EPJetPoint) -> np.ndarray:
    """Trace-removed torsion, (4, 6) over the antisymmetric lower pair."""
    T = p.Gamma - np.transpose(p.Gamma, (0, 2, 1))
    return _apairs_of(trace_removal(T))


def constraint_torsion_deriv(p: EPJetPoint) -> np.ndarray:
    """Trace-removed torsion derivative, (4, 6, 4)."""
    dT = p.dGamma - np.transpose(p.dGamma, (0, 2, 1, 3))
    out = np.empty((DIM, len(APAIRS), DIM))
    for nu in range(DIM):
        out[:, :, nu] = _apairs_of(trace_removal(dT[:, :, :, nu]))
    return out


def constraint_integrability(p: EPJetPoint) -> np.ndarray:
    """Antisymmetrized closure conditions, (10, 6) over (ordered metric
    pair, antisymmetric direction pair); each bracket is (f(mu,nu) -
    f(nu,mu))/2 on the two direction slots."""
    gm = np.array(metric_matrix(p.g))
    gam = p.Gamma
    dgam = p.dGamma
    dttr = (np.einsum("llmn->mn", dgam) - np.einsum("lmln->mn", dgam))

    def expr(r, s, mu, nu):
        # orientation of each bracket follows its displayed slot order
        t1 = 0.5 * (np.einsum("g,gl,l->", gm[r], gam[:, nu, :], gam[:, mu, s])
                    - np.einsum("g,gl,l->", gm[r], gam[:, mu, :], gam[:, nu, s]))
        t2 = 0.5 * (np.einsum("g,gl,l->", gm[s], gam[:, nu, :], gam[:, mu, r])
                    - np.einsum("g,gl,l->", gm[s], gam[:, mu, :], gam[:, nu, r]))
        t3 = 0.5 * float(gm[r] @ (dgam[:, mu, s, nu] - dgam[:, nu, s, mu]))
        t4 = 0.5 * float(gm[s] @ (dgam[:, mu, r, nu] - dgam[:, nu, r, mu]))
        t5 = (1.0 / 3.0) * gm[r, s] * (dttr[mu, nu] - dttr[nu, mu])
        return t1 + t2 + t3 + t4 + t5

    return np.array([[expr(r, s, mu, nu) for (mu, nu) in APAIRS]
                     for (r, s) in PAIRS])


# -- gauge and projectability -----------------------------------------------

def projective_shift(p: EPJetPoint, A, dA=None) -> EPJetPoint:
    """Shift the connection along the projective gauge direction.

    The second-derivative extensions are dropped: they would need the
    second derivative of the gauge covector to stay consistent.
    """
    A = np.asarray(A, dtype=float)
    dA = np.zeros((DIM, DIM)) if dA is None else np.asarray(dA, dtype=float)
    gam = p.Gamma.copy()
    dgam = p.dGamma.copy()
    for c in range(DIM):
        gam[c, :, c] += A
        dgam[c, :, c, :] += dA
    return EPJetPoint(x=p.x, g=p.g, Gamma=gam, dg=p.dg, dGamma=dgam,
                      d2g=p.d2g, d2Gamma=None)


def _perturbed(rng, arr):
    u = rng.uniform(-0.1, 0.1, size=arr.shape)
    return arr + u * (1.0 + np.abs(arr))


def projectability_check_ep(p: EPJetPoint, trials: int, seed: int):
    """Randomize the first-order blocks; momenta and Hamiltonian must hold
    still. Returns (max deviation, max Lagrangian deviation as control,
    max H deviation under dGamma-only randomization)."""
    rng = np.random.default_rng(seed)
    base = momenta_ep(p)
    base_l = lagrangian_ep(p)
    dev, control, h_dgamma = 0.0, 0.0, 0.0
    for _ in range(trials):
        q = EPJetPoint(x=p.x, g=p.g, Gamma=p.Gamma,
                       dg=_perturbed(rng, p.dg),
                       dGamma=_perturbed(rng, p.dGamma))
        m = momenta_ep(q)
        dev = max(dev, abs(m.H - base.H),
                  float(np.abs(m.Lmom_ad - base.Lmom_ad).max()),
                  float(np.abs(m.Lmom_closed - base.Lmom_closed).max()))
        control = max(control, abs(lagrangian_ep(q) - base_l))
        q2 = EPJetPoint(x=p.x, g=p.g, Gamma=p.Gamma, dg=p.dg,
                        dGamma=_perturbed(rng, p.dGamma))
        h_dgamma = max(h_dgamma, abs(momenta_ep(q2).H - base.H))
    return dev, control, h_dgamma


# -- Poincare-Cartan form and field equations -------------------------------

def _dense(cids, values) -> np.ndarray:
    out = np.zeros(EP_DIM_J1)
    for cid, v in zip(cids, values):
        out[ep_flat_index(cid)] = v
    return out


def cartan_form_ep(p: EPJetPoint):
    """dH ^ d4x minus one momenta block per connection coordinate.

    Both dH and the momenta differentials are supported on (g, Gamma),
    which projectability_check_ep verifies independently; for the momenta
    the closed form shows the support is the metric block alone.
    """
    terms = []
    dh = fiber_gradient(hamiltonian_fn, p, _GGAMMA_COORDS).g
    vol, _ = volume_factors()
    terms.append(FormTerm(1.0, tuple(
        [DenseCovector(_dense(_GGAMMA_COORDS, dh))] + vol)))

    _, lmom_jac = fiber_jacobian(momenta_closed_fn, p, _G_COORDS)  # (256,10)
    g_slots = np.array([ep_flat_index(c) for c in _G_COORDS])
    k = 0
    for a in range(DIM):
        for b in range(DIM):
            for c in range(DIM):
                for mu in range(DIM):
                    facs, sign = volume_factors(exclude=mu)
                    cov = np.zeros(EP_DIM_J1)
                    cov[g_slots] = lmom_jac[k]
                    terms.append(FormTerm(-sign, tuple(
                        [DenseCovector(cov),
                         CoordDifferential(
                             ep_flat_index(("Gamma", a, b, c)))] + facs)))
                    k += 1
    return terms


def tangent_lifts_ep(p: EPJetPoint) -> np.ndarray:
    """The four tangent lifts of the prolonged section, (4, 374)."""
    if p.d2g is None or p.d2Gamma is None:
        raise ConfigError("tangent lifts need the section's "
                          "second-derivative extensions")
    seeds = _ep_shift_seeds(p, list(range(DIM)), True)
    lifts = np.zeros((DIM, EP_DIM_J1))
    for cid, vals in seeds.items():
        j = ep_flat_index(cid)
        for tau in range(DIM):
            lifts[tau, j] = vals[tau]
    return lifts


def field_equation_covector_ep(p: EPJetPoint) -> np.ndarray:
    terms = cartan_form_ep(p)
    return contract_terms(terms, list(tangent_lifts_ep(p)), EP_DIM_J1)


def verify_field_equation_ep(p: EPJetPoint) -> float:
    return float(np.abs(field_equation_covector_ep(p)).max())
