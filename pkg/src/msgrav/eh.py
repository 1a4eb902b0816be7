"""The second-order metric model: Lagrangian, momenta, Hamiltonian,
Poincare-Cartan 5-form, constraints, holonomy residuals, field-equation
contraction, and projectability checks.

Momenta are computed twice on purpose: once by tangent propagation through
the Lagrangian and once from the closed forms; the two routes referee the
ordered-index multiplicity conventions against each other. The closed-form
Hamiltonian sums over full index ranges, the sum form over ordered ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .exterior import (DenseCovector, FormTerm, contract_terms,
                       volume_factors)
from .fieldspace import (EH_DIM_J3, EHJetPoint, PointView, fiber_gradient,
                         fiber_jacobian, flat_index, total_derivatives_vec)
from .geometry import curvature_bundle, dg_matrices, metric_inverse_density
from .indexing import DIM, PAIRS, mult, pair_index
from .tangents import Jet2

NPAIR = len(PAIRS)


# -- generic fiber functions ------------------------------------------------

def lagrangian_fn(pt):
    """rho * g^{ab} R_ab; reaches the second-order coordinates only."""
    _, rho, _, _, _, scal = curvature_bundle(pt.g, pt.dg, pt.d2g)
    return rho * scal


def momenta2_closed_fn(pt):
    """Closed-form second-order momenta, flat list over (pair, pair).

    Component (ab, mn): (n(ab)/2) rho (g^{am} g^{bn} + g^{an} g^{bm}
    - 2 g^{ab} g^{mn}).
    """
    ginv, rho = metric_inverse_density(pt.g)
    out = []
    for (a, b) in PAIRS:
        na = mult(a, b)
        for (m, n) in PAIRS:
            out.append(0.5 * na * rho * (ginv[a][m] * ginv[b][n]
                                         + ginv[a][n] * ginv[b][m]
                                         - 2.0 * ginv[a][b] * ginv[m][n]))
    return out


def hamiltonian_closed_fn(pt):
    """rho g_{ab,m} g_{kl,n} H^{abklmn}, all six indices over full ranges."""
    ginv, rho = metric_inverse_density(pt.g)
    dgm = dg_matrices(pt.dg)
    # C_m = ginv . dgm_m ; E_m = ginv . dgm_m . ginv
    C, E, P = [], [], []
    for m in range(DIM):
        cm = [[sum(ginv[i][k] * dgm[m][k][j] for k in range(DIM))
               for j in range(DIM)] for i in range(DIM)]
        em = [[sum(cm[i][k] * ginv[k][j] for k in range(DIM))
               for j in range(DIM)] for i in range(DIM)]
        C.append(cm)
        E.append(em)
        P.append(sum(cm[i][i] for i in range(DIM)))
    h = 0.0
    for m in range(DIM):
        for n in range(DIM):
            tr_cc = sum(C[m][i][k] * C[n][k][i]
                        for i in range(DIM) for k in range(DIM))
            t3 = sum(E[m][k][n] * C[n][m][k] for k in range(DIM))
            h = h + 0.25 * ginv[m][n] * (P[m] * P[n] - tr_cc) \
                + 0.5 * t3 - 0.5 * P[m] * E[n][m][n]
    return rho * h


def hamiltonian_coefficient(pt, a, b, k, l, m, n):
    """H^{abklmn} evaluated on demand (full-range indices)."""
    ginv, _ = metric_inverse_density(pt.g)
    return (0.25 * ginv[a][b] * ginv[k][l] * ginv[m][n]
            - 0.25 * ginv[a][k] * ginv[b][l] * ginv[m][n]
            + 0.5 * ginv[a][k] * ginv[l][m] * ginv[b][n]
            - 0.5 * ginv[a][b] * ginv[l][n] * ginv[k][m])


def einstein_constraint_fn(pt):
    """-rho n(ab) (R^{ab} - g^{ab} R / 2), flat list over ordered pairs."""
    ginv, rho, _, _, ric, scal = curvature_bundle(pt.g, pt.dg, pt.d2g)
    out = []
    for (a, b) in PAIRS:
        r_up = 0.0
        for i in range(DIM):
            for j in range(DIM):
                r_up = r_up + ginv[a][i] * ginv[b][j] * ric[i][j]
        out.append(-rho * mult(a, b) * (r_up - 0.5 * ginv[a][b] * scal))
    return out


# -- coordinate id helpers --------------------------------------------------

_G_COORDS = [("g", a) for a in range(NPAIR)]
_DG_COORDS = [("dg", a, mu) for a in range(NPAIR) for mu in range(DIM)]
_D2G_COORDS = [("d2g", a, m) for a in range(NPAIR) for m in range(NPAIR)]
_GDG_COORDS = _G_COORDS + _DG_COORDS


# -- public operations ------------------------------------------------------

def lagrangian_eh(p: EHJetPoint) -> float:
    return float(lagrangian_fn(p))


@dataclass(frozen=True)
class EHMomenta:
    L2_ad: np.ndarray       # (10, 10): (1/n(mn)) dL/d g_{ab,mn}
    L2_closed: np.ndarray   # (10, 10): closed form
    L1: np.ndarray          # (10, 4)
    H_sum: float
    H_closed: float


def momenta2_ad(p: EHJetPoint) -> np.ndarray:
    """Second-order momenta by tangent propagation, with 1/n(mn) applied."""
    grad = fiber_gradient(lagrangian_fn, p, _D2G_COORDS).g
    out = grad.reshape(NPAIR, NPAIR).copy()
    for m, (mu, nu) in enumerate(PAIRS):
        out[:, m] /= mult(mu, nu)
    return out


def momenta1(p: EHJetPoint, l2_jac=None) -> np.ndarray:
    """First-order momenta: dL/d g_{ab,m} - sum_n D_n L^{ab,mn}.

    The total derivative only reaches the metric block because the closed
    second-order momenta depend on g alone.
    """
    dldv = fiber_gradient(lagrangian_fn, p, _DG_COORDS).g.reshape(NPAIR, DIM)
    if l2_jac is None:
        _, l2_jac = fiber_jacobian(momenta2_closed_fn, p, _G_COORDS)
    # D_n L2[c] = sum_b dL2[c]/dg_b * g_{b,n}
    dl2 = l2_jac @ p.dg  # (100, 4)
    out = dldv.copy()
    for a in range(NPAIR):
        for mu in range(DIM):
            out[a, mu] -= sum(dl2[a * NPAIR + pair_index(mu, nu), nu]
                              for nu in range(DIM))
    return out


def momenta_and_hamiltonian(p: EHJetPoint) -> EHMomenta:
    l2_ad = momenta2_ad(p)
    l2_vals, l2_jac = fiber_jacobian(momenta2_closed_fn, p, _G_COORDS)
    l2_closed = l2_vals.reshape(NPAIR, NPAIR)
    l1 = momenta1(p, l2_jac)
    # The second-order sum runs over full derivative-index ranges, which in
    # ordered storage is a multiplicity weight per column.
    nw = np.array([mult(m, n) for (m, n) in PAIRS], dtype=float)
    h_sum = (float(np.sum(l2_ad * p.d2g * nw[None, :]))
             + float(np.sum(l1 * p.dg)) - lagrangian_eh(p))
    return EHMomenta(L2_ad=l2_ad, L2_closed=l2_closed, L1=l1,
                     H_sum=h_sum, H_closed=float(hamiltonian_closed_fn(p)))


def constraint_einstein(p: EHJetPoint) -> np.ndarray:
    """The Einstein-equation constraints over ordered pairs."""
    return np.array(einstein_constraint_fn(p))


def constraint_einstein_derivative(p: EHJetPoint) -> np.ndarray:
    """Total derivatives of the Einstein constraints, (10, 4)."""
    if p.d4g is None:
        raise ConfigError("constraint derivative needs the order-4 block")
    return total_derivatives_vec(einstein_constraint_fn, p)


def holonomy_residuals(p: EHJetPoint, metric_series):
    """Residuals of the two holonomy equations against a section.

    The second equation's symmetrization is normalized per distinct
    ordering of the derivative pair, so prolongations are exact zeros.
    """
    def deriv(s, idx):
        m = [0] * DIM
        for mu in idx:
            m[mu] += 1
        return s.derivative(m)

    h1 = np.array([[p.dg[a, mu] - deriv(metric_series[a], (mu,))
                    for mu in range(DIM)] for a in range(NPAIR)])
    h2 = np.empty((NPAIR, NPAIR))
    for a in range(NPAIR):
        # x-derivatives of the section's first-order coordinate functions
        ddg = [[deriv(metric_series[a], (mu, nu)) for nu in range(DIM)]
               for mu in range(DIM)]
        for m, (mu, nu) in enumerate(PAIRS):
            sym = (ddg[mu][nu] + ddg[nu][mu]) / mult(mu, nu)
            if mu == nu:
                sym = ddg[mu][mu]
            h2[a, m] = p.d2g[a, m] - sym
    return h1, h2


# -- Poincare-Cartan form and field equations -------------------------------

def _dense(cids, values) -> np.ndarray:
    out = np.zeros(EH_DIM_J3)
    for cid, v in zip(cids, values):
        out[flat_index(cid)] = v
    return out


def _momenta1_differentials(p: EHJetPoint) -> np.ndarray:
    """Dense differentials of the 40 first-order momenta, (40, 354).

    Support is on the (g, dg) block: the remaining components vanish by
    the projectability of the form, which projectability_check verifies
    independently.
    """
    n1, n2 = len(_DG_COORDS), len(_GDG_COORDS)
    view = PointView(p)
    outer_pos = {cid: j for j, cid in enumerate(_GDG_COORDS)}
    for i, cid in enumerate(_DG_COORDS):
        j = outer_pos.get(cid)
        view.set(cid, Jet2.seed(view.get(cid), n1, n2, i1=i, i2=j))
    for cid in _G_COORDS:
        view.set(cid, Jet2.seed(view.get(cid), n1, n2, i2=outer_pos[cid]))
    mixed = lagrangian_fn(view).m  # (40, 50): d2 L / d dg d(g,dg)

    # d(D_n L2)/du: Hessian-times-dg part on g slots, Jacobian part on dg.
    n_in = len(_G_COORDS)
    view2 = PointView(p)
    for i, cid in enumerate(_G_COORDS):
        a = cid[1]
        view2.set(cid, Jet2(view2.get(cid),
                            np.eye(n_in)[i], p.dg[a], np.zeros((n_in, DIM))))
    l2_out = momenta2_closed_fn(view2)
    l2_jac = np.array([o.a for o in l2_out])        # (100, 10)
    l2_hdg = np.array([o.m for o in l2_out])        # (100, 10, 4)

    rows = np.zeros((n1, EH_DIM_J3))
    gdg_slots = np.array([flat_index(c) for c in _GDG_COORDS])
    g_slots = np.array([flat_index(c) for c in _G_COORDS])
    for k, (_, a, mu) in enumerate(_DG_COORDS):
        rows[k, gdg_slots] = mixed[k]
        for nu in range(DIM):
            c = a * NPAIR + pair_index(mu, nu)
            rows[k, g_slots] -= l2_hdg[c, :, nu]
            for b in range(NPAIR):
                rows[k, flat_index(("dg", b, nu))] -= l2_jac[c, b]
    return rows


def cartan_form_eh(p: EHJetPoint):
    """The 5-form as a term list: dH ^ d4x minus the two momenta blocks."""
    if p.d3g is None:
        raise ConfigError("the form lives on the order-3 jet space")
    terms = []
    dh = fiber_gradient(hamiltonian_closed_fn, p, _GDG_COORDS).g
    vol, _ = volume_factors()
    terms.append(FormTerm(1.0, tuple([DenseCovector(_dense(_GDG_COORDS, dh))]
                                     + vol)))

    dl1 = _momenta1_differentials(p)
    for k, (_, a, mu) in enumerate(_DG_COORDS):
        facs, sign = volume_factors(exclude=mu)
        terms.append(FormTerm(-sign, tuple(
            [DenseCovector(dl1[k]),
             DenseCovector(_dense([("g", a)], [1.0]))] + facs)))

    _, l2_jac = fiber_jacobian(momenta2_closed_fn, p, _G_COORDS)
    dl2 = np.zeros((NPAIR * NPAIR, EH_DIM_J3))
    g_slots = np.array([flat_index(c) for c in _G_COORDS])
    dl2[:, g_slots] = l2_jac
    for a in range(NPAIR):
        for mu in range(DIM):
            for nu in range(DIM):
                c = a * NPAIR + pair_index(mu, nu)
                facs, sign = volume_factors(exclude=nu)
                terms.append(FormTerm(-sign, tuple(
                    [DenseCovector(dl2[c]),
                     DenseCovector(_dense([("dg", a, mu)], [1.0]))] + facs)))
    return terms


def tangent_lifts(p: EHJetPoint) -> np.ndarray:
    """The four tangent lifts of the prolonged section, (4, 354)."""
    if p.d4g is None:
        raise ConfigError("tangent lifts of an order-3 point need the "
                          "order-4 block")
    from .fieldspace import _eh_shift_seeds
    seeds, _ = _eh_shift_seeds(p, list(range(DIM)), 3)
    lifts = np.zeros((DIM, EH_DIM_J3))
    for cid, vals in seeds.items():
        j = flat_index(cid)
        for tau in range(DIM):
            lifts[tau, j] = vals[tau]
    return lifts


def field_equation_covector(p: EHJetPoint) -> np.ndarray:
    """i(X0)...i(X3) of the 5-form, X_tau the section's tangent lifts."""
    terms = cartan_form_eh(p)
    lifts = tangent_lifts(p)
    return contract_terms(terms, list(lifts), EH_DIM_J3)


def verify_field_equation(p: EHJetPoint) -> float:
    return float(np.abs(field_equation_covector(p)).max())


# -- projectability ---------------------------------------------------------

def _perturbed(rng, arr):
    u = rng.uniform(-0.1, 0.1, size=arr.shape)
    return arr + u * (1.0 + np.abs(arr))


def projectability_check(p: EHJetPoint, trials: int, seed: int):
    """Randomize the order-2/3 blocks; the projectable data must not move.

    Returns (max deviation of H/L2/L1, max deviation of L itself); the
    second entry is the control showing L is genuinely second order.
    """
    rng = np.random.default_rng(seed)
    base = momenta_and_hamiltonian(p)
    base_l = lagrangian_eh(p)
    dev, control = 0.0, 0.0
    for _ in range(trials):
        q = EHJetPoint(x=p.x, g=p.g, dg=p.dg,
                       d2g=_perturbed(rng, p.d2g), d3g=_perturbed(rng, p.d3g),
                       d4g=p.d4g)
        m = momenta_and_hamiltonian(q)
        dev = max(dev,
                  abs(m.H_closed - base.H_closed),
                  abs(m.H_sum - base.H_sum),
                  float(np.abs(m.L2_closed - base.L2_closed).max()),
                  float(np.abs(m.L2_ad - base.L2_ad).max()),
                  float(np.abs(m.L1 - base.L1).max()))
        control = max(control, abs(lagrangian_eh(q) - base_l))
    return dev, control
