"""Curvature and connection computations.

All kernels are written over generic scalar arithmetic, so the same code
runs on plain floats, on Tan/Jet2 tangents (fiber differentiation), and on
JetScalar series (base-space differentiation along a section).

The Ricci convention is fixed by the first-order Lagrangian display:
R_ab = G^c_{ba,c} - G^c_{ca,b} + G^c_{ba} G^s_{sc} - G^c_{bs} G^s_{ca},
which reduces to the usual Levi-Civita Ricci for symmetric connections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError
from .indexing import APAIRS, DIM, PAIRS, full_to_sym10, pair_index
from .tangents import sabs, ssqrt, value_of


# -- generic kernels --------------------------------------------------------

def metric_matrix(g10):
    """Ordered-pair storage -> symmetric 4x4 nested list."""
    m = [[None] * DIM for _ in range(DIM)]
    for i, (a, b) in enumerate(PAIRS):
        m[a][b] = g10[i]
        m[b][a] = g10[i]
    return m


def det4(m):
    """Laplace expansion along the first row."""
    total = 0.0
    for j in range(DIM):
        cols = [c for c in range(DIM) if c != j]
        r1, r2, r3 = m[1], m[2], m[3]
        minor = (r1[cols[0]] * (r2[cols[1]] * r3[cols[2]] - r2[cols[2]] * r3[cols[1]])
                 - r1[cols[1]] * (r2[cols[0]] * r3[cols[2]] - r2[cols[2]] * r3[cols[0]])
                 + r1[cols[2]] * (r2[cols[0]] * r3[cols[1]] - r2[cols[1]] * r3[cols[0]]))
        total = total + ((-1) ** j) * m[0][j] * minor
    return total


def inverse4(m, det=None):
    """Exact inverse by cofactors."""
    if det is None:
        det = det4(m)
    inv = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        rows = [r for r in range(DIM) if r != i]
        for j in range(DIM):
            cols = [c for c in range(DIM) if c != j]
            a, b, c = (m[rows[0]], m[rows[1]], m[rows[2]])
            minor = (a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]])
                     - a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]])
                     + a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]))
            inv[j][i] = ((-1) ** (i + j)) * minor / det
    return inv


def metric_inverse_density(g10):
    """(inverse matrix, rho = sqrt(|det g|)) from ordered storage."""
    m = metric_matrix(g10)
    det = det4(m)
    if abs(value_of(det)) < 1e-14:
        raise DegenerateMetricError("metric is degenerate at this point")
    return inverse4(m, det), ssqrt(sabs(det))


def dg_matrices(dg):
    """Per-direction symmetric matrices of the first-order coordinates."""
    return [metric_matrix([dg[a][mu] for a in range(len(PAIRS))])
            for mu in range(DIM)]


def christoffel(ginv, dgm):
    """Levi-Civita coefficients from the inverse metric and dg matrices."""
    gam = [[[None] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for mu in range(DIM):
        for nu in range(mu, DIM):
            for rho in range(DIM):
                s = 0.0
                for sig in range(DIM):
                    s = s + ginv[rho][sig] * (dgm[mu][sig][nu] + dgm[nu][sig][mu]
                                              - dgm[sig][mu][nu])
                val = 0.5 * s
                gam[rho][mu][nu] = val
                gam[rho][nu][mu] = val
    return gam


def dchristoffel(ginv, dgm, d2g):
    """x-derivatives of the Levi-Civita coefficients via the chain rule.

    d2g is ordered second-order storage; returns dGam[rho][mu][nu][sig].
    """
    npair = len(PAIRS)
    # d(ginv)/dx^sig = -ginv . dg_sig . ginv
    dginv = []
    for sig in range(DIM):
        t = [[sum(ginv[i][k] * dgm[sig][k][l] for k in range(DIM))
              for l in range(DIM)] for i in range(DIM)]
        dginv.append([[-sum(t[i][l] * ginv[l][j] for l in range(DIM))
                       for j in range(DIM)] for i in range(DIM)])

    _pi = pair_index
    dgam = [[[[None] * DIM for _ in range(DIM)] for _ in range(DIM)]
            for _ in range(DIM)]
    for mu in range(DIM):
        for nu in range(mu, DIM):
            for rho in range(DIM):
                for sig in range(DIM):
                    s = 0.0
                    for lam in range(DIM):
                        bracket = (dgm[mu][lam][nu] + dgm[nu][lam][mu]
                                   - dgm[lam][mu][nu])
                        dbracket = (d2g[_pi(lam, nu)][_pi(mu, sig)]
                                    + d2g[_pi(lam, mu)][_pi(nu, sig)]
                                    - d2g[_pi(mu, nu)][_pi(lam, sig)])
                        s = s + dginv[sig][rho][lam] * bracket \
                            + ginv[rho][lam] * dbracket
                    val = 0.5 * s
                    dgam[rho][mu][nu][sig] = val
                    dgam[rho][nu][mu][sig] = val
    return dgam


def ricci_from_connection_generic(gam, dgam):
    """The Lagrangian-display Ricci polynomial in Gamma and its derivatives."""
    trace = [sum(gam[s][s][g] for s in range(DIM)) for g in range(DIM)]
    ric = [[None] * DIM for _ in range(DIM)]
    for a in range(DIM):
        for b in range(DIM):
            s = 0.0
            for c in range(DIM):
                s = s + dgam[c][b][a][c] - dgam[c][c][a][b]
                s = s + gam[c][b][a] * trace[c]
                for sig in range(DIM):
                    s = s - gam[c][b][sig] * gam[sig][c][a]
            ric[a][b] = s
    return ric


def scalar_curvature(ginv, ric):
    s = 0.0
    for a in range(DIM):
        for b in range(DIM):
            s = s + ginv[a][b] * ric[a][b]
    return s


def curvature_bundle(g10, dg, d2g):
    """ginv, rho, Gamma, dGamma, Ricci, R for the Levi-Civita connection."""
    ginv, rho = metric_inverse_density(g10)
    dgm = dg_matrices(dg)
    gam = christoffel(ginv, dgm)
    dgam = dchristoffel(ginv, dgm, d2g)
    ric = ricci_from_connection_generic(gam, dgam)
    return ginv, rho, gam, dgam, ric, scalar_curvature(ginv, ric)


# -- public float-level operations -----------------------------------------

@dataclass(frozen=True)
class CurvatureSuite:
    """Curvature data of a metric 2-jet with its Levi-Civita connection."""

    ginv: np.ndarray        # 10 ordered components of the inverse metric
    rho: float              # sqrt(|det g|)
    gamma: np.ndarray       # (4, 10): symmetric lower pair
    ricci: np.ndarray       # (4, 4)
    scalar: float
    einstein_lower: np.ndarray  # 10 ordered
    einstein_upper: np.ndarray  # 10 ordered


def inverse_and_density(g10):
    """Exact inverse metric (ordered storage) and metric density."""
    ginv, rho = metric_inverse_density(np.asarray(g10, dtype=float))
    return full_to_sym10(ginv).astype(float), float(rho)


def christoffel_lc(g10, dg):
    """Levi-Civita coefficients, (4, 10) over the symmetric lower pair."""
    ginv, _ = metric_inverse_density(np.asarray(g10, dtype=float))
    gam = christoffel(ginv, dg_matrices(np.asarray(dg, dtype=float)))
    return np.array([[gam[rho][m][n] for (m, n) in PAIRS] for rho in range(DIM)])


def gamma_full(gamma_sym):
    """(4, 10) symmetric storage -> full (4, 4, 4) array."""
    out = np.empty((DIM, DIM, DIM))
    for rho in range(DIM):
        for i, (m, n) in enumerate(PAIRS):
            out[rho, m, n] = gamma_sym[rho, i]
            out[rho, n, m] = gamma_sym[rho, i]
    return out


def ricci_from_connection(Gamma, dGamma):
    """Ricci of an arbitrary connection; Gamma (4,4,4), dGamma (4,4,4,4)."""
    gam = np.asarray(Gamma, dtype=float)
    dgam = np.asarray(dGamma, dtype=float)
    ric = ricci_from_connection_generic(gam.tolist(), dgam.tolist())
    return np.array(ric)


def einstein_suite(g10, dg, d2g) -> CurvatureSuite:
    """Full Levi-Civita curvature suite from a metric 2-jet."""
    g10 = np.asarray(g10, dtype=float)
    ginv, rho, gam, _, ric, scal = curvature_bundle(
        g10, np.asarray(dg, dtype=float), np.asarray(d2g, dtype=float))
    ginv = np.array(ginv)
    ric = np.array(ric)
    gmat = np.array(metric_matrix(g10))
    e_low = ric - 0.5 * gmat * scal
    e_up = ginv @ e_low @ ginv
    gamma_sym = np.array([[gam[rho][m][n] for (m, n) in PAIRS]
                          for rho in range(DIM)])
    return CurvatureSuite(
        ginv=full_to_sym10(ginv).astype(float), rho=float(rho),
        gamma=gamma_sym, ricci=ric, scalar=float(scal),
        einstein_lower=full_to_sym10(e_low).astype(float),
        einstein_upper=full_to_sym10(e_up).astype(float))


def torsion(Gamma):
    """T^a_{bc} = G^a_{bc} - G^a_{cb}, stored over the 6 pairs b < c."""
    gam = np.asarray(Gamma, dtype=float)
    return np.array([[gam[a, b, c] - gam[a, c, b] for (b, c) in APAIRS]
                     for a in range(DIM)])


def torsion_full(Gamma):
    gam = np.asarray(Gamma)
    return gam - np.transpose(gam, (0, 2, 1))
