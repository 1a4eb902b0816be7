"""Pointwise exterior algebra for the 5-forms on jet space.

Forms are short lists of FormTerm, each an oriented wedge of exactly five
covector factors: coordinate differentials or dense differentials of fiber
functions. Contraction with four tangent vectors is a Laplace expansion of
the 5x5 pairing matrix with one symbolic row, yielding a covector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class CoordDifferential:
    """dx^i in the flat coordinate layout of the ambient jet space."""

    index: int

    def pair(self, vec: np.ndarray) -> float:
        return float(vec[self.index])

    def dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        out[self.index] = 1.0
        return out


@dataclass(frozen=True)
class DenseCovector:
    """The differential of a fiber function, stored over all coordinates."""

    components: np.ndarray

    def pair(self, vec: np.ndarray) -> float:
        return float(self.components @ vec)

    def dense(self, dim: int) -> np.ndarray:
        if len(self.components) != dim:
            raise ConfigError("covector dimension mismatch")
        return self.components


@dataclass(frozen=True)
class TangentVector:
    """Dense tangent vector over all coordinates of the ambient space."""

    components: np.ndarray


@dataclass(frozen=True)
class FormTerm:
    coefficient: float
    factors: tuple  # exactly 5 CoordDifferential / DenseCovector entries

    def __post_init__(self):
        if len(self.factors) != 5:
            raise ConfigError("form terms are wedges of exactly 5 factors")


def _det4(m):
    # explicit expansion: far cheaper than linalg dispatch at this size
    (a, b, c, d), (e, f, g, h), (i, j, k, l), (p, q, r, s) = m
    kl_rs = k * s - l * r
    jl_qs = j * s - l * q
    jk_qr = j * r - k * q
    il_ps = i * s - l * p
    ik_pr = i * r - k * p
    ij_pq = i * q - j * p
    return (a * (f * kl_rs - g * jl_qs + h * jk_qr)
            - b * (e * kl_rs - g * il_ps + h * ik_pr)
            + c * (e * jl_qs - f * il_ps + h * ij_pq)
            - d * (e * jk_qr - f * ik_pr + g * ij_pq))


def contract_term(term: FormTerm, vectors, dim: int) -> np.ndarray:
    """t(v1, v2, v3, v4, .) as a dense covector of length dim."""
    if len(vectors) != 4:
        raise ConfigError("contraction takes exactly 4 tangent vectors")
    comps = [v.components if isinstance(v, TangentVector) else np.asarray(v)
             for v in vectors]
    for c in comps:
        if len(c) != dim:
            raise ConfigError("tangent vector dimension mismatch")
    pairing = np.array([[f.pair(c) for c in comps] for f in term.factors])
    out = np.zeros(dim)
    rows = np.arange(5)
    for f in range(5):
        minor = pairing[rows != f]
        cof = ((-1.0) ** f) * _det4(minor)
        if cof != 0.0:
            fac = term.factors[f]
            if isinstance(fac, CoordDifferential):
                out[fac.index] += term.coefficient * cof
            else:
                out += term.coefficient * cof * fac.dense(dim)
    return out


def contract_terms(terms, vectors, dim: int) -> np.ndarray:
    """Contraction distributes over the sum of terms."""
    out = np.zeros(dim)
    for t in terms:
        out += contract_term(t, vectors, dim)
    return out


def volume_factors(exclude=None):
    """dx^0..dx^3 factors; with `exclude`, the 3 factors of i(d/dx^mu) d4x.

    The sign (-1)^mu of that contraction is returned alongside.
    """
    if exclude is None:
        return [CoordDifferential(i) for i in range(4)], 1.0
    facs = [CoordDifferential(i) for i in range(4) if i != exclude]
    return facs, (-1.0) ** exclude
