"""Ordered symmetric index bookkeeping for 4 spacetime dimensions.

Symmetric coordinate blocks are stored over ordered index tuples
(alpha <= beta, mu <= nu <= ...). The multiplicity n(mu,nu) is 1 on the
diagonal and 2 off it; formulas that sum over full index ranges go through
the full<->ordered converters here so the multiplicity factors live in one
place.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

DIM = 4

# Ordered pairs alpha <= beta, lexicographic: 10 entries.
PAIRS: tuple[tuple[int, int], ...] = tuple(
    (a, b) for a in range(DIM) for b in range(a, DIM)
)
# Ordered triples mu <= nu <= lam: 20 entries.
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(
    t for t in itertools.combinations_with_replacement(range(DIM), 3)
)
# Ordered quadruples: 35 entries (order-4 jet extension).
QUADS: tuple[tuple[int, int, int, int], ...] = tuple(
    q for q in itertools.combinations_with_replacement(range(DIM), 4)
)

_PAIR_IDX = {p: i for i, p in enumerate(PAIRS)}
_TRIPLE_IDX = {t: i for i, t in enumerate(TRIPLES)}
_QUAD_IDX = {q: i for i, q in enumerate(QUADS)}

# Antisymmetric pairs beta < gamma: 6 entries (torsion storage).
APAIRS: tuple[tuple[int, int], ...] = tuple(
    (b, c) for b in range(DIM) for c in range(b + 1, DIM)
)
_APAIR_IDX = {p: i for i, p in enumerate(APAIRS)}


def pair_index(a: int, b: int) -> int:
    """Index of the unordered pair {a,b} in PAIRS."""
    return _PAIR_IDX[(a, b) if a <= b else (b, a)]


def triple_index(a: int, b: int, c: int) -> int:
    return _TRIPLE_IDX[tuple(sorted((a, b, c)))]


def quad_index(a: int, b: int, c: int, d: int) -> int:
    return _QUAD_IDX[tuple(sorted((a, b, c, d)))]


def apair_index(b: int, c: int) -> tuple[int, int]:
    """(index, sign) of the ordered antisymmetric pair (b,c), b != c."""
    if b < c:
        return _APAIR_IDX[(b, c)], 1
    return _APAIR_IDX[(c, b)], -1


def mult(mu: int, nu: int) -> int:
    """n(mu nu): 1 if mu == nu, else 2."""
    return 1 if mu == nu else 2


def tuple_multiplicity(idx: tuple[int, ...]) -> int:
    """Number of distinct orderings of a sorted index tuple."""
    counts = [idx.count(v) for v in set(idx)]
    d = 1
    for c in counts:
        d *= math.factorial(c)
    return math.factorial(len(idx)) // d


def sym10_to_full(v) -> np.ndarray:
    """Expand an ordered-pair 10-vector into a symmetric 4x4 matrix."""
    m = np.empty((DIM, DIM), dtype=object if np.asarray(v).dtype == object else float)
    for i, (a, b) in enumerate(PAIRS):
        m[a, b] = v[i]
        m[b, a] = v[i]
    return m


def full_to_sym10(m) -> np.ndarray:
    """Collapse a symmetric 4x4 matrix to ordered-pair storage."""
    return np.array([m[a][b] for a, b in PAIRS])
