"""Forward-mode tangent scalars for fiber-coordinate differentiation.

Tan carries a value and a dense gradient over a chosen seed set (vector
forward mode: one evaluation yields all seeded partials). Jet2 adds a
second, independent seed set and the mixed second-derivative block, which
is the depth-2 nesting needed for momenta-of-momenta expressions.

Finite differences are deliberately absent here; they live only in the
test oracles.
"""

from __future__ import annotations

import math

import numpy as np


class Tan:
    """First-order tangent: value + gradient over n seed directions."""

    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v = float(v)
        self.g = np.asarray(g, dtype=float)

    @classmethod
    def seed(cls, value, n, i=None):
        g = np.zeros(n)
        if i is not None:
            g[i] = 1.0
        return cls(value, g)

    def _lift(self, other):
        if isinstance(other, Tan):
            return other
        return Tan(other, np.zeros_like(self.g))

    def __add__(self, o):
        # constants share the gradient array; nothing mutates it
        if not isinstance(o, Tan):
            return Tan(self.v + o, self.g)
        return Tan(self.v + o.v, self.g + o.g)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, Tan):
            return Tan(self.v - o, self.g)
        return Tan(self.v - o.v, self.g - o.g)

    def __rsub__(self, o):
        return Tan(o - self.v, -self.g)

    def __neg__(self):
        return Tan(-self.v, -self.g)

    def __mul__(self, o):
        if not isinstance(o, Tan):
            return Tan(self.v * o, self.g * o)
        return Tan(self.v * o.v, self.g * o.v + self.v * o.g)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Tan):
            inv = 1.0 / o
            return Tan(self.v * inv, self.g * inv)
        inv = 1.0 / o.v
        return Tan(self.v * inv, (self.g * o.v - self.v * o.g) * inv * inv)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def sqrt(self):
        s = math.sqrt(self.v)
        return Tan(s, self.g / (2.0 * s))

    def __abs__(self):
        return self if self.v >= 0 else -self

    def __lt__(self, o):
        return self.v < (o.v if isinstance(o, Tan) else o)

    def __gt__(self, o):
        return self.v > (o.v if isinstance(o, Tan) else o)

    def __repr__(self):
        return f"Tan({self.v}, {self.g})"


class Jet2:
    """Second-order node: value, two gradient blocks, mixed Hessian block.

    a: gradient over the n1 inner seeds; b: over the n2 outer seeds;
    m[i, j] = d^2 / (d inner_i d outer_j).
    """

    __slots__ = ("v", "a", "b", "m")

    def __init__(self, v, a, b, m):
        self.v = float(v)
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.m = np.asarray(m, dtype=float)

    @classmethod
    def seed(cls, value, n1, n2, i1=None, i2=None, a=None):
        av = np.zeros(n1) if a is None else np.asarray(a, dtype=float)
        bv = np.zeros(n2)
        if i1 is not None:
            av = av.copy()
            av[i1] = 1.0
        if i2 is not None:
            bv[i2] = 1.0
        return cls(value, av, bv, np.zeros((n1, n2)))

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2(other, np.zeros_like(self.a), np.zeros_like(self.b),
                    np.zeros_like(self.m))

    def __add__(self, o):
        # constants share the derivative arrays; nothing mutates them
        if not isinstance(o, Jet2):
            return Jet2(self.v + o, self.a, self.b, self.m)
        return Jet2(self.v + o.v, self.a + o.a, self.b + o.b, self.m + o.m)

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, Jet2):
            return Jet2(self.v - o, self.a, self.b, self.m)
        return Jet2(self.v - o.v, self.a - o.a, self.b - o.b, self.m - o.m)

    def __rsub__(self, o):
        return Jet2(o - self.v, -self.a, -self.b, -self.m)

    def __neg__(self):
        return Jet2(-self.v, -self.a, -self.b, -self.m)

    def __mul__(self, o):
        if not isinstance(o, Jet2):
            return Jet2(self.v * o, self.a * o, self.b * o, self.m * o)
        m = (self.m * o.v + self.v * o.m
             + self.a[:, None] * o.b[None, :]
             + o.a[:, None] * self.b[None, :])
        return Jet2(self.v * o.v, self.a * o.v + self.v * o.a,
                    self.b * o.v + self.v * o.b, m)

    __rmul__ = __mul__

    def _reciprocal(self):
        iv = 1.0 / self.v
        iv2 = iv * iv
        m = (-self.m * iv2
             + 2.0 * iv2 * iv * self.a[:, None] * self.b[None, :])
        return Jet2(iv, -self.a * iv2, -self.b * iv2, m)

    def __truediv__(self, o):
        if not isinstance(o, Jet2):
            return self * (1.0 / o)
        return self * o._reciprocal()

    def __rtruediv__(self, o):
        return self._reciprocal() * o

    def sqrt(self):
        s = math.sqrt(self.v)
        h = 0.5 / s
        m = self.m * h - (0.25 / (s * self.v)) * self.a[:, None] * self.b[None, :]
        return Jet2(s, self.a * h, self.b * h, m)

    def __abs__(self):
        return self if self.v >= 0 else -self

    def __lt__(self, o):
        return self.v < (o.v if isinstance(o, Jet2) else o)

    def __gt__(self, o):
        return self.v > (o.v if isinstance(o, Jet2) else o)

    def __repr__(self):
        return f"Jet2({self.v}, a={self.a}, b={self.b})"


# -- generic scalar helpers (float / Tan / Jet2 / JetScalar) ----------------

def ssqrt(x):
    if isinstance(x, (int, float)):
        return math.sqrt(x)
    return x.sqrt()


def sabs(x):
    if isinstance(x, (int, float)):
        return abs(x)
    return abs(x)


def value_of(x):
    """Underlying float value of any generic scalar."""
    while not isinstance(x, (int, float)):
        if hasattr(x, "v"):
            x = x.v
        else:
            x = x.value()
    return float(x)
