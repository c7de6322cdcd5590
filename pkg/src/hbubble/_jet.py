"""Truncated multivariate Taylor numbers with square-zero generators.

A jet over ``m`` generators e_1..e_m (e_i**2 = 0, e_i e_j = e_j e_i) stores one
coefficient array per subset of generators, indexed by bitmask.  Evaluating a
rational function on jets yields every mixed partial derivative that uses each
generator at most once, exactly up to rounding.  Seeding two generators on the
same variable gives the pure second derivative.
"""

from __future__ import annotations

import numpy as np


def _subsets(mask):
    """Yield all submasks of ``mask`` (including 0 and mask itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Jet:
    __slots__ = ("c", "m")
    __array_priority__ = 1000
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, coeffs, m):
        self.c = list(coeffs)
        self.m = m

    @classmethod
    def const(cls, value, m):
        value = np.asarray(value)
        zero = np.zeros_like(value)
        return cls([value] + [zero] * ((1 << m) - 1), m)

    @classmethod
    def variable(cls, value, m, generators):
        """value + sum of the listed generators (indices 0..m-1)."""
        jet = cls.const(np.asarray(value, dtype=float), m)
        one = np.ones_like(jet.c[0])
        for g in generators:
            jet.c[1 << g] = jet.c[1 << g] + one
        return jet

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.const(other, self.m)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet([a + b for a, b in zip(self.c, o.c)], self.m)

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c], self.m)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c], self.m)
        out = []
        for s in range(1 << self.m):
            acc = 0
            for t in _subsets(s):
                acc = acc + self.c[t] * other.c[s ^ t]
            out.append(acc)
        return Jet(out, self.m)

    __rmul__ = __mul__

    def reciprocal(self):
        b0 = self.c[0]
        r = [None] * (1 << self.m)
        r[0] = 1.0 / b0
        for s in range(1, 1 << self.m):
            acc = 0
            for t in _subsets(s):
                if t == 0:
                    continue
                acc = acc + self.c[t] * r[s ^ t]
            r[s] = -acc / b0
        return Jet(r, self.m)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([a / other for a in self.c], self.m)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet.const(np.ones_like(self.c[0]), self.m)
        for _ in range(n):
            out = out * self
        return out

    @property
    def real(self):
        return Jet([np.real(a) for a in self.c], self.m)

    @property
    def imag(self):
        return Jet([np.imag(a) for a in self.c], self.m)

    def conjugate(self):
        return Jet([np.conj(a) for a in self.c], self.m)

    def apply(self, derivs):
        """Compose with a scalar function given its derivatives at c[0].

        ``derivs[k]`` is the k-th derivative evaluated at the value part; at
        least ``m + 1`` entries are needed.
        """
        nil = Jet([np.zeros_like(self.c[0])] + self.c[1:], self.m)
        out = Jet.const(derivs[0], self.m)
        power = Jet.const(np.ones_like(self.c[0]), self.m)
        fact = 1.0
        for k in range(1, self.m + 1):
            power = power * nil
            fact *= k
            out = out + power * (derivs[k] / fact)
        return out

    def coeff(self, generators=()):
        mask = 0
        for g in generators:
            mask |= 1 << g
        return self.c[mask]


def jsin(v):
    if not isinstance(v, Jet):
        return np.sin(v)
    s, c = np.sin(v.c[0]), np.cos(v.c[0])
    return v.apply([s, c, -s, -c] * (v.m // 4 + 2))


def jcos(v):
    if not isinstance(v, Jet):
        return np.cos(v)
    s, c = np.sin(v.c[0]), np.cos(v.c[0])
    return v.apply([c, -s, -c, s] * (v.m // 4 + 2))


def value(v):
    return v.c[0] if isinstance(v, Jet) else v


def coeff(v, generators=()):
    """Coefficient of a jet, treating plain numbers as constant jets."""
    if isinstance(v, Jet):
        return v.coeff(generators)
    return v if not generators else np.zeros_like(np.asarray(v, dtype=float))
