"""Harmonic extension on the unit disk and the Robin-type functions.

A real harmonic function on the disk is stored as u = Re Phi with Phi a
truncated power series; derivatives are then exact on the truncation:

    d^a/dx^a d^b/dy^b Re Phi = Re(i^b Phi^(a+b)).

The boundary-value families are tagged ``h1``, ``hm1_1``, ``hm1_2``,
``h2_1``, ``h2_2``; each has three components.  Components 1 and 2 are the
real and imaginary parts of a holomorphic function with a closed form, the
third component is only available numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable

import numpy as np

from .bubbles import BubbleParams, MapSample, bubble_eval, bubble_grad
from .errors import NearBoundary, NotInTable, TruncationNotConverged

TAGS = ("h1", "hm1_1", "hm1_2", "h2_1", "h2_2")
MIN_SAMPLES = 2048
TRIM = 1e-18


# ---------------------------------------------------------------- fields


class HarmonicField:
    """Vector of real harmonic functions Re Phi_j with Phi_j = sum_n b_jn z^n."""

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        scale = np.abs(c).max() if c.size else 0.0
        keep = np.nonzero(np.abs(c).max(axis=0) > TRIM * scale)[0]
        n = keep[-1] + 1 if keep.size else 1
        self.coeffs = c[:, :n]

    @property
    def ncomp(self):
        return self.coeffs.shape[0]

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    def _derived(self, k):
        cache = self.__dict__.setdefault("_dcache", {})
        if k not in cache:
            c = self.coeffs
            n = np.arange(c.shape[1])
            fall = np.ones(c.shape[1])
            for j in range(k):
                fall = fall * (n - j)
            cache[k] = (c * fall)[:, k:]
        return cache[k]

    def holomorphic(self, z, k=0):
        """Phi^(k)(z) for every component; shape (..., ncomp)."""
        z = np.asarray(z, dtype=complex)
        c = self._derived(k)
        if c.shape[1] == 0:
            return np.zeros(z.shape + (self.ncomp,), dtype=complex)
        if z.size <= 64:
            # few points: one Vandermonde product instead of a Horner loop
            V = np.vander(z.ravel(), c.shape[1], increasing=True)
            return (V @ c.T).reshape(z.shape + (self.ncomp,))
        out = np.empty(z.shape + (self.ncomp,), dtype=complex)
        for j in range(self.ncomp):
            out[..., j] = np.polynomial.polynomial.polyval(z, c[j])
        return out

    def __call__(self, x, y, dx=0, dy=0):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return np.real((1j**dy) * self.holomorphic(z, dx + dy))

    def gradient(self, x, y):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        d = self.holomorphic(z, 1)
        return np.real(d), np.real(1j * d)


@dataclass(frozen=True)
class BoundaryDatum:
    """Boundary function on the unit circle: a closure t -> values or samples."""

    fn: Callable | None = None
    samples: np.ndarray | None = None

    def sample(self, n):
        if self.fn is not None:
            t = 2 * np.pi * np.arange(n) / n
            return np.asarray(self.fn(t), dtype=float)
        s = np.asarray(self.samples, dtype=float)
        if s.shape[0] != n:
            raise ValueError("sample count mismatch")
        return s

    @property
    def default_n(self):
        return MIN_SAMPLES if self.samples is None else np.asarray(self.samples).shape[0]


def poisson_extend(datum, n=None):
    """Harmonic extension of boundary data by discrete Fourier transform."""
    if callable(datum) and not isinstance(datum, BoundaryDatum):
        datum = BoundaryDatum(fn=datum)
    elif not isinstance(datum, BoundaryDatum):
        datum = BoundaryDatum(samples=np.asarray(datum, dtype=float))
    n = n or datum.default_n
    s = datum.sample(n)
    if s.ndim == 1:
        s = s[:, None]
    c = np.fft.fft(s, axis=0) / n            # c_k for e^{ikt}
    half = n // 2
    b = c[: half + 1].T.copy()
    b[:, 1:half] *= 2.0
    b[:, 0] = b[:, 0].real
    b[:, half] = b[:, half].real
    return HarmonicField(b)


def samples_for(xi, tol=1e-18, n_min=MIN_SAMPLES, n_max=1 << 16):
    """Boundary sample count so that |xi|^(N/2) falls below ``tol``."""
    r = float(np.hypot(*xi))
    if r <= 0:
        return n_min
    need = 2 * np.log(tol) / np.log(r)
    n = n_min
    while n < need and n < n_max:
        n *= 2
    return n


# ---------------------------------------------------------------- families


def _parts(t, xi):
    X = np.cos(t) - xi[0]
    Y = np.sin(t) - xi[1]
    return X, Y, X * X + Y * Y


def family_boundary(tag, xi):
    """Boundary data of one tagged family as a closure t -> (N, 3)."""
    xi = (float(xi[0]), float(xi[1]))

    def h1(t):
        X, Y, R2 = _parts(t, xi)
        return np.stack([(X * X - Y * Y) / R2**2, 2 * X * Y / R2**2, 1 / R2**2], axis=-1)

    def hm1_1(t):
        X, Y, R2 = _parts(t, xi)
        return np.stack([-2 * X / R2, -2 * Y / R2, -4 * X / R2**2], axis=-1)

    def hm1_2(t):
        X, Y, R2 = _parts(t, xi)
        return np.stack([2 * Y / R2, -2 * X / R2, -4 * Y / R2**2], axis=-1)

    def h2_1(t):
        X, Y, R2 = _parts(t, xi)
        q = X**4 - 6 * X * X * Y * Y + Y**4
        return np.stack([-q / R2**4, -4 * X * Y * (X * X - Y * Y) / R2**4,
                         -2 * (X * X - Y * Y) / R2**4], axis=-1)

    def h2_2(t):
        X, Y, R2 = _parts(t, xi)
        q = X**4 - 6 * X * X * Y * Y + Y**4
        return np.stack([-4 * X * Y * (X * X - Y * Y) / R2**4, q / R2**4,
                         -4 * X * Y / R2**4], axis=-1)

    table = {"h1": h1, "hm1_1": hm1_1, "hm1_2": hm1_2, "h2_1": h2_1, "h2_2": h2_2}
    if tag not in table:
        raise KeyError(f"unknown family {tag}")
    return BoundaryDatum(fn=table[tag])


@lru_cache(maxsize=256)
def _family_field(tag, xi, n):
    return poisson_extend(family_boundary(tag, xi), n)


def family_field(tag, xi, n=None):
    """Spectral harmonic extension of a tagged family (cached)."""
    xi = (float(xi[0]), float(xi[1]))
    return _family_field(tag, xi, n or samples_for(xi))


# Components 1 + i 2 equal coef * z^m / (1 - conj(xi) z)^p on the disk.
_HOLO = {
    "h1": (1.0, 2, 2),
    "hm1_1": (-2.0, 1, 1),
    "hm1_2": (-2.0j, 1, 1),
    "h2_1": (-1.0, 4, 4),
    "h2_2": (1.0j, 4, 4),
}


def _monomial_over_power(z, xib, m, p, k):
    """k-th derivative of z^m (1 - xib z)^(-p)."""
    c = 1.0 - xib * z
    out = 0.0
    for i in range(min(k, m) + 1):
        j = k - i
        dz = factorial(m) / factorial(m - i) * z ** (m - i)
        dc = factorial(p + j - 1) / factorial(p - 1) * xib**j * c ** (-p - j)
        out = out + comb(k, i) * dz * dc
    return out


def holomorphic_family(tag, z, xi, k=0):
    """k-th complex derivative of (component 1 + i component 2) of a family."""
    coef, m, p = _HOLO[tag]
    xib = complex(xi[0], -xi[1])
    return coef * _monomial_over_power(np.asarray(z, dtype=complex), xib, m, p, k)


def family_derivative(tag, comp, beta, x, y, xi):
    """Exact spatial derivative of component 1 or 2 of a family at (x, y)."""
    a, b = beta
    val = (1j**b) * holomorphic_family(tag, np.asarray(x) + 1j * np.asarray(y), xi, a + b)
    if comp == 1:
        return np.real(val)
    if comp == 2:
        return np.imag(val)
    raise NotInTable("the third component has no closed form")


def closed_extension_h(x, y, xi):
    """Harmonic extension of the h1 data with third component 0."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x1, x2 = float(xi[0]), float(xi[1])
    r2 = x * x + y * y
    den = ((x1 * x1 + x2 * x2) * r2 - 2 * x1 * x - 2 * x2 * y + 1) ** 2
    c1 = ((x1 - x2) * r2 - x + y) * ((x1 + x2) * r2 - x - y) / den
    c2 = 2 * (x1 * r2 - x) * (x2 * r2 - y) / den
    return np.stack(np.broadcast_arrays(c1, c2, 0 * c1), axis=-1)


def g_rho_boundary(rho, eps=0.0):
    """Boundary datum 2(h1, h2, 0) at omega = (rho, 0), plus -2 eps/|z-omega|^4 if eps > 0."""

    def fn(t):
        X, Y, R2 = _parts(t, (rho, 0.0))
        return np.stack([2 * (X * X - Y * Y) / R2**2, 4 * X * Y / R2**2, -2 * eps / R2**2], axis=-1)

    return BoundaryDatum(fn=fn)


def closed_extension_g_rho(x, y, rho):
    """Closed-form harmonic extension of the rho datum."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    den = (rho * rho * r2 - 2 * rho * x + 1) ** 2
    c1 = 2 * (rho * r2 - x + y) * (rho * r2 - x - y) / den
    c2 = 2 * 2 * (x - rho * r2) * y / den
    return np.stack(np.broadcast_arrays(c1, c2, 0 * c1), axis=-1)


class DatumField:
    """Harmonic datum g = (2 h1, 2 h2, -2 eps h3) of the h1 family centered at omega.

    With ``turn`` the field is precomposed with the planar rotation by
    -turn, g(z) = g0(e^{-i turn} z); the copies of the k-bubble datum are of
    this form.  Components 1, 2 use the closed holomorphic form; the third
    uses the spectral extension (eps-free, scaled on evaluation) and is
    dropped when ``third`` is false.
    """

    def __init__(self, omega, eps, turn=0.0, third=True):
        self.omega = (float(omega[0]), float(omega[1]))
        self.eps = float(eps)
        self.turn = float(turn)
        if 1 - np.hypot(*self.omega) < 1e-2:
            raise NearBoundary("datum center too close to the boundary")
        self._h3 = family_field("h1", self.omega) if third and eps != 0 else None

    def derivative(self, x, y, dx=0, dy=0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        k = dx + dy
        spin = np.exp(-1j * self.turn)
        z = spin * (x + 1j * y)
        pre = (1j**dy) * spin**k
        val = pre * holomorphic_family("h1", z, self.omega, k)
        c3 = np.zeros(np.broadcast(x, y).shape)
        if self._h3 is not None:
            c3 = -2 * self.eps * np.real(pre * self._h3.holomorphic(z, k)[..., 2])
        return np.stack(np.broadcast_arrays(2 * np.real(val), 2 * np.imag(val), c3), axis=-1)

    def __call__(self, x, y):
        return self.derivative(x, y)

    def sample(self, x, y):
        return MapSample(self.derivative(x, y), self.derivative(x, y, 1, 0),
                         self.derivative(x, y, 0, 1))


class RotatedDatum:
    """R g for a datum g and a fixed 3x3 rotation R."""

    def __init__(self, datum, R):
        self.datum = datum
        self.R = np.asarray(R, dtype=float)

    def derivative(self, x, y, dx=0, dy=0):
        return self.datum.derivative(x, y, dx, dy) @ self.R.T

    def __call__(self, x, y):
        return self.derivative(x, y)

    def sample(self, x, y):
        return MapSample(self.derivative(x, y), self.derivative(x, y, 1, 0),
                         self.derivative(x, y, 0, 1))


def g_datum(omega, eps):
    """Boundary datum (2 h1, 2 h2, -2 eps h3) of the h1 family at omega."""
    base = family_boundary("h1", omega)
    scale = np.array([2.0, 2.0, -2.0 * eps])
    return BoundaryDatum(fn=lambda t: base.fn(t) * scale)


# ---------------------------------------------------------------- Robin table


def _closed_table():
    """(tag, comp, (a, b)) -> function of (xi1, xi2)."""
    T = {}

    def put(keys, fn):
        for tag, comp, beta, sign in keys:
            T[(tag, comp, beta)] = (lambda f, s: (lambda x1, x2: s * f(x1, x2)))(fn, sign)

    def d(x1, x2):
        return 1 - x1 * x1 - x2 * x2

    def s(x1, x2):
        return x1 * x1 + x2 * x2

    zero = lambda x1, x2: 0.0 * x1  # noqa: E731

    # hm1 families
    put([("hm1_1", 1, (0, 0), 1), ("hm1_2", 2, (0, 0), 1)], lambda a, b: -2 * a / d(a, b))
    put([("hm1_1", 2, (0, 0), 1), ("hm1_2", 1, (0, 0), -1)], lambda a, b: -2 * b / d(a, b))
    put([("hm1_1", 1, (1, 0), 1), ("hm1_1", 2, (0, 1), 1)], lambda a, b: -2 / d(a, b) ** 2)
    put([("hm1_1", 1, (0, 1), 1), ("hm1_1", 2, (1, 0), -1)], zero)
    put([("hm1_2", 1, (1, 0), 1), ("hm1_2", 2, (0, 1), 1)], zero)
    put([("hm1_2", 1, (0, 1), 1), ("hm1_2", 2, (1, 0), -1)], lambda a, b: 2 / d(a, b) ** 2)
    put([("hm1_1", 1, (2, 0), 1), ("hm1_1", 1, (0, 2), -1)], lambda a, b: -4 * a / d(a, b) ** 3)
    put([("hm1_1", 2, (2, 0), 1), ("hm1_1", 2, (0, 2), -1)], lambda a, b: 4 * b / d(a, b) ** 3)
    put([("hm1_2", 1, (2, 0), 1), ("hm1_2", 1, (0, 2), -1)], lambda a, b: -4 * b / d(a, b) ** 3)
    put([("hm1_2", 2, (2, 0), 1), ("hm1_2", 2, (0, 2), -1)], lambda a, b: -4 * a / d(a, b) ** 3)

    # h1 family
    put([("h1", 1, (0, 0), 1)], lambda a, b: (a * a - b * b) / d(a, b) ** 2)
    put([("h1", 2, (0, 0), 1)], lambda a, b: 2 * a * b / d(a, b) ** 2)
    put([("h1", 1, (1, 0), 1), ("h1", 2, (0, 1), 1)], lambda a, b: 2 * a / d(a, b) ** 3)
    put([("h1", 1, (0, 1), 1), ("h1", 2, (1, 0), -1)], lambda a, b: -2 * b / d(a, b) ** 3)
    put([("h1", 1, (2, 0), 1), ("h1", 2, (1, 1), 1)], lambda a, b: 2 * (1 + 2 * s(a, b)) / d(a, b) ** 4)
    put([("h1", 1, (0, 2), 1)], lambda a, b: -2 * (1 + 2 * s(a, b)) / d(a, b) ** 4)
    put([("h1", 1, (1, 1), 1), ("h1", 2, (2, 0), -1), ("h1", 2, (0, 2), 1)], zero)
    put([("h1", 1, (3, 0), 1), ("h1", 2, (2, 1), 1), ("h1", 1, (1, 2), -1), ("h1", 2, (0, 3), -1)],
        lambda a, b: 12 * a * (1 + s(a, b)) / d(a, b) ** 5)
    # sign fixed by the spectral value of the harmonic extension
    put([("h1", 1, (0, 3), 1), ("h1", 2, (1, 2), -1), ("h1", 1, (2, 1), -1), ("h1", 2, (3, 0), 1)],
        lambda a, b: -12 * b * (1 + s(a, b)) / d(a, b) ** 5)
    put([("h1", 1, (4, 0), 1), ("h1", 2, (3, 1), 1), ("h1", 1, (2, 2), -1), ("h1", 2, (1, 3), -1),
         ("h1", 1, (0, 4), 1)],
        lambda a, b: 24 * (a * a - b * b) * (3 + 2 * s(a, b)) / d(a, b) ** 6)
    put([("h1", 2, (4, 0), 1), ("h1", 1, (3, 1), -1), ("h1", 2, (2, 2), -1), ("h1", 1, (1, 3), 1),
         ("h1", 2, (0, 4), 1)],
        lambda a, b: -48 * a * b * (3 + 2 * s(a, b)) / d(a, b) ** 6)
    put([("h1", 1, (6, 0), 1), ("h1", 1, (0, 6), -1)],
        lambda a, b: 720 * (2 * a**6 + (5 - 10 * b * b) * a**4 - 10 * b * b * (b * b + 3) * a * a
                            + b**4 * (2 * b * b + 5)) / d(a, b) ** 8)

    # h2 families
    def K(a, b):
        t = s(a, b) - 1
        return 35 + 4 * t**3 + 30 * t**2 + 60 * t

    put([("h2_1", 1, (1, 0), 1), ("h2_1", 2, (0, 1), 1)],
        lambda a, b: -4 * a * (a * a - 3 * b * b) / d(a, b) ** 5)
    put([("h2_1", 1, (0, 1), 1), ("h2_1", 2, (1, 0), -1)],
        lambda a, b: -4 * b * (-3 * a * a + b * b) / d(a, b) ** 5)
    put([("h2_1", 1, (4, 0), 1), ("h2_1", 1, (0, 4), 1)], lambda a, b: -24 * K(a, b) / d(a, b) ** 8)
    put([("h2_1", 2, (4, 0), 1), ("h2_1", 2, (0, 4), 1)], zero)
    put([("h2_2", 1, (1, 0), 1), ("h2_2", 2, (0, 1), 1)],
        lambda a, b: 4 * b * (-3 * a * a + b * b) / d(a, b) ** 5)
    put([("h2_2", 1, (0, 1), 1), ("h2_2", 2, (1, 0), -1)],
        lambda a, b: -4 * a * (a * a - 3 * b * b) / d(a, b) ** 5)
    put([("h2_2", 1, (4, 0), 1), ("h2_2", 1, (0, 4), 1)], zero)
    put([("h2_2", 2, (4, 0), 1), ("h2_2", 2, (0, 4), 1)], lambda a, b: 24 * K(a, b) / d(a, b) ** 8)
    return T


ROBIN_TABLE = _closed_table()


def robin_entries():
    """Sorted list of (tag, comp, beta) keys with a closed value."""
    return sorted(ROBIN_TABLE, key=lambda k: (TAGS.index(k[0]), k[1], sum(k[2]), k[2]))


def robin_closed(tag, comp, beta, xi):
    """Tabulated closed-form value of a Robin entry at (xi, xi)."""
    key = (tag, int(comp), tuple(int(v) for v in beta))
    if key not in ROBIN_TABLE:
        raise NotInTable(key)
    if np.hypot(*xi) >= 1:
        raise ValueError("xi must lie in the open disk")
    return float(ROBIN_TABLE[key](float(xi[0]), float(xi[1])))


# Complex pairing used by the rotation reduction: component = part(P) with
# P(z; xi) = e^{i m t0} P(e^{-i t0} z; |xi|) for xi = |xi| e^{i t0}.
_PAIRS = {
    ("h1", 1): ("h1", (1, 2), "re", 2), ("h1", 2): ("h1", (1, 2), "im", 2),
    ("h1", 3): ("h1", (3, None), "re", 0),
    ("hm1_1", 1): ("hm1_1", (1, 2), "re", 1), ("hm1_1", 2): ("hm1_1", (1, 2), "im", 1),
    ("hm1_2", 1): ("hm1_2", (1, 2), "re", 1), ("hm1_2", 2): ("hm1_2", (1, 2), "im", 1),
    ("h2_1", 1): ("h2_1", (1, 2), "re", 4), ("h2_1", 2): ("h2_1", (1, 2), "im", 4),
    ("h2_2", 1): ("h2_2", (1, 2), "re", 4), ("h2_2", 2): ("h2_2", (1, 2), "im", 4),
}


def _third_pair(tag):
    # third components pair up across the two members of a family
    if tag in ("hm1_1", "hm1_2"):
        return (("hm1_1", 3), ("hm1_2", 3)), 1
    if tag in ("h2_1", "h2_2"):
        return (("h2_1", 3), ("h2_2", 3)), 2
    return None, 0


def _direct(tag, comp, beta, xi, n):
    f = family_field(tag, xi, n)
    return float(f(xi[0], xi[1], *beta)[comp - 1])


def _rotated(tag, comp, beta, xi, n):
    a, b = beta
    k = a + b
    r = float(np.hypot(*xi))
    t0 = float(np.arctan2(xi[1], xi[0]))
    xi0 = (r, 0.0)
    z0 = complex(r, 0.0)

    def dreal(field, j):
        # derivative of Re Phi_j(e^{-i t0} z) at z = xi
        return np.real((1j**b) * np.exp(-1j * k * t0) * field.holomorphic(z0, k)[j])

    if comp in (1, 2) or tag == "h1":
        f = family_field(tag, xi0, n)
        if comp == 3:
            return float(dreal(f, 2))
        _, _, _, m = _PAIRS[(tag, comp)]
        P = np.exp(1j * m * t0) * (dreal(f, 0) + 1j * dreal(f, 1))
        return float(np.real(P) if comp == 1 else np.imag(P))
    (first, second), m = _third_pair(tag)
    u = dreal(family_field(first[0], xi0, n), 2)
    v = dreal(family_field(second[0], xi0, n), 2)
    P = np.exp(1j * m * t0) * (u + 1j * v)
    return float(np.real(P) if tag == first[0] else np.imag(P))


def robin_numeric(tag, comp, beta, xi, n=None, rotate=None, target=None):
    """Spectral value of a Robin entry, differentiated term-wise at z = xi."""
    xi = (float(xi[0]), float(xi[1]))
    beta = (int(beta[0]), int(beta[1]))
    if 1 - np.hypot(*xi) < 1e-2:
        raise NearBoundary("xi within 1e-2 of the boundary")
    order = sum(beta)
    if order > 6:
        raise ValueError("derivative order above 6 is not supported")
    if rotate is None:
        rotate = order >= 3
    if target is None:
        target = 1e-6 if order <= 2 else 1e-3
    n = n or samples_for(xi)
    run = _rotated if rotate and np.hypot(*xi) > 0 else _direct
    val = run(tag, comp, beta, xi, n)
    check = run(tag, comp, beta, xi, 2 * n)
    if abs(check - val) > target * max(1.0, abs(check)):
        raise TruncationNotConverged(f"{tag}{comp}{beta}: {val} vs {check}")
    return check


# ---------------------------------------------------------------- projection


class ProjectedBubble:
    """P delta = delta - phi, with phi the harmonic extension of the trace of delta."""

    def __init__(self, params: BubbleParams, n=None):
        if 1 - np.hypot(*params.xi) < 1e-2:
            raise NearBoundary("bubble center too close to the boundary")
        self.params = params
        n = n or samples_for(params.xi)
        self.field = poisson_extend(
            BoundaryDatum(fn=lambda t: bubble_eval(params, np.cos(t), np.sin(t))), n)

    def __call__(self, x, y):
        return bubble_eval(self.params, x, y) - self.field(x, y)

    def sample(self, x, y):
        s = bubble_grad(self.params, x, y)
        gx, gy = self.field.gradient(x, y)
        return MapSample(s.value - self.field(x, y), s.grad_x - gx, s.grad_y - gy)


def project_bubble(params: BubbleParams, n=None):
    """Return (phi field, evaluator of P delta)."""
    pb = ProjectedBubble(params, n)
    return pb.field, pb
