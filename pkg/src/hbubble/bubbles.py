"""Stereographic projection, degree-2 bubbles and the full bubble family.

Points of the plane are passed as separate ``x, y`` arrays (broadcastable).
Sphere-valued results carry the three components on the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ._jet import Jet, jcos, jsin
from .errors import DegenerateMoebius, QuadratureNotConverged

# ---------------------------------------------------------------- helpers


def _conj(v):
    return v.conjugate() if isinstance(v, Jet) else np.conj(v)


def _re(v):
    return v.real if isinstance(v, Jet) else np.real(v)


def _im(v):
    return v.imag if isinstance(v, Jet) else np.imag(v)


def wedge(u, v):
    """Cross product over the last axis."""
    return np.cross(u, v)


def stereo_parts(F):
    """Components of pi(F) for a complex argument (array or jet)."""
    mod2 = _re(F * _conj(F))
    s = mod2 + 1.0
    return [2.0 * _re(F) / s, 2.0 * _im(F) / s, (mod2 - 1.0) / s]


def stereo(x, y):
    """Inverse stereographic projection of the plane onto S^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = 1.0 + x * x + y * y
    return np.stack([2 * x / s, 2 * y / s, (x * x + y * y - 1) / s], axis=-1)


def bubble_m(x, y, m=2):
    """Degree-m bubble pi(z**m)."""
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    zm = z**m
    return stereo(zm.real, zm.imag)


def bubble_w(x, y):
    """Canonical degree-2 bubble pi(z^2), written out componentwise."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r4 = (x * x + y * y) ** 2
    den = r4 + 1.0
    return np.stack([2 * (x * x - y * y) / den, 4 * x * y / den, (r4 - 1) / den], axis=-1)


# ---------------------------------------------------------------- rotations


def euler_matrix(theta, phi, psi):
    """Rotation matrix for Euler angles (theta, phi, psi); identity at (pi/2, 0, 0).

    Works on floats and on jets; returns a nested list for jets.
    """
    ct, st = jcos(theta), jsin(theta)
    cf, sf = jcos(phi), jsin(phi)
    cp, sp = jcos(psi), jsin(psi)
    rows = [
        [cp * cf - ct * sf * sp, -(st * sf), -(sp * cf) - ct * sf * cp],
        [cp * sf + ct * cf * sp, st * cf, -(sp * sf) + ct * cf * cp],
        [sp * st, -ct, cp * st],
    ]
    if any(isinstance(v, Jet) for v in (theta, phi, psi)):
        return rows
    return np.array(rows, dtype=float)


def euler_from_matrix(M):
    """Euler angles (theta, phi, psi) of a rotation matrix.

    theta lies in [0, pi]; when sin(theta) vanishes phi is set to 0.
    """
    M = np.asarray(M, dtype=float)
    theta = float(np.arccos(np.clip(-M[2, 1], -1.0, 1.0)))
    if np.sin(theta) > 1e-12:
        phi = float(np.arctan2(-M[0, 1], M[1, 1]))
        psi = float(np.arctan2(M[2, 0], M[2, 2]))
    else:
        # M[2,1] = -cos(theta) = -+1; remaining block is a planar rotation
        phi = 0.0
        psi = float(np.arctan2(-M[0, 2], M[0, 0]))
    return theta, phi, psi


def axis_rotations(alpha=0.0, beta=0.0, gamma=0.0):
    """Product Q_gamma Q_beta Q_alpha of rotations about the z, x and y axes."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    qa = np.array([[ca, -sa, 0], [sa, ca, 0], [0, 0, 1.0]])
    qb = np.array([[1.0, 0, 0], [0, cb, -sb], [0, sb, cb]])
    qg = np.array([[cg, 0, sg], [0, 1.0, 0], [-sg, 0, cg]])
    return qg @ qb @ qa


@dataclass(frozen=True)
class RotationSO3:
    """Rotation parameterized by Euler angles; identity at (pi/2, 0, 0)."""

    theta: float = np.pi / 2
    phi: float = 0.0
    psi: float = 0.0

    @property
    def matrix(self):
        return euler_matrix(self.theta, self.phi, self.psi)

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_matrix(cls, M):
        return cls(*euler_from_matrix(M))

    @classmethod
    def from_axis_angles(cls, alpha=0.0, beta=0.0, gamma=0.0):
        return cls.from_matrix(axis_rotations(alpha, beta, gamma))

    def inverse(self):
        return RotationSO3.from_matrix(self.matrix.T)

    def __matmul__(self, other):
        return RotationSO3.from_matrix(self.matrix @ other.matrix)


# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class BubbleParams:
    mu: float
    xi: tuple = (0.0, 0.0)
    a: tuple = (0.0, 0.0)
    p: tuple = (0.0, 0.0)
    rot: RotationSO3 = field(default_factory=RotationSO3)

    def __post_init__(self):
        vals = [self.mu, *self.xi, *self.a, *self.p]
        if not np.all(np.isfinite(vals)):
            raise ValueError("bubble parameters must be finite")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if len(self.xi) != 2 or len(self.a) != 2 or len(self.p) != 2:
            raise ValueError("xi, a, p must be pairs")
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))

    @property
    def d(self):
        return 1.0 - self.xi[0] ** 2 - self.xi[1] ** 2

    def replace(self, **kw):
        vals = dict(mu=self.mu, xi=self.xi, a=self.a, p=self.p, rot=self.rot)
        vals.update(kw)
        return BubbleParams(**vals)


class MapSample(NamedTuple):
    value: np.ndarray
    grad_x: np.ndarray
    grad_y: np.ndarray


# ---------------------------------------------------------------- the family


def family_parts(x, y, mu, xi1, xi2, a1, a2, p1, p2, theta, phi, psi,
                 alt_denominator=False):
    """Components of Q pi(M(w)^2 + p), w = (z - xi)/mu, for arrays or jets.

    M(w) = (w - a|w|^2) / (1 - 2 a.w + |a|^2 |w|^2); with ``alt_denominator``
    the factor 2 in front of a.w is dropped.
    """
    z = x + 1j * y
    w = (z - (xi1 + 1j * xi2)) / mu
    wr, wi = _re(w), _im(w)
    w2 = wr * wr + wi * wi
    num = w - (a1 + 1j * a2) * w2
    lin = 1.0 if alt_denominator else 2.0
    den = 1.0 - lin * (a1 * wr + a2 * wi) + (a1 * a1 + a2 * a2) * w2
    d0 = den.c[0] if isinstance(den, Jet) else den
    if np.any(np.abs(d0) < 1e-300):
        raise DegenerateMoebius("Moebius denominator vanishes")
    F = num * num / (den * den) + (p1 + 1j * p2)
    s = stereo_parts(F)
    Q = euler_matrix(theta, phi, psi)
    return [Q[i][0] * s[0] + Q[i][1] * s[1] + Q[i][2] * s[2] for i in range(3)]


def _unpack(params):
    return (params.mu, params.xi[0], params.xi[1], params.a[0], params.a[1],
            params.p[0], params.p[1], params.rot.theta, params.rot.phi, params.rot.psi)


def bubble_eval(params: BubbleParams, x, y, alt_denominator=False):
    """Evaluate Q delta_{mu,xi,a,p}(z); result has shape (..., 3)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    parts = family_parts(x, y, *_unpack(params), alt_denominator=alt_denominator)
    return np.stack(np.broadcast_arrays(*parts), axis=-1)


def bubble_grad(params: BubbleParams, x, y) -> MapSample:
    """Value and analytic first partials of Q delta_{mu,xi,a,p}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mu = params.mu
    w = ((x - params.xi[0]) + 1j * (y - params.xi[1])) / mu
    A = params.a[0] + 1j * params.a[1]
    q = 1.0 - np.conj(A) * w
    if np.any(np.abs(q) ** 2 < 1e-300):
        raise DegenerateMoebius("Moebius denominator vanishes")
    f = w / q
    F = f * f + (params.p[0] + 1j * params.p[1])
    dF = 2.0 * f / (mu * q * q)
    u, v = F.real, F.imag
    s = 1.0 + u * u + v * v
    val = np.stack([2 * u / s, 2 * v / s, (s - 2.0) / s], axis=-1)

    def push(du, dv):
        dot = u * du + v * dv
        return np.stack([2 * du / s - 4 * u * dot / s**2,
                         2 * dv / s - 4 * v * dot / s**2,
                         4 * dot / s**2], axis=-1)

    gx = push(dF.real, dF.imag)
    gy = push(-dF.imag, dF.real)
    Q = params.rot.matrix
    return MapSample(val @ Q.T, gx @ Q.T, gy @ Q.T)


# ---------------------------------------------------------------- diagnostics


def hsystem_residual(fn: Callable, x, y, h=1e-4):
    """Delta u - 2 u_x ^ u_y by central differences of step h."""
    if not 1e-6 <= h <= 1e-2:
        raise ValueError("h must lie in [1e-6, 1e-2]")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u0 = np.asarray(fn(x, y), dtype=float)
    uxp, uxm = np.asarray(fn(x + h, y)), np.asarray(fn(x - h, y))
    uyp, uym = np.asarray(fn(x, y + h)), np.asarray(fn(x, y - h))
    lap = (uxp + uxm + uyp + uym - 4 * u0) / h**2
    ux = (uxp - uxm) / (2 * h)
    uy = (uyp - uym) / (2 * h)
    return lap - 2 * wedge(ux, uy)


def fd_sampler(fn: Callable, h=1e-5) -> Callable:
    """Wrap a value-only map into one returning a MapSample by central differences."""

    def sample(x, y):
        v = np.asarray(fn(x, y), dtype=float)
        gx = (np.asarray(fn(x + h, y)) - np.asarray(fn(x - h, y))) / (2 * h)
        gy = (np.asarray(fn(x, y + h)) - np.asarray(fn(x, y - h))) / (2 * h)
        return MapSample(v, gx, gy)

    return sample


def _degree_on(sample, rule):
    s = sample(rule.x, rule.y)
    integrand = np.einsum("...i,...i->...", s.value, wedge(s.grad_y, s.grad_x))
    return rule.integrate(integrand) / (4 * np.pi)


def degree_numeric(sample: Callable, rule=None, tol=1e-3):
    """Degree (1/4pi) int u.(u_y ^ u_x) over the plane.

    ``sample(x, y)`` returns a MapSample.  Without an explicit rule the
    compactified plane rule is used at two resolutions and their agreement
    is checked against ``tol``.
    """
    from .quadrature import plane_rule

    if rule is not None:
        return _degree_on(sample, rule)
    fine = _degree_on(sample, plane_rule(200, 256))
    coarse = _degree_on(sample, plane_rule(100, 128))
    if abs(fine - coarse) > tol:
        raise QuadratureNotConverged(f"degree changed by {abs(fine - coarse):.3e}")
    return fine
