"""Tensor quadrature on the circle, the unit disk and the whole plane.

Disk rules can be adapted to a bubble concentrated at xi with scale mu: a
polar patch around xi with geometrically graded radial panels, plus the rest
of the disk in polar coordinates centered at xi (radial limit clipped to the
unit circle, log-graded in r).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidAdaptation


@dataclass(frozen=True)
class QuadratureRule:
    domain: str
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def size(self):
        return self.w.size

    def integrate(self, values):
        """Weighted sum over the node axis (axis 0) of ``values``."""
        values = np.asarray(values)
        return np.tensordot(self.w, values, axes=(0, 0))

    def __add__(self, other):
        return QuadratureRule(self.domain, np.concatenate([self.x, other.x]),
                              np.concatenate([self.y, other.y]),
                              np.concatenate([self.w, other.w]), {**self.meta, **other.meta})


def _gauss(n, a=0.0, b=1.0):
    t, wt = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (b + a), 0.5 * (b - a) * wt


def _angles(n):
    return 2 * np.pi * np.arange(n) / n, np.full(n, 2 * np.pi / n)


def circle_rule(n):
    """Equispaced trapezoid nodes on the unit circle (weights sum to 2 pi)."""
    t, wt = _angles(n)
    return QuadratureRule("circle", np.cos(t), np.sin(t), wt, {"t": t})


def _polar(r, wr, th, wth, cx=0.0, cy=0.0):
    R, T = np.meshgrid(r, th, indexing="ij")
    W = np.outer(wr, wth)
    return cx + R * np.cos(T), cy + R * np.sin(T), W


def _check_sizes(n_radial, n_angular):
    if n_radial < 8 or n_angular < 16:
        raise ValueError("need n_radial >= 8 and n_angular >= 16")


def disk_rule(n_radial=128, n_angular=256, adapt=None, inner=(96, 192)):
    """Quadrature on the unit disk.

    ``adapt=(xi, mu)`` switches to the bubble-adapted two-zone rule with the
    inner zone sized by ``inner = (n_radial_inner, n_angular_inner)``.
    """
    _check_sizes(n_radial, n_angular)
    if adapt is None:
        r, wr = _gauss(n_radial)
        th, wth = _angles(n_angular)
        X, Y, W = _polar(r, wr * r, th, wth)
        return QuadratureRule("disk", X.ravel(), Y.ravel(), W.ravel())

    xi, mu = adapt
    xi = np.asarray(xi, dtype=float)
    rxi = float(np.hypot(*xi))
    if not rxi < 1 or not mu > 0:
        raise InvalidAdaptation("adaptation center must be interior and mu positive")
    d = 1.0 - rxi**2
    r_in = min(np.sqrt(mu), d / 2)
    n_in_r, n_in_t = inner

    # inner zone: radial panels [0, mu], [mu, 2mu], ... up to r_in
    edges = [0.0]
    step = min(mu, r_in)
    while edges[-1] + 1e-15 < r_in:
        edges.append(min(r_in, max(step, 2 * edges[-1])))
    n_pan = len(edges) - 1
    per = max(4, int(np.ceil(n_in_r / n_pan)))
    rs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        r, wr = _gauss(per, a, b)
        rs.append(r)
        ws.append(wr * r)
    th, wth = _angles(n_in_t)
    Xi, Yi, Wi = _polar(np.concatenate(rs), np.concatenate(ws), th, wth, *xi)

    # outer zone: r from r_in to the circle, r = r_in (R/r_in)**t
    th, wth = _angles(n_angular)
    e = np.stack([np.cos(th), np.sin(th)])
    b = xi @ e
    R = -b + np.sqrt(b * b + 1 - rxi**2)
    t, wt = _gauss(n_radial)
    L = np.log(R / r_in)
    r = r_in * np.exp(np.outer(L, t))                 # (n_angular, n_radial)
    wr = r * r * L[:, None] * wt[None, :]             # r dr with dr = r L dt
    Xo = xi[0] + r * np.cos(th)[:, None]
    Yo = xi[1] + r * np.sin(th)[:, None]
    Wo = wr * wth[:, None]
    meta = {"center": tuple(xi), "r_in": r_in, "mu": mu, "n_inner": Wi.size}
    return QuadratureRule("disk",
                          np.concatenate([Xi.ravel(), Xo.ravel()]),
                          np.concatenate([Yi.ravel(), Yo.ravel()]),
                          np.concatenate([Wi.ravel(), Wo.ravel()]), meta)


def plane_rule(n_radial=200, n_angular=256):
    """Quadrature on R^2 via r = tan(pi u / 2), Gauss-Legendre in u."""
    _check_sizes(n_radial, n_angular)
    u, wu = _gauss(n_radial)
    r = np.tan(np.pi * u / 2)
    wr = wu * (np.pi / 2) / np.cos(np.pi * u / 2) ** 2 * r
    th, wth = _angles(n_angular)
    X, Y, W = _polar(r, wr, th, wth)
    return QuadratureRule("plane", X.ravel(), Y.ravel(), W.ravel())


# ---------------------------------------------------------------- identity suite


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    exact: float
    computed: float
    abs_err: float
    rel_err: float
    nodes_used: int
    err_estimate: float

    def ok(self, rel_tol=1e-7, abs_tol=1e-10):
        if self.exact == 0:
            return self.abs_err <= abs_tol
        return self.rel_err <= rel_tol


def _r2(x, y):
    return x * x + y * y


PI = np.pi
# (id, integrand(x, y), exact value)
IDENTITIES = (
    ("(x2-y2)(x4-y4)/(1+r4)^4", lambda x, y: (x*x - y*y) * (x**4 - y**4) / (1 + _r2(x, y)**2)**4, PI / 24),
    ("(x4-y4)/(1+r4)^3", lambda x, y: (x**4 - y**4) / (1 + _r2(x, y)**2)**3, 0.0),
    ("x2(x4-y4)/(1+r4)^3", lambda x, y: x*x * (x**4 - y**4) / (1 + _r2(x, y)**2)**3, PI / 16),
    ("y2(x4-y4)/(1+r4)^3", lambda x, y: y*y * (x**4 - y**4) / (1 + _r2(x, y)**2)**3, -PI / 16),
    ("x2y2r2/(1+r4)^4", lambda x, y: x*x * y*y * _r2(x, y) / (1 + _r2(x, y)**2)**4, PI / 96),
    ("x2y2r2/(1+r4)^3", lambda x, y: x*x * y*y * _r2(x, y) / (1 + _r2(x, y)**2)**3, PI / 32),
    ("(1-r4)r2/(1+r4)^4", lambda x, y: (1 - _r2(x, y)**2) * _r2(x, y) / (1 + _r2(x, y)**2)**4, PI / 12),
    ("(1-r4)r2/(1+r4)^3", lambda x, y: (1 - _r2(x, y)**2) * _r2(x, y) / (1 + _r2(x, y)**2)**3, 0.0),
    ("(1-r4)r5/(1+r4)^3", lambda x, y: (1 - _r2(x, y)**2) * _r2(x, y)**2.5 / (1 + _r2(x, y)**2)**3,
     -9 * PI**2 / (16 * np.sqrt(2))),
    ("x2(1-r4)r2/(1+r4)^3", lambda x, y: x*x * (1 - _r2(x, y)**2) * _r2(x, y) / (1 + _r2(x, y)**2)**3,
     -PI**2 / 16),
    ("y2(1-r4)r2/(1+r4)^3", lambda x, y: y*y * (1 - _r2(x, y)**2) * _r2(x, y) / (1 + _r2(x, y)**2)**3,
     -PI**2 / 16),
    ("(x4-y4)r3/(1+r4)^3", lambda x, y: (x**4 - y**4) * _r2(x, y)**1.5 / (1 + _r2(x, y)**2)**3, 0.0),
    ("xyr5/(1+r4)^3", lambda x, y: x * y * _r2(x, y)**2.5 / (1 + _r2(x, y)**2)**3, 0.0),
)


def identity_suite(n_radial=200, n_angular=256):
    """Evaluate every plane identity; error estimate from a half-resolution run."""
    fine = plane_rule(n_radial, n_angular)
    coarse = plane_rule(max(8, n_radial // 2), max(16, n_angular // 2))
    out = []
    for name, fn, exact in IDENTITIES:
        val = float(fine.integrate(fn(fine.x, fine.y)))
        est = abs(val - float(coarse.integrate(fn(coarse.x, coarse.y))))
        ae = abs(val - exact)
        re = ae / abs(exact) if exact != 0 else float("inf") if ae > 0 else 0.0
        out.append(IdentityRecord(name, exact, val, ae, re, fine.size, est))
    return out
