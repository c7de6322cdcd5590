"""Euler functional, reduced energies and the scalar fields of the one-bubble model.

Variable order for every reduced gradient and Hessian is
chi = (mu, xi1, xi2, theta, phi, psi, a1, a2, p1, p2).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from ._jet import Jet, coeff
from .bubbles import BubbleParams, RotationSO3, bubble_grad, euler_matrix, wedge
from .errors import BubblesTooClose, NearBoundary, QuadratureNotConverged
from .harmonic import DatumField, ProjectedBubble, ROBIN_TABLE, RotatedDatum, samples_for
from .kernels import family_derivative
from .quadrature import circle_rule, disk_rule

PI = np.pi
CHI_NAMES = ("mu", "xi1", "xi2", "theta", "phi", "psi", "a1", "a2", "p1", "p2")


# ---------------------------------------------------------------- Euler functional


@dataclass(frozen=True)
class EnergyBreakdown:
    dirichlet: float
    cubic: float
    boundary_linear: float
    boundary_quadratic: float
    total: float = field(default=np.nan)
    err_estimate: float = field(default=np.nan)

    def __post_init__(self):
        parts = self.dirichlet + self.cubic + self.boundary_linear + self.boundary_quadratic
        if np.isnan(self.total):
            object.__setattr__(self, "total", parts)
        elif abs(self.total - parts) > 1e-12 * max(1.0, abs(parts)):
            raise ValueError("total must equal the sum of the parts")

    def to_dict(self):
        return asdict(self)


def _sample(obj, x, y):
    if hasattr(obj, "sample"):
        return obj.sample(x, y)
    if hasattr(obj, "gradient"):
        gx, gy = obj.gradient(x, y)
        return obj(x, y), gx, gy
    return obj(x, y)


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _breakdown(u, g, eps, rule):
    uv, ux, uy = _sample(u, rule.x, rule.y)
    dirichlet = 0.5 * rule.integrate(_dot(ux, ux) + _dot(uy, uy))
    cubic = (2.0 / 3.0) * rule.integrate(_dot(uv, wedge(ux, uy)))
    lin = quad = 0.0
    if g is not None and eps != 0:
        gv, gx, gy = _sample(g, rule.x, rule.y)
        lin = eps * rule.integrate(_dot(uv, wedge(ux, gy) + wedge(gx, uy)))
        quad = 2 * eps**2 * rule.integrate(_dot(uv, wedge(gx, gy)))
    return EnergyBreakdown(float(dirichlet), float(cubic), float(lin), float(quad))


def energy_full(u, g=None, eps=0.0, rule=None, tol=1e-6):
    """The four integrals of I_eps(u) on the disk.

    ``u`` and ``g`` return MapSample-like triples (value, d/dx, d/dy).
    Without an explicit rule, ``u.params`` sets a bubble-adapted rule and a
    half-resolution run provides the error estimate.
    """
    c = circle_rule(64)
    edge = np.abs(np.asarray(_sample(u, c.x, c.y)[0])).max()
    if edge > 1e-6:
        warnings.warn(f"u does not vanish on the boundary (max {edge:.2e})", stacklevel=2)
    if rule is not None:
        return _breakdown(u, g, eps, rule)
    prm = u.params
    fine = _breakdown(u, g, eps, disk_rule(128, 256, adapt=(prm.xi, prm.mu)))
    coarse = _breakdown(u, g, eps, disk_rule(96, 192, adapt=(prm.xi, prm.mu), inner=(64, 128)))
    err = abs(fine.total - coarse.total)
    if err > tol * max(1.0, abs(fine.total)):
        raise QuadratureNotConverged(f"energy estimate {err:.2e}")
    return EnergyBreakdown(fine.dirichlet, fine.cubic, fine.boundary_linear,
                           fine.boundary_quadratic, fine.total, err)


def single_bubble_energy(params: BubbleParams, eps, omega=None, tol=1e-6):
    """I_eps(P delta) with datum (2 h1, 2 h2, -2 eps h3) centered at ``omega`` (default xi)."""
    u = ProjectedBubble(params)
    g = DatumField(params.xi if omega is None else omega, eps) if eps else None
    return energy_full(u, g, eps, tol=tol)


def energy_free(u, rule_plane):
    """Free energy on the plane: 1/2 int |grad u|^2 + 2/3 int u.(u_x ^ u_y)."""
    uv, ux, uy = _sample(u, rule_plane.x, rule_plane.y)
    return float(0.5 * rule_plane.integrate(_dot(ux, ux) + _dot(uy, uy))
                 + (2.0 / 3.0) * rule_plane.integrate(_dot(uv, wedge(ux, uy))))


# ---------------------------------------------------------------- Robin coefficients


def _robin_coeffs(x1, x2):
    """Coefficients of the reduced energy at (xi, xi); generic over jets."""
    t = ROBIN_TABLE
    return {
        "H": 2 * t[("h1", 2, (1, 1))](x1, x2),
        "A1": t[("hm1_1", 1, (1, 0))](x1, x2),
        "A2": t[("hm1_2", 2, (1, 0))](x1, x2),
        "P1": t[("h2_1", 1, (4, 0))](x1, x2),
        "P2": t[("h2_2", 2, (4, 0))](x1, x2),
        "M11": t[("h2_1", 1, (1, 0))](x1, x2),
        "M12": t[("h2_1", 2, (1, 0))](x1, x2),
        "M21": t[("h2_2", 1, (1, 0))](x1, x2),
        "M22": t[("h2_2", 2, (1, 0))](x1, x2),
    }


def field_H(xi):
    """H(xi) = 4 (1 + 2|xi|^2) / (1 - |xi|^2)^4."""
    s = xi[0] ** 2 + xi[1] ** 2
    return 4 * (1 + 2 * s) / (1 - s) ** 4


def _d_term(Q, gxx, gxy):
    # d_{Q^-1} g = g_xx . (Q e1) + g_xy . (Q e2)
    return float(Q[:, 0] @ gxx + Q[:, 1] @ gxy)


def _poly(mu, eps, a, p, c, D):
    a1, a2 = a
    p1, p2 = p
    return (4 * PI * mu**4 * c["H"]
            - 4 * PI * eps * mu**2 * D
            - 16 * PI * mu**2 * (a1 * a1 * c["A1"] + a2 * a2 * c["A2"])
            + (4 * PI / 3) * mu**8 * (-p1 * p1 * c["P1"] + p2 * p2 * c["P2"])
            - 32 * PI * mu**5 * (p1 * a1 * c["M11"] + p1 * a2 * c["M12"]
                                 + p2 * a1 * c["M21"] + p2 * a2 * c["M22"]))


@dataclass(frozen=True)
class ReducedEnergyInputs:
    """Arguments of the one-bubble reduced energy.

    ``datum`` defaults to DatumField(omega, eps); ``frame`` is a fixed
    rotation R with Q = R Q(theta, phi, psi).
    """

    params: BubbleParams
    omega: tuple
    eps: float
    datum: object = None
    frame: np.ndarray | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if np.hypot(*self.params.xi) > 0.99:
            raise NearBoundary("|xi| must not exceed 0.99")
        if self.datum is None:
            object.__setattr__(self, "datum", DatumField(self.omega, self.eps))

    @property
    def Q(self):
        E = self.params.rot.matrix
        return E if self.frame is None else np.asarray(self.frame) @ E


def reduced_energy_F(inputs: ReducedEnergyInputs):
    """Closed-form reduced energy of one bubble (all nine terms)."""
    prm = inputs.params
    x1, x2 = prm.xi
    c = _robin_coeffs(x1, x2)
    g = inputs.datum
    D = _d_term(inputs.Q, g.derivative(x1, x2, 2, 0), g.derivative(x1, x2, 1, 1))
    return float(_poly(prm.mu, inputs.eps, prm.a, prm.p, c, D))


def reduced_energy_grad(inputs: ReducedEnergyInputs):
    """Exact gradient in chi order: polynomial part by hand, xi and angles by jets."""
    prm = inputs.params
    mu, eps = prm.mu, inputs.eps
    (a1, a2), (p1, p2) = prm.a, prm.p
    x1, x2 = prm.xi
    g = inputs.datum
    gxx, gxy = g.derivative(x1, x2, 2, 0), g.derivative(x1, x2, 1, 1)
    gxxx, gxxy, gxyy = g.derivative(x1, x2, 3, 0), g.derivative(x1, x2, 2, 1), g.derivative(x1, x2, 1, 2)
    Q = inputs.Q
    D = _d_term(Q, gxx, gxy)

    jc = _robin_coeffs(Jet.variable(x1, 2, [0]), Jet.variable(x2, 2, [1]))
    c = {k: float(coeff(v)) for k, v in jc.items()}
    dc = [{k: float(coeff(v, (i,))) for k, v in jc.items()} for i in (0, 1)]

    A = a1 * a1 * c["A1"] + a2 * a2 * c["A2"]
    P = -p1 * p1 * c["P1"] + p2 * p2 * c["P2"]
    M = p1 * a1 * c["M11"] + p1 * a2 * c["M12"] + p2 * a1 * c["M21"] + p2 * a2 * c["M22"]
    out = np.zeros(10)
    out[0] = (16 * PI * mu**3 * c["H"] - 8 * PI * eps * mu * D - 32 * PI * mu * A
              + (32 * PI / 3) * mu**7 * P - 160 * PI * mu**4 * M)
    dD = (_d_term(Q, gxxx, gxxy), _d_term(Q, gxxy, gxyy))
    for i in (0, 1):
        out[1 + i] = _poly(mu, eps, prm.a, prm.p, dc[i], dD[i])

    r = prm.rot
    E = euler_matrix(Jet.variable(r.theta, 3, [0]), Jet.variable(r.phi, 3, [1]),
                     Jet.variable(r.psi, 3, [2]))
    R = np.eye(3) if inputs.frame is None else np.asarray(inputs.frame)
    for i in range(3):
        dE = np.array([[float(coeff(E[a][b], (i,))) for b in range(3)] for a in range(3)])
        out[3 + i] = -4 * PI * eps * mu**2 * _d_term(R @ dE, gxx, gxy)

    out[6] = -32 * PI * mu**2 * a1 * c["A1"] - 32 * PI * mu**5 * (p1 * c["M11"] + p2 * c["M21"])
    out[7] = -32 * PI * mu**2 * a2 * c["A2"] - 32 * PI * mu**5 * (p1 * c["M12"] + p2 * c["M22"])
    out[8] = -(8 * PI / 3) * mu**8 * p1 * c["P1"] - 32 * PI * mu**5 * (a1 * c["M11"] + a2 * c["M12"])
    out[9] = (8 * PI / 3) * mu**8 * p2 * c["P2"] - 32 * PI * mu**5 * (a1 * c["M21"] + a2 * c["M22"])
    return out


def chi_of(params: BubbleParams):
    r = params.rot
    return np.array([params.mu, *params.xi, r.theta, r.phi, r.psi, *params.a, *params.p])


def params_of(chi):
    chi = np.asarray(chi, dtype=float)
    return BubbleParams(chi[0], (chi[1], chi[2]), (chi[6], chi[7]), (chi[8], chi[9]),
                        RotationSO3(chi[3], chi[4], chi[5]))


# ---------------------------------------------------------------- rho-datum model


def _ftilde(x, y, rho):
    f1 = 4 * rho * (2 * rho**4 * x * (x * x - 3 * y * y) * (x * x + y * y)
                    + 8 * rho**2 * x * (x * x + 3 * y * y)
                    - 2 * rho * (x * x + 7 * y * y)
                    - rho**3 * (7 * x**4 + 6 * x * x * y * y - 9 * y**4)
                    - 2 * x) + 4
    f2 = 8 * rho * y * (2 * rho**3 * x * (3 * x * x + 5 * y * y)
                        + rho**4 * (-3 * x**4 - 2 * x * x * y * y + y**4)
                        - 6 * rho * x - 8 * rho**2 * y * y + 3)
    return f1, f2


def _rho_den(x, y, rho):
    return rho**2 * (x * x + y * y) - 2 * rho * x + 1


def field_dQg(xi, rot=None, rho=None, omega=None, eps=0.0):
    """d_{Q^-1} g(xi).

    With ``rho`` the Euler-angle expansion for the rho datum is used; with
    ``omega`` the h1-family datum at omega is differentiated directly.
    """
    Q = (rot or RotationSO3()).matrix
    x, y = float(xi[0]), float(xi[1])
    if rho is not None:
        f1, f2 = _ftilde(x, y, rho)
        den = _rho_den(x, y, rho) ** 4
        return float(f1 / den * Q[0, 0] + f2 / den * Q[1, 0] - f2 / den * Q[0, 1] + f1 / den * Q[1, 1])
    g = DatumField(omega, eps)
    return _d_term(Q, g.derivative(x, y, 2, 0), g.derivative(x, y, 1, 1))


def field_Wrho(xi, rho):
    """W_rho(xi) in its simplified closed form."""
    x, y = float(xi[0]), float(xi[1])
    s = x * x + y * y
    return (4 * np.sqrt(4 * rho * (rho * s + x) + 1) * (1 - s) ** 2
            / (_rho_den(x, y, rho) ** 2 * np.sqrt(1 + 2 * s)))


def wrho_max(rho):
    """Closed-form maximum value W_rho(rho, 0)."""
    return (4 * (rho**2 - 1) ** 2 * np.sqrt(4 * rho * (rho**3 + rho) + 1)
            / (np.sqrt(2 * rho**2 + 1) * (rho**4 - 2 * rho**2 + 1) ** 2))


def wrho_max_hessian(rho):
    """Closed-form Hessian of W_rho at (rho, 0)."""
    v = -(24 * np.sqrt((2 * rho**2 + 1) ** 2) * (3 * rho**4 + 2 * rho**2 + 1)
          / ((rho**2 - 1) ** 4 * (2 * rho**2 + 1) ** 2.5))
    return np.diag([v, v])


def ftilde_model(chi, rho, eps):
    """Quadratic-order model of the rho-datum reduced energy around chi_0.

    The bubble terms use (xi, xi) and mu; the a, p terms are frozen at
    omega = (rho, 0) with mu_0 = sqrt(eps).
    """
    mu, x1, x2, th, ph, ps = (float(v) for v in chi[:6])
    a = (float(chi[6]), float(chi[7]))
    p = (float(chi[8]), float(chi[9]))
    mu0 = np.sqrt(eps)
    D = field_dQg((x1, x2), RotationSO3(th, ph, ps), rho=rho)
    c = _robin_coeffs(rho, 0.0)
    lead = 4 * PI * mu**4 * field_H((x1, x2)) - 4 * PI * eps * mu**2 * D
    return float(lead + _poly(mu0, 0.0, a, p, c, 0.0) - 4 * PI * mu0**4 * c["H"])


def chi0(rho, eps):
    return np.array([np.sqrt(eps), rho, 0.0, PI / 2, 0, 0, 0, 0, 0, 0])


def hessian_A(rho, eps):
    """Closed-form 10x10 Hessian of the rho-datum model at chi_0."""
    A = np.zeros((10, 10))
    e = eps
    A[0, 0] = 128 * PI * (2 * rho**2 + 1) * e / (rho**2 - 1) ** 4
    A[0, 1] = A[1, 0] = -384 * PI * (rho**3 + rho) * e**1.5 / (rho**2 - 1) ** 5
    A[1, 1] = 192 * PI * (3 * rho**4 + 6 * rho**2 + 1) * e**2 / (rho**2 - 1) ** 6
    A[2, 2] = 192 * PI * (3 * rho**4 + 6 * rho**2 + 1) * e**2 / (rho**2 - 1) ** 6
    A[2, 4] = A[4, 2] = 192 * PI * rho * (rho**2 + 1) * e**2 / (rho**2 - 1) ** 5
    A[3, 3] = 16 * PI * (2 * rho**2 + 1) * e**2 / (rho**2 - 1) ** 4
    A[4, 4] = 32 * PI * (2 * rho**2 + 1) * e**2 / (rho**2 - 1) ** 4
    A[5, 5] = 16 * PI * (2 * rho**2 + 1) * e**2 / (rho**2 - 1) ** 4
    A[6, 6] = 64 * PI * e / (1 - rho**2) ** 2
    A[6, 8] = A[8, 6] = 128 * PI * e**2.5 * rho**3 / (1 - rho**2) ** 5
    A[7, 7] = 64 * PI * e / (1 - rho**2) ** 2
    A[7, 9] = A[9, 7] = -128 * PI * e**2.5 * rho**3 / (1 - rho**2) ** 5
    A[8, 8] = 2240 * PI * e**4 / (1 - rho**2) ** 8
    A[9, 9] = 2240 * PI * e**4 / (1 - rho**2) ** 8
    return A


# the 18 tabulated nonzero entries, mirrored off-diagonals included
A_TABULATED = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 4), (3, 3), (4, 2), (4, 4),
               (5, 5), (6, 6), (6, 8), (7, 7), (7, 9), (8, 6), (8, 8), (9, 7), (9, 9))


def box_widths(rho, eps, lam=1.0):
    """Half-widths of the parameter box T_lambda in chi order."""
    mu0 = np.sqrt(eps)
    t = 1 - rho
    return lam * np.array([t**4 * mu0, t**5, t**5, t**4, t**4, t**4,
                           t**2 * mu0, t**2 * mu0, t**5 / mu0**2, t**5 / mu0**2])


def fd_hessian(f, x, h):
    """Central second differences with per-coordinate steps h."""
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.zeros((n, n))
    f0 = f(x)
    E = np.diag(h)
    for i in range(n):
        H[i, i] = (f(x + E[i]) - 2 * f0 + f(x - E[i])) / h[i] ** 2
        for j in range(i + 1, n):
            v = (f(x + E[i] + E[j]) - f(x + E[i] - E[j]) - f(x - E[i] + E[j])
                 + f(x - E[i] - E[j])) / (4 * h[i] * h[j])
            H[i, j] = H[j, i] = v
    return H


def fd_gradient(f, x, h):
    x = np.asarray(x, dtype=float)
    E = np.diag(h)
    return np.array([(f(x + E[i]) - f(x - E[i])) / (2 * h[i]) for i in range(x.size)])


# ---------------------------------------------------------------- two bubbles


@dataclass(frozen=True)
class InteractionInputs:
    first: BubbleParams
    second: BubbleParams
    omega1: tuple = None
    omega2: tuple = None

    def __post_init__(self):
        if np.hypot(*self.sigma) < 1e-3:
            raise BubblesTooClose("bubble centers closer than 1e-3")
        if self.omega1 is None:
            object.__setattr__(self, "omega1", self.first.xi)
        if self.omega2 is None:
            object.__setattr__(self, "omega2", self.second.xi)

    @property
    def sigma(self):
        return (self.second.xi[0] - self.first.xi[0], self.second.xi[1] - self.first.xi[1])

    @property
    def relative(self):
        """Q_1^{-1} Q_2."""
        return self.first.rot.matrix.T @ self.second.rot.matrix


def _sigma_parts(sigma):
    s1, s2 = sigma
    r2 = s1 * s1 + s2 * s2
    quart = (s1**4 - 6 * s2 * s2 * s1 * s1 + s2**4) / r2**4
    mixed = s1 * s2 * (s1 * s1 - s2 * s2) / r2**4
    cub1 = s1 * (s1 * s1 - 3 * s2 * s2) / r2**3
    cub2 = s2 * (3 * s1 * s1 - s2 * s2) / r2**3
    return quart, mixed, cub1, cub2


def interaction_coefficients(inputs: InteractionInputs, eps, datum1=None, Q=None):
    """The q_ij-indexed brackets of the two-bubble closed form, as a 2x2 array."""
    if np.hypot(*inputs.sigma) < 0.1:
        raise BubblesTooClose("closed form needs |sigma| >= 0.1")
    m1, m2 = inputs.first.mu, inputs.second.mu
    quart, mixed, _, _ = _sigma_parts(inputs.sigma)
    C = np.array([[-48 * PI * quart, -192 * PI * mixed],
                  [-192 * PI * mixed, 48 * PI * quart]]) * m1**2 * m2**2
    if eps:
        g = datum1 if datum1 is not None else DatumField(inputs.omega1, eps)
        z = inputs.second.xi
        gxx = g.derivative(z[0], z[1], 2, 0)
        gxy = g.derivative(z[0], z[1], 1, 1)
        # the q21 row reuses the q11 datum derivative g1_xx
        C = C - 4 * PI * eps * m2**2 * np.array([[gxx[0], gxy[1]], [gxx[0], gxy[1]]])
    return C


def interaction_FD(inputs: InteractionInputs, eps, datum1=None):
    """Closed-form bubble-bubble interaction weighted by Q = Q_1^{-1} Q_2."""
    Q = inputs.relative
    return float(np.sum(Q[:2, :2] * interaction_coefficients(inputs, eps, datum1)))


def interaction_linear(inputs: InteractionInputs, which=1):
    """Closed-form interaction of one bubble's a-modes with the other bubble."""
    if np.hypot(*inputs.sigma) < 0.1:
        raise BubblesTooClose("closed form needs |sigma| >= 0.1")
    Q = inputs.relative
    q11, q12, q21, q22 = Q[0, 0], Q[0, 1], Q[1, 0], Q[1, 1]
    # odd in sigma; the sign is fixed by brute-force quadrature of the a-mode integrals
    _, _, c1, c2 = _sigma_parts((-inputs.sigma[0], -inputs.sigma[1]))
    m1, m2 = inputs.first.mu, inputs.second.mu
    k = 32 * PI
    first = q11 * (-k * c1) + q12 * (-k * c2) + q21 * (-k * c2) + q22 * (k * c1)
    second = q11 * (k * c2) + q12 * (-k * c1) + q21 * (-k * c1) + q22 * (-k * c2)
    if which == 1:
        a = inputs.first.a
        return float(m1 * m2**2 * (a[0] * first + a[1] * second))
    if which == 2:
        a = inputs.second.a
        return float(m1**2 * m2 * (-a[0] * first - a[1] * second))
    raise ValueError("which must be 1 or 2")


def interaction_brute(inputs: InteractionInputs, eps=0.0, mode=None, rule=None):
    """Matrix C_ij = 2 int (P delta_2 + eps g2)_j [W]_i by adapted quadrature.

    W = delta1_x ^ delta1_y by default; ``mode`` names a parameter of bubble 1
    (e.g. "a1") to use W = delta1_x ^ Z_y + Z_x ^ delta1_y with Z the
    derivative of bubble 1 along it.  Both bubbles are taken unrotated.
    """
    b1 = inputs.first.replace(rot=RotationSO3())
    b2 = inputs.second.replace(rot=RotationSO3())
    if rule is None:
        rule = disk_rule(200, 256, adapt=(b1.xi, b1.mu), inner=(120, 256))
    x, y = rule.x, rule.y
    s1 = bubble_grad(b1, x, y)
    if mode is None:
        W = wedge(s1.grad_x, s1.grad_y)
    else:
        base = (b1.mu, *b1.xi, *b1.a, *b1.p, PI / 2, 0.0, 0.0)
        zx = family_derivative(x, y, (mode,), "x", base)
        zy = family_derivative(x, y, (mode,), "y", base)
        W = wedge(s1.grad_x, zy) + wedge(zx, s1.grad_y)
    V = ProjectedBubble(b2)(x, y)
    if eps:
        V = V + eps * DatumField(inputs.omega2, eps)(x, y)
    return 2 * np.einsum("n,ni,nj->ij", rule.w, W, V)


# ---------------------------------------------------------------- k bubbles


def _pair_terms(si, sj, Qi, Qj, datum_i, eps):
    inp = InteractionInputs(si.replace(rot=RotationSO3()), sj.replace(rot=RotationSO3()))
    rel = Qi.T @ Qj
    g = RotatedDatum(datum_i, Qi.T)
    C = interaction_coefficients(inp, eps, g)
    fd = float(np.sum(rel[:2, :2] * C))
    inp_rot = _RelInputs(inp, rel)
    return fd + interaction_linear(inp_rot, 1) + interaction_linear(inp_rot, 2)


class _RelInputs:
    """InteractionInputs view with an explicit relative rotation."""

    def __init__(self, inp, rel):
        self.first, self.second, self.sigma, self.relative = inp.first, inp.second, inp.sigma, rel


def _check_spacing(states):
    k = len(states)
    for i in range(k):
        for j in range(i + 1, k):
            dist = np.hypot(states[j].xi[0] - states[i].xi[0], states[j].xi[1] - states[i].xi[1])
            if dist < 0.1:
                raise BubblesTooClose(f"bubbles {i}, {j} at distance {dist:.3g}")


def _pair_value(si, sj, Ri, Rj, gi, gj, eps):
    Qi, Qj = Ri @ si.rot.matrix, Rj @ sj.rot.matrix
    return 0.5 * (_pair_terms(si, sj, Qi, Qj, gi, eps) + _pair_terms(sj, si, Qj, Qi, gj, eps))


def sigma_energy(states, data, eps, frames=None):
    """Sum of one-bubble reduced energies and all pair interactions.

    ``data[i]`` is the datum seen by bubble i (physical frame); ``frames[i]``
    is R_i with Q_i = R_i Q(theta_i, phi_i, psi_i).  Each unordered pair
    contributes the mean of its two ordered closed forms.
    """
    k = len(states)
    frames = [np.eye(3)] * k if frames is None else [np.asarray(f) for f in frames]
    _check_spacing(states)
    total = 0.0
    for i in range(k):
        total += reduced_energy_F(ReducedEnergyInputs(states[i], states[i].xi, eps, data[i], frames[i]))
    for i in range(k):
        for j in range(i + 1, k):
            total += _pair_value(states[i], states[j], frames[i], frames[j], data[i], data[j], eps)
    return float(total)


def sigma_energy_grad(states, data, eps, frames=None, rel_step=1e-6):
    """Gradient over the stacked chi vectors: exact one-bubble part, FD pair part."""
    k = len(states)
    frames = [np.eye(3)] * k if frames is None else [np.asarray(f) for f in frames]
    _check_spacing(states)
    grad = np.zeros(10 * k)
    for i in range(k):
        grad[10 * i:10 * i + 10] = reduced_energy_grad(
            ReducedEnergyInputs(states[i], states[i].xi, eps, data[i], frames[i]))
    for i in range(k):
        for j in range(i + 1, k):
            v = np.concatenate([chi_of(states[i]), chi_of(states[j])])

            def pair(w, i=i, j=j):
                return _pair_value(params_of(w[:10]), params_of(w[10:]), frames[i], frames[j],
                                   data[i], data[j], eps)

            gp = fd_gradient(pair, v, rel_step * np.maximum(np.abs(v), 1e-3))
            grad[10 * i:10 * i + 10] += gp[:10]
            grad[10 * j:10 * j + 10] += gp[10:]
    return grad
