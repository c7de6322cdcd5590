"""Critical points of the reduced energy inside the parameter box T_lambda.

Per-bubble vectors use chi = (mu, xi1, xi2, theta, phi, psi, a1, a2, p1, p2);
a k-bubble state stacks them into a (k, 10) array.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .energy import (ReducedEnergyInputs, box_widths, chi_of, ftilde_model, fd_gradient,
                     params_of, reduced_energy_F, reduced_energy_grad, sigma_energy,
                     sigma_energy_grad)
from .errors import (DegenerateAxis, InsufficientData, LeftBox, MaxIterations, OutOfRange,
                     SingularHessian)
from .harmonic import BoundaryDatum, DatumField, RotatedDatum, g_rho_boundary

SOUTH = np.array([0.0, 0.0, -1.0])


# ---------------------------------------------------------------- state and box


@dataclass
class ReducedState:
    chis: np.ndarray
    eps: float
    rho: float
    lam: float = 10.0

    def __post_init__(self):
        self.chis = np.atleast_2d(np.asarray(self.chis, dtype=float))
        if self.chis.shape[1] != 10:
            raise ValueError("each bubble needs 10 parameters")

    @property
    def k(self):
        return self.chis.shape[0]

    @property
    def flat(self):
        return self.chis.ravel()

    def with_flat(self, v):
        return ReducedState(np.asarray(v, dtype=float).reshape(self.k, 10), self.eps, self.rho, self.lam)

    def bubbles(self):
        return [params_of(c) for c in self.chis]

    def to_dict(self):
        return {"eps": self.eps, "rho": self.rho, "lambda": self.lam, "k": self.k,
                "chi": self.chis.tolist()}


def ring_angles(k):
    return 2 * np.pi * np.arange(k) / k


def init_state(eps, rho, k=1, lam=10.0):
    """Main-order parameters: mu = sqrt(eps), centers equidistributed on |xi| = rho."""
    if not 0 < eps <= 1e-2:
        raise OutOfRange("eps must lie in (0, 1e-2]")
    if not 0.8 <= rho <= 0.99:
        raise OutOfRange("rho must lie in [0.8, 0.99]")
    if k < 1:
        raise OutOfRange("k must be at least 1")
    mu0 = np.sqrt(eps)
    if 1 - rho * rho < mu0 ** (2.0 / 3.0):
        warnings.warn("1 - rho^2 is below mu0^(2/3); outside the asymptotic regime", stacklevel=2)
    t = ring_angles(k)
    chis = np.zeros((k, 10))
    chis[:, 0] = mu0
    chis[:, 1] = rho * np.cos(t)
    chis[:, 2] = rho * np.sin(t)
    chis[:, 3] = np.pi / 2
    return ReducedState(chis, eps, rho, lam)


@dataclass(frozen=True)
class ParamBox:
    """T_lambda around every bubble's chi_0; ``round_xi`` uses the disk bound on xi."""

    center: np.ndarray
    widths: np.ndarray
    round_xi: bool = False

    @property
    def k(self):
        return self.center.shape[0]

    def offsets(self, flat):
        return np.asarray(flat, dtype=float).reshape(self.k, 10) - self.center

    def contains(self, flat, slack=1e-12):
        d = np.abs(self.offsets(flat)) / self.widths
        if self.round_xi:
            r = np.hypot(d[:, 1], d[:, 2])
            d = np.delete(d, 2, axis=1)
            d[:, 1] = r
        return bool(np.all(d <= 1 + slack))

    def project(self, flat, shrink=1 - 1e-9):
        """Nearest point of the shrunken box, and the mask of clipped coordinates."""
        off = self.offsets(flat)
        w = shrink * self.widths
        out = np.clip(off, -w, w)
        if self.round_xi:
            out[:, 1:3] = off[:, 1:3]
            r = np.hypot(off[:, 1], off[:, 2])
            over = r > w[1]
            out[over, 1:3] *= (w[1] / r[over])[:, None]
        hit = np.abs(out - off) > 0
        return (self.center + out).ravel(), hit.ravel()


def t_lambda_box(state: ReducedState, lam=None):
    """Box T_lambda for the state's (eps, rho, k)."""
    lam = state.lam if lam is None else lam
    base = init_state(state.eps, state.rho, state.k, lam)
    return ParamBox(base.chis, box_widths(state.rho, state.eps, lam), round_xi=state.k > 1)


# ---------------------------------------------------------------- sphere configuration


@dataclass(frozen=True)
class SphereConfiguration:
    vectors: np.ndarray
    rotations: np.ndarray

    @property
    def k(self):
        return len(self.vectors)


def ring_spheres(k, tilt=np.pi / 4):
    """Unit vectors at polar angle ``tilt`` from the south pole, equally spaced in longitude."""
    t = ring_angles(k)
    return np.stack([np.sin(tilt) * np.cos(t), np.sin(tilt) * np.sin(t),
                     -np.cos(tilt) * np.ones(k)], axis=1)


def _rotation_to(v, strict=False):
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1) > 1e-12:
        raise OutOfRange("sphere centers must be unit vectors")
    axis = np.cross(SOUTH, v)
    s = np.linalg.norm(axis)
    c = float(SOUTH @ v)
    if s < 1e-14:
        if strict:
            raise DegenerateAxis("rotation axis undefined for v = (0, 0, +-1)")
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]) / s
    return np.eye(3) + s * K + (1 - c) * K @ K


def build_configuration(spheres, strict=False):
    """Minimal geodesic rotations R_j with R_j (0, 0, -1) = v_j.

    v = (0, 0, -1) gives the identity and v = (0, 0, 1) the half-turn about
    the x axis; ``strict`` raises DegenerateAxis for both instead.
    """
    V = np.atleast_2d(np.asarray(spheres, dtype=float))
    return SphereConfiguration(V, np.stack([_rotation_to(v, strict) for v in V]))


def build_datum_G(config: SphereConfiguration, rho, eps):
    """Boundary datum sum_j R_j g_{eps,rho}(e^{-i theta_j} z)."""
    base = g_rho_boundary(rho, eps).fn
    angles = ring_angles(config.k)
    R = config.rotations

    def fn(t):
        return sum(base(t - a) @ R[j].T for j, a in enumerate(angles))

    return BoundaryDatum(fn=fn)


def sphere_data(config: SphereConfiguration, rho, eps, third=True):
    """Per-bubble data R_j g_j in the physical frame, and the bubble frames.

    The copy g(e^{-i t} z) equals the datum centered at rho e^{i t} turned by
    -2t about the vertical axis, so bubble j's frame is R_j Rz(-2 t_j); the
    Euler angles (pi/2, 0, 0) then sit at the single-copy optimum.
    ``third=False`` drops the -2 eps/|z - omega|^4 component of each copy.
    """
    angles = ring_angles(config.k)
    data = [RotatedDatum(DatumField((rho, 0.0), eps, turn=a, third=third), config.rotations[j])
            for j, a in enumerate(angles)]
    frames = [config.rotations[j] @ rot_z(-2 * a) for j, a in enumerate(angles)]
    return data, frames


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


# ---------------------------------------------------------------- objectives


class ReducedObjective:
    """Sigma over the bubbles of ``state`` with per-bubble data and frames."""

    def __init__(self, eps, data, frames=None):
        self.eps = eps
        self.data = list(data)
        self.frames = frames

    @classmethod
    def single(cls, rho, eps, third=False):
        """One bubble against the rho datum (third component zero unless asked)."""
        return cls(eps, [DatumField((rho, 0.0), eps, third=third)])

    @classmethod
    def spheres(cls, config, rho, eps, third=True):
        data, frames = sphere_data(config, rho, eps, third)
        return cls(eps, data, frames)

    def _states(self, flat):
        return [params_of(c) for c in np.asarray(flat, dtype=float).reshape(-1, 10)]

    def value(self, flat):
        st = self._states(flat)
        if len(st) == 1:
            return reduced_energy_F(self._inputs(st[0]))
        return sigma_energy(st, self.data, self.eps, self.frames)

    def grad(self, flat):
        st = self._states(flat)
        if len(st) == 1:
            return reduced_energy_grad(self._inputs(st[0]))
        return sigma_energy_grad(st, self.data, self.eps, self.frames)

    def _inputs(self, p):
        frame = None if self.frames is None else self.frames[0]
        return ReducedEnergyInputs(p, p.xi, self.eps, self.data[0], frame)


class QuadraticObjective:
    """(x - c)^T A (x - c) / 2."""

    def __init__(self, A, center, sign=1.0):
        self.A = np.asarray(A, dtype=float)
        self.center = np.asarray(center, dtype=float).ravel()
        self.sign = sign

    def value(self, flat):
        d = np.asarray(flat) - self.center
        return self.sign * 0.5 * float(d @ self.A @ d)

    def grad(self, flat):
        return self.sign * self.A @ (np.asarray(flat) - self.center)


class ModelObjective:
    """The quadratic-order rho model with a finite-difference gradient."""

    def __init__(self, rho, eps):
        self.rho, self.eps = rho, eps
        self.h = np.array([1e-3 * np.sqrt(eps), 1e-5, 1e-5, 1e-4, 1e-4, 1e-4, 1e-4, 1e-4, 1e-2, 1e-2])

    def value(self, flat):
        return ftilde_model(flat, self.rho, self.eps)

    def grad(self, flat):
        return fd_gradient(self.value, flat, self.h)


class NegatedObjective:
    def __init__(self, inner):
        self.inner = inner

    def value(self, flat):
        return -self.inner.value(flat)

    def grad(self, flat):
        return -self.inner.grad(flat)


# ---------------------------------------------------------------- Newton


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    grad_norm: float
    state: ReducedState
    box_active: list = field(default_factory=list)
    value: float = np.nan

    def to_dict(self):
        return {"converged": self.converged, "iterations": self.iterations,
                "grad_norm": self.grad_norm, "value": self.value,
                "box_active": [bool(b) for b in self.box_active], "state": self.state.to_dict()}


def fd_hessian_of_grad(grad, x, h):
    """Symmetrized central differences of an analytic gradient."""
    n = x.size
    H = np.empty((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h[i]
        H[:, i] = (grad(x + e) - grad(x - e)) / (2 * h[i])
    return 0.5 * (H + H.T)


def _newton_step(Hs, gs, max_shift=12):
    try:
        if np.linalg.cond(Hs) < 1e14:
            return -np.linalg.solve(Hs, gs)
    except np.linalg.LinAlgError:
        pass
    scale = np.abs(Hs).max() or 1.0
    for j in range(max_shift):
        nu = scale * 10.0 ** (j - 10)
        try:
            M = Hs + nu * np.eye(len(gs))
            if np.linalg.cond(M) < 1e14:
                return -np.linalg.solve(M, gs)
        except np.linalg.LinAlgError:
            continue
    raise SingularHessian("Hessian singular after Levenberg regularization")


def newton_solve(objective, state0: ReducedState, box: ParamBox | None = None, tol=1e-10,
                 max_iter=200, max_boundary_hits=5):
    """Damped Newton on the gradient with a finite-difference Hessian.

    Steps are taken in box-scaled coordinates, backtracked on |grad|^2 and
    projected into the box; repeated projection raises LeftBox.
    """
    if tol < 1e-13:
        raise ValueError("tol must be at least 1e-13")
    box = box or t_lambda_box(state0)
    if not box.contains(state0.flat):
        raise LeftBox("initial state outside the box")
    x = state0.flat.copy()
    D = np.tile(box.widths, box.k)
    hits = 0
    active = np.zeros(x.size, dtype=bool)
    g = objective.grad(x)
    for it in range(max_iter + 1):
        gn = float(np.linalg.norm(g))
        if gn <= tol:
            return SolveReport(True, it, gn, state0.with_flat(x), active.tolist(), objective.value(x))
        if it == max_iter:
            break
        h = 1e-6 * np.maximum(np.abs(x), D / box_scale(state0))
        H = fd_hessian_of_grad(objective.grad, x, h)
        dx = D * _newton_step(D[:, None] * H * D[None, :], D * g)
        phi0, t = gn * gn, 1.0
        best = None
        while t > 1e-6:
            xt, clipped = box.project(x + t * dx)
            gt = objective.grad(xt)
            phi = float(gt @ gt)
            if best is None or phi < best[0]:
                best = (phi, xt, gt, clipped)
            if phi <= (1 - 1e-4 * t) * phi0:
                break
            t *= 0.5
        _, x, g, active = best
        hits = hits + 1 if active.any() else 0
        if hits >= max_boundary_hits:
            raise LeftBox(f"iterates pinned to the box boundary for {hits} steps")
    raise MaxIterations(f"no convergence in {max_iter} iterations (|grad| = {gn:.3e})")


def box_scale(state):
    # box widths at lambda = 1 set the floor of the FD steps
    return state.lam


def hessian_at(objective, state: ReducedState, box: ParamBox | None = None):
    box = box or t_lambda_box(state)
    x = state.flat
    D = np.tile(box.widths, box.k)
    return fd_hessian_of_grad(objective.grad, x, 1e-6 * np.maximum(np.abs(x), D / state.lam))


# ---------------------------------------------------------------- boundary sign check


def _face_samples(box: ParamBox, n, faces, rng):
    """Uniform interior points pushed onto a random face from ``faces``."""
    k = box.k
    out, which = [], []
    for _ in range(n):
        u = rng.uniform(-1, 1, size=(k, 10))
        if box.round_xi:
            r = np.sqrt(rng.uniform(0, 1, k))
            a = rng.uniform(0, 2 * np.pi, k)
            u[:, 1], u[:, 2] = r * np.cos(a), r * np.sin(a)
        j = rng.integers(k)
        f = faces[rng.integers(len(faces))]
        if box.round_xi and f in (1, 2):
            nr = np.hypot(u[j, 1], u[j, 2])
            u[j, 1:3] /= nr
        else:
            u[j, f] = rng.choice([-1.0, 1.0])
        out.append((box.center + u * box.widths).ravel())
        which.append((j, f))
    return out, which


def boundary_sign_check(objective, box: ParamBox, n_samples=1000, seed=0):
    """Minimum of grad . (chi^(i) - chi_0) over sampled faces of T_lambda.

    Faces in the mu, xi and angle coordinates form the first boundary part
    and use chi^(1) (a = p = 0); faces in a or p form the second and use chi.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    rng = np.random.default_rng(seed)
    half = n_samples // 2
    report = {}
    for name, faces, n in (("boundary_1", (0, 1, 2, 3, 4, 5), n_samples - half),
                           ("boundary_2", (6, 7, 8, 9), half)):
        pts, which = _face_samples(box, n, faces, rng)
        vals = []
        for x, (j, _) in zip(pts, which):
            g = objective.grad(x).reshape(box.k, 10)[j]
            d = x.reshape(box.k, 10)[j] - box.center[j]
            if name == "boundary_1":
                d[6:] = 0.0
            vals.append(float(g @ d))
        vals = np.asarray(vals)
        report[name] = {"min": float(vals.min()), "max": float(vals.max()), "n": int(n),
                        "negative": int((vals <= 0).sum())}
    report["positive"] = all(report[b]["min"] > 0 for b in ("boundary_1", "boundary_2"))
    return report


# ---------------------------------------------------------------- asymptotics


def solve_single(eps, rho, lam=10.0, tol=1e-10):
    state = init_state(eps, rho, 1, lam)
    return newton_solve(ReducedObjective.single(rho, eps), state, t_lambda_box(state), tol)


def _fit_exponent(d, r):
    r = np.abs(np.asarray(r, dtype=float))
    ok = r > 0
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(d[ok]), np.log(r[ok]), 1)[0])


def asymptotics_check(records):
    """Fit |mu*/sqrt(eps) - 1| and |xi* - omega| against powers of d = 1 - rho^2.

    ``records`` holds (eps, rho, mu_star, xi_star) rows with at least three
    distinct values of d.
    """
    rows = [(float(e), float(r), float(m), np.asarray(x, dtype=float)) for e, r, m, x in records]
    d = np.array([1 - r * r for _, r, _, _ in rows])
    if len(rows) < 3 or len(np.unique(d)) < 3:
        raise InsufficientData("need at least three distinct rho values")
    mu_dev = np.array([abs(m / np.sqrt(e) - 1) for e, _, m, _ in rows])
    xi_dev = np.array([np.hypot(x[0] - r, x[1]) for _, r, _, x in rows])
    order = np.argsort(d)
    return {
        "rows": [{"eps": e, "rho": r, "d": float(dd), "mu_star": m, "xi_star": x.tolist(),
                  "mu_dev": float(md), "xi_dev": float(xd)}
                 for (e, r, m, x), dd, md, xd in zip(rows, d, mu_dev, xi_dev)],
        "mu_exponent": _fit_exponent(d, mu_dev),
        "xi_exponent": _fit_exponent(d, xi_dev),
        "mu_dev_decreasing": bool(np.all(np.diff(mu_dev[order]) >= 0)),
    }


def asymptotics_run(eps=1e-4, rhos=(0.9, 0.93, 0.95), lam=10.0):
    recs = []
    for rho in rhos:
        rep = solve_single(eps, rho, lam)
        c = rep.state.chis[0]
        recs.append((eps, rho, c[0], c[1:3]))
    return asymptotics_check(recs)
