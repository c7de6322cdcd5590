"""Kernel functions of the linearized H-system around the degree-2 bubble.

A kernel id is a pair (k, j) with k in {-2,-1,0,1,2} and j in {1,2}.  Each is
the derivative of the bubble family along one parameter at the canonical
point mu=1, xi=a=p=0, rot=Id:

    (0,1) mu     (0,2) phi     (1,l) xi_l     (2,l) p_l
    (-1,l) a_l   (-2,1) theta  (-2,2) psi

Exact derivatives come from jets (``_jet``); finite differences are kept as
an independent check.
"""

from __future__ import annotations

import numpy as np

from . import _catalog
from ._jet import Jet, coeff
from .bubbles import bubble_eval, bubble_grad, BubbleParams, family_parts, wedge
from .errors import UnknownIdentity

PARAM_NAMES = ("mu", "xi1", "xi2", "a1", "a2", "p1", "p2", "theta", "phi", "psi")
CANONICAL = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, np.pi / 2, 0.0, 0.0)

KERNEL_IDS = ((0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2),
              (-1, 1), (-1, 2), (-2, 1), (-2, 2))

KERNEL_PARAM = {
    (0, 1): "mu", (0, 2): "phi",
    (1, 1): "xi1", (1, 2): "xi2",
    (2, 1): "p1", (2, 2): "p2",
    (-1, 1): "a1", (-1, 2): "a2",
    (-2, 1): "theta", (-2, 2): "psi",
}

SECOND_ORDER_FAMILIES = {"aa": ("a", "a"), "ap": ("a", "p"), "pp": ("p", "p")}


def _stack(parts):
    return np.stack(np.broadcast_arrays(*[np.asarray(p, dtype=float) for p in parts]), axis=-1)


def _check_id(kid):
    kid = tuple(kid)
    if kid not in KERNEL_PARAM:
        raise KeyError(f"unknown kernel id {kid}")
    return kid


# ---------------------------------------------------------------- closed forms


def kernel_eval(kid, x, y):
    """Closed-form kernel Z_{k,j}(x, y), shape (..., 3)."""
    k, j = _check_id(kid)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    r4 = r2 * r2
    D1 = r4 + 1
    D2 = D1 * D1
    x2, y2 = x * x, y * y
    if (k, j) == (0, 1):
        c = (4 * (x2 - y2) * (r2 - 1) * (r2 + 1), 8 * x * y * (r4 - 1), -8 * r4)
        den = D2
    elif (k, j) == (0, 2):
        c = (-4 * x * y, 2 * (x2 - y2), 0 * x)
        den = D1
    elif (k, j) == (1, 1):
        c = (4 * x * (x**4 - 2 * x2 * y2 - 3 * y**4 - 1),
             -4 * y * (-3 * x**4 - 2 * x2 * y2 + y**4 + 1),
             -8 * x * r2)
        den = D2
    elif (k, j) == (1, 2):
        c = (4 * y * (3 * x**4 + 2 * x2 * y2 - y**4 + 1),
             -4 * x * (x**4 - 2 * x2 * y2 - 3 * y**4 + 1),
             -8 * y * r2)
        den = D2
    elif (k, j) == (2, 1):
        c = (-2 * (x**4 - 6 * x2 * y2 + y**4 - 1), -8 * x * y * (x2 - y2), 4 * (x2 - y2))
        den = D2
    elif (k, j) == (2, 2):
        c = (-8 * x * y * (x2 - y2), 2 * (x**4 - 6 * x2 * y2 + y**4 + 1), 8 * x * y)
        den = D2
    elif (k, j) == (-1, 1):
        c = (-4 * x * (3 * (x**4 + 1) * y2 + 3 * x2 * y**4 + x2 * (x**4 - 1) + y**6),
             -4 * y * (x**6 + 3 * x**4 * y2 + 3 * x2 * (y**4 - 1) + y**6 + y2),
             8 * x * r4)
        den = D2
    elif (k, j) == (-1, 2):
        c = (4 * y * (x**6 + 3 * x**4 * y2 + 3 * x2 * (y**4 + 1) + y**6 - y2),
             -4 * x * (x**6 + 3 * x**4 * y2 + 3 * x2 * y**4 + x2 + y**6 - 3 * y2),
             8 * y * r4)
        den = D2
    elif (k, j) == (-2, 1):
        c = (0 * x, -(r4 - 1), 4 * x * y)
        den = D1
    else:
        c = (-(r4 - 1), 0 * x, 2 * (x2 - y2))
        den = D1
    return _stack([ci / den for ci in c])


def extra_kernel_eval(index, x, y):
    """The three bounded kernels beyond the Z_{k,j} (translations of R^3)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r4 = (x * x + y * y) ** 2
    D2 = (r4 + 1) ** 2
    if index == 1:
        c = (2 * (x * x - y * y) * (r4 - 1), 4 * x * y * (r4 - 1), (r4 - 1) ** 2)
    elif index == 2:
        c = (2 * (x * x - y * y) ** 2, 4 * x * y * (x * x - y * y), (x * x - y * y) * (r4 - 1))
    elif index == 3:
        c = (4 * x * y * (x * x - y * y), 8 * x * x * y * y, 2 * x * y * (r4 - 1))
    else:
        raise KeyError(f"unknown extra kernel {index}")
    return _stack([ci / D2 for ci in c])


# ---------------------------------------------------------------- exact derivatives


def family_derivative(x, y, params=(), spatial="", base=CANONICAL):
    """Mixed partial derivative of the family at ``base``.

    ``params`` lists parameter names (repeats allowed, each occurrence is one
    differentiation); ``spatial`` is a string over {'x','y'}.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    seeds = list(spatial) + list(params)
    m = len(seeds)
    if m == 0:
        return _stack(family_parts(x, y, *base))
    args = list(base)
    xv, yv = x, y
    for g, name in enumerate(seeds):
        if name == "x":
            xv = xv + Jet.variable(np.zeros_like(x), m, [g])
        elif name == "y":
            yv = yv + Jet.variable(np.zeros_like(y), m, [g])
        else:
            i = PARAM_NAMES.index(name)
            args[i] = args[i] + Jet.variable(np.zeros_like(x), m, [g])
    parts = family_parts(xv, yv, *args)
    return _stack([coeff(p, range(m)) * np.ones_like(x) for p in parts])


def kernel_jet(kid, x, y, spatial=""):
    """Z_{k,j} (or its spatial derivatives) by exact differentiation of the family."""
    kid = _check_id(kid)
    return family_derivative(x, y, (KERNEL_PARAM[kid],), spatial)


def _second_params(family, j, k):
    left, right = SECOND_ORDER_FAMILIES[family]
    return (f"{left}{j}", f"{right}{k}")


def second_order_exact(family, j, k, x, y, spatial=""):
    """Second parameter derivative of the family (no 1/2 factor), exact."""
    return family_derivative(x, y, _second_params(family, j, k), spatial)


# ---------------------------------------------------------------- finite differences


def _params_from(values):
    mu, x1, x2, a1, a2, p1, p2, th, ph, ps = values
    from .bubbles import RotationSO3
    return BubbleParams(mu, (x1, x2), (a1, a2), (p1, p2), RotationSO3(th, ph, ps))


def _shifted(x, y, shifts):
    vals = list(CANONICAL)
    for name, dv in shifts:
        vals[PARAM_NAMES.index(name)] += dv
    return bubble_eval(_params_from(vals), x, y)


def kernel_from_family(kid, x, y, h=1e-4, richardson=False):
    """Central-difference derivative of the family along the kernel's parameter."""
    if not 1e-6 <= h <= 1e-3:
        raise ValueError("h must lie in [1e-6, 1e-3]")
    name = KERNEL_PARAM[_check_id(kid)]

    def cd(step):
        return (_shifted(x, y, [(name, step)]) - _shifted(x, y, [(name, -step)])) / (2 * step)

    if richardson:
        return (4 * cd(h / 2) - cd(h)) / 3
    return cd(h)


def second_order_kernel(sid, x, y, h=1e-4, richardson=False):
    """Mixed second central difference of the family; sid = (family, j, k)."""
    if not 1e-5 <= h <= 1e-3:
        raise ValueError("h must lie in [1e-5, 1e-3]")
    family, j, k = sid
    p, q = _second_params(family, j, k)

    def cd(s):
        if p == q:
            return (_shifted(x, y, [(p, s)]) - 2 * _shifted(x, y, []) + _shifted(x, y, [(p, -s)])) / s**2
        return (_shifted(x, y, [(p, s), (q, s)]) - _shifted(x, y, [(p, s), (q, -s)])
                - _shifted(x, y, [(p, -s), (q, s)]) + _shifted(x, y, [(p, -s), (q, -s)])) / (4 * s * s)

    if richardson:
        return (4 * cd(h / 2) - cd(h)) / 3
    return cd(h)


_CANON = BubbleParams(1.0)


def linearized_apply(v, x, y, h=1e-3):
    """L_W[v] = Delta v - 2 W_x ^ v_y - 2 v_x ^ W_y with FD derivatives of v."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v0 = np.asarray(v(x, y))
    vxp, vxm = np.asarray(v(x + h, y)), np.asarray(v(x - h, y))
    vyp, vym = np.asarray(v(x, y + h)), np.asarray(v(x, y - h))
    lap = (vxp + vxm + vyp + vym - 4 * v0) / h**2
    vx = (vxp - vxm) / (2 * h)
    vy = (vyp - vym) / (2 * h)
    W = bubble_grad(_CANON, x, y)
    return lap - 2 * wedge(W.grad_x, vy) - 2 * wedge(vx, W.grad_y)


# ---------------------------------------------------------------- wedge catalog


def wedge_closed_form(name, x, y):
    """Closed form of a cataloged derivative or wedge identity."""
    try:
        fn = _catalog.CATALOG[name]
    except KeyError:
        raise UnknownIdentity(name) from None
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _stack(fn(x, y))


def catalog_names():
    return tuple(_catalog.CATALOG)


def _d(x, y, params, spatial):
    return family_derivative(x, y, params, spatial)


def _sym(x, y, p, q):
    """(Z_p)_x ^ (Z_q)_y + (Z_q)_x ^ (Z_p)_y; with q = () uses delta."""
    return (wedge(_d(x, y, p, "x"), _d(x, y, q, "y"))
            + wedge(_d(x, y, q, "x"), _d(x, y, p, "y")))


def _self(x, y, p):
    return wedge(_d(x, y, p, "x"), _d(x, y, p, "y"))


def _taylor(x, y, p, q):
    """delta_x ^ (T)_y + (T)_x ^ delta_y for the Taylor coefficient T of e_p e_q.

    For p == q the coefficient of the square carries a factor 1/2.
    """
    s = _sym(x, y, (p, q), ())
    return 0.5 * s if p == q else s


# Reconstruction recipes from parameter derivatives of the family.
_RECIPES = {
    "delta_x": lambda x, y: _d(x, y, (), "x"),
    "delta_y": lambda x, y: _d(x, y, (), "y"),
    "delta_cross": lambda x, y: _self(x, y, ()),
    "cross_delta_a1": lambda x, y: _sym(x, y, ("a1",), ()),
    "cross_delta_a2": lambda x, y: _sym(x, y, ("a2",), ()),
    "cross_a1_a1": lambda x, y: _self(x, y, ("a1",)),
    "cross_a2_a2": lambda x, y: _self(x, y, ("a2",)),
    "d_a1_x": lambda x, y: _d(x, y, ("a1",), "x"),
    "d_a1_y": lambda x, y: _d(x, y, ("a1",), "y"),
    "d_a2_x": lambda x, y: _d(x, y, ("a2",), "x"),
    "d_a2_y": lambda x, y: _d(x, y, ("a2",), "y"),
    "cross_delta_p1": lambda x, y: _sym(x, y, ("p1",), ()),
    "cross_delta_p2": lambda x, y: _sym(x, y, ("p2",), ()),
    "d_p1_x": lambda x, y: _d(x, y, ("p1",), "x"),
    "d_p1_y": lambda x, y: _d(x, y, ("p1",), "y"),
    "d_p2_x": lambda x, y: _d(x, y, ("p2",), "x"),
    "d_p2_y": lambda x, y: _d(x, y, ("p2",), "y"),
    "cross_p1_p1": lambda x, y: _self(x, y, ("p1",)),
    "cross_p2_p2": lambda x, y: _self(x, y, ("p2",)),
    "cross_a1_a2": lambda x, y: _sym(x, y, ("a1",), ("a2",)),
    "cross_a1_p1": lambda x, y: _sym(x, y, ("a1",), ("p1",)),
    "cross_a2_p1": lambda x, y: _sym(x, y, ("a2",), ("p1",)),
    "cross_a1_p2": lambda x, y: _sym(x, y, ("a1",), ("p2",)),
    "cross_a2_p2": lambda x, y: _sym(x, y, ("a2",), ("p2",)),
    "cross_p1_p2": lambda x, y: _sym(x, y, ("p1",), ("p2",)),
    "second_a1_a1": lambda x, y: _self(x, y, ("a1",)) + _taylor(x, y, "a1", "a1"),
    "second_a2_a2": lambda x, y: _self(x, y, ("a2",)) + _taylor(x, y, "a2", "a2"),
    "second_a1_a2": lambda x, y: _sym(x, y, ("a1",), ("a2",)) + _taylor(x, y, "a1", "a2"),
    "second_p1_p1": lambda x, y: _self(x, y, ("p1",)) + _taylor(x, y, "p1", "p1"),
    "second_p2_p2": lambda x, y: _self(x, y, ("p2",)) + _taylor(x, y, "p2", "p2"),
    "second_p1_p2": lambda x, y: _sym(x, y, ("p1",), ("p2",)) + _taylor(x, y, "p1", "p2"),
    "second_a1_p1": lambda x, y: _sym(x, y, ("a1",), ("p1",)) + _taylor(x, y, "a1", "p1"),
}


def wedge_reconstruct(name, x, y):
    """Rebuild a cataloged identity from exact derivatives of the family."""
    try:
        fn = _RECIPES[name]
    except KeyError:
        raise UnknownIdentity(name) from None
    return fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
