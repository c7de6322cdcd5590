"""Closed-form derivative and wedge identities for the canonical bubble.

Each entry maps a name to a function of (x, y) returning the three
components as a tuple.  The formulas are stored in closed form; they are
used as oracles and checked against jet reconstructions in ``kernels``.
"""

from __future__ import annotations


def _rd(x, y):
    r2 = x * x + y * y
    return r2, r2 * r2 + 1.0


def delta_x(x, y):
    r2, D = _rd(x, y)
    return (4 * x * (-x**4 + 2 * x**2 * y**2 + 3 * y**4 + 1) / D**2,
            4 * y * (-3 * x**4 - 2 * x**2 * y**2 + y**4 + 1) / D**2,
            8 * x * r2 / D**2)


def delta_y(x, y):
    r2, D = _rd(x, y)
    return (4 * y * (-3 * x**4 - 2 * x**2 * y**2 + y**4 - 1) / D**2,
            4 * x * (x**4 - 2 * x**2 * y**2 - 3 * y**4 + 1) / D**2,
            8 * y * r2 / D**2)


def delta_cross(x, y):
    r2, D = _rd(x, y)
    return (-32 * (x**4 - y**4) / D**3,
            -64 * x * y * r2 / D**3,
            16 * (1 - r2**2) * r2 / D**3)


def cross_delta_a1(x, y):
    r2, D = _rd(x, y)
    return (128 * x * r2 * (x**2 * (r2**2 - 2) + 3 * y**2) / D**4,
            64 * y * r2 * (3 * x**6 + 7 * x**4 * y**2 + x**2 * (5 * y**4 - 9) + y**6 + y**2) / D**4,
            32 * x * r2 * (r2**4 - 8 * r2**2 + 3) / D**4)


def cross_delta_a2(x, y):
    r2, D = _rd(x, y)
    return (-128 * y * r2 * ((x**4 - 2) * y**2 + 2 * x**2 * y**4 + 3 * x**2 + y**6) / D**4,
            64 * x * r2 * (x**6 + 5 * x**4 * y**2 + x**2 * (7 * y**4 + 1) + 3 * y**2 * (y**4 - 3)) / D**4,
            32 * y * r2 * (r2**4 - 8 * r2**2 + 3) / D**4)


def cross_a1_a1(x, y):
    r2, D = _rd(x, y)
    c = r2**2 - 3
    return (-32 * r2 * c * (3 * x**8 + 10 * x**6 * y**2 + x**4 * (12 * y**4 - 5)
                            + 6 * x**2 * y**2 * (y**4 + 2) + y**8 + y**4) / D**5,
            -64 * x * y * r2 * c * (x**6 + 3 * x**4 * y**2 + x**2 * (3 * y**4 - 7) + y**6 + y**2) / D**5,
            -16 * r2**2 * c * (r2 * (x**6 + 3 * x**4 * y**2 + 3 * x**2 * (y**4 - 4) + y**6 + 4 * y**2) + 3) / D**5)


def cross_a2_a2(x, y):
    r2, D = _rd(x, y)
    c = r2**2 - 3
    return (32 * r2 * (x**8 + (12 * x**4 - 5) * y**4 + x**4 + 10 * x**2 * y**6
                       + 6 * (x**4 + 2) * x**2 * y**2 + 3 * y**8) * c / D**5,
            -64 * x * y * r2 * (x**6 + 3 * x**4 * y**2 + 3 * x**2 * y**4 + x**2 + y**6 - 7 * y**2) * c / D**5,
            -16 * r2**2 * c * (r2 * (3 * (x**4 - 4) * y**2 + 3 * x**2 * y**4 + x**2 * (x**4 + 4) + y**6) + 3) / D**5)


def d_a1_x(x, y):
    r2, D = _rd(x, y)
    inner = r2 * (x**6 + 3 * x**4 * y**2 + 3 * x**2 * (y**4 - 4) + y**6 + 4 * y**2) + 3
    return (4 * (x - y) * (x + y) * inner / D**3,
            8 * x * y * inner / D**3,
            -8 * r2 * (3 * x**6 + 5 * x**4 * y**2 + x**2 * (y**4 - 5) - y**2 * (y**4 + 1)) / D**3)


def d_a1_y(x, y):
    r2, D = _rd(x, y)
    return (8 * x * y * (r2 * (3 * (x**4 + 2) * y**2 + 3 * x**2 * y**4 + x**2 * (x**4 - 10) + y**6) - 3) / D**3,
            4 * (2 * (x**4 - 1) * y**6 + 3 * x**2 * y**8 - 3 * (x**8 + 10 * x**4 + 1) * y**2
                 - 2 * x**2 * (x**4 + 17) * y**4 + x**2 * (-x**8 + 2 * x**4 + 3) + y**10) / D**3,
            -32 * x * y * r2 * (r2**2 - 1) / D**3)


def d_a2_x(x, y):
    r2, D = _rd(x, y)
    return (-8 * x * y * (r2 * (x**6 + 3 * x**4 * y**2 + 3 * x**2 * (y**4 + 2) + y**6 - 10 * y**2) - 3) / D**3,
            4 * (x**10 + 3 * x**8 * y**2 + 2 * x**6 * (y**4 - 1) - 2 * x**4 * y**2 * (y**4 + 17)
                 - 3 * x**2 * (y**8 + 10 * y**4 + 1) + y**2 * (-y**8 + 2 * y**4 + 3)) / D**3,
            -32 * x * y * r2 * (r2**2 - 1) / D**3)


def d_a2_y(x, y):
    r2, D = _rd(x, y)
    inner = r2 * (3 * (x**4 - 4) * y**2 + 3 * x**2 * y**4 + x**2 * (x**4 + 4) + y**6) + 3
    return (4 * (x - y) * (x + y) * inner / D**3,
            8 * x * y * inner / D**3,
            8 * r2 * (x**6 - x**4 * y**2 + x**2 * (1 - 5 * y**4) - 3 * y**6 + 5 * y**2) / D**3)


def cross_delta_p1(x, y):
    r2, D = _rd(x, y)
    return (32 * r2 * (5 * x**4 - 14 * x**2 * y**2 + 5 * y**4 - 1) / D**4,
            384 * x * y * (x**4 - y**4) / D**4,
            64 * (x - y) * (x + y) * r2 * (r2**2 - 2) / D**4)


def cross_delta_p2(x, y):
    r2, D = _rd(x, y)
    return (384 * x * y * (x**4 - y**4) / D**4,
            -32 * r2 * (x**4 - 22 * x**2 * y**2 + y**4 + 1) / D**4,
            128 * x * y * r2 * (r2**2 - 2) / D**4)


def d_p1_x(x, y):
    r2, D = _rd(x, y)
    return (8 * x * (x**6 - 9 * x**4 * y**2 - x**2 * (5 * y**4 + 3) + 5 * y**6 + y**2) / D**3,
            8 * y * (5 * x**6 - 5 * x**4 * y**2 - 3 * x**2 * (3 * y**4 + 1) + y**6 + y**2) / D**3,
            8 * x * (-3 * x**4 + 2 * x**2 * y**2 + 5 * y**4 + 1) / D**3)


def d_p1_y(x, y):
    r2, D = _rd(x, y)
    return (8 * y * (5 * x**6 - 5 * x**4 * y**2 - 9 * x**2 * y**4 + x**2 + y**6 - 3 * y**2) / D**3,
            -8 * x * (x**6 - 9 * x**4 * y**2 - 5 * x**2 * y**4 + x**2 + 5 * y**6 - 3 * y**2) / D**3,
            -8 * y * (5 * x**4 + 2 * x**2 * y**2 - 3 * y**4 + 1) / D**3)


def d_p2_x(x, y):
    r2, D = _rd(x, y)
    return (8 * y * (5 * x**6 - 5 * x**4 * y**2 - 3 * x**2 * (3 * y**4 + 1) + y**6 + y**2) / D**3,
            -8 * x * (x**6 - 9 * x**4 * y**2 + x**2 * (1 - 5 * y**4) + 5 * (y**6 + y**2)) / D**3,
            8 * y * (-7 * x**4 - 6 * x**2 * y**2 + y**4 + 1) / D**3)


def d_p2_y(x, y):
    r2, D = _rd(x, y)
    return (-8 * x * (x**6 - 9 * x**4 * y**2 - 5 * x**2 * y**4 + x**2 + 5 * y**6 - 3 * y**2) / D**3,
            -8 * y * (5 * x**6 - 5 * x**4 * y**2 + x**2 * (5 - 9 * y**4) + y**6 + y**2) / D**3,
            8 * x * (x**4 - 6 * x**2 * y**2 - 7 * y**4 + 1) / D**3)


def cross_p1_p1(x, y):
    r2, D = _rd(x, y)
    return (-64 * (x - y) * (x + y) * r2 * (3 * x**4 - 10 * x**2 * y**2 + 3 * y**4 - 1) / D**5,
            -128 * x * y * r2 * (5 * x**4 - 6 * x**2 * y**2 + 5 * y**4 + 1) / D**5,
            -64 * r2 * (x**8 + 4 * x**6 * y**2 + x**4 * (6 * y**4 - 3)
                        + 2 * x**2 * y**2 * (2 * y**4 + 5) + y**4 * (y**4 - 3)) / D**5)


def cross_p2_p2(x, y):
    r2, D = _rd(x, y)
    return (-64 * (x - y) * (x + y) * r2 * (x**4 + 18 * x**2 * y**2 + y**4 + 1) / D**5,
            128 * x * y * r2 * (x**4 - 14 * x**2 * y**2 + y**4 + 1) / D**5,
            -64 * r2 * (x**8 + 4 * x**6 * y**2 + x**4 * (6 * y**4 + 1)
                        + 2 * x**2 * y**2 * (2 * y**4 - 7) + y**8 + y**4) / D**5)


def cross_a1_a2(x, y):
    r2, D = _rd(x, y)
    c = r2**2 - 3
    return (512 * x * y * (x - y) * (x + y) * r2 * c / D**5,
            -128 * r2 * c * (x**8 + 4 * x**6 * y**2 + x**4 * (6 * y**4 + 1)
                             + x**2 * (4 * y**6 - 6 * y**2) + y**8 + y**4) / D**5,
            512 * x * y * r2**3 * c / D**5)


def _f1(x, y):
    return (-x**12 - 2 * x**10 * y**2 + x**8 * (5 * y**4 + 9) + 20 * x**6 * (y**6 + y**2)
            + x**4 * (25 * y**8 + 6 * y**4 - 6) + 2 * x**2 * y**6 * (7 * y**4 - 6)
            + y**4 * (3 * y**8 - 7 * y**4 + 6))


def _f2(x, y):
    return (-(5 * x**4 + 9) * y**8 + 2 * x**2 * y**10 + (-25 * x**8 - 6 * x**4 + 6) * y**4
            + x**4 * (-3 * x**8 + 7 * x**4 - 6) + 2 * x**6 * (6 - 7 * x**4) * y**2
            - 20 * x**2 * (x**4 + 1) * y**6 + y**12)


def cross_a1_p1(x, y):
    r2, D = _rd(x, y)
    return (-32 * x * r2 * (9 * x**8 - 8 * x**6 * y**2 - 2 * x**4 * (23 * y**4 + 10)
                            + 4 * x**2 * y**2 * (11 - 8 * y**4) - 3 * y**8 - 32 * y**4 + 3) / D**5,
            32 * y * r2 * (-23 * x**8 + 2 * (5 * x**4 + 1) * y**4 + 38 * x**4 + 24 * x**2 * y**6
                           - 8 * (4 * x**4 + 7) * x**2 * y**2 + 5 * y**8 - 3) / D**5,
            64 * x * _f1(x, y) / D**5)


def cross_a2_p1(x, y):
    r2, D = _rd(x, y)
    return (32 * y * r2 * (3 * x**8 + 32 * x**6 * y**2 + x**4 * (46 * y**4 + 32)
                           + x**2 * (8 * y**6 - 44 * y**2) - 9 * y**8 + 20 * y**4 - 3) / D**5,
            -32 * x * r2 * (5 * x**8 + 24 * x**6 * y**2 + 2 * x**4 * (5 * y**4 + 1)
                            - 8 * x**2 * y**2 * (4 * y**4 + 7) - 23 * y**8 + 38 * y**4 - 3) / D**5,
            64 * y * _f2(x, y) / D**5)


def cross_a1_p2(x, y):
    r2, D = _rd(x, y)
    return (32 * y * r2 * (-27 * x**8 + 2 * (2 - 7 * x**4) * y**4 + 40 * x**4 + 8 * x**2 * y**6
                           - 4 * (12 * x**4 + 13) * x**2 * y**2 + y**8 + 3) / D**5,
            32 * x * r2 * (5 * x**8 - 10 * (7 * x**4 + 1) * y**4 + 2 * x**4 - 48 * x**2 * y**6
                           + 8 * (11 - 3 * x**4) * x**2 * y**2 - 7 * y**8 - 3) / D**5,
            64 * y * r2 * (-3 * x**10 - 11 * x**8 * y**2 + x**6 * (17 - 14 * y**4)
                           + x**4 * y**2 * (35 - 6 * y**4) + x**2 * (y**8 + 19 * y**4 - 12)
                           + y**10 + y**6) / D**5)


def cross_a2_p2(x, y):
    r2, D = _rd(x, y)
    return (-32 * x * r2 * (x**8 + 8 * x**6 * y**2 + x**4 * (4 - 14 * y**4)
                            - 4 * x**2 * y**2 * (12 * y**4 + 13) - 27 * y**8 + 40 * y**4 + 3) / D**5,
            -32 * y * r2 * (7 * x**8 + 48 * x**6 * y**2 + 10 * x**4 * (7 * y**4 + 1)
                            + 8 * x**2 * y**2 * (3 * y**4 - 11) - 5 * y**8 - 2 * y**4 + 3) / D**5,
            64 * x * r2 * (r2**2 * (x**6 - x**4 * y**2 + x**2 * (1 - 5 * y**4) - 3 * y**6 + 17 * y**2)
                           - 12 * y**2) / D**5)


def cross_p1_p2(x, y):
    r2, D = _rd(x, y)
    return (-256 * x * y * r2 * (3 * x**4 - 10 * x**2 * y**2 + 3 * y**4 - 1) / D**5,
            128 * (x - y) * (x + y) * r2 * (x**4 - 14 * x**2 * y**2 + y**4 + 1) / D**5,
            1024 * x * y * (x**4 - y**4) / D**5)


def second_a1_a1(x, y):
    r2, D = _rd(x, y)
    f3 = (x**12 + 5 * x**10 * y**2 + x**8 * (10 * y**4 - 9) + 2 * x**6 * y**2 * (5 * y**4 - 7)
          + x**4 * (5 * y**8 + 6) + x**2 * y**2 * (y**8 + 6 * y**4 - 13) + y**8 + y**4)
    f4 = (x**10 + 5 * x**8 * y**2 + 2 * x**6 * (5 * y**4 - 8) + 2 * x**4 * y**2 * (5 * y**4 - 18)
          + x**2 * (5 * y**8 - 24 * y**4 + 15) + y**2 * (y**4 - 5) * (y**4 + 1))
    f5 = 16 * (-D**4 + 11 * D**3 + 2 * (24 * x**2 * r2 - 11) * D**2
               - 12 * (18 * x**2 * r2 - 1) * D + 192 * x**2 * r2)
    return (-192 * r2 * f3 / D**5, -192 * x * y * r2 * f4 / D**5, f5 / D**5)


def second_a2_a2(x, y):
    r2, D = _rd(x, y)
    f6 = ((5 * x**8 + 6) * y**4 + x**8 + (10 * x**4 - 9) * y**8 + x**4 + 5 * x**2 * y**10
          + 2 * x**2 * (5 * x**4 - 7) * y**6 + x**2 * (x**8 + 6 * x**4 - 13) * y**2 + y**12)
    f7 = (2 * (5 * x**4 - 8) * y**6 + 5 * x**2 * y**8 + (5 * x**8 - 24 * x**4 + 15) * y**2
          + 2 * x**2 * (5 * x**4 - 18) * y**4 + x**2 * (x**4 - 5) * (x**4 + 1) + y**10)
    f8 = ((21 * x**4 - 55) * y**10 + 7 * x**2 * y**12 + (35 * x**8 - 358 * x**4 + 115) * y**6
          + x**2 * (35 * x**4 - 227) * y**8 + (7 * x**12 - 83 * x**8 + 105 * x**4 - 21) * y**2
          + x**2 * (21 * x**8 - 262 * x**4 + 225) * y**4 + x**2 * (x**4 + 1) * (x**8 - 8 * x**4 + 3)
          + y**14)
    return (192 * r2 * f6 / D**5, -192 * x * y * r2 * f7 / D**5, -16 * r2 * f8 / D**5)


def second_a1_a2(x, y):
    r2, D = _rd(x, y)
    f9 = (x**12 + 6 * x**10 * y**2 + x**8 * (15 * y**4 - 2) + 4 * x**6 * y**2 * (5 * y**4 - 8)
          + 3 * x**4 * (5 * y**8 - 20 * y**4 - 1) + 2 * x**2 * y**2 * (3 * y**8 - 16 * y**4 + 17)
          + y**4 * (y**4 - 3) * (y**4 + 1))
    return (768 * x * y * (x - y) * (x + y) * r2 * (3 * r2**2 - 5) / D**5,
            -192 * r2 * f9 / D**5,
            768 * x * y * r2 * ((2 * r2**2 - 5) * r2**2 + 1) / D**5)


def second_p1_p1(x, y):
    r2, D = _rd(x, y)
    return (-96 * (x - y) * (x + y) * r2 * (5 * x**4 - 22 * x**2 * y**2 + 5 * y**4 - 3) / D**5,
            -192 * x * y * r2 * (7 * x**4 - 18 * x**2 * y**2 + 7 * y**4 - 1) / D**5,
            -32 * r2 * (5 * x**8 - 4 * x**6 * y**2 - x**4 * (18 * y**4 + 17)
                        + x**2 * (38 * y**2 - 4 * y**6) + 5 * y**8 - 17 * y**4 + 2) / D**5)


def second_p2_p2(x, y):
    r2, D = _rd(x, y)
    return (96 * (x - y) * (x + y) * r2 * (x**4 - 30 * x**2 * y**2 + y**4 + 1) / D**5,
            192 * x * y * r2 * (3 * x**4 - 26 * x**2 * y**2 + 3 * y**4 + 3) / D**5,
            32 * r2 * (x**8 - (42 * x**4 + 1) * y**4 - x**4 - 20 * x**2 * y**6
                       + 10 * (7 - 2 * x**4) * x**2 * y**2 + y**8 - 2) / D**5)


def second_p1_p2(x, y):
    r2, D = _rd(x, y)
    return (-384 * x * y * r2 * (7 * x**4 - 18 * x**2 * y**2 + 7 * y**4 - 1) / D**5,
            192 * (x - y) * (x + y) * r2 * (x**4 - 30 * x**2 * y**2 + y**4 + 1) / D**5,
            -768 * x * y * (x - y) * (x + y) * r2 * (r2**2 - 3) / D**5)


def second_a1_p1(x, y):
    r2, D = _rd(x, y)
    return (-192 * x * r2 * (5 * x**8 + 4 * x**6 * y**2 - 10 * x**4 * (y**4 + 1)
                             + 4 * x**2 * y**2 * (7 - 3 * y**4) - 3 * y**4 * (y**4 + 6) + 1) / D**5,
            384 * y * r2 * (-5 * x**8 - 10 * x**6 * y**2 + x**4 * (11 - 4 * y**4)
                            + 2 * x**2 * y**2 * (y**4 - 8) + y**8 + y**4) / D**5,
            -256 * x * r2 * (x**10 + 4 * x**8 * y**2 + x**6 * (6 * y**4 - 7) + 4 * x**4 * y**2 * (y**4 - 2)
                             + x**2 * (y**8 + 5 * y**4 + 4) + 6 * y**2 * (y**4 - 1)) / D**5)


CATALOG = {
    "delta_x": delta_x,
    "delta_y": delta_y,
    "delta_cross": delta_cross,
    "cross_delta_a1": cross_delta_a1,
    "cross_delta_a2": cross_delta_a2,
    "cross_a1_a1": cross_a1_a1,
    "cross_a2_a2": cross_a2_a2,
    "d_a1_x": d_a1_x,
    "d_a1_y": d_a1_y,
    "d_a2_x": d_a2_x,
    "d_a2_y": d_a2_y,
    "cross_delta_p1": cross_delta_p1,
    "cross_delta_p2": cross_delta_p2,
    "d_p1_x": d_p1_x,
    "d_p1_y": d_p1_y,
    "d_p2_x": d_p2_x,
    "d_p2_y": d_p2_y,
    "cross_p1_p1": cross_p1_p1,
    "cross_p2_p2": cross_p2_p2,
    "cross_a1_a2": cross_a1_a2,
    "cross_a1_p1": cross_a1_p1,
    "cross_a2_p1": cross_a2_p1,
    "cross_a1_p2": cross_a1_p2,
    "cross_a2_p2": cross_a2_p2,
    "cross_p1_p2": cross_p1_p2,
    "second_a1_a1": second_a1_a1,
    "second_a2_a2": second_a2_a2,
    "second_a1_a2": second_a1_a2,
    "second_p1_p1": second_p1_p1,
    "second_p2_p2": second_p2_p2,
    "second_p1_p2": second_p1_p2,
    "second_a1_p1": second_a1_p1,
}
