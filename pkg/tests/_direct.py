"""Raw two-phase DF inequalities, written out longhand as a reference.

Deliberately shares no code with the package: every constraint is spelled
out with its own log2 call so the composed predicate can be checked
against it.
"""
import math


def _c(x):
    return math.log2(1 + x)


def phase1_relay1(r, a, t, c, tol=1e-12):
    u, d, od = r[0], r[1], r[3]
    h, g = c.g11 * c.p1, c.g12 * c.pB
    i = (1 - a) * g + 1  # user 2's layer as noise
    noise = (u <= t * _c(h / i) + tol and d <= t * _c(a * g / i) + tol
             and u + d <= t * _c((h + a * g) / i) + tol)
    joint = (u <= t * _c(h) + tol and d <= t * _c(a * g) + tol
             and od <= t * _c((1 - a) * g) + tol
             and u + d <= t * _c(h + a * g) + tol
             and u + od <= t * _c(h + (1 - a) * g) + tol
             and d + od <= t * _c(g) + tol
             and u + d + od <= t * _c(h + g) + tol)
    return noise or joint


def phase1_relay2(r, a, t, c, tol=1e-12):
    u, d, od = r[2], r[3], r[1]
    h, g = c.g21 * c.p2, c.g22 * c.pB
    b = 1 - a
    i = a * g + 1
    noise = (u <= t * _c(h / i) + tol and d <= t * _c(b * g / i) + tol
             and u + d <= t * _c((h + b * g) / i) + tol)
    joint = (u <= t * _c(h) + tol and d <= t * _c(b * g) + tol
             and od <= t * _c(a * g) + tol
             and u + d <= t * _c(h + b * g) + tol
             and u + od <= t * _c(h + a * g) + tol
             and d + od <= t * _c(g) + tol
             and u + d + od <= t * _c(h + g) + tol)
    return noise or joint


def phase2(r, t, c, tol=1e-12):
    s = 1 - t
    return (r[1] <= s * _c(c.g11 * c.pR1) + tol and r[3] <= s * _c(c.g21 * c.pR2) + tol
            and r[0] <= s * _c(c.g12 * c.pR1) + tol and r[2] <= s * _c(c.g22 * c.pR2) + tol
            and r[0] + r[2] <= s * _c(c.g12 * c.pR1 + c.g22 * c.pR2) + tol)


def df2(r, a, t, c):
    return phase1_relay1(r, a, t, c) and phase1_relay2(r, a, t, c) and phase2(r, t, c)
