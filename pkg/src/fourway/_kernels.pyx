# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for parametrised unions of rate polytopes.

A scheme at one parameter point is an intersection of groups, each group a
union of members, each member a set of rows ``coef[k] . x <= bounds[p, k]``.
The headroom of a group is ``max_member min_row bounds / (coef . x)``, i.e.
how far ``x`` can be scaled before leaving the group; rows the point does
not load (``coef . x == 0``) never bind. Bounds must be nonnegative.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


cdef inline double _group(const double[:] lhs, const double[:, :] bounds,
                          Py_ssize_t p, Py_ssize_t g,
                          const Py_ssize_t[:] member_start,
                          const Py_ssize_t[:] group_start) noexcept nogil:
    cdef Py_ssize_t m, k
    cdef double best = -INFINITY, worst, s
    for m in range(group_start[g], group_start[g + 1]):
        worst = INFINITY
        for k in range(member_start[m], member_start[m + 1]):
            if lhs[k] <= 0:
                continue
            s = bounds[p, k] / lhs[k]
            if s < worst:
                worst = s
        if worst > best:
            best = worst
    return best


cdef inline void _loads(const double[:] x, const double[:, :] coef, double[:] lhs) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(coef.shape[0]):
        lhs[k] = (coef[k, 0] * x[0] + coef[k, 1] * x[1]
                  + coef[k, 2] * x[2] + coef[k, 3] * x[3])


def group_headroom(const double[:] x, const double[:, :] coef,
                   const double[:, :] bounds, const Py_ssize_t[:] member_start,
                   const Py_ssize_t[:] group_start):
    """Per-group headroom of ``x``: array of shape ``(n_params, n_groups)``."""
    cdef Py_ssize_t p, g, n = bounds.shape[0], ng = group_start.shape[0] - 1
    out = np.empty((n, ng), dtype=np.float64)
    cdef double[:, :] o = out
    lhs_a = np.empty(coef.shape[0], dtype=np.float64)
    cdef double[:] lhs = lhs_a
    with nogil:
        _loads(x, coef, lhs)
        for p in range(n):
            for g in range(ng):
                o[p, g] = _group(lhs, bounds, p, g, member_start, group_start)
    return out


def polytope_slack(const double[:] x, const double[:, :] coef,
                   const double[:, :] bounds, const Py_ssize_t[:] member_start,
                   const Py_ssize_t[:] group_start):
    """Relative slack ``min_group headroom - 1`` at every parameter row."""
    cdef Py_ssize_t p, g, n = bounds.shape[0], ng = group_start.shape[0] - 1
    cdef double h, total
    out = np.empty(n, dtype=np.float64)
    cdef double[:] o = out
    lhs_a = np.empty(coef.shape[0], dtype=np.float64)
    cdef double[:] lhs = lhs_a
    with nogil:
        _loads(x, coef, lhs)
        for p in range(n):
            total = INFINITY
            for g in range(ng):
                h = _group(lhs, bounds, p, g, member_start, group_start)
                if h < total:
                    total = h
            o[p] = total - 1.0
    return out


def feasibility_map(const double[:] r1, const double[:] r2, double theta1,
                    double theta2, const double[:, :] coef,
                    const double[:, :] bounds, const Py_ssize_t[:] member_start,
                    const Py_ssize_t[:] group_start, double tol):
    """Boolean lattice: is ``(r1[i], r2[j])`` feasible for some parameter row."""
    cdef Py_ssize_t i, j, p, g, n1 = r1.shape[0], n2 = r2.shape[0]
    cdef Py_ssize_t n = bounds.shape[0], ng = group_start.shape[0] - 1
    cdef bint ok
    out = np.zeros((n1, n2), dtype=np.uint8)
    cdef cnp.uint8_t[:, :] o = out
    xa = np.empty(4, dtype=np.float64)
    cdef double[:] x = xa
    lhs_a = np.empty(coef.shape[0], dtype=np.float64)
    cdef double[:] lhs = lhs_a
    with nogil:
        for i in range(n1):
            for j in range(n2):
                x[0] = r1[i]
                x[1] = theta1 * r1[i]
                x[2] = r2[j]
                x[3] = theta2 * r2[j]
                _loads(x, coef, lhs)
                for p in range(n):
                    ok = True
                    for g in range(ng):
                        if _group(lhs, bounds, p, g, member_start, group_start) < 1.0 - tol:
                            ok = False
                            break
                    if ok:
                        o[i, j] = 1
                        break
    return out


def profiled_slack(const double[:] x, const double[:, :] coef,
                   const double[:, :] bounds, const Py_ssize_t[:] member_start,
                   const Py_ssize_t[:] group_start, const Py_ssize_t[:] group_time):
    """Slack with the phase split chosen optimally, and that split.

    ``group_time`` tags each group 0 (untimed), 1 (scaled by ``tau``) or
    2 (scaled by ``1 - tau``); ``bounds`` are the unscaled right-hand sides.
    """
    cdef Py_ssize_t p, g, n = bounds.shape[0], ng = group_start.shape[0] - 1
    cdef double h, const, a, c, split, t
    slack_a = np.empty(n, dtype=np.float64)
    tau_a = np.empty(n, dtype=np.float64)
    cdef double[:] slack = slack_a
    cdef double[:] tau = tau_a
    lhs_a = np.empty(coef.shape[0], dtype=np.float64)
    cdef double[:] lhs = lhs_a
    with nogil:
        _loads(x, coef, lhs)
        for p in range(n):
            const = INFINITY
            a = INFINITY
            c = INFINITY
            for g in range(ng):
                h = _group(lhs, bounds, p, g, member_start, group_start)
                if group_time[g] == 1:
                    if h < a:
                        a = h
                elif group_time[g] == 2:
                    if h < c:
                        c = h
                elif h < const:
                    const = h
            # unconstrained phases take no time; a dead phase leaves no headroom
            if a == INFINITY and c == INFINITY:
                split, t = INFINITY, 0.5
            elif a == INFINITY:
                split, t = c, 0.0
            elif c == INFINITY:
                split, t = a, 1.0
            elif a + c <= 0:
                split, t = 0.0, 0.5
            else:
                split, t = a * c / (a + c), c / (a + c)
            slack[p] = (const if const < split else split) - 1.0
            tau[p] = t
    return slack_a, tau_a
