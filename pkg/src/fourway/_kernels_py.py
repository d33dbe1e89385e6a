"""Numpy implementation of the polytope kernels (used when the extension is absent)."""
import numpy as np


def _headroom(bounds, lhs, member_start, group_start):
    # (..., K) -> (..., G): min over member rows, max over group members
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(lhs > 0, bounds / lhs, np.inf)
    member = np.minimum.reduceat(r, member_start[:-1], axis=-1)
    return np.maximum.reduceat(member, group_start[:-1], axis=-1)


def _loads(x, coef):
    # summed left to right like the compiled loop, so both backends agree bitwise
    x = np.asarray(x, dtype=float)
    return ((coef[:, 0] * x[..., 0, None] + coef[:, 1] * x[..., 1, None])
            + coef[:, 2] * x[..., 2, None]) + coef[:, 3] * x[..., 3, None]


def group_headroom(x, coef, bounds, member_start, group_start):
    """Per-group headroom of ``x``: array of shape ``(n_params, n_groups)``."""
    lhs = _loads(x, np.asarray(coef, dtype=float))
    return _headroom(np.asarray(bounds, dtype=float), lhs,
                     np.asarray(member_start), np.asarray(group_start))


def polytope_slack(x, coef, bounds, member_start, group_start):
    """Relative slack ``min_group headroom - 1`` at every parameter row."""
    return group_headroom(x, coef, bounds, member_start, group_start).min(axis=-1) - 1.0


def feasibility_map(r1, r2, theta1, theta2, coef, bounds, member_start, group_start, tol):
    """Boolean lattice: is ``(r1[i], r2[j])`` feasible for some parameter row."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    coef = np.asarray(coef, dtype=float)
    bounds = np.asarray(bounds, dtype=float)
    ms, gs = np.asarray(member_start), np.asarray(group_start)
    out = np.zeros((len(r1), len(r2)), dtype=np.uint8)
    # chunk the parameter axis to keep the (n2, P, K) array small
    chunk = max(1, 4_000_000 // max(1, len(r2) * bounds.shape[1]))
    for i, a in enumerate(r1):
        x = np.column_stack([np.full_like(r2, a), np.full_like(r2, theta1 * a), r2, theta2 * r2])
        lhs = _loads(x, coef)
        hit = np.zeros(len(r2), dtype=bool)
        for start in range(0, bounds.shape[0], chunk):
            todo = ~hit
            if not todo.any():
                break
            room = _headroom(bounds[None, start:start + chunk, :], lhs[todo, None, :], ms, gs)
            hit[todo] = (room.min(axis=-1) >= 1.0 - tol).any(axis=1)
        out[i] = hit
    return out


def profiled_slack(x, coef, bounds, member_start, group_start, group_time):
    """Slack with the phase split chosen optimally, and that split."""
    room = group_headroom(x, coef, bounds, member_start, group_start)
    group_time = np.asarray(group_time)
    const = room[:, group_time == 0].min(axis=1, initial=np.inf)
    a = room[:, group_time == 1].min(axis=1, initial=np.inf)
    c = room[:, group_time == 2].min(axis=1, initial=np.inf)
    a_inf, c_inf = np.isinf(a), np.isinf(c)
    # unconstrained phases take no time; a dead phase leaves no headroom
    cases = [a_inf & c_inf, a_inf, c_inf, a + c <= 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        split = np.select(cases, [np.inf, c, a, 0.0], a * c / (a + c))
        tau = np.select(cases, [0.5, 0.0, 1.0, 0.5], c / (a + c))
    return np.minimum(const, split) - 1.0, tau
