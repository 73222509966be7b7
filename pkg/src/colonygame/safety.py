"""Velocity safety filter: minimum separation and a keep-in boundary.

Each robot's commanded velocity is the closest point (least squared
deviation) to its desired velocity inside a small convex set: one linear
half-plane per neighbour from a control barrier condition on the squared
separation distance, a linear keep-in half-plane, and the speed disk.  The
program is solved exactly by enumerating candidate active sets, which is
cheap in 2D with a dozen constraints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class SafetyConfig:
    collision_radius: float = 0.25
    keep_in_radius: float = 30.0
    gamma: float = 1.0
    v_max: float = 1.0

    def __post_init__(self) -> None:
        if self.collision_radius <= 0 or self.gamma <= 0 or self.v_max <= 0:
            raise ValueError(f"invalid safety config {self}")


def _constraints(
    robot_index: int, positions: np.ndarray, config: SafetyConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Rows (a, b) of a @ v >= b for one robot; vacuous rows are pruned."""
    p = positions[robot_index]
    others = np.delete(positions, robot_index, axis=0)
    rows_a = []
    rows_b = []
    if len(others):
        diff = p - others
        d2 = np.einsum("ij,ij->i", diff, diff)
        # Half-responsibility barrier on h = d^2 - (2R)^2.
        b = -(config.gamma / 4.0) * (d2 - (2.0 * config.collision_radius) ** 2)
        # A neighbour cannot bind if even the worst-case velocity satisfies it.
        norm = np.sqrt(d2)
        live = b > -norm * config.v_max - 1e-12
        if live.any():
            rows_a.append(diff[live])
            rows_b.append(b[live])
    keep_b = -(config.gamma / 2.0) * (config.keep_in_radius**2 - p @ p)
    if keep_b > -np.linalg.norm(p) * config.v_max - 1e-12:
        rows_a.append(-p[None, :])
        rows_b.append(np.array([keep_b]))
    if not rows_a:
        return np.empty((0, 2)), np.empty(0)
    return np.concatenate(rows_a), np.concatenate(rows_b)


def _solve(
    desired: np.ndarray, A: np.ndarray, b: np.ndarray, v_max: float
) -> np.ndarray | None:
    """Exact min ||v - desired||^2 s.t. A v >= b, ||v|| <= v_max, or None.

    In 2D the optimum has at most two active constraints, so enumerating
    single-constraint projections, constraint-pair vertices, and speed-disk
    crossings covers every case; the feasible candidate with the smallest
    deviation is the solution.
    """
    m = len(A)
    norms2 = np.einsum("ij,ij->i", A, A)
    ok = norms2 > 1e-18
    parts = [desired[None, :]]
    # Projection onto each single half-plane boundary.
    resid = b - A @ desired
    with np.errstate(divide="ignore", invalid="ignore"):
        proj = desired + (resid / norms2)[:, None] * A
    parts.append(proj[ok])
    # Intersections of constraint-boundary pairs.
    if m > 1:
        k, l = np.triu_indices(m, 1)
        det = A[k, 0] * A[l, 1] - A[k, 1] * A[l, 0]
        good = np.abs(det) > 1e-12
        k, l, det = k[good], l[good], det[good]
        verts = np.empty((len(det), 2))
        verts[:, 0] = (b[k] * A[l, 1] - A[k, 1] * b[l]) / det
        verts[:, 1] = (A[k, 0] * b[l] - b[k] * A[l, 0]) / det
        parts.append(verts)
    # Speed-disk boundary: radial projection and each line-circle crossing.
    dn = math.sqrt(float(desired @ desired))
    if dn > 1e-15:
        parts.append(desired[None, :] * (v_max / dn))
    with np.errstate(divide="ignore", invalid="ignore"):
        foot = (b / norms2)[:, None] * A
    h2 = v_max**2 - np.einsum("ij,ij->i", foot, foot)
    cross = ok & (h2 >= 0)
    if cross.any():
        tang = np.stack([-A[cross, 1], A[cross, 0]], axis=1) / np.sqrt(
            norms2[cross]
        )[:, None]
        h = np.sqrt(h2[cross])[:, None]
        parts.append(foot[cross] + h * tang)
        parts.append(foot[cross] - h * tang)

    cands = np.concatenate(parts)
    feas = np.einsum("ij,ij->i", cands, cands) <= v_max**2 * (1 + 1e-12) + _FEAS_TOL
    feas &= (cands @ A.T - b >= -_FEAS_TOL).all(axis=1)
    if not feas.any():
        return None
    diff = cands - desired
    dev = np.einsum("ij,ij->i", diff, diff)
    dev[~feas] = np.inf
    best = cands[int(np.argmin(dev))]
    n = math.sqrt(float(best @ best))
    if n > v_max:
        best = best * (v_max / n)
    return best


try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def _solve_one_jit(positions, i, dx, dy, R, gamma, keep_in, v_max):  # pragma: no cover
    """Scalar-loop version of the per-robot program for the hot path."""
    K = positions.shape[0]
    tol = _FEAS_TOL
    # cap the desired speed
    dn = math.sqrt(dx * dx + dy * dy)
    if dn > v_max:
        dx *= v_max / dn
        dy *= v_max / dn
    # build pruned constraints a.v >= b
    A = np.empty((K, 2))
    b = np.empty(K)
    m = 0
    px = positions[i, 0]
    py = positions[i, 1]
    four_r2 = 4.0 * R * R
    for j in range(K):
        if j == i:
            continue
        ax = px - positions[j, 0]
        ay = py - positions[j, 1]
        d2 = ax * ax + ay * ay
        bb = -(gamma / 4.0) * (d2 - four_r2)
        if bb > -math.sqrt(d2) * v_max - 1e-12:
            A[m, 0] = ax
            A[m, 1] = ay
            b[m] = bb
            m += 1
    r2 = px * px + py * py
    keep_b = -(gamma / 2.0) * (keep_in * keep_in - r2)
    if keep_b > -math.sqrt(r2) * v_max - 1e-12:
        A[m, 0] = -px
        A[m, 1] = -py
        b[m] = keep_b
        m += 1
    # fast path: desired already feasible
    feasible = True
    for k in range(m):
        if A[k, 0] * dx + A[k, 1] * dy < b[k] - tol:
            feasible = False
            break
    if feasible:
        return dx, dy, True
    # enumerate candidate active sets
    cap = 2 + 4 * m + (m * (m - 1)) // 2
    cand = np.empty((cap, 2))
    nc = 0
    cand[nc, 0] = dx
    cand[nc, 1] = dy
    nc += 1
    for k in range(m):
        n2 = A[k, 0] ** 2 + A[k, 1] ** 2
        if n2 <= 1e-18:
            continue
        resid = (b[k] - (A[k, 0] * dx + A[k, 1] * dy)) / n2
        cand[nc, 0] = dx + resid * A[k, 0]
        cand[nc, 1] = dy + resid * A[k, 1]
        nc += 1
    for k in range(m):
        for l in range(k + 1, m):
            det = A[k, 0] * A[l, 1] - A[k, 1] * A[l, 0]
            if abs(det) > 1e-12:
                cand[nc, 0] = (b[k] * A[l, 1] - A[k, 1] * b[l]) / det
                cand[nc, 1] = (A[k, 0] * b[l] - b[k] * A[l, 0]) / det
                nc += 1
    dn = math.sqrt(dx * dx + dy * dy)
    if dn > 1e-15:
        cand[nc, 0] = dx * (v_max / dn)
        cand[nc, 1] = dy * (v_max / dn)
        nc += 1
    for k in range(m):
        n2 = A[k, 0] ** 2 + A[k, 1] ** 2
        if n2 <= 1e-18:
            continue
        fx = (b[k] / n2) * A[k, 0]
        fy = (b[k] / n2) * A[k, 1]
        h2 = v_max * v_max - (fx * fx + fy * fy)
        if h2 >= 0.0:
            nrm = math.sqrt(n2)
            tx = -A[k, 1] / nrm
            ty = A[k, 0] / nrm
            h = math.sqrt(h2)
            cand[nc, 0] = fx + h * tx
            cand[nc, 1] = fy + h * ty
            nc += 1
            cand[nc, 0] = fx - h * tx
            cand[nc, 1] = fy - h * ty
            nc += 1
    best_dev = np.inf
    bx = 0.0
    by = 0.0
    found = False
    vmax2 = v_max * v_max * (1.0 + 1e-12) + tol
    for c in range(nc):
        vx = cand[c, 0]
        vy = cand[c, 1]
        if vx * vx + vy * vy > vmax2:
            continue
        ok = True
        for k in range(m):
            if A[k, 0] * vx + A[k, 1] * vy < b[k] - tol:
                ok = False
                break
        if not ok:
            continue
        dev = (vx - dx) ** 2 + (vy - dy) ** 2
        if dev < best_dev:
            best_dev = dev
            bx = vx
            by = vy
            found = True
    if not found:
        return 0.0, 0.0, False
    n = math.sqrt(bx * bx + by * by)
    if n > v_max:
        bx *= v_max / n
        by *= v_max / n
    return bx, by, True


@njit(cache=True)
def _filter_all_jit(positions, desired, R, gamma, keep_in, v_max):  # pragma: no cover
    K = positions.shape[0]
    V = np.empty((K, 2))
    faults = np.zeros(K, np.int8)
    for i in range(K):
        vx, vy, ok = _solve_one_jit(
            positions, i, desired[i, 0], desired[i, 1], R, gamma, keep_in, v_max
        )
        V[i, 0] = vx
        V[i, 1] = vy
        if not ok:
            faults[i] = 1
    return V, faults


def filter_velocity(
    robot_index: int,
    desired: np.ndarray,
    positions: np.ndarray,
    config: SafetyConfig,
) -> tuple[np.ndarray, bool]:
    """Filter one robot's desired velocity.

    Returns (velocity, feasible); on an infeasible constraint set the
    velocity is zero and feasible is False so the caller can log a fault.
    """
    desired = np.asarray(desired, dtype=float)
    positions = np.ascontiguousarray(positions, dtype=float)
    if _HAVE_NUMBA:
        vx, vy, ok = _solve_one_jit(
            positions,
            robot_index,
            float(desired[0]),
            float(desired[1]),
            config.collision_radius,
            config.gamma,
            config.keep_in_radius,
            config.v_max,
        )
        return np.array([vx, vy]), bool(ok)
    dn = np.linalg.norm(desired)
    if dn > config.v_max:
        desired = desired * (config.v_max / dn)
    A, b = _constraints(robot_index, positions, config)
    if len(A) == 0 or np.min(A @ desired - b) >= -_FEAS_TOL:
        return desired, True
    v = _solve(desired, A, b, config.v_max)
    if v is None:
        return np.zeros(2), False
    return v, True


def filter_all(
    positions: np.ndarray,
    desired: np.ndarray,
    config: SafetyConfig,
) -> tuple[np.ndarray, list[int]]:
    """Filter every robot against tick-start positions.

    Fast path: robots whose desired velocity already satisfies all
    constraints are passed through untouched, which is the exact optimum.
    """
    positions = np.ascontiguousarray(positions, dtype=float)
    V = np.array(desired, dtype=float, copy=True)
    k = len(positions)
    if k == 0:
        return V, []
    if _HAVE_NUMBA:
        out, fault_flags = _filter_all_jit(
            positions,
            V,
            config.collision_radius,
            config.gamma,
            config.keep_in_radius,
            config.v_max,
        )
        return out, [int(i) for i in np.nonzero(fault_flags)[0]]
    speeds = np.linalg.norm(V, axis=1)
    over = speeds > config.v_max
    if over.any():
        V[over] *= (config.v_max / speeds[over])[:, None]
    if k > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        rhs = -(config.gamma / 4.0) * (d2 - (2.0 * config.collision_radius) ** 2)
        np.fill_diagonal(rhs, -np.inf)
        lhs = np.einsum("ijk,ik->ij", diff, V)
        pair_bad = (lhs - rhs < -_FEAS_TOL).any(axis=1)
    else:
        pair_bad = np.zeros(1, dtype=bool)
    r2 = np.einsum("ij,ij->i", positions, positions)
    keep_bad = np.einsum("ij,ij->i", positions, V) > (
        config.gamma / 2.0
    ) * (config.keep_in_radius**2 - r2) + _FEAS_TOL
    faults: list[int] = []
    for i in np.nonzero(pair_bad | keep_bad)[0]:
        V[i], ok = filter_velocity(int(i), desired[i], positions, config)
        if not ok:
            faults.append(int(i))
    return V, faults
