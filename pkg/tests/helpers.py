"""Shared builders and independent oracles for the test suite.

Oracles here deliberately avoid the library code paths they check: the
simplex-grid minimizer never calls the nearest-point iteration, the
bisection root finder never touches the Sturm machinery, and the labeling
oracle checks continuity numerically instead of via coincidence classes.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from polysel.poly import Instance, Polynomial


def upoly(*coeffs) -> Polynomial:
    """Univariate polynomial from ascending coefficients."""
    return Polynomial.from_dict(1, {(k,): float(c) for k, c in enumerate(coeffs)})


def uinstance(d, *coeff_lists) -> Instance:
    return Instance(n=1, d=d, polys=tuple(upoly(*cs) for cs in coeff_lists))


def two_parabolas(shift: float = 0.0) -> Instance:
    """{x^2, (x-1)^2 + shift}, the workhorse example."""
    return uinstance(2, (0, 0, 1), (1 + shift, -2, 1))


def abs_instance() -> Instance:
    """{x, -x}; the max selection is |x|."""
    return uinstance(1, (0, 1), (0, -1))


def bisect_root(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Plain bisection; requires a sign change on [lo, hi]."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    assert flo * f(hi) < 0, "no bracket"
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return (lo + hi) / 2.0


def scan_roots(f, lo: float, hi: float, step: float = 1e-3,
               tol: float = 1e-12) -> list[float]:
    """Sign-change scan plus bisection; misses only sub-step root pairs."""
    roots = []
    x = lo
    fx = f(x)
    while x < hi:
        nxt = min(x + step, hi)
        fn = f(nxt)
        if fx == 0.0:
            roots.append(x)
        elif fx * fn < 0:
            roots.append(bisect_root(f, x, nxt, tol))
        x, fx = nxt, fn
    if fx == 0.0:
        roots.append(hi)
    return roots


def central_gradient(func, x, h: float = 1e-5) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        out[i] = (func(x + e) - func(x - e)) / (2.0 * h)
    return out


def simplex_grid_min_norm(vertices, step: float = 1e-3) -> float:
    """Minimum of ||sum_i mu_i v_i|| over the simplex grid of the given step.

    The innermost weight is minimized in closed form over its integer range
    (the objective is a convex quadratic along that fiber), which gives the
    exact grid minimum without enumerating every lattice point. Validated
    against naive enumeration in the test suite.
    """
    v = np.asarray(vertices, dtype=float)
    m = v.shape[0]
    n_steps = round(1.0 / step)
    if m == 1:
        return float(np.linalg.norm(v[0]))
    if m == 2:
        w = np.arange(n_steps + 1) / n_steps
        pts = np.outer(1.0 - w, v[0]) + np.outer(w, v[1])
        return float(np.sqrt(np.min(np.einsum("ij,ij->i", pts, pts))))
    if m == 3:
        best = math.inf
        b_all = np.arange(n_steps + 1)
        w1 = v[0] - v[2]
        w2 = v[1] - v[2]
        for a in range(n_steps + 1):
            b = b_all[: n_steps - a + 1]
            base = n_steps * v[2] + a * w1
            pts = base[None, :] + np.outer(b, w2)
            best = min(best, float(np.min(np.einsum("ij,ij->i", pts, pts))))
        return math.sqrt(best) / n_steps
    if m == 4:
        return _grid_min_norm_4(v, n_steps)
    raise ValueError("oracle supports at most 4 vertices")


def _grid_min_norm_4(v: np.ndarray, n_steps: int) -> float:
    w1, w2, w3 = v[0] - v[3], v[1] - v[3], v[2] - v[3]
    a33 = float(w3 @ w3)
    best = math.inf
    for a in range(n_steps + 1):
        u = n_steps * v[3] + a * w1
        bmax = n_steps - a
        b = np.arange(bmax + 1)
        # f(b, c) = |u + b w2 + c w3|^2, convex quadratic in c
        uu = float(u @ u)
        ub = 2.0 * float(u @ w2) * b + float(w2 @ w2) * b * b + uu
        lin = 2.0 * (float(u @ w3) + float(w2 @ w3) * b)
        cmax = bmax - b
        cands = []
        if a33 > 1e-30:
            cstar = -lin / (2.0 * a33)
            for shift in (0.0, 1.0):
                c = np.clip(np.floor(cstar) + shift, 0, cmax)
                cands.append(c)
        cands.append(np.zeros_like(b, dtype=float))
        cands.append(cmax.astype(float))
        vals = [ub + lin * c + a33 * c * c for c in cands]
        best = min(best, float(np.min(np.minimum.reduce(vals))))
    return math.sqrt(max(best, 0.0)) / n_steps


def naive_grid_min_norm(vertices, n_steps: int) -> float:
    """Full enumeration of the weight grid; meta-validation only."""
    v = np.asarray(vertices, dtype=float)
    m = v.shape[0]
    best = math.inf
    for combo in itertools.product(range(n_steps + 1), repeat=m - 1):
        rest = n_steps - sum(combo)
        if rest < 0:
            continue
        weights = np.array(combo + (rest,), dtype=float) / n_steps
        best = min(best, float(np.linalg.norm(weights @ v)))
    return best


def brute_force_labelings(instance: Instance, breakpoints, tol: float = 1e-9) -> int:
    """Count continuity-compatible labelings by direct enumeration."""
    r = instance.r
    m = len(breakpoints) + 1
    count = 0
    for labels in itertools.product(range(1, r + 1), repeat=m):
        ok = True
        for k, t in enumerate(breakpoints):
            left = instance.poly(labels[k]).eval([t])
            right = instance.poly(labels[k + 1]).eval([t])
            if abs(left - right) > tol:
                ok = False
                break
        if ok:
            count += 1
    return count
