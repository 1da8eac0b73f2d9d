"""Desk-scale verification of slope growth and error-bound claims.

Everything here is corroboration, not proof: the underlying statements are
existential (there are constants making the inequality true near a zero, or
outside a large ball), so sampling can only support or refute them on the
sampled sets. Each report says which it is. The univariate paths are exact
where the geometry allows: sublevel sets get certified endpoints and the
coercivity verdict comes from leading-term analysis of the unbounded
pieces.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import exact
from .bounds import lojasiewicz_exponent
from .errors import (
    CenterNotZeroError,
    DimensionMismatchError,
    EmptySublevelSetError,
)
from .poly import Instance
from .roots import real_roots
from .selections import (
    Decomposition1D,
    MaxMinExpr,
    SelectionLike,
    UnivariateSelection,
    _as_point,
    active_set,
    active_set_exact,
    decompose_1d,
    eval_selection,
    materialize_maxmin,
)
from .subdiff import slope

__all__ = [
    "LojaReport",
    "SublevelSet1D",
    "ErrorBoundReport",
    "GoodnessReport",
    "CoercivityVerdict",
    "lojasiewicz_exponent",
    "verify_loja",
    "sublevel_set_1d",
    "dist_to_S",
    "error_bound_check",
    "goodness_at_infinity",
    "coercivity_check",
]

_SKIP_LEVEL = 1e-14
_MERGE_TOL = 1e-11

SAMPLING_NOTE = (
    "sampled corroboration only: a positive minimum supports the claim on "
    "the sampled set, it does not prove the inequality"
)


def _resolve_1d(instance: Instance, selection: SelectionLike,
                dec: Decomposition1D | None = None) -> UnivariateSelection:
    if isinstance(selection, UnivariateSelection):
        return selection
    return materialize_maxmin(selection, instance, dec)


@dataclass(frozen=True)
class LojaReport:
    """Minimum of slope / |value|^exponent over shrinking balls at a zero."""

    center: tuple[float, ...]
    exponent_used: float
    exponent_denominator: int
    radii: tuple[float, ...]
    min_ratios: tuple[float | None, ...]
    overall_min: float | None
    verdict: str
    samples_per_radius: int
    seed: int
    note: str = SAMPLING_NOTE


def default_loja_radii() -> tuple[float, ...]:
    return tuple(0.5 * 2.0 ** (-k) for k in range(7))


def verify_loja(instance: Instance, selection: SelectionLike, center,
                radii=None, samples_per_radius: int = 200, seed: int = 0,
                tol_active: float = 1e-7) -> LojaReport:
    """Sample the slope-versus-value ratio around a zero of the selection.

    The exponent is 1 - 1/L with L the closed-form exponent for the family;
    at each radius the minimum ratio over the sampled ball is recorded, with
    points where |f| is below 1e-14 skipped.
    """
    point = _as_point(center, instance.n)
    fval = eval_selection(selection, instance, point)
    if abs(fval) > tol_active:
        raise CenterNotZeroError(
            f"selection value at the center is {fval!r}, not 0 within {tol_active!r}"
        )
    radii = tuple(float(v) for v in (radii if radii is not None else default_loja_radii()))
    if not radii or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    ell = lojasiewicz_exponent(instance.n, max(instance.d, 1), instance.r)
    exponent = 1.0 - 1.0 / ell
    sel1d = _resolve_1d(instance, selection) if instance.n == 1 else None
    mins: list[float | None] = []
    for idx, radius in enumerate(radii):
        rng = random.Random(seed * 1_000_003 + idx)
        best: float | None = None
        for _ in range(samples_per_radius):
            x = _ball_sample(rng, point, radius, instance.n)
            fx = eval_selection(selection, instance, x)
            if abs(fx) <= _SKIP_LEVEL:
                continue
            if sel1d is not None:
                active = active_set_exact(sel1d, x[0])
            else:
                active = active_set(instance, fx, x, tol_active)
            ratio = slope(instance, active, x) / abs(fx) ** exponent
            if best is None or ratio < best:
                best = ratio
        mins.append(best)
    present = [m for m in mins if m is not None]
    overall = min(present) if present else None
    verdict = (
        "positive-bounded-below"
        if present and all(m > 0 for m in present)
        else "violated"
    )
    return LojaReport(
        center=tuple(point),
        exponent_used=exponent,
        exponent_denominator=ell,
        radii=radii,
        min_ratios=tuple(mins),
        overall_min=overall,
        verdict=verdict,
        samples_per_radius=samples_per_radius,
        seed=seed,
    )


def _ball_sample(rng: random.Random, center, radius: float, n: int) -> list[float]:
    if n == 1:
        return [center[0] + rng.uniform(-radius, radius)]
    direction = [rng.gauss(0.0, 1.0) for _ in range(n)]
    norm = math.sqrt(sum(v * v for v in direction))
    if norm < 1e-12:
        direction = [1.0] + [0.0] * (n - 1)
        norm = 1.0
    scale = radius * rng.random() ** (1.0 / n) / norm
    return [c + scale * v for c, v in zip(center, direction)]


@dataclass(frozen=True)
class SublevelSet1D:
    """Finite union of closed intervals where the selection is nonpositive."""

    intervals: tuple[tuple[float, float], ...]

    def contains(self, x: float) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def dist(self, x: float) -> float:
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            if math.isfinite(lo):
                best = min(best, abs(x - lo))
            if math.isfinite(hi):
                best = min(best, abs(x - hi))
        return best


def dist_to_S(x: float, s: SublevelSet1D) -> float:
    return s.dist(float(x))


def sublevel_set_1d(instance: Instance, selection: SelectionLike) -> SublevelSet1D:
    """Exact nonpositivity set of a univariate selection.

    Interval endpoints are certified roots of the piece polynomials; an
    everywhere-positive selection raises EmptySublevelSetError because there
    is nothing to measure distances to.
    """
    if instance.n != 1:
        raise DimensionMismatchError("sublevel sets are computed exactly for n == 1")
    sel = _resolve_1d(instance, selection)
    dec = sel.decomposition
    cuts = dec.breakpoints
    pieces: list[tuple[float, float]] = []
    for k, label in enumerate(sel.labels):
        lo = -math.inf if k == 0 else cuts[k - 1]
        hi = math.inf if k == len(cuts) else cuts[k]
        pieces.extend(_piece_nonpositive(instance, label, lo, hi))
    pieces.sort()
    merged: list[list[float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1] + _MERGE_TOL:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if not merged:
        raise EmptySublevelSetError("the selection is positive everywhere")
    return SublevelSet1D(intervals=tuple((lo, hi) for lo, hi in merged))


def _piece_nonpositive(instance: Instance, label: int, lo: float, hi: float):
    p = instance.poly(label)
    q = exact.from_floats(p.univariate_coeffs())
    if exact.degree(q) < 1:
        value = q[0] if q else 0
        return [(lo, hi)] if value <= 0 else []
    inside = [r.value for r in real_roots(p) if lo <= r.value <= hi]
    nodes = [lo] + inside + [hi]
    out = []
    for a, b in zip(nodes, nodes[1:]):
        sample = _segment_sample(a, b)
        sgn = exact.sign(exact.eval_at(q, exact.Fraction(sample)))
        if sgn <= 0:
            out.append((a, b))
    for root in inside:
        out.append((root, root))
    return out


def _segment_sample(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a):
        return b - 1.0
    if math.isinf(b):
        return a + 1.0
    return (a + b) / 2.0


@dataclass(frozen=True)
class ErrorBoundReport:
    """Grid minima of the distance-to-sublevel-set ratios outside the set."""

    alpha: float
    alpha_is_default: bool
    exponent_denominator: int
    grid_lo: float
    grid_hi: float
    grid_step: float
    points_outside: int
    min_local_ratio: float | None
    min_global_ratio: float | None
    cbar_estimate: float | None
    argmin_x: float | None
    verdict: str


def error_bound_check(instance: Instance, selection: SelectionLike,
                      alpha: float | None = None,
                      grid: tuple[float, float, float] | None = None) -> ErrorBoundReport:
    """Check distance bounds against the positive part of the selection.

    The local form compares [f]_+^alpha to the distance; the global form
    adds the plain positive part. Grid points inside the sublevel set are
    skipped since their distance is zero.
    """
    if instance.n != 1:
        raise DimensionMismatchError("the exact distance path needs n == 1")
    s = sublevel_set_1d(instance, selection)
    ell = lojasiewicz_exponent(instance.n, max(instance.d, 1), instance.r)
    alpha_default = alpha is None
    alpha_val = 1.0 / ell if alpha is None else float(alpha)
    if alpha_val <= 0:
        raise ValueError("alpha must be positive")
    if grid is None:
        finite = [v for lo, hi in s.intervals for v in (lo, hi) if math.isfinite(v)]
        lo = (min(finite) if finite else -1.0) - 2.0
        hi = (max(finite) if finite else 1.0) + 2.0
        step = 0.01
    else:
        lo, hi, step = (float(v) for v in grid)
        if step <= 0 or hi < lo:
            raise ValueError("grid must be lo:hi:step with positive step")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    min_local = None
    min_global = None
    argmin_x = None
    outside = 0
    for k in range(count):
        x = lo + k * step
        dist = s.dist(x)
        if dist <= 0.0:
            continue
        outside += 1
        fx = eval_selection(selection, instance, x)
        fplus = max(fx, 0.0)
        local = fplus**alpha_val / dist
        glob = (fplus**alpha_val + fplus) / dist
        if min_local is None or local < min_local:
            min_local = local
            argmin_x = x
        if min_global is None or glob < min_global:
            min_global = glob
    if outside == 0:
        verdict = "no-test-points"
    elif min_local is not None and min_local > 0:
        verdict = "positive"
    else:
        verdict = "violated"
    return ErrorBoundReport(
        alpha=alpha_val,
        alpha_is_default=alpha_default,
        exponent_denominator=ell,
        grid_lo=lo,
        grid_hi=hi,
        grid_step=step,
        points_outside=outside,
        min_local_ratio=min_local,
        min_global_ratio=min_global,
        cbar_estimate=min_global,
        argmin_x=argmin_x,
        verdict=verdict,
    )


@dataclass(frozen=True)
class GoodnessReport:
    """Minimum sampled slope per radius, with a stabilized floor estimate."""

    radii: tuple[float, ...]
    min_slopes: tuple[float, ...]
    c_estimate: float | None
    r_estimate: float | None
    good: bool
    samples_per_radius: int
    seed: int
    note: str = SAMPLING_NOTE


def default_goodness_radii() -> tuple[float, ...]:
    return tuple(float(2**k) for k in range(7))


def goodness_at_infinity(instance: Instance, selection: SelectionLike,
                         radii=None, samples_per_radius: int = 64,
                         seed: int = 0, tol_active: float = 1e-7,
                         positive_tol: float = 1e-9) -> GoodnessReport:
    """Sample the slope on growing spheres and look for a positive floor.

    The floor estimate is the minimum slope from the first radius after
    which every sampled minimum stays above positive_tol; when no such
    radius exists the selection is reported as not good at infinity.
    """
    radii = tuple(float(v) for v in (radii if radii is not None else default_goodness_radii()))
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    sel1d = _resolve_1d(instance, selection) if instance.n == 1 else None
    mins = []
    for idx, radius in enumerate(radii):
        rng = random.Random(seed * 999_983 + idx)
        if instance.n == 1:
            samples = [[-radius], [radius]]
        else:
            samples = [_sphere_sample(rng, radius, instance.n)
                       for _ in range(samples_per_radius)]
        best = math.inf
        for x in samples:
            if sel1d is not None:
                active = active_set_exact(sel1d, x[0])
            else:
                fx = eval_selection(selection, instance, x)
                active = active_set(instance, fx, x, tol_active)
            best = min(best, slope(instance, active, x))
        mins.append(best)
    r_est = None
    c_est = None
    for k in range(len(radii)):
        if all(m >= positive_tol for m in mins[k:]):
            r_est = radii[k]
            c_est = min(mins[k:])
            break
    return GoodnessReport(
        radii=radii,
        min_slopes=tuple(mins),
        c_estimate=c_est,
        r_estimate=r_est,
        good=r_est is not None,
        samples_per_radius=samples_per_radius,
        seed=seed,
    )


def _sphere_sample(rng: random.Random, radius: float, n: int) -> list[float]:
    direction = [rng.gauss(0.0, 1.0) for _ in range(n)]
    norm = math.sqrt(sum(v * v for v in direction))
    if norm < 1e-12:
        direction = [1.0] + [0.0] * (n - 1)
        norm = 1.0
    return [radius * v / norm for v in direction]


@dataclass(frozen=True)
class CoercivityVerdict:
    """Does the selection grow at least linearly in every direction?"""

    bounded_below: bool
    coercive: bool
    c_witness: float | None
    r_witness: float | None
    method: str
    details: dict

    def __post_init__(self):
        if self.coercive and not self.bounded_below:
            raise ValueError("coercive implies bounded below")


def coercivity_check(instance: Instance, selection: SelectionLike) -> CoercivityVerdict:
    """Decide boundedness and coercivity.

    For one variable the verdict is exact: the unbounded pieces' leading
    terms decide the limits, and when both grow the linear-growth witnesses
    (c, R) are derived from a slope floor beyond every breakpoint and
    stationary point together with the exact infimum.
    """
    if instance.n == 1:
        return _coercivity_exact_1d(instance, selection)
    return _coercivity_empirical(instance, selection)


def _limit_kind(q) -> tuple[str, float]:
    """Limit of the polynomial at +inf as ("+inf" | "-inf" | "finite", value)."""
    if exact.degree(q) < 1:
        return ("finite", float(q[0]) if q else 0.0)
    return ("+inf", math.inf) if q[-1] > 0 else ("-inf", -math.inf)


def _mirror(q):
    return [c if k % 2 == 0 else -c for k, c in enumerate(q)]


def _coercivity_exact_1d(instance: Instance, selection: SelectionLike) -> CoercivityVerdict:
    sel = _resolve_1d(instance, selection)
    dec = sel.decomposition
    analyzer = dec.analyzer
    left_label, right_label = sel.labels[0], sel.labels[-1]
    q_left = analyzer.q[left_label - 1]
    q_right = analyzer.q[right_label - 1]
    left_kind, left_val = _limit_kind(_mirror(q_left))  # limit at -inf
    right_kind, right_val = _limit_kind(q_right)
    bounded_below = left_kind != "-inf" and right_kind != "-inf"
    coercive = left_kind == "+inf" and right_kind == "+inf"
    details: dict = {
        "left_limit": left_kind if left_kind != "finite" else left_val,
        "right_limit": right_kind if right_kind != "finite" else right_val,
    }
    c_wit = r_wit = None
    if coercive:
        radius = max((abs(b) for b in dec.breakpoints), default=0.0) + 1.0
        for q in (q_left, q_right):
            for deriv in (exact.derivative(q), exact.derivative(exact.derivative(q))):
                if exact.degree(deriv) >= 1:
                    bound = float(exact.cauchy_bound(deriv))
                    radius = max(radius, bound + 1.0)
        slope_floor = min(
            abs(exact.eval_float(exact.derivative(q_left), -radius)),
            abs(exact.eval_float(exact.derivative(q_right), radius)),
        )
        f_star = _exact_infimum(instance, sel)
        c_wit = slope_floor / 4.0
        r_wit = max(2.0 * radius, 4.0 * abs(f_star) / slope_floor)
        details.update({
            "f_star": f_star,
            "slope_floor": slope_floor,
            "slope_radius": radius,
        })
    return CoercivityVerdict(
        bounded_below=bounded_below,
        coercive=coercive,
        c_witness=c_wit,
        r_witness=r_wit,
        method="exact-1d",
        details=details,
    )


def _exact_infimum(instance: Instance, sel: UnivariateSelection) -> float:
    """Infimum of a coercive piecewise selection: attained at a breakpoint
    or at an interior stationary point of a piece."""
    dec = sel.decomposition
    analyzer = dec.analyzer
    cuts = dec.breakpoints
    candidates = [sel.value_at(instance, b) for b in cuts]
    for k, label in enumerate(sel.labels):
        lo = -math.inf if k == 0 else cuts[k - 1]
        hi = math.inf if k == len(cuts) else cuts[k]
        try:
            droots = analyzer.derivative_roots(label)
        except Exception:
            candidates.append(float(analyzer.q[label - 1][0]) if analyzer.q[label - 1] else 0.0)
            continue
        for root in droots:
            t = root.float_value()
            if lo <= t <= hi:
                candidates.append(instance.poly(label).eval([t]))
    return min(candidates)


def _coercivity_empirical(instance: Instance, selection: SelectionLike,
                          seed: int = 0, samples: int = 32) -> CoercivityVerdict:
    radii = [float(2**k) for k in range(11)]  # up to 1024
    rng = random.Random(seed)
    directions = [_sphere_sample(rng, 1.0, instance.n) for _ in range(samples)]
    min_f = []
    for radius in radii:
        best = math.inf
        for d in directions:
            x = [radius * v for v in d]
            best = min(best, eval_selection(selection, instance, x))
        min_f.append(best)
    tail = min_f[-4:]
    decreasing = all(a > b for a, b in zip(tail, tail[1:]))
    bounded_below = not (decreasing and tail[-1] < -10.0)
    coercive = bounded_below and min_f[-1] >= 1e-6 * radii[-1] and min_f[-1] > min_f[-4]
    c_wit = r_wit = None
    if coercive:
        c_wit = 0.5 * min_f[-1] / radii[-1]
        r_wit = radii[-4]
    return CoercivityVerdict(
        bounded_below=bounded_below,
        coercive=coercive,
        c_witness=c_wit,
        r_witness=r_wit,
        method="empirical",
        details={"radii": radii, "min_f": min_f, "note": SAMPLING_NOTE},
    )
