"""Stationary points of every selection of a polynomial family.

For each nonempty candidate index set J there is a square polynomial system
in (x, lambda): the lambda-squared convex combination of active gradients
vanishes, the active values coincide, and the squared lambdas sum to one.
Its solutions, filtered by the requirement that no index outside J is
active, are exactly the stationary points whose active set is J.

In one variable the catalog is computed exactly: candidates are roots of
derivatives (smooth strata) and certified coincidence points (nonsmooth
strata). In higher dimension a damped-Newton multistart over a seed grid
solves the lambda system per J; that path is best effort and says so.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from . import exact
from .bounds import critical_point_bound
from .errors import (
    DegenerateInstanceError,
    DimensionMismatchError,
    NonIsolatedCriticalSetError,
    NotCriticalError,
    SubsetGuardError,
    ZeroPolynomialError,
)
from .poly import Instance, Polynomial
from .roots import IsolatedRoot, sign_at
from .selections import (
    ActiveSet,
    ExactUnivariateAnalyzer,
    UnivariateSelection,
    active_set,
    collapse_duplicates,
)
from .subdiff import clarke_subdifferential, min_norm_point

STRICT_COMPLEMENTARITY_TOL = 1e-8
AFFINE_RANK_TOL = 1e-9
SECOND_ORDER_TOL = 1e-10
_JAC_DEFECT_TOL = 1e-8
_NEARBY_FACTOR = 1000.0


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the numeric path; the univariate path only uses tolerances."""

    seed_grid: int = 21
    search_box: float = 8.0
    newton_tol: float = 1e-11
    max_iter: int = 80
    dedupe_radius: float = 1e-6
    tol_active: float = 1e-7

    def __post_init__(self):
        for name in ("seed_grid", "search_box", "newton_tol", "max_iter",
                     "dedupe_radius", "tol_active"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class CriticalSystem:
    """Square system in z = (x, lambda) for one candidate active set."""

    J: ActiveSet
    n: int
    s: int
    equations: tuple[Polynomial, ...]
    guards: tuple[Polynomial, ...]


@dataclass(frozen=True)
class CriticalPoint:
    """One stationary point with its certified multiplier data."""

    x: tuple[float, ...]
    J: ActiveSet
    mu: tuple[float, ...]
    value: float
    residual: float
    strict_complementarity: bool
    affine_independent: bool
    second_order_nondegenerate: bool
    local_type: str


@dataclass(frozen=True)
class CriticalCatalog:
    """Deduplicated stationary points of all selections, plus the ceiling."""

    points: tuple[CriticalPoint, ...]
    per_J_counts: dict
    bound_b0: int
    non_isolated_suspected: bool
    n: int
    d: int
    r: int


def _check_subset(instance: Instance, J) -> ActiveSet:
    J = tuple(sorted(set(int(j) for j in J)))
    if not J:
        raise ValueError("active set must be nonempty")
    if J[0] < 1 or J[-1] > instance.r:
        raise ValueError(f"active set {J} outside 1..{instance.r}")
    return J


def _promote(p: Polynomial, total: int) -> Polynomial:
    pad = total - p.n
    return Polynomial.from_dict(
        total, {exps + (0,) * pad: coef for exps, coef in p.terms}
    )


def build_system(instance: Instance, J) -> CriticalSystem:
    """Assemble the square lambda-parameterized system for J.

    Unknowns are z = (x_1..x_n, lambda_1..lambda_s). Equation order: the n
    gradient-combination rows, then the s-1 value-coincidence rows, then the
    normalization row. Guards are the value differences that must stay
    nonzero for indices outside J; they live in the x variables only.
    """
    J = _check_subset(instance, J)
    n, s = instance.n, len(J)
    total = n + s
    lam_sq = []
    for k in range(s):
        exps = [0] * total
        exps[n + k] = 2
        lam_sq.append(Polynomial.from_dict(total, {tuple(exps): 1.0}))
    equations = []
    for axis in range(n):
        acc = Polynomial.zero(total)
        for k, j in enumerate(J):
            part = _promote(instance.poly(j).partial(axis), total)
            acc = acc + part * lam_sq[k]
        equations.append(acc)
    base = instance.poly(J[0])
    for j in J[1:]:
        equations.append(_promote(instance.poly(j) - base, total))
    norm = Polynomial.zero(total)
    for term in lam_sq:
        norm = norm + term
    equations.append(norm - Polynomial.constant(total, 1.0))
    guards = tuple(
        instance.poly(i) - base for i in range(1, instance.r + 1) if i not in J
    )
    return CriticalSystem(J=J, n=n, s=s, equations=tuple(equations), guards=guards)


def _affine_independent(instance: Instance, J: ActiveSet, x) -> bool:
    s = len(J)
    if s == 1:
        return True
    if s - 1 > instance.n:
        return False
    grads = [instance.poly(j).gradient(x) for j in J]
    diffs = np.array([g - grads[0] for g in grads[1:]])
    svals = np.linalg.svd(diffs, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return False
    return float(svals[-1] / svals[0]) > AFFINE_RANK_TOL


def _second_order(instance: Instance, x, J: ActiveSet, mu) -> bool:
    n = instance.n
    h = np.zeros((n, n))
    for w, j in zip(mu, J):
        h += w * instance.poly(j).hessian(x)
    a = np.array([instance.poly(j).gradient(x) for j in J])
    svals = np.linalg.svd(a, compute_uv=False)
    tol = (svals.max() if svals.size else 0.0) * 1e-10
    tol = max(tol, 1e-300)
    rank = int(np.sum(svals > tol))
    if rank >= n:
        return True  # tangent subspace is {0}
    _, _, vt = np.linalg.svd(a, full_matrices=True)
    z = vt[rank:].T  # n x (n - rank)
    m = z.T @ h @ z
    msv = np.linalg.svd(m, compute_uv=False)
    scale = max(1.0, float(msv.max()) if msv.size else 0.0)
    return msv.size > 0 and float(msv.min()) > SECOND_ORDER_TOL * scale


def second_order_check(instance: Instance, cp: CriticalPoint) -> bool:
    """Is the multiplier-weighted Hessian nonsingular on the subspace
    orthogonal to every active gradient? Vacuously true when that subspace
    is trivial."""
    return _second_order(instance, list(cp.x), cp.J, cp.mu)


def _smooth_local_type_1d(analyzer: ExactUnivariateAnalyzer, j: int,
                          root: IsolatedRoot) -> str:
    q = analyzer.q[j - 1]
    deriv = exact.derivative(q)
    order = 1
    while True:
        deriv = exact.derivative(deriv)
        order += 1
        if exact.is_zero(deriv):
            return "unknown"  # piece is affine/constant past this order
        s = sign_at(deriv, root)
        if s != 0:
            if order % 2 == 1:
                return "saddle"
            return "min" if s > 0 else "max"
        if order > exact.degree(q) + 1:
            return "unknown"


def _smooth_local_type_nd(instance: Instance, j: int, x) -> str:
    eigs = np.linalg.eigvalsh(instance.poly(j).hessian(x))
    if eigs.size == 0:
        return "unknown"
    tol = SECOND_ORDER_TOL * max(1.0, float(np.max(np.abs(eigs))))
    if np.all(eigs > tol):
        return "min"
    if np.all(eigs < -tol):
        return "max"
    if np.any(eigs > tol) and np.any(eigs < -tol):
        return "saddle"
    return "unknown"


def _assemble_point(instance: Instance, x_pt, J: ActiveSet, cfg: SolverConfig,
                    analyzer: ExactUnivariateAnalyzer | None = None,
                    root: IsolatedRoot | None = None) -> CriticalPoint:
    polytope = clarke_subdifferential(instance, J, x_pt)
    mn = min_norm_point(polytope)
    mu = mn.weights / mn.weights.sum()
    base_val = instance.poly(J[0]).eval(x_pt)
    coincide = max(
        (abs(instance.poly(j).eval(x_pt) - base_val) for j in J[1:]), default=0.0
    )
    residual = max(mn.norm, coincide)
    if len(J) == 1:
        if analyzer is not None and root is not None:
            local = _smooth_local_type_1d(analyzer, J[0], root)
        else:
            local = _smooth_local_type_nd(instance, J[0], x_pt)
    else:
        local = "unknown"  # depends on the selection; see classify_local_1d
    return CriticalPoint(
        x=tuple(float(v) for v in x_pt),
        J=J,
        mu=tuple(float(w) for w in mu),
        value=float(base_val),
        residual=float(residual),
        strict_complementarity=bool(min(mu) >= STRICT_COMPLEMENTARITY_TOL),
        affine_independent=_affine_independent(instance, J, x_pt),
        second_order_nondegenerate=_second_order(instance, x_pt, J, mu),
        local_type=local,
    )


def _require_collapsed(instance: Instance):
    collapsed, groups = collapse_duplicates(instance)
    if collapsed.r != instance.r:
        dups = [g for g in groups if len(g) > 1]
        raise DegenerateInstanceError(
            f"identical polynomials present (groups {dups}); collapse duplicates first"
        )


def solve_1d(instance: Instance, J, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    """Exact stationary points whose full active set equals J (n == 1)."""
    if instance.n != 1:
        raise DimensionMismatchError("solve_1d needs n == 1")
    cfg = cfg or SolverConfig()
    J = _check_subset(instance, J)
    _require_collapsed(instance)
    analyzer = ExactUnivariateAnalyzer(instance)
    out = []
    if len(J) == 1:
        j = J[0]
        try:
            droots = analyzer.derivative_roots(j)
        except ZeroPolynomialError as exc:
            raise NonIsolatedCriticalSetError(
                f"candidate {j} is constant: its smooth stratum is a continuum"
            ) from exc
        for root in droots:
            if analyzer.active_class_at(j, root) == (j,):
                out.append(_assemble_point(
                    instance, [root.float_value()], J, cfg,
                    analyzer=analyzer, root=root,
                ))
    else:
        base = J[0]
        g = analyzer.diff(base, J[1])
        for j in J[2:]:
            g = exact.gcd_poly(g, analyzer.diff(base, j))
        if exact.is_zero(g):
            raise DegenerateInstanceError("identical polynomials inside J")
        if exact.degree(g) >= 1:
            from .roots import isolate_squarefree

            for root in isolate_squarefree(exact.squarefree(g)):
                root.refine_below(analyzer.width)
                if analyzer.active_class_at(base, root) != J:
                    continue  # an outside index is also active: other stratum
                signs = [analyzer.derivative_sign_at(j, root) for j in J]
                if min(signs) <= 0 <= max(signs):
                    out.append(_assemble_point(
                        instance, [root.float_value()], J, cfg,
                        analyzer=analyzer, root=root,
                    ))
    out.sort(key=lambda p: p.x)
    return out


def _subset_seed(J: ActiveSet) -> int:
    return 0xA5EED ^ sum(1 << (j - 1) for j in J)


def _eval_polys(polys, z) -> np.ndarray:
    return np.array([p.eval(z) for p in polys])


def _solve_nd_candidates(instance: Instance, J: ActiveSet, cfg: SolverConfig):
    """Newton multistart on the lambda system; returns (point, jac_defect)."""
    system = build_system(instance, J)
    n, s = system.n, system.s
    total = n + s
    eqs = system.equations
    jac_polys = [[eq.partial(v) for v in range(total)] for eq in eqs]
    axis = np.linspace(-cfg.search_box, cfg.search_box, cfg.seed_grid)
    rng = random.Random(_subset_seed(J))
    uniform_lam = np.full(s, 1.0 / np.sqrt(s))
    candidates = []
    for gi, xs in enumerate(itertools.product(axis, repeat=n)):
        if gi == 0:
            lam = uniform_lam
        else:
            raw = np.array([rng.gauss(0.0, 1.0) for _ in range(s)])
            nrm = np.linalg.norm(raw)
            lam = raw / nrm if nrm > 1e-12 else uniform_lam
        z = np.concatenate([np.array(xs, dtype=float), lam])
        sol = _newton(eqs, jac_polys, z, cfg)
        if sol is None:
            continue
        z = sol
        x_pt = list(z[:n])
        value = instance.poly(J[0]).eval(x_pt)
        try:
            full = active_set(instance, value, x_pt, cfg.tol_active)
        except Exception:
            continue
        if not set(J) <= set(full):
            continue
        polytope = clarke_subdifferential(instance, full, x_pt)
        mn = min_norm_point(polytope)
        if mn.norm > 10.0 * cfg.newton_tol:
            continue
        jm = np.array([[jp.eval(z) for jp in row] for row in jac_polys])
        sv = np.linalg.svd(jm, compute_uv=False)
        defect = float(sv.min() / sv.max()) if sv.size and sv.max() > 0 else 0.0
        point = _assemble_point(instance, x_pt, full, cfg)
        candidates.append((point, defect))
    return _dedupe(candidates, cfg.dedupe_radius)


def _newton(eqs, jac_polys, z0: np.ndarray, cfg: SolverConfig) -> np.ndarray | None:
    z = z0.copy()
    for _ in range(cfg.max_iter):
        f = _eval_polys(eqs, z)
        fnorm = float(np.max(np.abs(f)))
        if fnorm <= cfg.newton_tol:
            return z
        jm = np.array([[jp.eval(z) for jp in row] for row in jac_polys])
        try:
            step = np.linalg.solve(jm, -f)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(jm, -f, rcond=None)
        if not np.all(np.isfinite(step)):
            return None
        t = 1.0
        base = float(np.linalg.norm(f))
        accepted = False
        for _ in range(30):
            trial = z + t * step
            fn = float(np.linalg.norm(_eval_polys(eqs, trial)))
            if fn < base:
                z = trial
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return None
        if float(np.linalg.norm(z)) > 1e8:
            return None
    f = _eval_polys(eqs, z)
    return z if float(np.max(np.abs(f))) <= cfg.newton_tol else None


def _dedupe(candidates, radius: float):
    kept = []
    for point, defect in sorted(
        candidates, key=lambda c: (c[0].x, c[0].value, c[0].residual)
    ):
        merged = False
        for i, (other, odef) in enumerate(kept):
            if (
                max(abs(a - b) for a, b in zip(point.x, other.x)) <= radius
                and abs(point.value - other.value) <= radius
            ):
                if point.residual < other.residual:
                    kept[i] = (point, max(defect, odef))
                merged = True
                break
        if not merged:
            kept.append((point, defect))
    return kept


def solve_nd(instance: Instance, J, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    """Best-effort stationary points for one candidate set when n >= 2.

    Completeness is not guaranteed: the multistart only sows seeds on a
    finite grid inside the search box. Converged points violating a guard
    within tol_active are kept with their active set enlarged instead of
    being discarded.
    """
    if instance.n < 2:
        raise DimensionMismatchError("solve_nd needs n >= 2")
    cfg = cfg or SolverConfig()
    J = _check_subset(instance, J)
    return [point for point, _ in _solve_nd_candidates(instance, J, cfg)]


def all_critical_points(instance: Instance, cfg: SolverConfig | None = None) -> CriticalCatalog:
    """Catalog of stationary points of every selection.

    Exact and complete for n == 1; multistart best effort otherwise. Points
    are deduplicated across candidate sets by position and value, ordered by
    position, and each point carries the full active set observed there.
    """
    cfg = cfg or SolverConfig()
    if instance.r > 12:
        raise SubsetGuardError(
            f"r={instance.r} would need {2 ** instance.r - 1} candidate sets; the guard is r <= 12"
        )
    _require_collapsed(instance)
    b0 = critical_point_bound(instance.n, max(instance.d, 1), instance.r)
    if instance.n == 1:
        points, suspected = _catalog_1d(instance, cfg)
    else:
        points, suspected = _catalog_nd(instance, cfg)
    points = sorted(points, key=lambda p: (p.x, p.value))
    counts: dict = {}
    for p in points:
        counts[p.J] = counts.get(p.J, 0) + 1
    return CriticalCatalog(
        points=tuple(points),
        per_J_counts=counts,
        bound_b0=b0,
        non_isolated_suspected=suspected,
        n=instance.n,
        d=instance.d,
        r=instance.r,
    )


def _catalog_1d(instance: Instance, cfg: SolverConfig):
    analyzer = ExactUnivariateAnalyzer(instance)
    suspected = False
    raw = []
    for j in range(1, instance.r + 1):
        try:
            droots = analyzer.derivative_roots(j)
        except ZeroPolynomialError:
            # Constant candidate: its smooth stratum is a continuum wherever
            # no other candidate matches its value.
            suspected = True
            continue
        for root in droots:
            klass = analyzer.active_class_at(j, root)
            if klass == (j,):
                raw.append(_assemble_point(
                    instance, [root.float_value()], klass, cfg,
                    analyzer=analyzer, root=root,
                ))
    for rep, _pairs in analyzer.coincidence_clusters():
        for klass in analyzer.partition_at(rep):
            if len(klass) < 2:
                continue
            signs = [analyzer.derivative_sign_at(j, rep) for j in klass]
            if min(signs) <= 0 <= max(signs):
                raw.append(_assemble_point(
                    instance, [rep.float_value()], klass, cfg,
                    analyzer=analyzer, root=rep,
                ))
    deduped = _dedupe([(p, 0.0) for p in raw], cfg.dedupe_radius)
    return [p for p, _ in deduped], suspected


def _catalog_nd(instance: Instance, cfg: SolverConfig):
    gathered = []
    for size in range(1, instance.r + 1):
        for J in itertools.combinations(range(1, instance.r + 1), size):
            gathered.extend(_solve_nd_candidates(instance, J, cfg))
    merged = _dedupe(gathered, cfg.dedupe_radius)
    suspected = False
    near = _NEARBY_FACTOR * cfg.dedupe_radius
    for i in range(len(merged)):
        for k in range(i + 1, len(merged)):
            pi, di = merged[i]
            pk, dk = merged[k]
            dist = max(abs(a - b) for a, b in zip(pi.x, pk.x))
            if dist <= near and di < _JAC_DEFECT_TOL and dk < _JAC_DEFECT_TOL:
                suspected = True
    return [p for p, _ in merged], suspected


def classify_local_1d(instance: Instance, sel: UnivariateSelection,
                      cp: CriticalPoint) -> str:
    """Exact local type of a univariate selection at a cataloged point.

    Decides min, max, or saddle from the first nonvanishing one-sided
    derivative of the adjacent pieces. Raises NotCriticalError when the
    point is not stationary for this particular selection.
    """
    if instance.n != 1:
        raise DimensionMismatchError("classification needs n == 1")
    t = cp.x[0]
    dec = sel.decomposition
    analyzer: ExactUnivariateAnalyzer = dec.analyzer
    bp = dec.breakpoint_hit(t)
    if bp is not None:
        k = dec.points.index(bp)
        rep = analyzer.coincidence_clusters()[k][0]
        left, right = sel.labels[k], sel.labels[k + 1]
        klass = bp.class_of(left)
        signs = [analyzer.derivative_sign_at(j, rep) for j in klass]
        if not (min(signs) <= 0 <= max(signs)):
            raise NotCriticalError(
                f"{t!r} is not a stationary point of this selection"
            )
        dir_left = _side_direction(analyzer, left, rep, side=-1)
        dir_right = _side_direction(analyzer, right, rep, side=+1)
        if dir_left >= 0 and dir_right >= 0:
            return "min"
        if dir_left <= 0 and dir_right <= 0:
            return "max"
        return "saddle"
    label = sel.label_at(t)
    try:
        droots = analyzer.derivative_roots(label)
    except ZeroPolynomialError:
        return "min"  # constant piece: every point is a nonstrict minimum
    for root in droots:
        if abs(root.float_value() - t) <= max(1e-9, 2.0 * float(root.width() or 0)):
            return _smooth_local_type_1d(analyzer, label, root)
    raise NotCriticalError(f"{t!r} is not a stationary point of this selection")


def _side_direction(analyzer: ExactUnivariateAnalyzer, label: int,
                    root: IsolatedRoot, side: int) -> int:
    """Sign of f(t + side*h) - f(t) for small h > 0; 0 means locally flat."""
    q = analyzer.q[label - 1]
    deriv = q
    order = 0
    while True:
        deriv = exact.derivative(deriv)
        order += 1
        if exact.is_zero(deriv):
            return 0
        s = sign_at(deriv, root)
        if s != 0:
            if side < 0 and order % 2 == 1:
                return -s
            return s
