"""Clarke subdifferential of a selection and its minimal-norm element.

At a point the subdifferential is the convex hull of the gradients of the
active candidates. The slope is the Euclidean distance from the origin to
that hull, computed by the classical nearest-point method over growing
vertex subsets (major cycles add the most violating vertex, minor cycles
prune until the affine minimizer has nonnegative weights).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, MinNormConvergenceError
from .poly import Instance
from .selections import ActiveSet

_DEDUPE_TOL = 1e-12
_WEIGHT_EPS = 1e-14


@dataclass(frozen=True)
class GradientPolytope:
    """Active gradients at a point, in active-index order."""

    vertices: np.ndarray  # shape (m, n)
    source_indices: ActiveSet

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("need at least one vertex")
        object.__setattr__(self, "vertices", v)


@dataclass(frozen=True)
class MinNormResult:
    """Nearest point of the hull to the origin with its hull coordinates."""

    point: np.ndarray
    weights: np.ndarray
    norm: float
    iterations: int


def clarke_subdifferential(instance: Instance, active: ActiveSet, x) -> GradientPolytope:
    """Vertices of the subdifferential: gradients of the active candidates."""
    if not active:
        raise ValueError("active set must be nonempty")
    point = [float(v) for v in (x if hasattr(x, "__len__") else [x])]
    if len(point) != instance.n:
        raise DimensionMismatchError("point dimension mismatch")
    grads = np.array([instance.poly(i).gradient(point) for i in active])
    return GradientPolytope(vertices=grads, source_indices=tuple(active))


def min_norm_point(polytope, opt_tol: float = 1e-10,
                   max_iter: int | None = None) -> MinNormResult:
    """Nearest point of a finite polytope to the origin.

    Satisfies <point, v - point> >= -opt_tol for every vertex v on return.
    Weights are reported for the vertices as given; duplicate vertices are
    merged internally and receive zero weight on output.
    """
    if opt_tol <= 0:
        raise ValueError("opt_tol must be positive")
    raw = polytope.vertices if isinstance(polytope, GradientPolytope) else np.asarray(
        polytope, dtype=float
    )
    if raw.ndim == 1:
        raw = raw.reshape(-1, 1)
    m_all, n = raw.shape
    keep: list[int] = []
    for i in range(m_all):
        if all(np.max(np.abs(raw[i] - raw[k])) > _DEDUPE_TOL for k in keep):
            keep.append(i)
    v = raw[keep]
    m = v.shape[0]
    cap = max_iter if max_iter is not None else 10 * (m + n) ** 2

    start = int(np.argmin(np.einsum("ij,ij->i", v, v)))
    corral = [start]
    weights = np.array([1.0])
    x = v[start].copy()
    iterations = 0

    def result(it):
        full = np.zeros(m_all)
        for idx, w in zip(corral, weights):
            full[keep[idx]] = w
        full = np.maximum(full, 0.0)
        ssum = full.sum()
        if ssum > 0:
            full /= ssum
        return MinNormResult(point=x.copy(), weights=full, norm=float(np.linalg.norm(x)),
                             iterations=it)

    while True:
        iterations += 1
        if iterations > cap:
            best = result(iterations)
            viol = float(x @ x - np.min(v @ x))
            raise MinNormConvergenceError(
                f"nearest-point search exceeded {cap} iterations",
                best=best, violation=viol,
            )
        scores = v @ x
        j = int(np.argmin(scores))
        if scores[j] >= x @ x - opt_tol:
            return result(iterations)
        if j in corral:
            # Floating-point stall: no progress is possible.
            return result(iterations)
        corral.append(j)
        weights = np.append(weights, 0.0)
        while True:
            iterations += 1
            if iterations > cap:
                best = result(iterations)
                viol = float(x @ x - np.min(v @ x))
                raise MinNormConvergenceError(
                    f"nearest-point search exceeded {cap} iterations",
                    best=best, violation=viol,
                )
            alpha = _affine_minimizer(v[corral])
            if np.min(alpha) >= -_WEIGHT_EPS:
                weights = np.maximum(alpha, 0.0)
                weights /= weights.sum()
                x = weights @ v[corral]
                break
            negative = alpha < -_WEIGHT_EPS
            denom = weights[negative] - alpha[negative]
            theta = float(np.min(weights[negative] / denom))
            theta = min(max(theta, 0.0), 1.0)
            weights = (1.0 - theta) * weights + theta * alpha
            weights[weights < _WEIGHT_EPS] = 0.0
            if not np.any(weights == 0.0):
                weights[int(np.argmin(weights))] = 0.0
            keep_mask = weights > 0.0
            corral = [c for c, k in zip(corral, keep_mask) if k]
            weights = weights[keep_mask]
            weights /= weights.sum()
            x = weights @ v[corral]


def _affine_minimizer(points: np.ndarray) -> np.ndarray:
    """Weights of the min-norm point of the affine hull (sum to one, any sign)."""
    k = points.shape[0]
    if k == 1:
        return np.array([1.0])
    gram = points @ points.T
    mat = np.zeros((k + 1, k + 1))
    mat[0, 1:] = 1.0
    mat[1:, 0] = 1.0
    mat[1:, 1:] = gram
    rhs = np.zeros(k + 1)
    rhs[0] = 1.0
    sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    return sol[1:]


def slope(instance: Instance, active: ActiveSet, x, opt_tol: float = 1e-10) -> float:
    """Minimal Euclidean norm over the subdifferential at x.

    Zero (up to opt_tol) exactly when some convex combination of the active
    gradients vanishes, which is the stationarity condition shared by every
    selection with this active set.
    """
    polytope = clarke_subdifferential(instance, active, x)
    return min_norm_point(polytope, opt_tol=opt_tol).norm
