"""Witness-level genericity audit plus exact univariate certificates.

The audit inspects a computed catalog: are active sets small enough, are
active gradients affinely independent, are multipliers strictly positive,
are weighted Hessians nondegenerate, are the stationary values pairwise
distinct, and does the catalog stay finite under the closed-form ceiling.
Failures always carry a concrete witness. For one variable an exact
companion certifies simple crossings and the absence of triple coincidences
through resultants and discriminants over the rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .bounds import connected_component_bound, critical_point_bound, lojasiewicz_exponent
from .critical import CriticalCatalog, _affine_independent, _second_order
from .errors import DimensionMismatchError, InstanceFormatError
from .poly import Instance, from_coeff_vector, monomial_count

__all__ = [
    "CheckResult",
    "GenericityReport",
    "PairCertificate",
    "TripleCertificate",
    "Certificate1D",
    "genericity_report",
    "certify_1d",
    "random_instance",
    "critical_point_bound",
    "connected_component_bound",
    "lojasiewicz_exponent",
]

STRICT_TOL_DEFAULT = 1e-8
VALUE_TOL_DEFAULT = 1e-9
AFFINE_TOL_DEFAULT = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witnesses: tuple[dict, ...]


@dataclass(frozen=True)
class GenericityReport:
    checks: tuple[CheckResult, ...]
    overall: bool
    strict_tol: float
    value_tol: float
    affine_tol: float
    selection_count: int | None = None

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failing(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.passed)


def genericity_report(instance: Instance, catalog: CriticalCatalog,
                      selections=None,
                      strict_tol: float = STRICT_TOL_DEFAULT,
                      value_tol: float = VALUE_TOL_DEFAULT,
                      affine_tol: float = AFFINE_TOL_DEFAULT) -> GenericityReport:
    """Audit a catalog computed on this instance.

    Thresholds are surfaced as arguments because the underlying conditions
    are exact-zero statements that floating point can only check against a
    declared cutoff.
    """
    pts = catalog.points
    checks = []

    witnesses = tuple(
        {"x": p.x, "J": p.J, "size": len(p.J)}
        for p in pts
        if len(p.J) > instance.n + 1
    )
    checks.append(CheckResult("active_set_bound", not witnesses, witnesses))

    witnesses = tuple(
        {"x": p.x, "J": p.J}
        for p in pts
        if len(p.J) > 1 and not _affine_independent(instance, p.J, list(p.x))
    )
    checks.append(CheckResult("affine_independence", not witnesses, witnesses))

    witnesses = tuple(
        {"x": p.x, "J": p.J, "mu": p.mu, "mu_min": min(p.mu)}
        for p in pts
        if min(p.mu) < strict_tol
    )
    checks.append(CheckResult("strict_complementarity", not witnesses, witnesses))

    witnesses = tuple(
        {"x": p.x, "J": p.J, "mu": p.mu}
        for p in pts
        if not _second_order(instance, list(p.x), p.J, p.mu)
    )
    checks.append(CheckResult("second_order", not witnesses, witnesses))

    value_wit = []
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            gap = abs(pts[i].value - pts[k].value)
            if gap <= value_tol:
                value_wit.append({
                    "x1": pts[i].x, "value1": pts[i].value,
                    "x2": pts[k].x, "value2": pts[k].value,
                    "gap": gap,
                })
    checks.append(CheckResult("distinct_critical_values", not value_wit, tuple(value_wit)))

    finite_wit = []
    if len(pts) > catalog.bound_b0:
        finite_wit.append({"count": len(pts), "bound": catalog.bound_b0})
    if catalog.non_isolated_suspected:
        finite_wit.append({"non_isolated_suspected": True})
    checks.append(CheckResult("finite_catalog_within_B0", not finite_wit, tuple(finite_wit)))

    overall = all(c.passed for c in checks)
    count = None
    if selections is not None:
        count = getattr(selections, "total_count", None)
        if count is None:
            count = len(selections)
    return GenericityReport(
        checks=tuple(checks),
        overall=overall,
        strict_tol=strict_tol,
        value_tol=value_tol,
        affine_tol=affine_tol,
        selection_count=count,
    )


@dataclass(frozen=True)
class PairCertificate:
    """Simple-crossing certificate for one pair of candidates.

    kind is "discriminant" for differences of degree two or more (nonzero
    means every crossing is simple) and "linear-coefficient" for affine
    differences (nonzero means the difference is nonconstant, hence a single
    transversal crossing). A zero value means "not certified", never "bad".
    """

    i: int
    j: int
    kind: str
    value: Fraction
    nonzero: bool


@dataclass(frozen=True)
class TripleCertificate:
    """Nonzero resultant rules out any common (even complex) coincidence of
    three candidates, so no point can have all three active."""

    i: int
    j: int
    k: int
    value: Fraction
    nonzero: bool


@dataclass(frozen=True)
class Certificate1D:
    pairs: tuple[PairCertificate, ...]
    triples: tuple[TripleCertificate, ...]

    @property
    def all_nonzero(self) -> bool:
        return all(c.nonzero for c in self.pairs) and all(
            c.nonzero for c in self.triples
        )


def certify_1d(instance: Instance) -> Certificate1D:
    """Exact rational certificates for a univariate family."""
    if instance.n != 1:
        raise DimensionMismatchError("exact certification needs n == 1")
    try:
        qs = [exact.from_floats(p.univariate_coeffs()) for p in instance.polys]
    except ValueError as exc:
        raise InstanceFormatError(
            "coefficients are not finite rationals; run the numeric "
            "genericity report instead"
        ) from exc
    r = instance.r
    pairs = []
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            d = exact.sub(qs[i - 1], qs[j - 1])
            if exact.degree(d) >= 2:
                val = exact.discriminant(d)
                pairs.append(PairCertificate(i, j, "discriminant", val, val != 0))
            else:
                # Affine difference: the lone maximal minor of its Jacobian
                # is the x-coefficient itself.
                val = d[1] if exact.degree(d) >= 1 else Fraction(0)
                pairs.append(PairCertificate(i, j, "linear-coefficient", val, val != 0))
    triples = []
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for k in range(j + 1, r + 1):
                a = exact.sub(qs[i - 1], qs[j - 1])
                b = exact.sub(qs[i - 1], qs[k - 1])
                val = exact.sylvester_resultant(a, b)
                triples.append(TripleCertificate(i, j, k, val, val != 0))
    return Certificate1D(pairs=tuple(pairs), triples=tuple(triples))


def random_instance(n: int, d: int, r: int, seed: int) -> Instance:
    """Reproducible random family: coefficients i.i.d. uniform on [-1, 1].

    Coefficients are drawn per polynomial in the canonical basis order from
    the standard library generator, so a given seed yields bit-identical
    instances on every platform.
    """
    if n < 1 or d < 0 or r < 1:
        raise ValueError("need n >= 1, d >= 0, r >= 1")
    rng = random.Random(seed)
    m = monomial_count(n, d)
    polys = []
    for _ in range(r):
        coeffs = [rng.uniform(-1.0, 1.0) for _ in range(m)]
        polys.append(from_coeff_vector(coeffs, n, d))
    return Instance(n=n, d=d, polys=tuple(polys))
