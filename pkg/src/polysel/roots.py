"""Certified real-root isolation for univariate polynomials.

Roots are bracketed by Sturm sign counts over exact rational intervals and
then narrowed by bisection. A bisection point that happens to be a root is
recognized exactly, giving a zero-width enclosure. Multiplicities come from
a square-free decomposition done up front.

Enclosure invariant: for an inexact enclosure (low, high) the underlying
square-free factor is nonzero at both endpoints and has exactly one root
strictly between them. Several exact queries below rely on this.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import ZeroPolynomialError
from .exact import QPoly
from .poly import Polynomial

DEFAULT_WIDTH = 1e-12
_MAX_REFINE = 400


class IsolatedRoot:
    """One real root of a square-free rational polynomial.

    Mutable narrowing state with exact bookkeeping; the root itself never
    changes, only the enclosure shrinks.
    """

    __slots__ = ("poly", "chain", "low", "high", "exact_point")

    def __init__(self, poly: QPoly, chain, low: Fraction, high: Fraction,
                 exact_point: Fraction | None = None):
        self.poly = poly
        self.chain = chain
        self.low = low
        self.high = high
        self.exact_point = exact_point

    @property
    def is_exact(self) -> bool:
        return self.exact_point is not None

    def width(self) -> Fraction:
        if self.is_exact:
            return Fraction(0)
        return self.high - self.low

    def midpoint(self) -> Fraction:
        if self.is_exact:
            return self.exact_point
        return (self.low + self.high) / 2

    def refine_step(self):
        if self.is_exact:
            return
        mid = (self.low + self.high) / 2
        val = exact.eval_at(self.poly, mid)
        if val == 0:
            self.exact_point = mid
            self.low = mid
            self.high = mid
            return
        if exact.count_roots_between(self.chain, self.low, mid) == 1:
            self.high = mid
        else:
            self.low = mid

    def refine_below(self, width: Fraction):
        steps = 0
        while not self.is_exact and self.high - self.low > width:
            self.refine_step()
            steps += 1
            if steps > _MAX_REFINE:
                raise RuntimeError("root refinement failed to converge")

    def contains(self, x: Fraction) -> bool:
        if self.is_exact:
            return x == self.exact_point
        return self.low < x < self.high

    def overlaps(self, other: "IsolatedRoot") -> bool:
        lo = max(self.low, other.low)
        hi = min(self.high, other.high)
        if self.is_exact and other.is_exact:
            return self.exact_point == other.exact_point
        if self.is_exact:
            return other.contains(self.exact_point)
        if other.is_exact:
            return self.contains(other.exact_point)
        return lo < hi

    def float_value(self) -> float:
        if self.is_exact:
            return float(self.exact_point)
        return _polish_float(self.poly, self.low, self.high)


def isolate_squarefree(q: QPoly) -> list[IsolatedRoot]:
    """Disjoint enclosures for every real root of a square-free polynomial."""
    if exact.is_zero(q):
        raise ZeroPolynomialError("cannot isolate roots of the zero polynomial")
    if exact.degree(q) == 0:
        return []
    chain = exact.sturm_chain(q)
    bound = exact.cauchy_bound(q)
    total = exact.count_roots_between(chain, -bound, bound)
    roots: list[IsolatedRoot] = []
    stack = [(-bound, bound, total)]
    while stack:
        lo, hi, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            roots.append(IsolatedRoot(q, chain, lo, hi))
            continue
        mid = _split_point(q, lo, hi)
        if mid is None:
            # All candidate split points are roots; cannot happen for a
            # square-free polynomial with more candidates than roots.
            raise RuntimeError("failed to find a root-free split point")
        left = exact.count_roots_between(chain, lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, count - left))
    roots.sort(key=lambda r: (r.low, r.high))
    return roots


def _split_point(q: QPoly, lo: Fraction, hi: Fraction) -> Fraction | None:
    span = hi - lo
    for denom in (2, 4, 8, 16, 32):
        for num in range(1, denom, 2):
            cand = lo + span * Fraction(num, denom)
            if exact.eval_at(q, cand) != 0:
                return cand
    return None


def _polish_float(q: QPoly, low: Fraction, high: Fraction) -> float:
    x = float((low + high) / 2)
    lo_f, hi_f = float(low), float(high)
    coeffs = [float(c) for c in q]
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    for _ in range(4):
        fx = _horner(coeffs, x)
        dfx = _horner(deriv, x)
        if dfx == 0.0:
            break
        step = x - fx / dfx
        if not (lo_f - 1e-9 <= step <= hi_f + 1e-9):
            break
        x = step
    return min(max(x, lo_f), hi_f) if lo_f <= hi_f else x


def _horner(coeffs_ascending, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs_ascending):
        acc = acc * x + c
    return acc


def separate(a: IsolatedRoot, b: IsolatedRoot):
    """Shrink two enclosures of distinct roots until they are disjoint."""
    steps = 0
    while a.overlaps(b):
        a.refine_step()
        b.refine_step()
        steps += 1
        if steps > _MAX_REFINE:
            raise RuntimeError("failed to separate distinct roots")


def same_root(a: IsolatedRoot, b: IsolatedRoot) -> bool:
    """Exact test whether two enclosures (over possibly different
    polynomials) capture the same real number."""
    if not a.overlaps(b):
        return False
    if a.is_exact and b.is_exact:
        return a.exact_point == b.exact_point
    if a.is_exact:
        return exact.eval_at(b.poly, a.exact_point) == 0
    if b.is_exact:
        return exact.eval_at(a.poly, b.exact_point) == 0
    g = exact.gcd_poly(a.poly, b.poly)
    if exact.degree(g) < 1:
        return False
    lo = max(a.low, b.low)
    hi = min(a.high, b.high)
    chain = exact.sturm_chain(g)
    return exact.count_roots_between(chain, lo, hi) >= 1


def vanishes_at(q: QPoly, root: IsolatedRoot) -> bool:
    """Does q vanish exactly at the root captured by the enclosure?"""
    if exact.is_zero(q):
        return True
    if root.is_exact:
        return exact.eval_at(q, root.exact_point) == 0
    g = exact.gcd_poly(root.poly, exact.squarefree(q))
    if exact.degree(g) < 1:
        return False
    chain = exact.sturm_chain(g)
    return exact.count_roots_between(chain, root.low, root.high) >= 1


def sign_at(q: QPoly, root: IsolatedRoot) -> int:
    """Exact sign of q at the root (0 when q vanishes there)."""
    if vanishes_at(q, root):
        return 0
    if root.is_exact:
        return exact.sign(exact.eval_at(q, root.exact_point))
    qsf = exact.squarefree(q)
    chain = exact.sturm_chain(qsf)
    steps = 0
    while True:
        lo_ok = exact.eval_at(q, root.low) != 0
        hi_ok = exact.eval_at(q, root.high) != 0
        if lo_ok and hi_ok:
            inside = exact.count_roots_between(chain, root.low, root.high)
            if inside == 0:
                return exact.sign(exact.eval_at(q, root.low))
        root.refine_step()
        if root.is_exact:
            return exact.sign(exact.eval_at(q, root.exact_point))
        steps += 1
        if steps > _MAX_REFINE:
            raise RuntimeError("sign determination failed to converge")


@dataclass(frozen=True)
class RootEnclosure:
    """A certified real root: float view plus exact bracket."""

    value: float
    low: Fraction
    high: Fraction
    multiplicity: int
    exact: bool

    @property
    def width(self) -> float:
        return float(self.high - self.low)


@dataclass(frozen=True)
class IntervalRoots:
    """All real roots found in a query interval, strictly increasing."""

    roots: tuple[RootEnclosure, ...]

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def values(self) -> list[float]:
        return [r.value for r in self.roots]


def real_roots(p: Polynomial, interval: tuple[float, float] | None = None,
               width: float = DEFAULT_WIDTH) -> IntervalRoots:
    """Isolate every real root of a univariate polynomial.

    interval restricts the search to a closed [lo, hi] window; None scans the
    whole line using a Cauchy bracket. Each returned enclosure is narrower
    than `width` (or exact), and multiple roots are reported once with their
    multiplicity.
    """
    q = exact.from_floats(p.univariate_coeffs())
    return interval_roots_of(q, interval=interval, width=width)


def interval_roots_of(q: QPoly, interval: tuple[float, float] | None = None,
                      width: float = DEFAULT_WIDTH) -> IntervalRoots:
    if exact.is_zero(q):
        raise ZeroPolynomialError(
            "the zero polynomial vanishes everywhere; caller must handle "
            "identical-polynomial degeneracy"
        )
    target = Fraction(width) if width > 0 else Fraction(DEFAULT_WIDTH)
    found: list[tuple[IsolatedRoot, int]] = []
    for factor, mult in exact.yun(q):
        for root in isolate_squarefree(factor):
            root.refine_below(target)
            found.append((root, mult))
    # Distinct roots of coprime factors may still have overlapping
    # enclosures; narrow until the ordering is certain.
    for i in range(len(found)):
        for j in range(i + 1, len(found)):
            a, b = found[i][0], found[j][0]
            if a.poly is not b.poly and a.overlaps(b):
                separate(a, b)
    found.sort(key=lambda item: (item[0].low, item[0].high))
    if interval is not None:
        lo, hi = Fraction(float(interval[0])), Fraction(float(interval[1]))
        found = [item for item in found if _root_in_window(item[0], lo, hi)]
    out = tuple(
        RootEnclosure(
            value=root.float_value(),
            low=root.low,
            high=root.high,
            multiplicity=mult,
            exact=root.is_exact,
        )
        for root, mult in found
    )
    return IntervalRoots(roots=out)


def _root_in_window(root: IsolatedRoot, lo: Fraction, hi: Fraction) -> bool:
    for bound in (lo, hi):
        if not root.is_exact and root.contains(bound):
            if exact.eval_at(root.poly, bound) == 0:
                root.exact_point = bound
                root.low = bound
                root.high = bound
            else:
                steps = 0
                while root.contains(bound) and not root.is_exact:
                    root.refine_step()
                    steps += 1
                    if steps > _MAX_REFINE:
                        raise RuntimeError("window filtering failed")
    if root.is_exact:
        return lo <= root.exact_point <= hi
    return root.low >= lo and root.high <= hi
