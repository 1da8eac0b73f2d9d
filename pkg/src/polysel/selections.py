"""Continuous selections of a polynomial family.

For one variable the coincidence set of the family is finite, so a selection
is just a label per interval between consecutive coincidence points, subject
to matching values where intervals meet. This module computes that
decomposition with exact certificates, enumerates every compatible labeling,
and evaluates selections given either as labelings or as max-min formula
trees (the only general-dimension representation supported).

Indices are 1-based everywhere a caller sees them, matching report output.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import exact
from .errors import (
    DegenerateInstanceError,
    DimensionMismatchError,
    InconsistentValueError,
    SelectionSpecError,
)
from .poly import Instance, Polynomial
from .roots import (
    DEFAULT_WIDTH,
    IsolatedRoot,
    isolate_squarefree,
    same_root,
    separate,
    sign_at,
    vanishes_at,
)

ActiveSet = tuple[int, ...]


@dataclass(frozen=True)
class Breakpoint:
    """A coincidence point: where at least two candidates take equal values.

    classes partitions {1..r} by value at the point; it always lists every
    index, singletons included. low/high is the exact enclosure certificate.
    """

    value: float
    classes: tuple[ActiveSet, ...]
    low: Fraction
    high: Fraction
    exact: bool

    def class_of(self, index: int) -> ActiveSet:
        for cls in self.classes:
            if index in cls:
                return cls
        raise ValueError(f"index {index} outside the partition")

    @property
    def width(self) -> float:
        return float(self.high - self.low)


@dataclass(frozen=True)
class Decomposition1D:
    """Sorted coincidence points of a univariate family."""

    r: int
    points: tuple[Breakpoint, ...]
    analyzer: "ExactUnivariateAnalyzer" = field(compare=False, repr=False)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(bp.value for bp in self.points)

    @property
    def coincidence_classes(self) -> tuple[tuple[ActiveSet, ...], ...]:
        return tuple(bp.classes for bp in self.points)

    def interval_count(self) -> int:
        return len(self.points) + 1

    def interval_of(self, x: float) -> int:
        return bisect.bisect_right(self.breakpoints, x)

    def breakpoint_hit(self, x: float) -> Breakpoint | None:
        """The coincidence point whose certified enclosure contains x."""
        for bp in self.points:
            if bp.exact:
                if x == bp.value:
                    return bp
            elif float(bp.low) <= x <= float(bp.high) or x == bp.value:
                return bp
        return None

    def representative_points(self) -> list[float]:
        """One sample inside each open interval, never on a breakpoint."""
        cuts = self.breakpoints
        if not cuts:
            return [0.0]
        reps = [cuts[0] - 1.0]
        for a, b in zip(cuts, cuts[1:]):
            reps.append((a + b) / 2.0)
        reps.append(cuts[-1] + 1.0)
        return reps


class ExactUnivariateAnalyzer:
    """Exact per-instance machinery for one-variable families.

    Memoizes the pairwise differences, their isolated roots, and derivative
    roots, and answers coincidence questions with rational certificates.
    """

    def __init__(self, instance: Instance, width: float = DEFAULT_WIDTH):
        if instance.n != 1:
            raise DimensionMismatchError("exact analysis needs n == 1")
        self.instance = instance
        self.width = Fraction(width)
        self.q = [exact.from_floats(p.univariate_coeffs()) for p in instance.polys]
        self._diffs: dict[tuple[int, int], list] = {}
        self._pair_roots: dict[tuple[int, int], list[IsolatedRoot]] = {}
        self._deriv_roots: dict[int, list[IsolatedRoot]] = {}
        self._clusters: list[tuple[IsolatedRoot, list[tuple[int, int]]]] | None = None

    def diff(self, i: int, j: int) -> list:
        """Exact coefficients of f_i - f_j (1-based, i < j)."""
        if i > j:
            i, j = j, i
        key = (i, j)
        if key not in self._diffs:
            self._diffs[key] = exact.sub(self.q[i - 1], self.q[j - 1])
        return self._diffs[key]

    def duplicate_pairs(self) -> list[tuple[int, int]]:
        r = self.instance.r
        return [
            (i, j)
            for i in range(1, r + 1)
            for j in range(i + 1, r + 1)
            if exact.is_zero(self.diff(i, j))
        ]

    def pair_roots(self, i: int, j: int) -> list[IsolatedRoot]:
        if i > j:
            i, j = j, i
        key = (i, j)
        if key not in self._pair_roots:
            d = self.diff(i, j)
            if exact.is_zero(d):
                raise DegenerateInstanceError(
                    f"candidates {i} and {j} are identical; collapse duplicates"
                )
            roots = []
            if exact.degree(d) >= 1:
                roots = isolate_squarefree(exact.squarefree(d))
                for root in roots:
                    root.refine_below(self.width)
            self._pair_roots[key] = roots
        return self._pair_roots[key]

    def derivative_roots(self, j: int) -> list[IsolatedRoot]:
        """Roots of f_j'; raises ZeroPolynomialError for constant f_j."""
        if j not in self._deriv_roots:
            dq = exact.derivative(self.q[j - 1])
            if exact.is_zero(dq):
                from .errors import ZeroPolynomialError

                raise ZeroPolynomialError(
                    f"candidate {j} is constant; its derivative has no isolated roots"
                )
            roots = []
            if exact.degree(dq) >= 1:
                roots = isolate_squarefree(exact.squarefree(dq))
                for root in roots:
                    root.refine_below(self.width)
            self._deriv_roots[j] = roots
        return self._deriv_roots[j]

    def derivative_sign_at(self, j: int, root: IsolatedRoot) -> int:
        return sign_at(exact.derivative(self.q[j - 1]), root)

    def coincides_at(self, i: int, j: int, root: IsolatedRoot) -> bool:
        """Exact test: do candidates i and j take equal values at the root?"""
        if i == j:
            return True
        return vanishes_at(self.diff(min(i, j), max(i, j)), root)

    def active_class_at(self, anchor: int, root: IsolatedRoot) -> ActiveSet:
        """All indices whose value at the root equals the anchor's value."""
        hits = [
            i
            for i in range(1, self.instance.r + 1)
            if self.coincides_at(anchor, i, root)
        ]
        return tuple(sorted(hits))

    def partition_at(self, root: IsolatedRoot) -> tuple[ActiveSet, ...]:
        r = self.instance.r
        parent = list(range(r + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(1, r + 1):
            for j in range(i + 1, r + 1):
                if self.coincides_at(i, j, root):
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(1, r + 1):
            groups.setdefault(find(i), []).append(i)
        classes = sorted((tuple(sorted(g)) for g in groups.values()), key=lambda c: c[0])
        return tuple(classes)

    def coincidence_clusters(self) -> list[tuple[IsolatedRoot, list[tuple[int, int]]]]:
        """All pairwise-coincidence points, merged exactly across pairs."""
        if self._clusters is None:
            items: list[tuple[IsolatedRoot, tuple[int, int]]] = []
            r = self.instance.r
            for i in range(1, r + 1):
                for j in range(i + 1, r + 1):
                    for root in self.pair_roots(i, j):
                        items.append((root, (i, j)))
            items.sort(key=lambda t: t[0].float_value())
            clusters: list[tuple[IsolatedRoot, list[tuple[int, int]]]] = []
            for root, pair in items:
                placed = False
                for rep, pairs in clusters:
                    if rep.overlaps(root):
                        if same_root(rep, root):
                            pairs.append(pair)
                            placed = True
                            break
                        separate(rep, root)
                if not placed:
                    clusters.append((root, [pair]))
            clusters.sort(key=lambda t: (t[0].low, t[0].high))
            self._clusters = clusters
        return self._clusters


def collapse_duplicates(instance: Instance) -> tuple[Instance, list[list[int]]]:
    """Keep one representative per identical polynomial.

    Returns the collapsed instance plus the duplicate groups as 1-based
    index lists in order of first occurrence.
    """
    seen: dict[tuple, int] = {}
    groups: list[list[int]] = []
    keep: list[Polynomial] = []
    for idx, p in enumerate(instance.polys, start=1):
        key = p.terms
        if key in seen:
            groups[seen[key]].append(idx)
        else:
            seen[key] = len(groups)
            groups.append([idx])
            keep.append(p)
    collapsed = Instance(n=instance.n, d=instance.d, polys=tuple(keep))
    return collapsed, groups


def decompose_1d(instance: Instance, width: float = DEFAULT_WIDTH) -> Decomposition1D:
    """Certified coincidence decomposition of a univariate family."""
    analyzer = ExactUnivariateAnalyzer(instance, width=width)
    dups = analyzer.duplicate_pairs()
    if dups:
        raise DegenerateInstanceError(
            f"identical polynomials at index pairs {dups}; collapse duplicates first"
        )
    points = []
    for rep, _pairs in analyzer.coincidence_clusters():
        classes = analyzer.partition_at(rep)
        points.append(
            Breakpoint(
                value=rep.float_value(),
                classes=classes,
                low=rep.low,
                high=rep.high,
                exact=rep.is_exact,
            )
        )
    return Decomposition1D(r=instance.r, points=tuple(points), analyzer=analyzer)


@dataclass(frozen=True)
class UnivariateSelection:
    """A selection given as one candidate index per interval."""

    decomposition: Decomposition1D
    labels: tuple[int, ...]

    def __post_init__(self):
        dec = self.decomposition
        if len(self.labels) != dec.interval_count():
            raise SelectionSpecError(
                f"need {dec.interval_count()} labels, got {len(self.labels)}"
            )
        for lab in self.labels:
            if not 1 <= lab <= dec.r:
                raise SelectionSpecError(f"label {lab} outside 1..{dec.r}")
        for k, bp in enumerate(dec.points):
            left, right = self.labels[k], self.labels[k + 1]
            if right not in bp.class_of(left):
                raise SelectionSpecError(
                    f"labels {left}->{right} disagree at breakpoint {bp.value!r}"
                )

    def label_at(self, x: float) -> int:
        return self.labels[self.decomposition.interval_of(x)]

    def value_at(self, instance: Instance, x: float) -> float:
        return instance.poly(self.label_at(x)).eval([x])


@dataclass(frozen=True)
class MaxMinExpr:
    """Formula tree of max and min nodes over candidate indices."""

    op: str
    index: int = 0
    children: tuple["MaxMinExpr", ...] = ()

    def __post_init__(self):
        if self.op == "leaf":
            if self.index < 1:
                raise SelectionSpecError("leaf index must be 1-based positive")
            if self.children:
                raise SelectionSpecError("leaf nodes take no children")
        elif self.op in ("max", "min"):
            if not self.children:
                raise SelectionSpecError(f"{self.op} node needs children")
        else:
            raise SelectionSpecError(f"unknown node kind {self.op!r}")

    @classmethod
    def leaf(cls, index: int) -> "MaxMinExpr":
        return cls(op="leaf", index=index)

    @classmethod
    def max_of(cls, *children: "MaxMinExpr") -> "MaxMinExpr":
        return cls(op="max", children=tuple(children))

    @classmethod
    def min_of(cls, *children: "MaxMinExpr") -> "MaxMinExpr":
        return cls(op="min", children=tuple(children))

    @classmethod
    def max_all(cls, r: int) -> "MaxMinExpr":
        return cls.max_of(*(cls.leaf(i) for i in range(1, r + 1)))

    @classmethod
    def min_all(cls, r: int) -> "MaxMinExpr":
        return cls.min_of(*(cls.leaf(i) for i in range(1, r + 1)))

    def indices(self) -> frozenset[int]:
        if self.op == "leaf":
            return frozenset((self.index,))
        out: frozenset[int] = frozenset()
        for child in self.children:
            out |= child.indices()
        return out

    def eval(self, instance: Instance, point: Sequence[float]) -> float:
        if self.op == "leaf":
            if self.index > instance.r:
                raise SelectionSpecError(
                    f"leaf index {self.index} exceeds r={instance.r}"
                )
            return instance.poly(self.index).eval(point)
        vals = [child.eval(instance, point) for child in self.children]
        return max(vals) if self.op == "max" else min(vals)

    def describe(self) -> str:
        if self.op == "leaf":
            return str(self.index)
        inner = ",".join(child.describe() for child in self.children)
        return f"{self.op}({inner})"


SelectionLike = Union[UnivariateSelection, MaxMinExpr]


@dataclass(frozen=True)
class SelectionEnumeration:
    """Result of exhaustive labeling enumeration, possibly truncated."""

    selections: tuple[UnivariateSelection, ...]
    total_count: int
    truncated: bool
    cap: int


def enumerate_selections_1d(instance: Instance, cap: int = 10000) -> SelectionEnumeration:
    """Every continuous selection of a univariate family.

    The exact total is always reported; the listed selections are the first
    `cap` in lexicographic label order.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    dec = decompose_1d(instance)
    r = instance.r
    cuts = dec.points
    # class index per breakpoint, per label
    class_ids: list[dict[int, int]] = []
    for bp in cuts:
        ids = {}
        for pos, cls in enumerate(bp.classes):
            for i in cls:
                ids[i] = pos
        class_ids.append(ids)
    # exact count by dynamic programming over intervals
    counts = [1] * (r + 1)  # 1-based labels
    counts[0] = 0
    for ids in class_ids:
        sums: dict[int, int] = {}
        for lab in range(1, r + 1):
            sums[ids[lab]] = sums.get(ids[lab], 0) + counts[lab]
        counts = [0] + [sums[ids[lab]] for lab in range(1, r + 1)]
    total = sum(counts)
    # lexicographic depth-first listing up to the cap
    found: list[tuple[int, ...]] = []
    m = dec.interval_count()
    stack: list[tuple[int, ...]] = [(lab,) for lab in range(r, 0, -1)]
    while stack and len(found) < cap:
        prefix = stack.pop()
        if len(prefix) == m:
            found.append(prefix)
            continue
        ids = class_ids[len(prefix) - 1]
        prev = prefix[-1]
        for lab in range(r, 0, -1):
            if ids[lab] == ids[prev]:
                stack.append(prefix + (lab,))
    selections = tuple(UnivariateSelection(dec, labels) for labels in found)
    return SelectionEnumeration(
        selections=selections,
        total_count=total,
        truncated=total > len(selections),
        cap=cap,
    )


def _as_point(x, n: int) -> list[float]:
    if isinstance(x, (int, float)):
        if n != 1:
            raise DimensionMismatchError("scalar point given for n > 1")
        return [float(x)]
    pt = [float(v) for v in x]
    if len(pt) != n:
        raise DimensionMismatchError(f"point has {len(pt)} coordinates, need {n}")
    return pt


def eval_selection(sel: SelectionLike, instance: Instance, x) -> float:
    """Value of the selection at a point.

    At a coincidence point the value is forced: every compatible labeling
    agrees there, so which adjacent label is used does not matter.
    """
    point = _as_point(x, instance.n)
    if isinstance(sel, MaxMinExpr):
        return sel.eval(instance, point)
    if instance.n != 1:
        raise DimensionMismatchError("piecewise selections are univariate")
    return sel.value_at(instance, point[0])


def active_set(instance: Instance, value: float, x, tol: float) -> ActiveSet:
    """Indices whose value at x matches the given value within tol."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    point = _as_point(x, instance.n)
    hits = tuple(
        i
        for i in range(1, instance.r + 1)
        if abs(instance.poly(i).eval(point) - value) <= tol
    )
    if not hits:
        raise InconsistentValueError(
            f"value {value!r} is not a selection value at {point!r} within {tol!r}"
        )
    return hits


def active_set_exact(sel: UnivariateSelection, x: float) -> ActiveSet:
    """Active indices of a piecewise selection from certified enclosures.

    Away from coincidence points this is the singleton interval label; at a
    coincidence point it is the whole value class the selection runs through.
    """
    dec = sel.decomposition
    bp = dec.breakpoint_hit(x)
    if bp is None:
        return (sel.label_at(x),)
    k = dec.points.index(bp)
    return bp.class_of(sel.labels[k])


def materialize_maxmin(expr: MaxMinExpr, instance: Instance,
                       dec: Decomposition1D | None = None) -> UnivariateSelection:
    """Convert a formula tree into interval labels (univariate only)."""
    if instance.n != 1:
        raise DimensionMismatchError("materialization needs n == 1")
    bad = [i for i in expr.indices() if i > instance.r]
    if bad:
        raise SelectionSpecError(f"leaf indices {bad} exceed r={instance.r}")
    if dec is None:
        dec = decompose_1d(instance)
    labels = []
    for rep in dec.representative_points():
        target = expr.eval(instance, [rep])
        values = [instance.poly(i).eval([rep]) for i in range(1, instance.r + 1)]
        label = min(range(instance.r), key=lambda k: abs(values[k] - target)) + 1
        labels.append(label)
    return UnivariateSelection(dec, tuple(labels))


def max_selection(instance: Instance, dec: Decomposition1D | None = None) -> UnivariateSelection:
    return materialize_maxmin(MaxMinExpr.max_all(instance.r), instance, dec)


def min_selection(instance: Instance, dec: Decomposition1D | None = None) -> UnivariateSelection:
    return materialize_maxmin(MaxMinExpr.min_all(instance.r), instance, dec)


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "(),":
            out.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise SelectionSpecError(f"unexpected character {ch!r} in selection spec")
    return out


def _parse_expr(tokens: list[str], pos: int) -> tuple[MaxMinExpr, int]:
    if pos >= len(tokens):
        raise SelectionSpecError("truncated selection expression")
    tok = tokens[pos]
    if tok.isdigit():
        return MaxMinExpr.leaf(int(tok)), pos + 1
    if tok in ("max", "min"):
        if pos + 1 >= len(tokens) or tokens[pos + 1] != "(":
            raise SelectionSpecError(f"{tok} needs a parenthesized argument list")
        pos += 2
        children = []
        while True:
            child, pos = _parse_expr(tokens, pos)
            children.append(child)
            if pos >= len(tokens):
                raise SelectionSpecError("missing closing parenthesis")
            if tokens[pos] == ",":
                pos += 1
                continue
            if tokens[pos] == ")":
                pos += 1
                break
            raise SelectionSpecError(f"unexpected token {tokens[pos]!r}")
        ctor = MaxMinExpr.max_of if tok == "max" else MaxMinExpr.min_of
        return ctor(*children), pos
    raise SelectionSpecError(f"unexpected token {tok!r}")


def parse_selection_spec(text: str, r: int):
    """Parse the CLI selection grammar.

    Accepts "max", "min", "index:i", a nested max-min expression such as
    "max(min(1,2),3)", or "piecewise1d:l1,l2,..." with 1-based labels.
    Returns a MaxMinExpr, or ("piecewise1d", labels) for explicit labelings.
    """
    text = text.strip()
    if not text:
        raise SelectionSpecError("empty selection spec")
    if text == "max":
        return MaxMinExpr.max_all(r)
    if text == "min":
        return MaxMinExpr.min_all(r)
    if text.startswith("index:"):
        try:
            idx = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise SelectionSpecError(f"bad index in {text!r}") from exc
        if not 1 <= idx <= r:
            raise SelectionSpecError(f"index {idx} outside 1..{r}")
        return MaxMinExpr.leaf(idx)
    if text.startswith("piecewise1d:"):
        body = text.split(":", 1)[1]
        try:
            labels = tuple(int(part) for part in body.split(",") if part.strip())
        except ValueError as exc:
            raise SelectionSpecError(f"bad labels in {text!r}") from exc
        if not labels:
            raise SelectionSpecError("piecewise1d needs at least one label")
        return ("piecewise1d", labels)
    tokens = _tokenize(text)
    expr, pos = _parse_expr(tokens, 0)
    if pos != len(tokens):
        raise SelectionSpecError(f"trailing tokens in selection spec {text!r}")
    bad = [i for i in expr.indices() if i > r]
    if bad:
        raise SelectionSpecError(f"leaf indices {bad} exceed r={r}")
    return expr


def resolve_selection(spec: str, instance: Instance,
                      dec: Decomposition1D | None = None) -> SelectionLike:
    """Turn a textual spec into a selection object bound to the instance."""
    parsed = parse_selection_spec(spec, instance.r)
    if isinstance(parsed, tuple) and parsed[0] == "piecewise1d":
        if instance.n != 1:
            raise SelectionSpecError("piecewise1d selections need n == 1")
        if dec is None:
            dec = decompose_1d(instance)
        return UnivariateSelection(dec, parsed[1])
    return parsed
