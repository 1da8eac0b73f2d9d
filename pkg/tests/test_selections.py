import itertools
import random

import pytest

from helpers import abs_instance, brute_force_labelings, two_parabolas, uinstance, upoly
from polysel.errors import (
    DegenerateInstanceError,
    InconsistentValueError,
    SelectionSpecError,
)
from polysel.poly import Instance
from polysel.roots import vanishes_at
from polysel.selections import (
    MaxMinExpr,
    UnivariateSelection,
    active_set,
    active_set_exact,
    collapse_duplicates,
    decompose_1d,
    enumerate_selections_1d,
    eval_selection,
    materialize_maxmin,
    max_selection,
    min_selection,
    parse_selection_spec,
    resolve_selection,
)


def test_decompose_two_lines():
    dec = decompose_1d(abs_instance())
    assert dec.breakpoints == (0.0,)
    assert dec.points[0].classes == ((1, 2),)


def test_decompose_two_parabolas():
    dec = decompose_1d(two_parabolas())
    assert dec.breakpoints == pytest.approx([0.5], abs=1e-12)
    assert dec.points[0].classes == ((1, 2),)


def test_decompose_three_candidates():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))  # {x, -x, x^2}
    dec = decompose_1d(inst)
    assert dec.breakpoints == pytest.approx([-1.0, 0.0, 1.0], abs=1e-12)
    assert dec.points[0].classes == ((1,), (2, 3))
    assert dec.points[1].classes == ((1, 2, 3),)
    assert dec.points[2].classes == ((1, 3), (2,))


def test_duplicates_raise():
    inst = uinstance(2, (0, 0, 1), (0, 0, 1))
    with pytest.raises(DegenerateInstanceError):
        decompose_1d(inst)


def test_collapse_duplicates():
    inst = uinstance(2, (0, 0, 1), (0, 1), (0, 0, 1))
    collapsed, groups = collapse_duplicates(inst)
    assert collapsed.r == 2
    assert groups == [[1, 3], [2]]


def test_enumerate_two_lines():
    enum = enumerate_selections_1d(abs_instance())
    assert enum.total_count == 4
    assert not enum.truncated
    inst = abs_instance()
    # the four selections are x, -x, |x|, -|x|
    values = sorted(
        (eval_selection(s, inst, -2.0), eval_selection(s, inst, 2.0))
        for s in enum.selections
    )
    assert values == [(-2.0, -2.0), (-2.0, 2.0), (2.0, -2.0), (2.0, 2.0)]


def test_enumerate_two_parabolas():
    assert enumerate_selections_1d(two_parabolas()).total_count == 4


def test_enumerate_single_candidate():
    enum = enumerate_selections_1d(uinstance(3, (0, 0, 0, 1)))
    assert enum.total_count == 1
    assert len(enum.selections) == 1


def test_cap_semantics():
    enum = enumerate_selections_1d(abs_instance(), cap=2)
    assert enum.total_count == 4
    assert enum.truncated
    assert len(enum.selections) == 2


def _crossing_instance(k: int, seed: int) -> Instance:
    # f1 random of degree k, f2 = f1 - prod(x - t_i) with k distinct roots
    rng = random.Random(seed)
    ts = sorted(rng.uniform(-2, 2) for _ in range(k))
    assert all(b - a > 1e-3 for a, b in zip(ts, ts[1:]))
    f1 = upoly(*([rng.uniform(-1, 1) for _ in range(k)] + [1.0]))
    prod = upoly(1.0)
    for t in ts:
        prod = prod * upoly(-t, 1.0)
    f2 = f1 - prod
    return Instance(n=1, d=k, polys=(f1, f2))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_count_powers_of_two_vs_brute_force(k):
    inst = _crossing_instance(k, seed=100 + k)
    enum = enumerate_selections_1d(inst)
    dec = enum.selections[0].decomposition
    assert len(dec.breakpoints) == k
    assert enum.total_count == 2 ** (k + 1)
    assert enum.total_count == brute_force_labelings(inst, dec.breakpoints)


def test_max_and_min_labelings_present():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))
    enum = enumerate_selections_1d(inst)
    assert not enum.truncated
    assert enum.total_count == len(enum.selections)  # DP count == DFS listing
    labelings = {s.labels for s in enum.selections}
    assert len(labelings) == enum.total_count
    assert max_selection(inst).labels in labelings
    assert min_selection(inst).labels in labelings


def test_count_invariant_under_permutation():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))
    base = enumerate_selections_1d(inst).total_count
    for perm in itertools.permutations(inst.polys):
        permuted = Instance(n=1, d=2, polys=perm)
        assert enumerate_selections_1d(permuted).total_count == base


def test_enumerated_selections_are_continuous():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))
    enum = enumerate_selections_1d(inst)
    dec = enum.selections[0].decomposition
    analyzer = dec.analyzer
    reps = [c[0] for c in analyzer.coincidence_clusters()]
    for sel in enum.selections:
        for k, bp in enumerate(dec.points):
            left, right = sel.labels[k], sel.labels[k + 1]
            lval = inst.poly(left).eval([bp.value])
            rval = inst.poly(right).eval([bp.value])
            assert abs(lval - rval) <= 2e-12 + 2 * bp.width
            if left != right:
                diff = analyzer.diff(min(left, right), max(left, right))
                assert vanishes_at(diff, reps[k])


def test_eval_selection_piecewise():
    inst = abs_instance()
    dec = decompose_1d(inst)
    absval = UnivariateSelection(dec, (2, 1))
    assert eval_selection(absval, inst, -3.0) == 3.0
    assert eval_selection(absval, inst, 3.0) == 3.0
    assert eval_selection(absval, inst, 0.0) == 0.0


def test_breakpoint_value_is_forced():
    inst = two_parabolas()
    enum = enumerate_selections_1d(inst)
    at_bp = {eval_selection(s, inst, 0.5) for s in enum.selections}
    assert len(at_bp) == 1


def test_eval_maxmin_example():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))
    expr = MaxMinExpr.max_of(
        MaxMinExpr.min_of(MaxMinExpr.leaf(1), MaxMinExpr.leaf(2)),
        MaxMinExpr.leaf(3),
    )
    assert eval_selection(expr, inst, 2.0) == 4.0


def test_maxmin_value_is_always_a_candidate_value():
    inst = uinstance(2, (0, 1), (0, -1), (0.3, 0, 1))
    expr = MaxMinExpr.min_of(
        MaxMinExpr.max_of(MaxMinExpr.leaf(1), MaxMinExpr.leaf(3)),
        MaxMinExpr.leaf(2),
    )
    rng = random.Random(3)
    for _ in range(200):
        x = rng.uniform(-3, 3)
        v = eval_selection(expr, inst, x)
        assert v in {inst.poly(i).eval([x]) for i in (1, 2, 3)}


def test_active_set_examples():
    inst = abs_instance()
    assert active_set(inst, 0.0, [0.0], 0.0) == (1, 2)
    assert active_set(inst, 1.0, [1.0], 0.0) == (1,)
    inst2 = two_parabolas()
    assert active_set(inst2, 0.25, [0.5], 1e-12) == (1, 2)
    with pytest.raises(InconsistentValueError):
        active_set(inst, 5.0, [0.0], 1e-9)
    with pytest.raises(ValueError):
        active_set(inst, 0.0, [0.0], -1.0)


def test_active_set_exact():
    inst = abs_instance()
    dec = decompose_1d(inst)
    absval = UnivariateSelection(dec, (2, 1))
    assert active_set_exact(absval, 0.0) == (1, 2)
    assert active_set_exact(absval, 2.0) == (1,)
    assert active_set_exact(absval, -2.0) == (2,)


def test_selection_continuity_validation():
    inst = uinstance(2, (0, 1), (0, -1), (0.5, 0, 1))  # x^2 + 1/2 never meets x at 0
    dec = decompose_1d(inst)
    labels_bad = [3] + [1] * (dec.interval_count() - 1)
    with pytest.raises(SelectionSpecError):
        UnivariateSelection(dec, tuple(labels_bad))


def test_materialize_maxmin_matches_expression():
    inst = uinstance(2, (0, 1), (0, -1), (0, 0, 1))
    expr = MaxMinExpr.max_all(3)
    sel = materialize_maxmin(expr, inst)
    rng = random.Random(9)
    for _ in range(100):
        x = rng.uniform(-4, 4)
        assert eval_selection(sel, inst, x) == eval_selection(expr, inst, x)


def test_strict_minimizers_have_nonconstant_pieces():
    inst = _crossing_instance(3, seed=42)
    enum = enumerate_selections_1d(inst)
    xs = [(-3 + 0.002 * i) for i in range(3001)]
    for sel in enum.selections[:16]:
        vals = [eval_selection(sel, inst, x) for x in xs]
        for i in range(1, len(xs) - 1):
            if vals[i] < vals[i - 1] and vals[i] < vals[i + 1]:
                left = inst.poly(sel.label_at(xs[i] - 1e-6))
                right = inst.poly(sel.label_at(xs[i] + 1e-6))
                assert left.degree() >= 1 and right.degree() >= 1


def test_parse_selection_spec():
    assert parse_selection_spec("max", 3) == MaxMinExpr.max_all(3)
    assert parse_selection_spec("min", 2) == MaxMinExpr.min_all(2)
    assert parse_selection_spec("index:2", 3) == MaxMinExpr.leaf(2)
    expr = parse_selection_spec("max(min(1,2),3)", 3)
    assert expr.op == "max" and expr.children[0].op == "min"
    assert parse_selection_spec("piecewise1d:2,1", 2) == ("piecewise1d", (2, 1))
    for bad in ("", "index:0", "index:9", "max(", "max(1,4)", "foo", "max()"):
        with pytest.raises(SelectionSpecError):
            parse_selection_spec(bad, 3)


def test_resolve_selection_piecewise():
    inst = abs_instance()
    sel = resolve_selection("piecewise1d:2,1", inst)
    assert isinstance(sel, UnivariateSelection)
    assert eval_selection(sel, inst, -1.0) == 1.0
