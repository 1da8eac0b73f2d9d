"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one `[acceptance] criterion N (...): PASS|FAIL` line (run
pytest with -s or check captured output). Expected values marked as derived
are recomputed here by independent oracles, never copied from library
output.
"""

import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from helpers import (
    abs_instance,
    brute_force_labelings,
    simplex_grid_min_norm,
    two_parabolas,
    uinstance,
)
from polysel import io
from polysel.bounds import (
    connected_component_bound,
    critical_point_bound,
    lojasiewicz_exponent,
)
from polysel.cli import main
from polysel.critical import all_critical_points
from polysel.genericity import genericity_report, random_instance
from polysel.growth import (
    coercivity_check,
    dist_to_S,
    error_bound_check,
    sublevel_set_1d,
    verify_loja,
)
from polysel.selections import MaxMinExpr, enumerate_selections_1d, eval_selection
from polysel.subdiff import min_norm_point
from test_genericity import (
    bigint_component_bound,
    bigint_critical_bound,
    bigint_loja,
)
from test_selections import _crossing_instance


@contextmanager
def criterion(num, name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {num} ({name}): FAIL")
        raise
    print(f"[acceptance] criterion {num} ({name}): PASS")


def test_criterion_1_selection_enumeration():
    with criterion(1, "selection enumeration"):
        t0 = time.perf_counter()
        enum = enumerate_selections_1d(abs_instance())
        assert enum.total_count == 4
        assert time.perf_counter() - t0 < 1.0
        for k in range(1, 6):
            inst = _crossing_instance(k, seed=100 + k)
            t0 = time.perf_counter()
            enum = enumerate_selections_1d(inst)
            elapsed = time.perf_counter() - t0
            dec = enum.selections[0].decomposition
            assert len(dec.breakpoints) == k
            assert enum.total_count == 2 ** (k + 1)
            assert enum.total_count == brute_force_labelings(inst, dec.breakpoints)
            assert elapsed < 1.0


def test_criterion_2_critical_catalog_exactness():
    with criterion(2, "critical catalog exactness (n=1)"):
        cat = all_critical_points(two_parabolas())
        xs = [p.x[0] for p in cat.points]
        vals = [p.value for p in cat.points]
        assert np.allclose(xs, [0.0, 0.5, 1.0], atol=1e-8)
        assert np.allclose(vals, [0.0, 0.25, 0.0], atol=1e-8)
        crossing = [p for p in cat.points if p.J == (1, 2)][0]
        assert np.allclose(crossing.mu, [0.5, 0.5], atol=1e-8)

        cat2 = all_critical_points(two_parabolas(shift=0.1))
        vals2 = sorted(p.value for p in cat2.points)
        assert np.allclose(vals2, [0.0, 0.1, 0.3025], atol=1e-8)
        gaps = [b - a for a, b in zip(vals2, vals2[1:])]
        assert all(g > 1e-8 for g in gaps)


def test_criterion_3_min_norm_oracle_equivalence():
    with criterion(3, "min-norm oracle equivalence"):
        rng = random.Random(2718)
        for trial in range(50):
            m = (trial % 4) + 1
            n = (trial % 3) + 1
            vertices = np.array(
                [[rng.uniform(-0.1, 0.1) for _ in range(n)] for _ in range(m)]
            )
            if trial % 2:
                vertices[:, 0] += 0.15  # keep some hulls away from the origin
            result = min_norm_point(vertices)
            oracle = simplex_grid_min_norm(vertices, step=1e-3)
            assert abs(result.norm - oracle) <= 1e-3, f"trial {trial}"


def test_criterion_4_bound_formulas():
    with criterion(4, "bound formulas"):
        assert critical_point_bound(1, 2, 2) == 467 == bigint_critical_bound(1, 2, 2)
        assert critical_point_bound(1, 2, 1) == 15 == bigint_critical_bound(1, 2, 1)
        assert connected_component_bound(1, 3, 0) == 3 == bigint_component_bound(1, 3, 0)
        assert connected_component_bound(1, 2, 1) == 15 == bigint_component_bound(1, 2, 1)
        assert lojasiewicz_exponent(1, 2, 2) == 18 == bigint_loja(1, 2, 2)
        assert lojasiewicz_exponent(2, 2, 2) == 108 == bigint_loja(2, 2, 2)


def test_criterion_5_genericity_audit():
    with criterion(5, "genericity audit"):
        inst = two_parabolas()
        rep = genericity_report(inst, all_critical_points(inst))
        assert rep.failing() == ("distinct_critical_values",)
        wit = rep.check("distinct_critical_values").witnesses[0]
        assert sorted((round(wit["x1"][0], 6), round(wit["x2"][0], 6))) == [0.0, 1.0]
        assert abs(wit["value1"]) <= 1e-9 and abs(wit["value2"]) <= 1e-9

        cubic = uinstance(3, (0, 0, 0, 1))
        rep3 = genericity_report(cubic, all_critical_points(cubic))
        assert rep3.failing() == ("second_order",)

        ok = two_parabolas(shift=0.1)
        rep_ok = genericity_report(ok, all_critical_points(ok))
        assert rep_ok.overall and rep_ok.failing() == ()


def test_criterion_6_random_genericity_rate():
    with criterion(6, "random genericity rate"):
        t0 = time.perf_counter()
        passes = 0
        for seed in range(100):
            inst = random_instance(1, 2, 2, seed)
            cat = all_critical_points(inst)
            assert len(cat.points) <= 467
            if genericity_report(inst, cat).overall:
                passes += 1
        elapsed = time.perf_counter() - t0
        assert passes >= 99, f"only {passes}/100 passed"
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_criterion_7_lojasiewicz_corroboration():
    with criterion(7, "Lojasiewicz corroboration"):
        inst = uinstance(2, (0, 0, 1))  # f = x^2
        rep = verify_loja(inst, MaxMinExpr.leaf(1), [0.0])
        assert rep.exponent_used == pytest.approx(2 / 3)
        assert rep.verdict == "positive-bounded-below"
        largest = rep.radii[0]
        closed_form = 2.0 * largest ** (-1.0 / 3.0)
        assert abs(rep.min_ratios[0] - closed_form) / closed_form <= 0.05


def test_criterion_8_error_bound():
    with criterion(8, "error bound (n=1)"):
        inst = uinstance(2, (-1, 0, 1))  # f = x^2 - 1
        rep = error_bound_check(inst, MaxMinExpr.leaf(1), grid=(-3.0, 3.0, 0.01))
        assert rep.points_outside > 0
        assert rep.min_local_ratio is not None and rep.min_local_ratio > 0
        s = sublevel_set_1d(inst, MaxMinExpr.leaf(1))
        assert dist_to_S(2.0, s) == 1.0  # exactly


def test_criterion_9_coercivity():
    with criterion(9, "coercivity"):
        vee = uinstance(2, (0, 1, 1), (0, -1, 1))  # {x^2+x, x^2-x}
        expr = MaxMinExpr.max_all(2)
        verdict = coercivity_check(vee, expr)
        assert verdict.coercive and verdict.bounded_below
        c, big_r = verdict.c_witness, verdict.r_witness
        for k in range(101):
            mag = big_r + k * (3.0 * big_r / 100.0)
            for x in (mag, -mag):
                assert eval_selection(expr, vee, x) >= c * abs(x)

        line = uinstance(1, (0, 1))
        v2 = coercivity_check(line, MaxMinExpr.leaf(1))
        assert not v2.bounded_below and not v2.coercive

        agree = 0
        for seed in range(50):
            inst = random_instance(1, 2, 2, 700 + seed)
            v = coercivity_check(inst, expr)
            left = eval_selection(expr, inst, -1000.0)
            right = eval_selection(expr, inst, 1000.0)
            sweep_bounded = left > -50.0 and right > -50.0
            sweep_coercive = left > 50.0 and right > 50.0
            if v.bounded_below == sweep_bounded and v.coercive == sweep_coercive:
                agree += 1
        assert agree == 50


def test_criterion_10_cli_determinism(tmp_path):
    with criterion(10, "CLI determinism"):
        parab = str(tmp_path / "parab.json")
        io.save_instance(two_parabolas(), parab)
        vee = str(tmp_path / "vee.json")
        io.save_instance(uinstance(2, (0, 1, 1), (0, -1, 1)), vee)
        square = str(tmp_path / "sq.json")
        io.save_instance(uinstance(2, (0, 0, 1)), square)

        runs = [
            ["selections", "--instance", parab],
            ["critical", "--instance", parab],
            ["genericity", "--instance", parab],
            ["bounds", "--n", "1", "--d", "2", "--r", "2"],
            ["loja", "--instance", square, "--selection", "index:1",
             "--center", "0", "--seed", "9"],
            ["errorbound", "--instance", parab, "--selection", "index:1"],
            ["goodness", "--instance", vee, "--selection", "max", "--seed", "3"],
            ["coercivity", "--instance", vee, "--selection", "max"],
        ]
        for argv in runs:
            out1 = str(tmp_path / "out1.txt")
            out2 = str(tmp_path / "out2.txt")
            assert main(argv + ["--out", out1]) == 0, argv
            assert main(argv + ["--out", out2]) == 0, argv
            p1 = io.split_payload(open(out1, encoding="utf-8").read())
            p2 = io.split_payload(open(out2, encoding="utf-8").read())
            assert p1 == p2, argv

        r1 = str(tmp_path / "r1.json")
        r2 = str(tmp_path / "r2.json")
        assert main(["random", "--n", "1", "--d", "2", "--r", "2",
                     "--seed", "7", "--out", r1]) == 0
        assert main(["random", "--n", "1", "--d", "2", "--r", "2",
                     "--seed", "7", "--out", r2]) == 0
        assert open(r1, "rb").read() == open(r2, "rb").read()
