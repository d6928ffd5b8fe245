from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aemflow.errors import UnsupportedDeviation, ValidationError
from aemflow.graph import Graph
from aemflow.instance import FEvaluator, make_instance
from aemflow.ksets import (
    simplest_rational_in,
    solve_integer_constant,
    solve_k_constant,
)
from aemflow.values import DeviationFn

shift = DeviationFn.constant_shift


def plain():
    g = Graph()
    g.add_node("s")
    g.add_node("t")
    g.add_edge("s", "t")
    g.source, g.sink = 0, 1
    return make_instance(g, [7], [])


def bottleneck():
    g = Graph()
    for name in "svt":
        g.add_node(name)
    g.add_edge("s", "v")
    g.add_edge("v", "t")
    g.add_edge("v", "t")
    g.source, g.sink = 0, 2
    return make_instance(g, [3, 10, 10], [([1, 2], shift(0))])


def two_stage():
    """Sets in series: the first pins the second into a narrow slice."""
    g = Graph()
    for name in ("s", "v1", "v2", "t"):
        g.add_node(name)
    g.source, g.sink = 0, 3
    e0 = g.add_edge("s", "v1")
    e1 = g.add_edge("s", "v2")
    e2 = g.add_edge("v1", "t")
    e3 = g.add_edge("v2", "t")
    return make_instance(
        g, [3, 3, 3, 5], [([e0, e1], shift(0)), ([e2, e3], shift(1))]
    )


def shared_bottleneck():
    """Two singleton sets drain one capacity-3 edge; F is flat at 3."""
    g = Graph()
    for name in "svt":
        g.add_node(name)
    g.source, g.sink = 0, 2
    e0 = g.add_edge("s", "v")
    e1 = g.add_edge("v", "t")
    e2 = g.add_edge("v", "t")
    return make_instance(g, [3, 10, 10], [([e1], shift(0)), ([e2], shift(0))])


def twin_gadgets(copies=2):
    """Independent bottleneck gadgets, one homologous pair each."""
    g = Graph()
    g.add_node("s")
    g.add_node("t")
    g.source, g.sink = 0, 1
    sets = []
    caps = []
    for i in range(copies):
        v = g.add_node(f"v{i}")
        caps.append(Q(3))
        g.add_edge(0, v)
        e1 = g.add_edge(v, 1)
        e2 = g.add_edge(v, 1)
        caps += [Q(10), Q(10)]
        sets.append(([e1, e2], shift(0)))
    return make_instance(g, caps, sets)


class TestSimplestRational:
    @pytest.mark.parametrize(
        "lo,hi,want",
        [
            (Q(2, 7), Q(1, 3), Q(1, 3)),
            (Q(3, 2), Q(3, 2), Q(3, 2)),
            (Q(22, 10), Q(57, 10), Q(3)),
            (Q(0), Q(0), Q(0)),
            (Q(1, 3), Q(1, 2), Q(1, 2)),
            (Q(140, 100), Q(160, 100), Q(3, 2)),
            (Q(0), Q(5), Q(0)),
        ],
    )
    def test_known(self, lo, hi, want):
        assert simplest_rational_in(lo, hi) == want

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            simplest_rational_in(Q(1, 2), Q(1, 3))

    @given(
        st.fractions(min_value=0, max_value=8, max_denominator=40),
        st.fractions(min_value=0, max_value=8, max_denominator=40),
    )
    @settings(max_examples=200, deadline=None)
    def test_minimal_denominator(self, a, b):
        lo, hi = min(a, b), max(a, b)
        r = simplest_rational_in(lo, hi)
        assert lo <= r <= hi
        for d in range(1, r.denominator):
            # No rational with a smaller denominator fits the interval.
            import math

            assert math.ceil(lo * d) > math.floor(hi * d)


class TestSolveK:
    def test_no_sets_is_plain_max_flow(self):
        res = solve_k_constant(plain())
        assert res.lambda_star == ()
        assert res.opt_value == 7
        res.verify(plain())

    def test_single_set_delegates_to_slice(self):
        res = solve_k_constant(bottleneck())
        assert res.lambda_star == (Q(3, 2),)
        assert res.opt_value == 3
        res.verify(bottleneck())

    def test_series_sets(self):
        inst = two_stage()
        res = solve_k_constant(inst)
        assert res.lambda_star == (Q(3), Q(2))
        assert res.opt_value == 6
        res.verify(inst)

    def test_flat_top_takes_lexicographic_minimum(self):
        inst = shared_bottleneck()
        res = solve_k_constant(inst)
        assert res.lambda_star == (Q(0), Q(3))
        assert res.opt_value == 3
        res.verify(inst)

    def test_independent_gadgets_round_to_halves(self):
        inst = twin_gadgets()
        res = solve_k_constant(inst)
        assert res.lambda_star == (Q(3, 2), Q(3, 2))
        assert res.opt_value == 6
        res.verify(inst)

    def test_three_sets_parametric_recursion(self):
        inst = twin_gadgets(3)
        res = solve_k_constant(inst, method="parametric")
        assert res.lambda_star == (Q(3, 2), Q(3, 2), Q(3, 2))
        assert res.opt_value == 9
        res.verify(inst)

    def test_rejects_affine_deviation(self):
        g = Graph()
        g.add_node("s")
        g.add_node("t")
        g.add_edge("s", "t")
        g.add_edge("s", "t")
        g.source, g.sink = 0, 1
        inst = make_instance(g, [4, 10], [([0, 1], DeviationFn.affine(2, 1))])
        with pytest.raises(UnsupportedDeviation):
            solve_k_constant(inst)

    def test_rejects_unknown_method(self):
        with pytest.raises(ValidationError):
            solve_k_constant(bottleneck(), method="fast")

    def test_deterministic(self):
        a = solve_k_constant(twin_gadgets())
        b = solve_k_constant(twin_gadgets())
        assert a.lambda_star == b.lambda_star
        assert a.opt_value == b.opt_value


class TestSolveInteger:
    def test_rounds_down_when_ceiling_infeasible(self):
        res = solve_integer_constant(bottleneck())
        assert res.lambda_star == (Q(1),)
        assert res.opt_value == 2

    def test_integral_optimum_kept(self):
        res = solve_integer_constant(two_stage())
        assert res.lambda_star == (Q(3), Q(2))
        assert res.opt_value == 6

    def test_corner_search(self):
        res = solve_integer_constant(twin_gadgets())
        assert res.lambda_star == (Q(1), Q(1))
        assert res.opt_value == 4

    def test_no_sets(self):
        res = solve_integer_constant(plain())
        assert res.lambda_star == ()
        assert res.opt_value == 7

    def test_values_are_integers(self):
        for inst in (bottleneck(), two_stage(), twin_gadgets()):
            res = solve_integer_constant(inst)
            assert all(x.denominator == 1 for x in res.lambda_star)
            res.verify(inst)


@st.composite
def paired_instances(draw):
    n = draw(st.integers(3, 5))
    m = draw(st.integers(4, 7))
    edges = []
    for _ in range(m):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 2))
        if b >= a:
            b += 1
        edges.append((a, b))
    caps = [draw(st.integers(1, 3)) for _ in range(m)]
    ids = list(range(m))
    picks = draw(st.permutations(ids))
    s1, s2 = sorted(picks[:2]), sorted(picks[2:4])
    c1 = draw(st.integers(0, 2))
    c2 = draw(st.integers(0, 2))
    g = Graph()
    for i in range(n):
        g.add_node(f"n{i}")
    for a, b in edges:
        g.add_edge(a, b)
    g.source, g.sink = 0, 1
    return make_instance(g, caps, [(s1, shift(c1)), (s2, shift(c2))])


class TestAgainstGrid:
    @given(paired_instances())
    @settings(max_examples=15, deadline=None)
    def test_two_set_optimum_dominates_grid(self, inst):
        res = solve_k_constant(inst)
        res.verify(inst)
        ev = FEvaluator(inst)
        grids = []
        for i in range(2):
            u = inst.u_R(i)
            pts = {
                Q(j, q)
                for q in range(1, 4)
                for j in range(int(u * q) + 1)
            }
            grids.append(sorted(pts))
        for x in grids[0]:
            for y in grids[1]:
                s = ev.sample((x, y))
                if not s.feasible:
                    continue
                assert s.value <= res.opt_value
                if s.value == res.opt_value:
                    assert (x, y) >= res.lambda_star

    @given(paired_instances())
    @settings(max_examples=10, deadline=None)
    def test_integer_optimum_dominates_integer_grid(self, inst):
        res = solve_integer_constant(inst)
        res.verify(inst)
        ev = FEvaluator(inst)
        u0, u1 = int(inst.u_R(0)), int(inst.u_R(1))
        for x in range(u0 + 1):
            for y in range(u1 + 1):
                s = ev.sample((Q(x), Q(y)))
                if not s.feasible:
                    continue
                assert s.value <= res.opt_value
                if s.value == res.opt_value:
                    assert (Q(x), Q(y)) >= res.lambda_star
