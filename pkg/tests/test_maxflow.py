from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from aemflow.errors import Infeasible, ValidationError
from aemflow.graph import CapacityBounds, FlowAssignment, Graph
from aemflow.maxflow import (
    bounded_max_flow_arcs,
    deficiency_arcs,
    max_flow_arcs,
    max_flow_bounded,
)


def build(n_nodes, edge_list, s=0, t=1):
    g = Graph()
    for _ in range(n_nodes):
        g.add_node()
    for u, v in edge_list:
        g.add_edge(u, v)
    g.source, g.sink = s, t
    return g


class TestGraph:
    def test_self_loop_rejected(self):
        g = Graph()
        g.add_node("a")
        with pytest.raises(ValidationError):
            g.add_edge("a", "a")

    def test_parallel_edges_allowed(self):
        g = build(2, [(0, 1), (0, 1)])
        assert g.m == 2
        assert g.out_edges(0) == [0, 1]

    def test_duplicate_node_name_rejected(self):
        g = Graph()
        g.add_node("a")
        with pytest.raises(ValidationError):
            g.add_node("a")

    def test_unset_source_rejected(self):
        g = build(2, [(0, 1)])
        g.source = None
        with pytest.raises(ValidationError):
            g.validate()

    def test_names_resolve(self):
        g = Graph()
        s = g.add_node("s")
        t = g.add_node("t")
        e = g.add_edge("s", "t")
        assert (s, t, e) == (0, 1, 0)
        assert g.node_id("t") == 1
        assert g.node_name(0) == "s"


class TestCapacityBounds:
    def test_lower_above_upper_rejected(self):
        with pytest.raises(ValidationError):
            CapacityBounds((Q(7),), (Q(5),))

    def test_negative_lower_rejected(self):
        with pytest.raises(ValidationError):
            CapacityBounds((Q(-1),), (Q(5),))

    def test_from_uppers(self):
        b = CapacityBounds.from_uppers([3, Q(5, 2)])
        assert b.lower == (0, 0)
        assert b.upper == (3, Q(5, 2))


class TestMaxFlow:
    def test_single_edge(self):
        value, flows, cut = max_flow_arcs(2, [(0, 1, Q(10))], 0, 1)
        assert value == 10
        assert flows == (10,)
        assert cut == {0}

    def test_two_paths_bottleneck(self):
        # s -> a -> t and s -> b -> t, with a -> b crossover unused
        arcs = [
            (0, 2, Q(3)),
            (0, 3, Q(2)),
            (2, 1, Q(2)),
            (3, 1, Q(4)),
            (2, 3, Q(5)),
        ]
        value, flows, cut = max_flow_arcs(4, arcs, 0, 1)
        assert value == 5
        assert flows[0] == 3 and flows[4] == 1

    def test_rational_capacities_exact(self):
        arcs = [(0, 2, Q(1, 3)), (2, 1, Q(1, 2))]
        value, flows, _ = max_flow_arcs(3, arcs, 0, 1)
        assert value == Q(1, 3)
        assert flows == (Q(1, 3), Q(1, 3))

    def test_disconnected_is_zero(self):
        value, flows, cut = max_flow_arcs(3, [(0, 2, Q(5))], 0, 1)
        assert value == 0
        assert cut == {0, 2}

    def test_x3c_single_triple_all_free(self):
        # s=0, t=1, S1=2, a1..a3 = 3,4,5; lower bounds all zero
        arcs = [
            (0, 2, Q(5)),
            (2, 1, Q(2)),
            (2, 3, Q(1)),
            (2, 4, Q(1)),
            (2, 5, Q(1)),
            (3, 1, Q(1)),
            (4, 1, Q(1)),
            (5, 1, Q(1)),
        ]
        value, _, cut = max_flow_arcs(6, arcs, 0, 1)
        assert value == 5
        assert cut == {0}


class TestBoundedMaxFlow:
    def test_lower_bounds_satisfiable(self):
        # s -> v (lower 7) -> t; plenty of room
        arcs = [(0, 2, Q(7), Q(10)), (2, 1, Q(0), Q(10))]
        value, flows, _ = bounded_max_flow_arcs(3, arcs, 0, 1)
        assert value == 10

    def test_lower_bound_forces_detour(self):
        # s->a lower 2, a->t cap 1, a->b->t mops up the forced excess
        arcs = [
            (0, 2, Q(2), Q(2)),
            (2, 1, Q(0), Q(1)),
            (2, 3, Q(0), Q(5)),
            (3, 1, Q(0), Q(5)),
        ]
        value, flows, _ = bounded_max_flow_arcs(4, arcs, 0, 1)
        assert value == 2
        assert flows[0] == 2

    def test_infeasible_bottleneck(self):
        arcs = [(0, 2, Q(7), Q(10)), (2, 1, Q(0), Q(5))]
        with pytest.raises(Infeasible):
            bounded_max_flow_arcs(3, arcs, 0, 1)

    def test_infeasible_reports_deficiency(self):
        arcs = [(0, 2, Q(7), Q(10)), (2, 1, Q(0), Q(5))]
        rep = deficiency_arcs(3, arcs, 0, 1)
        assert rep.deficiency == 2
        assert rep.required == 7

    def test_feasible_has_zero_deficiency(self):
        arcs = [(0, 2, Q(7), Q(10)), (2, 1, Q(0), Q(10))]
        rep = deficiency_arcs(3, arcs, 0, 1)
        assert rep.deficiency == 0

    def test_backward_lower_bound_cut_value(self):
        # A lower bound on a backward edge reduces the cut capacity.
        # s->t cap 5 and t->s lower 1: optimum 5 (return arc refunds through s)
        g = build(2, [(0, 1), (1, 0)])
        bounds = CapacityBounds((Q(0), Q(1)), (Q(5), Q(3)))
        flow, report = max_flow_bounded(g, bounds)
        flow.validate(g, bounds)
        assert flow.flow_value == report.capacity_at(())


class TestMaxFlowBounded:
    def test_returns_matching_certificate(self):
        g = build(4, [(0, 2), (0, 3), (2, 1), (3, 1), (2, 3)])
        bounds = CapacityBounds.from_uppers([3, 2, 2, 4, 5])
        flow, report = max_flow_bounded(g, bounds)
        flow.validate(g, bounds)
        assert flow.flow_value == 5
        assert 0 in report.s_side and 1 not in report.s_side
        assert report.capacity_at(()) == 5

    def test_flow_value_is_net_source_outflow(self):
        g = build(2, [(0, 1), (1, 0)])
        bounds = CapacityBounds.from_uppers([4, 9])
        flow, _ = max_flow_bounded(g, bounds)
        assert flow.flow_value == 4

    def test_validate_catches_bad_conservation(self):
        g = build(3, [(0, 2), (2, 1)])
        bounds = CapacityBounds.from_uppers([5, 5])
        bad = FlowAssignment((Q(3), Q(2)), Q(3))
        with pytest.raises(ValidationError):
            bad.validate(g, bounds)

    def test_validate_catches_bad_value(self):
        g = build(2, [(0, 1)])
        bounds = CapacityBounds.from_uppers([5])
        with pytest.raises(ValidationError):
            FlowAssignment((Q(3),), Q(4)).validate(g, bounds)


caps = st.fractions(min_value=0, max_value=8, max_denominator=4)


@st.composite
def random_network(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    m = draw(st.integers(min_value=1, max_value=10))
    arcs = []
    for _ in range(m):
        u = draw(st.integers(min_value=0, max_value=n - 1))
        v = draw(st.integers(min_value=0, max_value=n - 1))
        if u == v:
            v = (v + 1) % n
        arcs.append((u, v, draw(caps)))
    return n, arcs


class TestFlowProperties:
    @given(random_network())
    @settings(max_examples=60, deadline=None)
    def test_value_equals_cut_capacity(self, net):
        n, arcs = net
        value, flows, cut = max_flow_arcs(n, arcs, 0, 1)
        cap = sum(
            (c for u, v, c in arcs if u in cut and v not in cut), Q(0)
        )
        assert value == cap
        assert 0 in cut and 1 not in cut

    @given(random_network())
    @settings(max_examples=60, deadline=None)
    def test_conservation_and_bounds(self, net):
        n, arcs = net
        value, flows, _ = max_flow_arcs(n, arcs, 0, 1)
        for f, (_, _, c) in zip(flows, arcs):
            assert 0 <= f <= c
        for v in range(n):
            if v in (0, 1):
                continue
            net_v = sum(f for f, a in zip(flows, arcs) if a[0] == v) - sum(
                f for f, a in zip(flows, arcs) if a[1] == v
            )
            assert net_v == 0

    @given(random_network())
    @settings(max_examples=40, deadline=None)
    def test_integral_caps_give_integral_flow(self, net):
        n, arcs = net
        arcs = [(u, v, Q(int(c))) for u, v, c in arcs]
        value, flows, _ = max_flow_arcs(n, arcs, 0, 1)
        assert value.denominator == 1
        assert all(f.denominator == 1 for f in flows)

    @given(random_network())
    @settings(max_examples=30, deadline=None)
    def test_deterministic(self, net):
        n, arcs = net
        assert max_flow_arcs(n, arcs, 0, 1) == max_flow_arcs(n, arcs, 0, 1)
