"""Maximum flow with lower and upper bounds, exact and deterministic.

The engine is Edmonds-Karp on integers: rational bounds are scaled by the
lcm of their denominators, so all augmentations are exact and the final
values rescale back to rationals with no rounding anywhere.  Augmenting
paths are shortest by edge count; the BFS scans arcs in ascending id order
(insertion order), which fixes the path choice and makes every result,
including the extracted min cut, a pure function of the input.

Lower bounds go through the usual circulation transformation: saturate
every lower bound, route the resulting node imbalances through a
super-source and super-sink, and close the s-t pair with a high-capacity
return arc.  The instance is feasible exactly when the super-source's arcs
saturate; the shortfall (deficiency) and the super-source side of the
auxiliary min cut are exposed separately because parametric callers use
them to reason about how infeasibility varies with the parameter.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

from .cuts import CutReport
from .errors import Infeasible, ValidationError
from .graph import CapacityBounds, FlowAssignment, Graph

__all__ = [
    "FlowCut",
    "DeficiencyReport",
    "max_flow_arcs",
    "bounded_max_flow_arcs",
    "deficiency_arcs",
    "max_flow_bounded",
]


class FlowCut(NamedTuple):
    value: Fraction
    flows: tuple[Fraction, ...]
    s_side: frozenset[int]


class DeficiencyReport(NamedTuple):
    deficiency: Fraction
    aux_s_side: frozenset[int]
    required: Fraction
    return_cap: Fraction
    crosses_return: bool


class _Net:
    """Residual network over ints; arc 2i+1 is the reverse of arc 2i."""

    __slots__ = ("n", "to", "cap", "adj")

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, c: int) -> int:
        a = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.adj[u].append(a)
        self.to.append(u)
        self.cap.append(0)
        self.adj[v].append(a + 1)
        return a

    def disable(self, a: int) -> None:
        self.cap[a] = 0
        self.cap[a ^ 1] = 0

    def _bfs(self, s: int, t: int) -> list[int] | None:
        parent = [-1] * self.n
        parent[s] = -2
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.adj[u]:
                if self.cap[a] > 0:
                    v = self.to[a]
                    if parent[v] == -1:
                        parent[v] = a
                        if v == t:
                            return parent
                        q.append(v)
        return None

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent = self._bfs(s, t)
            if parent is None:
                return total
            push = None
            v = t
            while v != s:
                a = parent[v]
                push = self.cap[a] if push is None else min(push, self.cap[a])
                v = self.to[a ^ 1]
            v = t
            while v != s:
                a = parent[v]
                self.cap[a] -= push
                self.cap[a ^ 1] += push
                v = self.to[a ^ 1]
            total += push

    def reachable(self, s: int) -> frozenset[int]:
        seen = [False] * self.n
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.adj[u]:
                if self.cap[a] > 0 and not seen[self.to[a]]:
                    seen[self.to[a]] = True
                    q.append(self.to[a])
        return frozenset(i for i, f in enumerate(seen) if f)


def _scale(values: Sequence[Fraction]) -> tuple[list[int], int]:
    d = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * d) for v in values], d


def max_flow_arcs(
    n: int, arcs: Sequence[tuple[int, int, Fraction]], s: int, t: int
) -> FlowCut:
    """Max s-t flow over arcs (tail, head, upper); lower bounds all zero."""
    caps = [Fraction(c) for _, _, c in arcs]
    ints, d = _scale(caps)
    net = _Net(n)
    ids = [net.add(u, v, c) for (u, v, _), c in zip(arcs, ints)]
    value = net.max_flow(s, t)
    flows = tuple(Fraction(net.cap[a ^ 1], d) for a in ids)
    return FlowCut(Fraction(value, d), flows, net.reachable(s))


def _aux_net(
    n: int,
    arcs: Sequence[tuple[int, int, Fraction, Fraction]],
    s: int,
    t: int,
    d: int,
    lowers: list[int],
    uppers: list[int],
):
    """Circulation network: base arcs at u-l, imbalance arcs, t->s return arc."""
    sigma, tau = n, n + 1
    net = _Net(n + 2)
    base = []
    excess = [0] * n
    for (u, v, _, _), l, c in zip(arcs, lowers, uppers):
        if l > c:
            raise ValidationError(f"arc ({u},{v}): lower bound exceeds upper")
        if l < 0:
            raise ValidationError(f"arc ({u},{v}): negative lower bound")
        base.append(net.add(u, v, c - l))
        excess[v] += l
        excess[u] -= l
    big = sum(uppers) + 1
    ts = net.add(t, s, big)
    helpers = [ts]
    required = 0
    for v in range(n):
        if excess[v] > 0:
            helpers.append(net.add(sigma, v, excess[v]))
            required += excess[v]
        elif excess[v] < 0:
            helpers.append(net.add(v, tau, -excess[v]))
    return net, base, helpers, ts, required, sigma, tau


def bounded_max_flow_arcs(
    n: int, arcs: Sequence[tuple[int, int, Fraction, Fraction]], s: int, t: int
) -> FlowCut:
    """Max s-t flow over arcs (tail, head, lower, upper).

    Raises Infeasible when the lower bounds admit no flow at all.
    """
    all_bounds = [Fraction(x) for a in arcs for x in (a[2], a[3])]
    _, d = _scale(all_bounds)
    lowers = [int(Fraction(a[2]) * d) for a in arcs]
    uppers = [int(Fraction(a[3]) * d) for a in arcs]
    if not any(lowers):
        return max_flow_arcs(n, [(a[0], a[1], a[3]) for a in arcs], s, t)
    net, base, helpers, ts, required, sigma, tau = _aux_net(
        n, arcs, s, t, d, lowers, uppers
    )
    got = net.max_flow(sigma, tau)
    if got < required:
        raise Infeasible(
            f"lower bounds unsatisfiable: circulation short by {Fraction(required - got, d)}",
            context={"deficiency": Fraction(required - got, d)},
        )
    carried = net.cap[ts ^ 1]
    for a in helpers:
        net.disable(a)
    value = carried + net.max_flow(s, t)
    flows = tuple(
        Fraction(l + net.cap[a ^ 1], d) for l, a in zip(lowers, base)
    )
    s_side = net.reachable(s) & frozenset(range(n))
    return FlowCut(Fraction(value, d), flows, s_side)


def deficiency_arcs(
    n: int, arcs: Sequence[tuple[int, int, Fraction, Fraction]], s: int, t: int
) -> DeficiencyReport:
    """Shortfall of the circulation phase and its certifying cut.

    The deficiency is the total lower bound the circulation cannot cover;
    zero means the bounds are satisfiable.  The reported node set is the
    super-source side of a min cut in the auxiliary network, restricted to
    the original nodes (the super-source itself is dropped).
    """
    all_bounds = [Fraction(x) for a in arcs for x in (a[2], a[3])]
    _, d = _scale(all_bounds)
    lowers = [int(Fraction(a[2]) * d) for a in arcs]
    uppers = [int(Fraction(a[3]) * d) for a in arcs]
    net, base, helpers, ts, required, sigma, tau = _aux_net(
        n, arcs, s, t, d, lowers, uppers
    )
    got = net.max_flow(sigma, tau)
    raw_side = net.reachable(sigma)
    side = raw_side & frozenset(range(n))
    crosses = t in raw_side and s not in raw_side
    return DeficiencyReport(
        Fraction(required - got, d),
        side,
        Fraction(required, d),
        Fraction(net.cap[ts] + net.cap[ts ^ 1], d),
        crosses,
    )


def max_flow_bounded(graph: Graph, bounds: CapacityBounds) -> tuple[FlowAssignment, CutReport]:
    """Spec-level entry: maximum feasible flow plus its min-cut certificate."""
    graph.validate()
    if bounds.m != graph.m:
        raise ValidationError("bounds do not match edge count")
    arcs = [
        (e.tail, e.head, bounds.lower[e.id], bounds.upper[e.id]) for e in graph.edges
    ]
    value, flows, s_side = bounded_max_flow_arcs(
        graph.n, arcs, graph.source, graph.sink
    )
    cap = Fraction(0)
    for e in graph.edges:
        tin, hin = e.tail in s_side, e.head in s_side
        if tin and not hin:
            cap += bounds.upper[e.id]
        elif hin and not tin:
            cap -= bounds.lower[e.id]
    flow = FlowAssignment(flows, value)
    return flow, CutReport(s_side, cap)
