"""Problem instances: a capacitated graph plus homologous edge sets.

A homologous set R with deviation function Delta ties its member flows
together: writing lam for the minimum flow over R, every member must carry
between lam and Delta(lam).  Guessing lam turns the instance into an
ordinary max-flow problem on the reparameterized network where R-edges get
bounds [lam, min(u, Delta(lam))]; the instance's value function F maps the
guess vector to that max-flow value (or to "infeasible" when the lower
bounds cannot be met).  Everything downstream, solvers and oracles alike,
works through evaluate_F.

Sets must be pairwise disjoint.  Input sets that share edges are accepted
and normalised by subdividing each shared edge into a chain of segments,
one per owning set; conservation forces equal flow along the chain, so the
constraints are preserved verbatim.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .cuts import CutReport, SetCrossing
from .errors import Infeasible, ValidationError
from .graph import CapacityBounds, FlowAssignment, Graph
from .maxflow import bounded_max_flow_arcs
from .values import DeviationFn

__all__ = [
    "HomologousSet",
    "Instance",
    "SolveResult",
    "FSample",
    "FEvaluator",
    "make_instance",
    "build_G_lambda",
    "evaluate_F",
]


@dataclass(frozen=True)
class HomologousSet:
    edges: tuple[int, ...]
    deviation: DeviationFn


class Instance:
    """Validated, normalised problem instance (sets disjoint, bounds sane)."""

    def __init__(
        self,
        graph: Graph,
        capacities: tuple[Fraction, ...],
        sets: tuple[HomologousSet, ...],
    ):
        self.graph = graph
        self.capacities = capacities
        self.sets = sets
        self._set_of_edge: dict[int, int] = {}
        for i, hs in enumerate(sets):
            for e in hs.edges:
                self._set_of_edge[e] = i
        self.validate()

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def u_R(self, i: int) -> Fraction:
        return min(self.capacities[e] for e in self.sets[i].edges)

    def set_of_edge(self, e: int) -> int | None:
        return self._set_of_edge.get(e)

    def q_edges(self) -> list[int]:
        return [e for e in range(self.m) if e not in self._set_of_edge]

    def validate(self) -> None:
        self.graph.validate()
        if len(self.capacities) != self.m:
            raise ValidationError("capacity list does not match edge count")
        for e, u in enumerate(self.capacities):
            if u < 0:
                raise ValidationError(f"edge {e}: negative capacity {u}")
        seen: set[int] = set()
        for i, hs in enumerate(self.sets):
            if not hs.edges:
                raise ValidationError(f"homologous set {i} is empty")
            for e in hs.edges:
                if not 0 <= e < self.m:
                    raise ValidationError(f"homologous set {i}: unknown edge {e}")
                if e in seen:
                    raise ValidationError(
                        f"edge {e} appears in more than one homologous set"
                    )
                seen.add(e)
            try:
                hs.deviation.validate_on(Fraction(0), self.u_R(i))
            except ValueError as exc:
                raise ValidationError(f"homologous set {i}: {exc}") from exc

    def lambda_box(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(0), self.u_R(i)) for i in range(self.k)]

    def check_lambda(self, lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(lam) != self.k:
            raise ValidationError(
                f"expected {self.k} parameter values, got {len(lam)}"
            )
        out = []
        for i, x in enumerate(lam):
            x = Fraction(x)
            if not 0 <= x <= self.u_R(i):
                raise ValidationError(
                    f"parameter {i} = {x} outside [0, {self.u_R(i)}]"
                )
            out.append(x)
        return tuple(out)

    def bounds_at(self, lam: Sequence[Fraction]) -> CapacityBounds:
        lam = self.check_lambda(lam)
        lower = [Fraction(0)] * self.m
        upper = list(self.capacities)
        for i, hs in enumerate(self.sets):
            cap_i = hs.deviation(lam[i])
            for e in hs.edges:
                lower[e] = lam[i]
                upper[e] = min(self.capacities[e], cap_i)
        return CapacityBounds(tuple(lower), tuple(upper))

    def cut_report(self, s_side: frozenset[int], bounds: CapacityBounds) -> CutReport:
        const = Fraction(0)
        fwd_by_set: list[list[Fraction]] = [[] for _ in self.sets]
        bwd_by_set = [0] * self.k
        for e in self.graph.edges:
            tin, hin = e.tail in s_side, e.head in s_side
            if tin == hin:
                continue
            i = self._set_of_edge.get(e.id)
            if tin:
                if i is None:
                    const += self.capacities[e.id]
                else:
                    fwd_by_set[i].append(self.capacities[e.id])
            else:
                if i is None:
                    const -= bounds.lower[e.id]
                else:
                    bwd_by_set[i] += 1
        crossings = tuple(
            SetCrossing(tuple(fwd_by_set[i]), bwd_by_set[i], self.sets[i].deviation)
            for i in range(self.k)
        )
        return CutReport(s_side, const, crossings)

    def check_flow(self, flow: FlowAssignment) -> None:
        """Full feasibility check including the homologous conditions."""
        flow.validate(self.graph, CapacityBounds.from_uppers(self.capacities))
        for i, hs in enumerate(self.sets):
            fmin = min(flow.values[e] for e in hs.edges)
            cap = hs.deviation(fmin)
            for e in hs.edges:
                if flow.values[e] > cap:
                    raise ValidationError(
                        f"homologous set {i}: edge {e} carries {flow.values[e]}, "
                        f"above {cap} allowed by the set minimum {fmin}"
                    )

    def __eq__(self, other) -> bool:
        # Structural equality; node names are display labels and the file
        # format does not carry them, so they do not participate.
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.graph.n == other.graph.n
            and [(e.tail, e.head) for e in self.graph.edges]
            == [(e.tail, e.head) for e in other.graph.edges]
            and self.graph.source == other.graph.source
            and self.graph.sink == other.graph.sink
            and self.capacities == other.capacities
            and self.sets == other.sets
        )

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, k={self.k})"


def make_instance(
    graph: Graph,
    capacities: Iterable,
    sets: Sequence[tuple[Iterable[int], DeviationFn]],
) -> Instance:
    """Build an Instance, subdividing edges shared between sets.

    An edge owned by j > 1 sets becomes a chain of j segments of the same
    capacity, the i-th segment replacing the edge in the i-th owning set.
    Conservation forces all segments to carry equal flow, so the original
    constraints survive unchanged.  Unshared edges keep their identity.
    """
    caps = [Fraction(c) for c in capacities]
    if len(caps) != graph.m:
        raise ValidationError("capacity list does not match edge count")
    owners: dict[int, list[int]] = {}
    norm_sets: list[tuple[list[int], DeviationFn]] = []
    for i, (edge_ids, dev) in enumerate(sets):
        ids = sorted(set(int(e) for e in edge_ids))
        norm_sets.append((ids, dev))
        for e in ids:
            if not 0 <= e < graph.m:
                raise ValidationError(f"homologous set {i}: unknown edge {e}")
            owners.setdefault(e, []).append(i)
    shared = {e: owns for e, owns in owners.items() if len(owns) > 1}
    if shared:
        warnings.warn(
            f"subdividing {len(shared)} edge(s) shared between homologous sets",
            stacklevel=2,
        )
    for e, owns in sorted(shared.items()):
        segment_ids = graph.subdivide_edge(e, len(owns))
        caps.extend(caps[e] for _ in segment_ids[1:])
        for seg_id, owner in zip(segment_ids, owns):
            ids, _ = norm_sets[owner]
            if seg_id != e:
                ids.remove(e)
                ids.append(seg_id)
    final_sets = tuple(
        HomologousSet(tuple(sorted(ids)), dev) for ids, dev in norm_sets
    )
    return Instance(graph, tuple(caps), final_sets)


def build_G_lambda(inst: Instance, lam: Sequence[Fraction]) -> CapacityBounds:
    """Bounds of the reparameterized network at guess vector `lam`."""
    return inst.bounds_at(lam)


def evaluate_F(
    inst: Instance, lam: Sequence[Fraction]
) -> tuple[Fraction, CutReport]:
    """Max-flow value at the guess vector, with its min-cut certificate.

    Raises Infeasible when the implied lower bounds admit no flow.  The
    certificate is re-priced through the cut formula and must reproduce the
    flow value exactly; a mismatch would mean corrupted bookkeeping, so it
    is asserted here rather than left to callers.
    """
    lam = inst.check_lambda(lam)
    bounds = inst.bounds_at(lam)
    arcs = [
        (e.tail, e.head, bounds.lower[e.id], bounds.upper[e.id])
        for e in inst.graph.edges
    ]
    value, flows, s_side = bounded_max_flow_arcs(
        inst.n, arcs, inst.graph.source, inst.graph.sink
    )
    report = inst.cut_report(s_side, bounds)
    assert report.capacity_at(lam) == value, "cut certificate mismatch"
    return value, report


class FSample(NamedTuple):
    feasible: bool
    value: Fraction | None
    report: CutReport | None
    flows: tuple[Fraction, ...] | None


class FEvaluator:
    """Memoized evaluate_F that reports infeasibility as data, not control flow."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self._cache: dict[tuple[Fraction, ...], FSample] = {}
        self.evaluations = 0

    def sample(self, lam: Sequence[Fraction]) -> FSample:
        key = tuple(Fraction(x) for x in lam)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.evaluations += 1
        inst = self.inst
        bounds = inst.bounds_at(key)
        arcs = [
            (e.tail, e.head, bounds.lower[e.id], bounds.upper[e.id])
            for e in inst.graph.edges
        ]
        try:
            value, flows, s_side = bounded_max_flow_arcs(
                inst.n, arcs, inst.graph.source, inst.graph.sink
            )
        except Infeasible:
            out = FSample(False, None, None, None)
        else:
            report = inst.cut_report(s_side, bounds)
            assert report.capacity_at(key) == value, "cut certificate mismatch"
            out = FSample(True, value, report, flows)
        self._cache[key] = out
        return out


@dataclass(frozen=True)
class SolveResult:
    """An optimum: parameter vector, its flow, and the matching cut."""

    lambda_star: tuple[Fraction, ...]
    opt_value: Fraction
    flow: FlowAssignment
    certificate: CutReport

    def verify(self, inst: Instance) -> None:
        inst.check_flow(self.flow)
        if self.flow.flow_value != self.opt_value:
            raise ValidationError("flow value disagrees with reported optimum")
        if self.certificate.capacity_at(self.lambda_star) != self.opt_value:
            raise ValidationError("certificate capacity disagrees with optimum")
