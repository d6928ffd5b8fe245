"""Cut certificates and their parameter-dependent capacity.

A cut report freezes everything needed to re-evaluate the cut's capacity as
a function of the homologous parameters: the plain-edge capacity crossing
forward, and per homologous set the forward member upper bounds, the
backward crossing count and the set's deviation function.  The capacity is

    g_S(lam) = const + sum_i [ sum_{r fwd} min(u_r, Delta_i(lam_i)) - bwd_i * lam_i ]

which is concave in each lam_i whenever Delta_i is concave.  One-sided
slopes at a point follow from which forward members are clamped at their
upper bound there; they are exactly the one-sided derivatives of g_S and,
since g_S supports the instance's value function from above, they bound the
value function's growth on the corresponding side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Graph
from .values import DeviationFn

__all__ = ["SetCrossing", "CutReport", "cut_capacity_at", "cut_edges"]


@dataclass(frozen=True)
class SetCrossing:
    """How one homologous set crosses a cut."""

    forward_uppers: tuple[Fraction, ...]
    backward_count: int
    deviation: DeviationFn

    @property
    def d_R(self) -> int:
        return len(self.forward_uppers) - self.backward_count


@dataclass(frozen=True)
class CutReport:
    """An s-side node set with the data to evaluate g_S at any parameter."""

    s_side: frozenset[int]
    capacity_const: Fraction
    sets: tuple[SetCrossing, ...] = ()

    def d_R(self, i: int) -> int:
        return self.sets[i].d_R

    def capacity_at(self, lam: Sequence[Fraction]) -> Fraction:
        if len(lam) != len(self.sets):
            raise ValueError("parameter count does not match set count")
        total = self.capacity_const
        for x, sc in zip(lam, self.sets):
            dx = sc.deviation(x)
            for u in sc.forward_uppers:
                total += min(u, dx)
            total -= sc.backward_count * x
        return total

    def right_slope(self, i: int, lam_i: Fraction) -> Fraction:
        """Derivative of g_S in lam_i just above lam_i (clamped members frozen)."""
        sc = self.sets[i]
        dx = sc.deviation(lam_i)
        rate = sc.deviation.derivative_at(lam_i)
        live = sum(1 for u in sc.forward_uppers if dx < u)
        return live * rate - sc.backward_count

    def left_slope(self, i: int, lam_i: Fraction) -> Fraction:
        """Derivative of g_S in lam_i just below lam_i."""
        sc = self.sets[i]
        dx = sc.deviation(lam_i)
        rate = sc.deviation.derivative_at(lam_i)
        live = sum(1 for u in sc.forward_uppers if dx <= u)
        return live * rate - sc.backward_count


def cut_capacity_at(report: CutReport, lam: Sequence[Fraction]) -> Fraction:
    return report.capacity_at(lam)


def cut_edges(graph: Graph, s_side: frozenset[int]) -> tuple[list[int], list[int]]:
    """Edge ids crossing the cut forward (tail inside) and backward."""
    fwd: list[int] = []
    bwd: list[int] = []
    for e in graph.edges:
        tin = e.tail in s_side
        hin = e.head in s_side
        if tin and not hin:
            fwd.append(e.id)
        elif hin and not tin:
            bwd.append(e.id)
    return fwd, bwd
