"""Single-parameter search: probe resolution and parametric simulation.

Everything here views the instance through a one-dimensional slice: one
homologous set's parameter is free, every other set is pinned to a fixed
rational value.  Along such a slice the value function F is concave and
piecewise linear (for affine deviations), the feasible parameter values
form a closed interval, and the optimum is the smallest maximizer.

Three exact primitives are built on that picture:

* ``Slice.feasible_interval`` finds the interval endpoints by Newton steps
  on the circulation deficiency, a convex piecewise-linear function whose
  one-sided slopes come from the auxiliary min cut.  Each step lands on a
  support line's root, so finitely many max-flow calls give the exact
  rational endpoints.
* ``Slice.resolve`` places the optimum relative to a query point using two
  nearby probes.  A chord with nonpositive slope on the left, or positive
  slope on the right, decides the direction outright.  Declaring the query
  point itself optimal additionally requires the probe cut's one-sided
  slope to match the chord exactly; that match certifies F is linear
  across the probe window, which pins the one-sided derivatives at the
  query point.  When the certificate fails the window shrinks and the
  probes repeat, and since F has finitely many kinks this terminates.
* ``Slice.solve`` runs the flow computation once with symbolic affine
  bounds, answering every comparison through ``resolve`` while narrowing
  the interval that must contain the optimum.  The run either gets pinned
  to an exact optimum mid-way or returns the value function's affine form
  on the final interval, whose better endpoint is the optimum.

All rationals are exact; there is no tolerance anywhere in this module.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, NamedTuple

from .errors import Infeasible, UnsupportedDeviation, ValidationError
from .graph import FlowAssignment
from .instance import FEvaluator, FSample, Instance, SolveResult
from .maxflow import deficiency_arcs
from .values import AffineValue, Order, affine_compare

__all__ = [
    "Resolution",
    "OptLeft",
    "OptRight",
    "OptimalAt",
    "Slice",
    "SliceOpt",
    "resolve_comparison",
    "solve_simple_constant",
]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Resolution:
    """Where the slice optimum sits relative to a query point."""

    side: str
    at: Fraction | None = None

    def __repr__(self) -> str:
        if self.side == "at":
            return f"OptimalAt({self.at})"
        return "OptLeft" if self.side == "left" else "OptRight"


OptLeft = Resolution("left")
OptRight = Resolution("right")


def OptimalAt(x) -> Resolution:
    return Resolution("at", Fraction(x))


class SliceOpt(NamedTuple):
    x: Fraction
    value: Fraction
    flows: tuple[Fraction, ...]
    report: object


class _PinnedAt(Exception):
    """Internal: a comparison identified the optimum exactly; finish concretely."""

    def __init__(self, value: Fraction):
        self.value = value


class Slice:
    """The instance restricted to one free parameter.

    Shares one memoized evaluator across all probes, so repeated resolves
    at nearby points reuse earlier max-flow runs.
    """

    def __init__(
        self,
        inst: Instance,
        free: int,
        fixed: dict[int, Fraction],
        evaluator: FEvaluator | None = None,
    ):
        if not 0 <= free < inst.k:
            raise ValidationError(f"set index {free} out of range")
        if set(fixed) != set(range(inst.k)) - {free}:
            raise ValidationError("fixed values must cover exactly the other sets")
        self.inst = inst
        self.free = free
        self.fixed = {i: Fraction(v) for i, v in fixed.items()}
        for i, v in self.fixed.items():
            if not 0 <= v <= inst.u_R(i):
                raise ValidationError(f"fixed value for set {i} outside [0, u_R]")
        self.ev = evaluator if evaluator is not None else FEvaluator(inst)
        self.u_free = inst.u_R(free)
        self._interval: tuple[Fraction, Fraction] | None = None
        self._resolutions: dict[Fraction, Resolution] = {}
        self._def_cache: dict[Fraction, tuple] = {}
        dev = inst.sets[free].deviation
        dens = [c.denominator for c in inst.capacities]
        dens += [v.denominator for v in self.fixed.values()]
        dens += [c.denominator for c in dev.poly.coeffs]
        nums = [abs(c.numerator) for c in dev.poly.coeffs]
        d = lcm(*dens) if dens else 1
        n = max(nums + [1])
        # Denominator bound on kink positions; only the starting probe width
        # depends on it, correctness never does.
        self._eps_scale = 4 * inst.m * inst.m * d * d * n

    def full_lambda(self, x: Fraction) -> tuple[Fraction, ...]:
        return tuple(
            x if i == self.free else self.fixed[i] for i in range(self.inst.k)
        )

    def sample(self, x: Fraction) -> FSample:
        return self.ev.sample(self.full_lambda(x))

    # -- feasibility interval ------------------------------------------------

    def _deficiency(self, x: Fraction):
        hit = self._def_cache.get(x)
        if hit is None:
            inst = self.inst
            bounds = inst.bounds_at(self.full_lambda(x))
            arcs = [
                (e.tail, e.head, bounds.lower[e.id], bounds.upper[e.id])
                for e in inst.graph.edges
            ]
            rep = deficiency_arcs(inst.n, arcs, inst.graph.source, inst.graph.sink)
            hit = (rep, bounds)
            self._def_cache[x] = hit
        return hit

    def _def_slope(self, x: Fraction, rep, bounds, right: bool) -> Fraction:
        # Slope of a support line of the deficiency at x, taken from the
        # auxiliary min cut T: the deficiency equals sum of T's lower-bound
        # imbalance minus the capacity crossing out of T, an expression
        # affine in x except for the clamp min(u_r, Delta(x)) on free arcs.
        inst = self.inst
        T = rep.aux_s_side
        assert not rep.crosses_return, "return arc in a minimum auxiliary cut"
        free_ids = set(inst.sets[self.free].edges)
        dev = inst.sets[self.free].deviation
        dx = dev(x)
        rate = dev.derivative_at(x)
        slope = Fraction(0)
        acc = Fraction(0)
        for e in inst.graph.edges:
            low = bounds.lower[e.id]
            tin = e.tail in T
            hin = e.head in T
            if hin:
                acc += low
            if tin:
                acc -= low
            is_free = e.id in free_ids
            if is_free:
                if hin:
                    slope += 1
                if tin:
                    slope -= 1
            if tin and not hin:
                acc -= bounds.upper[e.id] - low
                if is_free:
                    u = inst.capacities[e.id]
                    live = dx < u if right else dx <= u
                    slope -= (rate if live else _ZERO) - 1
        assert acc == rep.deficiency, "support line misses the deficiency value"
        return slope

    def _def_root(self, x: Fraction, forward: bool) -> Fraction:
        rep, bounds = self._deficiency(x)
        for _ in range(400):
            if rep.deficiency == 0:
                return x
            slope = self._def_slope(x, rep, bounds, right=forward)
            if forward:
                if slope >= 0:
                    raise Infeasible(
                        "no feasible value for the free parameter on this slice",
                        context={"free": self.free, "fixed": dict(self.fixed)},
                    )
                x = x + rep.deficiency / (-slope)
                if x > self.u_free:
                    raise Infeasible(
                        "no feasible value for the free parameter on this slice",
                        context={"free": self.free, "fixed": dict(self.fixed)},
                    )
            else:
                # A zero exists to the left (the forward search found one),
                # so the deficiency must still be falling when read leftward.
                assert slope > 0, "leftward root search lost its zero"
                x = x - rep.deficiency / slope
                assert x >= 0
            rep, bounds = self._deficiency(x)
        raise AssertionError("deficiency root search failed to converge")

    def feasible_interval(self) -> tuple[Fraction, Fraction]:
        """Exact endpoints of the feasible parameter interval.

        Raises Infeasible when no value of the free parameter admits a flow
        at the given fixed values.
        """
        if self._interval is None:
            af = self._def_root(_ZERO, forward=True)
            bf = self._def_root(self.u_free, forward=False)
            assert af <= bf
            self._interval = (af, bf)
        return self._interval

    # -- probe resolution ----------------------------------------------------

    def probe_gap(self, x: Fraction) -> Fraction:
        """Starting width for probe windows around x; shrunk on demand."""
        return Fraction(1, 2 * self._eps_scale * x.denominator)

    def resolve(self, x) -> Resolution:
        """Place the slice optimum relative to x.  Exact, no tolerance."""
        x = Fraction(x)
        hit = self._resolutions.get(x)
        if hit is not None:
            return hit
        out = self._resolve(x)
        self._resolutions[x] = out
        return out

    def _resolve(self, x: Fraction) -> Resolution:
        af, bf = self.feasible_interval()
        if x < af:
            return OptRight
        if x > bf:
            return OptLeft
        if af == bf:
            return OptimalAt(af)
        fx = self.sample(x)
        assert fx.feasible
        eps = min(self.probe_gap(x), bf - af)
        for _ in range(80):
            cl = cr = None
            cert_l = cert_r = False
            s1 = s2 = None
            t1 = t2 = None
            if x > af:
                t1 = x - min(eps, x - af)
                s1 = self.sample(t1)
                assert s1.feasible
                cl = (fx.value - s1.value) / (x - t1)
                cert_l = s1.report.right_slope(self.free, t1) == cl
            if x < bf:
                t2 = x + min(eps, bf - x)
                s2 = self.sample(t2)
                assert s2.feasible
                cr = (s2.value - fx.value) / (t2 - x)
                cert_r = s2.report.left_slope(self.free, t2) == cr
            # Chord verdicts need no certificate: concavity alone makes a
            # flat-or-falling left chord push the smallest maximizer left,
            # and a rising right chord push it right.
            if cl is not None and cl <= 0:
                return OptLeft
            if cr is not None and cr > 0:
                return OptRight
            if cl is None:
                if cert_r:
                    return OptimalAt(x)
            elif cr is None:
                if cert_l:
                    return OptimalAt(x)
            elif cert_l and cert_r:
                cross = ((s2.value - cr * t2) - (s1.value - cl * t1)) / (cl - cr)
                assert cross == x, "certified probe lines miss the query point"
                return OptimalAt(x)
            eps /= 16
        raise AssertionError("probe window failed to certify a verdict")

    # -- parametric solve ----------------------------------------------------

    def solve(self) -> SliceOpt:
        """Smallest maximizer of F along the slice, with flow and cut.

        Needs an affine deviation on the free set; nonlinear shapes go
        through the dedicated concave solver.
        """
        dev = self.inst.sets[self.free].deviation
        if dev.degree > 1:
            raise UnsupportedDeviation(
                "parametric slice solve handles affine deviations only"
            )
        af, bf = self.feasible_interval()
        if af == bf:
            return self._finish(af)
        box = [af, bf]

        def locate(tau: Fraction) -> Order:
            if tau < box[0]:
                return Order.GREATER
            if tau > box[1]:
                return Order.LESS
            res = self.resolve(tau)
            if res.side == "left":
                box[1] = tau
                return Order.LESS
            if res.side == "right":
                box[0] = tau
                return Order.GREATER
            raise _PinnedAt(res.at)

        def resolver(index: int, tau: Fraction) -> Order:
            assert index == 0
            return locate(tau)

        try:
            total = self._simulate(resolver, box)
        except _PinnedAt as p:
            return self._finish(p.value)
        a, b = total.const, total.coeffs[0]
        star = box[1] if b > 0 else box[0]
        out = self._finish(star)
        assert out.value == a + b * star, "affine value disagrees at the optimum"
        return out

    def _finish(self, x: Fraction) -> SliceOpt:
        s = self.sample(x)
        assert s.feasible
        return SliceOpt(x, s.value, s.flows, s.report)

    def _simulate(
        self, resolver: Callable[[int, Fraction], Order], box: list[Fraction]
    ) -> AffineValue:
        inst = self.inst
        g = inst.graph
        zero = AffineValue.constant(0, 1)
        lam = AffineValue.parameter(0, 1)
        dev = inst.sets[self.free].deviation
        c0 = dev.poly.coeffs[0]
        c1 = dev.poly.coeffs[1] if dev.degree >= 1 else _ZERO
        dev_aff = AffineValue(c0, (c1,))
        lower: list[AffineValue] = []
        upper: list[AffineValue] = []
        for e in g.edges:
            i = inst.set_of_edge(e.id)
            cap = AffineValue.constant(inst.capacities[e.id], 1)
            if i is None:
                lower.append(zero)
                upper.append(cap)
            elif i != self.free:
                fx = self.fixed[i]
                di = inst.sets[i].deviation(fx)
                lower.append(AffineValue.constant(fx, 1))
                upper.append(
                    AffineValue.constant(min(inst.capacities[e.id], di), 1)
                )
            else:
                lower.append(lam)
                if affine_compare(dev_aff, cap, resolver) is Order.GREATER:
                    upper.append(cap)
                else:
                    upper.append(dev_aff)

        def cmp(x: AffineValue, y: AffineValue) -> Order:
            return affine_compare(x, y, resolver)

        n = inst.n
        sigma, tau_node = n, n + 1
        net = _SymNet(n + 2, zero, cmp)
        for e in g.edges:
            net.add(e.tail, e.head, upper[e.id] - lower[e.id])
        excess = [zero] * n
        for e in g.edges:
            excess[e.head] = excess[e.head] + lower[e.id]
            excess[e.tail] = excess[e.tail] - lower[e.id]
        big = AffineValue.constant(sum(inst.capacities) + 1, 1)
        ts = net.add(g.sink, g.source, big)
        helpers = [ts]
        required = zero
        for v in range(n):
            sign = cmp(excess[v], zero)
            if sign is Order.GREATER:
                helpers.append(net.add(sigma, v, excess[v]))
                required = required + excess[v]
            elif sign is Order.LESS:
                helpers.append(net.add(v, tau_node, -excess[v]))
        got = net.max_flow(sigma, tau_node)
        short = required - got
        # The whole current interval is feasible, so the circulation covers
        # every lower bound across it, not just at one point.
        assert short.eval((box[0],)) == 0 and short.eval((box[1],)) == 0
        carried = net.cap[ts ^ 1]
        for a in helpers:
            net.disable(a)
        return carried + net.max_flow(g.source, g.sink)


class _SymNet:
    """Residual network whose capacities are affine forms in one parameter.

    Mirrors the integer engine arc for arc; every branch taken depends on
    the comparison callback, so a consistent resolver makes the run replay
    the concrete algorithm at the (unknown) optimum.
    """

    __slots__ = ("n", "to", "cap", "adj", "zero", "cmp")

    def __init__(self, n: int, zero: AffineValue, cmp):
        self.n = n
        self.to: list[int] = []
        self.cap: list[AffineValue] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.zero = zero
        self.cmp = cmp

    def add(self, u: int, v: int, c: AffineValue) -> int:
        a = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.adj[u].append(a)
        self.to.append(u)
        self.cap.append(self.zero)
        self.adj[v].append(a + 1)
        return a

    def disable(self, a: int) -> None:
        self.cap[a] = self.zero
        self.cap[a ^ 1] = self.zero

    def _positive(self, a: int) -> bool:
        return self.cmp(self.cap[a], self.zero) is Order.GREATER

    def _bfs(self, s: int, t: int) -> list[int] | None:
        parent = [-1] * self.n
        parent[s] = -2
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.adj[u]:
                if self._positive(a):
                    v = self.to[a]
                    if parent[v] == -1:
                        parent[v] = a
                        if v == t:
                            return parent
                        q.append(v)
        return None

    def max_flow(self, s: int, t: int) -> AffineValue:
        total = self.zero
        rounds = 4 * self.n * self.n * self.n + 64
        for _ in range(rounds):
            parent = self._bfs(s, t)
            if parent is None:
                return total
            push = None
            v = t
            while v != s:
                a = parent[v]
                c = self.cap[a]
                if push is None or self.cmp(c, push) is Order.LESS:
                    push = c
                v = self.to[a ^ 1]
            v = t
            while v != s:
                a = parent[v]
                self.cap[a] = self.cap[a] - push
                self.cap[a ^ 1] = self.cap[a ^ 1] + push
                v = self.to[a ^ 1]
            total = total + push
        raise AssertionError("symbolic augmentation failed to terminate")


def resolve_comparison(
    inst: Instance,
    lam,
    set_index: int = 0,
    fixed: dict[int, Fraction] | None = None,
) -> Resolution:
    """Compare a candidate parameter value against the slice optimum.

    For a single-set instance ``fixed`` may be omitted.  With several sets
    the other parameters must be pinned, which selects the slice on which
    the comparison is made.  Raises Infeasible when the slice is empty.
    """
    if inst.k < 1:
        raise ValidationError("instance has no homologous set")
    if fixed is None:
        if inst.k != 1:
            raise ValidationError("fixed values required when several sets exist")
        fixed = {}
    return Slice(inst, set_index, fixed).resolve(Fraction(lam))


def solve_simple_constant(inst: Instance):
    """Exact optimum for one homologous set with a constant-shift deviation.

    Returns the solve result together with the full breakpoint profile of
    the value function, computed on the same memoized evaluator.
    """
    if inst.k != 1:
        raise ValidationError("expects exactly one homologous set")
    if not inst.sets[0].deviation.is_constant_shift:
        raise UnsupportedDeviation(
            "constant-shift deviation required; use the general entry points"
        )
    sl = Slice(inst, 0, {})
    opt = sl.solve()
    res = SolveResult(
        (opt.x,), opt.value, FlowAssignment(opt.flows, opt.value), opt.report
    )
    from .profile import breakpoint_profile

    prof = breakpoint_profile(inst, _slice=sl)
    return res, prof
