"""Single-set solver for concave deviation bounds.

With one homologous set and a concave bound, F(lam), the max-flow value
of the network whose member edges carry bounds [lam, min(u, Delta(lam))],
is concave on the feasible interval: lower bounds move linearly, upper
bounds are minima of concave functions, and the flow LP value inherits
their shape.  The domain is cut where Delta crosses a member capacity so
that each piece fixes which side of the min is active; on a piece, every
quantity the augmenting-path engine touches is a polynomial in lam of the
deviation's degree, and every branch the engine takes is the sign of such
a polynomial at the unknown maximizer.

Signs resolve by isolating the polynomial's roots and locating the
maximizer relative to them through concrete F evaluations.  Two
evaluations with different values place every maximizer strictly on one
side (falling chords of a concave curve); equal values pin a flat top
whose left end bounds the smallest maximizer.  When neither applies the
run forks at the blocking root and both presumptions are explored depth
first, so a wrong presumption costs a redundant run but never an
incorrect answer: a completed run's value polynomial is trusted only on
its final interval, and every reported candidate is re-evaluated
concretely.

Rational comparison thresholds keep the search exact.  Irrational ones
(possible from degree two up) are isolated to width u_R * 2**-64 and
candidates snap to the simplest rational inside the bracket, so answers
are exact whenever the optimum is a rational of moderate denominator and
off by at most the bracket width otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .errors import UnsupportedDeviation, ValidationError
from .graph import FlowAssignment
from .instance import FEvaluator, Instance, SolveResult
from .ksets import simplest_rational_in
from .parametric import _PinnedAt, _SymNet
from .values import Order, PolyValue, poly_roots

__all__ = ["solve_concave_single"]

_ZERO = Fraction(0)


class _Fork(Exception):
    """A sign was needed at a root no evaluation pair can place yet."""

    def __init__(self, at: Fraction):
        super().__init__(f"fork at {at}")
        self.at = at


def _feasible_edge(val, top: Fraction, tol: Fraction) -> Fraction:
    """Largest known-feasible parameter in [0, top], to width tol."""
    if val(top) is not None:
        return top
    lo, hi = _ZERO, top
    assert val(lo) is not None, "the zero parameter must be feasible"
    while hi - lo > tol:
        w = hi - lo
        mid = simplest_rational_in(lo + w / 3, hi - w / 3)
        if val(mid) is None:
            hi = mid
        else:
            lo = mid
    snap = simplest_rational_in(lo, hi)
    if snap != lo and val(snap) is not None:
        lo = snap
    return lo


def _run(
    inst: Instance,
    box: list[Fraction],
    lower: list[PolyValue],
    upper: list[PolyValue],
    sign_of: Callable[[PolyValue], Order],
) -> PolyValue:
    """Value polynomial of F on the current box, by symbolic augmentation."""
    zero = PolyValue.constant(0)

    def cmp(a: PolyValue, b: PolyValue) -> Order:
        d = a - b
        if d.is_zero():
            return Order.EQUAL
        if d.degree == 0:
            return Order.GREATER if d.coeffs[0] > 0 else Order.LESS
        return sign_of(d)

    g = inst.graph
    n = inst.n
    sigma, tau_node = n, n + 1
    net = _SymNet(n + 2, zero, cmp)
    for e in g.edges:
        net.add(e.tail, e.head, upper[e.id] - lower[e.id])
    excess = [zero] * n
    for e in g.edges:
        excess[e.head] = excess[e.head] + lower[e.id]
        excess[e.tail] = excess[e.tail] - lower[e.id]
    big = PolyValue.constant(sum(inst.capacities) + 1)
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
    assert short.eval(box[0]) == 0 and short.eval(box[1]) == 0, (
        "lower bounds uncovered inside the feasible interval"
    )
    carried = net.cap[ts ^ 1]
    for a in helpers:
        net.disable(a)
    return carried + net.max_flow(g.source, g.sink)


def solve_concave_single(inst: Instance) -> SolveResult:
    """Smallest maximizer of F for one homologous set, concave bound."""
    for hs in inst.sets:
        if not hs.deviation.is_concave:
            raise UnsupportedDeviation("deviation bound is not concave")
    if inst.k != 1:
        raise ValidationError(
            "concave solve handles exactly one homologous set, "
            f"got {inst.k}"
        )
    dev = inst.sets[0].deviation
    top = inst.u_R(0)
    ev = FEvaluator(inst)

    def val(x: Fraction):
        s = ev.sample((x,))
        return s.value if s.feasible else None

    tol = Fraction(top, 1 << 64) if top else Fraction(1, 1 << 64)
    edge = _feasible_edge(val, top, tol)
    evid = [_ZERO, edge]
    vals: dict[Fraction, Fraction] = {}

    def fval(x: Fraction) -> Fraction:
        v = val(x)
        assert v is not None, "feasible interval sampled infeasible"
        vals[x] = v
        return v

    def place(x: Fraction):
        """Locate the smallest maximizer against x from known values."""
        fx = fval(x)
        for y, fy in vals.items():
            if y == x:
                continue
            if fy > fx:
                return ("left", x) if y < x else ("right", x)
            if fy == fx:
                return ("left", min(x, y))
        return None

    def resolve_point(x: Fraction, lo: Fraction, hi: Fraction):
        out = place(x)
        if out is not None:
            return out
        step = hi - lo
        for _ in range(80):
            step /= 16
            probed = False
            wl, wh = x - step, x - step / 2
            if wl > lo:
                p = simplest_rational_in(wl, wh)
                if p not in vals:
                    fval(p)
                    probed = True
            wl, wh = x + step / 2, x + step
            if wh < hi:
                p = simplest_rational_in(wl, wh)
                if p not in vals:
                    fval(p)
                    probed = True
            out = place(x)
            if out is not None:
                return out
            if step <= tol or not probed:
                return None
        return None

    def make_sign(box: list[Fraction]):
        def sign_of(d: PolyValue) -> Order:
            for _ in range(200):
                if box[0] == box[1]:
                    raise _PinnedAt(box[0])
                reps = []
                for r in poly_roots(d, box[0], box[1], width=tol):
                    pts = (r.lo,) if r.is_exact else (r.lo, r.hi)
                    for x in pts:
                        if box[0] < x < box[1]:
                            reps.append(x)
                if not reps:
                    mid = (box[0] + box[1]) / 2
                    v = d.eval(mid)
                    assert v != 0, "midpoint hit an unreported root"
                    return Order.GREATER if v > 0 else Order.LESS
                x = min(reps)
                out = resolve_point(x, box[0], box[1])
                if out is None:
                    raise _Fork(x)
                side, bound = out
                if side == "left":
                    evid[1] = min(evid[1], bound)
                    if bound < box[0]:
                        raise _PinnedAt(box[0])
                    box[1] = min(box[1], bound)
                else:
                    evid[0] = max(evid[0], bound)
                    if bound > box[1]:
                        raise _PinnedAt(box[1])
                    box[0] = max(box[0], bound)
                assert evid[0] <= evid[1], "evidence interval collapsed"
            raise AssertionError("sign resolution failed to converge")

        return sign_of

    fval(_ZERO)
    if edge == 0:
        return _result_at(inst, ev, _ZERO)

    members = set(inst.sets[0].edges)
    splits = {_ZERO, edge}
    for c in sorted({inst.capacities[e] for e in inst.sets[0].edges}):
        r = dev.crossing(c, _ZERO, edge)
        if r is not None:
            for x in (r.lo, r.hi):
                if 0 < x < edge:
                    splits.add(x)
    pts = sorted(splits)
    lam = PolyValue((_ZERO, Fraction(1)))
    zero = PolyValue.constant(0)
    for a, b in zip(pts, pts[1:]):
        fval(a)
        fval(b)
        mid = (a + b) / 2
        lower: list[PolyValue] = []
        upper: list[PolyValue] = []
        for e in inst.graph.edges:
            cap = PolyValue.constant(inst.capacities[e.id])
            if e.id in members:
                lower.append(lam)
                upper.append(cap if dev(mid) > inst.capacities[e.id] else dev.poly)
            else:
                lower.append(zero)
                upper.append(cap)
        pending = [(a, b)]
        rounds = 0
        while pending:
            rounds += 1
            assert rounds < 500, "interval exploration failed to converge"
            p, q = pending.pop()
            if evid[1] <= p:
                fval(p)
                continue
            if evid[0] >= q:
                fval(q)
                continue
            box = [max(p, evid[0]), min(q, evid[1])]
            try:
                total = _run(inst, box, lower, upper, make_sign(box))
            except _Fork as f:
                lo, hi = max(p, evid[0]), min(q, evid[1])
                pending.append((lo, f.at))
                pending.append((f.at, hi))
                continue
            except _PinnedAt as pin:
                fval(pin.value)
                continue
            cands = {box[0], box[1]}
            der = total.derivative()
            if der.degree >= 1:
                for r in poly_roots(der, box[0], box[1], width=tol):
                    cands.add(
                        r.value
                        if r.is_exact
                        else simplest_rational_in(r.lo, r.hi)
                    )
            for x in sorted(cands):
                fval(x)
            if box[0] < box[1]:
                w = (box[0] + box[1]) / 2
                assert fval(w) == total.eval(w), (
                    "value polynomial disagrees inside its interval"
                )
    best_v = max(vals.values())
    best_x = min(x for x, v in vals.items() if v == best_v)
    return _result_at(inst, ev, best_x)


def _result_at(inst: Instance, ev: FEvaluator, x: Fraction) -> SolveResult:
    s = ev.sample((x,))
    assert s.feasible
    return SolveResult(
        (x,), s.value, FlowAssignment(s.flows, s.value), s.report
    )
