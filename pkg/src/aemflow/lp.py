"""Exact linear programming over flows and parameters jointly.

With affine nondecreasing deviations the member bounds are linear in the
parameters, so flows f and parameters lam share one program: conservation
equalities, capacity bounds, and per member f >= lam_i together with
f <= Delta_i(lam_i).  Leaving lam_i free rather than pinning it to the
set minimum loses nothing: raising lam_i to min f never breaks an upper
bound when Delta_i is nondecreasing, so the relaxation has the same
optimal value and the same set of achievable parameter vectors.

The reported vector is canonicalized to the lexicographically smallest
optimum: after the value solve, each parameter in turn is minimized with
the value pinned and the earlier parameters fixed.  The flow and the cut
certificate are then recomputed exactly at that vector by the flow
machinery, which re-checks value against certificate.

The backend is a dense two-phase simplex on exact rationals with Bland's
rule, deterministic and cycle-free.  Programs here stay small, tens of
variables, so a textbook tableau is plenty.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedDeviation
from .graph import FlowAssignment
from .instance import FEvaluator, Instance, SolveResult

__all__ = ["solve_lp_constant", "feasible_completion"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(tab, basis, prow, pcol):
    piv = tab[prow][pcol]
    row = tab[prow] = [v / piv for v in tab[prow]]
    for i, r in enumerate(tab):
        if i != prow and r[pcol]:
            f = r[pcol]
            tab[i] = [a - f * b for a, b in zip(r, row)]
    basis[prow] = pcol


def _optimize(tab, basis, cost, ncols):
    """Run Bland-rule pivots to optimality; False means unbounded."""
    while True:
        red = list(cost)
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb:
                row = tab[i]
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        enter = next((j for j in range(ncols) if red[j] < 0), -1)
        if enter == -1:
            return True
        leave, best = -1, None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best, leave = ratio, i
        if leave == -1:
            return False
        _pivot(tab, basis, leave, enter)


def _simplex_min(c, A, b):
    """Minimize c.x over A x <= b, x >= 0; None when infeasible."""
    m, n = len(A), len(c)
    nart = sum(1 for v in b if v < 0)
    base = n + m
    tab, basis, art = [], [], 0
    for i in range(m):
        row = list(A[i]) + [_ZERO] * (m + nart) + [b[i]]
        row[n + i] = _ONE
        if b[i] < 0:
            row = [-v for v in row]
            col = base + art
            row[col] = _ONE
            art += 1
            basis.append(col)
        else:
            basis.append(n + i)
        tab.append(row)

    if nart:
        cost1 = [_ZERO] * base + [_ONE] * nart
        ok = _optimize(tab, basis, cost1, base + nart)
        assert ok, "phase one is bounded below by zero"
        if sum(tab[i][-1] for i, bi in enumerate(basis) if bi >= base):
            return None
        for i, bi in enumerate(basis):
            if bi >= base:
                piv = next((j for j in range(base) if tab[i][j]), None)
                if piv is not None:
                    _pivot(tab, basis, i, piv)
        keep = [i for i, bi in enumerate(basis) if bi < base]
        tab = [tab[i][:base] + [tab[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]

    cost2 = list(c) + [_ZERO] * m
    ok = _optimize(tab, basis, cost2, base)
    assert ok, "flow programs are bounded by their capacities"
    x = [_ZERO] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tab[i][-1]
    return x


def _check_affine(inst: Instance) -> None:
    for i, hs in enumerate(inst.sets):
        poly = hs.deviation.poly
        if poly.degree > 1:
            raise UnsupportedDeviation(
                f"set {i}: linear programming needs affine deviations"
            )
        if poly.degree == 1 and poly.coeffs[1] < 0:
            raise UnsupportedDeviation(
                f"set {i}: decreasing deviations are outside the exact "
                "relaxation"
            )


class _Program:
    """Shared constraint rows; objectives and pins vary per solve."""

    def __init__(self, inst: Instance):
        self.inst = inst
        m, k = inst.m, inst.k
        self.nvar = m + k
        self.rows: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []

        def add(pairs, limit):
            row = [_ZERO] * self.nvar
            for j, coeff in pairs:
                row[j] = Fraction(coeff)
            self.rows.append(row)
            self.rhs.append(Fraction(limit))

        for v in range(inst.n):
            if v in (inst.graph.source, inst.graph.sink):
                continue
            pairs = {}
            for e in inst.graph.edges:
                if e.head == v:
                    pairs[e.id] = pairs.get(e.id, _ZERO) + 1
                if e.tail == v:
                    pairs[e.id] = pairs.get(e.id, _ZERO) - 1
            add(pairs.items(), 0)
            add([(j, -c) for j, c in pairs.items()], 0)

        for i, hs in enumerate(inst.sets):
            poly = hs.deviation.poly
            a0 = poly.coeffs[0] if poly.coeffs else _ZERO
            a1 = poly.coeffs[1] if poly.degree >= 1 else _ZERO
            for e in hs.edges:
                add([(e, -_ONE), (m + i, _ONE)], 0)
                add([(e, _ONE), (m + i, -a1)], a0)

        for e, u in enumerate(inst.capacities):
            add([(e, _ONE)], u)
        for i in range(k):
            add([(m + i, _ONE)], inst.u_R(i))

        self.value_row = [_ZERO] * self.nvar
        for e in inst.graph.edges:
            if e.tail == inst.graph.source:
                self.value_row[e.id] += 1
            if e.head == inst.graph.source:
                self.value_row[e.id] -= 1

    def solve(self, objective, extra=(), pins=()):
        """Minimize objective; exact variable values, or None if infeasible."""
        rows = list(self.rows)
        rhs = list(self.rhs)
        for row, limit in extra:
            rows.append(row)
            rhs.append(limit)
        for var, val in pins:
            row = [_ZERO] * self.nvar
            row[var] = _ONE
            rows.append(row)
            rhs.append(Fraction(val))
            rows.append([-v for v in row])
            rhs.append(-Fraction(val))
        return _simplex_min(objective, rows, rhs)


def solve_lp_constant(inst: Instance) -> SolveResult:
    """Lexicographically smallest optimum via exact simplex."""
    _check_affine(inst)
    prog = _Program(inst)
    m, k = inst.m, inst.k

    goal = [-c for c in prog.value_row]
    xs = prog.solve(goal)
    assert xs is not None, "the all-zero vector is always feasible"
    value = sum(c * x for c, x in zip(prog.value_row, xs))
    value_pin = ((goal, -value),)

    pins: list[tuple[int, Fraction]] = []
    for i in range(k):
        obj = [_ZERO] * prog.nvar
        obj[m + i] = _ONE
        xs = prog.solve(obj, extra=value_pin, pins=pins)
        assert xs is not None, "value pin cannot cut off the optimum"
        pins.append((m + i, xs[m + i]))

    lam = tuple(val for _, val in pins)
    ev = FEvaluator(inst)
    s = ev.sample(lam)
    assert s.feasible
    assert s.value == value, "flow recomputation must match the program"
    return SolveResult(lam, s.value, FlowAssignment(s.flows, s.value), s.report)


def feasible_completion(
    inst: Instance, pinned: dict[int, Fraction] | None = None
) -> tuple[Fraction, ...] | None:
    """A parameter vector extending ``pinned`` whose slice is nonempty.

    Returns None when no extension is feasible.  Exact: the joint program
    describes precisely the vectors whose reparameterized network admits
    a flow.
    """
    _check_affine(inst)
    prog = _Program(inst)
    pins = [
        (inst.m + i, Fraction(v)) for i, v in sorted((pinned or {}).items())
    ]
    xs = prog.solve([_ZERO] * prog.nvar, pins=pins)
    if xs is None:
        return None
    return tuple(xs[inst.m + i] for i in range(inst.k))
