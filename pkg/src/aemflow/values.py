"""Symbolic values carried through parameter-dependent computations.

The parametric solvers simulate flow algorithms on a network whose bounds
depend on one or more unknown parameters.  Flow amounts and residual
capacities then live in a small symbolic domain:

* :class:`AffineValue` represents ``a + b1*x1 + ... + bk*xk`` with exact
  rational coefficients.  Flow updates only ever add, subtract and scale,
  so the domain is closed under everything the simulation does.
* :class:`PolyValue` represents a univariate polynomial ``c0 + c1*x + ...``
  used when deviation functions are nonlinear.  Again only addition,
  subtraction and scalar multiplication occur.

Ordering two affine values reduces to locating the unknown parameter
relative to one rational threshold.  :func:`affine_compare` performs that
reduction and delegates the actual location query to a resolver callback,
which is where a surrounding search algorithm plugs in.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

__all__ = [
    "Order",
    "AffineValue",
    "PolyValue",
    "Root",
    "DeviationFn",
    "affine_compare",
    "poly_roots",
]

_ZERO = Fraction(0)


class Order(enum.Enum):
    """Outcome of an exact comparison."""

    LESS = -1
    EQUAL = 0
    GREATER = 1

    def flip(self) -> "Order":
        return Order(-self.value)


# A resolver answers: where does the unknown parameter `index` sit relative
# to `threshold`?  Order.LESS means the parameter is strictly below it.
Resolver = Callable[[int, Fraction], Order]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True)
class AffineValue:
    """An exact affine form ``const + sum(coeffs[i] * x_i)``.

    Instances are immutable; arithmetic returns new values.  The number of
    parameters is fixed per computation and both operands of any binary
    operation must agree on it.
    """

    const: Fraction
    coeffs: tuple[Fraction, ...] = ()

    @staticmethod
    def constant(value, nparams: int = 0) -> "AffineValue":
        return AffineValue(_as_fraction(value), (_ZERO,) * nparams)

    @staticmethod
    def parameter(index: int, nparams: int, scale=1, shift=0) -> "AffineValue":
        """The form ``shift + scale * x_index`` in an `nparams` space."""
        if not 0 <= index < nparams:
            raise ValueError("parameter index out of range")
        coeffs = [_ZERO] * nparams
        coeffs[index] = _as_fraction(scale)
        return AffineValue(_as_fraction(shift), tuple(coeffs))

    def _check(self, other: "AffineValue") -> None:
        if len(self.coeffs) != len(other.coeffs):
            raise ValueError("affine values over different parameter spaces")

    def __add__(self, other: "AffineValue") -> "AffineValue":
        self._check(other)
        return AffineValue(
            self.const + other.const,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "AffineValue") -> "AffineValue":
        self._check(other)
        return AffineValue(
            self.const - other.const,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "AffineValue":
        return AffineValue(-self.const, tuple(-a for a in self.coeffs))

    def scale(self, factor) -> "AffineValue":
        f = _as_fraction(factor)
        return AffineValue(self.const * f, tuple(a * f for a in self.coeffs))

    def eval(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.coeffs):
            raise ValueError("evaluation point has wrong dimension")
        total = self.const
        for c, x in zip(self.coeffs, point):
            if c:
                total += c * x
        return total

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def free_index(self) -> int | None:
        """Index of the single parameter with a nonzero coefficient, if any."""
        found = None
        for i, c in enumerate(self.coeffs):
            if c:
                if found is not None:
                    return None
                found = i
        return found


def affine_compare(lhs: AffineValue, rhs: AffineValue, resolver: Resolver) -> Order:
    """Order two affine values at the unknown parameter point.

    At most one parameter may have differing coefficients between the two
    operands; the comparison then reduces to that parameter against the
    rational threshold where the two forms intersect.  The resolver is asked
    to place the parameter relative to the threshold and may run arbitrary
    work of its own (typically max-flow evaluations), so it must be safe to
    call re-entrantly.
    """
    diff = lhs - rhs
    idx = None
    for i, c in enumerate(diff.coeffs):
        if c:
            if idx is not None:
                raise ValueError("comparison differs in more than one parameter")
            idx = i
    if idx is None:
        if diff.const < 0:
            return Order.LESS
        if diff.const > 0:
            return Order.GREATER
        return Order.EQUAL
    slope = diff.coeffs[idx]
    threshold = -diff.const / slope
    where = resolver(idx, threshold)
    if where is Order.EQUAL:
        return Order.EQUAL
    # diff(x) = slope * (x - threshold): sign follows the side and the slope.
    if (where is Order.GREATER) == (slope > 0):
        return Order.GREATER
    return Order.LESS


@dataclass(frozen=True)
class PolyValue:
    """A univariate polynomial with rational coefficients, low degree.

    ``coeffs[i]`` multiplies ``x**i``.  Trailing zero coefficients are
    normalised away so equal polynomials compare equal.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(_as_fraction(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @staticmethod
    def constant(value) -> "PolyValue":
        return PolyValue((_as_fraction(value),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __add__(self, other: "PolyValue") -> "PolyValue":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [_ZERO] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return PolyValue(tuple(a))

    def __sub__(self, other: "PolyValue") -> "PolyValue":
        return self + other.scale(-1)

    def __neg__(self) -> "PolyValue":
        return self.scale(-1)

    def scale(self, factor) -> "PolyValue":
        f = _as_fraction(factor)
        return PolyValue(tuple(c * f for c in self.coeffs))

    def eval(self, x: Fraction) -> Fraction:
        total = _ZERO
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def derivative(self) -> "PolyValue":
        return PolyValue(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class Root:
    """A real root location: exact rational, or an isolating bracket.

    For a bracketed root the polynomial has strictly opposite signs at
    ``lo`` and ``hi`` and exactly one root in between.
    """

    lo: Fraction
    hi: Fraction

    @staticmethod
    def exact(value: Fraction) -> "Root":
        return Root(value, value)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("root is not exact")
        return self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def simplest_rational_in(lo, hi) -> Fraction:
    """The smallest-denominator rational in [lo, hi], smallest value on ties."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if math.ceil(lo) <= math.floor(hi):
        return Fraction(math.ceil(lo))
    a = math.floor(lo)
    return a + 1 / simplest_rational_in(1 / (hi - a), 1 / (lo - a))


def _sqrt_exact(x: Fraction) -> Fraction | None:
    """Rational square root of `x`, or None when irrational."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    sp, sq = math.isqrt(p), math.isqrt(q)
    if sp * sp == p and sq * sq == q:
        return Fraction(sp, sq)
    return None


def _bisect_root(poly: PolyValue, lo: Fraction, hi: Fraction, width: Fraction) -> Root:
    """Shrink a strict sign-change bracket below `width`.

    Probes at the simplest rational in the middle third, not the exact
    midpoint: endpoint denominators then stay near 1/width instead of
    doubling every step, which matters when callers evaluate the bracket
    ends many times afterwards.
    """
    flo = poly.eval(lo)
    assert flo != 0 and poly.eval(hi) != 0 and (flo < 0) != (poly.eval(hi) < 0)
    neg_left = flo < 0
    while hi - lo > width:
        w = hi - lo
        mid = simplest_rational_in(lo + w / 3, hi - w / 3)
        fm = poly.eval(mid)
        if fm == 0:
            return Root.exact(mid)
        if (fm < 0) == neg_left:
            lo = mid
        else:
            hi = mid
    return Root(lo, hi)


def _quadratic_roots(poly: PolyValue, width: Fraction) -> list[Root]:
    c0 = poly.coeffs[0] if len(poly.coeffs) > 0 else _ZERO
    c1 = poly.coeffs[1] if len(poly.coeffs) > 1 else _ZERO
    c2 = poly.coeffs[2]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    vertex = -c1 / (2 * c2)
    if disc == 0:
        return [Root.exact(vertex)]
    s = _sqrt_exact(disc)
    if s is not None:
        r1 = (-c1 - s) / (2 * c2)
        r2 = (-c1 + s) / (2 * c2)
        return sorted([Root.exact(r1), Root.exact(r2)], key=lambda r: r.lo)
    # Irrational pair, symmetric about the vertex.  An upper bound on the
    # half-width sqrt(disc)/(2|c2|) gives sign-change brackets on each side.
    p, q = disc.numerator, disc.denominator
    s_hi = Fraction(math.isqrt(p * q) + 1, q)
    half = s_hi / (2 * abs(c2))
    left = _bisect_root(poly, vertex - half, vertex, width)
    right = _bisect_root(poly, vertex, vertex + half, width)
    return [left, right]


def _highdeg_roots(poly: PolyValue, width: Fraction) -> list[Root]:
    # Degrees above two fall back to exact isolation from sympy; the rest of
    # the library only needs brackets with rational endpoints.
    from sympy import Poly, Rational, Symbol

    x = Symbol("x")
    coeffs = [Rational(c.numerator, c.denominator) for c in reversed(poly.coeffs)]
    sp = Poly(coeffs, x)
    out: list[Root] = []
    for (a, b), _mult in sp.intervals(eps=Rational(width.numerator, width.denominator)):
        lo = Fraction(a.p, a.q)
        hi = Fraction(b.p, b.q)
        if lo == hi:
            out.append(Root.exact(lo))
        else:
            # sympy brackets may touch a root at an endpoint; nudge to a
            # strict sign change so downstream bisection stays valid.
            if poly.eval(lo) == 0:
                out.append(Root.exact(lo))
            elif poly.eval(hi) == 0:
                out.append(Root.exact(hi))
            else:
                out.append(Root(lo, hi))
    out.sort(key=lambda r: r.lo)
    return out


def poly_roots(
    poly: PolyValue,
    lo: Fraction,
    hi: Fraction,
    width: Fraction | None = None,
) -> list[Root]:
    """All real roots of `poly` inside ``[lo, hi]``, sorted, deduplicated.

    Roots of degree <= 2 polynomials are produced in closed form and are
    exact whenever they are rational.  Irrational roots come back as
    brackets no wider than `width`, by default ``2**-64 * (hi - lo)``.
    Callers that re-query the same polynomial on ever smaller intervals
    should pass an absolute `width`, or the interval-relative default
    makes each answer finer than the last for no gain.
    """
    if hi < lo:
        raise ValueError("empty interval")
    if poly.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    deg = poly.degree
    if width is None:
        width = (hi - lo) / (1 << 64)
    if width <= 0:
        width = Fraction(1, 1 << 64)
    if deg == 0:
        return []
    if deg == 1:
        r = -poly.coeffs[0] / poly.coeffs[1]
        roots = [Root.exact(r)]
    elif deg == 2:
        roots = _quadratic_roots(poly, width)
    else:
        roots = _highdeg_roots(poly, width)
    picked: list[Root] = []
    for r in roots:
        if r.hi < lo or r.lo > hi:
            continue
        # Clip brackets protruding past the interval; the sign change is
        # preserved because the interval endpoints are not roots in that case.
        rlo, rhi = r.lo, r.hi
        if not r.is_exact:
            if rlo < lo and PolyValue(poly.coeffs).eval(lo) != 0:
                rlo = lo
            if rhi > hi and PolyValue(poly.coeffs).eval(hi) != 0:
                rhi = hi
        picked.append(Root(rlo, rhi) if not r.is_exact else r)
    return picked


class DeviationFn:
    """A monotone deviation bound Delta applied to a homologous edge set.

    The set's minimum flow value f_min constrains every member flow to lie
    within ``[f_min, Delta(f_min)]``.  Three shapes are supported:

    * ``constant_shift(c)``:   Delta(x) = x + c
    * ``affine(slope, intercept)``:  Delta(x) = slope*x + intercept
    * ``polynomial(coeffs)``:  rational-coefficient polynomial, low degree

    Construction checks only shape-local conditions (slope >= 1, c >= 0).
    Domain conditions, Delta monotone and Delta(x) >= x on [0, u_R], depend
    on the instance and are checked via :meth:`validate_on`.
    """

    __slots__ = ("poly", "kind")

    KIND_SHIFT = "shift"
    KIND_AFFINE = "affine"
    KIND_POLY = "poly"

    def __init__(self, poly: PolyValue, kind: str):
        self.poly = poly
        self.kind = kind

    @staticmethod
    def constant_shift(c) -> "DeviationFn":
        c = _as_fraction(c)
        if c < 0:
            raise ValueError("constant shift must be nonnegative")
        return DeviationFn(PolyValue((c, Fraction(1))), DeviationFn.KIND_SHIFT)

    @staticmethod
    def affine(slope, intercept=0) -> "DeviationFn":
        slope = _as_fraction(slope)
        intercept = _as_fraction(intercept)
        if slope < 1:
            raise ValueError("affine deviation needs slope >= 1")
        if intercept < 0:
            raise ValueError("affine deviation needs intercept >= 0")
        return DeviationFn(PolyValue((intercept, slope)), DeviationFn.KIND_AFFINE)

    @staticmethod
    def polynomial(coeffs) -> "DeviationFn":
        poly = PolyValue(tuple(_as_fraction(c) for c in coeffs))
        if poly.degree < 0:
            raise ValueError("empty polynomial")
        return DeviationFn(PolyValue(poly.coeffs), DeviationFn.KIND_POLY)

    def __call__(self, x: Fraction) -> Fraction:
        return self.poly.eval(_as_fraction(x))

    def derivative_at(self, x: Fraction) -> Fraction:
        return self.poly.derivative().eval(_as_fraction(x))

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def is_constant_shift(self) -> bool:
        return self.poly.degree == 1 and self.poly.coeffs[1] == 1

    @property
    def is_concave(self) -> bool:
        """True when the shape is concave (certificate: no positive curvature)."""
        if self.poly.degree <= 1:
            return True
        if self.poly.degree == 2:
            return self.poly.coeffs[2] <= 0
        # Higher degrees: concave on the half-line only if curvature never
        # turns positive; checked conservatively on the second derivative's
        # coefficients (sufficient for the shapes generators emit).
        second = self.poly.derivative().derivative()
        return all(c <= 0 for c in second.coeffs)

    def shift_amount(self) -> Fraction:
        if not self.is_constant_shift:
            raise ValueError("not a constant shift")
        return self.poly.coeffs[0]

    def validate_on(self, lo: Fraction, hi: Fraction) -> None:
        """Check Delta monotone nondecreasing and Delta(x) >= x on [lo, hi].

        Raises ValueError when either fails.  For degree <= 2 both checks
        are exact endpoint/vertex tests; higher degrees are checked at the
        endpoints and at every interior root of the relevant derivative.
        """
        lo = _as_fraction(lo)
        hi = _as_fraction(hi)
        if hi < lo:
            raise ValueError("empty domain")
        deriv = self.poly.derivative()
        for x in self._extreme_points(deriv, lo, hi):
            if deriv.eval(x) < 0:
                raise ValueError(f"deviation not monotone at x={x}")
        gap = self.poly - PolyValue((Fraction(0), Fraction(1)))
        for x in self._extreme_points(gap.derivative(), lo, hi):
            if gap.eval(x) < 0:
                raise ValueError(f"deviation below identity at x={x}")

    @staticmethod
    def _extreme_points(deriv: PolyValue, lo: Fraction, hi: Fraction) -> list[Fraction]:
        pts = [lo, hi]
        if deriv.degree >= 1:
            for root in poly_roots(deriv, lo, hi):
                pts.append(root.midpoint())
        return pts

    def crossing(self, target: Fraction, lo: Fraction, hi: Fraction) -> Root | None:
        """Where Delta(x) == target on [lo, hi], if anywhere.

        Monotone deviations cross any level at most once up to plateaus;
        the smallest crossing is returned.
        """
        target = _as_fraction(target)
        diff = self.poly - PolyValue((target,))
        if diff.is_zero():
            return Root.exact(_as_fraction(lo))
        roots = poly_roots(diff, _as_fraction(lo), _as_fraction(hi))
        return roots[0] if roots else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DeviationFn)
            and self.kind == other.kind
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.poly))

    def __repr__(self) -> str:
        return f"DeviationFn({self.kind}, {list(self.poly.coeffs)})"
