"""Seeded random instances for property tests and regression fixtures."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import ValidationError
from .graph import Graph
from .instance import Instance, make_instance
from .values import DeviationFn

__all__ = ["generate_random"]

DEVIATION_KINDS = ("const", "affine", "quadratic")


def _draw_deviation(rng: random.Random, kind: str, cap_max: int) -> DeviationFn:
    if kind == "const":
        return DeviationFn.constant_shift(rng.randint(0, 2))
    if kind == "affine":
        return DeviationFn.affine(rng.randint(1, 3), rng.randint(0, 2))
    # Concave quadratic kept valid on [0, cap_max]: with curvature -1/(2d)
    # and d >= cap_max the slope stays nonnegative there, and slope >= 2
    # keeps the bound above the identity.
    d = cap_max * rng.randint(1, 3)
    return DeviationFn.polynomial(
        (rng.randint(0, 2), rng.randint(2, 3), Fraction(-1, 4 * d))
    )


def generate_random(
    n: int,
    m: int,
    k: int,
    cap_max: int = 5,
    deviation_kind: str = "const",
    seed: int = 0,
) -> Instance:
    """Deterministic random instance: s-t connected, disjoint sets.

    Nodes are 0..n-1 with source 0 and sink n-1.  A random simple s-t path
    is laid down first so the sink is always reachable; remaining edges are
    uniform random pairs (parallels allowed, self-loops not).  Capacities
    are integers in 1..cap_max.  k disjoint homologous sets of one to three
    edges each get a deviation drawn from the named family: "const" is
    x+c with c in 0..2, "affine" has slope 1..3 and intercept 0..2, and
    "quadratic" is a concave parabola valid on [0, cap_max].

    The same arguments always produce the identical instance.
    """
    if n < 2:
        raise ValidationError("need at least 2 nodes")
    if m < 1:
        raise ValidationError("need at least 1 edge")
    if not 0 <= k <= m:
        raise ValidationError("set count must lie in 0..m")
    if cap_max < 1:
        raise ValidationError("cap_max must be positive")
    if deviation_kind not in DEVIATION_KINDS:
        raise ValidationError(f"unknown deviation kind {deviation_kind!r}")
    rng = random.Random(seed)
    g = Graph()
    for _ in range(n):
        g.add_node()
    g.source, g.sink = 0, n - 1
    hops = rng.randint(0, min(n - 2, m - 1))
    path = [0] + rng.sample(range(1, n - 1), hops) + [n - 1]
    for u, v in zip(path, path[1:]):
        g.add_edge(u, v)
    while g.m < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            g.add_edge(u, v)
    caps = [rng.randint(1, cap_max) for _ in range(m)]
    ids = list(range(m))
    rng.shuffle(ids)
    sets = []
    pos = 0
    for left in range(k, 0, -1):
        size = rng.randint(1, min(3, m - pos - (left - 1)))
        sets.append(
            (ids[pos : pos + size], _draw_deviation(rng, deviation_kind, cap_max))
        )
        pos += size
    return make_instance(g, caps, sets)
