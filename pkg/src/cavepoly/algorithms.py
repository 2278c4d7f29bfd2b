"""The four equivalent polynomial invariants of a polymatroid.

Four independent computations of one polynomial:

* ``cave_polynomial``       -- expands the indicator-product formula
  sum_n 1_P(n) * prod_{i<p} (1 - [n has a neighbor n-e_i+e_j, j>i] t_i^{-1}) t^n
  over the base points, using transiently signed exponents;
* ``stalactite_polynomial`` -- counts, per lattice point, the stalactites
  containing it in the greedy lex-ordered decomposition, with sign
  (-1)^(rank-|n|);
* ``box_polynomial``        -- sums prod_i (t_i^{n_i} - t_i^{n_i-1}) over the
  independence points (factor 1 where n_i = 0);
* ``mobius_polynomial``     -- Mobius values of the independence lattice with
  a maximum adjoined, via the three-case recurrence.

They agree exactly on every polymatroid; the genverify module tests that
differentially.  The Snapper polynomial is reached two ways as well: by
reinterpreting the cave polynomial in the binomial basis, and as the
shifted-binomial sum over the independence points.

The cave formula is tied to the identity coordinate order (its product
skips coordinate p); permuted orders are exercised through the stalactite
route, whose polynomial is order-invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import Polymatroid, as_point
from .errors import (
    DimensionMismatch,
    InternalInvariantFailure,
    NotABasePoint,
    NotComparable,
)
from .geometry import independence_points
from .polyalg import BinomialBasisPoly, MultiPoly, binomial_map


@dataclass(frozen=True)
class LexOrder:
    """Coordinate-priority lexicographic order on lattice points.

    ``permutation`` lists 1-based coordinates from highest to lowest
    priority; points compare by the first differing prioritized coordinate,
    smaller value meaning smaller point.  The identity permutation is the
    standard lex order, under which (0,3) < (1,2) < (2,1).
    """

    permutation: tuple

    def __post_init__(self):
        perm = tuple(self.permutation)
        object.__setattr__(self, "permutation", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError("%r is not a permutation of 1..%d" % (perm, len(perm)))

    @classmethod
    def identity(cls, p: int) -> "LexOrder":
        return cls(tuple(range(1, p + 1)))

    @property
    def p(self) -> int:
        return len(self.permutation)

    def key(self, n):
        return tuple(n[i - 1] for i in self.permutation)

    def sort(self, points) -> list:
        return sorted(points, key=self.key)


@dataclass(frozen=True)
class Stalactite:
    """The hanging cube below ``apex``: {apex - e_J : J subset of directions}."""

    apex: tuple
    directions: frozenset
    members: frozenset


class MobiusTable:
    """Mobius values on the independence points; anything else maps to 0.

    Instances may be shared through result caches: treat them as read-only.
    """

    __slots__ = ("p", "rank", "values")

    def __init__(self, p: int, rank: int, values: dict):
        self.p = p
        self.rank = rank
        self.values = dict(values)

    def __getitem__(self, n) -> int:
        return self.values.get(tuple(n), 0)

    def items(self):
        return self.values.items()

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, MobiusTable):
            return NotImplemented
        return self.p == other.p and self.values == other.values

    def __repr__(self):
        return "MobiusTable(p=%d, rank=%d, %d points)" % (self.p, self.rank, len(self.values))


def _resolve_order(P: Polymatroid, order) -> LexOrder:
    if order is None:
        return LexOrder.identity(P.p)
    if order.p != P.p:
        raise DimensionMismatch("order on %d coordinates, polymatroid has %d" % (order.p, P.p))
    return order


def neighbors(P: Polymatroid, u) -> frozenset:
    """All (l, j, w) with w = u - e_l + e_j a base point, l != j (1-based)."""
    u = as_point(u)
    if u not in P.points:
        raise NotABasePoint("%s is not a base point" % (u,))
    found = set()
    for ell in range(P.p):
        if u[ell] == 0:
            continue
        for j in range(P.p):
            if j == ell:
                continue
            w = list(u)
            w[ell] -= 1
            w[j] += 1
            w = tuple(w)
            if w in P.points:
                found.add((ell + 1, j + 1, w))
    return frozenset(found)


def stalactite(u, V, P: Polymatroid) -> Stalactite:
    """St(u; V): directions are the l with some neighbor u - e_l + e_j in V."""
    u = as_point(u)
    if u not in P.points:
        raise NotABasePoint("%s is not a base point" % (u,))
    directions = set()
    for w in V:
        w = as_point(w)
        if w not in P.points:
            raise NotABasePoint("%s is not a base point" % (w,))
        down = [i for i in range(P.p) if w[i] == u[i] - 1]
        up = [i for i in range(P.p) if w[i] == u[i] + 1]
        same = sum(1 for i in range(P.p) if w[i] == u[i])
        if len(down) == 1 and len(up) == 1 and same == P.p - 2:
            directions.add(down[0] + 1)
    for ell in directions:
        if u[ell - 1] < 1:
            raise InternalInvariantFailure("direction %d leaves N^p at apex %s" % (ell, u))
    members = set()
    dirs = sorted(directions)
    for r in range(len(dirs) + 1):
        for sub in itertools.combinations(dirs, r):
            m = list(u)
            for ell in sub:
                m[ell - 1] -= 1
            members.add(tuple(m))
    return Stalactite(u, frozenset(directions), frozenset(members))


def stalactite_decomposition(P: Polymatroid, order: LexOrder | None = None) -> tuple:
    """Greedy stalactites of the base points in ascending ``order``: the i-th
    stalactite is St(a_i; {a_1, ..., a_{i-1}}).  Their union is the cave set."""
    order = _resolve_order(P, order)
    ordered = order.sort(P.points)
    out = []
    for i, apex in enumerate(ordered):
        out.append(stalactite(apex, ordered[:i], P))
    return tuple(out)


def stalactite_counts(P: Polymatroid, order: LexOrder | None = None) -> dict:
    """Number of stalactites of the decomposition containing each point."""
    counts = {}
    for st in stalactite_decomposition(P, order):
        for m in st.members:
            counts[m] = counts.get(m, 0) + 1
    return counts


def stalactite_polynomial(P: Polymatroid, order: LexOrder | None = None) -> MultiPoly:
    """Signed generating function of the stalactite counts.

    Individual stalactites depend on the order; this polynomial does not.
    """
    return _stalactite_polynomial(P, _resolve_order(P, order))


@lru_cache(maxsize=None)
def _stalactite_polynomial(P: Polymatroid, order: LexOrder) -> MultiPoly:
    rank = P.rank
    terms = {}
    for n, c in stalactite_counts(P, order).items():
        sign = -1 if (rank - sum(n)) % 2 else 1
        terms[n] = sign * c
    return MultiPoly(P.p, terms)


@lru_cache(maxsize=None)
def cave_polynomial(P: Polymatroid) -> MultiPoly:
    """Expand the indicator-product formula over the base points.

    Intermediates carry t_i^{-1} factors; every negative exponent multiplies
    a monomial with n_i >= 1, so the final polynomial is ordinary (asserted).
    """
    p = P.p
    acc = {}
    for u in sorted(P.points):
        term = MultiPoly.monomial(p, u)
        for i in range(1, p):  # the formula's product runs i = 1..p-1
            has_neighbor = False
            for j in range(i + 1, p + 1):
                w = list(u)
                w[i - 1] -= 1
                w[j - 1] += 1
                if tuple(w) in P.points:
                    has_neighbor = True
                    break
            if has_neighbor:
                inv = [0] * p
                inv[i - 1] = -1
                term = term * MultiPoly(p, {(0,) * p: 1, tuple(inv): -1})
        for e, c in term.terms.items():
            acc[e] = acc.get(e, 0) + c
    return MultiPoly(p, acc).assert_ordinary()


def box_summands(P: Polymatroid) -> dict:
    """The expanded product for each independence point, keyed by the point.

    The factor for coordinate i is t_i^{n_i} - t_i^{n_i - 1} when n_i >= 1
    and 1 when n_i = 0.  Exposed so the summation can be traced.
    """
    p = P.p
    out = {}
    for n in sorted(independence_points(P).points):
        term = MultiPoly.constant(p, 1)
        for i, ni in enumerate(n):
            if ni >= 1:
                hi = [0] * p
                hi[i] = ni
                lo = [0] * p
                lo[i] = ni - 1
                term = term * MultiPoly(p, {tuple(hi): 1, tuple(lo): -1})
        out[n] = term
    return out


@lru_cache(maxsize=None)
def box_polynomial(P: Polymatroid) -> MultiPoly:
    """Sum of the box products over the independence points."""
    acc = {}
    for term in box_summands(P).values():
        for e, c in term.terms.items():
            acc[e] = acc.get(e, 0) + c
    return MultiPoly(P.p, acc)


def mobius_interval(m, n) -> int:
    """Closed-form Mobius value of the interval [m, n] in the componentwise
    order: (-1)^j when n - m is a 0/1 vector with j ones, else 0."""
    m = as_point(m)
    n = as_point(n)
    if len(m) != len(n):
        raise DimensionMismatch("interval endpoints differ in length")
    diff = [b - a for a, b in zip(m, n)]
    if any(d < 0 for d in diff):
        raise NotComparable("%s is not componentwise <= %s" % (m, n))
    if any(d > 1 for d in diff):
        return 0
    return -1 if sum(diff) % 2 else 1


@lru_cache(maxsize=None)
def mobius_table(P: Polymatroid) -> MobiusTable:
    """Mobius values on all independence points by the three-case recurrence:
    1 on base points, 1 - sum over strictly larger points inside, 0 outside.

    Points are processed level by level in decreasing coordinate sum; the
    sum over {m > n} is aggregated with a suffix-sum sweep over the bounding
    box, so the whole table costs O(rank * p * box) instead of O(|I|^2 * p).
    """
    region = independence_points(P)
    p = P.p
    pts = region.points
    dims = [max(q[i] for q in pts) for i in range(p)]
    sizes = [d + 1 for d in dims]
    strides = [0] * p
    step = 1
    for i in range(p - 1, -1, -1):
        strides[i] = step
        step *= sizes[i]
    box = step

    def flat(n):
        return sum(c * s for c, s in zip(n, strides))

    levels = {}
    for n in pts:
        levels.setdefault(sum(n), []).append(n)

    acc = [0] * box  # Mobius values of all levels strictly above the current one
    values = {}
    for degree in range(P.rank, -1, -1):
        layer = levels.get(degree)
        if not layer:
            continue
        if degree == P.rank:
            for n in layer:
                values[n] = 1
                acc[flat(n)] = 1
            continue
        upper = list(acc)
        for axis in range(p):
            stride = strides[axis]
            block = stride * sizes[axis]
            for outer in range(0, box, block):
                for inner in range(outer, outer + stride):
                    for k in range(sizes[axis] - 2, -1, -1):
                        pos = inner + k * stride
                        upper[pos] += upper[pos + stride]
        for n in layer:
            mu = 1 - upper[flat(n)]
            values[n] = mu
            acc[flat(n)] = mu
    return MobiusTable(p, P.rank, values)


@lru_cache(maxsize=None)
def mobius_polynomial(P: Polymatroid) -> MultiPoly:
    """Generating function of the Mobius values over the independence points."""
    table = mobius_table(P)
    return MultiPoly(P.p, dict(table.items()))


def snapper_from_cave(P: Polymatroid) -> BinomialBasisPoly:
    """Snapper polynomial: the cave polynomial read in the binomial basis,
    t^n becoming prod_i C(t_i + n_i, n_i)."""
    return binomial_map(cave_polynomial(P))


def snapper_eur_larson(P: Polymatroid) -> BinomialBasisPoly:
    """Snapper polynomial as the shifted-binomial sum over the independence
    points: sum_n prod_i C(t_i + n_i - 1, n_i).  Expanded to rational form
    it agrees exactly with ``snapper_from_cave``."""
    region = independence_points(P)
    return BinomialBasisPoly(P.p, {n: 1 for n in region.points}, shift=-1)
