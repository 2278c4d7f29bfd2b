"""Lattice-point machinery around a polymatroid.

Covers the integer points of the independence polytope, truncations, top
elements, and the three-condition cave predicate.  Everything works on
plain coordinate tuples; enumeration iterates the box bounded by the
singleton ranks and filters by all 2^p subset constraints, which is exact
and comfortably fast at desk scale (p <= 6, ranks <= 12).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import (
    Polymatroid,
    as_point,
    is_generalized_polymatroid,
    is_m_convex,
    point_set,
    rank_from_points,
)
from .errors import (
    DimensionMismatch,
    EmptyInput,
    InternalInvariantFailure,
    NotInIndependence,
    NotMConvex,
)


@dataclass(frozen=True, eq=True)
class IndependenceSet:
    """Integer points of the independence polytope of ``source``.

    Downward closed, contains the origin and every point of the source.
    """

    p: int
    points: frozenset
    source: Polymatroid

    def __contains__(self, n):
        return tuple(n) in self.points

    def __iter__(self):
        return iter(sorted(self.points))

    def __len__(self):
        return len(self.points)


def indicator(P: Polymatroid, n) -> int:
    """1 if ``n`` is a base point of ``P`` else 0.

    Accepts arbitrary signed integer vectors of length p: shifted arguments
    like ``n - e_i + e_j`` may leave N^p, and such vectors score 0.
    """
    n = as_point(n)
    if len(n) != P.p:
        raise DimensionMismatch("point has length %d, expected %d" % (len(n), P.p))
    return 1 if n in P.points else 0


@lru_cache(maxsize=None)
def independence_points(P: Polymatroid) -> IndependenceSet:
    """All n in N^p with every subset-sum within rank: I(P) ∩ N^p."""
    rk = rank_from_points(P)
    p = P.p
    index_sets = [[i for i in range(p) if mask >> i & 1] for mask in range(1 << p)]
    members = []
    for n in itertools.product(*(range(rk.of_mask(1 << i) + 1) for i in range(p))):
        if all(sum(n[i] for i in index_sets[mask]) <= rk.values[mask] for mask in range(1, 1 << p)):
            members.append(n)
    return IndependenceSet(p, frozenset(members), P)


def in_independence(P: Polymatroid, n) -> bool:
    """Membership test for I(P) ∩ N^p without enumerating the whole region."""
    n = as_point(n)
    if len(n) != P.p:
        raise DimensionMismatch("point has length %d, expected %d" % (len(n), P.p))
    if any(c < 0 for c in n):
        return False
    rk = rank_from_points(P)
    p = P.p
    for mask in range(1, 1 << p):
        if sum(n[i] for i in range(p) if mask >> i & 1) > rk.values[mask]:
            return False
    return True


def truncate(P: Polymatroid, n) -> Polymatroid:
    """The sub-polymatroid of base points componentwise >= n, for n in I(P).

    The result is always M-convex; the constructor re-asserts this and a
    failure is converted to ``InternalInvariantFailure``.
    """
    n = as_point(n)
    if not in_independence(P, n):
        raise NotInIndependence("%s is not in the independence region" % (n,))
    kept = [u for u in P.points if all(a >= b for a, b in zip(u, n))]
    try:
        return Polymatroid(kept)
    except (NotMConvex, EmptyInput) as exc:  # impossible for n in I(P)
        raise InternalInvariantFailure("truncation at %s is not a polymatroid: %s" % (n, exc))


def top_elements(A) -> frozenset:
    """The members of maximal coordinate sum."""
    pts = point_set(A)
    top = max(sum(q) for q in pts)
    return frozenset(q for q in pts if sum(q) == top)


def truncation_set(A, b) -> frozenset:
    """{n in A : n >= b componentwise}."""
    pts = frozenset(as_point(q) for q in A)
    b = as_point(b)
    for q in pts:
        if len(q) != len(b):
            raise DimensionMismatch("point %s and base %s differ in length" % (q, b))
    return frozenset(q for q in pts if all(x >= y for x, y in zip(q, b)))


@dataclass(frozen=True)
class CaveReport:
    """Outcome of the cave predicate; truthiness is the verdict.

    ``failed_condition`` is 1 (tops not M-convex), 2 (not the stalactite
    union for the given order) or 3 (some truncation is not a generalized
    polymatroid), with a matching ``witness``; both are None on success.
    """

    ok: bool
    failed_condition: int | None
    witness: object
    order: tuple

    def __bool__(self):
        return self.ok


def is_cave(C, order=None) -> CaveReport:
    """Check the three cave conditions for a finite point set.

    (1) the top elements are M-convex; (2) the set equals the union of the
    stalactites of its tops under ``order`` (identity coordinate order by
    default); (3) every nonempty truncation at nonzero b is a generalized
    polymatroid.  Which lex order condition (2) uses is a parameter: the
    verdict is per-order and recorded in the report.
    """
    from . import algorithms  # deferred: algorithms builds on this module

    pts = point_set(C)
    p = len(next(iter(pts)))
    if order is None:
        order = algorithms.LexOrder.identity(p)

    tops = top_elements(pts)
    ok, witness = is_m_convex(tops)
    if not ok:
        return CaveReport(False, 1, witness, order.permutation)
    top_poly = Polymatroid(tops)

    union = set()
    for st in algorithms.stalactite_decomposition(top_poly, order):
        union |= st.members
    if union != pts:
        missing = tuple(sorted(union - pts))
        extra = tuple(sorted(pts - union))
        return CaveReport(False, 2, {"missing": missing, "extra": extra}, order.permutation)

    bounds = [max(q[i] for q in pts) for i in range(p)]
    checked = {}
    for b in itertools.product(*(range(m + 1) for m in bounds)):
        if not any(b):
            continue
        trunc = frozenset(q for q in pts if all(x >= y for x, y in zip(q, b)))
        if len(trunc) <= 1:
            continue  # empty is vacuous, singletons satisfy both conditions
        verdict = checked.get(trunc)
        if verdict is None:
            verdict = is_generalized_polymatroid(trunc)
            checked[trunc] = verdict
        ok, witness = verdict
        if not ok:
            return CaveReport(False, 3, {"at": b, "witness": witness}, order.permutation)
    return CaveReport(True, None, None, order.permutation)
