"""Polymatroid representations and axiom checking.

A polymatroid on ground set {1, ..., p} is handled in two equivalent forms:

* a rank function: a normalized, monotone, submodular map from subsets of
  {1, ..., p} to nonnegative integers, bounded on singletons by a cage
  vector (``RankFunction``);
* a point set: a finite homogeneous M-convex set of lattice points in N^p
  (``Polymatroid``).

``points_from_rank`` and ``rank_from_points`` convert between the two and
round-trip exactly.  Subsets are encoded internally as p-bit masks, with
bit ``i-1`` standing for element ``i``; the dense 2^p table caps ``p`` at 16.

All arithmetic is exact (Python integers); every value is immutable after
construction, so everything here is safe for concurrent use.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    AxiomViolation,
    DimensionMismatch,
    EmptyInput,
    InternalInvariantFailure,
    NotMConvex,
)

MAX_GROUND_SET = 16

Point = tuple  # tuple[int, ...]; a lattice point, one entry per ground-set element


def as_point(coords) -> Point:
    """Normalize an integer vector to a tuple, rejecting non-integer entries."""
    pt = tuple(coords)
    for c in pt:
        if not isinstance(c, int):
            raise ValueError("lattice point coordinates must be integers, got %r" % (c,))
    return pt


def point_set(points) -> frozenset:
    """Normalize an iterable of vectors to a frozenset of equal-length tuples."""
    pts = frozenset(as_point(q) for q in points)
    if not pts:
        raise EmptyInput("point set is empty")
    lengths = {len(q) for q in pts}
    if len(lengths) != 1:
        raise DimensionMismatch("points have mixed lengths %s" % sorted(lengths))
    return pts


def mask_to_subset(mask: int) -> tuple:
    """Bit mask -> sorted tuple of 1-based indices."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def subset_to_mask(subset: Iterable[int], p: int) -> int:
    """Sorted-index subset of {1..p} -> bit mask."""
    mask = 0
    for i in subset:
        if not isinstance(i, int) or not 1 <= i <= p:
            raise ValueError("subset element %r outside 1..%d" % (i, p))
        mask |= 1 << (i - 1)
    return mask


class RankFunction:
    """A validated polymatroid rank function on subsets of {1..p}.

    ``values[mask]`` is the rank of the subset encoded by ``mask``.  Build
    instances through ``validate_rank_function`` or ``rank_from_points``;
    the constructor itself does not re-check the axioms.
    """

    __slots__ = ("p", "values", "cage")

    def __init__(self, p: int, values: Sequence[int], cage: Sequence[int]):
        self.p = p
        self.values = tuple(values)
        self.cage = tuple(cage)
        if len(self.values) != 1 << p:
            raise ValueError("expected %d rank values, got %d" % (1 << p, len(self.values)))
        if len(self.cage) != p:
            raise DimensionMismatch("cage has length %d, expected %d" % (len(self.cage), p))

    @property
    def rank(self) -> int:
        return self.values[-1]

    def of_mask(self, mask: int) -> int:
        return self.values[mask]

    def of(self, subset: Iterable[int]) -> int:
        return self.values[subset_to_mask(subset, self.p)]

    def as_subset_map(self) -> dict:
        """Rank values keyed by sorted tuples of 1-based indices."""
        return {mask_to_subset(m): v for m, v in enumerate(self.values)}

    def __eq__(self, other):
        # Equality is agreement on every subset; the cage is metadata and two
        # functions differing only in (slack) cage bounds are the same polymatroid.
        if not isinstance(other, RankFunction):
            return NotImplemented
        return self.p == other.p and self.values == other.values

    def __hash__(self):
        return hash((self.p, self.values))

    def __repr__(self):
        return "RankFunction(p=%d, rank=%d, cage=%s)" % (self.p, self.rank, list(self.cage))


def _normalize_values(p: int, values) -> list:
    """Accept a subset->int mapping (keys: index iterables) or a mask-indexed
    sequence, and return the dense mask-indexed list."""
    size = 1 << p
    if isinstance(values, Mapping):
        dense = [None] * size
        for key, val in values.items():
            key_iter = key if not isinstance(key, int) else mask_to_subset(key)
            mask = subset_to_mask(tuple(key_iter), p)
            if dense[mask] is not None:
                raise ValueError("duplicate subset %s in rank map" % (mask_to_subset(mask),))
            dense[mask] = val
        missing = [mask_to_subset(m) for m, v in enumerate(dense) if v is None]
        if missing:
            raise ValueError("rank map missing subsets, e.g. %s" % (missing[0],))
        return dense
    dense = list(values)
    if len(dense) != size:
        raise ValueError("expected %d rank values, got %d" % (size, len(dense)))
    return dense


def validate_rank_function(p: int, values, cage) -> RankFunction:
    """Check the four polymatroid axioms and return a ``RankFunction``.

    ``values`` maps every subset of {1..p} to a nonnegative integer (as a
    mapping keyed by index iterables, or a sequence indexed by bit mask).
    On failure raises ``AxiomViolation`` carrying *every* violated axiom
    together with witnessing subsets.
    """
    if not isinstance(p, int) or p < 1:
        raise ValueError("p must be a positive integer, got %r" % (p,))
    if p > MAX_GROUND_SET:
        raise DimensionMismatch("ground sets larger than %d are not supported" % MAX_GROUND_SET)
    cage = as_point(cage)
    if len(cage) != p:
        raise DimensionMismatch("cage has length %d, expected %d" % (len(cage), p))
    dense = _normalize_values(p, values)
    for mask, v in enumerate(dense):
        if not isinstance(v, int):
            raise ValueError("rank of %s is %r, not an integer" % (mask_to_subset(mask), v))

    violations = []
    if dense[0] != 0:
        violations.append(("empty", ((),)))
    for i in range(p):
        if dense[1 << i] > cage[i]:
            violations.append(("cage", ((i + 1,),)))
    full = (1 << p) - 1
    # Monotonicity over covering pairs (I, I+{j}); equivalent to all pairs.
    for mask in range(1 << p):
        for i in range(p):
            if not mask >> i & 1:
                bigger = mask | 1 << i
                if dense[mask] > dense[bigger]:
                    violations.append(("monotone", (mask_to_subset(mask), mask_to_subset(bigger))))
    if p <= 10:
        # Exhaustive pair check; comparable pairs hold trivially but are cheap.
        for m1 in range(1 << p):
            for m2 in range(m1 + 1, 1 << p):
                if dense[m1] + dense[m2] < dense[m1 | m2] + dense[m1 & m2]:
                    violations.append(("submodular", (mask_to_subset(m1), mask_to_subset(m2))))
    else:
        # Equivalent local (diminishing-returns) form, polynomial in the table size.
        for mask in range(1 << p):
            outside = [i for i in range(p) if not mask >> i & 1]
            for a, i in enumerate(outside):
                for j in outside[a + 1:]:
                    mi, mj = mask | 1 << i, mask | 1 << j
                    if dense[mi] + dense[mj] < dense[mi | mj] + dense[mask]:
                        violations.append(("submodular", (mask_to_subset(mi), mask_to_subset(mj))))
    if violations:
        raise AxiomViolation(violations)
    return RankFunction(p, dense, cage)


def is_m_convex(points):
    """Check homogeneity plus the exchange property.

    Returns ``(True, None)`` or ``(False, witness)`` with witness
    ``(u, v, i)``: 1-based coordinate ``i`` has ``u_i > v_i`` but no ``j``
    with ``u_j < v_j`` puts ``u - e_i + e_j`` in the set.  A homogeneity
    failure is reported as ``(u, v, None)``.
    """
    pts = point_set(points)
    ordered = sorted(pts)
    degree = sum(ordered[0])
    for q in ordered[1:]:
        if sum(q) != degree:
            return False, (ordered[0], q, None)
    p = len(ordered[0])
    for u in ordered:
        for v in ordered:
            for i in range(p):
                if u[i] <= v[i]:
                    continue
                ok = False
                for j in range(p):
                    if u[j] < v[j]:
                        w = list(u)
                        w[i] -= 1
                        w[j] += 1
                        if tuple(w) in pts:
                            ok = True
                            break
                if not ok:
                    return False, (u, v, i + 1)
    return True, None


def is_generalized_polymatroid(points):
    """Check the two exchange conditions for (possibly nonhomogeneous) sets.

    Condition (1): whenever ``u_i > v_i``, either some ``j`` with
    ``u_j < v_j`` has both ``u - e_i + e_j`` and ``v + e_i - e_j`` in the
    set, or ``|u| > |v|`` with both ``u - e_i`` and ``v + e_i`` in the set.
    Condition (2): whenever ``|u| > |v|``, some ``j`` with ``u_j > v_j``
    has both ``u - e_j`` and ``v + e_j`` in the set.

    Returns ``(True, None)`` or ``(False, (u, v, i))`` for a condition (1)
    failure at coordinate ``i`` (1-based), ``(False, (u, v, None))`` for a
    condition (2) failure of the degree comparison.
    """
    pts = point_set(points)
    ordered = sorted(pts)
    p = len(ordered[0])

    def shifted(base, dec, inc):
        w = list(base)
        w[dec] -= 1
        w[inc] += 1
        return tuple(w)

    def bumped(base, coord, delta):
        w = list(base)
        w[coord] += delta
        return tuple(w)

    for u in ordered:
        for v in ordered:
            du, dv = sum(u), sum(v)
            for i in range(p):
                if u[i] <= v[i]:
                    continue
                ok = False
                for j in range(p):
                    if u[j] < v[j] and shifted(u, i, j) in pts and shifted(v, j, i) in pts:
                        ok = True
                        break
                if not ok and du > dv:
                    ok = bumped(u, i, -1) in pts and bumped(v, i, +1) in pts
                if not ok:
                    return False, (u, v, i + 1)
            if du > dv:
                ok = False
                for j in range(p):
                    if u[j] > v[j] and bumped(u, j, -1) in pts and bumped(v, j, +1) in pts:
                        ok = True
                        break
                if not ok:
                    return False, (u, v, None)
    return True, None


def homogenize(points) -> frozenset:
    """Pad each point with a slack coordinate N - |n|, N the maximum degree.

    The result is homogeneous of degree N and one coordinate longer; a set
    is a generalized polymatroid exactly when its homogenization is M-convex.
    """
    pts = point_set(points)
    top = max(sum(q) for q in pts)
    return frozenset(q + (top - sum(q),) for q in pts)


class Polymatroid:
    """A finite homogeneous M-convex set of lattice points in N^p.

    The constructor validates all invariants: nonempty, equal lengths,
    nonnegative coordinates, homogeneous, M-convex.  Instances are
    immutable, hashable, and compare by point set.
    """

    __slots__ = ("p", "points", "rank")

    def __init__(self, points):
        pts = point_set(points)
        for q in pts:
            if any(c < 0 for c in q):
                raise ValueError("polymatroid points must be nonnegative, got %s" % (q,))
        ok, witness = is_m_convex(pts)
        if not ok:
            u, v, i = witness
            if i is None:
                raise NotMConvex("not homogeneous: |%s| != |%s|" % (u, v), witness)
            raise NotMConvex(
                "exchange fails for u=%s, v=%s at coordinate %d" % (u, v, i), witness
            )
        object.__setattr__(self, "p", len(next(iter(pts))))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rank", sum(next(iter(pts))))

    def __setattr__(self, name, value):
        raise AttributeError("Polymatroid is immutable")

    @property
    def cage(self) -> tuple:
        """Componentwise maximum over the points (the tightest cage)."""
        return tuple(max(q[i] for q in self.points) for i in range(self.p))

    def __eq__(self, other):
        if not isinstance(other, Polymatroid):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash((self.p, self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __contains__(self, q):
        return tuple(q) in self.points

    def __repr__(self):
        return "Polymatroid(%s)" % (sorted(self.points),)


@lru_cache(maxsize=None)
def rank_from_points(P: Polymatroid) -> RankFunction:
    """Rank function of a polymatroid: rk(I) = max over points of the I-sum.

    The cage is the componentwise maximum of the points, i.e. the singleton
    ranks.  Inverse of ``points_from_rank``.
    """
    if P.p > MAX_GROUND_SET:
        raise DimensionMismatch("rank tables beyond %d coordinates are not supported" % MAX_GROUND_SET)
    p = P.p
    pts = sorted(P.points)
    values = [0] * (1 << p)
    for mask in range(1, 1 << p):
        idx = [i for i in range(p) if mask >> i & 1]
        values[mask] = max(sum(q[i] for i in idx) for q in pts)
    return RankFunction(p, values, tuple(values[1 << i] for i in range(p)))


@lru_cache(maxsize=None)
def points_from_rank(rk: RankFunction) -> Polymatroid:
    """All lattice points with every subset-sum within rank and full-sum equal
    to the rank of the ground set (the top-degree lattice points)."""
    p = rk.p
    members = []
    index_sets = [[i for i in range(p) if mask >> i & 1] for mask in range(1 << p)]
    for n in itertools.product(*(range(rk.of_mask(1 << i) + 1) for i in range(p))):
        if sum(n) != rk.rank:
            continue
        if all(sum(n[i] for i in index_sets[mask]) <= rk.values[mask] for mask in range(1 << p)):
            members.append(n)
    if not members:
        raise InternalInvariantFailure("valid rank function produced no base points")
    return Polymatroid(members)
