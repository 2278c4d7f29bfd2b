"""The four polynomial routes, the Mobius machinery, and the Snapper forms."""

import itertools

import pytest

from cavepoly import (
    DimensionMismatch,
    LexOrder,
    MultiPoly,
    NotABasePoint,
    NotComparable,
    Polymatroid,
    box_polynomial,
    box_summands,
    cave_polynomial,
    expand_binomial,
    independence_points,
    mobius_interval,
    mobius_polynomial,
    mobius_table,
    neighbors,
    snapper_eur_larson,
    snapper_from_cave,
    stalactite,
    stalactite_counts,
    stalactite_decomposition,
    stalactite_polynomial,
)
from conftest import instance_mix

# t2^3 + t1*t2^2 - t2^2 + t1^2*t2 - t1*t2, the shared value of all four routes
GOLDEN = {(0, 3): 1, (1, 2): 1, (0, 2): -1, (2, 1): 1, (1, 1): -1}

GOLDEN_MOBIUS = {
    (0, 3): 1, (1, 2): 1, (2, 1): 1,
    (0, 2): -1, (1, 1): -1,
    (2, 0): 0, (0, 1): 0, (1, 0): 0, (0, 0): 0,
}

UNIT = Polymatroid([(1, 0), (0, 1)])
ORIGIN = Polymatroid([(0,)])


def dominates(a, b):
    return all(x >= y for x, y in zip(a, b))


def naive_mobius(P):
    """Oracle: the three-case recurrence evaluated by a direct quadratic scan."""
    region = sorted(independence_points(P).points, key=sum, reverse=True)
    mu = {}
    for n in region:
        if n in P.points:
            mu[n] = 1
        else:
            mu[n] = 1 - sum(v for m, v in mu.items() if dominates(m, n) and m != n)
    return mu


def brute_interval_mobius(m, n):
    """Oracle: mu(m, n) by the raw interval recurrence over the box [m, n]."""
    cells = sorted(itertools.product(*(range(a, b + 1) for a, b in zip(m, n))), key=sum)
    mu = {}
    for a in cells:
        if a == m:
            mu[a] = 1
        else:
            mu[a] = -sum(v for b, v in mu.items() if dominates(a, b) and b != a)
    return mu[n]


# -------------------------------------------------------------------- ordering

def test_lex_order_identity_matches_worked_example(running):
    order = LexOrder.identity(2)
    assert order.sort(running.points) == [(0, 3), (1, 2), (2, 1)]


def test_lex_order_permutation_reprioritizes(running):
    order = LexOrder((2, 1))  # compare coordinate 2 first
    assert order.sort(running.points) == [(2, 1), (1, 2), (0, 3)]


def test_lex_order_rejects_non_permutations():
    with pytest.raises(ValueError):
        LexOrder((1, 1))
    with pytest.raises(ValueError):
        LexOrder((0, 1))


# ------------------------------------------------------------------- neighbors

def test_neighbors_of_middle_point(running):
    assert neighbors(running, (1, 2)) == {(1, 2, (0, 3)), (2, 1, (2, 1))}


def test_neighbors_of_extreme_point(running):
    assert neighbors(running, (0, 3)) == {(2, 1, (1, 2))}


def test_neighbors_in_singleton():
    assert neighbors(Polymatroid([(4, 1)]), (4, 1)) == frozenset()


def test_neighbors_requires_base_point(running):
    with pytest.raises(NotABasePoint):
        neighbors(running, (1, 1))


# ------------------------------------------------------------------ stalactites

def test_stalactites_of_worked_example(running):
    st1 = stalactite((0, 3), set(), running)
    assert st1.members == {(0, 3)} and st1.directions == frozenset()
    st2 = stalactite((1, 2), {(0, 3)}, running)
    assert st2.members == {(1, 2), (0, 2)} and st2.directions == {1}
    st3 = stalactite((2, 1), {(0, 3), (1, 2)}, running)
    assert st3.members == {(2, 1), (1, 1)} and st3.directions == {1}


def test_stalactite_requires_base_points(running):
    with pytest.raises(NotABasePoint):
        stalactite((1, 1), set(), running)
    with pytest.raises(NotABasePoint):
        stalactite((0, 3), {(9, 9)}, running)


def test_stalactite_member_count_is_power_of_two():
    for P in instance_mix(8, seed=14):
        for st in stalactite_decomposition(P):
            assert len(st.members) == 1 << len(st.directions)
            assert all(st.apex[ell - 1] >= 1 for ell in st.directions)


def test_decomposition_running(running):
    decomp = stalactite_decomposition(running)
    assert [st.apex for st in decomp] == [(0, 3), (1, 2), (2, 1)]
    assert [sorted(st.members) for st in decomp] == [
        [(0, 3)], [(0, 2), (1, 2)], [(1, 1), (2, 1)]]


def test_decomposition_small_cases():
    assert [st.members for st in stalactite_decomposition(Polymatroid([(7,)]))] == [frozenset({(7,)})]
    decomp = stalactite_decomposition(UNIT)
    assert [sorted(st.members) for st in decomp] == [[(0, 1)], [(0, 0), (1, 0)]]


def test_counts(running):
    assert stalactite_counts(running) == {n: 1 for n in GOLDEN}
    assert stalactite_counts(Polymatroid([(5,)])) == {(5,): 1}
    assert stalactite_counts(UNIT) == {(0, 1): 1, (1, 0): 1, (0, 0): 1}


def test_counts_support_inside_independence():
    for P in instance_mix(10, seed=41):
        region = independence_points(P).points
        assert set(stalactite_counts(P)) <= region


# ------------------------------------------------------------- the four routes

def test_cave_polynomial_golden(running):
    assert cave_polynomial(running) == MultiPoly(2, GOLDEN)


def test_cave_polynomial_trivial_cases():
    assert cave_polynomial(ORIGIN) == MultiPoly.constant(1, 1)
    # hand expansion: (1 - t1^{-1}) t1 + t2 = t1 + t2 - 1
    assert cave_polynomial(UNIT) == MultiPoly(2, {(1, 0): 1, (0, 1): 1, (0, 0): -1})


def test_stalactite_polynomial_golden(running):
    assert stalactite_polynomial(running) == MultiPoly(2, GOLDEN)
    assert stalactite_polynomial(ORIGIN) == MultiPoly.constant(1, 1)
    assert stalactite_polynomial(UNIT) == MultiPoly(2, {(1, 0): 1, (0, 1): 1, (0, 0): -1})


def test_box_polynomial_golden(running):
    assert box_polynomial(running) == MultiPoly(2, GOLDEN)
    assert box_polynomial(ORIGIN) == MultiPoly.constant(1, 1)
    # p=1, {(2)}: (t^2 - t) + (t - 1) + 1 = t^2
    assert box_polynomial(Polymatroid([(2,)])) == MultiPoly(1, {(2,): 1})


def test_box_summands_trace_the_nine_products(running):
    expected = {
        (0, 3): {(0, 3): 1, (0, 2): -1},
        (1, 2): {(1, 2): 1, (1, 1): -1, (0, 2): -1, (0, 1): 1},
        (2, 1): {(2, 1): 1, (2, 0): -1, (1, 1): -1, (1, 0): 1},
        (0, 2): {(0, 2): 1, (0, 1): -1},
        (1, 1): {(1, 1): 1, (1, 0): -1, (0, 1): -1, (0, 0): 1},
        (2, 0): {(2, 0): 1, (1, 0): -1},
        (0, 1): {(0, 1): 1, (0, 0): -1},
        (1, 0): {(1, 0): 1, (0, 0): -1},
        (0, 0): {(0, 0): 1},
    }
    summands = box_summands(running)
    assert set(summands) == set(expected)
    for n, terms in expected.items():
        assert summands[n] == MultiPoly(2, terms), n


def test_mobius_polynomial_golden(running):
    assert mobius_polynomial(running) == MultiPoly(2, GOLDEN)
    assert mobius_polynomial(ORIGIN) == MultiPoly.constant(1, 1)
    assert mobius_polynomial(UNIT) == MultiPoly(2, {(1, 0): 1, (0, 1): 1, (0, 0): -1})


def test_four_way_equality_on_generated_instances():
    for P in instance_mix(36, seed=1000, ps=(1, 2, 3, 4)):
        cave = cave_polynomial(P)
        assert stalactite_polynomial(P) == cave
        assert box_polynomial(P) == cave
        assert mobius_polynomial(P) == cave


def test_stalactite_polynomial_is_order_invariant():
    for P in instance_mix(18, seed=88, ps=(2, 3)):
        base = stalactite_polynomial(P)
        for perm in itertools.permutations(range(1, P.p + 1)):
            assert stalactite_polynomial(P, LexOrder(perm)) == base


def test_cave_support_matches_stalactite_union():
    for P in instance_mix(15, seed=17):
        union = set()
        for st in stalactite_decomposition(P):
            union |= st.members
        assert set(cave_polynomial(P).terms) == union


def test_cave_is_cancellation_free():
    for P in instance_mix(15, seed=5150):
        for e, c in cave_polynomial(P).terms.items():
            expected_sign = -1 if (P.rank - sum(e)) % 2 else 1
            assert c * expected_sign > 0


def test_cave_coefficient_sum_is_one():
    for P in instance_mix(20, seed=60, ps=(1, 2, 3, 4)):
        assert cave_polynomial(P).evaluate((1,) * P.p) == 1


# --------------------------------------------------------------------- Mobius

def test_mobius_interval_closed_form():
    assert mobius_interval((1, 2), (1, 2)) == 1
    assert mobius_interval((0, 1), (1, 2)) == 1    # two unit steps
    assert mobius_interval((0, 2), (2, 2)) == 0    # a step of size two
    assert mobius_interval((1, 1), (1, 2)) == -1
    with pytest.raises(NotComparable):
        mobius_interval((2, 0), (1, 2))
    with pytest.raises(DimensionMismatch):
        mobius_interval((1,), (1, 2))


def test_mobius_table_golden(running):
    table = mobius_table(running)
    assert dict(table.items()) == GOLDEN_MOBIUS
    assert table[(9, 9)] == 0  # outside the region
    assert table[(3, 0)] == 0


def test_mobius_table_base_points_are_one():
    for P in instance_mix(10, seed=2):
        table = mobius_table(P)
        for b in P.points:
            assert table[b] == 1


def test_mobius_table_matches_naive_recurrence():
    for P in instance_mix(20, seed=123, ps=(1, 2, 3, 4)):
        assert dict(mobius_table(P).items()) == naive_mobius(P)


def test_mobius_table_sign_pattern():
    for P in instance_mix(12, seed=321):
        for n, v in mobius_table(P).items():
            if v:
                assert v == (-1 if (P.rank - sum(n)) % 2 else 1) * abs(v)


def test_closed_form_equals_brute_interval_recurrence():
    for P in instance_mix(12, seed=404):
        region = sorted(independence_points(P).points)
        for m in region:
            for n in region:
                if dominates(n, m):
                    assert mobius_interval(m, n) == brute_interval_mobius(m, n), (m, n)


def test_mobius_equals_interval_sum():
    # mu(n) must agree with the sum of closed-form interval values over the
    # region above n.
    for P in instance_mix(10, seed=777):
        region = independence_points(P).points
        table = mobius_table(P)
        for n in region:
            total = sum(mobius_interval(n, u) for u in region if dominates(u, n))
            assert table[n] == total


def test_signed_counts_equal_mobius():
    for P in instance_mix(24, seed=31, ps=(1, 2, 3, 4)):
        counts = stalactite_counts(P)
        table = mobius_table(P)
        for n in independence_points(P).points:
            signed = counts.get(n, 0) * (-1 if (P.rank - sum(n)) % 2 else 1)
            assert signed == table[n]


def test_truncation_preserves_signed_counts():
    from cavepoly import truncate
    for P in instance_mix(10, seed=901):
        stal_p = stalactite_polynomial(P).terms
        for n in independence_points(P).points:
            sub = truncate(P, n)
            stal_sub = stalactite_polynomial(sub).terms
            for m in independence_points(sub).points:
                if dominates(m, n):
                    assert stal_sub.get(m, 0) == stal_p.get(m, 0), (n, m)


# -------------------------------------------------------------------- Snapper

def test_snapper_from_cave_golden(running):
    snapper = snapper_from_cave(running)
    assert snapper.shift == 0
    assert snapper.terms == GOLDEN
    assert snapper.evaluate((0, 0)) == 1


def test_snapper_trivial():
    assert snapper_from_cave(ORIGIN).terms == {(0,): 1}
    assert snapper_eur_larson(ORIGIN).terms == {(0,): 1}
    assert snapper_eur_larson(ORIGIN).evaluate((0,)) == 1


def test_eur_larson_sum_is_over_independence_points(running):
    snapper = snapper_eur_larson(running)
    assert snapper.shift == -1
    assert set(snapper.terms) == independence_points(running).points
    assert all(c == 1 for c in snapper.terms.values())
    assert snapper.evaluate((0, 0)) == 1  # C(n-1, n) = 0 kills every n != 0


def test_snapper_routes_agree_exactly():
    for P in instance_mix(18, seed=555, ps=(1, 2, 3)):
        assert expand_binomial(snapper_from_cave(P)) == expand_binomial(snapper_eur_larson(P))


def test_snapper_routes_agree_at_sample_points(running):
    a = snapper_from_cave(running)
    b = snapper_eur_larson(running)
    for t in itertools.product(range(0, 4), repeat=2):
        assert a.evaluate(t) == b.evaluate(t)
