"""Random polymatroid generation and the differential verification engine.

Instances come from three strategies: ``uniform-family`` draws a rank cap r
and a cage m and takes rk(I) = min(r, sum of m over I); ``submodular-rejection``
caps by a few random modular functions, clips to a monotone nonnegative
candidate and keeps it only if all four axioms validate;  ``lattice-path``
random-walks downward from a uniform family, decrementing single subset
ranks and keeping each step only while the axioms still hold.  Generation
is deterministic per seed.

``verify_instance`` runs the theorem suite against one instance: the
four-way polynomial equality, lex-order invariance of the stalactite route,
the closed interval-Mobius form against the raw recurrence, stalactite
counts against Mobius values, the truncation lemmas, the coefficient-sum
identity, cancellation-freeness, the two Snapper routes, and the cave
predicate on the stalactite union.  Failures are data (reports), never
exceptions.  ``verify_campaign`` aggregates over many seeds and shrinks any
counterexample by dropping coordinates, then lowering cage entries, then
truncating the rank, revalidating at each step.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, replace

from .algorithms import (
    LexOrder,
    box_polynomial,
    cave_polynomial,
    mobius_interval,
    mobius_polynomial,
    mobius_table,
    snapper_eur_larson,
    snapper_from_cave,
    stalactite_counts,
    stalactite_decomposition,
    stalactite_polynomial,
)
from .core import (
    Polymatroid,
    RankFunction,
    points_from_rank,
    rank_from_points,
    validate_rank_function,
)
from .errors import AxiomViolation, CavepolyError, GenerationExhausted, UnknownFamily
from .geometry import independence_points, is_cave, truncate
from .polyalg import expand_binomial

STRATEGIES = ("submodular-rejection", "uniform-family", "lattice-path")

_MAX_ATTEMPTS = 10_000


@dataclass(frozen=True)
class GeneratorConfig:
    """Deterministic instance-generation parameters."""

    seed: int
    p: int
    max_rank: int = 6
    max_cage_entry: int = 5
    strategy: str = "submodular-rejection"

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.max_rank < 1 or self.max_cage_entry < 1:
            raise ValueError("generation bounds must be positive")
        if self.strategy not in STRATEGIES:
            raise ValueError("unknown strategy %r, expected one of %s" % (self.strategy, list(STRATEGIES)))


def _subset_sums(weights, p):
    sums = [0] * (1 << p)
    for mask in range(1, 1 << p):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + weights[low.bit_length() - 1]
    return sums


def _uniform_values(p, r, m):
    msums = _subset_sums(m, p)
    return [min(r, s) for s in msums]


def _draw_uniform(cfg: GeneratorConfig, rng) -> RankFunction:
    r = rng.randint(0, cfg.max_rank)
    m = [rng.randint(0, cfg.max_cage_entry) for _ in range(cfg.p)]
    return validate_rank_function(cfg.p, _uniform_values(cfg.p, r, m), m)


def _draw_submodular(cfg: GeneratorConfig, rng) -> RankFunction | None:
    p = cfg.p
    c0 = rng.randint(0, cfg.max_rank)
    m = [rng.randint(0, cfg.max_cage_entry) for _ in range(p)]
    caps = []
    for _ in range(rng.randint(1, 3)):
        shiftv = rng.randint(0, cfg.max_rank)
        weights = [rng.randint(0, cfg.max_cage_entry) for _ in range(p)]
        caps.append((shiftv, _subset_sums(weights, p)))
    msums = _subset_sums(m, p)
    raw = [0] * (1 << p)
    for mask in range(1, 1 << p):
        raw[mask] = min(c0, msums[mask], min(a + s[mask] for a, s in caps))
    # Clip to a monotone nonnegative candidate; the min of monotone caps is
    # already monotone, so this is a safety no-op kept for clarity.
    vals = list(raw)
    for mask in range(1, 1 << p):
        for i in range(p):
            if mask >> i & 1:
                vals[mask] = max(vals[mask], vals[mask ^ (1 << i)])
    try:
        return validate_rank_function(p, vals, [vals[1 << i] for i in range(p)])
    except AxiomViolation:
        return None


def _draw_lattice_path(cfg: GeneratorConfig, rng) -> RankFunction:
    p = cfg.p
    r = rng.randint(0, cfg.max_rank)
    m = [rng.randint(0, cfg.max_cage_entry) for _ in range(p)]
    values = _uniform_values(p, r, m)
    for _ in range(rng.randint(0, 2 << p)):
        mask = rng.randrange(1, 1 << p)
        if values[mask] == 0:
            continue
        cand = list(values)
        cand[mask] -= 1
        try:
            validate_rank_function(p, cand, [cand[1 << i] for i in range(p)])
        except AxiomViolation:
            continue
        values = cand
    return validate_rank_function(p, values, [values[1 << i] for i in range(p)])


def random_polymatroid(cfg: GeneratorConfig) -> Polymatroid:
    """A valid random polymatroid, deterministic per config."""
    rng = random.Random(cfg.seed)
    for _ in range(_MAX_ATTEMPTS):
        if cfg.strategy == "uniform-family":
            rk = _draw_uniform(cfg, rng)
        elif cfg.strategy == "lattice-path":
            rk = _draw_lattice_path(cfg, rng)
        else:
            rk = _draw_submodular(cfg, rng)
        if rk is not None:
            return points_from_rank(rk)
    raise GenerationExhausted("no valid instance after %d attempts for %s" % (_MAX_ATTEMPTS, cfg))


def named_family(name: str, **params) -> Polymatroid:
    """Named instances: "uniform" (r, m), "free" (m), "rank-zero" (p),
    "running-example"."""

    def need(key):
        if key not in params:
            raise ValueError("family %r requires parameter %r" % (name, key))
        return params[key]

    if name == "running-example":
        return Polymatroid([(0, 3), (1, 2), (2, 1)])
    if name == "rank-zero":
        return Polymatroid([(0,) * need("p")])
    if name == "free":
        return Polymatroid([tuple(need("m"))])
    if name == "uniform":
        r = need("r")
        m = list(need("m"))
        p = len(m)
        rk = validate_rank_function(p, _uniform_values(p, r, m), m)
        return points_from_rank(rk)
    raise UnknownFamily("unknown family %r" % (name,))


def _dominates(a, b):
    return all(x >= y for x, y in zip(a, b))


def _poly_diff_detail(name, q, cave):
    exps = {e for e in set(q.terms) | set(cave.terms) if q.terms.get(e, 0) != cave.terms.get(e, 0)}
    e = min(exps)
    return "cave and %s differ at t^%s: %d vs %d" % (name, list(e), cave.terms.get(e, 0), q.terms.get(e, 0))


def _check_four_way(P):
    cave = cave_polynomial(P)
    for name, q in (
        ("stalactite", stalactite_polynomial(P)),
        ("box", box_polynomial(P)),
        ("mobius", mobius_polynomial(P)),
    ):
        if q != cave:
            return False, _poly_diff_detail(name, q, cave)
    return True, None


def _check_lex_order_invariance(P):
    base = stalactite_polynomial(P)
    p = P.p
    if p <= 4:
        perms = itertools.permutations(range(1, p + 1))
    else:
        rng = random.Random(0x5EED ^ p)
        perms = [tuple(range(1, p + 1)), tuple(range(p, 0, -1))]
        for _ in range(8):
            perm = list(range(1, p + 1))
            rng.shuffle(perm)
            perms.append(tuple(perm))
    for perm in perms:
        if stalactite_polynomial(P, LexOrder(tuple(perm))) != base:
            return False, "stalactite polynomial differs under order %s" % (perm,)
    return True, None


def _check_mobius_interval_closed_form(P):
    region = sorted(independence_points(P).points, key=lambda n: (sum(n), n))
    for m in region:
        upper = [a for a in region if _dominates(a, m)]
        table = {}
        for a in upper:
            if a == m:
                val = 1
            else:
                val = -sum(v for b, v in table.items() if _dominates(a, b))
            table[a] = val
            if mobius_interval(m, a) != val:
                return False, "interval [%s, %s]: closed form %d, recurrence %d" % (
                    m, a, mobius_interval(m, a), val)
    return True, None


def _check_counts_equal_mobius(P):
    counts = stalactite_counts(P)
    table = mobius_table(P)
    region = independence_points(P).points
    stray = set(counts) - region
    if stray:
        return False, "stalactite count outside independence region at %s" % (min(stray),)
    rank = P.rank
    for n in sorted(region):
        signed = counts.get(n, 0) * (-1 if (rank - sum(n)) % 2 else 1)
        if signed != table[n]:
            return False, "at %s: signed count %d, mobius %d" % (n, signed, table[n])
    return True, None


def _check_truncation_lemmas(P):
    stal_p = stalactite_polynomial(P).terms
    for n in sorted(independence_points(P).points):
        sub = truncate(P, n)  # re-asserts M-convexity of every truncation
        stal_sub = stalactite_polynomial(sub).terms
        for m in independence_points(sub).points:
            if not _dominates(m, n):
                continue
            if stal_sub.get(m, 0) != stal_p.get(m, 0):
                return False, "truncation at %s: coefficient at %s is %d, expected %d" % (
                    n, m, stal_sub.get(m, 0), stal_p.get(m, 0))
    return True, None


def _check_coefficient_sum(P):
    total = cave_polynomial(P).evaluate((1,) * P.p)
    if total != 1:
        return False, "coefficients sum to %d, expected 1" % total
    return True, None


def _check_cancellation_free(P):
    rank = P.rank
    for e, c in cave_polynomial(P).terms.items():
        sign = -1 if (rank - sum(e)) % 2 else 1
        if c * sign <= 0:
            return False, "coefficient %d at t^%s has the wrong sign" % (c, list(e))
    return True, None


def _check_snapper_routes(P):
    via_cave = snapper_from_cave(P)
    via_sum = snapper_eur_larson(P)
    if expand_binomial(via_cave) != expand_binomial(via_sum):
        return False, "the two Snapper expansions differ"
    zero = (0,) * P.p
    if via_cave.evaluate(zero) != 1 or via_sum.evaluate(zero) != 1:
        return False, "Snapper at the zero vector is %d / %d, expected 1" % (
            via_cave.evaluate(zero), via_sum.evaluate(zero))
    return True, None


def _cave_set(P):
    union = set()
    for st in stalactite_decomposition(P):
        union |= st.members
    return union


def _check_cave_support(P):
    support = set(cave_polynomial(P).terms)
    union = _cave_set(P)
    if support != union:
        sample = min(support ^ union)
        return False, "cave support and stalactite union differ at %s" % (sample,)
    return True, None


def _check_cave_predicate(P):
    report = is_cave(_cave_set(P))
    if not report:
        return False, "stalactite union rejected: condition %s, witness %s" % (
            report.failed_condition, report.witness)
    return True, None


CHECKS = {
    "four-way-equality": _check_four_way,
    "lex-order-invariance": _check_lex_order_invariance,
    "mobius-interval-closed-form": _check_mobius_interval_closed_form,
    "counts-equal-mobius": _check_counts_equal_mobius,
    "truncation-lemmas": _check_truncation_lemmas,
    "coefficient-sum": _check_coefficient_sum,
    "cancellation-free": _check_cancellation_free,
    "snapper-routes": _check_snapper_routes,
    "cave-support": _check_cave_support,
    "cave-predicate": _check_cave_predicate,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str | None
    elapsed: float


@dataclass
class VerificationReport:
    """Per-instance outcomes; ``elapsed`` fields never enter serialized output."""

    descriptor: dict
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]


def instance_descriptor(P: Polymatroid, **extra) -> dict:
    desc = {"p": P.p, "rank": P.rank, "base_points": len(P.points), "cage": list(P.cage)}
    desc.update(extra)
    return desc


def verify_instance(P: Polymatroid, checks=None, descriptor=None) -> VerificationReport:
    """Run the theorem checks (all by default) against one instance."""
    names = list(CHECKS) if checks is None else list(checks)
    results = []
    for name in names:
        fn = CHECKS[name]
        start = time.perf_counter()
        passed, detail = fn(P)
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start))
    return VerificationReport(descriptor or instance_descriptor(P), tuple(results))


def _delete_coordinate(rk: RankFunction, drop: int) -> RankFunction:
    """Restrict a rank function to the ground set without 1-based ``drop``;
    restrictions are always valid."""
    p = rk.p
    keep = [i for i in range(p) if i != drop - 1]
    values = [0] * (1 << (p - 1))
    for mask in range(1 << (p - 1)):
        orig = 0
        for bit, i in enumerate(keep):
            if mask >> bit & 1:
                orig |= 1 << i
        values[mask] = rk.values[orig]
    return RankFunction(p - 1, values, [values[1 << b] for b in range(p - 1)])


def _shrink_candidates(P: Polymatroid):
    rk = rank_from_points(P)
    p = rk.p
    if p > 1:
        for drop in range(1, p + 1):
            yield points_from_rank(_delete_coordinate(rk, drop))
    cage = P.cage
    for i in range(p):
        if cage[i] == 0:
            continue
        capped = [cage[j] - (1 if j == i else 0) for j in range(p)]
        sums = _subset_sums(capped, p)
        vals = [min(v, s) for v, s in zip(rk.values, sums)]
        try:
            yield points_from_rank(validate_rank_function(p, vals, capped))
        except AxiomViolation:
            continue
    if P.rank > 0:
        vals = [min(v, P.rank - 1) for v in rk.values]
        yield points_from_rank(validate_rank_function(p, vals, [vals[1 << i] for i in range(p)]))


def shrink_instance(P: Polymatroid, still_fails) -> Polymatroid:
    """Greedy minimization: drop coordinates, lower cage entries, truncate the
    rank, keeping any candidate on which ``still_fails`` holds."""
    current = P
    while True:
        for cand in _shrink_candidates(current):
            try:
                keep = still_fails(cand)
            except CavepolyError:
                keep = False
            if keep:
                current = cand
                break
        else:
            return current


@dataclass(frozen=True)
class CampaignFailure:
    seed: int
    check: str
    detail: str | None
    points: tuple
    shrunk_points: tuple | None


@dataclass
class CampaignReport:
    config: GeneratorConfig
    count: int
    checks: tuple
    reports: tuple
    failures: tuple
    elapsed: float

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_document(self) -> dict:
        """Deterministic JSON-ready summary (timing deliberately excluded)."""
        return {
            "count": self.count,
            "passed": sum(1 for r in self.reports if r.passed),
            "failed": sum(1 for r in self.reports if not r.passed),
            "all_passed": self.passed,
            "checks": list(self.checks),
            "config": {
                "seed": self.config.seed,
                "p": self.config.p,
                "max_rank": self.config.max_rank,
                "max_cage_entry": self.config.max_cage_entry,
                "strategy": self.config.strategy,
            },
            "failures": [
                {
                    "seed": f.seed,
                    "check": f.check,
                    "detail": f.detail,
                    "points": [list(q) for q in f.points],
                    "shrunk_points": None if f.shrunk_points is None else [list(q) for q in f.shrunk_points],
                }
                for f in self.failures
            ],
        }


def verify_campaign(cfg: GeneratorConfig, count: int, checks=None, shrink=True) -> CampaignReport:
    """Generate ``count`` instances from consecutive seeds, verify each, and
    aggregate.  Failures carry their seed and, when shrinking is enabled, a
    minimized witness that still fails the same check."""
    if count < 1:
        raise ValueError("count must be >= 1")
    names = tuple(CHECKS) if checks is None else tuple(checks)
    start = time.perf_counter()
    reports = []
    failures = []
    for i in range(count):
        icfg = replace(cfg, seed=cfg.seed + i)
        P = random_polymatroid(icfg)
        report = verify_instance(P, checks=names, descriptor=instance_descriptor(P, seed=icfg.seed))
        reports.append(report)
        for bad in report.failures():
            shrunk = None
            if shrink:
                fn = CHECKS[bad.name]
                small = shrink_instance(P, lambda Q: not fn(Q)[0])
                shrunk = tuple(sorted(small.points))
            failures.append(
                CampaignFailure(icfg.seed, bad.name, bad.detail, tuple(sorted(P.points)), shrunk)
            )
    failures.sort(key=lambda f: (f.seed, f.check))
    return CampaignReport(cfg, count, names, tuple(reports), tuple(failures), time.perf_counter() - start)
