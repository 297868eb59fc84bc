"""Acceptance suite: one check per criterion, shared by pytest and ``oreloc selftest``.

Every check is seeded and returns a JSON-able summary that depends only
on the seed, so two runs with the same seed must serialize identically.
"""

from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import dataclass, field
from itertools import product

from .crossed import Tower, certify_stably_full, parse_tower
from .linalg import Matrix, check_inverse, diag_sum, rank_over_skewfield
from .malcev import mn_rank_with_retries
from .errors import FrontierTooTight
from .orefield import OreField
from .ranktheory import FiniteRing, InnerRankOracle, nullity_check, stable_rank_bruteforce
from .scalars import QQ, FunctionField, Moebius
from .skewpoly import SkewLaurentRing, left_divide, right_divide

__all__ = ["CriterionResult", "run_all", "CRITERIA", "random_group_matrix", "random_group_element"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        # timing is left out so that the document is reproducible
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"


# --- random generators -----------------------------------------------------


def random_scalar(field: FunctionField, rng: random.Random, num_deg: int = 2, den_deg: int = 1):
    num = field.base.poly([rng.randint(-3, 3) for _ in range(rng.randint(0, num_deg) + 1)])
    den = [rng.randint(-3, 3) for _ in range(rng.randint(0, den_deg) + 1)]
    den[-1] = den[-1] or 1
    return field.from_polys(num, field.base.poly(den))


def random_nonzero_scalar(field, rng, **kw):
    while True:
        c = random_scalar(field, rng, **kw)
        if c:
            return c


def random_skew(ring: SkewLaurentRing, rng: random.Random, lo: int = 0, hi: int = 3, terms: int = 3, **kw):
    out = {}
    for _ in range(rng.randint(1, terms)):
        out[rng.randint(lo, hi)] = random_scalar(ring.field, rng, **kw)
    return ring.from_dict(out)


def random_nonzero_skew(ring, rng, **kw):
    while True:
        p = random_skew(ring, rng, **kw)
        if p:
            return p


def random_fraction(ore: OreField, rng: random.Random):
    num = random_skew(ore.ring, rng, lo=-1, hi=2, num_deg=1, den_deg=1)
    den = random_nonzero_skew(ore.ring, rng, lo=0, hi=2, terms=2, num_deg=1, den_deg=0)
    return ore.fraction(num, den)


def random_group_element(tower: Tower, rng: random.Random, support: int = 3, spread: int = 2):
    terms = {}
    for _ in range(rng.randint(1, support)):
        key = (rng.randint(-spread, spread), rng.randint(-spread, spread))
        terms[key] = rng.choice((-3, -2, -1, 1, 2, 3))
    return tower.element(terms)


def random_group_matrix(tower: Tower, rng: random.Random, m: int, n: int, deficient: bool | None = None) -> Matrix:
    """Random matrix; with ``deficient`` the last row is a left combination of the others by monomials."""
    if deficient is None:
        deficient = rng.random() < 1 / 3
    rows = [[random_group_element(tower, rng) for _ in range(n)] for _ in range(m)]
    if deficient and m > 1:
        combo = [tower.zero] * n
        for i in range(m - 1):
            u = tower.monomial(rng.randint(-1, 1), rng.randint(-1, 1), rng.choice((-1, 1, 2)))
            combo = [a + u * b for a, b in zip(combo, rows[i])]
        rows[-1] = combo
    return Matrix(tower, rows)


def _random_unimodular(tower: Tower, rng: random.Random, n: int) -> Matrix:
    """A product of a diagonal unit matrix and elementary matrices."""
    U = Matrix(tower, [[tower.monomial(rng.randint(-1, 1), rng.randint(-1, 1), rng.choice((-1, 1))) if i == j else tower.zero
                        for j in range(n)] for i in range(n)])
    for _ in range(2):
        i, j = rng.sample(range(n), 2)
        rows = [[tower.one if a == b else tower.zero for b in range(n)] for a in range(n)]
        rows[i][j] = tower.monomial(rng.randint(-1, 1), rng.randint(-1, 1), rng.choice((-1, 1)))
        U = U @ Matrix(tower, rows)
    return U


# --- criteria --------------------------------------------------------------

_AUTOS = ("id", "shift", "inv")


def _automorphism(field: FunctionField, name: str) -> Moebius:
    return {"id": Moebius.identity, "shift": Moebius.shift, "inv": Moebius.inversion}[name](field)


def criterion_1(rng: random.Random, quick: bool) -> dict:
    count = 100 if quick else 1000
    field = FunctionField(QQ)
    detail = {}
    for name in _AUTOS:
        ring = SkewLaurentRing(field, _automorphism(field, name))
        failures = 0
        for _ in range(count):
            kw = {"lo": 0, "hi": 3, "num_deg": 1, "den_deg": 1}
            p, q = random_skew(ring, rng, **kw), random_skew(ring, rng, **kw)
            d = random_nonzero_skew(ring, rng, **kw)
            ok = (p * q) * d == p * (q * d)
            quo, rem = right_divide(p, d)
            ok = ok and p == quo * d + rem and (not rem or rem.hi < d.hi)
            quo, rem = left_divide(p, d)
            ok = ok and p == d * quo + rem and (not rem or rem.hi < d.hi)
            failures += not ok
        detail[name] = {"triples": count, "failures": failures}
    return detail


def _field_axioms(ore: OreField, f, g, h) -> bool:
    one, zero = ore.one, ore.zero
    ok = (f + g) + h == f + (g + h) and f + g == g + f
    ok = ok and (f * g) * h == f * (g * h)
    ok = ok and f * (g + h) == f * g + f * h and (f + g) * h == f * h + g * h
    ok = ok and f + (-f) == zero and f * one == f and one * f == f
    if f:
        ok = ok and f * f.inverse() == one and f.inverse() * f == one
    return ok


def _to_sympy(f, x, t):
    """An Ore fraction over Q(x)(t) with tau = id as a sympy expression."""
    import sympy

    def scalar(c):
        num = sum(sympy.Rational(int(a.p), int(a.q)) * x**k for k, a in enumerate(c.numerator().coeffs()))
        den = sum(sympy.Rational(int(a.p), int(a.q)) * x**k for k, a in enumerate(c.denominator().coeffs()))
        return num / den

    def laurent(p):
        return sum(scalar(c) * t**k for k, c in p.terms())

    return laurent(f.num) / laurent(f.den)


def criterion_2(rng: random.Random, quick: bool) -> dict:
    import sympy

    count = 50 if quick else 500
    field = FunctionField(QQ)
    x, t = sympy.symbols("x t")
    detail = {}
    for name in _AUTOS:
        ore = OreField(SkewLaurentRing(field, _automorphism(field, name)))
        failures = mismatches = 0
        for _ in range(count):
            f, g, h = (random_fraction(ore, rng) for _ in range(3))
            failures += not _field_axioms(ore, f, g, h)
            if name == "id":
                # independent commutative arithmetic, compared in sympy's own normal form
                fs, gs = _to_sympy(f, x, t), _to_sympy(g, x, t)
                pairs = [(f + g, fs + gs), (f * g, fs * gs), (f - g, fs - gs)]
                if g:
                    pairs.append((f / g, fs / gs))
                for ours, theirs in pairs:
                    if sympy.cancel(_to_sympy(ours, x, t)) != sympy.cancel(theirs):
                        mismatches += 1
                    if not (ours.den.lo == 0 and ours.den.lead() == 1):
                        mismatches += 1
        detail[name] = {"triples": count, "failures": failures}
        if name == "id":
            detail[name]["commutative_mismatches"] = mismatches
    return detail


def criterion_3(rng: random.Random, quick: bool) -> dict:
    tower = parse_tower("klein")
    ore = tower.ore
    x, t = tower.embed(tower.x), ore.gen
    checks = {
        "t*x == x^-1*t": t * x == x.inverse() * t,
        "t^-1*x*t == x^-1": t.inverse() * x * t == x.inverse(),
        "x*t == t*x^-1": x * t == t * x.inverse(),
    }
    return {"relations": checks}


def _ore_rank(A: Matrix, tower: Tower) -> int:
    return rank_over_skewfield(A.map(tower.embed, tower.ore)).rank


def criterion_4(rng: random.Random, quick: bool) -> dict:
    count = 10 if quick else 100
    detail = {}
    for name in ("z2", "klein"):
        tower = parse_tower(name)
        stats = {"matrices": count, "stably_full": 0, "invariance_failures": 0, "diag_sum_failures": 0,
                 "product_failures": 0, "inverse_failures": 0}
        for _ in range(count):
            A = random_group_matrix(tower, rng, 3, 3)
            cert = certify_stably_full(A, tower)
            stats["stably_full"] += cert.stably_full
            # (d) a StablyFull verdict carries an inverse that multiplies back to I
            if cert.stably_full:
                E = A.map(tower.embed, tower.ore)
                if cert.witness is None or not check_inverse(E, cert.witness):
                    stats["inverse_failures"] += 1
            # (a) the verdict only depends on the rank, so UAV is certified without an inverse
            U, V = _random_unimodular(tower, rng, 3), _random_unimodular(tower, rng, 3)
            moved = certify_stably_full(U @ A @ V, tower, with_inverse=False)
            stats["invariance_failures"] += moved.verdict != cert.verdict
            # (b)
            for s in (1, 2, 3):
                if _ore_rank(diag_sum(A, s), tower) != cert.rank + s:
                    stats["diag_sum_failures"] += 1
            # (c)
            B = Matrix(tower, [[random_group_element(tower, rng) for _ in range(2)] for _ in range(3)])
            C = Matrix(tower, [[random_group_element(tower, rng) for _ in range(3)] for _ in range(2)])
            stats["product_failures"] += certify_stably_full(B @ C, tower, with_inverse=False).stably_full
        detail[name] = stats
    return detail


def _passes_4(detail: dict) -> bool:
    return all(not (s["invariance_failures"] or s["diag_sum_failures"] or s["product_failures"] or s["inverse_failures"])
               for s in detail.values())


def criterion_5(rng: random.Random, quick: bool) -> dict:
    ring = FiniteRing("Z/m", 4)
    oracle = InnerRankOracle()
    elems = list(ring.elements())
    violations = []
    histogram: dict[str, int] = {}
    for flat in product(elems, repeat=4):
        A = Matrix(ring, [flat[:2], flat[2:]])
        values = [oracle.inner_rank(diag_sum(A, s)) - s for s in range(3)]
        prof = stable_rank_bruteforce(A, 3, oracle=oracle)
        prof1 = stable_rank_bruteforce(diag_sum(A, 1), 3, oracle=oracle)
        ok = 0 <= prof.stable_rank <= prof.inner_rank <= 2
        ok = ok and prof1.stable_rank == prof.stable_rank + 1
        ok = ok and values[0] >= values[1] >= values[2]
        if not ok:
            violations.append(list(flat))
        key = f"rho={prof.inner_rank},rho*={prof.stable_rank}"
        histogram[key] = histogram.get(key, 0) + 1
    return {"matrices": len(elems) ** 4, "violations": violations, "profiles": dict(sorted(histogram.items()))}


def criterion_6(rng: random.Random, quick: bool) -> dict:
    z4 = FiniteRing("Z/m", 4)
    f2 = FiniteRing("F_p", 2)
    oracle = InnerRankOracle()
    rho_diag = oracle.inner_rank(Matrix(z4, [[2, 0], [0, 2]]))
    invertible = {}
    for n in (1, 2, 3):
        sizes_ok = True
        tried = 0
        for _ in range(20 if n == 3 else 10):
            U = _random_invertible_f2(f2, n, rng)
            tried += 1
            sizes_ok = sizes_ok and oracle.inner_rank(U) == n
        invertible[str(n)] = {"tried": tried, "all_full": sizes_ok}
    report = nullity_check(Matrix(z4, [[2]]), Matrix(z4, [[2]]), "inner", oracle=oracle)
    return {
        "rho_2I_over_Z4": rho_diag,
        "invertible_F2": invertible,
        "nullity_2_2_over_Z4": report.to_json(),
    }


def _random_invertible_f2(ring: FiniteRing, n: int, rng: random.Random) -> Matrix:
    while True:
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        if _rank_mod2(rows) == n:
            return Matrix(ring, rows)


def _rank_mod2(rows) -> int:
    rows = [int("".join(map(str, r)), 2) for r in rows]
    rank = 0
    while rows:
        pivot = max(rows)
        rows.remove(pivot)
        if not pivot:
            break
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if r >> top & 1 else r for r in rows]
    return rank


def _passes_6(d: dict) -> bool:
    return (d["rho_2I_over_Z4"] == 2 and all(v["all_full"] for v in d["invertible_F2"].values())
            and d["nullity_2_2_over_Z4"]["rank_A"] == 1 and d["nullity_2_2_over_Z4"]["rank_B"] == 1
            and d["nullity_2_2_over_Z4"]["holds"] is False)


def criterion_7(rng: random.Random, quick: bool) -> dict:
    count = 10 if quick else 50
    tower = parse_tower("z2")
    agree = disagree = too_tight = 0
    attempts: dict[str, int] = {}
    ranks: dict[str, int] = {}
    for _ in range(count):
        A = random_group_matrix(tower, rng, 3, 3)
        ore_rank = _ore_rank(A, tower)
        try:
            res = mn_rank_with_retries(A, retries=3)
        except FrontierTooTight:
            too_tight += 1
            continue
        attempts[str(res.attempts)] = attempts.get(str(res.attempts), 0) + 1
        ranks[str(ore_rank)] = ranks.get(str(ore_rank), 0) + 1
        if res.rank == ore_rank:
            agree += 1
        else:
            disagree += 1
    return {"matrices": count, "agree": agree, "disagree": disagree, "frontier_too_tight": too_tight,
            "attempts": dict(sorted(attempts.items())), "ore_ranks": dict(sorted(ranks.items()))}


def _axiom_pass(detail: dict) -> bool:
    return all(v["failures"] == 0 and v.get("commutative_mismatches", 0) == 0 for v in detail.values())


CRITERIA = [
    (1, "skew-ring associativity and division identities", criterion_1, _axiom_pass),
    (2, "Ore field axioms and commutative oracle", criterion_2, _axiom_pass),
    (3, "Klein-bottle relations in the Ore field", criterion_3, lambda d: all(d["relations"].values())),
    (4, "rank semantics on random 3x3 matrices", criterion_4, _passes_4),
    (5, "inner/stable rank laws on all 2x2 matrices over Z/4", criterion_5, lambda d: not d["violations"]),
    (6, "specific finite-ring oracle values", criterion_6, _passes_6),
    (7, "Malcev-Neumann rank equals Ore rank", criterion_7,
     lambda d: d["agree"] == d["matrices"]),
]


def run_criteria(seed: int = 0, quick: bool = False, log=None, only=None) -> list[CriterionResult]:
    results = []
    for number, title, fn, verdict in CRITERIA:
        if only is not None and number not in only:
            continue
        # each criterion gets its own stream so that subsets reproduce the full run
        rng = random.Random(f"{seed}:{number}")
        start = time.perf_counter()
        detail = fn(rng, quick)
        res = CriterionResult(number, title, bool(verdict(detail)), detail, time.perf_counter() - start)
        if log is not None:
            print(res.line(), file=log, flush=True)
        results.append(res)
    return results


def suite_document(results: list[CriterionResult], seed: int, quick: bool) -> str:
    payload = {"seed": seed, "quick": quick, "criteria": [r.to_json() for r in results]}
    return json.dumps(payload, sort_keys=True)


def run_all(seed: int = 0, quick: bool = False, log=sys.stderr) -> list[CriterionResult]:
    """Criteria 1-7, then criterion 8: a second run must serialize byte-identically."""
    first = run_criteria(seed, quick, log)
    start = time.perf_counter()
    second = run_criteria(seed, quick, None)
    same = suite_document(first, seed, quick) == suite_document(second, seed, quick)
    res = CriterionResult(8, "determinism of the seeded suite", same, {"identical": same}, time.perf_counter() - start)
    if log is not None:
        print(res.line(), file=log, flush=True)
    return first + [res]
