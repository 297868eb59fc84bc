import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oreloc import (
    InputError,
    Matrix,
    NotAnnihilating,
    NotStabilized,
    SearchBudgetExceeded,
    diag_sum,
    inner_rank_bruteforce,
    nullity_check,
    stable_rank_bruteforce,
)
from oreloc.ranktheory import FiniteRing, InnerRankOracle, inner_rank_pairs, parse_finite_ring, stably_finite_check

Z4 = FiniteRing("Z/m", 4)
F2 = FiniteRing("F_p", 2)
F3 = FiniteRing("F_p", 3)
DUAL2 = FiniteRing("F_p[e]", 2)


def M(ring, rows):
    return Matrix(ring, rows, len(rows[0]) if rows else 0)


def test_examples():
    assert inner_rank_bruteforce(M(F2, [[1, 0], [0, 0]])) == 1
    assert inner_rank_bruteforce(M(F2, [[0, 0], [0, 0]])) == 0
    assert inner_rank_bruteforce(M(Z4, [[2, 0], [0, 2]])) == 2


def test_two_times_identity_has_no_rank_one_factorization():
    # independent of the library: every B (2x1), C (1x2) over Z/4
    target = ((2, 0), (0, 2))
    hits = [
        (b, c)
        for b in itertools.product(range(4), repeat=2)
        for c in itertools.product(range(4), repeat=2)
        if tuple(tuple(b[i] * c[j] % 4 for j in range(2)) for i in range(2)) == target
    ]
    assert hits == []
    assert inner_rank_pairs(M(Z4, [[2, 0], [0, 2]])) == 2


def test_finite_ring_tables():
    assert DUAL2.mul(DUAL2.parse("e"), DUAL2.parse("e")) == 0
    assert DUAL2.format(DUAL2.parse("1+e")) == "1+e"
    assert parse_finite_ring("Z/4") == Z4 and parse_finite_ring("gf3") == F3
    with pytest.raises(InputError):
        parse_finite_ring("gf4")
    with pytest.raises(InputError):
        FiniteRing("Z/m", 17)


def test_stable_rank_examples():
    prof = stable_rank_bruteforce(M(F2, [[1, 1], [0, 1]]))
    assert (prof.stable_rank, prof.stabilized_at) == (2, 0)
    assert stable_rank_bruteforce(M(F2, [[0]])).stable_rank == 0


def test_stable_rank_of_two_over_z4():
    A = M(Z4, [[2]])
    oracle = InnerRankOracle()
    direct = [oracle.inner_rank(diag_sum(A, s)) - s for s in range(4)]
    prof = stable_rank_bruteforce(A, s_max=3)
    assert prof.values == direct[: len(prof.values)]
    assert prof.stable_rank == direct[prof.stabilized_at]
    assert prof.to_json()["rho_star"] == 1


def test_not_stabilized():
    with pytest.raises(NotStabilized):
        stable_rank_bruteforce(M(Z4, [[2]]), s_max=0)


def test_budget_reports_bounds():
    with pytest.raises(SearchBudgetExceeded) as info:
        inner_rank_pairs(M(Z4, [[2, 0], [0, 2]]), budget=10)
    assert (info.value.lower, info.value.upper) == (1, 2)
    with pytest.raises(SearchBudgetExceeded):
        inner_rank_bruteforce(M(Z4, [[2, 1, 0], [0, 2, 1], [1, 0, 2]]), budget=5)


def test_nullity_examples():
    assert nullity_check(M(F2, [[1, 0]]), M(F2, [[0], [1]])).holds
    report = nullity_check(M(Z4, [[2]]), M(Z4, [[2]]))
    assert (report.rank_a, report.rank_b, report.holds) == (1, 1, False)
    assert nullity_check(M(F3, [[0, 0]]), M(F3, [[1], [2]])).holds
    assert not nullity_check(M(Z4, [[2]]), M(Z4, [[2]]), mode="stable").holds


def test_nullity_requires_annihilation():
    with pytest.raises(NotAnnihilating):
        nullity_check(M(F2, [[1]]), M(F2, [[1]]))
    with pytest.raises(InputError):
        nullity_check(M(F2, [[0]]), M(F2, [[0]]), mode="outer")


def test_stably_finite():
    assert stably_finite_check(Z4, 1)
    assert stably_finite_check(F2, 2)
    assert stably_finite_check(F3, 1)


rings = st.sampled_from([Z4, F2, F3, DUAL2])


@st.composite
def finite_matrices(draw, max_dim=2):
    ring = draw(rings)
    m, n = draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim))
    return M(ring, [[draw(st.integers(0, ring.size - 1)) for _ in range(n)] for _ in range(m)])


@given(finite_matrices())
def test_two_oracles_agree(A):
    assert inner_rank_bruteforce(A) == inner_rank_pairs(A)


@given(finite_matrices())
def test_rank_bounds_and_transpose(A):
    r = inner_rank_bruteforce(A)
    assert 0 <= r <= min(A.m, A.n)
    assert r == inner_rank_bruteforce(A.transpose())
    assert (r == 0) == A.is_zero()


@settings(max_examples=30)
@given(finite_matrices())
def test_stable_rank_laws(A):
    prof = stable_rank_bruteforce(A, s_max=3)
    assert 0 <= prof.stable_rank <= prof.inner_rank
    assert all(a >= b for a, b in zip(prof.values, prof.values[1:]))
    assert stable_rank_bruteforce(diag_sum(A, 1), s_max=3).stable_rank == prof.stable_rank + 1


@given(finite_matrices(), finite_matrices())
def test_product_rank_bound(A, B):
    if A.ring != B.ring or A.n != B.m:
        return
    assert inner_rank_bruteforce(A @ B) <= min(inner_rank_bruteforce(A), inner_rank_bruteforce(B))
