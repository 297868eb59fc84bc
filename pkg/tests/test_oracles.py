"""Commutative cross-checks against sympy, reached through the printed form."""
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from oreloc import parse_tower, rank_over_skewfield
from oreloc.acceptance import random_group_matrix
from oreloc.linalg import Matrix
from oreloc.malcev import mn_rank_with_retries
from oreloc.ranktheory import FiniteRing, inner_rank_bruteforce

from conftest import ORES, QX, ev, fractions, scalars

X, T = sympy.symbols("x t")


def sym(obj):
    return sympy.sympify(str(obj).replace("^", "**"), locals={"x": X, "t": T})


def same(a, b):
    return sympy.cancel(a - b) == 0


@given(scalars(QX), scalars(QX), scalars(QX, nonzero=True))
def test_function_field_against_sympy(f, g, h):
    assert same(sym(f + g), sym(f) + sym(g))
    assert same(sym(f * g), sym(f) * sym(g))
    assert same(sym(f / h), sym(f) / sym(h))


@given(fractions(ORES["id"]), fractions(ORES["id"]), fractions(ORES["id"], nonzero=True))
def test_commutative_ore_field_against_sympy(f, g, h):
    assert same(sym(f + g), sym(f) + sym(g))
    assert same(sym(f * g), sym(f) * sym(g))
    assert same(sym(f / h), sym(f) / sym(h))
    assert same(sym(h.inverse()), 1 / sym(h))


def test_shift_commutation_against_substitution():
    rng = random.Random(3)
    for _ in range(20):
        num = sum(rng.randint(-3, 3) * X**k for k in range(3))
        den = 1 + sum(rng.randint(-3, 3) * X**k for k in range(1, 2))
        if den == 0 or num == 0:
            continue
        a = ev("Qx;tau=shift", f"({sympy.sstr(num)})/({sympy.sstr(den)})".replace("**", "^"))
        lhs = ev("Qx;tau=shift", "t") * a
        rhs_coeff = (num / den).subs(X, X + 1)
        assert same(sym(lhs), rhs_coeff * T)


def _sympy_rank(A):
    return sympy.Matrix([[sym(e) for e in row] for row in A.rows]).rank(simplify=True)


@pytest.mark.parametrize("seed", range(6))
def test_z2_rank_against_sympy(seed):
    tower = parse_tower("z2")
    rng = random.Random(seed)
    A = random_group_matrix(tower, rng, 3, 3, deficient=seed % 2 == 0)
    expected = _sympy_rank(A)
    assert rank_over_skewfield(A.map(tower.embed, tower.ore)).rank == expected
    assert mn_rank_with_retries(A).rank == expected


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.data())
def test_inner_rank_over_prime_field_is_rank(p, m, n, data):
    ring = FiniteRing("F_p", p)
    rows = [[data.draw(st.integers(0, p - 1)) for _ in range(n)] for _ in range(m)]
    expected = DomainMatrix([[GF(p)(v) for v in row] for row in rows], (m, n), GF(p)).rank()
    assert inner_rank_bruteforce(Matrix(ring, rows, n)) == expected
