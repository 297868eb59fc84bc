import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oreloc import (
    InputError,
    Matrix,
    RingMismatch,
    UnsupportedAutomorphism,
    certify_stably_full,
    diag_sum,
    dim_over_D,
    embed_in_ore,
    parse_tower,
    rank_over_skewfield,
)
from oreloc.crossed import extend_automorphism

from conftest import QX, mat

Z2 = parse_tower("z2")
KLEIN = parse_tower("klein")
TOWERS = {"z2": Z2, "klein": KLEIN}
x = QX.gen


def test_extend_automorphism():
    assert extend_automorphism("id", QX).is_identity()
    sigma = extend_automorphism("inv", QX)
    assert sigma.matrix() == (0, 1, 1, 0)
    assert sigma(x**2 + 1) == (1 + x**2) / x**2
    with pytest.raises(UnsupportedAutomorphism):
        extend_automorphism("shift", QX)


def test_tower_descriptors():
    assert parse_tower("base=Q;tau=inv") == KLEIN
    assert parse_tower("base=F5;tau=id").base.p == 5
    with pytest.raises(UnsupportedAutomorphism):
        parse_tower("base=Q;tau=shift")
    with pytest.raises(InputError):
        parse_tower("torus")


def test_klein_group_law():
    t, xx = KLEIN.t, KLEIN.x
    assert t * xx == xx ** -1 * t
    assert t ** -1 * xx * t == xx ** -1
    assert xx * t == t * xx ** -1
    assert Z2.t * Z2.x == Z2.x * Z2.t


def test_embed_examples():
    e = KLEIN.x + KLEIN.t
    f = embed_in_ore(e, KLEIN)
    assert f.is_integral() and str(f) == "t + x"
    assert embed_in_ore(KLEIN.t * KLEIN.x, KLEIN) == embed_in_ore(KLEIN.x ** -1 * KLEIN.t, KLEIN)
    assert embed_in_ore(KLEIN.one, KLEIN) == KLEIN.ore.one
    with pytest.raises(RingMismatch):
        embed_in_ore(Z2.x, KLEIN)


def test_certify_examples():
    cert = certify_stably_full(mat("klein", "[x + t]"), KLEIN)
    assert cert.stably_full and cert.rank == 1
    cert = certify_stably_full(mat("klein", "[[t, x], [x*t, x^2]]"), KLEIN)
    assert cert.verdict == "NotStablyFull" and cert.rank == 1
    A = mat("z2", "[[t, x], [1, 1]]")
    cert = certify_stably_full(A, Z2)
    assert cert.stably_full and cert.rank == 2
    E = A.map(Z2.embed, Z2.ore)
    assert E @ cert.witness == Matrix.identity(Z2.ore, 2)
    assert cert.to_json() == {"verdict": "StablyFull", "rank": 2}


def test_certify_needs_square():
    with pytest.raises(InputError):
        certify_stably_full(mat("z2", "[[t, x]]"), Z2)


def test_dim_over_d():
    assert dim_over_D(Matrix.identity(Z2, 3), Z2) == 0
    assert dim_over_D(mat("klein", "[[0, 0]]"), KLEIN) == 2
    assert dim_over_D(mat("klein", "[[t, x]]"), KLEIN) == 1


def test_explicit_factorization_not_full():
    B = mat("klein", "[[1], [x]]")
    C = mat("klein", "[[t, x]]")
    assert B @ C == mat("klein", "[[t, x], [x*t, x^2]]")


@st.composite
def elements(draw, tower):
    keys = draw(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3, unique=True))
    return tower.element({k: draw(st.integers(-3, 3)) for k in keys})


@st.composite
def monomial_units(draw, tower):
    return tower.monomial(draw(st.integers(-1, 1)), draw(st.integers(-1, 1)), draw(st.sampled_from([-1, 1])))


towers = st.sampled_from(sorted(TOWERS))


@settings(max_examples=500)
@given(st.data(), towers)
def test_embed_is_homomorphism(data, name):
    tower = TOWERS[name]
    a, b = data.draw(elements(tower)), data.draw(elements(tower))
    assert tower.embed(a * b) == tower.embed(a) * tower.embed(b)
    assert tower.embed(a + b) == tower.embed(a) + tower.embed(b)
    assert bool(tower.embed(a)) == bool(a)


@given(st.data(), towers)
def test_group_ring_associative(data, name):
    tower = TOWERS[name]
    a, b, c = (data.draw(elements(tower)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    u = data.draw(monomial_units(tower))
    assert u * u.unit_inverse() == tower.one == u.unit_inverse() * u


@settings(max_examples=25)
@given(st.data(), towers)
def test_certificate_consistency(data, name):
    tower = TOWERS[name]
    A = Matrix(tower, [[data.draw(elements(tower)) for _ in range(2)] for _ in range(2)])
    cert = certify_stably_full(A, tower, with_inverse=False)
    s = data.draw(st.integers(1, 3))
    big = certify_stably_full(diag_sum(A, s), tower, with_inverse=False)
    assert big.rank == cert.rank + s
    assert big.stably_full == cert.stably_full


@settings(max_examples=25)
@given(st.data(), towers)
def test_unit_invariance(data, name):
    tower = TOWERS[name]
    A = Matrix(tower, [[data.draw(elements(tower)) for _ in range(2)] for _ in range(2)])
    u, v, c = data.draw(monomial_units(tower)), data.draw(monomial_units(tower)), data.draw(elements(tower))
    U = Matrix(tower, [[u, c], [tower.zero, tower.one]])
    V = Matrix(tower, [[tower.one, tower.zero], [c, v]])
    before = certify_stably_full(A, tower, with_inverse=False)
    after = certify_stably_full(U @ A @ V, tower, with_inverse=False)
    assert before.verdict == after.verdict


@settings(max_examples=25)
@given(st.data(), towers)
def test_products_through_smaller_dimension(data, name):
    tower = TOWERS[name]
    B = Matrix(tower, [[data.draw(elements(tower))] for _ in range(2)])
    C = Matrix(tower, [[data.draw(elements(tower)) for _ in range(2)]])
    cert = certify_stably_full(B @ C, tower, with_inverse=False)
    assert not cert.stably_full
    assert cert.rank == rank_over_skewfield((B @ C).map(tower.embed, tower.ore)).rank <= 1
