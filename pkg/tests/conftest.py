import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from oreloc import FunctionField, Moebius, OreField, SkewLaurentRing
from oreloc.parsing import parse_expression, parse_matrix, parse_ring

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QX = FunctionField()
AUTOS = {
    "id": Moebius.identity(QX),
    "shift": Moebius.shift(QX),
    "inv": Moebius.inversion(QX),
}
RINGS = {name: SkewLaurentRing(QX, tau) for name, tau in AUTOS.items()}
ORES = {name: OreField(ring) for name, ring in RINGS.items()}


def ev(ring: str, text: str):
    return parse_expression(text, parse_ring(ring))


def poly(ring: str, text: str):
    """A skew Laurent polynomial parsed in ``Qx;tau=<ring>``."""
    f = ev(f"Qx;tau={ring}", text)
    assert f.is_integral()
    return f.num


def mat(ring: str, text: str):
    return parse_matrix(text, parse_ring(ring))


small = st.integers(-4, 4)


@st.composite
def scalars(draw, field=QX, nonzero=False):
    num = draw(st.lists(small, min_size=1, max_size=3))
    den = draw(st.lists(small, min_size=1, max_size=2))
    if not any(den):
        den = [1]
    if nonzero and not any(num):
        num = [1]
    return field.from_polys(field.base.poly(num), field.base.poly(den))


@st.composite
def skews(draw, ring, lo=-1, hi=2, nonzero=False, polynomial=False):
    lo = 0 if polynomial else lo
    degs = draw(st.lists(st.integers(lo, hi), min_size=1, max_size=3, unique=True))
    p = ring.from_dict({k: draw(scalars(ring.field)) for k in degs})
    if nonzero and not p:
        p = ring.monomial(ring.field.one, degs[0])
    return p


@st.composite
def fractions(draw, ore, nonzero=False):
    num = draw(skews(ore.ring, lo=-1, hi=1, nonzero=nonzero))
    den = draw(skews(ore.ring, hi=1, nonzero=True, polynomial=True))
    return ore.fraction(num, den)


taus = st.sampled_from(sorted(AUTOS))


@pytest.fixture(params=sorted(AUTOS))
def tau_name(request):
    return request.param
