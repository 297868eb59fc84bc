"""The Ore division ring of fractions of D[t, t^-1; tau].

Elements are right fractions ``num * den^-1``.  The normal form has ``den``
a polynomial with nonzero constant term and leading coefficient 1, and no
common right divisor of positive degree between numerator and denominator.
With that form equality is structural.
"""

from __future__ import annotations

from .errors import DivisionByZero, RingMismatch
from .skewpoly import SkewLaurent, SkewLaurentRing, gcrd, left_lcm, right_divide, right_lcm

__all__ = [
    "OreField",
    "OreFraction",
    "common_denominator",
    "ore_add",
    "ore_mul",
    "ore_invert",
    "equals",
    "right_common_form",
    "left_common_form",
    "left_fraction",
]


class OreField:
    """``Ore(R)`` for ``R = D[t, t^-1; tau]``."""

    def __init__(self, ring: SkewLaurentRing):
        self.ring = ring
        self.field = ring.field
        self.zero = OreFraction(self, ring.zero, ring.one)
        self.one = OreFraction(self, ring.one, ring.one)
        self.gen = OreFraction(self, ring.gen, ring.one)

    def __call__(self, value) -> OreFraction:
        if isinstance(value, OreFraction):
            if value.parent != self:
                raise RingMismatch(f"{value.parent!r} vs {self!r}")
            return value
        if isinstance(value, SkewLaurent):
            return OreFraction(self, self.ring(value), self.ring.one)
        return OreFraction(self, self.ring.scalar(value), self.ring.one)

    def scalar(self, value) -> OreFraction:
        return OreFraction(self, self.ring.scalar(value), self.ring.one)

    def fraction(self, num: SkewLaurent, den: SkewLaurent) -> OreFraction:
        """Normal form of ``num * den^-1``."""
        return _normalize(self, num, den)

    def left_fraction(self, den: SkewLaurent, num: SkewLaurent) -> OreFraction:
        """Normal form of ``den^-1 * num``."""
        return left_fraction(self, den, num)

    def __eq__(self, other):
        return isinstance(other, OreField) and self.ring == other.ring

    def __hash__(self):
        return hash(("Ore", self.ring))

    def __repr__(self):
        return f"Ore({self.ring!r})"


class OreFraction:
    """A normalized right fraction; build through :meth:`OreField.fraction`."""

    __slots__ = ("parent", "num", "den")

    def __init__(self, parent: OreField, num: SkewLaurent, den: SkewLaurent):
        self.parent = parent
        self.num = num
        self.den = den

    def __bool__(self):
        return bool(self.num)

    def is_integral(self) -> bool:
        """True when the fraction lies in the Laurent ring itself."""
        return self.den.hi == 0

    def _coerce(self, other) -> OreFraction:
        if isinstance(other, OreFraction):
            if other.parent is not self.parent and other.parent != self.parent:
                raise RingMismatch(f"{other.parent!r} vs {self.parent!r}")
            return other
        return self.parent(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if self.den.hi == 0:
                return OreFraction(self.parent, self.num + other.num, self.den)
            return _normalize(self.parent, self.num + other.num, self.den)
        u, v, m = right_lcm(self.den, other.den)
        return _normalize(self.parent, self.num * u + other.num * v, m)

    __radd__ = __add__

    def __neg__(self):
        return OreFraction(self.parent, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.num or not other.num:
            return self.parent.zero
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.hi == 0:
            # b == 1 in normal form
            return _normalize(self.parent, a * c, d)
        # b^-1 c = c' b'^-1 where b c' = c b'; work with the polynomial part of c
        gamma = c.lo
        cpoly = c.shift(-gamma)
        c_prime, b_prime, _ = right_lcm(b, cpoly)
        # b^-1 cpoly t^gamma d^-1 = c' b'^-1 t^gamma d^-1 = c' (d t^-gamma b')^-1
        return _normalize(self.parent, a * c_prime, d.shift(-gamma) * b_prime)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def inverse(self) -> OreFraction:
        if not self.num:
            raise DivisionByZero("inverse of zero in the Ore field")
        return _normalize(self.parent, self.den, self.num)

    def __truediv__(self, other):
        """Right division ``self * other^-1``."""
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.parent.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, OreFraction):
            return self.parent == other.parent and self.num == other.num and self.den == other.den
        try:
            return self == self.parent(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        if self.den.hi == 0:
            return hash(self.num)
        return hash((self.num, self.den))

    def degree(self) -> int:
        """Total t-degree ``span(num) + deg(den)``, used for pivoting."""
        return (self.num.hi - self.num.lo if self.num else 0) + self.den.hi

    def __str__(self):
        if self.den.hi == 0:
            return str(self.num)
        num = str(self.num)
        if not self.num.is_monomial() or not _atomic(num):
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self):
        return f"OreFraction({self})"


def _atomic(text: str) -> bool:
    return not any(ch in text for ch in " +-/()")


def _normalize(parent: OreField, num: SkewLaurent, den: SkewLaurent) -> OreFraction:
    ring = parent.ring
    if not den:
        raise DivisionByZero("fraction with zero denominator")
    if not num:
        return parent.zero
    if den.is_monomial():
        # den = c t^k is a unit of the Laurent ring
        return OreFraction(parent, num * den.unit_inverse(), ring.one)
    # num den^-1 = A t^alpha t^-beta B^-1 with A, B polynomials
    alpha, beta = num.lo, den.lo
    A, B = num.shift(-alpha), den.shift(-beta)
    if alpha >= beta:
        P, Q = A.shift(alpha - beta), B
    else:
        P, Q = A, B.shift(beta - alpha)
    g = gcrd(P, Q)
    if g.hi > 0:
        P, r1 = right_divide(P, g)
        Q, r2 = right_divide(Q, g)
        assert not r1 and not r2
    # Q = Q'' t^j with Q''(0) != 0; t^-j moves into the numerator
    j = Q.lo
    num, den = P.shift(-j), Q.shift(-j)
    if den.hi == 0:
        return OreFraction(parent, num * den.unit_inverse(), ring.one)
    lead = den.lead()
    if lead != 1:
        lam = ring.apply_twist(-den.hi, ring.field.one / lead)
        num, den = num.scale_right(lam), den.scale_right(lam)
    return OreFraction(parent, num, den)


def common_denominator(f1: OreFraction, f2: OreFraction) -> tuple[SkewLaurent, SkewLaurent, SkewLaurent]:
    """``(p1, p2, q)`` with ``f1 = p1 q^-1``, ``f2 = p2 q^-1`` and ``q`` the monic right lcm of the denominators."""
    f2 = f1._coerce(f2)
    u, v, q = right_lcm(f1.den, f2.den)
    return f1.num * u, f2.num * v, q


def ore_add(f1: OreFraction, f2: OreFraction) -> OreFraction:
    return f1 + f2


def ore_mul(f1: OreFraction, f2: OreFraction) -> OreFraction:
    return f1 * f2


def ore_invert(f: OreFraction) -> OreFraction:
    return f.inverse()


def equals(f1: OreFraction, f2: OreFraction) -> bool:
    f2 = f1._coerce(f2)
    return f1 == f2


def right_common_form(fracs) -> tuple[list[SkewLaurent], SkewLaurent]:
    """``(nums, q)`` with ``fracs[k] = nums[k] * q^-1`` for every k."""
    fracs = list(fracs)
    ring = fracs[0].parent.ring
    q = ring.one
    nums: list[SkewLaurent] = []
    for f in fracs:
        if f.den == q:
            nums.append(f.num)
            continue
        u, v, q = right_lcm(q, f.den)
        nums = [n * u for n in nums]
        nums.append(f.num * v)
    return nums, q


def left_common_form(fracs) -> tuple[SkewLaurent, list[SkewLaurent]]:
    """``(q, nums)`` with ``fracs[k] = q^-1 * nums[k]`` for every k."""
    fracs = list(fracs)
    ring = fracs[0].parent.ring
    q = ring.one
    nums: list[SkewLaurent] = []
    for f in fracs:
        if not f.num:
            nums.append(ring.zero)
            continue
        if f.den.hi == 0:
            d, n = ring.one, f.num
        else:
            # f = t^a P q^-1 with P a polynomial; a P = b q gives P q^-1 = a^-1 b,
            # and t^a a^-1 = (a twisted by tau^a)^-1 t^a
            alpha = f.num.lo
            P = f.num.twisted(-alpha).shift(-alpha)
            a, b, _ = left_lcm(P, f.den)
            d, n = a.twisted(alpha), ring.gen ** alpha * b
        if d == q:
            nums.append(n)
            continue
        w1, w2, q = left_lcm(q, d)
        nums = [w1 * x for x in nums]
        nums.append(w2 * n)
    return q, nums


def left_fraction(parent: OreField, den: SkewLaurent, num: SkewLaurent) -> OreFraction:
    """``den^-1 * num`` as a normalized right fraction."""
    ring = parent.ring
    if not den:
        raise DivisionByZero("fraction with zero denominator")
    if not num:
        return parent.zero
    if den.is_monomial():
        return _normalize(parent, den.unit_inverse() * num, ring.one)
    # den = t^d D with D a polynomial, so den^-1 num = D^-1 (t^-d num)
    delta = den.lo
    D = ring.monomial(ring.field.one, -delta) * den
    n = ring.monomial(ring.field.one, -delta) * num
    nu = n.lo
    a, b, _ = right_lcm(D, n.shift(-nu))
    # D^-1 N = a b^-1 and N t^nu = n
    return _normalize(parent, a, ring.monomial(ring.field.one, -nu) * b)
