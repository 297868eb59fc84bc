"""Skew Laurent polynomials D[t, t^-1; tau] over a field D.

Elements are written with left coefficients, ``p = sum c_i t^i``, and the
twist is ``t*c = tau(c)*t``, so ``(a t^i)(b t^j) = a tau^i(b) t^(i+j)``.
Polynomials D[t; tau] are the elements with no negative exponents; the
Euclidean operations below are defined on those.
"""

from __future__ import annotations

import math

from .errors import DegreeOverflow, DivisionByZero, InputError, RingMismatch
from flint import nmod_poly

from .scalars import QQ, FunctionField, Moebius, PrimeField, RationalFunction

__all__ = [
    "SkewLaurentRing",
    "SkewLaurent",
    "skew_mul",
    "right_divide",
    "left_divide",
    "gcrd",
    "right_lcm",
    "left_lcm",
    "laurent_normalize",
    "content_factor",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 512

# reduction prime for the coprimality filter in gcrd
_FILTER_PRIME = 2**61 - 1


class SkewLaurentRing:
    """``field[t, t^-1; tau]``.

    ``tau`` must be a :class:`Moebius` on ``field`` when the field is a
    function field; over Q or GF(p) only the identity is allowed.
    ``degree_cap`` bounds ``hi - lo`` of every element produced.
    """

    def __init__(self, field, tau: Moebius | None = None, degree_cap: int = DEFAULT_DEGREE_CAP, var: str = "t"):
        if tau is not None and not tau.is_identity():
            if not isinstance(field, FunctionField) or tau.field != field:
                raise InputError("tau must be an automorphism of the coefficient field")
        elif tau is None and isinstance(field, FunctionField):
            tau = Moebius.identity(field)
        self.field = field
        self.tau = tau
        self.degree_cap = degree_cap
        self.var = var
        self._twists: dict[int, Moebius | None] = {}
        self._reduced = None
        self.zero = SkewLaurent(self, 0, ())
        self.one = SkewLaurent(self, 0, (field.one,))
        self.gen = SkewLaurent(self, 1, (field.one,))

    @property
    def commutative(self) -> bool:
        return self.tau is None or self.tau.is_identity()

    def twist(self, k: int):
        """``tau^k`` as a callable, or ``None`` when it acts trivially."""
        try:
            return self._twists[k]
        except KeyError:
            pass
        if self.commutative or k == 0:
            sigma = None
        else:
            sigma = self.tau.power(k)
            if sigma.is_identity():
                sigma = None
        self._twists[k] = sigma
        return sigma

    def apply_twist(self, k: int, c):
        sigma = self.twist(k)
        return c if sigma is None else sigma(c)

    def reduction(self):
        """The same ring over GF(p)(x) for ``p = 2^61 - 1``, or ``None``.

        Available over Q(x) when ``tau`` has an integral matrix that stays
        invertible mod p; reduction is then a ring homomorphism.
        """
        if self._reduced is None:
            self._reduced = False
            field = self.field
            if isinstance(field, FunctionField) and field.base == QQ:
                a, b, c, d = self.tau._integer_matrix()
                if (a * d - b * c) % _FILTER_PRIME:
                    gf = FunctionField(PrimeField(_FILTER_PRIME), field.var)
                    tau = Moebius(gf, a, b, c, d)
                    self._reduced = SkewLaurentRing(gf, tau, self.degree_cap, self.var)
        return self._reduced or None

    def scalar(self, c) -> SkewLaurent:
        c = self.field(c)
        return SkewLaurent(self, 0, (c,)) if c else self.zero

    def monomial(self, c, k: int) -> SkewLaurent:
        c = self.field(c)
        return SkewLaurent(self, k, (c,)) if c else self.zero

    def from_dict(self, terms: dict) -> SkewLaurent:
        terms = {k: self.field(v) for k, v in terms.items()}
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return self.zero
        lo, hi = min(terms), max(terms)
        zero = self.field.zero
        return self._make(lo, [terms.get(k, zero) for k in range(lo, hi + 1)])

    def __call__(self, value) -> SkewLaurent:
        if isinstance(value, SkewLaurent):
            if value.ring != self:
                raise RingMismatch(f"{value.ring!r} vs {self!r}")
            return value
        return self.scalar(value)

    def _make(self, lo: int, coeffs: list) -> SkewLaurent:
        start, end = 0, len(coeffs)
        while start < end and not coeffs[start]:
            start += 1
        while end > start and not coeffs[end - 1]:
            end -= 1
        if start == end:
            return self.zero
        if end - start - 1 > self.degree_cap:
            raise DegreeOverflow(f"degree span {end - start - 1} exceeds cap {self.degree_cap}")
        return SkewLaurent(self, lo + start, tuple(coeffs[start:end]))

    def __eq__(self, other):
        return (
            isinstance(other, SkewLaurentRing)
            and self.field == other.field
            and self.tau == other.tau
            and self.var == other.var
        )

    def __hash__(self):
        return hash((self.field, self.tau, self.var))

    def __repr__(self):
        tau = "id" if self.tau is None else str(self.tau)
        return f"{self.field.name}[{self.var}^+-1; {tau}]"


class SkewLaurent:
    """An immutable element ``sum coeffs[i] * t^(lo+i)``; ends are nonzero."""

    __slots__ = ("ring", "lo", "coeffs", "_hash")

    def __init__(self, ring: SkewLaurentRing, lo: int, coeffs: tuple):
        self.ring = ring
        self.lo = lo if coeffs else 0
        self.coeffs = coeffs
        self._hash = None

    # --- structure -------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def degree(self):
        """Highest exponent; ``-inf`` for zero."""
        return self.hi if self.coeffs else -math.inf

    def __bool__(self):
        return bool(self.coeffs)

    def is_polynomial(self) -> bool:
        return not self.coeffs or self.lo >= 0

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def is_scalar(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.lo == 0)

    def lead(self):
        return self.coeffs[-1]

    def coeff(self, k: int):
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.field.zero

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lo + i, c

    def shift(self, k: int) -> SkewLaurent:
        """Right multiplication by ``t^k`` (a pure exponent shift)."""
        if not self.coeffs or k == 0:
            return self
        return SkewLaurent(self.ring, self.lo + k, self.coeffs)

    def twisted(self, k: int) -> SkewLaurent:
        """Coefficientwise ``tau^k``; equals ``t^k * self * t^-k``."""
        sigma = self.ring.twist(k)
        if sigma is None or not self.coeffs:
            return self
        return SkewLaurent(self.ring, self.lo, tuple(sigma(c) for c in self.coeffs))

    def scale_left(self, c) -> SkewLaurent:
        if not c:
            return self.ring.zero
        return SkewLaurent(self.ring, self.lo, tuple(c * a for a in self.coeffs))

    def scale_right(self, c) -> SkewLaurent:
        """``self * c`` for a scalar ``c``."""
        if not c:
            return self.ring.zero
        ring = self.ring
        return SkewLaurent(ring, self.lo, tuple(a * ring.apply_twist(self.lo + i, c) for i, a in enumerate(self.coeffs)))

    # --- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> SkewLaurent:
        if isinstance(other, SkewLaurent):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{other.ring!r} vs {self.ring!r}")
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        zero = self.ring.field.zero
        out = [zero] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.lo - lo + i] = c
        for i, c in enumerate(other.coeffs):
            j = other.lo - lo + i
            out[j] = out[j] + c
        return self.ring._make(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return SkewLaurent(self.ring, self.lo, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return self.ring.zero
        ring = self.ring
        if len(self.coeffs) + len(other.coeffs) - 2 > ring.degree_cap:
            raise DegreeOverflow(
                f"product degree span {len(self.coeffs) + len(other.coeffs) - 2} exceeds cap {ring.degree_cap}"
            )
        zero = ring.field.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        twisted_cache: dict = {}
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            sigma = ring.twist(self.lo + i)
            row = twisted_cache.get(sigma)
            if row is None:
                row = other.coeffs if sigma is None else tuple(sigma(b) if b else b for b in other.coeffs)
                twisted_cache[sigma] = row
            for j, b in enumerate(row):
                if b:
                    out[i + j] = out[i + j] + a * b
        return ring._make(self.lo + other.lo, out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def unit_inverse(self) -> SkewLaurent:
        """Inverse of a unit ``c t^k``, which is ``tau^-k(c^-1) t^-k``."""
        if len(self.coeffs) != 1:
            raise InputError(f"{self} is not a unit of the Laurent ring")
        k = self.lo
        c = _inv(self.ring.field, self.coeffs[0])
        return SkewLaurent(self.ring, -k, (self.ring.apply_twist(-k, c),))

    def __truediv__(self, other):
        return self * self._coerce(other).unit_inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.unit_inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SkewLaurent):
            return self.ring == other.ring and self.lo == other.lo and self.coeffs == other.coeffs
        try:
            return self == self.ring.scalar(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_scalar():
                self._hash = hash(self.coeffs[0]) if self.coeffs else hash(0)
            else:
                self._hash = hash((self.lo, self.coeffs))
        return self._hash

    def __str__(self):
        if not self.coeffs:
            return "0"
        var = self.ring.var
        parts = []
        for k, c in sorted(self.terms(), reverse=True):
            cs = _format_scalar(self.ring.field, c)
            # a single signed term such as -3/x^2 prints as a subtraction
            neg = cs.startswith("-") and " " not in cs
            if neg:
                cs = cs[1:]
            if k == 0:
                body = cs
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if cs == "1":
                    body = mono
                else:
                    body = f"{cs if _is_atomic(cs) else '(' + cs + ')'}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"SkewLaurent({self})"


def _inv(field, c):
    if not c:
        raise DivisionByZero("inverse of zero scalar")
    return field.one / c


def _format_scalar(field, c) -> str:
    if isinstance(field, FunctionField):
        return str(c)
    return field.format(c) if field.characteristic else str(c)


def _is_atomic(text: str) -> bool:
    """True when ``text`` can be followed by ``*t^k`` without parentheses."""
    return not any(ch in text for ch in " +-/") or (
        "/" in text and not any(ch in text for ch in " +-()") and text.count("/") == 1 and "^" not in text.split("/")[1]
    )


# --- Euclidean structure of D[t; tau] ----------------------------------------


def skew_mul(p: SkewLaurent, q: SkewLaurent) -> SkewLaurent:
    return p * q


def _require_poly(*polys):
    for p in polys:
        if not p.is_polynomial():
            raise InputError(f"{p} has negative exponents; use laurent_normalize first")


def right_divide(p: SkewLaurent, d: SkewLaurent) -> tuple[SkewLaurent, SkewLaurent]:
    """``(q, r)`` with ``p = q*d + r`` and ``deg r < deg d``."""
    if p.ring != d.ring:
        raise RingMismatch(f"{p.ring!r} vs {d.ring!r}")
    if not d:
        raise DivisionByZero("right division by zero")
    _require_poly(p, d)
    ring = p.ring
    field = ring.field
    zero = field.zero
    if not p or p.hi < d.hi:
        return ring.zero, p
    n = d.hi
    dense_d = [d.coeff(k) for k in range(n + 1)]
    r = [p.coeff(k) for k in range(p.hi + 1)]
    q = [zero] * (p.hi - n + 1)
    lead_inv_cache: dict = {}
    for k in range(p.hi, n - 1, -1):
        a = r[k]
        if not a:
            continue
        shift = k - n
        sigma = ring.twist(shift)
        if sigma not in lead_inv_cache:
            lead_inv_cache[sigma] = (
                _inv(field, dense_d[n]) if sigma is None else _inv(field, sigma(dense_d[n])),
                dense_d if sigma is None else [sigma(c) if c else c for c in dense_d],
            )
        inv_lead, row = lead_inv_cache[sigma]
        c = a * inv_lead
        q[shift] = c
        for j in range(n):
            if row[j]:
                r[shift + j] = r[shift + j] - c * row[j]
        r[k] = zero
    return ring._make(0, q), ring._make(0, r[:n])


def left_divide(p: SkewLaurent, d: SkewLaurent) -> tuple[SkewLaurent, SkewLaurent]:
    """``(q, r)`` with ``p = d*q + r`` and ``deg r < deg d``."""
    if p.ring != d.ring:
        raise RingMismatch(f"{p.ring!r} vs {d.ring!r}")
    if not d:
        raise DivisionByZero("left division by zero")
    _require_poly(p, d)
    ring = p.ring
    field = ring.field
    zero = field.zero
    if not p or p.hi < d.hi:
        return ring.zero, p
    n = d.hi
    dense_d = [d.coeff(k) for k in range(n + 1)]
    lead_inv = _inv(field, dense_d[n])
    r = [p.coeff(k) for k in range(p.hi + 1)]
    q = [zero] * (p.hi - n + 1)
    for k in range(p.hi, n - 1, -1):
        a = r[k]
        if not a:
            continue
        shift = k - n
        # d * (c t^shift) has top term b tau^n(c) t^k
        c = ring.apply_twist(-n, lead_inv * a)
        q[shift] = c
        for j in range(n):
            if dense_d[j]:
                r[shift + j] = r[shift + j] - dense_d[j] * ring.apply_twist(j, c)
        r[k] = zero
    return ring._make(0, q), ring._make(0, r[:n])


def _left_monic(p: SkewLaurent) -> SkewLaurent:
    lead = p.lead()
    if lead == 1:
        return p
    return p.scale_left(_inv(p.ring.field, lead))


def _right_monic_factor(p: SkewLaurent):
    """Scalar ``lam`` with ``p * lam`` having leading coefficient 1."""
    return p.ring.apply_twist(-p.hi, _inv(p.ring.field, p.lead()))


def _reduce(p: SkewLaurent, target: SkewLaurentRing):
    """Image of ``p`` over GF(m)(x); ``None`` unless ``p`` is m-integral with a unit leading coefficient."""
    m = _FILTER_PRIME
    field = target.field
    coeffs = []
    for c in p.coeffs:
        den = nmod_poly(c.den.coeffs(), m)
        if den.degree() < 0:
            return None
        coeffs.append(RationalFunction(field, nmod_poly(c.num.coeffs(), m), den))
    if not coeffs[-1]:
        return None
    return target._make(p.lo, coeffs)


def _coprime_mod_p(p: SkewLaurent, q: SkewLaurent) -> bool:
    """True when reduction mod a large prime proves ``gcrd(p, q) = 1``.

    The Gauss valuation is tau-invariant and multiplicative on skew
    polynomials, so a right factor of degree k over Q(x) reduces to a common
    right factor of degree k whenever ``p`` keeps its degree.
    """
    target = p.ring.reduction()
    if target is None:
        return False
    pr, qr = _reduce(p, target), _reduce(q, target)
    if pr is None or qr is None:
        return False
    return gcrd(pr, qr).hi == 0


def gcrd(p: SkewLaurent, q: SkewLaurent) -> SkewLaurent:
    """Greatest common right divisor of two polynomials, leading coefficient 1."""
    _require_poly(p, q)
    if not p and not q:
        return p.ring.zero
    if q and (not p or p.hi < q.hi):
        p, q = q, p
    if q and q.hi > 0 and _coprime_mod_p(p, q):
        return q.ring.one
    q = _left_monic(q)
    while q:
        if q.hi == 0:
            return q.ring.one
        _, r = right_divide(p, q)
        p, q = q, (_left_monic(r) if r else r)
    return p


def right_lcm(q1: SkewLaurent, q2: SkewLaurent) -> tuple[SkewLaurent, SkewLaurent, SkewLaurent]:
    """``(a, b, m)`` with ``m = q1*a = q2*b`` of least degree, ``m`` monic.

    Extended left-Euclidean algorithm: maintain ``r_i = q1*u_i + q2*v_i``
    until the remainder vanishes.
    """
    if q1.ring != q2.ring:
        raise RingMismatch(f"{q1.ring!r} vs {q2.ring!r}")
    if not q1 or not q2:
        raise DivisionByZero("right_lcm of zero")
    _require_poly(q1, q2)
    ring = q1.ring
    r0, r1 = q1, q2
    u0, v0 = ring.one, ring.zero
    u1, v1 = ring.zero, ring.one
    while True:
        s, r = left_divide(r0, r1)
        u2 = u0 - u1 * s
        v2 = v0 - v1 * s
        if not r:
            break
        # keep remainders monic; right scaling preserves r = q1*u + q2*v
        lam = _right_monic_factor(r)
        r, u2, v2 = r.scale_right(lam), u2.scale_right(lam), v2.scale_right(lam)
        r0, r1 = r1, r
        u0, v0, u1, v1 = u1, v1, u2, v2
    a, b = u2, -v2
    m = q1 * a
    lam = _right_monic_factor(m)
    if lam != 1:
        a, b, m = a.scale_right(lam), b.scale_right(lam), m.scale_right(lam)
    return a, b, m


def left_lcm(q1: SkewLaurent, q2: SkewLaurent) -> tuple[SkewLaurent, SkewLaurent, SkewLaurent]:
    """``(a, b, m)`` with ``m = a*q1 = b*q2`` of least degree, ``m`` monic.

    Mirror image of :func:`right_lcm`, using right division and left
    cofactors ``r_i = u_i*q1 + v_i*q2``.
    """
    if q1.ring != q2.ring:
        raise RingMismatch(f"{q1.ring!r} vs {q2.ring!r}")
    if not q1 or not q2:
        raise DivisionByZero("left_lcm of zero")
    _require_poly(q1, q2)
    ring = q1.ring
    r0, r1 = q1, q2
    u0, v0 = ring.one, ring.zero
    u1, v1 = ring.zero, ring.one
    while True:
        s, r = right_divide(r0, r1)
        u2 = u0 - s * u1
        v2 = v0 - s * v1
        if not r:
            break
        lam = _inv(ring.field, r.lead())
        r, u2, v2 = r.scale_left(lam), u2.scale_left(lam), v2.scale_left(lam)
        r0, r1 = r1, r
        u0, v0, u1, v1 = u1, v1, u2, v2
    a, b = u2, -v2
    m = a * q1
    lam = _inv(ring.field, m.lead())
    if lam != 1:
        a, b, m = a.scale_left(lam), b.scale_left(lam), m.scale_left(lam)
    return a, b, m


def content_factor(polys, side: str = "left"):
    """Scalar ``c`` making every ``c*p`` (``side="left"``) or ``p*c`` (``"right"``) primitive.

    Primitive means polynomial coefficients in x whose common content is 1.
    Over a plain field there is nothing to clear and ``c = 1``.
    """
    polys = [p for p in polys if p]
    if not polys:
        return None
    ring = polys[0].ring
    field = ring.field
    if not isinstance(field, FunctionField):
        return field.one
    # p*c = sum tau^i(tau^-i(a_i) c) t^i, so on the right the untwisted coefficients count
    coeffs = []
    for p in polys:
        if side == "left":
            coeffs.extend(a for a in p.coeffs if a)
        else:
            coeffs.extend(ring.apply_twist(-(p.lo + i), a) for i, a in enumerate(p.coeffs) if a)
    g = l = None
    for a in coeffs:
        g = a.num if g is None else g.gcd(a.num)
        if a.den.degree() > 0 or a.den != field._one_poly:
            l = a.den if l is None else l * (a.den // l.gcd(a.den))
    if l is None:
        l = field._one_poly
    return RationalFunction(field, l, g)


def laurent_normalize(p: SkewLaurent) -> tuple[int, SkewLaurent]:
    """``(k, poly)`` with ``p = poly * t^k`` and ``poly(0) != 0``."""
    if not p:
        return 0, p
    return p.lo, p.shift(-p.lo)
