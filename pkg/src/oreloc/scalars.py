"""Exact base fields: Q, GF(p) and the rational function field k(x).

Rationals are ``flint.fmpq`` values and prime-field elements are
``flint.nmod`` values; polynomials in ``x`` are dense flint polynomials.
Automorphisms of k(x) over k are Moebius substitutions
``x -> (a*x + b)/(c*x + d)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from flint import fmpq, fmpq_poly, fmpz, fmpz_poly, nmod, nmod_poly

from .errors import DivisionByZero, InputError, RingMismatch

__all__ = [
    "QQ",
    "RationalField",
    "PrimeField",
    "FunctionField",
    "RationalFunction",
    "Moebius",
    "field_arith",
    "apply_automorphism",
    "compose_automorphisms",
    "invert_automorphism",
    "parse_automorphism",
    "format_poly",
]

_MAX_PRIME = 2**64


class RationalField:
    """The field of rational numbers; elements are ``fmpq``."""

    name = "Q"
    characteristic = 0

    def __init__(self):
        self.zero = fmpq(0)
        self.one = fmpq(1)

    def __call__(self, value) -> fmpq:
        if isinstance(value, fmpq):
            return value
        if isinstance(value, (int, fmpz)):
            return fmpq(value)
        if isinstance(value, Fraction):
            return fmpq(value.numerator, value.denominator)
        if isinstance(value, str):
            num, _, den = value.partition("/")
            try:
                return fmpq(int(num), int(den) if den else 1)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"not a rational number: {value!r}") from exc
        raise RingMismatch(f"cannot convert {value!r} into Q")

    def __contains__(self, value) -> bool:
        return isinstance(value, (fmpq, int, fmpz))

    def poly(self, coeffs) -> fmpq_poly:
        return fmpq_poly(list(coeffs))

    def format(self, value) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField:
    """GF(p) for a prime ``p < 2**64``; elements are ``nmod``."""

    characteristic: int

    def __init__(self, p: int):
        p = int(p)
        if not 2 <= p < _MAX_PRIME:
            raise InputError(f"modulus {p} outside [2, 2^64)")
        if not fmpz(p).is_prime():
            raise InputError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"
        self.zero = nmod(0, p)
        self.one = nmod(1, p)

    def __call__(self, value) -> nmod:
        if isinstance(value, nmod):
            if value.modulus() != self.p:
                raise RingMismatch(f"element of GF({value.modulus()}) used in GF({self.p})")
            return value
        if isinstance(value, (int, fmpz)):
            return nmod(int(value), self.p)
        if isinstance(value, (Fraction, fmpq)):
            num, den = (value.numerator, value.denominator) if isinstance(value, Fraction) else (int(value.p), int(value.q))
            if den % self.p == 0:
                raise DivisionByZero(f"denominator {den} vanishes mod {self.p}")
            return nmod(num, self.p) / nmod(den, self.p)
        if isinstance(value, str):
            return self(RationalField()(value))
        raise RingMismatch(f"cannot convert {value!r} into GF({self.p})")

    def __contains__(self, value) -> bool:
        if isinstance(value, nmod):
            return value.modulus() == self.p
        return isinstance(value, (int, fmpz))

    def poly(self, coeffs) -> nmod_poly:
        return nmod_poly([int(c) for c in coeffs], self.p)

    def format(self, value) -> str:
        return str(int(value))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def _coeff_key(poly) -> tuple:
    return tuple(int(c) if isinstance(c, (nmod, fmpz)) else (int(c.p), int(c.q)) for c in poly.coeffs())


def format_poly(poly, base, var: str = "x") -> str:
    """Canonical text for a dense polynomial, highest degree first."""
    deg = poly.degree()
    if deg < 0:
        return "0"
    parts = []
    for k in range(deg, -1, -1):
        c = poly[k]
        if not c:
            continue
        neg = base.characteristic == 0 and c < 0
        mag = -c if neg else c
        cs = base.format(mag)
        if k == 0:
            body = cs
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if cs == "1" else f"{cs}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


class FunctionField:
    """The rational function field ``base(x)``.

    Over Q the numerator and denominator are integer polynomials with no
    common factor (content included) and positive leading denominator
    coefficient; over GF(p) the denominator is monic.  Integer polynomials
    keep arithmetic free of per-coefficient rational normalization.
    """

    characteristic: int

    def __init__(self, base=QQ, var: str = "x"):
        if not isinstance(base, (RationalField, PrimeField)):
            raise InputError("function fields are built over Q or GF(p)")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self.name = f"{base.name}{var}"
        self._integral = base.characteristic == 0
        self._one_poly = self._poly([1])
        self.zero = RationalFunction(self, self._poly([]), self._one_poly, _trusted=True)
        self.one = RationalFunction(self, self._one_poly, self._one_poly, _trusted=True)
        self.gen = RationalFunction(self, self._poly([0, 1]), self._one_poly, _trusted=True)

    def _poly(self, coeffs):
        if self._integral:
            return fmpz_poly(list(coeffs))
        return self.base.poly(coeffs)

    def __call__(self, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.field != self:
                raise RingMismatch(f"element of {value.field!r} used in {self!r}")
            return value
        if value in self.base or isinstance(value, Fraction):
            c = self.base(value)
            if self._integral:
                return RationalFunction(self, fmpz_poly([c.p]), fmpz_poly([c.q]), _trusted=True)
            return RationalFunction(self, self._poly([c]), self._one_poly, _trusted=True)
        raise RingMismatch(f"cannot convert {value!r} into {self!r}")

    def from_polys(self, num, den) -> RationalFunction:
        """``num/den`` from flint polynomials over the base field."""
        if self._integral:
            num, den = fmpq_poly(num), fmpq_poly(den)
            num, den = num.numer() * den.denom(), den.numer() * num.denom()
        return RationalFunction(self, num, den)

    def monomial(self, k: int, coeff=1) -> RationalFunction:
        """``coeff * x**k`` for any integer ``k``."""
        c = self.base(coeff)
        if not c:
            return self.zero
        if self._integral:
            top, bottom = int(c.p), int(c.q)
        else:
            top, bottom = c, 1
        if k >= 0:
            return RationalFunction(self, self._poly([0] * k + [top]), self._poly([bottom]), _trusted=True)
        return RationalFunction(self, self._poly([top]), self._poly([0] * (-k) + [bottom]), _trusted=True)

    def __contains__(self, value) -> bool:
        if isinstance(value, RationalFunction):
            return value.field == self
        return value in self.base

    def format(self, value) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.base == self.base and other.var == self.var

    def __hash__(self):
        return hash(("Fx", self.base, self.var))

    def __repr__(self):
        return f"{self.base!r}({self.var})"


def _lead(p):
    return p[p.degree()]


class RationalFunction:
    """``num/den`` in lowest terms; immutable.  See :class:`FunctionField`."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FunctionField, num, den, _trusted: bool = False):
        self.field = field
        self._hash = None
        if _trusted:
            self.num, self.den = num, den
            return
        if den.degree() < 0:
            raise DivisionByZero("rational function with zero denominator")
        if num.degree() < 0:
            self.num, self.den = num, field._one_poly
            return
        if field._integral:
            g = num.gcd(den)
            if g != 1:
                num, den = num // g, den // g
            if _lead(den) < 0:
                num, den = -num, -den
        else:
            if den.degree() > 0:
                g = num.gcd(den)
                if g.degree() > 0:
                    num, den = num // g, den // g
            lc = _lead(den)
            if lc != 1:
                num, den = num / lc, den / lc
        self.num, self.den = num, den

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            if other.field is not self.field and other.field != self.field:
                raise RingMismatch(f"{other.field!r} vs {self.field!r}")
            return other
        try:
            return self.field(other)
        except RingMismatch:
            raise
        except Exception as exc:  # flint coercion errors
            raise RingMismatch(f"cannot combine {other!r} with {self.field!r}") from exc

    def __bool__(self):
        return self.num.degree() >= 0

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def __add__(self, other):
        other = self._coerce(other)
        if not other:
            return self
        if not self:
            return other
        field = self.field
        one = field._one_poly
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            if b == one:
                return RationalFunction(field, a + c, b, _trusted=True)
            return RationalFunction(field, a + c, b)
        if b == one:
            return RationalFunction(field, a * d + c, d, _trusted=True)
        if d == one:
            return RationalFunction(field, a + c * b, b, _trusted=True)
        # only the common part of the denominators can cancel
        g = b.gcd(d)
        if g == one:
            return RationalFunction(field, a * d + c * b, b * d, _trusted=True)
        b1, d1 = b // g, d // g
        num = a * d1 + c * b1
        if num.degree() < 0:
            return field.zero
        h = num.gcd(g)
        if h != one:
            num, g = num // h, g // h
        return RationalFunction(field, num, b1 * d1 * g, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if not self or not other:
            return self.field.zero
        one = self.field._one_poly
        a, b, c, d = self.num, self.den, other.num, other.den
        if d != one:
            g = a.gcd(d)
            if g != one:
                a, d = a // g, d // g
        if b != one:
            g = c.gcd(b)
            if g != one:
                c, b = c // g, b // g
        return RationalFunction(self.field, a * c, b * d, _trusted=True)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self:
            raise DivisionByZero("inverse of zero rational function")
        num, den = self.den, self.num
        lc = _lead(den)
        if self.field._integral:
            if lc < 0:
                num, den = -num, -den
        elif lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction(self.field, num, den, _trusted=True)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.field, self.num**k, self.den**k, _trusted=True)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.field == other.field and self.num == other.num and self.den == other.den
        try:
            other = self.field(other)
        except Exception:
            return NotImplemented
        return self == other

    def numerator(self):
        """Numerator over the base field, paired with a monic :meth:`denominator`."""
        if self.field._integral:
            return fmpq_poly(self.num) / _lead(self.den)
        return self.num

    def denominator(self):
        if self.field._integral:
            return fmpq_poly(self.den) / _lead(self.den)
        return self.den

    def __hash__(self):
        if self._hash is None:
            if self.den.degree() == 0 and self.num.degree() <= 0:
                # agree with the hash of the base-field constant
                c = self.num[0]
                self._hash = hash(fmpq(c, self.den[0]) if self.field._integral else c)
            else:
                self._hash = hash((_coeff_key(self.num), _coeff_key(self.den)))
        return self._hash

    def degree(self) -> int:
        """``deg num + deg den`` (a size measure, not a valuation)."""
        return max(self.num.degree(), 0) + self.den.degree()

    def __str__(self):
        base, var = self.field.base, self.field.var
        num_poly, den_poly = self.numerator(), self.denominator()
        num = format_poly(num_poly, base, var)
        if den_poly.degree() == 0:
            return num
        den = format_poly(den_poly, base, var)
        if num_poly.degree() > 0 and sum(1 for c in num_poly.coeffs() if c) > 1:
            num = f"({num})"
        if sum(1 for c in den_poly.coeffs() if c) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"


class Moebius:
    """The automorphism of ``base(x)`` induced by ``x -> (a*x + b)/(c*x + d)``.

    Coefficients are scaled so that ``c == 1``, or ``d == 1`` when ``c == 0``;
    equal substitutions then compare equal.
    """

    __slots__ = ("field", "a", "b", "c", "d", "_powers")

    def __init__(self, field: FunctionField, a, b, c, d):
        base = field.base
        a, b, c, d = (base(v) for v in (a, b, c, d))
        if not a * d - b * c:
            raise InputError("Moebius matrix is singular (ad - bc = 0)")
        lead = c if c else d
        if lead != 1:
            a, b, c, d = a / lead, b / lead, c / lead, d / lead
        self.field = field
        self.a, self.b, self.c, self.d = a, b, c, d
        self._powers = {}

    @classmethod
    def identity(cls, field: FunctionField) -> Moebius:
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def inversion(cls, field: FunctionField) -> Moebius:
        return cls(field, 0, 1, 1, 0)

    @classmethod
    def shift(cls, field: FunctionField, by=1) -> Moebius:
        return cls(field, 1, by, 0, 1)

    def is_identity(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def matrix(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def compose(self, other: Moebius) -> Moebius:
        """Substitution ``x -> self(other(x))``.

        As maps of the field, ``apply(self.compose(other), f)`` equals
        ``apply(other, apply(self, f))``.
        """
        a, b, c, d = self.matrix()
        e, f, g, h = other.matrix()
        return Moebius(self.field, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> Moebius:
        return Moebius(self.field, self.d, -self.b, -self.c, self.a)

    def power(self, k: int) -> Moebius:
        if k in self._powers:
            return self._powers[k]
        if k < 0:
            result = self.inverse().power(-k)
        else:
            result = Moebius.identity(self.field)
            base, e = self, k
            while e:
                if e & 1:
                    result = result.compose(base)
                base = base.compose(base)
                e >>= 1
        self._powers[k] = result
        return result

    def _integer_matrix(self) -> tuple:
        """``(a, b, c, d)`` scaled to coprime integers (the map is unchanged)."""
        vals = self.matrix()
        den = 1
        for v in vals:
            den = den * int(v.q) // gcd(den, int(v.q))
        return tuple(int(v * den) for v in vals)

    def __call__(self, value):
        if not isinstance(value, RationalFunction):
            return value  # constants are fixed
        if value.field != self.field:
            raise RingMismatch(f"{value.field!r} vs {self.field!r}")
        if self.is_identity() or value.num.degree() <= 0 and value.den.degree() == 0:
            return value
        field = self.field
        if field._integral:
            a, b, c, d = self._integer_matrix()
        else:
            a, b, c, d = self.matrix()
        poly = field._poly
        num, den = value.num, value.den
        # homogenize: p(x) -> sum p_i (a x + b)^i (c x + d)^(n-i)
        n = max(num.degree(), den.degree())
        if not a and not d:
            # x -> b/(c x): reversed coefficient lists
            def subst(p):
                coeffs = list(p.coeffs()) + [0] * (n + 1 - len(p.coeffs()))
                if b == c:
                    return poly(coeffs[::-1])
                return poly([coeffs[n - i] * b ** (n - i) * c**i for i in range(n + 1)])
        elif not c:
            # affine: d^n p((a x + b)/d) by one native composition
            lin_top = poly([b, a])

            def subst(p):
                if d == 1:
                    return p(lin_top)
                coeffs = p.coeffs()
                return poly([coeffs[i] * d ** (n - i) for i in range(len(coeffs))])(lin_top)
        else:
            lin_top, lin_bot = poly([b, a]), poly([d, c])
            tops, bots = [poly([1])], [poly([1])]
            for _ in range(n):
                tops.append(tops[-1] * lin_top)
                bots.append(bots[-1] * lin_bot)

            def subst(p):
                acc = poly([])
                for i, coeff in enumerate(p.coeffs()):
                    if coeff:
                        acc += tops[i] * bots[n - i] * coeff
                return acc

        return RationalFunction(field, subst(num), subst(den))

    def __eq__(self, other):
        return isinstance(other, Moebius) and self.field == other.field and self.matrix() == other.matrix()

    def __hash__(self):
        return hash((self.field, tuple(hash(v) for v in self.matrix())))

    def __str__(self):
        if self.is_identity():
            return "id"
        if self == Moebius.inversion(self.field):
            return "inv"
        if self == Moebius.shift(self.field):
            return "shift"
        fmt = self.field.base.format
        return "mobius({})".format(",".join(fmt(v) if self.field.characteristic else str(v) for v in self.matrix()))

    __repr__ = __str__


def parse_automorphism(text: str, field: FunctionField) -> Moebius:
    """Read ``id``, ``inv``, ``shift`` or ``mobius(a,b,c,d)``."""
    text = text.strip()
    if text == "id":
        return Moebius.identity(field)
    if text == "inv":
        return Moebius.inversion(field)
    if text == "shift":
        return Moebius.shift(field)
    if text.startswith("mobius(") and text.endswith(")"):
        parts = [p.strip() for p in text[len("mobius("):-1].split(",")]
        if len(parts) == 4:
            return Moebius(field, *(field.base(p) for p in parts))
    raise InputError(f"unknown automorphism {text!r}")


def _ring_of(u):
    if isinstance(u, RationalFunction):
        return u.field
    if isinstance(u, nmod):
        return PrimeField(u.modulus())
    if isinstance(u, (fmpq, int, fmpz)):
        return QQ
    raise RingMismatch(f"{u!r} is not a scalar")


def field_arith(op: str, u, v):
    """Exact ``u op v`` for two scalars of the same field."""
    ru, rv = _ring_of(u), _ring_of(v)
    if ru != rv:
        raise RingMismatch(f"{ru!r} vs {rv!r}")
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "mul":
        return u * v
    if op == "div":
        if not v:
            raise DivisionByZero("division by zero")
        return u / v
    raise InputError(f"unknown operation {op!r}")


def apply_automorphism(sigma: Moebius, f: RationalFunction) -> RationalFunction:
    return sigma(f)


def compose_automorphisms(sigma: Moebius, rho: Moebius) -> Moebius:
    return sigma.compose(rho)


def invert_automorphism(sigma: Moebius) -> Moebius:
    return sigma.inverse()
