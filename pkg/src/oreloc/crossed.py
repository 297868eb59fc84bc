"""Group rings K[Z^2] and K[Z x| Z] as towers K[x^+-1][t^+-1; tau].

The tower embeds into the Ore field of k(x)[t^+-1; tau~], where tau~ is
the Moebius extension of tau to k(x).  For these groups the group ring is
a pseudo-Sylvester domain whose universal division ring of fractions is
that Ore field, so a square matrix is stably full exactly when its image
is invertible there.  That equivalence is taken as known; this
module computes the rank and checks the inverse, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, RingMismatch, UnsupportedAutomorphism
from .linalg import Matrix, check_inverse, invert_matrix, rank_over_skewfield
from .orefield import OreField, OreFraction
from .scalars import QQ, FunctionField, Moebius, PrimeField
from .skewpoly import DEFAULT_DEGREE_CAP, SkewLaurentRing

__all__ = [
    "Tower",
    "GroupRingElement",
    "Certificate",
    "extend_automorphism",
    "embed_in_ore",
    "certify_stably_full",
    "dim_over_D",
    "parse_tower",
]

_TAU_SIGN = {"id": 1, "inv": -1}


def extend_automorphism(tau: str, field: FunctionField) -> Moebius:
    """Extend ``x -> x`` (``"id"``) or ``x -> x^-1`` (``"inv"``) from K[x^+-1] to k(x)."""
    if tau == "id":
        return Moebius.identity(field)
    if tau == "inv":
        return Moebius.inversion(field)
    raise UnsupportedAutomorphism(f"only x->x and x->1/x come from automorphisms of Z; got {tau!r}")


class Tower:
    """The crossed product K[x^+-1][t^+-1; tau] with ``tau`` in {id, inv}.

    Presets: ``z2`` is K[Z^2], ``klein`` is K[Z x| Z] (fundamental group of
    the Klein bottle).
    """

    def __init__(self, base=QQ, tau: str = "id", name: str | None = None, degree_cap: int = DEFAULT_DEGREE_CAP):
        if tau not in _TAU_SIGN:
            raise UnsupportedAutomorphism(f"unsupported tower automorphism {tau!r}")
        self.base = base
        self.tau = tau
        self.sign = _TAU_SIGN[tau]
        self.name = name or f"base={base.name};tau={tau}"
        self.function_field = FunctionField(base, "x")
        self.tau_ext = extend_automorphism(tau, self.function_field)
        self.skew_ring = SkewLaurentRing(self.function_field, self.tau_ext, degree_cap=degree_cap)
        self.ore = OreField(self.skew_ring)
        self.zero = GroupRingElement(self, {})
        self.one = GroupRingElement(self, {(0, 0): base.one})
        self.x = GroupRingElement(self, {(1, 0): base.one})
        self.t = GroupRingElement(self, {(0, 1): base.one})

    @property
    def commutative(self) -> bool:
        return self.tau == "id"

    def element(self, terms: dict) -> GroupRingElement:
        """``sum c * x^a * t^b`` from ``{(a, b): c}``."""
        conv = {}
        for key, c in terms.items():
            c = self.base(c)
            if c:
                conv[(int(key[0]), int(key[1]))] = c
        return GroupRingElement(self, conv)

    def monomial(self, a: int, b: int, c=1) -> GroupRingElement:
        return self.element({(a, b): c})

    def __call__(self, value) -> GroupRingElement:
        if isinstance(value, GroupRingElement):
            if value.tower != self:
                raise RingMismatch(f"{value.tower!r} vs {self!r}")
            return value
        return self.element({(0, 0): value})

    def embed(self, e: GroupRingElement) -> OreFraction:
        return embed_in_ore(e, self)

    def __eq__(self, other):
        return isinstance(other, Tower) and (self.base, self.tau) == (other.base, other.tau)

    def __hash__(self):
        return hash(("tower", self.base, self.tau))

    def __repr__(self):
        return f"Tower({self.name})"


class GroupRingElement:
    """Finitely supported ``sum c_(a,b) x^a t^b`` with ``t x = tau(x) t``."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower: Tower, terms: dict):
        self.tower = tower
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.terms)

    def _coerce(self, other) -> GroupRingElement:
        if isinstance(other, GroupRingElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise RingMismatch(f"{other.tower!r} vs {self.tower!r}")
            return other
        return self.tower(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return GroupRingElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.tower, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        sign = self.tower.sign
        out: dict = {}
        for (a, b), c in self.terms.items():
            eps = 1 if sign == 1 or b % 2 == 0 else -1
            for (a2, b2), c2 in other.terms.items():
                key = (a + eps * a2, b + b2)
                v = out.get(key, 0) + c * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return GroupRingElement(self.tower, out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def unit_inverse(self) -> GroupRingElement:
        """Inverse of ``c x^a t^b``: ``c^-1 t^-b x^-a``."""
        if len(self.terms) != 1:
            raise InputError(f"{self} is not a unit of the group ring")
        (a, b), c = next(iter(self.terms.items()))
        tower = self.tower
        t_inv = GroupRingElement(tower, {(0, -b): tower.base.one / c})
        return t_inv * GroupRingElement(tower, {(-a, 0): tower.base.one})

    def __truediv__(self, other):
        return self * self._coerce(other).unit_inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.unit_inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = self.tower.one
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.tower == other.tower and self.terms == other.terms
        try:
            return self == self.tower(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        fmt = self.tower.base.format
        parts = []
        for (a, b) in sorted(self.terms, key=lambda k: (-k[1], -k[0])):
            c = self.terms[(a, b)]
            neg = self.tower.base.characteristic == 0 and c < 0
            cs = fmt(-c if neg else c)
            factors = []
            if a:
                factors.append("x" if a == 1 else f"x^{a}")
            if b:
                factors.append("t" if b == 1 else f"t^{b}")
            if cs != "1" or not factors:
                factors.insert(0, cs)
            body = "*".join(factors)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"GroupRingElement({self})"


def embed_in_ore(e: GroupRingElement, tower: Tower) -> OreFraction:
    """``sum c x^a t^b`` read in k(x)[t^+-1; tau~] and then in its Ore field."""
    if e.tower != tower:
        raise RingMismatch(f"{e.tower!r} vs {tower!r}")
    by_t: dict[int, object] = {}
    field = tower.function_field
    for (a, b), c in e.terms.items():
        by_t[b] = by_t.get(b, field.zero) + field.monomial(a, c)
    return tower.ore(tower.skew_ring.from_dict(by_t))


@dataclass(frozen=True)
class Certificate:
    verdict: str
    rank: int
    n: int
    witness: Matrix | None = None

    @property
    def stably_full(self) -> bool:
        return self.verdict == "StablyFull"

    def to_json(self, with_witness: bool = False) -> dict:
        out: dict = {"verdict": self.verdict, "rank": self.rank}
        if with_witness and self.witness is not None:
            out["witness"] = self.witness.to_list()
        return out


def _embed_matrix(A: Matrix, tower: Tower) -> Matrix:
    if A.ring == tower:
        return A.map(lambda e: embed_in_ore(e, tower), tower.ore)
    if A.ring == tower.ore:
        return A
    raise RingMismatch(f"matrix over {A.ring!r} is not over {tower!r}")


def certify_stably_full(A: Matrix, tower: Tower, with_inverse: bool = True) -> Certificate:
    """Decide stable fullness of a square matrix over the tower's group ring.

    StablyFull comes with the inverse over the Ore field, re-verified by
    multiplication on both sides; NotStablyFull comes with the echelon
    rows of a maximal independent row set.  ``with_inverse=False`` skips
    the inverse; the verdict depends on the rank alone either way.
    """
    if A.m != A.n:
        raise InputError("certification needs a square matrix")
    E = _embed_matrix(A, tower)
    result = rank_over_skewfield(E)
    if result.rank == A.n:
        if not with_inverse:
            return Certificate("StablyFull", result.rank, A.n)
        inv = invert_matrix(E)
        if not check_inverse(E, inv):
            raise AssertionError("inverse failed re-multiplication check")
        return Certificate("StablyFull", result.rank, A.n, inv)
    witness = Matrix(tower.ore, result.echelon.rows[: result.rank], A.n) if result.rank else None
    return Certificate("NotStablyFull", result.rank, A.n, witness)


def dim_over_D(A: Matrix, tower: Tower) -> int:
    """``n - rk_D(A)``: the dimension of ``D (x) R^n / R^n A``."""
    return A.n - rank_over_skewfield(_embed_matrix(A, tower)).rank


def parse_tower(text: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> Tower:
    """``z2``, ``klein`` or ``base=Q;tau=inv`` / ``base=F5;tau=id``."""
    text = text.strip()
    if text == "z2":
        return Tower(QQ, "id", "z2", degree_cap)
    if text == "klein":
        return Tower(QQ, "inv", "klein", degree_cap)
    fields = dict(part.split("=", 1) for part in text.split(";") if "=" in part)
    if not fields or set(fields) - {"base", "tau"}:
        raise InputError(f"unknown tower descriptor {text!r}")
    base_name = fields.get("base", "Q")
    if base_name == "Q":
        base = QQ
    elif base_name.startswith("F") and base_name[1:].isdigit():
        base = PrimeField(int(base_name[1:]))
    else:
        raise InputError(f"unknown base field {base_name!r}")
    return Tower(base, fields.get("tau", "id"), text, degree_cap)
