"""Truncated Malcev-Neumann series over (Z^n, lex).

A series over Z^n with the lexicographic order is a Laurent series in
``g1`` whose coefficients are series over Z^(n-1) in ``g2, ..., gn``; the
innermost level is a truncated Laurent series with flint polynomial
coefficients.  Every level carries an absolute precision: coefficients at
exponents below it are exact and nothing is claimed above it.  The set of
determined exponents is therefore a staircase, not a single lex bound; a
single bound cannot work under lex on Z^2, since infinitely many group
elements lie below any given one.

The frontier parameter ``(f1, ..., fn)`` is the relative precision used at
each level when an exact series has to be inverted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import FrontierTooTight, GroupMismatch, InputError, ZeroSeries
from .linalg import Matrix
from .scalars import QQ

__all__ = [
    "OrderedGroupZn",
    "MNSeries",
    "mn_mul",
    "mn_invert",
    "mn_rank",
    "mn_rank_with_retries",
    "MNRankResult",
    "DEFAULT_FRONTIER",
]

INF = math.inf
DEFAULT_FRONTIER = (8, 8)


class OrderedGroupZn:
    """Z^n with generators ``g1 .. gn`` and the lexicographic order (g1 most significant)."""

    def __init__(self, n: int = 2):
        if not 1 <= n <= 4:
            raise InputError("rank must be between 1 and 4")
        self.n = n
        self.names = tuple(f"g{i + 1}" for i in range(n))

    def less(self, a: tuple, b: tuple) -> bool:
        return tuple(a) < tuple(b)

    def format_monomial(self, exps: tuple) -> str:
        parts = []
        for name, e in zip(self.names, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __eq__(self, other):
        return isinstance(other, OrderedGroupZn) and other.n == self.n

    def __hash__(self):
        return hash(("Zn-lex", self.n))

    def __repr__(self):
        return f"Z^{self.n}(lex)"


# --- nested series nodes ---------------------------------------------------
#
# depth 1: _Leaf(val, poly, prec), coefficient of g^(val+i) is poly[i]
# depth d: _Node(val, children, prec), children[i] is the depth d-1
#          coefficient of g^(val+i); positions past the list are exact zeros
# Below ``val`` everything is exactly zero; at or above ``prec`` nothing is known.


def _lowest_nonzero(coeffs) -> int:
    for i, c in enumerate(coeffs):
        if c:
            return i
    return -1


class _Leaf:
    __slots__ = ("base", "val", "poly", "prec")
    depth = 1

    def __init__(self, base, val: int, poly, prec):
        if prec != INF:
            room = prec - val
            if room <= 0:
                poly = base.poly([])
            elif poly.degree() >= room:
                poly = poly.truncate(room)
        coeffs = poly.coeffs()
        k = _lowest_nonzero(coeffs)
        if k < 0:
            poly = base.poly([])
            val = prec if prec != INF else 0
        elif k:
            poly = base.poly(coeffs[k:])
            val += k
        self.base, self.val, self.poly, self.prec = base, val, poly, prec

    def is_exact_zero(self) -> bool:
        return self.prec == INF and self.poly.degree() < 0

    def provably_nonzero(self) -> bool:
        return self.poly.degree() >= 0

    def lead_known(self) -> bool:
        return self.poly.degree() >= 0

    def valuation(self) -> tuple:
        return (self.val,)

    def get(self, idx: tuple):
        b = idx[0]
        if b < self.val:
            return True, self.base.zero
        if b >= self.prec:
            return False, None
        i = b - self.val
        return True, (self.poly[i] if i <= self.poly.degree() else self.base.zero)

    def terms(self):
        for i, c in enumerate(self.poly.coeffs()):
            if c:
                yield (self.val + i,), c

    def holes(self):
        """Exponent prefixes where the unknown part starts."""
        if self.prec != INF:
            yield (self.prec,)


class _Node:
    __slots__ = ("base", "depth", "val", "children", "prec")

    def __init__(self, base, depth: int, val: int, children: list, prec):
        if prec != INF:
            children = children[: max(prec - val, 0)]
        start = 0
        while start < len(children) and children[start].is_exact_zero():
            start += 1
        end = len(children)
        while end > start and children[end - 1].is_exact_zero():
            end -= 1
        children = children[start:end]
        if children:
            val += start
        else:
            val = prec if prec != INF else 0
        self.base, self.depth, self.val, self.children, self.prec = base, depth, val, children, prec

    def is_exact_zero(self) -> bool:
        return self.prec == INF and not self.children

    def provably_nonzero(self) -> bool:
        return any(c.provably_nonzero() for c in self.children)

    def lead_known(self) -> bool:
        return bool(self.children) and self.children[0].lead_known()

    def valuation(self) -> tuple:
        return (self.val,) + self.children[0].valuation()

    def child(self, a: int):
        i = a - self.val
        if 0 <= i < len(self.children):
            return self.children[i]
        return _zero(self.base, self.depth - 1)

    def get(self, idx: tuple):
        a = idx[0]
        if a < self.val:
            return True, self.base.zero
        if a >= self.prec:
            return False, None
        return self.child(a).get(idx[1:])

    def terms(self):
        for i, c in enumerate(self.children):
            for rest, coeff in c.terms():
                yield (self.val + i,) + rest, coeff

    def holes(self):
        for i, c in enumerate(self.children):
            for rest in c.holes():
                yield (self.val + i,) + rest
        if self.prec != INF:
            yield (self.prec,)


def _zero(base, depth: int):
    if depth == 1:
        return _Leaf(base, 0, base.poly([]), INF)
    return _Node(base, depth, 0, [], INF)


def _shift_poly(base, poly, k: int):
    if not k or poly.degree() < 0:
        return poly
    return base.poly([0] * k + list(poly.coeffs()))


def _add(u, v):
    if u.is_exact_zero():
        return v
    if v.is_exact_zero():
        return u
    prec = min(u.prec, v.prec)
    lo = min(u.val, v.val)
    if u.depth == 1:
        base = u.base
        poly = _shift_poly(base, u.poly, u.val - lo) + _shift_poly(base, v.poly, v.val - lo)
        return _Leaf(base, lo, poly, prec)
    hi = max(u.val + len(u.children), v.val + len(v.children))
    if prec != INF:
        hi = min(hi, prec)
    children = [_add(u.child(k), v.child(k)) for k in range(lo, hi)]
    return _Node(u.base, u.depth, lo, children, prec)


def _neg(u):
    if u.depth == 1:
        return _Leaf(u.base, u.val, -u.poly, u.prec)
    return _Node(u.base, u.depth, u.val, [_neg(c) for c in u.children], u.prec)


def _mul(u, v):
    if u.is_exact_zero() or v.is_exact_zero():
        return _zero(u.base, u.depth)
    val = u.val + v.val
    rel = min(u.prec - u.val, v.prec - v.val)
    if u.depth == 1:
        poly = u.poly * v.poly
        if rel != INF and poly.degree() >= rel:
            poly = poly.truncate(int(rel))
        return _Leaf(u.base, val, poly, val + rel)
    length = len(u.children) + len(v.children) - 1
    if rel != INF:
        length = min(length, int(rel))
    children = []
    for k in range(max(length, 0)):
        acc = None
        for i in range(max(0, k - len(v.children) + 1), min(k, len(u.children) - 1) + 1):
            term = _mul(u.children[i], v.children[k - i])
            acc = term if acc is None else _add(acc, term)
        children.append(acc if acc is not None else _zero(u.base, u.depth - 1))
    return _Node(u.base, u.depth, val, children, val + rel)


def _leaf_inverse(u: _Leaf, rel_default: int) -> _Leaf:
    base = u.base
    rel = int(min(u.prec - u.val, rel_default))
    c0 = u.poly[0]
    w = base.poly([base.one / c0])
    k = 1
    while k < rel:
        k = min(2 * k, rel)
        # Newton step for 1/p: w <- w (2 - p w)
        pw = (u.poly.truncate(k) * w).truncate(k)
        w = (w * (base.poly([2]) - pw)).truncate(k)
    return _Leaf(base, -u.val, w, -u.val + rel)


def _inverse(u, rels: tuple):
    if u.is_exact_zero():
        raise ZeroSeries("inverse of the zero series")
    if not u.lead_known():
        raise FrontierTooTight("leading coefficient is not determined below the frontier")
    if u.depth == 1:
        if u.prec == INF and u.poly.degree() == 0:
            return _Leaf(u.base, -u.val, u.base.poly([u.base.one / u.poly[0]]), INF)
        return _leaf_inverse(u, rels[0])
    if u.prec == INF and len(u.children) == 1:
        inner = _inverse(u.children[0], rels[1:])
        return _Node(u.base, u.depth, -u.val, [inner], INF)
    rel = int(min(u.prec - u.val, rels[0]))
    # Outer coefficient k of the inverse picks up k times the drop in inner
    # valuation between the lead and the tail; pay for it up front so every
    # outer coefficient keeps about rels[1] correct inner terms.
    lead = u.children[0]
    drop = max((lead.val - c.val for c in u.children[1:]), default=0)
    inner = (rels[1] + max(drop, 0) * (rel - 1),) + tuple(rels[2:])
    lead_inv = _inverse(lead, inner)
    w = [lead_inv]
    for k in range(1, rel):
        acc = None
        for i in range(1, min(k, len(u.children) - 1) + 1):
            term = _mul(u.children[i], w[k - i])
            acc = term if acc is None else _add(acc, term)
        w.append(_neg(_mul(lead_inv, acc)) if acc is not None else _zero(u.base, u.depth - 1))
    return _Node(u.base, u.depth, -u.val, w, -u.val + rel)


def _hole(base, depth: int, prefix: tuple):
    if len(prefix) == 1:
        if depth == 1:
            return _Leaf(base, prefix[0], base.poly([]), prefix[0])
        return _Node(base, depth, prefix[0], [], prefix[0])
    return _Node(base, depth, prefix[0], [_hole(base, depth - 1, prefix[1:])], INF)


def _from_terms(base, depth: int, terms: dict):
    """Exact node from ``{exponent tuple: coeff}``."""
    if depth == 1:
        if not terms:
            return _zero(base, 1)
        lo = min(e[0] for e in terms)
        hi = max(e[0] for e in terms)
        coeffs = [base.zero] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e[0] - lo] += c
        return _Leaf(base, lo, base.poly(coeffs), INF)
    groups: dict[int, dict] = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    if not groups:
        return _zero(base, depth)
    lo, hi = min(groups), max(groups)
    children = [_from_terms(base, depth - 1, groups.get(a, {})) for a in range(lo, hi + 1)]
    return _Node(base, depth, lo, children, INF)


# --- public series type ----------------------------------------------------


class MNSeries:
    """A truncated series over ``(Z^n, lex)`` with coefficients in Q or GF(p)."""

    __slots__ = ("group", "base", "node", "frontier")

    def __init__(self, group: OrderedGroupZn, node, base=QQ, frontier: tuple = DEFAULT_FRONTIER):
        self.group = group
        self.base = base
        self.node = node
        self.frontier = _frontier_for(group, frontier)

    @classmethod
    def from_terms(cls, group: OrderedGroupZn, terms: dict, base=QQ, frontier: tuple = DEFAULT_FRONTIER) -> MNSeries:
        conv = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != group.n:
                raise GroupMismatch(f"exponent {e} is not in Z^{group.n}")
            c = base(c)
            if c:
                conv[e] = conv.get(e, base.zero) + c
        conv = {e: c for e, c in conv.items() if c}
        return cls(group, _from_terms(base, group.n, conv), base, frontier)

    @classmethod
    def scalar(cls, group, c, base=QQ, frontier=DEFAULT_FRONTIER) -> MNSeries:
        return cls.from_terms(group, {(0,) * group.n: c}, base, frontier)

    @classmethod
    def monomial(cls, group, exps: tuple, c=1, base=QQ, frontier=DEFAULT_FRONTIER) -> MNSeries:
        return cls.from_terms(group, {tuple(exps): c}, base, frontier)

    @classmethod
    def big_o(cls, group, prefix: tuple, base=QQ, frontier=DEFAULT_FRONTIER) -> MNSeries:
        """The zero series with nothing known from ``prefix`` on.

        A prefix ``(a,)`` hides every term ``g1^a'`` with ``a' >= a``;
        ``(a, b)`` hides the terms ``g1^a * g2^b'`` with ``b' >= b``, and so on.
        """
        prefix = tuple(int(e) for e in prefix)
        if not 1 <= len(prefix) <= group.n:
            raise GroupMismatch(f"O() needs between 1 and {group.n} exponents")
        return cls(group, _hole(base, group.n, prefix), base, frontier)

    def _wrap(self, node) -> MNSeries:
        return MNSeries(self.group, node, self.base, self.frontier)

    def _coerce(self, other) -> MNSeries:
        if isinstance(other, MNSeries):
            if other.group != self.group or other.base != self.base:
                raise GroupMismatch(f"{other.group!r} over {other.base!r} vs {self.group!r} over {self.base!r}")
            return other
        return MNSeries.scalar(self.group, other, self.base, self.frontier)

    # --- queries ----------------------------------------------------------

    def is_exact(self) -> bool:
        return not any(True for _ in self.node.holes())

    def is_exact_zero(self) -> bool:
        return self.node.is_exact_zero()

    def provably_nonzero(self) -> bool:
        return self.node.provably_nonzero()

    def __bool__(self):
        return not self.is_exact_zero()

    def coefficient(self, exps: tuple):
        """``(known, value)`` for the coefficient of ``g^exps``."""
        return self.node.get(tuple(exps))

    def terms(self) -> list[tuple[tuple, object]]:
        """Determined nonzero terms in increasing lex order."""
        return sorted(self.node.terms())

    def holes(self) -> list[tuple]:
        """Where the undetermined part starts, as exponent prefixes."""
        return sorted(self.node.holes())

    def valuation(self) -> tuple:
        """Exponent of the lex-least term; needs it to be determined."""
        if self.is_exact_zero():
            raise ZeroSeries("the zero series has no valuation")
        if not self.node.lead_known():
            raise FrontierTooTight("leading term is not determined below the frontier")
        return self.node.valuation()

    def support_min(self) -> tuple:
        return self.valuation()

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return self._wrap(_add(self.node, self._coerce(other).node))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(_neg(self.node))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        return self._wrap(_mul(self.node, self._coerce(other).node))

    __rmul__ = __mul__

    def inverse(self, frontier: tuple | None = None) -> MNSeries:
        rels = _frontier_for(self.group, frontier or self.frontier)
        return MNSeries(self.group, _inverse(self.node, rels), self.base, rels)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = MNSeries.scalar(self.group, 1, self.base, self.frontier)
        for _ in range(k):
            result = result * self
        return result

    def agrees_with(self, other: MNSeries) -> bool:
        """True when every coefficient determined in both series is equal."""
        other = self._coerce(other)
        keys = {e for e, _ in self.node.terms()} | {e for e, _ in other.node.terms()}
        for e in keys:
            ka, va = self.coefficient(e)
            kb, vb = other.coefficient(e)
            if ka and kb and va != vb:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, MNSeries):
            return NotImplemented
        return self.group == other.group and self.terms() == other.terms() and self.holes() == other.holes()

    def __hash__(self):
        return hash((self.group, tuple(self.terms()), tuple(self.holes())))

    def __str__(self):
        parts = []
        fmt = self.base.format
        for exps, c in self.terms():
            mono = self.group.format_monomial(exps)
            neg = self.base.characteristic == 0 and c < 0
            cs = fmt(-c if neg else c)
            body = mono if mono and cs == "1" else (f"{cs}*{mono}" if mono else cs)
            parts.append((" - " if parts else "-") + body if neg else (" + " if parts else "") + body)
        for hole in self.holes():
            # every coordinate of the prefix is written, zeros included
            mono = "*".join(f"{name}^{e}" for name, e in zip(self.group.names, hole))
            parts.append((" + " if parts else "") + f"O({mono})")
        return "".join(parts) or "0"

    def __repr__(self):
        return f"MNSeries({self})"

    def to_json(self) -> dict:
        return {"series": str(self), "exact": self.is_exact()}


def _frontier_for(group: OrderedGroupZn, frontier) -> tuple:
    frontier = tuple(int(f) for f in frontier)
    if any(f < 1 for f in frontier):
        raise InputError("frontier entries must be positive")
    if len(frontier) < group.n:
        frontier = frontier + (frontier[-1],) * (group.n - len(frontier))
    return frontier[: group.n]


def mn_mul(u: MNSeries, v: MNSeries) -> MNSeries:
    return u * v


def mn_invert(u: MNSeries, frontier: tuple | None = None) -> MNSeries:
    return u.inverse(frontier)


# --- rank ------------------------------------------------------------------


@dataclass(frozen=True)
class MNRankResult:
    rank: int
    frontier: tuple
    attempts: int

    def to_json(self) -> dict:
        return {"rank": self.rank, "frontier": list(self.frontier), "attempts": self.attempts}


def _entry_terms(e, n: int) -> dict:
    """Exponent dict of a group-ring entry (commutative tower element or MNSeries)."""
    if isinstance(e, MNSeries):
        if not e.is_exact():
            raise InputError("mn_rank needs exact (polynomial) entries")
        return dict(e.terms())
    terms = getattr(e, "terms", None)
    tower = getattr(e, "tower", None)
    if isinstance(terms, dict) and tower is not None:
        if not tower.commutative:
            raise GroupMismatch("Malcev-Neumann series here cover abelian groups only")
        if n != 2:
            raise GroupMismatch("tower elements live in Z^2")
        return dict(terms)
    raise InputError(f"cannot read {e!r} as a group ring element")


def _box_sum(boxes: list):
    """Coordinatewise sum of row bounding boxes; None if some row is zero."""
    if any(b is None for b in boxes):
        return None
    n = len(boxes[0])
    return tuple((sum(b[i][0] for b in boxes), sum(b[i][1] for b in boxes)) for i in range(n))


def _exact_quotient(num: MNSeries, den: MNSeries, box, rels: tuple) -> MNSeries:
    """The polynomial ``num / den``, known to be supported in ``box``.

    The quotient is computed as a truncated series; once every exponent of
    the box is determined, the terms inside the box are the whole answer.
    """
    if num.is_exact_zero():
        return num
    if box is None:
        raise AssertionError("nonzero minor with a zero row")
    q = num * den.inverse(rels)
    terms = {}
    for exps in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        known, value = q.coefficient(exps)
        if not known:
            raise FrontierTooTight(f"quotient not determined at {exps} with frontier {rels}")
        if value:
            terms[exps] = value
    for exps, _ in q.terms():
        if not all(lo <= e <= hi for e, (lo, hi) in zip(exps, box)):
            raise AssertionError(f"quotient has a term outside its support box at {exps}")
    return MNSeries(num.group, _from_terms(num.base, num.group.n, terms), num.base, rels)


def mn_rank(A: Matrix, frontier: tuple = DEFAULT_FRONTIER, group: OrderedGroupZn | None = None, base=None) -> int:
    """Rank of a matrix over K[Z^n], computed in the Malcev-Neumann series field.

    Fraction-free (Bareiss) elimination keeps every entry equal to a minor
    of ``A``, so its support lies in the sum of the bounding boxes of the
    rows involved.  The exact division by the previous pivot is done with a
    truncated series inverse; the quotient is read off once the frontier
    covers that box, and FrontierTooTight is raised when it does not.
    Zero tests are therefore exact.
    """
    group = group or OrderedGroupZn(2)
    n = group.n
    if base is None:
        tower = getattr(A.ring, "base", None)
        base = tower if tower is not None and hasattr(tower, "poly") else QQ
    rels = _frontier_for(group, frontier)
    term_rows = [[_entry_terms(e, n) for e in row] for row in A.rows]
    boxes = []
    for row in term_rows:
        exps = [e for entry in row for e in entry]
        if exps:
            boxes.append(tuple((min(e[i] for e in exps), max(e[i] for e in exps)) for i in range(n)))
        else:
            boxes.append(None)
    M = [[MNSeries.from_terms(group, t, base, rels) for t in row] for row in term_rows]
    rows = list(range(A.m))  # original index of each working row
    prev = MNSeries.scalar(group, 1, base, rels)
    used: list[int] = []
    r = 0
    for c in range(A.n):
        if r == A.m:
            break
        pivot = next((i for i in range(r, A.m) if not M[i][c].is_exact_zero()), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = M[r][c]
        used.append(rows[r])
        for i in range(r + 1, A.m):
            box = _box_sum([boxes[k] for k in used + [rows[i]]])
            x = M[i][c]
            new = list(M[i])
            for j in range(c + 1, A.n):
                num = p * M[i][j] - x * M[r][j]
                new[j] = num if r == 0 else _exact_quotient(num, prev, box, rels)
            new[c] = MNSeries.from_terms(group, {}, base, rels)
            M[i] = new
        prev = p
        r += 1
    return r


def mn_rank_with_retries(
    A: Matrix, frontier: tuple = DEFAULT_FRONTIER, retries: int = 3, group: OrderedGroupZn | None = None
) -> MNRankResult:
    """:func:`mn_rank`, doubling the frontier after each FrontierTooTight."""
    front = tuple(frontier)
    for attempt in range(retries + 1):
        try:
            return MNRankResult(mn_rank(A, front, group), front, attempt + 1)
        except FrontierTooTight:
            if attempt == retries:
                raise
            front = tuple(2 * f for f in front)
    raise AssertionError("unreachable")
