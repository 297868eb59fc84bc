"""Dense matrices and Gaussian elimination over division rings.

Elimination uses left row operations only, so row spaces are left
subspaces and kernels are right kernels.  Any parent exposing ``zero``,
``one`` and elements with ``+ - *``, ``inverse()`` and truthiness works;
the intended use is over :class:`~oreloc.orefield.OreField`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import InputError, RingMismatch, SingularMatrix
from .orefield import OreField, left_common_form, left_fraction, right_common_form
from .skewpoly import content_factor, gcrd, left_lcm, right_divide, right_lcm

__all__ = [
    "Matrix",
    "RankResult",
    "rank_over_skewfield",
    "invert_matrix",
    "kernel_basis",
    "diag_sum",
    "row_echelon",
    "check_inverse",
]


class Matrix:
    """Immutable ``m x n`` matrix over ``ring``.

    ``ring`` supplies ``zero``/``one`` and, optionally, ``add``/``mul`` for
    element types without arithmetic operators (finite rings store ints).
    """

    __slots__ = ("ring", "rows", "m", "n")

    def __init__(self, ring, rows: Sequence[Sequence[Any]], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise InputError("empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise InputError("ragged matrix rows")
        self.ring = ring
        self.rows = rows
        self.m = len(rows)
        self.n = ncols

    @classmethod
    def identity(cls, ring, n: int) -> Matrix:
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, ring, m: int, n: int) -> Matrix:
        return cls(ring, [[ring.zero] * n for _ in range(m)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.n)]

    def transpose(self) -> Matrix:
        return Matrix(self.ring, self.columns(), self.m)

    def map(self, fn: Callable, ring=None) -> Matrix:
        return Matrix(ring if ring is not None else self.ring, [[fn(a) for a in r] for r in self.rows], self.n)

    def _ops(self):
        ring = self.ring
        add = getattr(ring, "add", None) or (lambda a, b: a + b)
        mul = getattr(ring, "mul", None) or (lambda a, b: a * b)
        return add, mul

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.n != other.m:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        add, mul = self._ops()
        zero = self.ring.zero
        cols = other.columns()
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = add(acc, mul(a, b))
                new_row.append(acc)
            out.append(new_row)
        return Matrix(self.ring, out, other.n)

    __mul__ = __matmul__

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise InputError("shape mismatch in matrix sum")
        add, _ = self._ops()
        return Matrix(self.ring, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n)

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.m, self.n, self.rows))

    def to_text(self) -> str:
        return "[" + ",".join("[" + ",".join(str(a) for a in r) + "]" for r in self.rows) + "]"

    def to_list(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.m}x{self.n}, {self.to_text()})"


@dataclass(frozen=True)
class RankResult:
    rank: int
    pivots: tuple[int, ...]
    echelon: Matrix | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"rank": self.rank, "pivots": list(self.pivots)}


def _weight(a) -> int:
    deg = getattr(a, "degree", None)
    return deg() if callable(deg) else 0


def row_echelon(A: Matrix, *, reduced: bool = False, augment: Matrix | None = None):
    """Row-reduce ``A`` (optionally ``[A | augment]``) by left row operations.

    Pivot: the candidate of least :meth:`degree` in the column, ties to
    the lowest row.  Returns ``(rows, pivots, aug_rows)``.
    """
    rows = [list(r) for r in A.rows]
    aug = [list(r) for r in augment.rows] if augment is not None else None
    m, n = A.m, A.n
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        candidates = [(_weight(rows[i][c]), i) for i in range(r, m) if rows[i][c]]
        if not candidates:
            continue
        _, p = min(candidates)
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if aug is not None:
                aug[p], aug[r] = aug[r], aug[p]
        pinv = rows[r][c].inverse()
        if reduced:
            rows[r] = [pinv * a if a else a for a in rows[r]]
            if aug is not None:
                aug[r] = [pinv * a if a else a for a in aug[r]]
            targets = [i for i in range(m) if i != r]
        else:
            targets = range(r + 1, m)
        for i in targets:
            e = rows[i][c]
            if not e:
                continue
            factor = e if reduced else e * pinv
            rows[i] = [a - factor * b if b else a for a, b in zip(rows[i], rows[r])]
            rows[i][c] = A.ring.zero
            if aug is not None:
                aug[i] = [a - factor * b if b else a for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    return rows, pivots, aug


def _entry_weight(p) -> tuple[int, int]:
    size = 0
    for c in p.coeffs:
        deg = getattr(c, "degree", None)
        if callable(deg):
            size += deg()
    return p.hi - p.lo, size


def _left_multipliers(e, p):
    """``(u, v)`` with ``u*e == v*p`` and ``u != 0``, both Laurent polynomials."""
    L = e.ring
    one = L.field.one
    if p.is_monomial():
        return L.one, e * p.unit_inverse()
    if e.is_monomial():
        return p * e.unit_inverse(), L.one
    # e = t^a E and p = t^b P with E, P polynomials
    ta, tb = L.monomial(one, -e.lo), L.monomial(one, -p.lo)
    a, b, _ = left_lcm(ta * e, tb * p)
    return a * ta, b * tb


def _right_multipliers(e, p):
    """``(u, v)`` with ``e*u == p*v`` and ``u != 0``."""
    L = e.ring
    one = L.field.one
    if p.is_monomial():
        return L.one, p.unit_inverse() * e
    if e.is_monomial():
        return e.unit_inverse() * p, L.one
    # e = E t^a and p = P t^b with E, P polynomials
    a, b, _ = right_lcm(e.shift(-e.lo), p.shift(-p.lo))
    u, v = L.monomial(one, -e.lo) * a, L.monomial(one, -p.lo) * b
    lam = content_factor([u, v], "right")
    return u.scale_right(lam), v.scale_right(lam)


def _integral_rows(A: Matrix):
    """Rows of an Ore-field matrix as ``q_i^-1 * N_i`` with ``N_i`` integral."""
    qs, rows = [], []
    for r in A.rows:
        if all(a.den.hi == 0 for a in r):
            qs.append(A.ring.ring.one)
            rows.append([a.num for a in r])
        else:
            q, nums = left_common_form(r)
            qs.append(q)
            rows.append(list(nums))
    return qs, rows


def _fraction_free(rows: list, ncols: int, aug: list | None, jordan: bool):
    """Eliminate over the Laurent ring itself with ``row_i <- u*row_i - v*row_r``.

    No fraction is ever formed; each step costs one left lcm.
    """
    m = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        candidates = [(_entry_weight(rows[i][c]), i) for i in range(r, m) if rows[i][c]]
        if not candidates:
            continue
        _, p = min(candidates)
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if aug is not None:
                aug[p], aug[r] = aug[r], aug[p]
        piv = rows[r][c]
        zero = piv.ring.zero
        for i in (range(m) if jordan else range(r + 1, m)):
            e = rows[i][c]
            if i == r or not e:
                continue
            u, v = _left_multipliers(e, piv)
            rows[i] = [u * a - v * b if b else (u * a if a else a) for a, b in zip(rows[i], rows[r])]
            rows[i][c] = zero
            if aug is not None:
                aug[i] = [u * a - v * b if b else (u * a if a else a) for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    return rows, pivots, aug


def rank_over_skewfield(A: Matrix) -> RankResult:
    if isinstance(A.ring, OreField):
        _, rows = _integral_rows(A)
        rows, pivots, _ = _fraction_free(rows, A.n, None, jordan=False)
        ore = A.ring
        echelon = Matrix(ore, [[ore(a) for a in r] for r in rows], A.n)
        return RankResult(len(pivots), tuple(pivots), echelon)
    rows, pivots, _ = row_echelon(A)
    return RankResult(len(pivots), tuple(pivots), Matrix(A.ring, rows, A.n))


def invert_matrix(A: Matrix) -> Matrix:
    """Two-sided inverse by Gauss-Jordan on ``[A | I]``.

    Over an Ore field see :func:`_ore_inverse`.
    """
    if A.m != A.n:
        raise InputError("only square matrices can be inverted")
    n = A.n
    if isinstance(A.ring, OreField):
        return _ore_inverse(A)
    _, pivots, aug = row_echelon(A, reduced=True, augment=Matrix.identity(A.ring, n))
    if len(pivots) < n:
        raise SingularMatrix(f"matrix has rank {len(pivots)} < {n}")
    return Matrix(A.ring, aug, n)


def _ore_inverse(A: Matrix) -> Matrix:
    """Inverse over an Ore field by fraction-free column elimination.

    With ``A = N Q^-1`` (columns over common right denominators), column
    operations ``col_j <- col_j*u - col_c*v`` give ``N R = D`` with ``D`` a
    permuted diagonal, so every entry of ``A^-1 = Q R D^-1`` is a right
    fraction from the start and needs only a gcrd to normalize.
    """
    ore, n = A.ring, A.n
    L = ore.ring
    cols, qs = [], []
    for col in A.columns():
        if all(a.den.hi == 0 for a in col):
            nums, q = [a.num for a in col], L.one
        else:
            nums, q = right_common_form(col)
        cols.append(list(nums))
        qs.append(q)
    right = [[L.one if i == j else L.zero for i in range(n)] for j in range(n)]
    done: list[int] = []
    pivot_row: dict[int, int] = {}
    for r in range(n):
        candidates = [(_entry_weight(cols[j][r]), j) for j in range(n) if j not in done and cols[j][r]]
        if not candidates:
            raise SingularMatrix(f"matrix has rank {len(done)} < {n}")
        _, c = min(candidates)
        piv = cols[c][r]
        for j in range(n):
            e = cols[j][r]
            if j == c or not e:
                continue
            u, v = _right_multipliers(e, piv)
            cols[j] = [a * u - b * v if b else (a * u if a else a) for a, b in zip(cols[j], cols[c])]
            cols[j][r] = L.zero
            right[j] = [a * u - b * v if b else (a * u if a else a) for a, b in zip(right[j], right[c])]
            lam = content_factor(cols[j] + right[j], "right")
            if lam != 1:
                cols[j] = [a.scale_right(lam) for a in cols[j]]
                right[j] = [a.scale_right(lam) for a in right[j]]
        done.append(c)
        pivot_row[c] = r
    inv = [[None] * n for _ in range(n)]
    for c, r in pivot_row.items():
        d = _cancel_column_factor(cols[c][r], right[c])
        for i in range(n):
            inv[i][r] = ore.fraction(qs[i] * right[c][i], d) if right[c][i] else ore.zero
    return Matrix(ore, inv, n)


def _cancel_column_factor(d, entries: list):
    """Divide ``d`` and ``entries`` (in place) by a common right factor.

    Column elimination tends to leave one right factor shared by a whole
    column; it is found once from the smallest entry instead of once per entry.
    """
    nonzero = [e for e in entries if e]
    if d.hi == d.lo or not nonzero:
        return d
    e = min(nonzero, key=_entry_weight)
    L = d.ring
    one = L.field.one

    def lshift(x):
        # x = t^lo * (t^-lo x) with the second factor a polynomial
        return L.monomial(one, -x.lo) * x

    g = gcrd(lshift(d), lshift(e))
    if g.hi <= 0:
        return d
    quotients = []
    for x in [d] + entries:
        if not x:
            quotients.append(x)
            continue
        q, rem = right_divide(lshift(x), g)
        if rem:
            return d
        quotients.append(L.monomial(one, x.lo) * q)
    entries[:] = quotients[1:]
    return quotients[0]


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning ``{v : A v = 0}``, each scaled so its last nonzero entry is 1."""
    ring = A.ring
    if isinstance(ring, OreField):
        return _ore_kernel(A)
    rows, pivots, _ = row_echelon(A, reduced=True)
    free = [j for j in range(A.n) if j not in pivots]
    cols = []
    for f in free:
        v = [ring.zero] * A.n
        v[f] = ring.one
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        last = next(a for a in reversed(v) if a)
        if last != 1:
            inv = last.inverse()
            v = [a * inv if a else a for a in v]
        cols.append(v)
    return Matrix(ring, [[cols[k][i] for k in range(len(cols))] for i in range(A.n)], len(cols))


def _ore_kernel(A: Matrix) -> Matrix:
    """Right kernel over an Ore field by fraction-free column elimination.

    With ``A = N Q^-1``, ``A (Q w) = N w``; column operations on ``N``
    tracked in ``R`` leave zero columns exactly where ``R`` spans ker N,
    so the kernel vectors ``Q w`` are integral until the final scaling.
    """
    ore, n = A.ring, A.n
    L = ore.ring
    cols, qs = [], []
    for col in A.columns():
        if all(a.den.hi == 0 for a in col):
            nums, q = [a.num for a in col], L.one
        else:
            nums, q = right_common_form(col)
        cols.append(list(nums))
        qs.append(q)
    right = [[L.one if i == j else L.zero for i in range(n)] for j in range(n)]
    done: set[int] = set()
    for r in range(A.m):
        candidates = [(_entry_weight(cols[j][r]), j) for j in range(n) if j not in done and cols[j][r]]
        if not candidates:
            continue
        _, c = min(candidates)
        piv = cols[c][r]
        for j in range(n):
            e = cols[j][r]
            if j in done or j == c or not e:
                continue
            u, v = _right_multipliers(e, piv)
            cols[j] = [a * u - b * v if b else (a * u if a else a) for a, b in zip(cols[j], cols[c])]
            cols[j][r] = L.zero
            right[j] = [a * u - b * v if b else (a * u if a else a) for a, b in zip(right[j], right[c])]
            lam = content_factor(right[j], "right")
            if lam != 1:
                cols[j] = [a.scale_right(lam) for a in cols[j]]
                right[j] = [a.scale_right(lam) for a in right[j]]
        done.add(c)
    basis = []
    for j in range(n):
        if j in done:
            continue
        w = [qs[i] * right[j][i] for i in range(n)]
        last = next(a for a in reversed(w) if a)
        # v * last^-1 has last nonzero entry 1
        basis.append([ore.fraction(a, last) if a else ore.zero for a in w])
    return Matrix(ore, [[basis[k][i] for k in range(len(basis))] for i in range(n)], len(basis))


def diag_sum(A: Matrix, s: int) -> Matrix:
    """Block diagonal ``A (+) I_s``."""
    if s < 0:
        raise InputError("s must be nonnegative")
    ring = A.ring
    zero, one = ring.zero, ring.one
    rows = [list(r) + [zero] * s for r in A.rows]
    for i in range(s):
        rows.append([zero] * A.n + [one if j == i else zero for j in range(s)])
    return Matrix(ring, rows, A.n + s)


def check_inverse(A: Matrix, B: Matrix) -> bool:
    """Exact test of ``A B = I`` and ``B A = I``.

    Over an Ore field with ``A`` integral, the columns of ``B`` are put over
    a common right denominator and its rows over a common left one, so
    both identities become identities of Laurent polynomials.
    """
    n = A.n
    if A.shape != (n, n) or B.shape != (n, n):
        return False
    ring = A.ring
    if not (isinstance(ring, OreField) and all(a.den.hi == 0 for r in A.rows for a in r)):
        ident = Matrix.identity(ring, n)
        return A @ B == ident and B @ A == ident
    L = ring.ring
    a = [[e.num for e in r] for r in A.rows]
    for j, col in enumerate(B.columns()):
        nums, q = right_common_form(col)
        for i in range(n):
            acc = L.zero
            for k in range(n):
                if a[i][k] and nums[k]:
                    acc = acc + a[i][k] * nums[k]
            if acc != (q if i == j else L.zero):
                return False
    for i, row in enumerate(B.rows):
        q, nums = left_common_form(row)
        for j in range(n):
            acc = L.zero
            for k in range(n):
                if nums[k] and a[k][j]:
                    acc = acc + nums[k] * a[k][j]
            if acc != (q if i == j else L.zero):
                return False
    return True
