"""Brute-force inner rank and stable rank over small finite rings.

Inner rank: the least ``k`` with ``A = B C`` for ``B`` of size ``m x k``.
Two exhaustive searches are provided.  :func:`inner_rank_pairs` walks the
pairs ``(B, C)`` lexicographically; :func:`inner_rank_bruteforce` walks the
k-generated submodules of ``R^n`` instead, which is the same question
(``A = B C`` iff the rows of ``A`` lie in the span of the rows of ``C``)
and scales to the 4x4 and 5x5 matrices that stable rank needs.

All rings here are commutative, so ``rho(A) = rho(A^T)`` and the search
always runs in the smaller of the two dimensions.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np
from flint import fmpz

from .errors import InputError, NotAnnihilating, NotStabilized, SearchBudgetExceeded
from .linalg import Matrix, diag_sum

__all__ = [
    "FiniteRing",
    "parse_finite_ring",
    "InnerRankOracle",
    "RankProfile",
    "NullityReport",
    "inner_rank_bruteforce",
    "inner_rank_pairs",
    "stable_rank_bruteforce",
    "nullity_check",
    "stably_finite_check",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**8
DEFAULT_MAX_SIZE = 16


class FiniteRing:
    """``Z/m``, ``GF(p)`` or the dual numbers ``GF(p)[e]/(e^2)``.

    Elements are the integers ``0 .. size-1``; in the dual numbers
    ``a + b*e`` is stored as ``a + p*b``.
    """

    def __init__(self, kind: str, param: int, max_size: int = DEFAULT_MAX_SIZE):
        param = int(param)
        if kind == "Z/m":
            if param < 2:
                raise InputError("Z/m needs m >= 2")
            size, self.name = param, f"Z/{param}"
        elif kind in ("F_p", "F_p[e]"):
            if param < 2 or not fmpz(param).is_prime():
                raise InputError(f"{param} is not prime")
            size = param if kind == "F_p" else param * param
            self.name = f"F{param}" if kind == "F_p" else f"F{param}[e]/(e^2)"
        else:
            raise InputError(f"unknown finite ring kind {kind!r}")
        if size > max_size:
            raise InputError(f"ring of size {size} exceeds the bound {max_size}")
        self.kind = kind
        self.param = param
        self.size = size
        self.zero = 0
        self.one = 1
        elems = range(size)
        self._add = [[self._raw_add(a, b) for b in elems] for a in elems]
        self._mul = [[self._raw_mul(a, b) for b in elems] for a in elems]
        self._neg = [next(b for b in elems if self._add[a][b] == 0) for a in elems]
        # additive group as a product of cyclic groups, for set translation
        if kind == "F_p[e]":
            self.additive_shape = (param, param)
            self.coords = [(a % param, a // param) for a in elems]
        else:
            self.additive_shape = (size,)
            self.coords = [(a,) for a in elems]

    def _raw_add(self, a: int, b: int) -> int:
        if self.kind == "F_p[e]":
            p = self.param
            return (a % p + b % p) % p + p * ((a // p + b // p) % p)
        return (a + b) % self.size

    def _raw_mul(self, a: int, b: int) -> int:
        if self.kind == "F_p[e]":
            p = self.param
            a0, a1, b0, b1 = a % p, a // p, b % p, b // p
            return (a0 * b0) % p + p * ((a0 * b1 + a1 * b0) % p)
        return (a * b) % self.size

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def __call__(self, value) -> int:
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise InputError(f"cannot convert {value!r} into {self.name}")
        modulus = self.param if self.kind == "F_p[e]" else self.size
        return int(value) % modulus

    def parse(self, text: str) -> int:
        """Integers, and ``a + b*e`` forms in the dual numbers."""
        s = text.replace(" ", "")
        if re.fullmatch(r"[+-]?\d+", s):
            return self(int(s))
        if self.kind == "F_p[e]":
            m = re.fullmatch(r"(?:([+-]?\d+)(?=[+-]))?([+-]?)(\d*)\*?e", s)
            if m:
                a = int(m.group(1) or 0)
                b = int(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
                p = self.param
                return a % p + p * (b % p)
        raise InputError(f"cannot read {text!r} as an element of {self.name}")

    def format(self, a: int) -> str:
        if self.kind != "F_p[e]":
            return str(a)
        p = self.param
        a0, a1 = a % p, a // p
        if not a1:
            return str(a0)
        e = "e" if a1 == 1 else f"{a1}*e"
        return e if not a0 else f"{a0}+{e}"

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and (self.kind, self.param) == (other.kind, other.param)

    def __hash__(self):
        return hash(("finite", self.kind, self.param))

    def __repr__(self):
        return f"FiniteRing({self.name})"


def parse_finite_ring(text: str, max_size: int = DEFAULT_MAX_SIZE) -> FiniteRing:
    """``z4`` / ``Z/4``, ``gf3`` / ``F3``, ``dual2`` / ``F2[e]/(e^2)``."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(r"(?:z|Z/?)(\d+)", s)
    if m:
        return FiniteRing("Z/m", int(m.group(1)), max_size)
    m = re.fullmatch(r"(?:gf|GF|f|F)(\d+)", s)
    if m:
        return FiniteRing("F_p", int(m.group(1)), max_size)
    m = re.fullmatch(r"dual(\d+)|F(\d+)\[e\]/\(e\^2\)", s)
    if m:
        return FiniteRing("F_p[e]", int(m.group(1) or m.group(2)), max_size)
    raise InputError(f"unknown finite ring {text!r}")


def _check_ring(A: Matrix) -> FiniteRing:
    if not isinstance(A.ring, FiniteRing):
        raise InputError("brute-force ranks need a matrix over a finite ring")
    return A.ring


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, units: int, lower: int, upper: int) -> None:
        self.used += units
        if self.used > self.limit:
            raise SearchBudgetExceeded(
                f"search budget {self.limit} exhausted; rank lies in [{lower}, {upper}]", lower, upper
            )


class _Lattice:
    """Submodules of ``R^n`` generated by at most ``k`` elements, level by level."""

    def __init__(self, ring: FiniteRing, n: int):
        self.ring = ring
        self.n = n
        self.shape = ring.additive_shape * n
        self.axes = tuple(range(len(self.shape)))
        self.vectors = list(itertools.product(ring.elements(), repeat=n))
        zero = np.zeros(self.shape, dtype=bool)
        zero[(0,) * len(self.shape)] = True
        self.levels: list[list[np.ndarray]] = [[zero]]
        self.stacked: list[np.ndarray | None] = [None]
        self._keys = {zero.tobytes()}
        self._partial = None  # generator state of an interrupted level

    def index(self, v) -> tuple:
        return tuple(c for x in v for c in self.ring.coords[x])

    def flat_index(self, v) -> int:
        return int(np.ravel_multi_index(self.index(v), self.shape))

    def translate(self, S: np.ndarray, v) -> np.ndarray:
        return np.roll(S, self.index(v), axis=self.axes)

    def extend(self, S: np.ndarray, v) -> np.ndarray:
        ring = self.ring
        multiples = {tuple(ring.mul(r, x) for x in v) for r in ring.elements()}
        out = S.copy()
        for w in multiples:
            if any(w):
                out |= self.translate(S, w)
        return out

    def _level_steps(self, k: int):
        """Yield once per candidate ``(S, v)`` while building level ``k``."""
        new = list(self.levels[k - 1])
        for S in self.levels[k - 1]:
            seen = S.copy()
            for v in self.vectors:
                if seen[self.index(v)]:
                    continue
                seen |= self.translate(S, v)
                span = self.extend(S, v)
                key = span.tobytes()
                if key not in self._keys:
                    self._keys.add(key)
                    new.append(span)
                yield
        self.levels.append(new)
        self.stacked.append(np.stack([s.reshape(-1) for s in new]))

    def ensure(self, k: int, budget: _Budget, lower: int, upper: int) -> None:
        while len(self.levels) <= k:
            if self._partial is None:
                self._partial = self._level_steps(len(self.levels))
            for _ in self._partial:
                budget.spend(1, lower, upper)
            self._partial = None

    def contains_rows(self, k: int, rows) -> bool:
        if k == 0:
            return not any(any(r) for r in rows)
        idx = [self.flat_index(r) for r in rows]
        table = self.stacked[k]
        return bool(np.all(table[:, idx], axis=1).any())


class InnerRankOracle:
    """Exhaustive inner-rank search with a per-oracle cache of submodule lattices.

    Budget units: one per candidate ``(S, v)`` when a lattice level is built
    and one per submodule tested for containment; cached levels are free.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self._lattices: dict[tuple, _Lattice] = {}
        self.last_used = 0

    def _lattice(self, ring: FiniteRing, n: int) -> _Lattice:
        key = (ring, n)
        if key not in self._lattices:
            self._lattices[key] = _Lattice(ring, n)
        return self._lattices[key]

    def inner_rank(self, A: Matrix, budget: _Budget | None = None) -> int:
        ring = _check_ring(A)
        own = budget is None
        if own:
            budget = _Budget(self.budget)
        rows = A.rows if A.n <= A.m else A.transpose().rows
        n = min(A.m, A.n)
        try:
            if n == 0:
                return 0
            lattice = self._lattice(ring, n)
            for k in range(n):
                # k = n always works: A = A I or A = I A
                lattice.ensure(k, budget, k, n)
                if k:
                    budget.spend(len(lattice.levels[k]), k, n)
                if lattice.contains_rows(k, rows):
                    return k
            return n
        finally:
            if own:
                self.last_used = budget.used


def inner_rank_bruteforce(A: Matrix, budget: int = DEFAULT_BUDGET, oracle: InnerRankOracle | None = None) -> int:
    """Least ``k`` with ``A = B_(m x k) C_(k x n)``, by exhaustive search."""
    oracle = oracle or InnerRankOracle(budget)
    return oracle.inner_rank(A)


def inner_rank_pairs(A: Matrix, budget: int = DEFAULT_BUDGET) -> int:
    """The same minimum by walking all pairs ``(B, C)`` in lexicographic order.

    Cost ``|R|^((m+n)k)`` pairs for each ``k``; meant for tiny cases and as
    an independent check of :func:`inner_rank_bruteforce`.
    """
    ring = _check_ring(A)
    m, n = A.m, A.n
    target = A.rows
    spent = 0
    elems = list(ring.elements())
    add, mul = ring.add, ring.mul
    for k in range(min(m, n)):
        for bflat in itertools.product(elems, repeat=m * k):
            B = [bflat[i * k:(i + 1) * k] for i in range(m)]
            for cflat in itertools.product(elems, repeat=k * n):
                spent += 1
                if spent > budget:
                    raise SearchBudgetExceeded(
                        f"search budget {budget} exhausted; rank lies in [{k}, {min(m, n)}]", k, min(m, n)
                    )
                ok = True
                for i in range(m):
                    for j in range(n):
                        acc = 0
                        for l in range(k):
                            acc = add(acc, mul(B[i][l], cflat[l * n + j]))
                        if acc != target[i][j]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    return k
    return min(m, n)


@dataclass
class RankProfile:
    inner_rank: int
    stable_rank: int
    stabilized_at: int
    values: list[int] = field(default_factory=list)
    budget_used: int = 0
    # Two equal consecutive values are observed, not proven, stabilization.
    observed: bool = True

    def to_json(self) -> dict:
        return {
            "rho": self.inner_rank,
            "rho_star": self.stable_rank,
            "stabilized_at": self.stabilized_at,
            "observed": self.observed,
            "budget_used": self.budget_used,
        }


def stable_rank_bruteforce(
    A: Matrix, s_max: int = 3, budget: int = DEFAULT_BUDGET, oracle: InnerRankOracle | None = None
) -> RankProfile:
    """``rho*(A)`` as the first repeated value of ``rho(A (+) I_s) - s``.

    Stops at the first ``s`` with ``v_s == v_(s+1)``; raises NotStabilized if
    no two consecutive values among ``v_0 .. v_(s_max)`` agree.
    """
    _check_ring(A)
    oracle = oracle or InnerRankOracle(budget)
    spent = _Budget(budget)
    values: list[int] = []
    for s in range(s_max + 1):
        values.append(oracle.inner_rank(diag_sum(A, s), spent) - s)
        if s and values[-1] > values[-2]:
            raise AssertionError(f"rho(A+I_s) - s increased: {values}")
        if s and values[-1] == values[-2]:
            oracle.last_used = spent.used
            return RankProfile(values[0], values[-1], s - 1, values, spent.used)
    oracle.last_used = spent.used
    raise NotStabilized(s_max, values)


@dataclass
class NullityReport:
    mode: str
    rank_a: int
    rank_b: int
    n: int
    holds: bool

    def to_json(self) -> dict:
        return {"mode": self.mode, "rank_A": self.rank_a, "rank_B": self.rank_b, "n": self.n, "holds": self.holds}


def nullity_check(
    A: Matrix, B: Matrix, mode: str = "inner", s_max: int = 3, budget: int = DEFAULT_BUDGET,
    oracle: InnerRankOracle | None = None,
) -> NullityReport:
    """Test ``rank(A) + rank(B) <= n`` for this one pair with ``A B = 0``."""
    ring = _check_ring(A)
    if B.ring != ring:
        raise InputError("A and B must be over the same ring")
    if A.n != B.m:
        raise InputError(f"shape mismatch {A.shape} @ {B.shape}")
    if not (A @ B).is_zero():
        raise NotAnnihilating("A*B is not the zero matrix")
    oracle = oracle or InnerRankOracle(budget)
    if mode == "inner":
        ra, rb = oracle.inner_rank(A), oracle.inner_rank(B)
    elif mode == "stable":
        ra = stable_rank_bruteforce(A, s_max, budget, oracle).stable_rank
        rb = stable_rank_bruteforce(B, s_max, budget, oracle).stable_rank
    else:
        raise InputError(f"mode must be 'inner' or 'stable', not {mode!r}")
    return NullityReport(mode, ra, rb, A.n, ra + rb <= A.n)


def stably_finite_check(ring: FiniteRing, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``A B = I_n`` forces ``B A = I_n``, over all pairs of ``n x n`` matrices."""
    if n < 0:
        raise InputError("n must be nonnegative")
    total = ring.size ** (2 * n * n)
    if total > budget:
        raise SearchBudgetExceeded(f"{total} pairs exceed the budget {budget}", None, None)
    elems = list(ring.elements())
    ident = Matrix.identity(ring, n)
    mats = [Matrix(ring, [flat[i * n:(i + 1) * n] for i in range(n)], n) for flat in itertools.product(elems, repeat=n * n)]
    for A in mats:
        for B in mats:
            if A @ B == ident and B @ A != ident:
                return False
    return True
