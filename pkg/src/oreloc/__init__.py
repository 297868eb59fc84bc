"""Exact Ore localization of skew Laurent rings, with rank tools.

Layers, bottom up: scalar fields (``scalars``), skew Laurent rings
(``skewpoly``), their Ore fields of fractions (``orefield``), linear
algebra over division rings (``linalg``), group-ring towers and the
stably-full certifier (``crossed``), finite-ring rank oracles
(``ranktheory``), truncated Malcev-Neumann series (``malcev``), and the
text front end (``parsing``, ``cli``).
"""

from .crossed import GroupRingElement, Tower, certify_stably_full, dim_over_D, embed_in_ore, parse_tower
from .errors import (
    AlgebraError,
    DegreeOverflow,
    DivisionByZero,
    ExprSyntaxError,
    FrontierTooTight,
    GroupMismatch,
    InputError,
    NotAnnihilating,
    NotStabilized,
    ResourceError,
    RingMismatch,
    SearchBudgetExceeded,
    SingularMatrix,
    UnknownSymbol,
    UnsupportedAutomorphism,
    ZeroSeries,
)
from .linalg import Matrix, diag_sum, invert_matrix, kernel_basis, rank_over_skewfield
from .malcev import MNSeries, OrderedGroupZn, mn_invert, mn_mul, mn_rank
from .orefield import OreField, OreFraction
from .parsing import parse_expression, parse_matrix, parse_ring
from .ranktheory import FiniteRing, inner_rank_bruteforce, nullity_check, stable_rank_bruteforce
from .scalars import QQ, FunctionField, Moebius, PrimeField
from .skewpoly import SkewLaurentRing

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
