"""Command-line front end.

Every verb writes one JSON document to stdout.  Exit codes: 0 success,
1 mathematical negative (not stably full, singular, law fails, ranks
disagree), 2 bad input, 3 a resource bound was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import AlgebraError, InputError, ResourceError, SingularMatrix
from .linalg import Matrix, invert_matrix, rank_over_skewfield
from .malcev import DEFAULT_FRONTIER, MNSeries, mn_rank_with_retries
from .parsing import RingSpec, parse_expression, parse_matrix, parse_ring
from .ranktheory import DEFAULT_BUDGET, InnerRankOracle, nullity_check, stable_rank_bruteforce

VERBS = ("eval", "rank", "invert", "certify", "innerrank", "stablerank", "nullity", "crosscheck", "selftest")


class _Negative(Exception):
    """Carries a JSON payload for an exit-code-1 answer."""

    def __init__(self, payload: dict):
        super().__init__()
        self.payload = payload


def _frontier(text: str) -> tuple:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise InputError(f"bad frontier {text!r}; expected a,b") from None
    if not parts or any(p < 1 for p in parts):
        raise InputError("frontier entries must be positive integers")
    return parts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oreloc", description="Exact Ore localization and rank toolkit.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("payload", nargs="*", help="expression or matrix text (nullity takes A and B)")
    p.add_argument("--ring", help="ring descriptor: z2, klein, base=Q;tau=inv, Qx;tau=shift, z4, gf3, dual2, mn2")
    p.add_argument("--smax", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--frontier", type=_frontier, default=DEFAULT_FRONTIER)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("inner", "stable"), default="inner", help="nullity law to test")
    p.add_argument("--count", type=int, default=50, help="random matrices for crosscheck without a payload")
    p.add_argument("--quick", action="store_true", help="selftest on reduced sample sizes")
    p.add_argument("--witness", action="store_true", help="include the inverse in certify output")
    p.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
    return p


def _need_ring(args, *kinds) -> RingSpec:
    if not args.ring:
        raise InputError(f"{args.verb} needs --ring")
    spec = parse_ring(args.ring, args.frontier)
    if kinds and spec.kind not in kinds:
        raise InputError(f"{args.verb} does not support {spec.kind} rings")
    return spec


def _payload(args, count: int = 1) -> list[str]:
    if len(args.payload) != count:
        raise InputError(f"{args.verb} takes {count} argument(s), got {len(args.payload)}")
    return args.payload


def _ore_matrix(A: Matrix, spec: RingSpec) -> Matrix:
    if spec.kind == "tower" and A.ring == spec.ring:
        return A.map(spec.ring.embed, spec.ring.ore)
    return A


def cmd_eval(args) -> dict:
    spec = _need_ring(args)
    (text,) = _payload(args)
    return {"value": spec.format(parse_expression(text, spec))}


def cmd_rank(args) -> dict:
    spec = _need_ring(args, "tower", "skew", "series")
    (text,) = _payload(args)
    A = parse_matrix(text, spec)
    if spec.kind == "series":
        group, _ = spec.ring
        return mn_rank_with_retries(A, args.frontier, group=group).to_json()
    return rank_over_skewfield(_ore_matrix(A, spec)).to_json()


def cmd_invert(args) -> dict:
    spec = _need_ring(args, "tower", "skew", "series")
    (text,) = _payload(args)
    if spec.kind == "series":
        u = parse_expression(text, spec)
        return {"inverse": str(u.inverse(args.frontier))}
    A = _ore_matrix(parse_matrix(text, spec), spec)
    try:
        B = invert_matrix(A)
    except SingularMatrix:
        raise _Negative({"invertible": False, "rank": rank_over_skewfield(A).rank}) from None
    return {"invertible": True, "inverse": B.to_list()}


def cmd_certify(args) -> dict:
    from .crossed import certify_stably_full

    spec = _need_ring(args, "tower")
    (text,) = _payload(args)
    cert = certify_stably_full(parse_matrix(text, spec), spec.ring)
    out = cert.to_json(with_witness=args.witness)
    if not cert.stably_full:
        raise _Negative(out)
    return out


def cmd_innerrank(args) -> dict:
    spec = _need_ring(args, "finite")
    (text,) = _payload(args)
    oracle = InnerRankOracle(args.budget)
    rho = oracle.inner_rank(parse_matrix(text, spec))
    return {"rho": rho, "budget_used": oracle.last_used}


def cmd_stablerank(args) -> dict:
    spec = _need_ring(args, "finite")
    (text,) = _payload(args)
    return stable_rank_bruteforce(parse_matrix(text, spec), args.smax, args.budget).to_json()


def cmd_nullity(args) -> dict:
    spec = _need_ring(args, "finite")
    a_text, b_text = _payload(args, 2)
    report = nullity_check(parse_matrix(a_text, spec), parse_matrix(b_text, spec), args.mode, args.smax, args.budget)
    out = report.to_json()
    if not report.holds:
        raise _Negative(out)
    return out


def cmd_crosscheck(args) -> dict:
    from .acceptance import random_group_matrix

    spec = parse_ring(args.ring or "z2", args.frontier)
    if spec.kind != "tower" or not spec.ring.commutative:
        raise InputError("crosscheck needs a commutative tower such as z2")
    tower = spec.ring
    if args.payload:
        (text,) = _payload(args)
        matrices = [parse_matrix(text, spec)]
    else:
        rng = random.Random(args.seed)
        matrices = [random_group_matrix(tower, rng, 3, 3) for _ in range(args.count)]
    results = []
    for A in matrices:
        ore_rank = rank_over_skewfield(A.map(tower.embed, tower.ore)).rank
        mn = mn_rank_with_retries(A, args.frontier)
        results.append({"ore_rank": ore_rank, "mn_rank": mn.rank, "attempts": mn.attempts, "agree": ore_rank == mn.rank})
    out = {"checked": len(results), "agree": all(r["agree"] for r in results), "results": results}
    if not out["agree"]:
        raise _Negative(out)
    return out


def cmd_selftest(args) -> dict:
    from .acceptance import run_all

    results = run_all(seed=args.seed, quick=args.quick, log=sys.stderr)
    out = {"seed": args.seed, "quick": args.quick, "criteria": [r.to_json() for r in results]}
    if not all(r.passed for r in results):
        raise _Negative(out)
    return out


COMMANDS = {
    "eval": cmd_eval,
    "rank": cmd_rank,
    "invert": cmd_invert,
    "certify": cmd_certify,
    "innerrank": cmd_innerrank,
    "stablerank": cmd_stablerank,
    "nullity": cmd_nullity,
    "crosscheck": cmd_crosscheck,
    "selftest": cmd_selftest,
}


def _emit(payload: dict):
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        _emit(COMMANDS[args.verb](args))
        return 0
    except _Negative as neg:
        _emit(neg.payload)
        return 1
    except ResourceError as exc:
        code = 3
        err = exc
    except (InputError, AlgebraError) as exc:
        code = 2
        err = exc
    payload = {"error": type(err).__name__, "message": str(err)}
    for attr in ("position", "lower", "upper"):
        if getattr(err, attr, None) is not None:
            payload[attr] = getattr(err, attr)
    _emit(payload)
    print(f"oreloc: {type(err).__name__}: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
