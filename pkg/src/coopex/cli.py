"""Command-line interface.

Subcommands: feasible, solve, code, verify, secrecy, experiment.
Exit codes: 0 success, 1 negative/failed result or property violation,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .coding import generate_scheme, load_scheme, save_scheme, verify_recovery
from .errors import CoopexError, ValidationError
from .experiments import CAMPAIGN_KINDS, Campaign, run_campaign
from .feasibility import is_feasible, load_schedule
from .instance import load_instance
from .secrecy import (
    SecrecySetup,
    extract_key,
    pk_capacity,
    sk_capacity,
)
from .solver import (
    lp_cutset,
    lp_dregular,
    solve_clique,
    solve_exhaustive,
    solve_t_divisible,
    solve_weighted_clique,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=1, default=_jsonable)
    sys.stdout.write("\n")


def _jsonable(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, frozenset):
        return sorted(v)
    raise TypeError(f"not serializable: {type(v)!r}")


def cmd_feasible(args) -> int:
    inst = load_instance(args.instance)
    sched = load_schedule(args.schedule)
    result = is_feasible(inst, sched)
    doc = {"feasible": result.feasible,
           "per_terminal_flow": {str(i + 1): f for i, f in result.per_terminal_flow.items()}}
    if result.witness is not None:
        doc["witness"] = result.witness.to_json()
    _emit(doc)
    return EXIT_OK if result.feasible else EXIT_FAIL


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.t is not None and args.method in (None, "clique", "exhaustive"):
        rep = solve_t_divisible(inst, args.t, r=args.rounds, cap=args.cap)
    elif args.method == "exhaustive":
        rep = solve_exhaustive(inst, args.rounds, args.cap)
    elif args.method == "lp-cutset":
        _emit({"value": lp_cutset(inst), "method": "lp-cutset"})
        return EXIT_OK
    elif args.method == "lp-dreg":
        _emit({"value": lp_dregular(inst), "method": "lp-dreg"})
        return EXIT_OK
    elif args.weights:
        with open(args.weights) as fh:
            weights = json.load(fh)
        rep = solve_weighted_clique(inst, weights)
    else:
        rep = solve_clique(inst)
    _emit(rep.to_json())
    return EXIT_OK


def cmd_code(args) -> int:
    inst = load_instance(args.instance)
    sched = load_schedule(args.schedule)
    scheme = generate_scheme(inst, sched, seed=args.seed)
    if args.out:
        save_scheme(scheme, args.out)
        _emit({"transmissions": scheme.count, "out": args.out})
    else:
        save_scheme_stdout(scheme)
    return EXIT_OK


def save_scheme_stdout(scheme) -> None:
    _emit({
        "field_m": scheme.field.m,
        "k": scheme.k,
        "schedule": {"rounds": scheme.schedule.rounds,
                     "b": [list(r) for r in scheme.schedule.b]},
        "transmissions": [
            {"node": i + 1, "round": j, "coeffs": [format(c, "x") for c in coeffs]}
            for i, j, coeffs in scheme.transmissions
        ],
    })


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    scheme = load_scheme(args.scheme)
    ok, ranks = verify_recovery(inst, scheme)
    _emit({"recovered": ok, "ranks": {str(i + 1): r for i, r in ranks.items()}})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_secrecy(args) -> int:
    inst = load_instance(args.instance)
    compromised = frozenset(
        int(v) - 1 for v in args.compromised.split(",") if v
    ) if args.compromised else frozenset()
    setup = SecrecySetup(inst, compromised)
    doc = {}
    if compromised:
        doc["c_pk"] = pk_capacity(setup)
    else:
        doc["c_sk"] = sk_capacity(setup)
    if args.extract:
        rep = solve_clique(inst)
        scheme = generate_scheme(inst, rep.schedule, seed=args.seed)
        keymap = extract_key(setup, scheme)
        doc["keymap"] = {
            "key_rows": [[format(c, "x") for c in row] for row in keymap.key_rows],
            "transcript_rows": [
                [format(c, "x") for c in row] for row in keymap.transcript_rows
            ],
            "certified": True,
        }
    _emit(doc)
    return EXIT_OK


def cmd_experiment(args) -> int:
    c = Campaign(
        kind=args.kind,
        n=args.n,
        k_list=[int(v) for v in args.k.split(",")],
        q=args.q,
        topology=args.topology,
        trials=args.trials,
        seed=args.seed,
        out_csv=args.out,
        out_json=args.summary,
    )
    result = run_campaign(c)
    _emit(result["summary"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="coopex",
        description="Cooperative data exchange: solving, coding, secrecy.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("feasible", help="certify a transmission schedule")
    f.add_argument("--instance", required=True)
    f.add_argument("--schedule", required=True)
    f.set_defaults(fn=cmd_feasible)

    s = sub.add_parser("solve", help="minimum-transmission solvers and bounds")
    s.add_argument("--instance", required=True)
    s.add_argument("--weights")
    s.add_argument("--t", type=int)
    s.add_argument("--method",
                   choices=["clique", "exhaustive", "lp-cutset", "lp-dreg"])
    s.add_argument("--rounds", type=int, default=2)
    s.add_argument("--cap", type=int, default=3)
    s.set_defaults(fn=cmd_solve)

    c = sub.add_parser("code", help="generate a coded transmission scheme")
    c.add_argument("--instance", required=True)
    c.add_argument("--schedule", required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_code)

    v = sub.add_parser("verify", help="replay and verify a coded scheme")
    v.add_argument("--instance", required=True)
    v.add_argument("--scheme", required=True)
    v.set_defaults(fn=cmd_verify)

    k = sub.add_parser("secrecy", help="key capacities and extraction")
    k.add_argument("--instance", required=True)
    k.add_argument("--compromised", help="comma-separated 1-based node ids")
    k.add_argument("--extract", action="store_true")
    k.add_argument("--seed", type=int, default=0)
    k.set_defaults(fn=cmd_secrecy)

    e = sub.add_parser("experiment", help="run a seeded campaign")
    e.add_argument("--kind", required=True, choices=CAMPAIGN_KINDS)
    e.add_argument("--n", type=int, default=4)
    e.add_argument("--q", type=float, default=0.5)
    e.add_argument("--k", default="50")
    e.add_argument("--topology", default="clique")
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", help="CSV output path")
    e.add_argument("--summary", help="JSON summary path")
    e.set_defaults(fn=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CoopexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
