"""Experiment campaigns: concentration studies and validation sweeps.

Each campaign runs seeded independent trials, writes one CSV row per
trial plus a JSON summary, and re-certifies every schedule it reports as
feasible.  Trial RNG streams derive from (seed, campaign kind, trial
index), so results are reproducible and order-insensitive; the worker
count is controlled by the COOPEX_THREADS environment variable.
"""

from __future__ import annotations

import csv
import itertools
import json
import os
import random as _random
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .errors import PropertyViolationError, ValidationError
from .feasibility import is_feasible
from .ilp import CoveringProblem, _Intersections, solve_ilp
from .instance import (
    NetworkInstance,
    RandomModel,
    complete_graph,
    cycle_graph,
    is_d_regular,
    random_instance,
)
from .solver import (
    clique_estimate,
    lp_cutset,
    lp_dregular,
    regular_round_count,
    rounded_regular_schedule,
    solve_clique,
    solve_t_divisible,
)

CAMPAIGN_KINDS = ("theorem3", "theorem4", "theorem5", "ilp-validate", "timing")


@dataclass
class Campaign:
    kind: str
    n: int = 4
    k_list: Sequence[int] = (50,)
    q: float = 0.5
    topology: str = "clique"
    trials: int = 10
    seed: int = 0
    out_csv: Optional[str] = None
    out_json: Optional[str] = None

    def __post_init__(self):
        if self.kind not in CAMPAIGN_KINDS:
            raise ValidationError(f"unknown campaign kind {self.kind!r}")
        if self.trials < 1:
            raise ValidationError("trial count must be at least 1")
        if not 0 < self.q < 1:
            raise ValidationError("availability probability must be in (0, 1)")


def _trial_seed(c: Campaign, trial: int, k: int = 0) -> int:
    ss = np.random.SeedSequence([c.seed, zlib.crc32(c.kind.encode()), k, trial])
    return int(ss.generate_state(1)[0])


def _threads() -> int:
    raw = os.environ.get("COOPEX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError("COOPEX_THREADS must be an integer")


def _run_trials(fn, args_list):
    """Map trials over a worker pool; results in submission order."""
    workers = _threads()
    if workers == 1:
        return [fn(*a) for a in args_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: fn(*a), args_list))


def _topology_edges(c: Campaign):
    if c.topology == "clique":
        return complete_graph(c.n)
    if c.topology == "cycle":
        return cycle_graph(c.n)
    raise ValidationError(f"unsupported topology {c.topology!r}")


def _emit(c: Campaign, header, rows, summary):
    summary = dict(summary)
    summary["params"] = {
        "kind": c.kind, "n": c.n, "k_list": list(c.k_list), "q": c.q,
        "topology": c.topology, "trials": c.trials, "seed": c.seed,
    }
    if c.out_csv:
        with open(c.out_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    if c.out_json:
        with open(c.out_json, "w") as fh:
            json.dump(summary, fh, indent=1, default=str)
            fh.write("\n")
    return {"header": header, "rows": rows, "summary": summary}


def run_theorem3_campaign(c: Campaign):
    """Exact optimum vs the ceiling estimate on random fully connected
    instances; reports per-k match rates."""
    if c.topology != "clique":
        raise ValidationError("this campaign requires a clique topology")
    edges = complete_graph(c.n)

    def one(k, trial):
        seed = _trial_seed(c, trial, k)
        inst = random_instance(c.n, k, RandomModel(c.q, seed), edges)
        rep = solve_clique(inst)
        est = clique_estimate(inst)
        return [k, trial, seed, rep.value, est, int(rep.value == est)]

    args = [(k, t) for k in c.k_list for t in range(c.trials)]
    rows = _run_trials(one, args)
    rates = {}
    for k in c.k_list:
        sub = [r for r in rows if r[0] == k]
        rates[str(k)] = sum(r[5] for r in sub) / len(sub)
    return _emit(
        c,
        ["k", "trial", "seed", "optimal", "estimate", "match"],
        rows,
        {"match_rate_by_k": rates},
    )


def run_theorem4_campaign(c: Campaign):
    """Rounded per-node-LP schedules on regular networks: certified total
    vs the LP lower bound; reports the fraction with gap below n."""
    edges = _topology_edges(c)
    probe = NetworkInstance(
        c.n, 1, edges, tuple(frozenset({0}) for _ in range(c.n))
    )
    d = probe.degree(0)
    if not is_d_regular(probe, d):
        raise ValidationError("topology is not regular and d-connected")
    r = regular_round_count(c.n, d, c.q)
    k = c.k_list[0]

    def one(trial):
        seed = _trial_seed(c, trial, k)
        inst = random_instance(c.n, k, RandomModel(c.q, seed), edges)
        bound = lp_dregular(inst)
        sched = rounded_regular_schedule(inst, r)
        feasible = bool(is_feasible(inst, sched))
        total = sched.total()
        ok = feasible and total < bound + c.n
        return [trial, seed, float(bound), total, r, int(feasible), int(ok)]

    rows = _run_trials(one, [(t,) for t in range(c.trials)])
    frac = sum(r[6] for r in rows) / len(rows)
    return _emit(
        c,
        ["trial", "seed", "lp_bound", "schedule_total", "rounds", "feasible", "gap_below_n"],
        rows,
        {"fraction_gap_below_n": frac, "rounds": r, "k": k, "degree": d},
    )


def run_theorem5_campaign(c: Campaign):
    """Divisible-packet optima against the cut-set LP on random cliques.

    Checks: values non-increasing along the chunk chain 1 | 2 | 4, the
    whole-packet optimum within 1 of the cut-set bound, and how often
    t = n-1 chunks already meet the bound.
    """
    if c.topology != "clique":
        raise ValidationError("this campaign requires a clique topology")
    edges = complete_graph(c.n)
    k = c.k_list[0]
    t_values = sorted({1, 2, 4, c.n - 1})

    def one(trial):
        seed = _trial_seed(c, trial, k)
        inst = random_instance(c.n, k, RandomModel(c.q, seed), edges)
        vals = {t: solve_t_divisible(inst, t).value for t in t_values}
        cut = lp_cutset(inst)
        chain = [t for t in (1, 2, 4) if t in vals]
        mono = all(
            vals[a] >= vals[b] for a, b in zip(chain, chain[1:])
        )
        gap_ok = vals[1] - cut < 1
        meets = vals[c.n - 1] == cut
        if not all(vals[t] >= cut for t in t_values):
            raise PropertyViolationError("divisible optimum fell below the cut-set bound")
        return [trial, seed] + [float(vals[t]) for t in t_values] + [
            float(cut), int(mono), int(gap_ok), int(meets),
        ]

    rows = _run_trials(one, [(t,) for t in range(c.trials)])
    return _emit(
        c,
        ["trial", "seed"] + [f"t{t}" for t in t_values]
        + ["cutset", "monotone_chain", "gap_below_1", "meets_cutset_at_nm1"],
        rows,
        {
            "monotone_rate": sum(r[-3] for r in rows) / len(rows),
            "gap_rate": sum(r[-2] for r in rows) / len(rows),
            "meets_cutset_rate": sum(r[-1] for r in rows) / len(rows),
            "k": k,
            "t_values": t_values,
        },
    )


def brute_force_covering(problem: CoveringProblem):
    """Exhaustive optimum of the covering program; validation oracle."""
    n = problem.n
    inter = _Intersections(problem)
    masks = list(range(1, (1 << n) - 1))
    rhs = []
    for mask in masks:
        comp = frozenset(i for i in range(n) if not mask >> i & 1)
        rhs.append(inter.size(comp))
    hi = max((len(B) for B in problem.targets), default=0) + problem.universe_size
    best = None
    for x in itertools.product(range(hi + 1), repeat=n):
        ok = all(
            sum(x[i] for i in range(n) if mask >> i & 1) >= r
            for mask, r in zip(masks, rhs)
        )
        if ok:
            v = sum(w * xi for w, xi in zip(problem.weights, x))
            if best is None or v < best[0]:
                best = (v, x)
    return best


def random_covering_problem(rng: _random.Random, n: int, weighted: bool) -> CoveringProblem:
    """Random targets with empty common intersection (the solver's domain)."""
    while True:
        targets = [
            frozenset(rng.sample(range(4), rng.randint(0, 4))) for _ in range(n)
        ]
        common = targets[0]
        for B in targets[1:]:
            common = common & B
        if n == 1 or not common:
            break
    w = tuple(rng.randint(0, 10) for _ in range(n)) if weighted else (1,) * n
    return CoveringProblem(tuple(targets), w)


def run_ilp_validation(c: Campaign):
    """solve_ilp against the exhaustive oracle on random problems; any
    mismatch is dumped and raises."""

    def one(trial):
        rng = _random.Random(_trial_seed(c, trial))
        n = rng.randint(1, 5)
        prob = random_covering_problem(rng, n, weighted=bool(trial % 2))
        x, M = solve_ilp(prob)
        mine = sum(w * xi for w, xi in zip(prob.weights, x))
        ref = brute_force_covering(prob)[0]
        return [trial, n, int(trial % 2), mine, ref, int(mine == ref),
                json.dumps([sorted(B) for B in prob.targets]),
                json.dumps(list(prob.weights))]

    rows = _run_trials(one, [(t,) for t in range(c.trials)])
    mismatches = [r for r in rows if not r[5]]
    out = _emit(
        c,
        ["trial", "n", "weighted", "solver_value", "oracle_value", "match",
         "targets", "weights"],
        rows,
        {"mismatches": len(mismatches)},
    )
    if mismatches:
        raise PropertyViolationError(
            f"{len(mismatches)} solver/oracle mismatches; first: {mismatches[0]}"
        )
    return out


def run_timing_campaign(c: Campaign):
    """Wall-clock timing of the clique solver across instance sizes.

    Data only; no scaling assertion (hardware-dependent).
    """
    def one(k, trial):
        seed = _trial_seed(c, trial, k)
        inst = random_instance(
            c.n, k, RandomModel(c.q, seed), complete_graph(c.n)
        )
        t0 = time.perf_counter()
        rep = solve_clique(inst)
        return [c.n, k, trial, rep.value, round(time.perf_counter() - t0, 6)]

    args = [(k, t) for k in c.k_list for t in range(c.trials)]
    rows = _run_trials(one, args)
    return _emit(
        c,
        ["n", "k", "trial", "optimal", "seconds"],
        rows,
        {"mean_seconds_by_k": {
            str(k): sum(r[4] for r in rows if r[1] == k) / c.trials
            for k in c.k_list
        }},
    )


RUNNERS = {
    "theorem3": run_theorem3_campaign,
    "theorem4": run_theorem4_campaign,
    "theorem5": run_theorem5_campaign,
    "ilp-validate": run_ilp_validation,
    "timing": run_timing_campaign,
}


def run_campaign(c: Campaign):
    return RUNNERS[c.kind](c)
