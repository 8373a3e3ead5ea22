"""Problem-level solvers and bounds.

Fully connected networks reduce to the covering integer program (one
round suffices); tiny general networks are solved by certified schedule
enumeration; two exact rational LPs give lower bounds (the per-node
neighborhood LP and the full cut-set LP); packet chunking handles the
divisible-packet variant.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    InfeasibleScheduleError,
    PropertyViolationError,
    SizeGuardError,
    ValidationError,
)
from .feasibility import TransmissionSchedule, feasible_mask, is_feasible
from .ilp import CoveringProblem, solve_ilp
from .instance import NetworkInstance, boundary
from .lp import ExactLP

MAX_EXHAUSTIVE = {"n": 4, "k": 4, "r": 3, "cap": 3}
MAX_CUTSET_NODES = 16


@dataclass
class SolveReport:
    """Outcome of one solve: value, certified schedule, bounds, timing."""

    value: object  # int or Fraction
    method: str
    schedule: Optional[TransmissionSchedule] = None
    bounds: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        def num(v):
            if isinstance(v, Fraction):
                return {"num": v.numerator, "den": v.denominator}
            return v

        out = {
            "value": num(self.value),
            "method": self.method,
            "bounds": {k: num(v) for k, v in self.bounds.items()},
            "seconds": round(self.seconds, 6),
        }
        if self.schedule is not None:
            out["schedule"] = {
                "rounds": self.schedule.rounds,
                "b": [list(r) for r in self.schedule.b],
            }
        return out


def clique_problem(inst: NetworkInstance, weights=None) -> CoveringProblem:
    """Covering problem whose targets are the per-node missing packet sets."""
    targets = tuple(inst.missing(i) for i in range(inst.n))
    if weights is None:
        weights = (1,) * inst.n
    return CoveringProblem(targets, tuple(weights))


def _require_clique(inst: NetworkInstance):
    if not inst.is_complete():
        raise ValidationError("this solver requires a fully connected network")


def _certify(inst: NetworkInstance, sched: TransmissionSchedule):
    result = is_feasible(inst, sched)
    if not result:
        raise PropertyViolationError(
            "solver emitted a schedule that failed certification: "
            f"{result.witness.to_json() if result.witness else 'no witness'}"
        )


def solve_clique(inst: NetworkInstance) -> SolveReport:
    """Minimum transmissions for a fully connected network, with a
    certified single-round schedule."""
    _require_clique(inst)
    t0 = time.perf_counter()
    x, M = solve_ilp(clique_problem(inst))
    sched = TransmissionSchedule.single_round(x)
    _certify(inst, sched)
    return SolveReport(
        value=M,
        method="clique-ilp",
        schedule=sched,
        bounds={"estimate": clique_estimate(inst)},
        seconds=time.perf_counter() - t0,
    )


def solve_weighted_clique(inst: NetworkInstance, weights: Sequence) -> SolveReport:
    """Minimum weighted transmission count for a fully connected network."""
    _require_clique(inst)
    if len(weights) != inst.n:
        raise ValidationError("one weight per node required")
    t0 = time.perf_counter()
    x, M = solve_ilp(clique_problem(inst, weights))
    sched = TransmissionSchedule.single_round(x)
    _certify(inst, sched)
    value = sum(w * v for w, v in zip(weights, x))
    return SolveReport(
        value=value,
        method="clique-ilp-weighted",
        schedule=sched,
        bounds={"total_transmissions": M},
        seconds=time.perf_counter() - t0,
    )


def clique_estimate(inst: NetworkInstance) -> int:
    """Ceiling of (total missing packet count) / (n - 1): the value the
    exact optimum concentrates on for random fully connected instances."""
    if inst.n < 2:
        return 0
    total = sum(len(inst.missing(i)) for i in range(inst.n))
    return -(-total // (inst.n - 1))


def _schedules_by_total(n_entries: int, cap: int, total: int):
    """All nonnegative integer vectors with entries <= cap summing to total."""
    out = []
    vec = [0] * n_entries

    def rec(pos, left):
        if pos == n_entries - 1:
            if left <= cap:
                vec[pos] = left
                out.append(tuple(vec))
            return
        for v in range(min(cap, left) + 1):
            vec[pos] = v
            rec(pos + 1, left - v)

    rec(0, total)
    return out


def solve_exhaustive(inst: NetworkInstance, r: int, cap: int = 3) -> SolveReport:
    """Exact minimum over r-round schedules with per-entry cap, by
    enumerating schedules in order of total count and certifying each.

    Ground-truth oracle for small general networks; exponential, hence
    the size guards.
    """
    if inst.n > MAX_EXHAUSTIVE["n"] or inst.k > MAX_EXHAUSTIVE["k"]:
        raise SizeGuardError("exhaustive solve limited to n <= 4, k <= 4")
    if not 1 <= r <= MAX_EXHAUSTIVE["r"] or not 0 <= cap <= MAX_EXHAUSTIVE["cap"]:
        raise SizeGuardError("exhaustive solve limited to r <= 3, cap <= 3")
    t0 = time.perf_counter()
    n_entries = inst.n * r
    for total in range(n_entries * cap + 1):
        flat = _schedules_by_total(n_entries, cap, total)
        if not flat:
            continue
        mask = feasible_mask(inst, r, np.array(flat, dtype=np.int64))
        hits = np.flatnonzero(mask)
        if hits.size:
            row = flat[int(hits[0])]
            sched = TransmissionSchedule.from_lists(
                [row[i * r:(i + 1) * r] for i in range(inst.n)]
            )
            _certify(inst, sched)
            return SolveReport(
                value=total,
                method="exhaustive",
                schedule=sched,
                seconds=time.perf_counter() - t0,
            )
    raise InfeasibleScheduleError(
        f"no feasible schedule within {r} rounds at per-entry cap {cap}"
    )


def lp_dregular(inst: NetworkInstance) -> Fraction:
    """Exact optimum of the per-node LP: for every node j, the open
    neighborhood of j must send at least as many packets as j misses."""
    rows = []
    for j in range(inst.n):
        nbrs = boundary(inst, [j])
        coeffs = [Fraction(1 if i in nbrs else 0) for i in range(inst.n)]
        rows.append((coeffs, Fraction(len(inst.missing(j)))))
    value, _ = ExactLP([Fraction(1)] * inst.n, rows).solve()
    return value


def lp_dregular_solution(inst: NetworkInstance) -> Tuple[Fraction, List[Fraction]]:
    """Per-node LP optimum together with an optimal vector."""
    rows = []
    for j in range(inst.n):
        nbrs = boundary(inst, [j])
        coeffs = [Fraction(1 if i in nbrs else 0) for i in range(inst.n)]
        rows.append((coeffs, Fraction(len(inst.missing(j)))))
    return ExactLP([Fraction(1)] * inst.n, rows).solve()


def lp_cutset(inst: NetworkInstance) -> Fraction:
    """Exact optimum of the cut-set LP: every nonempty proper vertex set
    must hear, across its boundary, all packets it jointly misses."""
    if inst.n > MAX_CUTSET_NODES:
        raise SizeGuardError(f"cut-set LP needs n <= {MAX_CUTSET_NODES}")
    rows = []
    for mask in range(1, (1 << inst.n) - 1):
        S = [i for i in range(inst.n) if mask >> i & 1]
        nbrs = boundary(inst, S)
        rhs = len(inst.jointly_missing(S))
        if not nbrs and rhs:
            raise ValidationError("disconnected demand set")  # unreachable: graph connected
        coeffs = [Fraction(1 if i in nbrs else 0) for i in range(inst.n)]
        rows.append((coeffs, Fraction(rhs)))
    value, _ = ExactLP([Fraction(1)] * inst.n, rows).solve()
    return value


def chunked_instance(inst: NetworkInstance, t: int) -> NetworkInstance:
    """Split each packet into t chunks; chunk (p, c) gets index p*t + c."""
    if t < 1:
        raise ValidationError("chunk count must be positive")
    holdings = tuple(
        frozenset(p * t + c for p in held for c in range(t))
        for held in inst.holdings
    )
    return NetworkInstance(n=inst.n, k=inst.k * t, edges=inst.edges, holdings=holdings)


def solve_t_divisible(inst: NetworkInstance, t: int, r: int = 2, cap: int = 3) -> SolveReport:
    """Minimum normalized transmissions when packets split into t chunks.

    Fully connected networks go through the exact covering solve on the
    chunked instance; small general networks through exhaustive search
    (r and cap apply only there).
    """
    t0 = time.perf_counter()
    chunked = chunked_instance(inst, t)
    if inst.is_complete():
        sub = solve_clique(chunked)
    else:
        sub = solve_exhaustive(chunked, r, cap)
    value = Fraction(sub.value, t)
    return SolveReport(
        value=value,
        method=f"{sub.method}-chunked-t{t}",
        schedule=sub.schedule,
        bounds={"chunk_transmissions": sub.value},
        seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# regular-network rounding (LP lower bound made into a feasible schedule)


def regular_round_count(n: int, d: int, q: float) -> int:
    """Round budget that makes the rounded LP schedule feasible with high
    probability for a d-regular network with availability probability q.

    Built from the closed forms of the random packet model: c_q compares
    one- and full-neighborhood coverage, delta_q is the worst-case slack
    of partial coverage over intermediate set sizes.
    """
    if not 0 < q < 1:
        raise ValidationError("availability probability must be in (0, 1)")
    s = 1.0 - q
    c_q = (s - s ** n) / (s ** 2 - s ** n) - 1.0
    delta_q = min(
        (n - ell) / (n - 1) - (s ** ell - s ** n) / (s - s ** n)
        for ell in range(2, n)
    )
    if delta_q <= 0 or c_q <= 0:
        raise ValidationError("degenerate round-count constants")
    return math.ceil(max(2 * d / (n * delta_q), 2 * n * (1 + c_q) / (d * c_q)))


def rounded_regular_schedule(inst: NetworkInstance, r: int) -> TransmissionSchedule:
    """Schedule from the per-node LP optimum: node totals are the rounded-up
    LP values, spread evenly across r rounds."""
    _, x = lp_dregular_solution(inst)
    totals = [max(0, math.ceil(v)) for v in x]
    b = []
    for tot in totals:
        base, extra = divmod(tot, r)
        b.append([base + (1 if j < extra else 0) for j in range(r)])
    return TransmissionSchedule.from_lists(b)
