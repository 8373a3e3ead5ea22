"""Random linear network coding on top of a feasible schedule.

Each transmission is a random field combination of the sender's current
row space, so causality holds by construction; generation retries with
fresh randomness until every node reaches full rank, which a feasible
schedule guarantees happens with positive probability per attempt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    CoopexError,
    InfeasibleScheduleError,
    InvalidSchemeError,
    ValidationError,
)
from .feasibility import TransmissionSchedule, is_feasible
from .galois import DEFAULT_FIELD, GF2m, RowSpace
from .instance import NetworkInstance

RETRY_CAP = 32


class SchemeGenerationError(CoopexError):
    """All attempts left some node short of full rank."""

    def __init__(self, ranks: dict, attempts: int):
        self.ranks = ranks
        self.attempts = attempts
        super().__init__(
            f"coding failed after {attempts} attempts; final ranks {ranks}"
        )


@dataclass(frozen=True)
class CodingScheme:
    """Concrete transmissions: (node, round, coefficient row over packets).

    Rounds are 1-based; within a round every coefficient row depends only
    on the sender's knowledge before the round.
    """

    field: GF2m
    k: int
    schedule: TransmissionSchedule
    transmissions: tuple  # of (node, round, tuple-of-coeffs)

    @property
    def count(self) -> int:
        return len(self.transmissions)


def _initial_states(inst: NetworkInstance, field: GF2m) -> List[RowSpace]:
    states = []
    for i in range(inst.n):
        rs = RowSpace(field, inst.k)
        for p in inst.holdings[i]:
            row = [0] * inst.k
            row[p] = 1
            rs.insert(row)
        states.append(rs)
    return states


def generate_scheme(
    inst: NetworkInstance,
    sched: TransmissionSchedule,
    seed: int = 0,
    field: Optional[GF2m] = None,
) -> CodingScheme:
    """Simulate the schedule with random coding until recovery succeeds.

    Raises SchemeGenerationError with the final rank report if the retry
    cap is exhausted, and InfeasibleScheduleError if the schedule cannot
    support recovery at all.
    """
    field = field or DEFAULT_FIELD
    if field.order < 2 * inst.n:
        raise ValidationError("field order must be at least twice the node count")
    if not is_feasible(inst, sched):
        raise InfeasibleScheduleError("schedule does not support universal recovery")
    last_ranks = {}
    for attempt in range(RETRY_CAP):
        rng = np.random.default_rng([seed, attempt])
        states = _initial_states(inst, field)
        txs = []
        for j in range(1, sched.rounds + 1):
            round_txs = []
            for i in range(inst.n):
                for _ in range(sched.b[i][j - 1]):
                    coeffs = states[i].random_combination(rng)
                    round_txs.append((i, j, tuple(coeffs)))
            for i, _, coeffs in round_txs:
                for i2 in inst.neighbors[i]:
                    states[i2].insert(list(coeffs))
            txs.extend(round_txs)
        last_ranks = {i: states[i].rank for i in range(inst.n)}
        if all(r == inst.k for r in last_ranks.values()):
            return CodingScheme(
                field=field, k=inst.k, schedule=sched, transmissions=tuple(txs)
            )
    raise SchemeGenerationError(last_ranks, RETRY_CAP)


def verify_recovery(inst: NetworkInstance, scheme: CodingScheme) -> Tuple[bool, dict]:
    """Deterministic replay: (all nodes reach full rank, per-node ranks).

    Checks the causality support condition transmission by transmission
    and that transmission counts match the declared schedule; violations
    raise InvalidSchemeError rather than returning False.
    """
    sched = scheme.schedule
    if sched.n != inst.n or scheme.k != inst.k:
        raise ValidationError("scheme dimensions do not match instance")
    counts = [[0] * sched.rounds for _ in range(inst.n)]
    by_round = [[] for _ in range(sched.rounds + 1)]
    for node, rnd, coeffs in scheme.transmissions:
        if not 0 <= node < inst.n or not 1 <= rnd <= sched.rounds:
            raise InvalidSchemeError(f"transmission ({node}, {rnd}) out of range")
        if len(coeffs) != inst.k:
            raise InvalidSchemeError("coefficient row has wrong width")
        counts[node][rnd - 1] += 1
        by_round[rnd].append((node, coeffs))
    for i in range(inst.n):
        for j in range(sched.rounds):
            if counts[i][j] != sched.b[i][j]:
                raise InvalidSchemeError(
                    f"node {i + 1} made {counts[i][j]} transmissions in round "
                    f"{j + 1}, schedule says {sched.b[i][j]}"
                )
    states = _initial_states(inst, scheme.field)
    for j in range(1, sched.rounds + 1):
        for node, coeffs in by_round[j]:
            if not states[node].contains(list(coeffs)):
                raise InvalidSchemeError(
                    f"node {node + 1} transmitted outside its knowledge in round {j}"
                )
        for node, coeffs in by_round[j]:
            for i2 in inst.neighbors[node]:
                states[i2].insert(list(coeffs))
    ranks = {i: states[i].rank for i in range(inst.n)}
    return all(r == inst.k for r in ranks.values()), ranks


# ---------------------------------------------------------------------------
# file I/O (1-based nodes, hex coefficients)


def save_scheme(scheme: CodingScheme, path) -> None:
    doc = {
        "field_m": scheme.field.m,
        "k": scheme.k,
        "schedule": {"rounds": scheme.schedule.rounds,
                     "b": [list(r) for r in scheme.schedule.b]},
        "transmissions": [
            {"node": node + 1, "round": rnd, "coeffs": [format(c, "x") for c in coeffs]}
            for node, rnd, coeffs in scheme.transmissions
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_scheme(path) -> CodingScheme:
    with open(path) as fh:
        doc = json.load(fh)
    for key in ("field_m", "k", "schedule", "transmissions"):
        if key not in doc:
            raise ValidationError(f"scheme file missing field {key!r}")
    field = GF2m(doc["field_m"])
    sched = TransmissionSchedule.from_lists(doc["schedule"]["b"])
    txs = tuple(
        (t["node"] - 1, t["round"], tuple(int(c, 16) for c in t["coeffs"]))
        for t in doc["transmissions"]
    )
    return CodingScheme(field=field, k=doc["k"], schedule=sched, transmissions=txs)
