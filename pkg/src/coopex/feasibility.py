"""Schedule feasibility certification.

Two independent routes decide whether a transmission schedule lets every
node recover every packet within its round budget:

* ``is_feasible`` builds the layered network-coding flow graph and checks
  that k units of flow reach every terminal (exact integer max-flow);
* ``check_rr_membership`` enumerates the nested-set inequality family
  directly (small instances only).

On failure, ``is_feasible`` maps a min cut back to a violated inequality
and returns it as a human-readable witness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .errors import PropertyViolationError, ValidationError
from .instance import NetworkInstance, SetSequence, _sequence_masks, neighborhood
from .maxflow import INFINITE, FlowNetwork, _dinic, max_flow_with_residual

SOURCE = "s"


@dataclass(frozen=True)
class TransmissionSchedule:
    """Per-node, per-round transmission counts: b[i][j] is the number of
    broadcasts node i makes in round j (0-based in memory)."""

    b: tuple

    def __post_init__(self):
        if not self.b or not self.b[0]:
            raise ValidationError("schedule needs at least one node and one round")
        r = len(self.b[0])
        for row in self.b:
            if len(row) != r:
                raise ValidationError("ragged schedule matrix")
            if any(v < 0 for v in row):
                raise ValidationError("transmission counts must be nonnegative")

    @classmethod
    def from_lists(cls, rows) -> "TransmissionSchedule":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def single_round(cls, counts) -> "TransmissionSchedule":
        return cls.from_lists([[int(v)] for v in counts])

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def rounds(self) -> int:
        return len(self.b[0])

    def total(self) -> int:
        return sum(sum(row) for row in self.b)

    def node_total(self, i: int) -> int:
        return sum(self.b[i])


def save_schedule(sched: TransmissionSchedule, path) -> None:
    with open(path, "w") as fh:
        json.dump({"rounds": sched.rounds, "b": [list(r) for r in sched.b]}, fh)
        fh.write("\n")


def load_schedule(path) -> TransmissionSchedule:
    with open(path) as fh:
        doc = json.load(fh)
    if "b" not in doc:
        raise ValidationError("schedule file missing field 'b'")
    sched = TransmissionSchedule.from_lists(doc["b"])
    if "rounds" in doc and doc["rounds"] != sched.rounds:
        raise ValidationError("declared round count does not match matrix width")
    return sched


@dataclass(frozen=True)
class InfeasibilityWitness:
    """A violated nested-set inequality: the transmissions heard across
    the sequence fall short of the packets its final set jointly lacks."""

    sequence: SetSequence
    lhs: int
    rhs: int
    terminal: int

    def to_json(self) -> dict:
        return {
            "terminal": self.terminal + 1,
            "sequence": [sorted(i + 1 for i in s) for s in self.sequence.sets],
            "transmissions_heard": self.lhs,
            "packets_jointly_missing": self.rhs,
        }


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    per_terminal_flow: dict
    witness: Optional[InfeasibilityWitness] = None

    def __bool__(self):
        return self.feasible


def build_gnc(inst: NetworkInstance, sched: TransmissionSchedule) -> FlowNetwork:
    """Layered flow graph whose k-unit multicast feasibility is equivalent
    to universal recovery under the schedule.

    Layers: source -> packet nodes ("u", p) -> per-round node states
    ("v", i, j) with broadcast nodes ("w", i, j); only the state->broadcast
    arcs carry the finite schedule capacities.
    """
    if sched.n != inst.n:
        raise ValidationError("schedule node count does not match instance")
    n, k, r = inst.n, inst.k, sched.rounds
    nodes = [SOURCE]
    nodes += [("u", p) for p in range(k)]
    nodes += [("v", i, j) for j in range(r + 1) for i in range(n)]
    nodes += [("w", i, j) for j in range(1, r + 1) for i in range(n)]
    arcs = []
    for p in range(k):
        arcs.append((SOURCE, ("u", p), 1))
    for i in range(n):
        for p in inst.holdings[i]:
            arcs.append((("u", p), ("v", i, 0), INFINITE))
    for j in range(1, r + 1):
        for i in range(n):
            arcs.append((("v", i, j - 1), ("v", i, j), INFINITE))
    for j in range(1, r + 1):
        for i in range(n):
            arcs.append((("v", i, j - 1), ("w", i, j), sched.b[i][j - 1]))
    for j in range(1, r + 1):
        for i in range(n):
            for i2 in inst.neighbors[i]:
                arcs.append((("w", i, j), ("v", i2, j), INFINITE))
    return FlowNetwork(nodes=nodes, arcs=arcs, source=SOURCE, infinite_value=k + 1)


def _cut_to_sequence(inst, r, reachable):
    """Normalize a min cut into a nested set sequence (top layer down)."""
    sink_v = [
        {i for i in range(inst.n) if ("v", i, layer) not in reachable}
        for layer in range(r + 1)
    ]
    seq = [frozenset(sink_v[r])]
    for j in range(1, r + 1):
        prev = seq[-1]
        grown = prev | (sink_v[r - j] & neighborhood(inst, prev))
        seq.append(frozenset(grown))
    return SetSequence(tuple(seq))


def _sequence_lhs(inst, sched, seq: SetSequence) -> int:
    r = seq.rounds
    lhs = 0
    for j in range(1, r + 1):
        heard = neighborhood(inst, seq.sets[j - 1]) - seq.sets[j]
        lhs += sum(sched.b[i][r - j] for i in heard)
    return lhs


def is_feasible(inst: NetworkInstance, sched: TransmissionSchedule) -> FeasibilityResult:
    """Max-flow certification: feasible iff every terminal receives k units.

    One flow computation per terminal, preserving per-terminal diagnostics;
    the first shortfall is normalized into an inequality witness.
    """
    net = build_gnc(inst, sched)
    r = sched.rounds
    flows = {}
    for i in range(inst.n):
        flow, reachable = max_flow_with_residual(
            net, SOURCE, ("v", i, r), limit=inst.k
        )
        flows[i] = flow
        if flow < inst.k:
            seq = _cut_to_sequence(inst, r, reachable)
            lhs = _sequence_lhs(inst, sched, seq)
            rhs = len(inst.jointly_missing(seq.sets[r]))
            if lhs >= rhs:
                raise PropertyViolationError(
                    "min cut did not normalize to a violated inequality"
                )
            return FeasibilityResult(
                False, flows, InfeasibilityWitness(seq, lhs, rhs, terminal=i)
            )
    return FeasibilityResult(True, flows)


def check_rr_membership(inst: NetworkInstance, sched: TransmissionSchedule) -> bool:
    """Direct enumeration of the inequality family over all nested set
    sequences (note the reversed round index on the left-hand side)."""
    if sched.n != inst.n:
        raise ValidationError("schedule node count does not match instance")
    r = sched.rounds
    A, rhs = _constraint_system(inst, r)
    flat = np.array([v for row in sched.b for v in row], dtype=np.int64)
    return bool((A @ flat >= rhs).all())


def _constraint_system(inst: NetworkInstance, r: int):
    """Constraint matrix over flattened schedules (row-major, i*r + round)."""
    nbr = inst.neighbor_masks
    miss = [
        sum(1 << p for p in range(inst.k) if p not in inst.holdings[i])
        for i in range(inst.n)
    ]
    full_miss = (1 << inst.k) - 1

    def gamma(mask):
        out = 0
        m = mask
        while m:
            out |= nbr[(m & -m).bit_length() - 1]
            m &= m - 1
        return out

    rows = []
    rhs = []
    for masks in _sequence_masks(inst, r):
        inter = full_miss
        m = masks[r]
        while m:
            inter &= miss[(m & -m).bit_length() - 1]
            m &= m - 1
        row = np.zeros(inst.n * r, dtype=np.int64)
        for j in range(1, r + 1):
            heard = gamma(masks[j - 1]) & ~masks[j]
            col = r - j
            while heard:
                i = (heard & -heard).bit_length() - 1
                row[i * r + col] = 1
                heard &= heard - 1
        rows.append(row)
        rhs.append(inter.bit_count())
    if not rows:
        return np.zeros((0, inst.n * r), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.stack(rows), np.array(rhs, dtype=np.int64)


# ---------------------------------------------------------------------------
# bulk certification (oracle-vs-oracle sweeps)


@njit(cache=True)
def _batch_feasible(head, nxt, to, cap0, sched_pos, schedules, s, terminals, k):
    out = np.zeros(schedules.shape[0], dtype=np.bool_)
    cap = np.empty_like(cap0)
    for idx in range(schedules.shape[0]):
        ok = True
        for ti in range(terminals.shape[0]):
            cap[:] = cap0
            for a in range(sched_pos.shape[0]):
                cap[sched_pos[a]] = schedules[idx, a]
            if _dinic(head, nxt, to, cap, s, terminals[ti], k) < k:
                ok = False
                break
        out[idx] = ok
    return out


def feasible_mask(inst: NetworkInstance, r: int, schedules: np.ndarray) -> np.ndarray:
    """Vector of is_feasible decisions for many flattened schedules.

    ``schedules`` has one row per schedule, columns in i*r + round order.
    Same max-flow route as ``is_feasible``, amortizing the graph build.
    """
    zero = TransmissionSchedule.from_lists([[0] * r for _ in range(inst.n)])
    net = build_gnc(inst, zero)
    head, nxt, to, cap0 = net.compiled()
    arc_of = {(u, v): 2 * a for a, (u, v, _) in enumerate(net.arcs)}
    sched_pos = np.array(
        [
            arc_of[(("v", i, j - 1), ("w", i, j))]
            for i in range(inst.n)
            for j in range(1, r + 1)
        ],
        dtype=np.int64,
    )
    terminals = np.array(
        [net.node_id(("v", i, r)) for i in range(inst.n)], dtype=np.int64
    )
    return _batch_feasible(
        head, nxt, to, cap0,
        sched_pos, np.ascontiguousarray(schedules, dtype=np.int64),
        net.node_id(SOURCE), terminals, inst.k,
    )


def rr_mask(inst: NetworkInstance, r: int, schedules: np.ndarray) -> np.ndarray:
    """Vector of check_rr_membership decisions for many flattened schedules."""
    A, rhs = _constraint_system(inst, r)
    if A.shape[0] == 0:
        return np.ones(schedules.shape[0], dtype=bool)
    return (schedules @ A.T >= rhs).all(axis=1)
