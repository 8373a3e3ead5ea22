"""Walkthrough: when does a transmission schedule suffice?

Three nodes sit on a line.  The two ends each hold one of two packets;
the middle node holds nothing.  We try a few schedules and watch the
certifier accept or reject them, including the violated-inequality
witness it produces on rejection.

Run:  python3 demos/01_feasibility_walkthrough.py
"""

import json

from coopex import NetworkInstance, TransmissionSchedule, is_feasible
from coopex.instance import line_graph

inst = NetworkInstance(
    n=3,
    k=2,
    edges=line_graph(3),
    holdings=(frozenset({0}), frozenset(), frozenset({1})),
)
print("instance: 3 nodes on a line, ends hold packets 1 and 2, middle holds none")

# Attempt 1: everyone shouts once, single round.  The ends can't hear
# each other, and the middle has nothing to say yet.
sched = TransmissionSchedule.single_round([1, 1, 1])
res = is_feasible(inst, sched)
print(f"\none round, everyone sends once -> feasible: {res.feasible}")
print("witness (a set sequence that hears too few transmissions):")
print(json.dumps(res.witness.to_json(), indent=2))

# Attempt 2: two rounds; ends send in round 1, middle relays one coded
# combination in round 2.  Three transmissions total, and that's optimal.
sched = TransmissionSchedule.from_lists([[1, 0], [0, 1], [1, 0]])
res = is_feasible(inst, sched)
print(f"\nends then one coded relay -> feasible: {res.feasible}")
print(f"per-terminal flow (= packets recoverable): {res.per_terminal_flow}")

# Attempt 3: drop the relay.  The ends never learn the opposite packet.
sched = TransmissionSchedule.from_lists([[1, 0], [0, 0], [1, 0]])
res = is_feasible(inst, sched)
print(f"\nends only, no relay -> feasible: {res.feasible}")
print(f"terminal flows: {res.per_terminal_flow}")
