"""Walkthrough: finding the minimum number of transmissions.

Fully connected networks are solved exactly through a covering integer
program; tiny general networks through certified exhaustive search.  We
also look at weighted costs, the cheap closed-form estimate, lower
bounds from two exact rational LPs, and what happens when packets may be
split into chunks.

Run:  python3 demos/02_minimum_transmissions.py
"""

from coopex import NetworkInstance, solve_clique, solve_exhaustive
from coopex.instance import complete_graph, line_graph
from coopex.solver import (
    clique_estimate,
    lp_cutset,
    lp_dregular,
    solve_t_divisible,
    solve_weighted_clique,
)

# --- a fully connected triangle where node i misses exactly packet i ---
clique = NetworkInstance(
    n=3, k=3, edges=complete_graph(3),
    holdings=tuple(frozenset({0, 1, 2}) - {i} for i in range(3)),
)
rep = solve_clique(clique)
print("triangle, one hole per node:")
print(f"  optimum {rep.value} transmissions, schedule {rep.schedule.b}")
print(f"  closed-form estimate: {clique_estimate(clique)}")

# Make node 1 expensive: the burden shifts to the other two.
wrep = solve_weighted_clique(clique, [10, 1, 1])
print(f"  with node-1 cost 10: value {wrep.value}, schedule {wrep.schedule.b}")

# Lower bounds.  Both LPs give 3/2 here; whole packets can't reach it...
print(f"  cut-set LP bound: {lp_cutset(clique)}")
print(f"  per-node LP bound: {lp_dregular(clique)}")

# ...but half packets can.
half = solve_t_divisible(clique, 2)
print(f"  splitting packets in half: {half.value} packet-equivalents")

# --- a line network needs the exhaustive solver (not fully connected) ---
line = NetworkInstance(
    n=3, k=2, edges=line_graph(3),
    holdings=(frozenset({0}), frozenset(), frozenset({1})),
)
lrep = solve_exhaustive(line, r=2, cap=3)
print("\nthree-node line:")
print(f"  optimum {lrep.value} transmissions over {lrep.schedule.rounds} rounds")
print(f"  schedule {lrep.schedule.b}")
print(f"  cut-set LP bound: {lp_cutset(line)} (tight here)")
