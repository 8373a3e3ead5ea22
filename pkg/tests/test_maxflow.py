import itertools
import random

import pytest

from coopex.errors import ValidationError
from coopex.maxflow import INFINITE, FlowNetwork, max_flow, max_flow_with_residual


def brute_force_min_cut(nodes, arcs, source, target, infinite_value):
    """Independent oracle: min over all source/target partitions of the
    capacity crossing the cut (max-flow = min-cut)."""
    others = [v for v in nodes if v not in (source, target)]
    best = None
    for r in range(len(others) + 1):
        for side in itertools.combinations(others, r):
            s_side = set(side) | {source}
            cut = sum(
                (infinite_value if c is INFINITE else c)
                for u, v, c in arcs
                if u in s_side and v not in s_side
            )
            best = cut if best is None else min(best, cut)
    return best


class TestKnownNetworks:
    def test_single_arc(self):
        net = FlowNetwork(["s", "t"], [("s", "t", 5)], "s", 100)
        assert max_flow(net, "s", "t") == 5

    def test_diamond(self):
        arcs = [("s", "a", 3), ("s", "b", 2), ("a", "t", 2), ("b", "t", 3),
                ("a", "b", 1)]
        net = FlowNetwork(["s", "a", "b", "t"], arcs, "s", 100)
        assert max_flow(net, "s", "t") == 5

    def test_disconnected_target(self):
        net = FlowNetwork(["s", "a", "t"], [("s", "a", 4)], "s", 100)
        assert max_flow(net, "s", "t") == 0

    def test_infinite_capacity_uses_stand_in(self):
        arcs = [("s", "a", INFINITE), ("a", "t", 7)]
        net = FlowNetwork(["s", "a", "t"], arcs, "s", infinite_value=50)
        assert max_flow(net, "s", "t") == 7

    def test_negative_capacity_rejected(self):
        net = FlowNetwork(["s", "t"], [("s", "t", -1)], "s", 100)
        with pytest.raises(ValidationError):
            max_flow(net, "s", "t")

    def test_parallel_arcs_add(self):
        arcs = [("s", "t", 2), ("s", "t", 3)]
        net = FlowNetwork(["s", "t"], arcs, "s", 100)
        assert max_flow(net, "s", "t") == 5


class TestResidualCut:
    def test_residual_side_is_min_cut(self):
        arcs = [("s", "a", 1), ("s", "b", 10), ("a", "t", 10), ("b", "t", 1)]
        net = FlowNetwork(["s", "a", "b", "t"], arcs, "s", 100)
        flow, side = max_flow_with_residual(net, "s", "t")
        assert flow == 2
        assert "s" in side and "t" not in side
        crossing = sum(c for u, v, c in arcs if u in side and v not in side)
        assert crossing == flow

    def test_limit_short_circuits(self):
        net = FlowNetwork(["s", "t"], [("s", "t", 100)], "s", 1000)
        flow, _ = max_flow_with_residual(net, "s", "t", limit=3)
        assert flow == 3


class TestRandomVsOracle:
    def test_random_networks_match_cut_enumeration(self):
        rng = random.Random(42)
        for trial in range(60):
            n = rng.randint(2, 6)
            nodes = list(range(n))
            arcs = []
            for u in range(n):
                for v in range(n):
                    if u != v and rng.random() < 0.5:
                        arcs.append((u, v, rng.randint(0, 6)))
            net = FlowNetwork(nodes, arcs, 0, infinite_value=1000)
            want = brute_force_min_cut(nodes, arcs, 0, n - 1, 1000)
            flow, side = max_flow_with_residual(net, 0, n - 1)
            assert flow == want, f"trial {trial}"
            crossing = sum(c for u, v, c in arcs if u in side and v not in side)
            assert crossing == flow
