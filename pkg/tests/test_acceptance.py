"""End-to-end acceptance checks.

Each test covers one acceptance criterion and prints exactly one
PASS/FAIL line to the real stdout (bypassing capture) so the run log
shows a per-criterion verdict.
"""

import functools
import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import coopex.coding as coding_mod
from coopex.coding import generate_scheme, verify_recovery
from coopex.experiments import (
    Campaign,
    brute_force_covering,
    random_covering_problem,
    run_campaign,
)
from coopex.feasibility import TransmissionSchedule, feasible_mask, rr_mask
from coopex.galois import GF2m, rref
from coopex.ilp import CoveringProblem, _Intersections, lp_gap_check, solve_ilp
from coopex.instance import (
    NetworkInstance,
    RandomModel,
    complete_graph,
    cycle_graph,
    line_graph,
    random_instance,
)
from coopex.secrecy import (
    KeyMap,
    SecrecySetup,
    extract_key,
    node_views,
    post_recovery_private_capacity,
    sk_capacity,
    verify_secrecy,
)
from coopex.sfm import SetFunctionOracle, sfm_min, sfm_min_bruteforce
from coopex.solver import solve_clique, solve_exhaustive, solve_t_divisible


# filled by passing tests; the conftest report hook prints one
# "acceptance criterion NN: PASS/FAIL" line per criterion from it
DETAILS = {}


def criterion(num):
    """Decorate a test so its criterion verdict is reported with detail."""

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            DETAILS[num] = fn(*args, **kwargs) or ""

        return inner

    return wrap


def _line3():
    return NetworkInstance(
        3, 2, line_graph(3),
        holdings=(frozenset({0}), frozenset(), frozenset({1})),
    )


def _clique3():
    return NetworkInstance(
        3, 3, complete_graph(3),
        holdings=tuple(frozenset({0, 1, 2}) - {i} for i in range(3)),
    )


def _pair_instance():
    """Four fully connected nodes, six packets, one per node pair."""
    pairs = list(itertools.combinations(range(4), 2))
    holdings = tuple(
        frozenset(p for p, pair in enumerate(pairs) if i in pair)
        for i in range(4)
    )
    return NetworkInstance(4, 6, complete_graph(4), holdings)


@criterion(1)
def test_criterion_01_worked_examples():
    """Line needs 3 transmissions; its clique closure needs 2 whole or
    3/2 half packets; each solve under a second."""
    t0 = time.perf_counter()
    rep1 = solve_exhaustive(_line3(), r=2, cap=3)
    t1 = time.perf_counter()
    rep2 = solve_clique(_clique3())
    t2 = time.perf_counter()
    rep3 = solve_t_divisible(_clique3(), 2)
    t3 = time.perf_counter()
    assert rep1.value == 3
    assert rep2.value == 2 and rep2.schedule.rounds == 1
    assert rep3.value == Fraction(3, 2)
    assert t1 - t0 < 1.0 and t2 - t1 < 1.0 and t3 - t2 < 1.0
    return f"3 / 2 / 3:2 in {t3 - t0:.2f}s"


def _small_instances():
    topologies = [("clique", n, complete_graph(n)) for n in range(2, 5)]
    topologies += [("line", n, line_graph(n)) for n in range(3, 5)]
    topologies += [("cycle", 4, cycle_graph(4))]
    for _, n, edges in topologies:
        subsets = [
            frozenset(i for i in range(n) if m >> i & 1)
            for m in range(1, 1 << n)
        ]
        for k in range(1, 4):
            # packet labels are interchangeable, so one representative per
            # multiset of holder sets covers every instance up to relabeling
            for combo in itertools.combinations_with_replacement(subsets, k):
                holdings = tuple(
                    frozenset(p for p, holders in enumerate(combo) if i in holders)
                    for i in range(n)
                )
                yield NetworkInstance(n, k, edges, holdings)


@criterion(2)
def test_criterion_02_flow_equals_inequalities():
    """Max-flow feasibility and the nested-inequality family agree on
    every small instance and schedule; done inside ten minutes."""
    t0 = time.perf_counter()
    instances = schedules = 0
    for inst in _small_instances():
        instances += 1
        for r in (1, 2):
            flats = np.array(
                list(itertools.product(range(3), repeat=inst.n * r)),
                dtype=np.int64,
            )
            fm = feasible_mask(inst, r, flats)
            rm = rr_mask(inst, r, flats)
            assert (fm == rm).all(), f"disagreement on {inst} at r={r}"
            schedules += flats.shape[0]
    elapsed = time.perf_counter() - t0
    assert elapsed < 600
    return f"{instances} instances, {schedules} schedules, {elapsed:.0f}s"


def _covering_corpus():
    rng = random.Random(20260823)
    return [
        random_covering_problem(rng, rng.randint(1, 5), weighted=bool(t % 2))
        for t in range(500)
    ]


@criterion(3)
def test_criterion_03_covering_solver_vs_bruteforce():
    """500 random covering problems, alternating unit and weighted,
    all matching exhaustive search within five minutes."""
    t0 = time.perf_counter()
    for idx, p in enumerate(_covering_corpus()):
        x, M = solve_ilp(p)
        assert sum(x) == M
        mine = sum(w * v for w, v in zip(p.weights, x))
        assert mine == brute_force_covering(p)[0], f"problem {idx}: {p}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 300
    return f"500 problems in {elapsed:.0f}s"


@criterion(4)
def test_criterion_04_integrality_gap_below_one():
    """The unit-weight relaxation gap stays below one on the same corpus."""
    worst = Fraction(0)
    for p in _covering_corpus():
        unit = CoveringProblem.unit(p.targets)
        ilp_v, lp_v = lp_gap_check(unit)
        gap = ilp_v - lp_v
        assert 0 <= gap < 1
        worst = max(worst, gap)
    return f"largest gap {worst}"


@criterion(5)
def test_criterion_05_estimate_concentration():
    """On random 4-cliques the ceiling estimate matches the optimum with
    rate non-decreasing in k and at least 0.9 by k=5000."""
    result = run_campaign(Campaign(
        kind="theorem3", n=4, k_list=(50, 500, 5000), q=0.5,
        trials=100, seed=20260823,
    ))
    rates = result["summary"]["match_rate_by_k"]
    r50, r500, r5000 = rates["50"], rates["500"], rates["5000"]
    assert r50 <= r500 <= r5000
    assert r5000 >= 0.9
    return f"rates {r50:.2f} <= {r500:.2f} <= {r5000:.2f}"


@criterion(6)
def test_criterion_06_regular_rounding():
    """Rounded per-node-LP schedules on the 6-cycle: certified feasible
    with total within n of the LP bound in at least 90% of trials."""
    result = run_campaign(Campaign(
        kind="theorem4", n=6, k_list=(5000,), q=0.5, topology="cycle",
        trials=50, seed=20260823,
    ))
    rows = result["rows"]
    assert all(row[5] == 1 for row in rows)  # every schedule feasible
    frac = result["summary"]["fraction_gap_below_n"]
    assert frac >= 0.9
    return f"gap-below-n fraction {frac:.2f}, rounds {result['summary']['rounds']}"


@criterion(7)
def test_criterion_07_divisible_packets():
    """Chunking never hurts along the divisibility chain, whole packets
    stay within one of the cut-set LP, and n-1 chunks usually meet it."""
    result = run_campaign(Campaign(
        kind="theorem5", n=4, k_list=(8,), q=0.5, trials=20, seed=20260823,
    ))
    s = result["summary"]
    assert s["monotone_rate"] == 1.0
    assert s["gap_rate"] == 1.0
    assert s["meets_cutset_rate"] >= 0.9
    return (
        f"monotone {s['monotone_rate']:.2f}, gap<1 {s['gap_rate']:.2f}, "
        f"meets cut-set {s['meets_cutset_rate']:.2f}"
    )


@criterion(8)
def test_criterion_08_coding_success(monkeypatch):
    """Random coding over GF(2^8) realizes every optimal schedule within
    five attempts on 100 random cliques."""
    monkeypatch.setattr(coding_mod, "RETRY_CAP", 5)
    rng = random.Random(20260823)
    for trial in range(100):
        n = rng.randint(3, 6)
        k = rng.randint(1, 20)
        inst = random_instance(
            n, k, RandomModel(0.5, rng.randrange(2 ** 31)), complete_graph(n)
        )
        scheme = generate_scheme(inst, solve_clique(inst).schedule, seed=trial)
        ok, ranks = verify_recovery(inst, scheme)
        assert ok, f"trial {trial}: ranks {ranks}"
    return "100/100 schemes verified"


@criterion(9)
def test_criterion_09_secrecy():
    """Key capacities, certificates, and exhaustive uniformity on the
    worked three-node example; rank identity on 50 random cliques."""
    inst = _clique3()
    f2 = GF2m(1)
    setup = SecrecySetup(inst)
    assert sk_capacity(setup) == 1
    # the worked transcript: raw packet 1, then packets 0+2 combined
    transcript = ((0, 1, 0), (1, 0, 1))
    # once that transcript is public, any single compromised node
    # leaves no private key material
    for d in range(3):
        sd = SecrecySetup(inst, frozenset({d}))
        assert post_recovery_private_capacity(sd, list(transcript), f2) == 0
    keymap = KeyMap(field=f2, k=3, key_rows=((0, 0, 1),), transcript_rows=transcript)
    assert verify_secrecy(keymap, node_views(setup, keymap))
    # exhaustive uniformity over GF(2): for every transcript value the
    # key is uniform across consistent packet vectors
    buckets = {}
    for x in itertools.product(range(2), repeat=3):
        t = tuple(sum(c * xi for c, xi in zip(row, x)) % 2 for row in transcript)
        kv = x[2]  # key row (0, 0, 1)
        buckets.setdefault(t, []).append(kv)
    for kvs in buckets.values():
        assert kvs.count(0) == kvs.count(1)
    # rank identity on random cliques: transcript rank + key size = k
    for seed in range(50):
        rinst = random_instance(
            4, 8, RandomModel(0.5, seed), complete_graph(4)
        )
        rsetup = SecrecySetup(rinst)
        scheme = generate_scheme(rinst, solve_clique(rinst).schedule, seed=seed)
        km = extract_key(rsetup, scheme)
        rank_l = len(rref(scheme.field, [list(r) for r in km.transcript_rows])[0])
        assert rank_l + km.key_size == rinst.k
        assert km.key_size == sk_capacity(rsetup)
    return "capacities, certificates, uniformity, 50/50 rank identities"


def _random_submodular(rng, n):
    weights = [rng.randint(0, 8) for _ in range(n)]
    cap = rng.randint(0, sum(weights) + 1)
    conc = rng.choice([
        lambda s: 3.0 * math.sqrt(s),
        lambda s: 2.0 * math.log1p(s),
        lambda s: min(s, 2.5),
    ])
    shift = [rng.randint(-5, 5) for _ in range(n)]

    def fn(subset):
        return (
            min(sum(weights[i] for i in subset), cap)
            + conc(len(subset))
            - sum(shift[i] for i in subset)
        )

    return SetFunctionOracle(n, fn)


@criterion(10)
def test_criterion_10_submodular_minimization():
    """200 random submodular oracles match exhaustive minimization, and
    the covering constraint function is crossing submodular."""
    rng = random.Random(20260823)
    for trial in range(200):
        o = _random_submodular(rng, rng.randint(1, 10))
        got, mini = sfm_min(o)
        want, _ = sfm_min_bruteforce(o)
        assert got == pytest.approx(want), f"oracle {trial}"
        assert o.value(mini) == pytest.approx(want)
    # crossing submodularity of f(U) = x(U) - |intersection outside U|
    # on 500 random crossing pairs per instance
    for _ in range(10):
        n = rng.randint(4, 6)
        p = random_covering_problem(rng, n, weighted=False)
        inter = _Intersections(p)
        x = [rng.randint(0, 4) for _ in range(n)]

        def f(mask):
            comp = frozenset(i for i in range(n) if not mask >> i & 1)
            return sum(x[i] for i in range(n) if mask >> i & 1) - inter.size(comp)

        full = (1 << n) - 1
        pairs = 0
        while pairs < 500:
            A = rng.randint(1, full - 1)
            B = rng.randint(1, full - 1)
            if A & B == 0 or A | B == full or A & ~B == 0 or B & ~A == 0:
                continue
            pairs += 1
            assert f(A) + f(B) >= f(A | B) + f(A & B)
    return "200/200 minima exact, 5000/5000 crossing inequalities"
