import itertools
import random

import pytest

from coopex.errors import PropertyViolationError, ValidationError
from coopex.ilp import (
    CoveringProblem,
    _Intersections,
    check_feasible,
    compute_potential_x,
    covering_constraints,
    lp_gap_check,
    solve_ilp,
    solve_ilp_equality,
)
from coopex.experiments import brute_force_covering, random_covering_problem


def brute_force_equality(problem, M):
    """Exhaustive minimum of w.x with x(E) = M, or None."""
    n = problem.n
    inter = _Intersections(problem)
    masks = list(range(1, (1 << n) - 1))
    rhs = {
        mask: inter.size(frozenset(i for i in range(n) if not mask >> i & 1))
        for mask in masks
    }
    best = None
    for x in itertools.product(range(M + 1), repeat=n):
        if sum(x) != M:
            continue
        if all(
            sum(x[i] for i in range(n) if mask >> i & 1) >= rhs[mask]
            for mask in masks
        ):
            v = sum(w * xi for w, xi in zip(problem.weights, x))
            if best is None or v < best:
                best = v
    return best


class TestProblemType:
    def test_unit_constructor(self):
        p = CoveringProblem.unit([{0, 1}, {1}])
        assert p.weights == (1, 1)
        assert p.universe_size == 2

    def test_negative_weight_rejected(self):
        with pytest.raises(ValidationError):
            CoveringProblem((frozenset({0}),), (-1,))

    def test_common_intersection(self):
        p = CoveringProblem.unit([{0, 1}, {1, 2}])
        assert p.common_intersection == frozenset({1})

    def test_intersections_cache(self):
        p = CoveringProblem.unit([{0, 1, 2}, {1, 2}, {2, 3}])
        inter = _Intersections(p)
        assert inter.size(frozenset()) == 4
        assert inter.size(frozenset({0, 1})) == 2
        assert inter.size(frozenset({0, 1, 2})) == 1


class TestHandExamples:
    def test_two_senders_disjoint_targets(self):
        # each must send what the other lacks
        p = CoveringProblem.unit([{0}, {1}])
        x, M = solve_ilp(p)
        assert x == [1, 1] and M == 2

    def test_three_senders_one_hole_each(self):
        # B_i = {i}: x_i >= |B_j cap B_k| constraints force total 2
        p = CoveringProblem.unit([{0}, {1}, {2}])
        x, M = solve_ilp(p)
        assert M == 2 and sum(x) == 2

    def test_line_holdings_as_covering(self):
        # three fully connected nodes holding ({0}, {}, {1}) of two
        # packets; B_i is what node i is missing
        p = CoveringProblem.unit([{1}, {0, 1}, {0}])
        x, M = solve_ilp(p)
        assert M == 2
        assert x == [1, 0, 1]

    def test_weighted_shifts_burden(self):
        p = CoveringProblem((frozenset({0}), frozenset({1})), (10, 1))
        x, M = solve_ilp(p)
        # constraints x0 >= |B1| = 1 and x1 >= |B0| = 1 pin both
        assert x == [1, 1]

    def test_weighted_prefers_cheap_sender(self):
        # only the joint constraint binds beyond the singletons
        p = CoveringProblem(
            (frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})), (5, 1, 1)
        )
        x, _ = solve_ilp(p)
        ref = brute_force_covering(p)[0]
        assert sum(w * v for w, v in zip(p.weights, x)) == ref


class TestEqualityLevels:
    def test_monotone_in_level(self):
        p = CoveringProblem.unit([{0, 1}, {1, 2}, {0, 2}])
        feas = [solve_ilp_equality(p, M) is not None for M in range(10)]
        # once feasible, stays feasible
        first = feas.index(True)
        assert all(feas[first:])

    def test_negative_level_infeasible(self):
        p = CoveringProblem.unit([{0}, {1}])
        assert solve_ilp_equality(p, -1) is None

    def test_single_sender(self):
        p = CoveringProblem.unit([{0, 1, 2}])
        assert solve_ilp_equality(p, 5) == [5]
        assert solve_ilp(p) == ([0], 0)

    def test_shared_target_element_rejected(self):
        # a common element breaks the peeling construction; must refuse
        p = CoveringProblem.unit([{0, 1, 2, 3}, {1, 2, 3}, {0, 1, 2, 3}])
        with pytest.raises(ValidationError, match="common"):
            solve_ilp_equality(p, 12)

    def test_equality_values_match_bruteforce(self):
        rng = random.Random(8)
        for _ in range(40):
            p = random_covering_problem(rng, rng.randint(2, 4), weighted=False)
            for M in range(0, 9):
                x = solve_ilp_equality(p, M)
                ref = brute_force_equality(p, M)
                if x is None:
                    assert ref is None
                else:
                    assert sum(x) == M
                    assert check_feasible(p, x)
                    assert sum(x) == ref if ref is not None else False


class TestPotentialConstruction:
    def test_suffix_constraints_hold(self):
        rng = random.Random(13)
        for _ in range(30):
            p = random_covering_problem(rng, rng.randint(2, 5), weighted=True)
            M = sum(len(B) for B in p.targets) + 2
            x = compute_potential_x(p, M)
            assert sum(x) == M
            inter = _Intersections(p)
            order = sorted(range(p.n), key=lambda i: (-p.weights[i], i))
            heavy = order[0]
            # constraints avoiding the heaviest element in the complement
            for mask in range(1, 1 << p.n):
                U = frozenset(i for i in range(p.n) if mask >> i & 1)
                if heavy in U or len(U) == p.n:
                    continue
                comp = frozenset(range(p.n)) - U
                assert sum(x[i] for i in U) >= inter.size(comp)

    def test_check_feasible_catches_violations(self):
        p = CoveringProblem.unit([{0}, {1}, {2}])
        assert check_feasible(p, [1, 1, 0])
        assert not check_feasible(p, [2, 0, 0])


class TestRandomValidation:
    def test_unit_and_weighted_vs_bruteforce(self):
        rng = random.Random(99)
        for trial in range(150):
            n = rng.randint(1, 5)
            p = random_covering_problem(rng, n, weighted=bool(trial % 2))
            x, M = solve_ilp(p)
            assert sum(x) == M
            mine = sum(w * v for w, v in zip(p.weights, x))
            ref = brute_force_covering(p)[0]
            assert mine == ref, f"trial {trial}: {p}"


class TestLpGap:
    def test_gap_below_one_on_random_problems(self):
        rng = random.Random(7)
        for _ in range(50):
            p = random_covering_problem(rng, rng.randint(1, 5), weighted=False)
            ilp_v, lp_v = lp_gap_check(p)
            assert 0 <= ilp_v - lp_v < 1

    def test_weighted_rejected(self):
        p = CoveringProblem((frozenset({0}), frozenset({1})), (2, 1))
        with pytest.raises(ValidationError):
            lp_gap_check(p)

    def test_constraint_rows_shape(self):
        p = CoveringProblem.unit([{0}, {1}, {2}])
        rows = covering_constraints(p)
        assert len(rows) == 2 ** 3 - 2


class TestCrossingSubmodularity:
    def test_constraint_function_is_crossing_submodular(self):
        """f(U) = x(U) - rhs(U) with f pinned at E satisfies
        f(A) + f(B) >= f(A|B) + f(A&B) whenever A, B cross (neither
        contains the other, union proper, intersection nonempty)."""
        rng = random.Random(21)
        for _ in range(20):
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
