import random
from fractions import Fraction

import pytest

from coopex.lp import ExactLP, LpInfeasibleError, LpUnboundedError, solve_min

scipy_opt = pytest.importorskip("scipy.optimize")


class TestKnownPrograms:
    def test_single_variable(self):
        # min x s.t. x >= 3
        val, x = ExactLP([1], [([1], 3)]).solve()
        assert val == 3 and x == [3]

    def test_two_variable_vertex(self):
        # min x + y s.t. x >= 1, y >= 2, x + y >= 4
        val, x = ExactLP([1, 1], [([1, 0], 1), ([0, 1], 2), ([1, 1], 4)]).solve()
        assert val == 4

    def test_fractional_optimum_is_exact(self):
        # min x + y s.t. 2x + y >= 1, x + 2y >= 1 -> x = y = 1/3
        val, x = ExactLP([1, 1], [([2, 1], 1), ([1, 2], 1)]).solve()
        assert val == Fraction(2, 3)
        assert x == [Fraction(1, 3), Fraction(1, 3)]

    def test_free_variables_go_negative(self):
        # min -x s.t. -x >= 2 -> x = -2, value 2
        val, x = ExactLP([-1], [([-1], 2)]).solve()
        assert val == 2 and x == [-2]

    def test_infeasible_detected(self):
        with pytest.raises(LpInfeasibleError):
            ExactLP([1], [([1], 1), ([-1], 0)]).solve()

    def test_unbounded_detected(self):
        with pytest.raises(LpUnboundedError):
            ExactLP([-1], [([1], 0)]).solve()

    def test_fraction_inputs(self):
        val, _ = ExactLP(
            [Fraction(1, 2)], [([Fraction(1, 3)], Fraction(2, 3))]
        ).solve()
        assert val == 1

    def test_solve_min_wrapper(self):
        assert solve_min([1, 1], [([1, 1], 5)])[0] == 5


class TestAgainstScipy:
    def test_random_programs_match_linprog(self):
        rng = random.Random(101)
        checked = 0
        for _ in range(120):
            nvars = rng.randint(1, 4)
            nrows = rng.randint(1, 6)
            obj = [rng.randint(1, 5) for _ in range(nvars)]  # positive: bounded below often
            rows = [
                ([rng.randint(-3, 3) for _ in range(nvars)], rng.randint(-4, 6))
                for _ in range(nrows)
            ]
            # box each variable from below so positive costs stay bounded
            for j in range(nvars):
                e = [0] * nvars
                e[j] = 1
                rows.append((e, -rng.randint(0, 8)))
            # scipy solves min c.x s.t. A_ub x <= b_ub with given bounds
            res = scipy_opt.linprog(
                obj,
                A_ub=[[-a for a in r] for r, _ in rows],
                b_ub=[-b for _, b in rows],
                bounds=[(None, None)] * nvars,
                method="highs",
            )
            try:
                val, x = ExactLP(obj, rows).solve()
            except LpInfeasibleError:
                assert res.status == 2
                continue
            except LpUnboundedError:
                assert res.status == 3
                continue
            assert res.status == 0
            assert float(val) == pytest.approx(res.fun, abs=1e-7)
            for (coeffs, rhs) in rows:
                assert sum(c * xi for c, xi in zip(coeffs, x)) >= rhs
            checked += 1
        assert checked >= 40  # enough bounded-feasible cases exercised
