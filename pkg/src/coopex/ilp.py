"""Covering integer program over a crossing-submodular constraint family.

Problem: minimize w.x over integer x with x(U) >= |intersection of B_i
over i outside U| for every nonempty proper subset U, optionally pinned
to x(E) = M.  The equality-constrained form is solved by a potential
construction that peels one coordinate at a time with a submodular
minimization per coordinate; the general form searches over M, using
monotone feasibility (unit weights) or the convexity of the optimal
value in M (general weights).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import PropertyViolationError, SizeGuardError, ValidationError
from .lp import ExactLP
from .sfm import SetFunctionOracle, sfm_min

MAX_LP_ELEMENTS = 16


@dataclass(frozen=True)
class CoveringProblem:
    """Ground set of n senders, target sets B_i, nonnegative weights."""

    targets: tuple  # tuple of frozensets
    weights: tuple

    def __post_init__(self):
        if not self.targets:
            raise ValidationError("need at least one element")
        if len(self.weights) != len(self.targets):
            raise ValidationError("one weight per element required")
        if any(w < 0 for w in self.weights):
            raise ValidationError("weights must be nonnegative")

    @classmethod
    def unit(cls, targets) -> "CoveringProblem":
        targets = tuple(frozenset(B) for B in targets)
        return cls(targets, (1,) * len(targets))

    @property
    def n(self) -> int:
        return len(self.targets)

    @property
    def universe_size(self) -> int:
        out = set()
        for B in self.targets:
            out |= B
        return len(out)

    @property
    def common_intersection(self) -> frozenset:
        out = self.targets[0]
        for B in self.targets[1:]:
            out = out & B
        return frozenset(out)


class _Intersections:
    """Bitset-backed |intersection over U of B_i| with memoization."""

    def __init__(self, problem: CoveringProblem):
        elems = sorted(set().union(*problem.targets)) if problem.targets else []
        pos = {e: i for i, e in enumerate(elems)}
        self.full = (1 << len(elems)) - 1
        self.masks = [
            sum(1 << pos[e] for e in B) for B in problem.targets
        ]
        self._cache = {}

    def size(self, U: frozenset) -> int:
        key = 0
        for i in U:
            key |= 1 << i
        v = self._cache.get(key)
        if v is None:
            inter = self.full
            for i in U:
                inter &= self.masks[i]
            v = inter.bit_count()
            self._cache[key] = v
        return v


def _ordered(problem: CoveringProblem) -> List[int]:
    """Element order by descending weight, ties by ascending index."""
    return sorted(range(problem.n), key=lambda i: (-problem.weights[i], i))


def compute_potential_x(problem: CoveringProblem, M: int) -> List[int]:
    """Candidate solution with x(E) = M.

    Working in descending-weight order, each coordinate from the last down
    to the second is set to the minimum over sets U within its suffix that
    contain it of f(U) = M - |intersection over U| - x(U); the first
    coordinate absorbs the remaining slack.  The result satisfies every
    constraint whose complement avoids the heaviest element.
    """
    n = problem.n
    inter = _Intersections(problem)
    order = _ordered(problem)
    xo = [0] * n  # indexed by position in the weight order

    def f(posets: frozenset) -> int:
        # posets holds positions in the weight order
        U = frozenset(order[p] for p in posets)
        return M - inter.size(U) - sum(xo[p] for p in posets)

    for i in range(n - 1, 0, -1):
        ground = list(range(i + 1, n))
        oracle = SetFunctionOracle(
            len(ground), lambda sub, g=ground, i=i: f(frozenset({i} | {g[j] for j in sub}))
        )
        val, _ = sfm_min(oracle)
        xo[i] = int(val)
    xo[0] = M - sum(xo[1:])
    x = [0] * n
    for pos, elem in enumerate(order):
        x[elem] = xo[pos]
    return x


def check_feasible(problem: CoveringProblem, x: Sequence[int]) -> bool:
    """True iff x satisfies every covering constraint, assuming the suffix
    constraints already hold by construction.

    Remaining constraints are x(W) >= |intersection over E\\W| for nonempty
    W avoiding the heaviest element.  That left-minus-right difference is
    fully submodular in W (unlike the complement form with its value at E
    pinned, which is only crossing submodular and can defeat a generic
    minimizer), so one forced-element minimization per candidate element
    checks them all exactly.
    """
    n = problem.n
    if n == 1:
        return True
    inter = _Intersections(problem)
    order = _ordered(problem)
    rest = order[1:]

    def g(W: frozenset) -> int:
        comp = frozenset(range(n)) - W
        return sum(x[i] for i in W) - inter.size(comp)

    for pos in range(len(rest)):
        others = rest[:pos] + rest[pos + 1:]
        oracle = SetFunctionOracle(
            len(others),
            lambda sub, o=others, e=rest[pos]: g(frozenset({e} | {o[j] for j in sub})),
        )
        val, _ = sfm_min(oracle)
        if val < 0:
            return False
    return True


def solve_ilp_equality(problem: CoveringProblem, M: int) -> Optional[List[int]]:
    """Optimal integer solution with x(E) = M, or None if infeasible.

    Requires the targets to have empty common intersection.  Without
    that, a feasible level can be misclassified as infeasible (the
    potential construction can overshoot a suffix coordinate and the
    deficit cannot be reassigned), so the input is rejected up front.
    """
    if problem.n > 1 and problem.common_intersection:
        raise ValidationError(
            "target sets share a common element; the level solver is only "
            "complete for targets with empty common intersection"
        )
    if M < 0:
        return None
    if problem.n == 1:
        return [M]
    x = compute_potential_x(problem, M)
    if check_feasible(problem, x):
        return x
    return None


def _value(problem: CoveringProblem, x: Sequence[int]):
    return sum(w * v for w, v in zip(problem.weights, x))


def solve_ilp(problem: CoveringProblem) -> Tuple[List[int], int]:
    """Optimal integer solution over all levels M, with its level.

    Feasibility is monotone in M, so the least feasible level is found by
    bisection; with unit weights that level is itself optimal.  For
    general weights the optimal value is convex in M, so a binary descent
    over the feasible range locates the optimum.
    """
    n = problem.n
    lo = max((len(B) for B in problem.targets), default=0) if n > 1 else 0
    hi = max(lo, n * problem.universe_size)
    if solve_ilp_equality(problem, hi) is None:
        raise PropertyViolationError("covering problem infeasible at its upper bound")
    while lo < hi:  # least feasible M
        mid = (lo + hi) // 2
        if solve_ilp_equality(problem, mid) is None:
            lo = mid + 1
        else:
            hi = mid
    m_min = lo
    uniform = len(set(problem.weights)) == 1
    if uniform:
        return solve_ilp_equality(problem, m_min), m_min
    cache = {}

    def g(M):
        if M not in cache:
            cache[M] = solve_ilp_equality(problem, M)
        return _value(problem, cache[M])

    lo, hi = m_min, max(m_min, n * problem.universe_size)
    while lo < hi:  # binary descent on a convex sequence
        mid = (lo + hi) // 2
        if g(mid) <= g(mid + 1):
            hi = mid
        else:
            lo = mid + 1
    if lo not in cache:
        cache[lo] = solve_ilp_equality(problem, lo)
    return cache[lo], lo


def covering_constraints(problem: CoveringProblem):
    """Explicit (coeffs, rhs) rows over all nonempty proper subsets."""
    n = problem.n
    if n > MAX_LP_ELEMENTS:
        raise SizeGuardError(f"explicit constraint family needs n <= {MAX_LP_ELEMENTS}")
    inter = _Intersections(problem)
    rows = []
    for mask in range(1, (1 << n) - 1):
        U = [i for i in range(n) if mask >> i & 1]
        comp = frozenset(i for i in range(n) if not mask >> i & 1)
        coeffs = [Fraction(1 if mask >> i & 1 else 0) for i in range(n)]
        rows.append((coeffs, Fraction(inter.size(comp))))
    return rows


def lp_gap_check(problem: CoveringProblem) -> Tuple[int, Fraction]:
    """Integer optimum and exact LP relaxation optimum, unit weights only.

    Their difference is provably below one; a wider gap is a bug and is
    raised as a property violation.
    """
    if len(set(problem.weights)) != 1 or problem.weights[0] != 1:
        raise ValidationError("gap check is defined for unit weights")
    x, _ = solve_ilp(problem)
    ilp_value = int(_value(problem, x))
    if problem.n == 1:
        return ilp_value, Fraction(0)
    lp = ExactLP([Fraction(1)] * problem.n, covering_constraints(problem))
    lp_value, _ = lp.solve()
    if not ilp_value - lp_value < 1:
        raise PropertyViolationError(
            f"integrality gap {ilp_value - lp_value} is not below one"
        )
    return ilp_value, lp_value
