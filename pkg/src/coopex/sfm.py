"""Submodular function minimization via the min-norm-point method.

The minimizer of a submodular function is recovered from the sign
pattern of the minimum-norm point of its base polytope (Fujishige-Wolfe).
Candidate sets are re-evaluated through the oracle, so returned values
are exact even though the geometry runs in floating point.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from .errors import CoopexError, ValidationError

MAX_MAJOR_CYCLES = 10**5
_ZERO_TOL = 1e-6  # snap threshold in the affine-minimization substep


class SfmConvergenceError(CoopexError):
    """Min-norm-point iteration exceeded its cycle cap."""


class SetFunctionOracle:
    """Evaluatable set function on subsets of ``range(n)``.

    Submodularity is the caller's contract.  Evaluations are memoized by
    bitmask for the lifetime of the oracle, so callers whose function
    changes (e.g. a potential vector being threaded through an outer
    algorithm) must create a fresh oracle per configuration.
    """

    def __init__(self, n: int, fn: Callable[[frozenset], float], name: str = ""):
        self.n = n
        self.name = name
        self._fn = fn
        self._cache = {}

    def value(self, subset: Iterable[int]) -> float:
        return self.value_mask(_mask_of(subset))

    def value_mask(self, mask: int) -> float:
        v = self._cache.get(mask)
        if v is None:
            v = self._fn(_set_of(mask))
            self._cache[mask] = v
        return v


def _mask_of(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << int(i)
    return m


def _set_of(mask: int) -> frozenset:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return frozenset(out)


def greedy_base_vertex(oracle: SetFunctionOracle, ordering: Sequence[int]) -> np.ndarray:
    """Edmonds' greedy vertex of the base polytope for one ordering:
    marginal gains of the elements along the given permutation."""
    if sorted(ordering) != list(range(oracle.n)):
        raise ValidationError("ordering must be a permutation of the ground set")
    q = np.zeros(oracle.n)
    mask = 0
    prev = oracle.value_mask(0)
    for i in ordering:
        i = int(i)
        mask |= 1 << i
        cur = oracle.value_mask(mask)
        q[i] = cur - prev
        prev = cur
    return q


def _affine_minimizer(S: np.ndarray):
    """Point of minimum norm in the affine hull of the rows of S.

    Returns (coefficients, point); coefficients sum to 1.  Parametrized
    relative to the first row (point = s0 + b @ (S[1:] - s0)) so the
    sum-to-one constraint is built in and the least-squares solve stays
    well-scaled for large-norm vertices.
    """
    m = S.shape[0]
    if m == 1:
        return np.ones(1), S[0].copy()
    s0 = S[0]
    D = S[1:] - s0
    b = np.linalg.lstsq(D.T, -s0, rcond=None)[0]
    a = np.empty(m)
    a[1:] = b
    a[0] = 1.0 - b.sum()
    return a, a @ S


def min_norm_point(oracle: SetFunctionOracle, tol: float = 1e-9) -> np.ndarray:
    """Minimum-norm point of the base polytope of the oracle, normalized
    so the empty set evaluates to zero."""
    n = oracle.n

    # greedy marginals are differences against f(empty), so the polytope
    # is already that of f - f(empty); no further normalization needed
    greedy = lambda order: greedy_base_vertex(oracle, order)

    x = greedy(list(range(n)))
    S = x.reshape(1, -1).copy()
    lam = np.array([1.0])
    for _ in range(MAX_MAJOR_CYCLES):
        order = np.lexsort((np.arange(n), x))  # ascending value, ties by index
        q = greedy(list(order))
        xx = float(x @ x)
        if xx - float(x @ q) <= tol * max(1.0, xx):
            return x
        if ((S - q) ** 2).sum(axis=1).min() <= 1e-18:
            return x  # vertex already present; no further progress possible
        S = np.vstack([S, q])
        lam = np.append(lam, 0.0)
        while True:  # minor cycles
            a, y = _affine_minimizer(S)
            a = np.where(np.isfinite(a), a, -1.0)  # degenerate solve: drop below
            if (a > _ZERO_TOL).all():
                lam, x = a, y
                break
            shrink = a < _ZERO_TOL
            denom = lam - a
            valid = shrink & (denom > 1e-12)
            if valid.any():
                theta = min(1.0, float((lam[valid] / denom[valid]).min()))
                lam = lam + theta * (a - lam)
            else:
                # shrinking weights are already ~0; remove those vertices
                lam = np.where(shrink, 0.0, lam)
            keep = lam > _ZERO_TOL
            if not keep.any():
                keep[int(np.argmax(lam))] = True
            S = S[keep]
            lam = lam[keep]
            tot = lam.sum()
            lam = lam / tot if tot > 1e-12 else np.full(len(lam), 1.0 / len(lam))
            x = lam @ S
    raise SfmConvergenceError("min-norm point failed to converge")


def sfm_min(oracle: SetFunctionOracle) -> Tuple[float, frozenset]:
    """Global minimum of the oracle over all subsets, with one minimizer.

    The min-norm point supplies candidate level sets; each candidate is
    evaluated exactly through the oracle and the best kept, so integer
    oracles give exact integer minima.
    """
    n = oracle.n
    if n == 0:
        return oracle.value_mask(0), frozenset()
    x = min_norm_point(oracle)
    order = np.lexsort((np.arange(n), x))
    candidates = {0}
    mask = 0
    for i in order:
        mask |= 1 << int(i)
        candidates.add(mask)
    candidates.add(_mask_of(np.flatnonzero(x < -_ZERO_TOL)))
    candidates.add(_mask_of(np.flatnonzero(x <= _ZERO_TOL)))
    best_mask = min(candidates, key=lambda m: (oracle.value_mask(m), m))
    return oracle.value_mask(best_mask), _set_of(best_mask)


def sfm_min_bruteforce(oracle: SetFunctionOracle) -> Tuple[float, frozenset]:
    """Exhaustive scan over all subsets; validation oracle for sfm_min."""
    if oracle.n > 22:
        raise ValidationError("brute-force scan limited to 22 elements")
    best_mask = min(
        range(1 << oracle.n), key=lambda m: (oracle.value_mask(m), m)
    )
    return oracle.value_mask(best_mask), _set_of(best_mask)


def restrict_with_base(
    oracle_fn: Callable[[frozenset], float], ground: Sequence[int], base: frozenset
) -> SetFunctionOracle:
    """Oracle for U |-> fn(base | map(U)) over a relabeled sub-ground-set.

    ``ground`` lists the original element labels; positions in the new
    oracle map back to them.
    """
    ground = list(ground)

    def fn(subset):
        return oracle_fn(base | frozenset(ground[i] for i in subset))

    return SetFunctionOracle(len(ground), fn)
