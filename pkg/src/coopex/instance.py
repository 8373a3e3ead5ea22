"""Problem instances: topology, packet holdings, and random generation.

A problem instance couples an undirected connected graph with, for each
node, the set of packet indices that node starts with.  Nodes and packets
are 0-based in memory; the JSON file format is 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import SizeGuardError, ValidationError

MAX_ENUM_NODES = 12
_RESAMPLE_CAP = 10**6


@dataclass(frozen=True)
class NetworkInstance:
    """Immutable network: ``n`` nodes, ``k`` packets, edges, holdings.

    ``edges`` is a frozenset of ``(i, j)`` pairs with ``i < j`` (no
    self-loops).  ``holdings[i]`` is the frozenset of packet indices node
    ``i`` starts with.
    """

    n: int
    k: int
    edges: frozenset
    holdings: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("need at least one node")
        if self.k < 0:
            raise ValidationError("packet count must be nonnegative")
        if len(self.holdings) != self.n:
            raise ValidationError("holdings must list one packet set per node")
        for i, j in self.edges:
            if i == j:
                raise ValidationError(f"self-loop on node {i}")
            if not (0 <= i < j < self.n):
                raise ValidationError(f"edge ({i},{j}) out of range or unordered")
        covered = set()
        for p in self.holdings:
            bad = [x for x in p if not 0 <= x < self.k]
            if bad:
                raise ValidationError(f"packet index {bad[0]} out of range")
            covered.update(p)
        if covered != set(range(self.k)):
            missing = sorted(set(range(self.k)) - covered)
            raise ValidationError(f"packets held by nobody: {missing}")
        if not self._connected():
            raise ValidationError("graph is not connected")

    def _connected(self) -> bool:
        if self.n == 1:
            return True
        adj = {i: set() for i in range(self.n)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == self.n

    @cached_property
    def neighbors(self) -> tuple:
        """``neighbors[i]`` is the closed neighborhood of node ``i`` (includes i)."""
        nbrs = [{i} for i in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def neighbor_masks(self) -> tuple:
        """Closed neighborhoods as bitmasks, for enumeration loops."""
        return tuple(sum(1 << j for j in nb) for nb in self.neighbors)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i]) - 1

    def missing(self, i: int) -> frozenset:
        """Packets node ``i`` starts without."""
        return frozenset(range(self.k)) - self.holdings[i]

    def jointly_missing(self, nodes: Iterable[int]) -> frozenset:
        """Packets missing from every node in ``nodes``."""
        out = set(range(self.k))
        for i in nodes:
            out &= self.missing(i)
        return frozenset(out)

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class SetSequence:
    """A nested node-set sequence ``(S_0, ..., S_r)``.

    Every set is a nonempty proper subset of the vertex set, each set
    contains its predecessor, and each set is contained in the closed
    neighborhood of its predecessor.
    """

    sets: tuple

    @property
    def rounds(self) -> int:
        return len(self.sets) - 1


@dataclass(frozen=True)
class RandomModel:
    """Availability probability and RNG seed for random instances."""

    q: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValidationError("availability probability must be in (0, 1)")


# ---------------------------------------------------------------------------
# topology constructors


def line_graph(n: int) -> frozenset:
    return frozenset((i, i + 1) for i in range(n - 1))


def cycle_graph(n: int) -> frozenset:
    if n < 3:
        raise ValidationError("cycle needs at least 3 nodes")
    return frozenset((i, i + 1) for i in range(n - 1)) | {(0, n - 1)}


def complete_graph(n: int) -> frozenset:
    return frozenset((i, j) for i in range(n) for j in range(i + 1, n))


def circulant_graph(n: int, offsets: Sequence[int]) -> frozenset:
    """Circulant graph: node i adjacent to i +/- each offset (mod n)."""
    edges = set()
    for i in range(n):
        for off in offsets:
            j = (i + off) % n
            if i != j:
                edges.add((min(i, j), max(i, j)))
    return frozenset(edges)


def torus_grid_graph(rows: int, cols: int) -> frozenset:
    """Grid on a torus; 4-regular when both dimensions exceed 2."""
    edges = set()

    def nid(r, c):
        return r * cols + c

    for r in range(rows):
        for c in range(cols):
            a = nid(r, c)
            for b in (nid(r, (c + 1) % cols), nid((r + 1) % rows, c)):
                if a != b:
                    edges.add((min(a, b), max(a, b)))
    return frozenset(edges)


def is_d_regular(inst: NetworkInstance, d: int) -> bool:
    """True if every node has degree d and every small vertex set has
    boundary at least d (i.e. the graph is d-vertex-connected)."""
    if any(inst.degree(i) != d for i in range(inst.n)):
        return False
    if inst.n > 16:
        raise SizeGuardError("regularity check enumerates subsets; need n <= 16")
    for mask in range(1, 1 << inst.n):
        S = [i for i in range(inst.n) if mask >> i & 1]
        if 0 < len(S) <= inst.n - d and len(boundary(inst, S)) < d:
            return False
    return True


# ---------------------------------------------------------------------------
# neighborhood operations


def neighborhood(inst: NetworkInstance, S: Iterable[int]) -> frozenset:
    """Union of closed neighborhoods of the nodes in S (empty S -> empty)."""
    out = set()
    for i in S:
        out |= inst.neighbors[i]
    return frozenset(out)


def boundary(inst: NetworkInstance, S: Iterable[int]) -> frozenset:
    """Nodes adjacent to S but not in S."""
    S = frozenset(S)
    return neighborhood(inst, S) - S


def _sequence_masks(inst: NetworkInstance, r: int) -> Iterator[tuple]:
    """Yield valid sequences as tuples of bitmasks (internal fast path)."""
    full = (1 << inst.n) - 1
    nbr = inst.neighbor_masks

    def gamma(mask):
        out = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            out |= nbr[i]
            m &= m - 1
        return out

    def extend(prefix):
        if len(prefix) == r + 1:
            yield tuple(prefix)
            return
        s = prefix[-1]
        g = gamma(s)
        free = g & ~s
        # enumerate all T with s <= T <= gamma(s), T proper
        sub = 0
        while True:
            t = s | sub
            if t != full:
                prefix.append(t)
                yield from extend(prefix)
                prefix.pop()
            if sub == free:
                break
            sub = (sub - free) & free
    for s0 in range(1, full):
        yield from extend([s0])


def enumerate_sequences(inst: NetworkInstance, r: int) -> Iterator[SetSequence]:
    """Yield every valid nested set sequence of length r+1 exactly once.

    All sets are nonempty proper vertex subsets; sequences are nested and
    neighborhood-bounded.  Guarded to small node counts since the count
    grows exponentially.
    """
    if r < 1:
        raise ValidationError("round count must be at least 1")
    if inst.n > MAX_ENUM_NODES:
        raise SizeGuardError(
            f"sequence enumeration needs n <= {MAX_ENUM_NODES}, got {inst.n}"
        )
    for masks in _sequence_masks(inst, r):
        yield SetSequence(
            tuple(frozenset(i for i in range(inst.n) if m >> i & 1) for m in masks)
        )


# ---------------------------------------------------------------------------
# random instances


def random_instance(
    n: int, k: int, model: RandomModel, topology: frozenset
) -> NetworkInstance:
    """Draw holdings i.i.d. across packets: node membership Bernoulli(q),
    rejection-resampled until each packet has at least one holder."""
    if n < 2:
        raise ValidationError("need at least two nodes")
    if k < 1:
        raise ValidationError("need at least one packet")
    rng = np.random.default_rng(model.seed)
    holders = [set() for _ in range(n)]
    for p in range(k):
        for attempt in range(_RESAMPLE_CAP):
            draw = rng.random(n) < model.q
            if draw.any():
                break
        else:
            raise CoopexInternal(f"resample cap hit for packet {p}")
        for i in np.flatnonzero(draw):
            holders[int(i)].add(p)
    return NetworkInstance(
        n=n, k=k, edges=frozenset(topology),
        holdings=tuple(frozenset(h) for h in holders),
    )


class CoopexInternal(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# file I/O (1-based on disk)


def save_instance(inst: NetworkInstance, path) -> None:
    doc = {
        "n": inst.n,
        "k": inst.k,
        "edges": [[i + 1, j + 1] for i, j in sorted(inst.edges)],
        "holdings": [sorted(p + 1 for p in held) for held in inst.holdings],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_instance(path) -> NetworkInstance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed instance file: {exc}") from exc
    for key in ("n", "k", "edges", "holdings"):
        if key not in doc:
            raise ValidationError(f"instance file missing field {key!r}")
    edges = frozenset(
        (min(i, j) - 1, max(i, j) - 1) for i, j in doc["edges"]
    )
    holdings = tuple(frozenset(p - 1 for p in held) for held in doc["holdings"])
    return NetworkInstance(n=doc["n"], k=doc["k"], edges=edges, holdings=holdings)
