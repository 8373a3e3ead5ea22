"""Exact integer max-flow (Dinic) on directed capacitated graphs.

The inner loops are numba-compiled so that bulk certification (millions
of small flow problems, or one large layered graph) stays fast.  Infinite
capacities are carried symbolically (math.inf) and realized as a finite
stand-in at solve time; the stand-in only needs to exceed the largest
threshold ever queried.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Tuple

import numpy as np
from numba import njit

from .errors import ValidationError

INFINITE = math.inf


@dataclass
class FlowNetwork:
    """Directed graph with integer (or symbolically infinite) capacities."""

    nodes: List[Hashable]
    arcs: List[Tuple[Hashable, Hashable, float]]
    source: Hashable
    infinite_value: int

    _index: Dict[Hashable, int] = field(default_factory=dict, repr=False)
    _compiled: tuple = field(default=None, repr=False)

    def node_id(self, label) -> int:
        if not self._index:
            self._index = {v: i for i, v in enumerate(self.nodes)}
        return self._index[label]

    def compiled(self):
        """Adjacency arrays (head, nxt, to, cap) with paired reverse arcs."""
        if self._compiled is None:
            n = len(self.nodes)
            m = len(self.arcs)
            head = np.full(n, -1, dtype=np.int64)
            nxt = np.full(2 * m, -1, dtype=np.int64)
            to = np.zeros(2 * m, dtype=np.int64)
            cap = np.zeros(2 * m, dtype=np.int64)
            for a, (u, v, c) in enumerate(self.arcs):
                ui, vi = self.node_id(u), self.node_id(v)
                ci = self.infinite_value if c is INFINITE else int(c)
                if ci < 0:
                    raise ValidationError(f"negative capacity on arc {u}->{v}")
                e = 2 * a
                to[e], cap[e] = vi, ci
                nxt[e] = head[ui]
                head[ui] = e
                to[e + 1], cap[e + 1] = ui, 0
                nxt[e + 1] = head[vi]
                head[vi] = e + 1
            self._compiled = (head, nxt, to, cap)
        return self._compiled


@njit(cache=True)
def _dinic(head, nxt, to, cap, s, t, limit):  # pragma: no cover - compiled
    n = head.shape[0]
    level = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    cur = np.empty(n, dtype=np.int64)
    path = np.empty(n + 1, dtype=np.int64)
    flow = 0
    while flow < limit:
        for i in range(n):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        if level[t] < 0:
            break
        for i in range(n):
            cur[i] = head[i]
        u = s
        plen = 0
        while True:
            if u == t:
                bott = limit - flow
                for idx in range(plen):
                    r = cap[path[idx]]
                    if r < bott:
                        bott = r
                for idx in range(plen):
                    e = path[idx]
                    cap[e] -= bott
                    cap[e ^ 1] += bott
                flow += bott
                if flow >= limit:
                    break
                keep = 0
                while keep < plen and cap[path[keep]] > 0:
                    keep += 1
                plen = keep
                u = s if plen == 0 else to[path[plen - 1]]
                continue
            e = cur[u]
            advanced = False
            while e != -1:
                v = to[e]
                if cap[e] > 0 and level[v] == level[u] + 1:
                    path[plen] = e
                    plen += 1
                    u = v
                    advanced = True
                    break
                e = nxt[e]
                cur[u] = e
            if not advanced:
                level[u] = -1
                if u == s:
                    break
                plen -= 1
                u = s if plen == 0 else to[path[plen - 1]]
    return flow


@njit(cache=True)
def _residual_reachable(head, nxt, to, cap, s):  # pragma: no cover - compiled
    n = head.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    seen[s] = True
    stack[0] = s
    top = 1
    while top:
        top -= 1
        u = stack[top]
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0 and not seen[v]:
                seen[v] = True
                stack[top] = v
                top += 1
            e = nxt[e]
    return seen


def max_flow(net: FlowNetwork, source, target) -> int:
    """Exact max-flow value from source to target."""
    flow, _ = max_flow_with_residual(net, source, target)
    return flow


def max_flow_with_residual(net: FlowNetwork, source, target, limit=None):
    """Max-flow value plus the set of node labels reachable from the
    source in the residual graph.

    With a ``limit``, augmentation stops once the flow reaches it; the
    residual reachability is then a min cut only if the returned flow is
    below the limit (the flow was naturally exhausted).
    """
    head, nxt, to, cap0 = net.compiled()
    cap = cap0.copy()
    s, t = net.node_id(source), net.node_id(target)
    if limit is None:
        limit = int(cap0[::2].sum()) + 1  # effectively uncapped
    flow = int(_dinic(head, nxt, to, cap, s, t, limit))
    seen = _residual_reachable(head, nxt, to, cap, s)
    reachable = {net.nodes[i] for i in np.flatnonzero(seen)}
    return flow, reachable
