"""Secret-key and private-key capacities with concrete key extraction.

Capacities come from the clique solver: whatever entropy the transcript
must spend on recovery is lost to the eavesdropper, and the rest is key
material.  Keys are linear maps of the packet vector; perfect secrecy,
uniformity, and recoverability all reduce to exact rank conditions
because packets are i.i.d. uniform field symbols and every map in sight
is linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Tuple

from .coding import CodingScheme, verify_recovery
from .errors import PropertyViolationError, ValidationError
from .galois import GF2m, rref
from .instance import NetworkInstance, complete_graph
from .solver import solve_clique


@dataclass(frozen=True)
class SecrecySetup:
    """A fully connected instance plus the set of compromised nodes."""

    inst: NetworkInstance
    compromised: frozenset = dc_field(default_factory=frozenset)

    def __post_init__(self):
        if not self.inst.is_complete():
            raise ValidationError("secrecy analysis requires a fully connected network")
        bad = [i for i in self.compromised if not 0 <= i < self.inst.n]
        if bad:
            raise ValidationError(f"compromised node {bad[0]} out of range")
        if len(self.compromised) >= self.inst.n:
            raise ValidationError("at least one node must remain uncompromised")

    @property
    def exposed_packets(self) -> frozenset:
        """Packets known to some compromised node."""
        out = set()
        for i in self.compromised:
            out |= self.inst.holdings[i]
        return frozenset(out)


def reduced_instance(setup: SecrecySetup) -> NetworkInstance:
    """The residual network: compromised nodes and their packets removed,
    remaining nodes fully connected, packets relabeled densely."""
    exposed = setup.exposed_packets
    keep_packets = sorted(set(range(setup.inst.k)) - exposed)
    relabel = {p: idx for idx, p in enumerate(keep_packets)}
    keep_nodes = sorted(set(range(setup.inst.n)) - setup.compromised)
    holdings = tuple(
        frozenset(relabel[p] for p in setup.inst.holdings[i] if p not in exposed)
        for i in keep_nodes
    )
    m = len(keep_nodes)
    return NetworkInstance(
        n=m, k=len(keep_packets), edges=complete_graph(m), holdings=holdings
    )


def sk_capacity(setup: SecrecySetup) -> int:
    """Key symbols extractable against an eavesdropper who hears every
    transmission: packets minus the minimum recovery transmissions."""
    if setup.compromised:
        raise ValidationError("secret-key capacity assumes no compromised nodes")
    return setup.inst.k - solve_clique(setup.inst).value


def pk_capacity(setup: SecrecySetup) -> int:
    """Key symbols extractable when the compromised nodes' entire holdings
    are written off: solve the residual network and subtract."""
    if not setup.compromised:
        raise ValidationError("private-key capacity needs a compromised set")
    red = reduced_instance(setup)
    if red.k == 0:
        return 0
    return red.k - solve_clique(red).value


def post_recovery_private_capacity(
    setup: SecrecySetup, transcript_rows, field: GF2m
) -> int:
    """Key symbols still hidden once a public transcript is out and the
    compromised nodes' packets are exposed on top of it.

    This is the quantity behind statements like "after recovery, one
    compromised node kills the key": the clean private-key capacity is
    computed before any transcript exists, but once a recovery transcript
    is public, compromising a node can reveal the rest of the space.
    """
    rows = [list(r) for r in transcript_rows]
    rows += _indicator_rows(setup.inst.k, setup.exposed_packets)
    known = len(rref(field, rows)[0]) if rows else 0
    return setup.inst.k - known


@dataclass(frozen=True)
class KeyMap:
    """Linear key extractor: key = key_rows @ packets.

    transcript_rows spans everything the eavesdropper hears (coded
    transmissions, plus compromised nodes' packets in the private-key
    case).
    """

    field: GF2m
    k: int
    key_rows: tuple
    transcript_rows: tuple

    @property
    def key_size(self) -> int:
        return len(self.key_rows)


def _indicator_rows(k: int, packets) -> List[List[int]]:
    rows = []
    for p in sorted(packets):
        row = [0] * k
        row[p] = 1
        rows.append(row)
    return rows


def node_views(setup: SecrecySetup, keymap: KeyMap) -> Dict[int, List[List[int]]]:
    """Per relevant node: everything it knows at the end (own packets plus
    the full transcript)."""
    relevant = sorted(set(range(setup.inst.n)) - setup.compromised)
    views = {}
    for i in relevant:
        views[i] = _indicator_rows(setup.inst.k, setup.inst.holdings[i]) + [
            list(r) for r in keymap.transcript_rows
        ]
    return views


def extract_key(setup: SecrecySetup, scheme: CodingScheme) -> KeyMap:
    """Deterministic key map from a recovery-achieving scheme.

    The transcript row space is completed to the full packet space by
    unit vectors on its free coordinates (lowest index first); those unit
    vectors are the key rows.  All certificates are re-checked before
    returning.
    """
    inst = setup.inst
    if scheme.k != inst.k:
        raise ValidationError("scheme packet count does not match instance")
    f = scheme.field
    transcript = [list(c) for _, _, c in scheme.transmissions]
    transcript += _indicator_rows(inst.k, setup.exposed_packets)
    ok, ranks = verify_recovery(inst, scheme)
    if not ok:
        relevant = set(range(inst.n)) - setup.compromised
        if any(ranks[i] < inst.k for i in relevant):
            raise ValidationError("scheme does not achieve recovery for all key holders")
    reduced, pivots = rref(f, transcript) if transcript else ([], [])
    free_cols = [c for c in range(inst.k) if c not in set(pivots)]
    capacity = (
        sk_capacity(setup) if not setup.compromised else pk_capacity(setup)
    )
    if len(free_cols) > capacity:
        # scheme transmitted fewer independent rows than the optimum needs;
        # that cannot happen for a certified scheme
        raise PropertyViolationError(
            f"transcript rank {len(pivots)} below the recovery minimum"
        )
    key_rows = tuple(
        tuple(row) for row in _indicator_rows(inst.k, free_cols)
    )
    keymap = KeyMap(
        field=f,
        k=inst.k,
        key_rows=key_rows,
        transcript_rows=tuple(tuple(r) for r in transcript),
    )
    if not verify_secrecy(keymap, node_views(setup, keymap)):
        raise PropertyViolationError("extracted key failed its certificates")
    return keymap


def verify_secrecy(keymap: KeyMap, views: Dict[int, List[List[int]]]) -> bool:
    """Exact certificates for a linear key on uniform packets:

    * uniformity: the key rows are independent;
    * perfect secrecy: stacking the transcript on the key rows adds full
      key rank (no key information in the transcript);
    * recoverability: every provided view spans every key row.
    """
    f = keymap.field
    key = [list(r) for r in keymap.key_rows]
    transcript = [list(r) for r in keymap.transcript_rows]
    c = len(key)
    if c == 0:
        return True
    rank_key = len(rref(f, key)[0])
    if rank_key != c:
        return False
    rank_l = len(rref(f, transcript)[0]) if transcript else 0
    if len(rref(f, transcript + key)[0]) != rank_l + c:
        return False
    for rows in views.values():
        base_rank = len(rref(f, rows)[0]) if rows else 0
        if len(rref(f, rows + key)[0]) != base_rank:
            return False
    return True
