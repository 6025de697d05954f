"""Partitions of all q-subsets of [qt] into perfect matchings.

The general construction adds one vertex at a time.  Every matching holds t
partial blocks (some possibly empty); after vertex i the number of blocks
equal to a given ``S <= [i]``, over all matchings, is ``C(qt - i, q - |S|)``.
To add vertex i + 1 each matching extends exactly one block, chosen by an
integral maximum flow

    source -> matching (1) -> block class S (copies of S there) -> sink (C(qt-i-1, q-|S|-1)).

A fractional flow saturating the source exists, so an integral one does too.
For q = 2 the classical round-robin schedule is used instead.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import comb
from pathlib import Path

import networkx as nx

from .core import full_mask
from .errors import CapacityError, DomainError

MAX_QT = 24
MAX_EDGES = 200_000


@dataclass(frozen=True)
class Decomposition:
    q: int
    t: int
    matchings: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.matchings)


def _check(q: int, t: int) -> None:
    if q < 1 or t < 1:
        raise DomainError(f"need q, t >= 1, got q={q}, t={t}")
    if q * t > MAX_QT or comb(q * t, q) > MAX_EDGES:
        raise CapacityError(f"C({q * t},{q}) is beyond the decomposition capacity")


def _round_robin(t: int) -> list[list[int]]:
    """One-factorization of K_2t: vertex 2t-1 sits at the hub."""
    k = 2 * t - 1
    rounds = []
    for r in range(k):
        edges = [(1 << r) | (1 << k)]
        for j in range(1, t):
            edges.append((1 << ((r + j) % k)) | (1 << ((r - j) % k)))
        rounds.append(edges)
    return rounds


def _flow_construction(q: int, t: int) -> list[list[int]]:
    qt = q * t
    count = comb(qt - 1, q - 1)
    blocks = [[0] * t for _ in range(count)]
    # integer node labels keep the flow independent of string hash seeds
    src, snk = 0, 1
    for i in range(qt):
        bit = 1 << i
        G = nx.DiGraph()
        classes: dict[int, int] = {}
        node = {}
        for j, row in enumerate(blocks):
            G.add_edge(src, 2 + j, capacity=1)
            for S, c in sorted(Counter(b for b in row if b.bit_count() < q).items()):
                if S not in node:
                    node[S] = 2 + count + len(node)
                G.add_edge(2 + j, node[S], capacity=c)
                classes[S] = comb(qt - i - 1, q - S.bit_count() - 1)
        for S, cap in sorted(classes.items()):
            G.add_edge(node[S], snk, capacity=cap)
        value, flow = nx.maximum_flow(G, src, snk)
        if value != count:
            raise AssertionError("integral flow failed to saturate the matchings")
        label = {v: S for S, v in node.items()}
        for j, row in enumerate(blocks):
            target = label[min(v for v, f in flow[2 + j].items() if f == 1)]
            row[row.index(target)] |= bit
    return blocks


def decompose(q: int, t: int) -> Decomposition:
    """Partition of all q-subsets of [qt] into C(qt-1, q-1) perfect matchings."""
    _check(q, t)
    if q == 1:
        raw = [[1 << i for i in range(t)]]
    elif q == 2:
        raw = _round_robin(t)
    else:
        raw = _flow_construction(q, t)
    matchings = sorted(tuple(sorted(row)) for row in raw)
    return Decomposition(q, t, tuple(matchings))


def verify_decomposition(D: Decomposition) -> tuple[bool, str]:
    """(True, "ok") or (False, first violated property)."""
    q, t = D.q, D.t
    if q < 1 or t < 1:
        return False, "q and t must be positive"
    full = full_mask(q * t)
    expected = comb(q * t - 1, q - 1)
    seen: set[int] = set()
    for idx, M in enumerate(D.matchings):
        cover = 0
        for e in M:
            if e & ~full or e.bit_count() != q:
                return False, f"matching {idx} holds {e:x}, not a {q}-subset of [{q * t}]"
            if e & cover:
                return False, f"matching {idx} is not pairwise disjoint"
            cover |= e
            if e in seen:
                return False, "edge covered twice"
            seen.add(e)
        if cover != full:
            return False, "not perfect"
    if len(D.matchings) != expected:
        return False, f"{len(D.matchings)} matchings, expected {expected}"
    if len(seen) != comb(q * t, q):
        return False, "some edge is not covered"
    return True, "ok"


def to_json(D: Decomposition) -> str:
    doc = {"q": str(D.q), "t": str(D.t),
           "matchings": [[format(e, "x") for e in M] for M in D.matchings]}
    return json.dumps(doc, indent=1) + "\n"


def from_json(text: str) -> Decomposition:
    doc = json.loads(text)
    try:
        mats = tuple(tuple(int(h, 16) for h in M) for M in doc["matchings"])
        return Decomposition(int(doc["q"]), int(doc["t"]), mats)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed decomposition document: {exc}")


def write_decomposition(D: Decomposition, path) -> None:
    Path(path).write_text(to_json(D))


def read_decomposition(path) -> Decomposition:
    return from_json(Path(path).read_text())
