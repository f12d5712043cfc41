"""Candidate neighbor-map graph: bounded closure, cycle pruning, OSC verdict.

A map h is a *candidate* when it is generated from the first-level maps
f_j^-1 f_k by transitions staying inside the ball |w|^2 <= bound (default
(2R)^2 with R = max |v_k|).  A candidate is *proper* exactly when a directed
cycle is reachable from it; the open set condition holds iff the identity
never shows up.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from collections import deque

import numpy as np

from . import backend
from .core import IDENTITY, IfsSystem, Isometry, neighbor_transition

DEFAULT_CANDIDATE_CEILING = 250_000
_COORD_LIMIT = 1 << 20  # kernel packing limit for |w| components


class ComplexityExceeded(Exception):
    """Candidate or state count blew past the configured ceiling."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


@dataclass(frozen=True)
class NeighborGraph:
    """Transition graph over candidate isometries (canonical vertex order).

    `edges` are (from, j, k, to) vertex-index tuples; `initial` are
    (j, k, to) transitions of the identity, drawn from a virtual root.
    `proper` is None until `prune_to_proper` has run; afterwards `edges`
    and `initial` are restricted to proper targets.
    """

    system: IfsSystem
    verts: tuple[Isometry, ...]
    edges: tuple[tuple[int, int, int, int], ...]
    initial: tuple[tuple[int, int, int], ...]
    bound: int
    proper: frozenset[int] | None = None
    id_index: int | None = None
    witness: tuple[tuple[int, int], ...] | None = None

    @property
    def candidate_count(self) -> int:
        return len(self.verts)

    @property
    def proper_count(self) -> int:
        return len(self.proper) if self.proper is not None else 0

    @property
    def osc_verdict(self) -> str:
        return "violated" if self.id_index is not None else "satisfied"

    @property
    def is_pruned(self) -> bool:
        return self.proper is not None

    def proper_verts(self) -> list[int]:
        """Proper vertex indices in canonical order."""
        if self.proper is None:
            raise ValueError("graph is not pruned")
        return sorted(self.proper)

    def adjacency_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR (indptr, targets) over all vertices, edge multiplicity kept."""
        n = len(self.verts)
        counts = np.zeros(n + 1, np.int64)
        for f, _, _, _ in self.edges:
            counts[f + 1] += 1
        indptr = np.cumsum(counts)
        targets = np.empty(len(self.edges), np.int32)
        fill = indptr[:-1].copy()
        for f, _, _, t in self.edges:
            targets[fill[f]] = t
            fill[f] += 1
        return indptr, targets


def _default_bound(sys: IfsSystem) -> int:
    return 4 * sys.radius_sq()


def build_candidate_graph(sys: IfsSystem, bound: int | None = None,
                          ceiling: int = DEFAULT_CANDIDATE_CEILING,
                          early_exit: bool = False) -> NeighborGraph:
    """Bounded breadth-first closure from the first-level neighbor maps."""
    if bound is None:
        bound = _default_bound(sys)
    if bound >= _COORD_LIMIT ** 2:
        raise ComplexityExceeded(
            f"translation bound {bound} exceeds the kernel coordinate range", 0)
    m = sys.m
    qs = np.array([f.q for f in sys.maps], np.int8)
    vre = np.array([f.re for f in sys.maps], np.int64)
    vim = np.array([f.im for f in sys.maps], np.int64)
    (vq, vr, vi, ef, ej, ek, et, par, pj, pk, id_idx, overflow) = \
        backend.impl().closure(m, qs, vre, vim, bound, ceiling, early_exit)
    if overflow:
        raise ComplexityExceeded(
            f"candidate count exceeded ceiling {ceiling}", int(len(vq)))

    witness = None
    if id_idx >= 0:
        path = []
        v = int(id_idx)
        while v != -1:
            path.append((int(pj[v]), int(pk[v])))
            v = int(par[v])
        witness = tuple(reversed(path))

    # canonical vertex order: sort by (q, re, im), remap indices
    n = len(vq)
    order = np.lexsort((vi, vr, vq))
    rank = np.empty(n, np.int64)
    rank[order] = np.arange(n)
    verts = tuple(Isometry(int(vq[i]), int(vr[i]), int(vi[i])) for i in order)
    edges = sorted((int(rank[f]), int(j), int(k), int(rank[t]))
                   for f, j, k, t in zip(ef, ej, ek, et))
    vert_index = {v.key(): i for i, v in enumerate(verts)}
    initial = tuple(
        (j, k, vert_index[neighbor_transition(IDENTITY, j, k, sys).key()])
        for j in range(m) for k in range(m) if j != k)
    new_id_index = int(rank[id_idx]) if id_idx >= 0 else None

    return NeighborGraph(system=sys, verts=verts, edges=tuple(edges),
                         initial=initial, bound=bound,
                         id_index=new_id_index, witness=witness)


def prune_to_proper(g: NeighborGraph) -> NeighborGraph:
    """Keep vertices from which a directed cycle is reachable.

    The attractor copies of exactly these maps meet the attractor, so the
    pruned core is the true proper-neighbor set.  Edges and initial edges
    are restricted to proper endpoints.
    """
    n = len(g.verts)
    if n == 0:
        return replace(g, proper=frozenset(), edges=(), initial=())
    indptr, targets = g.adjacency_csr()
    labels, nc = backend.impl().scc_labels(n, indptr, targets)
    size = np.bincount(labels, minlength=nc)
    nontrivial = np.zeros(nc, bool)
    nontrivial[size >= 2] = True
    for f, _, _, t in g.edges:
        if f == t:
            nontrivial[labels[f]] = True
    # reverse reachability from every vertex sitting in a cyclic component
    radj: list[list[int]] = [[] for _ in range(n)]
    for f, _, _, t in g.edges:
        radj[t].append(f)
    proper = [bool(nontrivial[labels[v]]) for v in range(n)]
    queue = deque(v for v in range(n) if proper[v])
    while queue:
        v = queue.popleft()
        for w in radj[v]:
            if not proper[w]:
                proper[w] = True
                queue.append(w)
    pset = frozenset(v for v in range(n) if proper[v])
    edges = tuple(e for e in g.edges if e[0] in pset and e[3] in pset)
    initial = tuple(e for e in g.initial if e[2] in pset)
    return replace(g, proper=pset, edges=edges, initial=initial)


@dataclass(frozen=True)
class OscReport:
    verdict: str
    identity_witness_path: tuple[tuple[int, int], ...] | None
    proper_count: int
    candidate_count: int


def osc_check(sys: IfsSystem, ceiling: int = DEFAULT_CANDIDATE_CEILING,
              early_exit: bool = False) -> OscReport:
    """Decide the open set condition: violated iff the identity is generated."""
    g = build_candidate_graph(sys, ceiling=ceiling, early_exit=early_exit)
    pruned = prune_to_proper(g)
    return OscReport(verdict=g.osc_verdict,
                     identity_witness_path=g.witness,
                     proper_count=pruned.proper_count,
                     candidate_count=g.candidate_count)


def replay_witness(sys: IfsSystem, path) -> Isometry:
    """Apply a label sequence to the identity through neighbor transitions."""
    h = IDENTITY
    for j, k in path:
        h = neighbor_transition(h, j, k, sys)
    return h


def _node_name(i: int) -> str:
    return f"n{i}"


def to_dot(g: NeighborGraph) -> str:
    """DOT text of the graph core: proper subgraph if pruned, else everything.

    Vertices come out in canonical (q, re, im) order; initial edges hang off
    a virtual root named "id".
    """
    shown = g.proper_verts() if g.is_pruned else list(range(len(g.verts)))
    keep = set(shown)
    lines = ["digraph neighbors {", '  id [shape=point, label="id"];']
    for i in shown:
        lines.append(f'  {_node_name(i)} [label="{g.verts[i].formula()}"];')
    for j, k, t in g.initial:
        if t in keep:
            lines.append(f'  id -> {_node_name(t)} [label="{j},{k}"];')
    for f, j, k, t in g.edges:
        if f in keep and t in keep:
            lines.append(f'  {_node_name(f)} -> {_node_name(t)} [label="{j},{k}"];')
    lines.append("}")
    return "\n".join(lines)


def to_json_graph(g: NeighborGraph) -> dict:
    proper = g.proper if g.proper is not None else frozenset()
    return {
        "nodes": [{"q": v.q, "re": v.re, "im": v.im, "proper": i in proper}
                  for i, v in enumerate(g.verts)],
        "edges": [{"from": f, "to": t, "j": j, "k": k} for f, j, k, t in g.edges],
        "initial": [{"j": j, "k": k, "to": t} for j, k, t in g.initial],
    }
