"""Factorising steps and their inverse projection.

A step spends a candidate family: every candidate set becomes one vertex
of a fresh top level, edges between a candidate's upper and lower parts
are removed, and the new vertex joins every member of its set.  The
projection drops the newest level and restores exactly those pairs that
lost their edge to a dropped vertex, which makes it an exact inverse of
any effective step.
"""

from __future__ import annotations

from bisect import bisect_left

from .core import (
    ContractError,
    IntegrityError,
    MultipartiteGraph,
    canonical_edge,
    level_blocks,
)
from .candidates import Candidate, CandidateFamily


class FactorStep:
    """Record of one factorising step: graphs before and after, and the family."""

    __slots__ = ("before", "family", "after", "new_vertices", "removed_count", "added_count")

    def __init__(
        self,
        before: MultipartiteGraph,
        family: CandidateFamily,
        after: MultipartiteGraph,
        new_vertices: dict[int, Candidate],
        removed_count: int,
        added_count: int,
    ):
        self.before = before
        self.family = family
        self.after = after
        self.new_vertices = new_vertices
        self.removed_count = removed_count
        self.added_count = added_count

    @property
    def effective(self) -> bool:
        return bool(self.family.members)

    @property
    def removed_edges(self) -> frozenset[tuple[int, int]]:
        """Edges cut between upper and lower parts.  Derived on demand."""
        out = set()
        for c in self.family.members:
            for y in c._u:
                for z in c._l:
                    out.add(canonical_edge(y, z))
        return frozenset(out)

    @property
    def added_edges(self) -> frozenset[tuple[int, int]]:
        """Edges joining each new vertex to its candidate set.  Derived on demand."""
        out = set()
        for x, c in self.new_vertices.items():
            for y in c.full_set:
                out.add(canonical_edge(x, y))
        return frozenset(out)

    def __repr__(self) -> str:
        return (
            f"FactorStep(k={self.family.k}, candidates={len(self.family.members)}, "
            f"removed={self.removed_count}, added={self.added_count})"
        )


def _split_levels_blocked(
    ids: tuple[int, ...], blocks: list[tuple[int, int]], top: int
) -> dict[int, frozenset[int]]:
    # ids ascending; level blocks are disjoint ascending ranges
    snap: dict[int, frozenset[int]] = {}
    for p in range(top):
        start, stop = blocks[p]
        a = bisect_left(ids, start)
        b = bisect_left(ids, stop)
        snap[p] = frozenset(ids[a:b])
    return snap


def _split_levels_generic(
    ids: tuple[int, ...], level_of: dict[int, int], top: int
) -> dict[int, frozenset[int]]:
    buckets: dict[int, list[int]] = {}
    for w in ids:
        buckets.setdefault(level_of[w], []).append(w)
    return {p: frozenset(buckets.get(p, ())) for p in range(top)}


def factorise(g: MultipartiteGraph, family: CandidateFamily) -> FactorStep:
    """Apply one factorising step.  An empty family leaves the graph alone."""
    top = g.top
    if family.k != top + 1:
        raise ContractError(
            f"family targets level {family.k} but the graph tops out at level {top}"
        )
    if not family.members:
        return FactorStep(g, family, g, {}, 0, 0)

    blocks = level_blocks(g)
    base = max(g._level_of) + 1
    top_level = g.levels[top]
    adj = g._adj

    new_vertices: dict[int, Candidate] = {}
    labels = dict(g.labels)
    snaps = dict(g.snapshots)
    rm: dict[int, set[int]] = {}
    add: dict[int, set[int]] = {}
    added_count = 0

    for i, c in enumerate(family.members):
        x = base + i
        if not c.upper <= top_level:
            raise ContractError(f"candidate upper part {sorted(c.upper)} leaves the top level")
        new_vertices[x] = c
        labels[x] = f"L{family.k}#{i}"
        added_count += len(c.full_set)
        if blocks is not None:
            snap = _split_levels_blocked(c._l, blocks, top)
        else:
            snap = _split_levels_generic(c._l, g._level_of, top)
        snap[top] = c.upper
        snaps[x] = snap
        for y in c._u:
            s = rm.get(y)
            if s is None:
                rm[y] = set(c._l)
            else:
                s.update(c._l)
        for z in c._l:
            s = rm.get(z)
            if s is None:
                rm[z] = set(c._u)
            else:
                s.update(c._u)
        for v in c.full_set:
            s = add.get(v)
            if s is None:
                add[v] = {x}
            else:
                s.add(x)

    removed_count = 0
    adj2 = dict(adj)
    for v, extra in add.items():
        old = adj2[v]
        cut = rm.get(v)
        if cut:
            if not cut <= old:
                raise IntegrityError(
                    f"candidate family removes edges absent at vertex {v}"
                )
            if v in top_level:
                removed_count += len(cut)
            adj2[v] = (old - cut) | extra
        else:
            adj2[v] = old | extra
    for x, c in new_vertices.items():
        adj2[x] = c.full_set

    levels2 = g.levels + (frozenset(range(base, base + len(family.members))),)
    after = MultipartiteGraph._assemble(
        levels2, labels, adj2, snaps, g.edge_count - removed_count + added_count
    )
    return FactorStep(g, family, after, new_vertices, removed_count, added_count)


def project(g: MultipartiteGraph) -> MultipartiteGraph:
    """Drop the top level and restore the edges its creation removed.

    A pair is restored only when one end sits at the new top level and the
    other below it, and both were adjacent to a common dropped vertex.
    Pairs inside lower levels were never cut by a factorising step, so
    re-adding them would invent edges.  With at least three levels this is
    the exact inverse of an effective step.
    """
    top = g.top
    if top < 2:
        raise ContractError("projection needs at least three levels")
    dropped = g.levels[top]
    new_top = g.levels[top - 1]
    adj = g._adj

    # only the dropped vertices' neighbours can lose edges; everything else
    # keeps its adjacency set by reference
    adj2 = dict(adj)
    removed_deg = 0
    touched: set[int] = set()
    for x in dropped:
        del adj2[x]
        nbrs = adj[x]
        removed_deg += len(nbrs)
        touched.update(nbrs)
    for v in touched:
        adj2[v] = adj[v] - dropped

    restore: dict[int, set[int]] = {}
    for x in dropped:
        members = adj[x]
        ups = members & new_top
        if not ups:
            continue
        lows = members - ups
        if not lows:
            continue
        for y in ups:
            s = restore.get(y)
            if s is None:
                restore[y] = set(lows)
            else:
                s.update(lows)
        for z in lows:
            s = restore.get(z)
            if s is None:
                restore[z] = set(ups)
            else:
                s.update(ups)

    delta = 0
    for v, extra in restore.items():
        old = adj2[v]
        merged = old | extra
        delta += len(merged) - len(old)
        adj2[v] = merged
    if delta % 2:
        raise IntegrityError("restored pairs are not symmetric")

    labels2 = dict(g.labels)
    snaps2 = dict(g.snapshots)
    for x in dropped:
        del labels2[x]
        snaps2.pop(x, None)
    return MultipartiteGraph._assemble(
        g.levels[:top],
        labels2,
        adj2,
        snaps2,
        g.edge_count - removed_deg + delta // 2,
    )
