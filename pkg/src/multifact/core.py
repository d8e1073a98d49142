"""Levelled graph model: simple graphs, multipartite graphs, creation snapshots.

Vertices are dense integer ids paired with a label table.  Ids stay stable
across decomposition steps; each step only appends fresh ids for its new
top level, so in pipeline-built graphs every level occupies a contiguous
id block.  Decompositions of moderately dense graphs run to tens of
thousands of vertices, so construction keeps adjacency as shared frozensets
and only materialises the flat edge set on demand.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class ContractError(ValueError):
    """An operation was invoked outside its documented contract."""


class IntegrityError(RuntimeError):
    """A guarantee that should hold by construction was violated."""


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ContractError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Finite simple undirected graph on dense integer vertices 0..n-1."""

    __slots__ = ("labels", "edges", "_adj")

    def __init__(self, labels: Iterable[str], edges: Iterable[tuple[int, int]]):
        self.labels: tuple[str, ...] = tuple(labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ContractError("vertex labels must be unique")
        adj: list[set[int]] = [set() for _ in range(n)]
        canon: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u}, {v}) references an unknown vertex")
            u, v = canonical_edge(u, v)
            canon.add((u, v))
            adj[u].add(v)
            adj[v].add(u)
        self.edges: frozenset[tuple[int, int]] = frozenset(canon)
        self._adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)

    @classmethod
    def from_edge_list(
        cls,
        edges: Iterable[tuple[str, str]],
        extra_vertices: Iterable[str] = (),
    ) -> "Graph":
        """Build a graph from labelled edges.  Ids follow sorted label order."""
        edges = list(edges)
        labels = sorted({x for e in edges for x in e} | set(extra_vertices))
        index = {lab: i for i, lab in enumerate(labels)}
        return cls(labels, [(index[a], index[b]) for a, b in edges])

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    def vertices(self) -> range:
        return range(len(self.labels))

    def neighbours(self, x: int) -> frozenset[int]:
        if not (0 <= x < len(self.labels)):
            raise KeyError(x)
        return self._adj[x]

    def label_set(self, xs: Iterable[int]) -> frozenset[str]:
        return frozenset(self.labels[x] for x in xs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.labels, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={len(self.labels)}, m={len(self.edges)})"


class MultipartiteGraph:
    """Levelled graph whose edges connect distinct levels only.

    ``snapshots[x][j]`` records the level-j neighbourhood a vertex ``x``
    (level >= 1) had when its level was created.  Later steps may remove
    edges incident to ``x`` but never rewrite the snapshot.
    """

    __slots__ = ("levels", "labels", "snapshots", "_adj", "_level_of", "_edge_count", "_edges")

    def __init__(
        self,
        levels: Iterable[Iterable[int]],
        labels: Mapping[int, str],
        edges: Iterable[tuple[int, int]],
        snapshots: Mapping[int, Mapping[int, Iterable[int]]] | None = None,
    ):
        self.levels: tuple[frozenset[int], ...] = tuple(frozenset(lv) for lv in levels)
        if not self.levels:
            raise ContractError("a multipartite graph needs at least one level")
        level_of: dict[int, int] = {}
        for i, lv in enumerate(self.levels):
            for x in lv:
                if x in level_of:
                    raise ContractError(f"vertex {x} appears in more than one level")
                level_of[x] = i
        self._level_of = level_of
        self.labels: dict[int, str] = {x: str(labels[x]) for x in level_of}
        if len(set(self.labels.values())) != len(self.labels):
            raise ContractError("vertex labels must be unique")

        adj: dict[int, set[int]] = {x: set() for x in level_of}
        count = 0
        for u, v in edges:
            if u not in level_of or v not in level_of:
                raise ContractError(f"edge ({u}, {v}) references an unknown vertex")
            if level_of[u] == level_of[v]:
                raise ContractError(f"edge ({u}, {v}) joins two level-{level_of[u]} vertices")
            if u == v:
                raise ContractError(f"self-loop at vertex {u}")
            if v not in adj[u]:
                count += 1
                adj[u].add(v)
                adj[v].add(u)
        self._adj: dict[int, frozenset[int]] = {x: frozenset(s) for x, s in adj.items()}
        self._edge_count = count
        self._edges: frozenset[tuple[int, int]] | None = None

        snaps: dict[int, dict[int, frozenset[int]]] = {}
        for x, per_level in (snapshots or {}).items():
            if x not in level_of:
                raise ContractError(f"snapshot for unknown vertex {x}")
            lx = level_of[x]
            if lx == 0:
                raise ContractError(f"vertex {x} is at level 0 and cannot carry snapshots")
            entry: dict[int, frozenset[int]] = {}
            for j, members in per_level.items():
                j = int(j)
                if not 0 <= j < lx:
                    raise ContractError(
                        f"snapshot level {j} out of range for vertex {x} at level {lx}"
                    )
                ms = frozenset(members)
                if not ms <= self.levels[j]:
                    raise ContractError(f"snapshot of vertex {x} at level {j} leaves that level")
                entry[j] = ms
            snaps[x] = entry
        self.snapshots: dict[int, dict[int, frozenset[int]]] = snaps

    @classmethod
    def _assemble(
        cls,
        levels: tuple[frozenset[int], ...],
        labels: dict[int, str],
        adj: dict[int, frozenset[int]],
        snapshots: dict[int, dict[int, frozenset[int]]],
        edge_count: int,
    ) -> "MultipartiteGraph":
        # trusted constructor for pipeline-internal callers; skips validation
        g = object.__new__(cls)
        g.levels = levels
        g.labels = labels
        g._adj = adj
        g.snapshots = snapshots
        g._edge_count = edge_count
        g._edges = None
        level_of: dict[int, int] = {}
        for i, lv in enumerate(levels):
            for x in lv:
                level_of[x] = i
        g._level_of = level_of
        return g

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def vertex_count(self) -> int:
        return sum(len(lv) for lv in self.levels)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Flat canonical edge set; computed from adjacency on first use."""
        if self._edges is None:
            self._edges = frozenset(
                (x, y) for x, nbrs in self._adj.items() for y in nbrs if x < y
            )
        return self._edges

    def vertices(self) -> Iterator[int]:
        return iter(sorted(self._level_of))

    def level_of(self, x: int) -> int:
        if x not in self._level_of:
            raise KeyError(x)
        return self._level_of[x]

    def neighbours(self, x: int) -> frozenset[int]:
        if x not in self._adj:
            raise KeyError(x)
        return self._adj[x]

    def level_neighbours(self, x: int, i: int) -> frozenset[int]:
        if not 0 <= i <= self.top:
            raise IndexError(f"level {i} out of range 0..{self.top}")
        return self.neighbours(x) & self.levels[i]

    def snapshot(self, x: int, j: int) -> frozenset[int]:
        """Creation-time level-j neighbourhood of x.  KeyError when unrecorded."""
        return self.snapshots[x][j]

    def has_snapshot(self, x: int) -> bool:
        return x in self.snapshots

    def level_sizes(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultipartiteGraph):
            return NotImplemented
        return (
            self.levels == other.levels
            and self.labels == other.labels
            and self._adj == other._adj
            and self.snapshots == other.snapshots
        )

    def __repr__(self) -> str:
        return f"MultipartiteGraph(levels={self.level_sizes()}, m={self._edge_count})"


def neighbourhood(g: Graph | MultipartiteGraph, x: int) -> frozenset[int]:
    """All neighbours of x."""
    return g.neighbours(x)


def level_neighbourhood(g: MultipartiteGraph, x: int, i: int) -> frozenset[int]:
    """Neighbours of x lying at level i."""
    return g.level_neighbours(x, i)


def record_snapshots(g: MultipartiteGraph) -> MultipartiteGraph:
    """Record the current per-level neighbourhoods of every top-level vertex.

    Intended for the graph in which the top level was just created; entries
    for lower levels are carried over untouched.  Idempotent.
    """
    top = g.top
    if top == 0:
        return g
    snaps = dict(g.snapshots)
    for x in g.levels[top]:
        snaps[x] = {j: g.level_neighbours(x, j) for j in range(top)}
    return MultipartiteGraph._assemble(
        g.levels, dict(g.labels), dict(g._adj), snaps, g._edge_count
    )


def level_blocks(g: MultipartiteGraph) -> list[tuple[int, int]] | None:
    """Per-level contiguous id ranges [start, stop), or None when not blocked.

    Pipeline-built graphs always satisfy this layout; hand-built ones need
    not.  Fast paths use the block structure and fall back otherwise.
    """
    blocks: list[tuple[int, int]] = []
    next_free = 0
    for lv in g.levels:
        size = len(lv)
        if size == 0:
            blocks.append((next_free, next_free))
            continue
        lo, hi = min(lv), max(lv)
        if lo != next_free or hi - lo + 1 != size:
            return None
        blocks.append((lo, hi + 1))
        next_free = hi + 1
    return blocks
