"""Candidate families for the three factorisation modes.

A candidate is a pair (upper, lower): upper is a set of at least two
top-level vertices, lower a set of at least two vertices below the top
level, and every upper vertex is adjacent to every lower vertex.  The
family kept by a step consists of the inclusion-maximal candidate sets
(upper joined with lower), further constrained by mode:

* weak    no extra constraint;
* factor  the lower part must meet the level directly below the top in
          at least two vertices;
* clean   factor constraint, plus the upper part must stay inside one
          equivalence class of top-level vertices sharing the same
          neighbourhood at level 0 and at every level from 2 up to two
          below the top.  Only defined once four levels exist.

The fast enumeration walks closed vertex sets of the bipartite adjacency
between the top level and everything below, via intersections of the
per-lower-vertex neighbour masks.  Three reductions keep it sound:

1. maximal candidate sets correspond exactly to closed pairs: two
   distinct closed pairs never produce nested candidate sets, and every
   non-closed candidate is contained in its closure;
2. the factor constraint commutes with taking maximal elements, because
   comparable weak candidates share the same lower part;
3. for clean mode, candidates from distinct equivalence classes are
   never comparable, so classes can be enumerated independently.

``brute_force_candidates`` enumerates subsets literally and exists as an
independent cross-check for small graphs; it must stay separate from the
fast path.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Iterator

from .core import ContractError, IntegrityError, MultipartiteGraph

MODES = ("weak", "factor", "clean")

# brute-force subset enumeration is exponential; cap its use
BRUTE_FORCE_LIMIT = 16


class Candidate:
    """One admissible pair: ``upper`` above the cut, ``lower`` below it."""

    __slots__ = ("upper", "lower", "full_set", "_u", "_l")

    def __init__(self, upper: Iterable[int], lower: Iterable[int]):
        u = tuple(sorted(set(upper)))
        l = tuple(sorted(set(lower)))
        self._u = u
        self._l = l
        self.upper = frozenset(u)
        self.lower = frozenset(l)
        self.full_set = self.upper | self.lower

    @classmethod
    def _from_sorted(cls, u: tuple[int, ...], l: tuple[int, ...]) -> "Candidate":
        c = object.__new__(cls)
        c._u = u
        c._l = l
        c.upper = frozenset(u)
        c.lower = frozenset(l)
        c.full_set = c.upper | c.lower
        return c

    def _order_key(self) -> tuple[int, tuple[int, ...]]:
        # families are ordered by size (descending) then vertex list
        u, l = self._u, self._l
        if not u or not l or l[-1] < u[0]:
            merged = l + u
        elif u[-1] < l[0]:
            merged = u + l
        else:
            merged = tuple(sorted(self.full_set))
        return (-len(merged), merged)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Candidate):
            return NotImplemented
        return self._u == other._u and self._l == other._l

    def __hash__(self) -> int:
        return hash((self._u, self._l))

    def __repr__(self) -> str:
        return f"Candidate(upper={sorted(self.upper)}, lower={sorted(self.lower)})"


class CandidateFamily:
    """The ordered family a factorising step will spend."""

    __slots__ = ("mode", "k", "members")

    def __init__(self, mode: str, k: int, members: Iterable[Candidate]):
        if mode not in MODES:
            raise ContractError(f"unknown mode {mode!r}")
        if mode == "clean":
            if k < 4:
                raise ContractError("clean families need at least four existing levels")
        elif k < 2:
            raise ContractError("candidate families start at the second level")
        self.mode = mode
        self.k = k
        self.members: tuple[Candidate, ...] = tuple(
            sorted(members, key=Candidate._order_key)
        )

    @property
    def effective(self) -> bool:
        return bool(self.members)

    def full_sets(self) -> list[frozenset[int]]:
        return [c.full_set for c in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.members)

    def __repr__(self) -> str:
        return f"CandidateFamily(mode={self.mode!r}, k={self.k}, size={len(self.members)})"


def _closed_intents(obj_intents: Iterable[int], keep_mask: int) -> set[int]:
    """Intersections of nonempty subsets of the object intents, pruned.

    Only intents with at least two bits inside ``keep_mask`` are kept.
    The prune is exhaustive-safe because intersections only shrink: every
    prefix of a surviving intent is a superset of it and so survives too,
    and an object whose own intent fails can never join a survivor.
    """
    intents: set[int] = set()
    for om in obj_intents:
        if (om & keep_mask).bit_count() < 2:
            continue
        cuts = {om}
        cuts.update(f & om for f in intents)
        cuts -= intents
        if cuts:
            intents.update(
                c for c in cuts if (c & keep_mask).bit_count() >= 2
            )
    return intents


def _bits_to_ids(mask: int, table: list[int]) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(table[low.bit_length() - 1])
        mask ^= low
    return tuple(out)


def _concept_candidates(
    g: MultipartiteGraph,
    uppers: list[int],
    lowers: list[int],
    below_top: frozenset[int] | None,
) -> list[Candidate]:
    """Closed pairs over the given top-level/lower vertex lists.

    ``below_top`` fixes the level directly below the top; when given, only
    pairs whose lower part meets it twice survive (the factor constraint).
    Both lists must be ascending.  The walk enumerates closed lower parts,
    where that constraint is monotone, instead of closed upper parts, whose
    closure system can dwarf the surviving family on dense graphs.
    """
    if len(uppers) < 2 or len(lowers) < 2:
        return []
    adj = g._adj
    lpos = {w: j for j, w in enumerate(lowers)}

    attr = [0] * len(lowers)
    obj_intents: set[int] = set()
    for i, x in enumerate(uppers):
        m = 0
        for w in adj[x]:
            j = lpos.get(w)
            if j is not None:
                m |= 1 << j
                attr[j] |= 1 << i
        obj_intents.add(m)

    if below_top is None:
        keep_mask = (1 << len(lowers)) - 1
    else:
        keep_mask = 0
        for j, w in enumerate(lowers):
            if w in below_top:
                keep_mask |= 1 << j

    out: list[Candidate] = []
    for intent in _closed_intents(sorted(obj_intents), keep_mask):
        rest = intent
        extent = -1
        while rest:
            low = rest & -rest
            extent &= attr[low.bit_length() - 1]
            rest ^= low
        if extent.bit_count() < 2:
            continue
        out.append(
            Candidate._from_sorted(_bits_to_ids(extent, uppers), _bits_to_ids(intent, lowers))
        )
    return out


def _lower_vertices(g: MultipartiteGraph) -> list[int]:
    out: list[int] = []
    for lv in g.levels[:-1]:
        out.extend(lv)
    out.sort()
    return out


def weak_candidates(g: MultipartiteGraph) -> CandidateFamily:
    """Maximal candidates with no mode constraint, for the next level."""
    k = g.top + 1
    if k < 2:
        raise ContractError("need at least two levels before candidates exist")
    uppers = sorted(g.levels[g.top])
    members = _concept_candidates(g, uppers, _lower_vertices(g), None)
    return CandidateFamily("weak", k, members)


def factor_candidates(g: MultipartiteGraph) -> CandidateFamily:
    """Maximal candidates whose lower part meets the level below the top twice."""
    k = g.top + 1
    if k < 2:
        raise ContractError("need at least two levels before candidates exist")
    uppers = sorted(g.levels[g.top])
    below = g.levels[g.top - 1]
    members = _concept_candidates(g, uppers, _lower_vertices(g), below)
    return CandidateFamily("factor", k, members)


def _clean_classes(g: MultipartiteGraph) -> list[list[int]]:
    """Group top-level vertices by neighbourhoods at level 0 and 2..top-2.

    Those levels are immutable for a top vertex once created, so the
    recorded snapshots must agree with the live neighbourhoods; a mismatch
    means an earlier step corrupted the graph.
    """
    top = g.top
    ps = (0, *range(2, top - 1))
    adj = g._adj
    lvl = g._level_of
    snaps = g.snapshots
    groups: dict[tuple[frozenset[int], ...], list[int]] = {}
    for x in g.levels[top]:
        buckets: dict[int, list[int]] = {}
        for w in adj[x]:
            buckets.setdefault(lvl[w], []).append(w)
        key = tuple(frozenset(buckets.get(p, ())) for p in ps)
        snap = snaps.get(x)
        if snap is not None:
            for p, part in zip(ps, key):
                if snap[p] != part:
                    raise IntegrityError(
                        f"level-{p} neighbourhood of vertex {x} drifted from its snapshot"
                    )
        groups.setdefault(key, []).append(x)
    return [sorted(v) for _, v in sorted(groups.items(), key=lambda kv: kv[1])]


def clean_candidates(g: MultipartiteGraph) -> CandidateFamily:
    """Factor candidates whose upper part stays inside one equivalence class."""
    k = g.top + 1
    if k < 4:
        raise ContractError("clean candidates need at least four existing levels")
    below = g.levels[g.top - 1]
    adj = g._adj
    members: list[Candidate] = []
    for cls in _clean_classes(g):
        if len(cls) < 2:
            continue
        seen: set[int] = set()
        for x in cls:
            seen.update(adj[x])
        members.extend(_concept_candidates(g, cls, sorted(seen), below))
    return CandidateFamily("clean", k, members)


def candidate_family(g: MultipartiteGraph, mode: str) -> CandidateFamily:
    if mode == "weak":
        return weak_candidates(g)
    if mode == "factor":
        return factor_candidates(g)
    if mode == "clean":
        return clean_candidates(g)
    raise ContractError(f"unknown mode {mode!r}")


def _is_valid_candidate(
    g: MultipartiteGraph, mode: str, upper: frozenset[int], lower: frozenset[int]
) -> bool:
    if len(upper) < 2 or len(lower) < 2:
        return False
    top = g.top
    for y in upper:
        if not lower <= g._adj[y]:
            return False
    if mode in ("factor", "clean") and len(lower & g.levels[top - 1]) < 2:
        return False
    if mode == "clean":
        ps = (0, *range(2, top - 1))
        keys = {
            tuple(g.level_neighbours(x, p) for p in ps)
            for x in upper
        }
        if len(keys) > 1:
            return False
    return True


def brute_force_candidates(g: MultipartiteGraph, mode: str) -> CandidateFamily:
    """Literal subset enumeration of the definition.  Small graphs only.

    Walks every upper subset; for a fixed upper part only the full common
    neighbourhood can be part of a maximal candidate set, and a valid
    smaller lower part exists exactly when the full one is valid.
    Independent of the fast path on purpose: tests compare the two routes.
    """
    from itertools import combinations

    if mode not in MODES:
        raise ContractError(f"unknown mode {mode!r}")
    k = g.top + 1
    if mode == "clean" and k < 4:
        raise ContractError("clean candidates need at least four existing levels")
    if k < 2:
        raise ContractError("need at least two levels before candidates exist")
    uppers = sorted(g.levels[g.top])
    lowers = frozenset(_lower_vertices(g))
    if len(uppers) > BRUTE_FORCE_LIMIT:
        raise ContractError("graph too large for brute-force candidate enumeration")

    by_set: dict[frozenset[int], Candidate] = {}
    for a in range(2, len(uppers) + 1):
        for upper in combinations(uppers, a):
            us = frozenset(upper)
            common = lowers
            for y in upper:
                common &= g._adj[y]
            if _is_valid_candidate(g, mode, us, common):
                c = Candidate(us, common)
                by_set.setdefault(c.full_set, c)

    maximal = [
        c
        for s, c in by_set.items()
        if not any(s < t for t in by_set if t != s)
    ]
    return CandidateFamily(mode, k, maximal)
