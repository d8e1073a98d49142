"""Clique-intersection semilattice and the structural checks built on it.

Every intersection of two or more distinct maximal cliques is an element of
the family; the ones with at least two vertices are the nontrivial elements.
Each vertex of level >= 2 in a clean decomposition determines a sequence of
such elements read off its creation snapshots, and the decomposition is
correct exactly when those sequences are strict chains, are distinct within
a level, and jointly realise every strict chain of nontrivial elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .cliques import maximal_cliques
from .core import ContractError, Graph, IntegrityError, MultipartiteGraph
from .series import SeriesRun

# Failure reports keep a handful of witnesses; counts tell the rest.
_WITNESS_CAP = 5


def _canon_key(s: frozenset[int]):
    return (len(s), sorted(s))


@dataclass(eq=False)
class IntersectionFamily:
    """Intersections of maximal cliques, their supports, and the chain order."""

    universe: frozenset[int]
    cliques: tuple[frozenset[int], ...]
    elements: frozenset[frozenset[int]]
    nontrivial: tuple[frozenset[int], ...]
    supports: dict[frozenset[int], frozenset[int]]
    clique_families: frozenset[frozenset[int]]
    height: int
    _supersets: dict[frozenset[int], tuple[frozenset[int], ...]]

    def strict_supersets(self, o: frozenset[int]) -> tuple[frozenset[int], ...]:
        return self._supersets[o]


def intersection_family(g: Graph) -> IntersectionFamily:
    """Close the maximal cliques of g under intersections of two or more."""
    ks = maximal_cliques(g)
    masks = [sum(1 << v for v in c) for c in ks.cliques]
    seen: set[int] = set()
    frontier: list[int] = []
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            m = masks[i] & masks[j]
            if m not in seen:
                seen.add(m)
                frontier.append(m)
    # folding single cliques into known elements reaches every deeper
    # intersection; the family ends up closed under mutual intersection
    while frontier:
        fresh = []
        for a in frontier:
            for cm in masks:
                x = a & cm
                if x not in seen:
                    seen.add(x)
                    fresh.append(x)
        frontier = fresh

    def unmask(mask: int) -> frozenset[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return frozenset(out)

    elements = frozenset(unmask(m) for m in seen)
    nontrivial = tuple(sorted((o for o in elements if len(o) >= 2), key=_canon_key))
    supports = {
        o: frozenset(i for i, c in enumerate(ks.cliques) if o <= c) for o in elements
    }
    families = frozenset(supports[o] for o in elements)

    supersets = {
        o: tuple(sorted((p for p in nontrivial if o < p), key=_canon_key))
        for o in nontrivial
    }
    height = 0
    tallest: dict[frozenset[int], int] = {}
    for o in nontrivial:  # canonical order is by size, so subsets come first
        tallest[o] = 1 + max((tallest[p] for p in nontrivial if p < o), default=0)
        height = max(height, tallest[o])

    return IntersectionFamily(
        universe=frozenset(g.vertices()),
        cliques=ks.cliques,
        elements=elements,
        nontrivial=nontrivial,
        supports=supports,
        clique_families=families,
        height=height,
        _supersets=supersets,
    )


def chains(fam: IntersectionFamily, length: int) -> list[tuple[frozenset[int], ...]]:
    """All strictly increasing tuples of nontrivial elements of a given length."""
    if length < 1:
        raise ContractError(f"chain length must be positive, got {length}")
    out: list[tuple[frozenset[int], ...]] = []

    def extend(chain: tuple[frozenset[int], ...]) -> None:
        if len(chain) == length:
            out.append(chain)
            return
        for p in fam.strict_supersets(chain[-1]):
            extend(chain + (p,))

    for o in fam.nontrivial:
        extend((o,))
    return out


@dataclass(frozen=True)
class CharSeq:
    """Characterising sequence of a vertex: one element per level 1..k-1.

    ``sentinel_at`` lists the positions (level indices j) where the shared
    clique family was empty and the whole vertex set stands in by convention.
    """

    vertex: int
    entries: tuple[frozenset[int], ...]
    sentinel_at: tuple[int, ...]


def _level1_clique_map(m: MultipartiteGraph, fam: IntersectionFamily) -> dict[int, int]:
    index = {c: i for i, c in enumerate(fam.cliques)}
    out = {}
    for y in sorted(m.levels[1]):
        members = m.snapshot(y, 0)
        i = index.get(members)
        if i is None:
            raise IntegrityError(f"level-1 vertex {y} does not match any maximal clique")
        out[y] = i
    return out


class _Resolver:
    """Shared tables for resolving many sequences against one clique family."""

    __slots__ = ("m", "fam", "to_clique", "member_mask")

    def __init__(self, m: MultipartiteGraph, fam: IntersectionFamily):
        self.m = m
        self.fam = fam
        self.to_clique = _level1_clique_map(m, fam) if m.top >= 1 else {}
        # which cliques each source vertex belongs to, as a bitmask
        masks: dict[int, int] = {}
        for i, c in enumerate(fam.cliques):
            for v in c:
                masks[v] = masks.get(v, 0) | (1 << i)
        self.member_mask = masks

    def sequence(self, x: int) -> CharSeq:
        m = self.m
        fam = self.fam
        to_clique = self.to_clique
        member_mask = self.member_mask
        full = (1 << len(fam.cliques)) - 1
        k = m._level_of[x]
        if k < 2:
            raise ContractError(f"vertex {x} is at level {k}; sequences start at level 2")
        snaps = m.snapshots
        entries: list[frozenset[int]] = [snaps[x][0]]
        sentinel_at: list[int] = []
        for j in range(2, k):
            ys = snaps[x][j]
            if not ys:
                raise IntegrityError(
                    f"vertex {x} has an empty creation level-{j} neighbourhood"
                )
            common = frozenset.intersection(*(snaps[y][1] for y in ys))
            if not common:
                entries.append(fam.universe)
                sentinel_at.append(j)
                continue
            fmask = 0
            for c in common:
                fmask |= 1 << to_clique[c]
            element = frozenset.intersection(*(fam.cliques[i] for i in _bitlist(fmask)))
            # the shared cliques must be exactly the cliques of the entry,
            # otherwise no set satisfies the defining equation
            kmask = full
            for v in element:
                kmask &= member_mask[v]
            if kmask != fmask:
                raise IntegrityError(
                    f"vertex {x}: no set is carried by exactly the shared cliques at level {j}"
                )
            entries.append(element)
        return CharSeq(vertex=x, entries=tuple(entries), sentinel_at=tuple(sentinel_at))


def _bitlist(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def characterising_sequence(
    run: SeriesRun, x: int, fam: IntersectionFamily | None = None
) -> CharSeq:
    """Resolve the sequence of intersection elements encoded by vertex x.

    Entry 1 is x's creation level-0 neighbourhood.  Entry j >= 2 is the
    unique family element supported by exactly the cliques every creation
    level-j neighbour of x carried at its own creation; an empty shared
    clique set falls back to the whole vertex set.  Failure to resolve a
    unique element means the decomposition itself is broken.
    """
    if run.mode != "clean":
        raise ContractError("characterising sequences are defined for clean runs")
    m = run.final
    if m.level_of(x) < 2:
        raise ContractError(f"vertex {x} is at level {m.level_of(x)}; sequences start at level 2")
    if fam is None:
        fam = intersection_family(run.source)
    return _Resolver(m, fam).sequence(x)


def _labels_of(g: Graph, s: Iterable[int]) -> list[str]:
    return sorted(g.labels[v] for v in s)


def verify_charseq_theorem(run: SeriesRun, fam: IntersectionFamily | None = None) -> dict:
    """Check the three sequence properties on every level of a clean run.

    Per level k >= 2: (1) each sequence is a strict chain whose interior
    members (and, for k = 3, its top entry) are nontrivial elements;
    (2) sequences are injective within the level; (3) every strict chain of
    nontrivial elements of length k-1 is realised by some level-k vertex.
    Property 3 is also checked for levels the decomposition never built,
    where any chain of the matching length is a failure.
    """
    if run.mode != "clean":
        raise ContractError("the sequence properties are stated for clean runs")
    if fam is None:
        fam = intersection_family(run.source)
    m = run.final
    src = run.source
    resolver = _Resolver(m, fam)
    nontrivial = set(fam.nontrivial)
    top_needed = max(m.top, fam.height + 1)
    levels_report = []
    notes: list[str] = []
    all_ok = True
    for k in range(2, top_needed + 1):
        xs = sorted(m.levels[k]) if k <= m.top else []
        seqs: dict[int, tuple[frozenset[int], ...]] = {}
        chain_bad: list[dict] = []
        member_bad: list[dict] = []
        stray_last = 0
        for x in xs:
            s = resolver.sequence(x)
            seqs[x] = s.entries
            if any(not a < b for a, b in zip(s.entries, s.entries[1:])):
                if len(chain_bad) < _WITNESS_CAP:
                    chain_bad.append(
                        {"vertex": m.labels[x], "entries": [_labels_of(src, e) for e in s.entries]}
                    )
            if k == 3:
                required = s.entries[1:2]
            elif k >= 4:
                required = s.entries[1 : k - 2]
            else:
                required = ()
            for e in required:
                if e not in nontrivial and len(member_bad) < _WITNESS_CAP:
                    member_bad.append({"vertex": m.labels[x], "entry": _labels_of(src, e)})
            if k >= 3 and s.entries[-1] not in nontrivial:
                stray_last += 1
        if stray_last:
            notes.append(f"level {k}: {stray_last} sequences end outside the nontrivial elements")
        distinct = len(set(seqs.values())) == len(seqs)
        expected = chains(fam, k - 1)
        realised = set(seqs.values())
        missing: list[list] = []
        for c in expected:
            if c not in realised:
                missing.append([_labels_of(src, e) for e in c])
                if len(missing) >= _WITNESS_CAP:
                    break
        entry = {
            "level": k,
            "vertices": len(xs),
            "chains": len(expected),
            "strict_chains": {"pass": not chain_bad, "witnesses": chain_bad},
            "membership": {"pass": not member_bad, "witnesses": member_bad},
            "injective": {"pass": distinct},
            "chains_realised": {"pass": not missing, "witnesses": missing},
        }
        entry["pass"] = all(
            entry[key]["pass"]
            for key in ("strict_chains", "membership", "injective", "chains_realised")
        )
        all_ok = all_ok and entry["pass"]
        levels_report.append(entry)
    return {"pass": all_ok, "levels": levels_report, "notes": notes}


def verify_v2_bijection(run: SeriesRun, fam: IntersectionFamily | None = None) -> dict:
    """Level-2 vertices must map one-to-one onto the nontrivial elements.

    The map sends a vertex to its creation level-0 neighbourhood; its
    creation level-1 neighbourhood must be exactly the cliques supporting
    the image.
    """
    if fam is None:
        fam = intersection_family(run.source)
    m = run.final
    src = run.source
    xs = sorted(m.levels[2]) if m.top >= 2 else []
    to_clique = _level1_clique_map(m, fam) if xs else {}
    failures: list[str] = []
    bad = 0

    def flag(msg: str) -> None:
        nonlocal bad
        bad += 1
        if len(failures) < _WITNESS_CAP:
            failures.append(msg)

    images: dict[frozenset[int], int] = {}
    for x in xs:
        image = m.snapshot(x, 0)
        if image in images:
            flag(f"{m.labels[x]} repeats the image of {m.labels[images[image]]}")
            continue
        images[image] = x
        if image not in fam.supports or len(image) < 2:
            flag(f"{m.labels[x]} maps outside the nontrivial elements")
            continue
        carried = frozenset(to_clique[c] for c in m.snapshot(x, 1))
        if carried != fam.supports[image]:
            flag(f"{m.labels[x]} does not carry the supporting cliques of its image")
    for o in fam.nontrivial:
        if o not in images:
            flag(f"element {{{', '.join(_labels_of(src, o))}}} has no level-2 vertex")
    return {
        "pass": not bad,
        "level2": len(xs),
        "nontrivial": len(fam.nontrivial),
        "failures": failures,
    }


def size_bound(g: Graph, m: MultipartiteGraph) -> dict:
    """Exact-arithmetic bound on the decomposition size.

    With every vertex of g in at most k maximal cliques and no clique larger
    than c, the decomposition of an n-vertex graph cannot exceed
    4 * min(k * 2^c * c!, 2^k * k!) * n vertices.
    """
    ks = maximal_cliques(g)
    per_vertex = [0] * g.vertex_count
    c = 0
    for clique in ks.cliques:
        c = max(c, len(clique))
        for v in clique:
            per_vertex[v] += 1
    k = max(per_vertex, default=0)
    n = g.vertex_count
    bound = 4 * min(k * 2**c * math.factorial(c), 2**k * math.factorial(k)) * n
    return {
        "cliques_per_vertex": k,
        "clique_size": c,
        "n": n,
        "bound": bound,
        "vertices": m.vertex_count,
        "pass": m.vertex_count <= bound,
    }
