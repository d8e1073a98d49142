"""Iterated factorisation series: weak, factor, and clean drivers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .candidates import CandidateFamily, clean_candidates, factor_candidates, weak_candidates
from .cliques import clique_incidence
from .core import ContractError, Graph, IntegrityError, MultipartiteGraph
from .transform import FactorStep, factorise, project

DEFAULT_CAP = 100


@dataclass(frozen=True)
class RunStatus:
    """Either terminated at a rank or stopped at the step cap."""

    kind: str  # "terminated" | "cap-reached"
    rank: int | None = None
    cap: int | None = None

    @property
    def terminated(self) -> bool:
        return self.kind == "terminated"

    def describe(self) -> str:
        if self.terminated:
            return f"terminated rank={self.rank}"
        return f"cap-reached cap={self.cap}"


@dataclass(frozen=True)
class StepStats:
    index: int  # 1-based attempted step; the step creates level index + 1
    rule: str  # candidate rule applied ("weak" | "factor" | "clean")
    effective: bool
    candidates: int
    removed: int
    added: int
    level_sizes: tuple[int, ...]
    edge_count: int
    elapsed_ms: float


@dataclass
class SeriesRun:
    """A full series: the source graph, every retained stage, and step records.

    ``graphs[i]`` is stage i+1; stage 1 is the clique incidence of ``source``.
    With ``low_memory`` only the final stage is retained (snapshots travel
    with it) and per-step graphs and edge sets are dropped.
    """

    mode: str
    source: Graph
    graphs: list[MultipartiteGraph]
    steps: list[FactorStep]
    status: RunStatus
    stats: list[StepStats] = field(default_factory=list)

    @property
    def final(self) -> MultipartiteGraph:
        return self.graphs[-1]


def _rule_for(mode: str, k: int):
    if mode == "weak":
        return "weak", weak_candidates
    if mode == "factor":
        return "factor", factor_candidates
    if mode == "clean":
        # levels 2 and 3 are built with the factor rule; the clean rule
        # needs four levels to speak about
        if k <= 3:
            return "factor", factor_candidates
        return "clean", clean_candidates
    raise ContractError(f"unknown mode {mode!r}")


def _run(g: Graph, mode: str, cap: int | None, low_memory: bool) -> SeriesRun:
    if cap is not None and cap < 1:
        raise ContractError(f"cap must be positive, got {cap}")
    current = clique_incidence(g)
    graphs = [current]
    steps: list[FactorStep] = []
    stats: list[StepStats] = []
    index = 0
    while True:
        index += 1
        k = current.top + 1
        rule, pick = _rule_for(mode, k)
        t0 = time.perf_counter()
        fam: CandidateFamily = pick(current)
        step = factorise(current, fam)
        elapsed = (time.perf_counter() - t0) * 1000.0
        stats.append(
            StepStats(
                index=index,
                rule=rule,
                effective=step.effective,
                candidates=len(fam),
                removed=step.removed_count,
                added=step.added_count,
                level_sizes=step.after.level_sizes(),
                edge_count=step.after.edge_count,
                elapsed_ms=elapsed,
            )
        )
        if not step.effective:
            status = RunStatus("terminated", rank=index)
            if not low_memory:
                steps.append(step)
            break
        current = step.after
        if low_memory:
            graphs = [current]
        else:
            graphs.append(current)
            steps.append(step)
        if cap is not None and index == cap:
            status = RunStatus("cap-reached", cap=cap)
            break
    return SeriesRun(mode, g, graphs, steps, status, stats)


def run_weak(g: Graph, cap: int = DEFAULT_CAP, low_memory: bool = False) -> SeriesRun:
    """Iterate the weak factorisation until it stalls or the cap is hit.

    The weak series need not terminate, hence the mandatory cap.
    """
    return _run(g, "weak", cap, low_memory)


def run_factor(g: Graph, cap: int = DEFAULT_CAP, low_memory: bool = False) -> SeriesRun:
    """Iterate the factor-mode series under a step cap."""
    return _run(g, "factor", cap, low_memory)


def run_clean(g: Graph, low_memory: bool = False) -> SeriesRun:
    """Run the clean series to termination.

    Levels 2 and 3 are produced by the factor rule, later levels by the
    clean rule.  The run must terminate with rank at most the vertex count
    (at least 1 for the empty graph); anything else is a pipeline bug.
    """
    run = _run(g, "clean", None, low_memory)
    bound = max(g.vertex_count, 1)
    if not run.status.terminated or run.status.rank > bound:
        raise IntegrityError(
            f"clean series did not stop within rank {bound}: {run.status.describe()}"
        )
    return run


def roundtrip_report(run: SeriesRun) -> dict:
    """Project every effective stage back and compare with its predecessor.

    Requires a run that retained all stages (not low-memory).
    """
    effective = sum(1 for s in run.stats if s.effective)
    if len(run.graphs) < effective + 1:
        raise ContractError("roundtrip check needs a run with every stage retained")
    failures = []
    checked = 0
    for step in run.steps:
        if not step.effective:
            continue
        checked += 1
        if project(step.after) != step.before:
            failures.append(f"stage with top level {step.after.top} does not project back")
    return {"pass": not failures, "checked": checked, "failures": failures}


def series_stats(run: SeriesRun) -> dict:
    """JSON-ready per-step table plus final-stage figures."""
    return {
        "mode": run.mode,
        "status": {
            "kind": run.status.kind,
            "rank": run.status.rank,
            "cap": run.status.cap,
        },
        "steps": [
            {
                "step": s.index,
                "rule": s.rule,
                "effective": s.effective,
                "candidates": s.candidates,
                "removed_edges": s.removed,
                "added_edges": s.added,
                "level_sizes": list(s.level_sizes),
                "edges": s.edge_count,
                "elapsed_ms": s.elapsed_ms,
            }
            for s in run.stats
        ],
        "final": {
            "level_sizes": list(run.final.level_sizes()),
            "vertices": run.final.vertex_count,
            "edges": run.final.edge_count,
        },
    }
