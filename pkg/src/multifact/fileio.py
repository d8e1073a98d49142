"""Text formats: plain edge lists and the levelled ``mgraph`` format.

The edge-list reader is forgiving ('#' comments, blank lines); the mgraph
format is deliberately canonical.  A valid mgraph file is byte for byte
what :func:`serialise_multipartite` emits for its graph, so parsing and
serialising are mutually inverse and golden tests can compare raw bytes.
"""

from __future__ import annotations

from .core import ContractError, Graph, MultipartiteGraph


class FormatError(ContractError):
    """A text file does not match its format.  ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _token(label: str) -> str:
    # labels travel as single whitespace-delimited tokens and must not be
    # mistakable for a comment marker
    if not label or label.split() != [label] or label.startswith("#"):
        raise ContractError(f"label {label!r} cannot be a file token")
    return label


def _int(no: int, token: str, what: str) -> int:
    # canonical decimal only: int() alone would admit "+3", "1_0", "03"
    try:
        value = int(token)
    except ValueError:
        raise FormatError(no, f"{what} must be an integer, got {token!r}") from None
    if str(value) != token:
        raise FormatError(no, f"{what} must be canonical decimal, got {token!r}")
    return value


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines into a :class:`Graph`.

    Blank lines and lines starting with '#' are skipped.  Labels are the
    tokens themselves.  Self-loops and repeated edges (either orientation)
    are rejected with their line number.
    """
    edges: list[tuple[str, str]] = []
    seen: dict[frozenset[str], int] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(no, f"expected two vertex labels, got {len(parts)}")
        u, v = parts
        if u.startswith("#") or v.startswith("#"):
            raise FormatError(no, "labels must not start with '#'")
        if u == v:
            raise FormatError(no, f"self-loop at {u!r}")
        key = frozenset((u, v))
        if key in seen:
            raise FormatError(no, f"edge {u} {v} repeats line {seen[key]}")
        seen[key] = no
        edges.append((u, v))
    return Graph.from_edge_list(edges)


def serialise_edge_list(g: Graph) -> str:
    """Canonical edge-list text: one sorted ``u v`` line per edge.

    Isolated vertices have no line to live on and are dropped; graphs read
    by :func:`parse_edge_list` never contain any.
    """
    pairs = sorted(
        tuple(sorted((g.labels[u], g.labels[v]))) for u, v in g.edges
    )
    return "".join(f"{_token(a)} {_token(b)}\n" for a, b in pairs)


def serialise_multipartite(g: MultipartiteGraph) -> str:
    """Canonical mgraph text.

    Header ``mgraph <levels>``, then ``v <level> <id> <label>`` lines,
    ``e <id> <id>`` lines and ``s <id> <level> <members...>`` lines, each
    section sorted by id and every line '\\n'-terminated.  Snapshot lines
    keep empty member lists so that creation-time records survive the trip.
    """
    out = [f"mgraph {len(g.levels)}\n"]
    for x in sorted(g.labels):
        out.append(f"v {g.level_of(x)} {x} {_token(g.labels[x])}\n")
    for u, v in sorted(g.edges):
        out.append(f"e {u} {v}\n")
    for x in sorted(g.snapshots):
        for j in sorted(g.snapshots[x]):
            members = " ".join(str(y) for y in sorted(g.snapshots[x][j]))
            out.append(f"s {x} {j} {members}\n" if members else f"s {x} {j}\n")
    return "".join(out)


def parse_multipartite(text: str) -> MultipartiteGraph:
    """Parse canonical mgraph text; the strict inverse of serialisation.

    Sections must appear in v, e, s order, each strictly increasing by id
    (edges by pair, snapshots by (id, level)); any deviation, duplicate or
    dangling reference is rejected with its line number.
    """
    if not text:
        raise FormatError(1, "empty file")
    body = text.split("\n")
    if body[-1] != "":
        raise FormatError(len(body), "missing final newline")
    lines = body[:-1]

    head = lines[0].split()
    if len(head) != 2 or head[0] != "mgraph" or lines[0] != " ".join(head):
        raise FormatError(1, 'expected header "mgraph <levels>"')
    level_count = _int(1, head[1], "level count")
    if level_count < 1:
        raise FormatError(1, f"level count must be at least 1, got {level_count}")

    levels: list[set[int]] = [set() for _ in range(level_count)]
    labels: dict[int, str] = {}
    label_line: dict[str, int] = {}
    level_of: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    snaps: dict[int, dict[int, set[int]]] = {}
    section = 0
    last_vertex: int | None = None
    last_edge: tuple[int, int] | None = None
    last_snap: tuple[int, int] | None = None

    for no, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if not parts:
            raise FormatError(no, "blank line")
        if raw != " ".join(parts):
            raise FormatError(no, "irregular whitespace")
        tag = parts[0]
        rank = {"v": 0, "e": 1, "s": 2}.get(tag)
        if rank is None:
            raise FormatError(no, f"unknown record {tag!r}")
        if rank < section:
            raise FormatError(no, f"{tag!r} record after a later section")
        section = rank

        if tag == "v":
            if len(parts) != 4:
                raise FormatError(no, "expected: v <level> <id> <label>")
            lvl = _int(no, parts[1], "level")
            x = _int(no, parts[2], "vertex id")
            lab = parts[3]
            if lab.startswith("#"):
                raise FormatError(no, "labels must not start with '#'")
            if not 0 <= lvl < level_count:
                raise FormatError(no, f"level {lvl} out of range 0..{level_count - 1}")
            if last_vertex is not None and x <= last_vertex:
                raise FormatError(no, f"vertex ids must be strictly increasing, got {x}")
            last_vertex = x
            if lab in label_line:
                raise FormatError(no, f"label {lab!r} repeats line {label_line[lab]}")
            label_line[lab] = no
            levels[lvl].add(x)
            labels[x] = lab
            level_of[x] = lvl

        elif tag == "e":
            if len(parts) != 3:
                raise FormatError(no, "expected: e <id> <id>")
            u = _int(no, parts[1], "vertex id")
            w = _int(no, parts[2], "vertex id")
            for y in (u, w):
                if y not in level_of:
                    raise FormatError(no, f"edge references undeclared vertex {y}")
            if u == w:
                raise FormatError(no, f"self-loop at vertex {u}")
            if u > w:
                raise FormatError(no, f"edge ({u}, {w}) must list the lower id first")
            if level_of[u] == level_of[w]:
                raise FormatError(no, f"edge ({u}, {w}) joins two level-{level_of[u]} vertices")
            if last_edge is not None and (u, w) <= last_edge:
                raise FormatError(no, "edges must be strictly increasing")
            last_edge = (u, w)
            edges.append((u, w))

        else:
            if len(parts) < 3:
                raise FormatError(no, "expected: s <id> <level> <members...>")
            x = _int(no, parts[1], "vertex id")
            j = _int(no, parts[2], "snapshot level")
            if x not in level_of:
                raise FormatError(no, f"snapshot for undeclared vertex {x}")
            if level_of[x] == 0:
                raise FormatError(no, f"vertex {x} is at level 0 and cannot carry snapshots")
            if not 0 <= j < level_of[x]:
                raise FormatError(
                    no, f"snapshot level {j} out of range for vertex {x} at level {level_of[x]}"
                )
            if last_snap is not None and (x, j) <= last_snap:
                raise FormatError(no, "snapshot records must be strictly increasing by (id, level)")
            last_snap = (x, j)
            members: set[int] = set()
            prev: int | None = None
            for tok in parts[3:]:
                y = _int(no, tok, "member id")
                if level_of.get(y) != j:
                    raise FormatError(no, f"snapshot member {y} is not at level {j}")
                if prev is not None and y <= prev:
                    raise FormatError(no, "snapshot members must be strictly increasing")
                prev = y
                members.add(y)
            snaps.setdefault(x, {})[j] = members

    return MultipartiteGraph(levels, labels, edges, snaps)
