"""Edge-labeled hypergraphs, clusterings, and their plain-text formats.

Text format::

    # comments and blank lines are ignored
    nodes 3              # optional, must be the first content line
    colors red blue      # optional, declares colors (and their order) up front
    red 0 1
    blue 1 2

Every other line is ``<color-name> <id> <id> ...``. Colors not declared in a
``colors`` line are registered in order of first appearance.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class HypergraphFormatError(ValueError):
    """Raised for malformed hypergraph or clustering text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Hyperedge:
    color: int
    nodes: tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(sorted(int(v) for v in self.nodes))
        if not nodes:
            raise ValueError("hyperedge must contain at least one node")
        if len(set(nodes)) != len(nodes):
            raise ValueError(f"duplicate node in hyperedge {nodes}")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class LabeledHypergraph:
    """Hypergraph whose edges each carry one color.

    ``color_degree[v, c]`` counts the edges of color ``c`` containing ``v``.
    The table is computed on construction and is read-only.
    """

    num_nodes: int
    colors: tuple[str, ...]
    edges: tuple[Hyperedge, ...]
    color_degree: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        if len(set(self.colors)) != len(self.colors):
            raise ValueError("color names must be distinct")
        k = len(self.colors)
        deg = np.zeros((self.num_nodes, k), dtype=np.int64)
        for e in self.edges:
            if not 0 <= e.color < k:
                raise ValueError(f"edge color index {e.color} out of range for k={k}")
            if e.nodes[-1] >= self.num_nodes or e.nodes[0] < 0:
                raise ValueError(f"edge {e.nodes} has node ids outside 0..{self.num_nodes - 1}")
            deg[list(e.nodes), e.color] += 1
        deg.flags.writeable = False
        object.__setattr__(self, "color_degree", deg)

    def __eq__(self, other):
        if not isinstance(other, LabeledHypergraph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and self.colors == other.colors
            and sorted(self.edges, key=_edge_key) == sorted(other.edges, key=_edge_key)
        )

    def __hash__(self):
        return hash((self.num_nodes, self.colors, tuple(sorted(self.edges, key=_edge_key))))

    @property
    def k(self) -> int:
        return len(self.colors)

    @property
    def degree(self) -> np.ndarray:
        """Total degree d(v) of every node."""
        return self.color_degree.sum(axis=1)

    @property
    def d_max(self) -> int:
        if self.num_nodes == 0:
            return 0
        return int(self.degree.max())

    @property
    def r(self) -> int:
        """Largest hyperedge size (0 with no edges)."""
        return max((len(e) for e in self.edges), default=0)

    def edges_of_color(self, c: int) -> list[Hyperedge]:
        return [e for e in self.edges if e.color == c]

    def color_index(self, name: str) -> int:
        try:
            return self.colors.index(name)
        except ValueError:
            raise KeyError(f"unknown color {name!r}") from None


def _edge_key(e: Hyperedge):
    return (e.color, e.nodes)


@dataclass(frozen=True)
class Clustering:
    """Total assignment of nodes to colors; ``assignment[v]`` is a color index."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(c) for c in self.assignment))

    def __len__(self):
        return len(self.assignment)

    def __getitem__(self, v):
        return self.assignment[v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)

    def members(self, color: int) -> list[int]:
        return [v for v, c in enumerate(self.assignment) if c == color]

    def validate(self, h: LabeledHypergraph) -> None:
        if len(self.assignment) != h.num_nodes:
            raise ValueError(
                f"clustering covers {len(self.assignment)} nodes, hypergraph has {h.num_nodes}"
            )
        if any(not 0 <= c < h.k for c in self.assignment):
            raise ValueError(f"clustering uses a color index outside 0..{h.k - 1}")


def color_degrees(h: LabeledHypergraph, v: int) -> np.ndarray:
    """Row ``d[v, :]`` of the color-degree table."""
    if not 0 <= v < h.num_nodes:
        raise IndexError(f"node {v} out of range")
    return h.color_degree[v].copy()


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_hypergraph(source) -> LabeledHypergraph:
    """Parse the text format from a ``str``, ``bytes`` or file-like object."""
    text = _read_text(source)
    declared_n: int | None = None
    colors: list[str] = []
    color_ids: dict[str, int] = {}
    edges: list[Hyperedge] = []
    max_id = -1
    seen_content = False

    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, rest = tokens[0], tokens[1:]
        if head == "nodes" and not seen_content and declared_n is None:
            if len(rest) != 1:
                raise HypergraphFormatError("expected 'nodes <n>'", lineno)
            declared_n = _parse_int(rest[0], lineno)
            if declared_n < 0:
                raise HypergraphFormatError("node count must be non-negative", lineno)
            continue
        if head == "colors" and not edges:
            for name in rest:
                if name in color_ids:
                    raise HypergraphFormatError(f"color {name!r} declared twice", lineno)
                color_ids[name] = len(colors)
                colors.append(name)
            seen_content = True
            continue
        seen_content = True
        if not rest:
            raise HypergraphFormatError(f"edge of color {head!r} lists no nodes", lineno)
        ids = [_parse_int(tok, lineno) for tok in rest]
        if min(ids) < 0:
            raise HypergraphFormatError("negative node id", lineno)
        if len(set(ids)) != len(ids):
            raise HypergraphFormatError("duplicate node in edge", lineno)
        if declared_n is not None and max(ids) >= declared_n:
            raise HypergraphFormatError(
                f"node id {max(ids)} out of range for 'nodes {declared_n}'", lineno
            )
        if head not in color_ids:
            color_ids[head] = len(colors)
            colors.append(head)
        edges.append(Hyperedge(color_ids[head], tuple(ids)))
        max_id = max(max_id, max(ids))

    n = declared_n if declared_n is not None else max_id + 1
    return LabeledHypergraph(n, tuple(colors), tuple(edges))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise HypergraphFormatError(f"expected an integer node id, got {token!r}", lineno) from None


def format_hypergraph(h: LabeledHypergraph) -> str:
    """Serialize ``h``; edges are written sorted by (color, nodes)."""
    out = [f"nodes {h.num_nodes}"]
    if h.colors:
        out.append("colors " + " ".join(h.colors))
    for e in sorted(h.edges, key=_edge_key):
        out.append(h.colors[e.color] + " " + " ".join(map(str, e.nodes)))
    return "\n".join(out) + "\n"


def write_clustering(c: Clustering, colors: Sequence[str]) -> str:
    """One ``"<node> <color>"`` line per node, in node order."""
    return "".join(f"{v} {colors[col]}\n" for v, col in enumerate(c.assignment))


def parse_clustering(source, h: LabeledHypergraph) -> Clustering:
    """Read ``"<node> <color>"`` lines; every node of ``h`` must appear exactly once."""
    text = _read_text(source)
    assignment: dict[int, int] = {}
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise HypergraphFormatError("expected '<node> <color>'", lineno)
        v = _parse_int(tokens[0], lineno)
        if not 0 <= v < h.num_nodes:
            raise HypergraphFormatError(f"node {v} out of range", lineno)
        if v in assignment:
            raise HypergraphFormatError(f"node {v} assigned twice", lineno)
        try:
            assignment[v] = h.color_index(tokens[1])
        except KeyError as exc:
            raise HypergraphFormatError(str(exc.args[0]), lineno) from None
    missing = [v for v in range(h.num_nodes) if v not in assignment]
    if missing:
        raise HypergraphFormatError(f"nodes without a color: {missing[:10]}")
    return Clustering(tuple(assignment[v] for v in range(h.num_nodes)))


def random_hypergraph(
    rng: np.random.Generator,
    num_nodes: int | tuple[int, int] = (3, 8),
    num_colors: int | tuple[int, int] = (2, 4),
    num_edges: int | tuple[int, int] = (1, 10),
    max_edge_size: int = 4,
) -> LabeledHypergraph:
    """Draw a small random instance; integer arguments are fixed, pairs are inclusive ranges."""

    def draw(bounds):
        if isinstance(bounds, tuple):
            return int(rng.integers(bounds[0], bounds[1] + 1))
        return int(bounds)

    n = draw(num_nodes)
    k = draw(num_colors)
    m = draw(num_edges)
    edges = []
    for _ in range(m):
        size = int(rng.integers(1, min(max_edge_size, n) + 1))
        nodes = rng.choice(n, size=size, replace=False)
        edges.append(Hyperedge(int(rng.integers(k)), tuple(int(v) for v in nodes)))
    colors = tuple(f"c{i}" for i in range(k))
    return LabeledHypergraph(n, colors, tuple(edges))


def from_edge_lists(
    num_nodes: int, colors: Sequence[str], edges: Iterable[tuple[int, Iterable[int]]]
) -> LabeledHypergraph:
    """Convenience constructor from ``(color_index, nodes)`` pairs."""
    return LabeledHypergraph(
        num_nodes, tuple(colors), tuple(Hyperedge(c, tuple(nodes)) for c, nodes in edges)
    )
