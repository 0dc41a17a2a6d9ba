"""Data model for multi-layer graphs and the MLG1 text format.

A multi-layer graph is a single vertex set 0..n-1 together with tau edge
sets ("cop layers") and a robber layer.  The robber layer is either an
explicit edge set, the union of the cop layers, or the complete graph.
Everything downstream (solver, bounds, simulator) works on this type, so
edges are kept canonical: within a layer each edge is stored once as
(u, v) with u < v, and layers are sorted tuples.  Instances are treated
as immutable after construction; derived structures (adjacency, components)
are cached per layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

Edge = tuple[int, int]

INF = math.inf


class RobberSpec(Enum):
    """How the robber layer is defined relative to the cop layers."""

    UNION = "UNION"
    COMPLETE = "COMPLETE"
    EXPLICIT = "EXPLICIT"


class MlgError(Exception):
    """Base error for graph construction and parsing."""


class MlgParseError(MlgError):
    """Malformed MLG1 input; carries a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# Robber layers for COMPLETE graphs are never materialised beyond this size;
# adjacency questions are answered implicitly instead.
COMPLETE_MATERIALISE_LIMIT = 2048


def canonical_edges(edges: Iterable[Sequence[int]], n: int, *, what: str = "edge") -> tuple[Edge, ...]:
    """Validate and canonicalise an edge collection: u < v, sorted, no dups."""

    out: list[Edge] = []
    seen: set[Edge] = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise MlgError(f"self-loop {u}-{v} in {what}")
        if u > v:
            u, v = v, u
        if not (0 <= u < v < n):
            raise MlgError(f"{what} {u}-{v} out of range for n={n}")
        if (u, v) in seen:
            raise MlgError(f"duplicate {what} {u}-{v}")
        seen.add((u, v))
        out.append((u, v))
    return tuple(sorted(out))


@dataclass
class LayerView:
    """Cached per-layer structure: sorted adjacency and component labels."""

    adjacency: tuple[tuple[int, ...], ...]
    component_id: tuple[int, ...]
    n_components: int
    degrees: tuple[int, ...]

    def components_as_sets(self) -> list[frozenset[int]]:
        comps: dict[int, set[int]] = {}
        for v, c in enumerate(self.component_id):
            comps.setdefault(c, set()).add(v)
        return [frozenset(comps[c]) for c in sorted(comps)]


def _build_layer_view(n: int, edges: Sequence[Edge]) -> LayerView:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    comp = [-1] * n
    n_comp = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = n_comp
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adjacency[x]:
                if comp[y] < 0:
                    comp[y] = n_comp
                    stack.append(y)
        n_comp += 1
    return LayerView(adjacency, tuple(comp), n_comp, tuple(len(a) for a in adjacency))


@dataclass
class MultiLayerGraph:
    """Vertices 0..n-1, tau cop layers, and a robber layer specification.

    `tag` is optional provenance for generated families ("grid:6") used by
    scripted strategies and match records; it does not affect equality of
    the mathematical object and is not serialised.
    """

    n: int
    layers: tuple[tuple[Edge, ...], ...]
    robber_spec: RobberSpec = RobberSpec.UNION
    robber_edges: tuple[Edge, ...] | None = None
    tag: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise MlgError(f"need at least one vertex, got n={self.n}")
        if len(self.layers) < 1:
            raise MlgError("need at least one cop layer")
        self.layers = tuple(
            canonical_edges(layer, self.n, what=f"layer {i + 1} edge")
            for i, layer in enumerate(self.layers)
        )
        if self.robber_spec is RobberSpec.EXPLICIT:
            if self.robber_edges is None:
                raise MlgError("EXPLICIT robber spec requires robber_edges")
            self.robber_edges = canonical_edges(self.robber_edges, self.n, what="robber edge")
        elif self.robber_edges is not None:
            raise MlgError(f"robber_edges given but robber spec is {self.robber_spec.value}")

    @property
    def tau(self) -> int:
        return len(self.layers)

    # -- robber layer resolution --------------------------------------------

    def robber_layer_edges(self) -> tuple[Edge, ...]:
        """Resolved robber edge set; refuses huge COMPLETE materialisations."""

        if self.robber_spec is RobberSpec.EXPLICIT:
            assert self.robber_edges is not None
            return self.robber_edges
        if self.robber_spec is RobberSpec.UNION:
            return flatten(self)
        if self.n > COMPLETE_MATERIALISE_LIMIT:
            raise MlgError(
                f"refusing to materialise complete robber layer for n={self.n} "
                f"(limit {COMPLETE_MATERIALISE_LIMIT})"
            )
        return tuple((u, v) for u in range(self.n) for v in range(u + 1, self.n))

    def robber_is_complete(self) -> bool:
        return self.robber_spec is RobberSpec.COMPLETE

    def robber_view(self) -> LayerView:
        if "robber_view" not in self._cache:
            self._cache["robber_view"] = _build_layer_view(self.n, self.robber_layer_edges())
        return self._cache["robber_view"]

    def layer_view(self, i: int) -> LayerView:
        key = ("layer_view", i)
        if key not in self._cache:
            if not (0 <= i < self.tau):
                raise MlgError(f"layer index {i} out of range (tau={self.tau})")
            self._cache[key] = _build_layer_view(self.n, self.layers[i])
        return self._cache[key]

    def with_tag(self, tag: str) -> "MultiLayerGraph":
        self.tag = tag
        return self


@dataclass(frozen=True)
class AllocationPlan:
    """Per-layer cop counts (k_1, ..., k_tau)."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise MlgError(f"negative cop count in allocation {self.counts}")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def assignment(self) -> tuple[int, ...]:
        """Per-cop layer indices, cops packed into earliest layers first."""

        out: list[int] = []
        for layer, c in enumerate(self.counts):
            out.extend([layer] * c)
        return tuple(out)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.counts)


# -- basic operations ---------------------------------------------------------


def flatten(g: MultiLayerGraph, include_robber: bool = False) -> tuple[Edge, ...]:
    """Union of all cop layers (optionally also an explicit robber layer)."""

    key = ("flatten", include_robber)
    if key not in g._cache:
        es: set[Edge] = set()
        for layer in g.layers:
            es.update(layer)
        if include_robber and g.robber_spec is RobberSpec.EXPLICIT:
            assert g.robber_edges is not None
            es.update(g.robber_edges)
        g._cache[key] = tuple(sorted(es))
    return g._cache[key]


def components(g: MultiLayerGraph, layer: int) -> tuple[tuple[int, ...], int]:
    """Component labels and component count for one cop layer."""

    view = g.layer_view(layer)
    return view.component_id, view.n_components


def bfs_dist(g: MultiLayerGraph, layer: int, source: int) -> list[float]:
    """Unweighted shortest-path distances within one cop layer (inf if unreachable)."""

    return bfs_dist_adj(g.layer_view(layer).adjacency, source)


def bfs_dist_adj(adjacency: Sequence[Sequence[int]], source: int) -> list[float]:
    n = len(adjacency)
    dist: list[float] = [INF] * n
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for y in adjacency[x]:
                if dist[y] == INF:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    return dist


def ml_min_degree(g: MultiLayerGraph) -> int:
    """Minimum over vertices of the summed per-layer degrees.

    An edge present in several layers counts once per layer.
    """

    totals = [0] * g.n
    for i in range(g.tau):
        for v, d in enumerate(g.layer_view(i).degrees):
            totals[v] += d
    return min(totals)


def min_degree(edges: Sequence[Edge], n: int) -> int:
    """Minimum degree of a single edge set on n vertices."""

    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return min(deg)


def girth(edges: Sequence[Edge], n: int) -> float:
    """Length of a shortest cycle (inf for forests).

    BFS from every vertex; a non-tree edge at depth d closes a cycle of
    length dist[u] + dist[v] + 1, and scanning all roots is exact.
    """

    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    best = INF
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = [root]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            if 2 * dist[x] >= best:
                break
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    cyc = dist[x] + dist[y] + 1
                    if cyc < best:
                        best = cyc
    return best


def is_connected_edges(edges: Sequence[Edge], n: int) -> bool:
    return _build_layer_view(n, tuple(edges)).n_components == 1


# -- MLG1 format --------------------------------------------------------------


def serialize_mlg(g: MultiLayerGraph) -> str:
    """Canonical MLG1 text: LF endings, single spaces, edges sorted."""

    lines = [f"MLG1 {g.n} {g.tau} {g.robber_spec.value}"]
    for i, layer in enumerate(g.layers):
        lines.append(f"LAYER {i + 1} {len(layer)}")
        lines.extend(f"{u} {v}" for u, v in sorted(layer))
    if g.robber_spec is RobberSpec.EXPLICIT:
        assert g.robber_edges is not None
        lines.append(f"ROBBER {len(g.robber_edges)}")
        lines.extend(f"{u} {v}" for u, v in sorted(g.robber_edges))
    return "\n".join(lines) + "\n"


def parse_mlg(text: str | bytes) -> MultiLayerGraph:
    """Parse MLG1 text; '#' comments and blank lines are ignored.

    Errors carry the offending 1-based line number of the raw input.
    """

    if isinstance(text, bytes):
        text = text.decode("utf-8")
    numbered: list[tuple[int, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            numbered.append((ln, stripped))
    if not numbered:
        raise MlgParseError(1, "empty input")

    pos = 0

    def take() -> tuple[int, str]:
        nonlocal pos
        if pos >= len(numbered):
            last = numbered[-1][0] if numbered else 1
            raise MlgParseError(last, "unexpected end of input")
        item = numbered[pos]
        pos += 1
        return item

    ln, header = take()
    parts = header.split()
    if len(parts) != 4 or parts[0] != "MLG1":
        raise MlgParseError(ln, f"malformed header {header!r}")
    try:
        n = int(parts[1])
        tau = int(parts[2])
    except ValueError:
        raise MlgParseError(ln, f"malformed header {header!r}") from None
    try:
        spec = RobberSpec(parts[3])
    except ValueError:
        raise MlgParseError(ln, f"unknown robber spec {parts[3]!r}") from None
    if n < 1:
        raise MlgParseError(ln, f"vertex count must be positive, got {n}")
    if tau < 1:
        raise MlgParseError(ln, f"layer count must be positive, got {tau}")

    def read_edges(count: int, what: str) -> list[Edge]:
        edges: list[Edge] = []
        seen: set[Edge] = set()
        for _ in range(count):
            eln, line = take()
            toks = line.split()
            if len(toks) != 2:
                raise MlgParseError(eln, f"expected '<u> <v>', got {line!r}")
            try:
                u, v = int(toks[0]), int(toks[1])
            except ValueError:
                raise MlgParseError(eln, f"expected integers, got {line!r}") from None
            if u == v:
                raise MlgParseError(eln, f"self-loop {u} {v}")
            if u > v:
                raise MlgParseError(eln, f"edge must satisfy u < v, got {u} {v}")
            if not (0 <= u < v < n):
                raise MlgParseError(eln, f"vertex out of range in {what}: {u} {v} (n={n})")
            if (u, v) in seen:
                raise MlgParseError(eln, f"duplicate edge {u} {v} in {what}")
            seen.add((u, v))
            edges.append((u, v))
        return edges

    layers: list[tuple[Edge, ...]] = []
    for i in range(1, tau + 1):
        hln, line = take()
        toks = line.split()
        if len(toks) != 3 or toks[0] != "LAYER":
            raise MlgParseError(hln, f"expected 'LAYER {i} <m>', got {line!r}")
        try:
            idx, m = int(toks[1]), int(toks[2])
        except ValueError:
            raise MlgParseError(hln, f"expected 'LAYER {i} <m>', got {line!r}") from None
        if idx != i:
            raise MlgParseError(hln, f"expected layer {i}, got layer {idx}")
        if m < 0:
            raise MlgParseError(hln, f"negative edge count {m}")
        layers.append(tuple(read_edges(m, f"layer {i}")))

    robber_edges: tuple[Edge, ...] | None = None
    if spec is RobberSpec.EXPLICIT:
        hln, line = take()
        toks = line.split()
        if len(toks) != 2 or toks[0] != "ROBBER":
            raise MlgParseError(hln, f"expected 'ROBBER <m>', got {line!r}")
        try:
            m = int(toks[1])
        except ValueError:
            raise MlgParseError(hln, f"expected 'ROBBER <m>', got {line!r}") from None
        robber_edges = tuple(read_edges(m, "robber layer"))

    if pos != len(numbered):
        raise MlgParseError(numbered[pos][0], f"trailing content {numbered[pos][1]!r}")

    return MultiLayerGraph(n=n, layers=tuple(layers), robber_spec=spec, robber_edges=robber_edges)


def parse_mlg_file(path) -> MultiLayerGraph:
    with open(path, "rb") as fh:
        return parse_mlg(fh.read())


def write_mlg_file(g: MultiLayerGraph, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(serialize_mlg(g))
