"""Constructors for the multi-layer graph families used throughout.

Every generator validates its family invariants on the constructed object
and attaches a ConstructionReport; a failed invariant is a hard error.
Seeded generators are deterministic functions of their parameters and seed.

Vertex indexing conventions (used by the scripted strategies, which rebuild
these coordinate maps from the same helpers):

* grid:   (row i, col j), 1-based, maps to (i-1)*n + (j-1).
* slices: (x, y, z) with x in 1..3k and (y, z) either (inf, inf) or in
          [k] x [5k+2]; each slice occupies a contiguous index block, the
          hub (x, inf, inf) first.
* cops-bane: expander vertices 0..N-1, hub N, then 2D interior vertices
          per arm in arm order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    Edge,
    MlgError,
    MultiLayerGraph,
    RobberSpec,
    bfs_dist_adj,
    girth,
    is_connected_edges,
    min_degree,
)


class ConstructionError(MlgError):
    """A generated object failed one of its family invariants."""


@dataclass
class ConstructionReport:
    """Validation record emitted by every generator."""

    family: str
    params: dict
    layer_connected: tuple[bool, ...]
    degree_stats: tuple[tuple[int, int], ...]  # per layer (min, max)
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, value="") -> None:
        self.checks.append((name, bool(passed), str(value)))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def render(self) -> str:
        lines = [f"FAMILY {self.family}"]
        for key, val in sorted(self.params.items()):
            lines.append(f"PARAM {key}={val}")
        for i, (conn, (dmin, dmax)) in enumerate(zip(self.layer_connected, self.degree_stats)):
            lines.append(f"LAYER {i + 1} connected={conn} degmin={dmin} degmax={dmax}")
        for name, passed, value in self.checks:
            tail = f" value={value}" if value else ""
            lines.append(f"CHECK {name} {'PASS' if passed else 'FAIL'}{tail}")
        return "\n".join(lines) + "\n"


def _report(family: str, params: dict, g: MultiLayerGraph) -> ConstructionReport:
    conn = []
    stats = []
    for i in range(g.tau):
        view = g.layer_view(i)
        conn.append(view.n_components == 1)
        stats.append((min(view.degrees), max(view.degrees)))
    return ConstructionReport(family, params, tuple(conn), tuple(stats))


def _finish(g: MultiLayerGraph, report: ConstructionReport) -> tuple[MultiLayerGraph, ConstructionReport]:
    if not report.ok:
        failed = ", ".join(f"{n}={v}" for n, p, v in report.checks if not p)
        raise ConstructionError(f"{report.family}: invariant failure: {failed}")
    return g, report


# -- two-layer grid -------------------------------------------------------------


def grid_index(i: int, j: int, n: int) -> int:
    """Map 1-based grid coordinates (row i, col j) to a vertex index."""

    return (i - 1) * n + (j - 1)


def grid_coords(v: int, n: int) -> tuple[int, int]:
    return v // n + 1, v % n + 1


def grid_layers(n: int) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
    """Horizontal and vertical layers with their parity boundary edges."""

    def e(a, b):
        return (a, b) if a < b else (b, a)

    ch: set[Edge] = set()
    cv: set[Edge] = set()
    for i in range(1, n + 1):
        for j in range(1, n):
            ch.add(e(grid_index(i, j, n), grid_index(i, j + 1, n)))
    for i in range(1, n):
        if i % 2 == 0:
            ch.add(e(grid_index(i, 1, n), grid_index(i + 1, 1, n)))
        else:
            ch.add(e(grid_index(i, n, n), grid_index(i + 1, n, n)))
    for j in range(1, n + 1):
        for i in range(1, n):
            cv.add(e(grid_index(i, j, n), grid_index(i + 1, j, n)))
    for j in range(1, n):
        if j % 2 == 0:
            cv.add(e(grid_index(1, j, n), grid_index(1, j + 1, n)))
        else:
            cv.add(e(grid_index(n, j, n), grid_index(n, j + 1, n)))
    return tuple(sorted(ch)), tuple(sorted(cv))


def gen_grid(n: int) -> tuple[MultiLayerGraph, ConstructionReport]:
    """Two-layer n x n grid: rows in one layer, columns in the other, with
    boundary transition edges shared by both."""

    if n < 2:
        raise MlgError(f"grid needs n >= 2, got {n}")
    ch, cv = grid_layers(n)
    g = MultiLayerGraph(n=n * n, layers=(ch, cv), robber_spec=RobberSpec.UNION).with_tag(f"grid:{n}")
    report = _report("grid", {"n": n}, g)
    report.add("layers_connected", all(report.layer_connected))
    shared = set(ch) & set(cv)
    expected_shared = set()
    for i in range(1, n):
        if i % 2 == 0:
            expected_shared.add((grid_index(i, 1, n), grid_index(i + 1, 1, n)))
        else:
            expected_shared.add((grid_index(i, n, n), grid_index(i + 1, n, n)))
    for j in range(1, n):
        if j % 2 == 0:
            expected_shared.add((grid_index(1, j, n), grid_index(1, j + 1, n)))
        else:
            expected_shared.add((grid_index(n, j, n), grid_index(n, j + 1, n)))
    report.add("shared_boundary_edges", shared == expected_shared, len(shared))
    report.add("vertex_count", g.n == n * n, g.n)
    return _finish(g, report)


# -- two mirrored copies of a high-girth base ------------------------------------


def petersen() -> tuple[Edge, ...]:
    """Petersen graph: outer 5-cycle, inner 5-star, spokes."""

    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((i + 5, (i + 2) % 5 + 5))
    return tuple(sorted((min(u, v), max(u, v)) for u, v in edges))


def gen_min_counterexample(
    base: tuple[tuple[Edge, ...], int] | None = None,
    min_base_degree: int = 2,
) -> tuple[MultiLayerGraph, ConstructionReport]:
    """Two-layer graph on 2n-1 vertices whose layers each need many cops
    while two cops (one per layer) win by camping on the shared hub.

    Layer 1 carries the base graph on vertices 0..n-1 plus pendant edges
    from the hub n-1 to every vertex n..2n-2; layer 2 carries the base
    mirrored onto n-1..2n-2 plus pendants from the hub to 0..n-2.  The base
    must have girth >= 5 and minimum degree >= min_base_degree.
    """

    if base is None:
        base_edges, nb = petersen(), 10
    else:
        base_edges, nb = base
    gi = girth(base_edges, nb)
    dmin = min_degree(base_edges, nb)
    if gi < 5:
        raise ConstructionError(f"base graph has girth {gi}, need >= 5")
    if dmin < min_base_degree:
        raise ConstructionError(f"base graph has min degree {dmin}, need >= {min_base_degree}")
    if not is_connected_edges(base_edges, nb):
        raise ConstructionError("base graph must be connected")

    n = nb
    hub = n - 1
    e1 = set(base_edges)
    e1.update((hub, q) for q in range(n, 2 * n - 1))
    mirror = lambda i: 2 * n - 2 - i  # vertex i of the base, second copy
    e2 = {(min(mirror(u), mirror(v)), max(mirror(u), mirror(v))) for u, v in base_edges}
    e2.update((q, hub) for q in range(0, hub))
    g = MultiLayerGraph(
        n=2 * n - 1,
        layers=(tuple(sorted(e1)), tuple(sorted(e2))),
        robber_spec=RobberSpec.UNION,
    ).with_tag(f"mirror:{n}")
    report = _report("mirror", {"base_n": nb, "girth": gi, "min_degree": dmin}, g)
    report.add("layers_connected", all(report.layer_connected))
    report.add("vertex_count", g.n == 2 * n - 1, g.n)
    report.add("layer_sizes", len(e1) == len(base_edges) + n - 1 and len(e2) == len(base_edges) + n - 1)
    return _finish(g, report)


# -- slices construction ----------------------------------------------------------


def slices_vertex_count(k: int) -> int:
    return 3 * k * (1 + k * (5 * k + 2))

def slices_index(k: int, x: int, y, z) -> int:
    """Dense index for slice vertex (x, y, z); (inf, inf) is the slice hub."""

    per = 1 + k * (5 * k + 2)
    base = (x - 1) * per
    if y == math.inf:
        return base
    return base + 1 + (y - 1) * (5 * k + 2) + (z - 1)


def slices_coords(k: int, v: int):
    per = 1 + k * (5 * k + 2)
    x, r = divmod(v, per)
    if r == 0:
        return x + 1, math.inf, math.inf
    y, z = divmod(r - 1, 5 * k + 2)
    return x + 1, y + 1, z + 1


def slices_layers(k: int) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
    """The two cop layers of the 3k-slice construction.

    Within each slice: k paths of 5k vertices shared by both layers, fanned
    out from the slice hub; a 2k-ring on the (y, 5k+1)/(y, 5k+2) vertices
    alternating between the layers; a parity-dependent connector from each
    path end to the ring.  Between slices: a shared hub spine, and ring
    rungs whose layer alternates with x.  Layer 2 additionally gets hub
    edges to the ring of slice 1 to stay connected.
    """

    def e(a, b):
        return (a, b) if a < b else (b, a)

    idx = lambda x, y, z: slices_index(k, x, y, z)
    c1: set[Edge] = set()
    c2: set[Edge] = set()
    for x in range(1, 3 * k + 1):
        for y in range(1, k + 1):
            for z in range(1, 5 * k):
                both = e(idx(x, y, z), idx(x, y, z + 1))
                c1.add(both)
                c2.add(both)
            hubp = e(idx(x, math.inf, math.inf), idx(x, y, 1))
            c1.add(hubp)
            c2.add(hubp)
            c1.add(e(idx(x, y, 5 * k + 1), idx(x, y, 5 * k + 2)))
            c2.add(e(idx(x, y, 5 * k + 1), idx(x, y % k + 1, 5 * k + 2)))
            parity = e(idx(x, y, 5 * k), idx(x, y, 5 * k + 1))
            (c1 if x % 2 == 1 else c2).add(parity)
    for x in range(1, 3 * k):
        spine = e(idx(x, math.inf, math.inf), idx(x + 1, math.inf, math.inf))
        c1.add(spine)
        c2.add(spine)
        for y in range(1, k + 1):
            for z in (1, 2):
                rung = e(idx(x, y, 5 * k + z), idx(x + 1, y, 5 * k + z))
                (c1 if x % 2 == 1 else c2).add(rung)
    for y in range(1, k + 1):
        for z in (1, 2):
            c2.add(e(idx(1, math.inf, math.inf), idx(1, y, 5 * k + z)))
    return tuple(sorted(c1)), tuple(sorted(c2))


def slices_slice_vertices(k: int, x: int) -> list[int]:
    per = 1 + k * (5 * k + 2)
    return list(range((x - 1) * per, x * per))


def gen_slices(k: int) -> tuple[MultiLayerGraph, ConstructionReport]:
    """Construction whose individual layers have cop number <= 2 but whose
    multi-layer cop number is at least k."""

    if k < 1:
        raise MlgError(f"slices needs k >= 1, got {k}")
    c1, c2 = slices_layers(k)
    nv = slices_vertex_count(k)
    g = MultiLayerGraph(n=nv, layers=(c1, c2), robber_spec=RobberSpec.UNION).with_tag(f"slices:{k}")
    report = _report("slices", {"k": k}, g)
    report.add("vertex_count", g.n == nv, g.n)
    report.add("layers_connected", all(report.layer_connected))
    from .core import flatten

    report.add("union_connected", is_connected_edges(flatten(g), g.n))
    # slices x >= 2 are pairwise isomorphic: identical under the index shift
    if k >= 1 and 3 * k >= 3:
        per = 1 + k * (5 * k + 2)
        ok = True
        union = set(c1) | set(c2)
        ref = {(u % per, v % per) for u, v in union if 2 * per <= u < 3 * per and 2 * per <= v < 3 * per}
        for x in range(4, 3 * k + 1):
            lo, hi = (x - 1) * per, x * per
            cur = {(u % per, v % per) for u, v in union if lo <= u < hi and lo <= v < hi}
            if cur != ref:
                ok = False
                break
        report.add("interior_slices_isomorphic", ok)
    return _finish(g, report)


def slices_induced_robber_slice(k: int, x: int) -> tuple[tuple[Edge, ...], int]:
    """Induced subgraph of the robber layer on slice x, relabelled to 0..m-1."""

    g, _ = gen_slices(k)
    from .core import flatten

    union = flatten(g)
    verts = slices_slice_vertices(k, x)
    remap = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        sorted((remap[u], remap[v]) for u, v in union if u in remap and v in remap)
    )
    return edges, len(verts)


# -- cycle split into two matchings ------------------------------------------------


def gen_cycle_matchings(n: int) -> tuple[MultiLayerGraph, ConstructionReport]:
    """2n-cycle whose two cop layers are the alternating perfect matchings."""

    if n < 2:
        raise MlgError(f"cycle matchings need n >= 2, got {n}")
    nv = 2 * n
    c1 = tuple(sorted((2 * i, 2 * i + 1) for i in range(n)))
    c2 = tuple(sorted((min(2 * i + 1, (2 * i + 2) % nv), max(2 * i + 1, (2 * i + 2) % nv)) for i in range(n)))
    g = MultiLayerGraph(n=nv, layers=(c1, c2), robber_spec=RobberSpec.UNION).with_tag(f"cycle-matchings:{n}")
    report = _report("cycle-matchings", {"n": n, "vertices": nv}, g)
    from .core import flatten

    union = flatten(g)
    report.add("union_is_cycle", len(union) == nv and is_connected_edges(union, nv))
    report.add("each_layer_n_components", all(g.layer_view(i).n_components == n for i in (0, 1)))
    report.add("layers_disjoint", not (set(c1) & set(c2)))
    return _finish(g, report)


# -- free-layer-choice reduction from domination -----------------------------------


def gen_domset_reduction(
    edges: tuple[Edge, ...] | list[Edge], n: int
) -> tuple[MultiLayerGraph, ConstructionReport]:
    """One star layer per vertex of a simple graph: layer u holds the edges
    from u to its neighbours.  Posed as a free-layer-choice instance."""

    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    layers = tuple(
        tuple(sorted((min(u, w), max(u, w)) for w in adj[u])) for u in range(n)
    )
    g = MultiLayerGraph(n=n, layers=layers, robber_spec=RobberSpec.UNION).with_tag(f"domset-reduction:{n}")
    report = _report("domset-reduction", {"n": n, "m": len(tuple(edges))}, g)
    from .core import flatten

    report.add("union_matches_input", set(flatten(g)) == {(min(u, v), max(u, v)) for u, v in edges})
    report.add("layer_count", g.tau == n, g.tau)
    star_ok = all(all(u in e for e in layers[u]) for u in range(n))
    report.add("layers_are_stars", star_ok)
    return _finish(g, report)


# -- clique partition into connected near-regular layers ---------------------------


def _soifer_classes_even(ell: int) -> list[list[Edge]]:
    """Round-robin 1-factorisation of K_{2l}: class i pairs the polygon
    vertex i with the centre 2l-1 plus all chords perpendicular to it."""

    m = 2 * ell - 1
    classes = []
    for i in range(m):
        cls = [(min(i, m), max(i, m))]
        for j in range(1, ell):
            a = (i - j) % m
            b = (i + j) % m
            cls.append((min(a, b), max(a, b)))
        classes.append(cls)
    return classes


def _rotational_classes_odd(n: int) -> list[list[Edge]]:
    """Near-1-factorisation of K_n for odd n: class r holds {r-j, r+j} mod n."""

    classes = []
    for r in range(n):
        cls = []
        for j in range(1, (n - 1) // 2 + 1):
            a = (r - j) % n
            b = (r + j) % n
            cls.append((min(a, b), max(a, b)))
        classes.append(cls)
    return classes


def _interval_sizes(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + 1 if i < extra else base for i in range(parts)]


def gen_soifer(n: int, tau: int) -> tuple[MultiLayerGraph, ConstructionReport]:
    """Partition of K_n into tau connected layers of maximum degree <= ceil(n/tau).

    Even n merges consecutive colour classes of the regular-polygon
    1-factorisation; odd n merges consecutive classes of the rotational
    near-1-factorisation, which keeps the same degree guarantee without an
    irregular extra vertex.  The robber layer is complete.
    """

    if not (1 <= tau < n // 2):
        raise MlgError(f"need 1 <= tau < floor(n/2), got tau={tau}, n={n}")
    if n % 2 == 0:
        classes = _soifer_classes_even(n // 2)
    else:
        classes = _rotational_classes_odd(n)
    sizes = _interval_sizes(len(classes), tau)
    layers: list[tuple[Edge, ...]] = []
    at = 0
    for s in sizes:
        merged: list[Edge] = []
        for cls in classes[at : at + s]:
            merged.extend(cls)
        layers.append(tuple(sorted(merged)))
        at += s

    g = MultiLayerGraph(
        n=n, layers=tuple(layers), robber_spec=RobberSpec.COMPLETE
    ).with_tag(f"soifer:{n},{tau}")
    report = _report("soifer", {"n": n, "tau": tau}, g)
    report.add("layers_connected", all(report.layer_connected))
    from .core import flatten

    all_edges = {(u, v) for u in range(n) for v in range(u + 1, n)}
    report.add("union_is_complete", set(flatten(g)) == all_edges)
    total = sum(len(layer) for layer in layers)
    report.add("layers_edge_disjoint", total == len(all_edges), total)
    max_deg = max(max(g.layer_view(i).degrees) for i in range(tau))
    report.add("max_layer_degree_le_ceil", max_deg <= math.ceil(n / tau), max_deg)
    return _finish(g, report)


# -- random layered graphs ----------------------------------------------------------


def gen_gnp(n: int, p: float, seed: int) -> tuple[Edge, ...]:
    """Binomial random graph edge set, deterministic per seed."""

    rng = random.Random(f"gnp:{n}:{seed}")
    if p >= 1.0:
        return tuple((u, v) for u in range(n) for v in range(u + 1, n))
    if p <= 0.0:
        return ()
    return tuple(
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    )


def gen_random_layers(
    n: int, p: float, tau: int, seed: int, robber: str = "COMPLETE"
) -> tuple[MultiLayerGraph, ConstructionReport]:
    """tau layers sampled independently so the flattened graph is G(n, p).

    Each layer includes each pair with probability pstar(p, tau)/tau, the
    splitting probability whose tau-fold union reproduces density p.
    """

    from .bounds import pstar

    if not (0.0 <= p <= 1.0):
        raise MlgError(f"p must be in [0, 1], got {p}")
    q = pstar(p, tau) / tau
    rng = random.Random(f"layers:{n}:{tau}:{seed}")
    layers = []
    for _ in range(tau):
        layers.append(
            tuple(
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < q
            )
        )
    spec = RobberSpec.COMPLETE if robber == "COMPLETE" else RobberSpec.UNION
    g = MultiLayerGraph(n=n, layers=tuple(layers), robber_spec=spec).with_tag(
        f"random-layers:{n},{p},{tau},{seed}"
    )
    report = _report("random-layers", {"n": n, "p": p, "tau": tau, "seed": seed}, g)
    report.add("per_layer_probability", True, f"{q:.6f}")
    return _finish(g, report)


def gen_random_regular(n: int, d: int, seed: int, max_tries: int = 1000) -> tuple[Edge, ...]:
    """Random d-regular simple graph via the configuration model with rejection."""

    if (n * d) % 2 != 0:
        raise MlgError("n*d must be even for a d-regular graph")
    if not 0 <= d < n:
        raise MlgError("need 0 <= d < n")
    rng = random.Random(f"regular:{n}:{d}:{seed}")
    for _ in range(max_tries):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges: set[Edge] = set()
        ok = True
        it = iter(stubs)
        for a, b in zip(it, it):
            if a == b:
                ok = False
                break
            e = (min(a, b), max(a, b))
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return tuple(sorted(edges))
    raise ConstructionError(f"failed to sample a simple {d}-regular graph in {max_tries} tries")


# -- cops-bane family -----------------------------------------------------------------


def _edge_coloring_clustering(edges: list[Edge], n: int, coloring: dict[Edge, int]) -> int:
    """Largest monochromatic component size (in vertices)."""

    best = 0
    for colour in (0, 1):
        adj: dict[int, list[int]] = {}
        for e in edges:
            if coloring[e] == colour:
                adj.setdefault(e[0], []).append(e[1])
                adj.setdefault(e[1], []).append(e[0])
        seen: set[int] = set()
        for s in adj:
            if s in seen:
                continue
            size = 0
            stack = [s]
            seen.add(s)
            while stack:
                x = stack.pop()
                size += 1
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            best = max(best, size)
    return best


def _mono_components(edges: list[Edge], n: int, coloring: dict[Edge, int], colour: int) -> list[set[int]]:
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for e in edges:
        if coloring[e] == colour:
            adj[e[0]].append(e[1])
            adj[e[1]].append(e[0])
    comps = []
    seen: set[int] = set()
    for s in range(n):
        if s in seen or not adj[s]:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def two_edge_coloring(edges: list[Edge], n: int, seed: int, iteration_cap: int = 20000) -> tuple[dict[Edge, int], int]:
    """Repair-based local search for a 2-edge-colouring with small
    monochromatic components.  Returns the colouring and the achieved
    clustering (largest monochromatic component, in vertices)."""

    rng = random.Random(f"colour:{seed}")
    coloring = {e: rng.randrange(2) for e in edges}
    current = _edge_coloring_clustering(edges, n, coloring)
    for _ in range(iteration_cap):
        if current <= 2:
            break
        # flip a random edge out of a largest monochromatic component
        worst_colour, worst_comp = None, None
        for colour in (0, 1):
            for comp in _mono_components(edges, n, coloring, colour):
                if worst_comp is None or len(comp) > len(worst_comp):
                    worst_comp, worst_colour = comp, colour
        candidates = [e for e in edges if coloring[e] == worst_colour and e[0] in worst_comp and e[1] in worst_comp]
        e = rng.choice(candidates)
        coloring[e] ^= 1
        new = _edge_coloring_clustering(edges, n, coloring)
        if new > current:
            coloring[e] ^= 1
        else:
            current = new
    return coloring, current


def exact_vertex_expansion(edges: list[Edge], n: int) -> float:
    """min over nonempty S with |S| <= n/2 of |N(S) \\ S| / |S| (exhaustive)."""

    nbr = [0] * n
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    best = math.inf
    for size in range(1, n // 2 + 1):
        for subset in combinations(range(n), size):
            mask = 0
            out = 0
            for v in subset:
                mask |= 1 << v
            for v in subset:
                out |= nbr[v]
            out &= ~mask
            ratio = bin(out).count("1") / size
            if ratio < best:
                best = ratio
    return best


def sampled_vertex_expansion(edges: list[Edge], n: int, seed: int, samples: int = 20000) -> float:
    """Lowest outside-neighbourhood ratio over random subsets (an upper
    bound on the true expansion; reported as a heuristic estimate)."""

    rng = random.Random(f"expansion:{seed}")
    nbr: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        nbr[u].add(v)
        nbr[v].add(u)
    best = math.inf
    for _ in range(samples):
        size = rng.randint(1, n // 2)
        subset = set(rng.sample(range(n), size))
        out = set()
        for v in subset:
            out |= nbr[v]
        ratio = len(out - subset) / size
        best = min(best, ratio)
    return best


def graph_diameter(edges: list[Edge], n: int) -> int:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    diam = 0
    for s in range(n):
        dist = bfs_dist_adj(adj, s)
        worst = max(dist)
        if worst == math.inf:
            raise ConstructionError("diameter of a disconnected graph")
        diam = max(diam, int(worst))
    return diam


EXPANSION_EXACT_LIMIT = 20


@dataclass
class CopsbaneLayout:
    """Coordinate metadata for the cops-bane construction."""

    N: int
    D: int
    hub: int
    arm_interior: dict[int, list[int]]  # expander vertex -> interior path, hub side first
    expander_edges: tuple[Edge, ...]
    coloring: dict[Edge, int]
    clustering: int
    expansion: float
    expansion_exact: bool


def copsbane_layout(
    N: int,
    alpha: float = 0.3,
    D: int | None = None,
    seed: int = 0,
    clustering_cap: int = 2000,
    max_resamples: int = 50,
) -> CopsbaneLayout:
    """Sample the expander core, colour it, and lay out the star arms."""

    if N < 8 or N % 2 != 0:
        raise MlgError(f"cops-bane needs even N >= 8, got {N}")
    expansion = -math.inf
    exact = N <= EXPANSION_EXACT_LIMIT
    x_edges: tuple[Edge, ...] = ()
    for attempt in range(max_resamples):
        x_edges = gen_random_regular(N, 3, seed * 1000 + attempt)
        if not is_connected_edges(x_edges, N):
            continue
        expansion = (
            exact_vertex_expansion(list(x_edges), N)
            if exact
            else sampled_vertex_expansion(list(x_edges), N, seed * 1000 + attempt)
        )
        if expansion >= alpha:
            break
    else:
        raise ConstructionError(
            f"no 3-regular graph with expansion >= {alpha} found in {max_resamples} attempts"
        )
    coloring, clustering = two_edge_coloring(list(x_edges), N, seed)
    if clustering > clustering_cap:
        raise ConstructionError(
            f"achieved clustering {clustering} exceeds cap {clustering_cap}"
        )
    if D is None:
        D = 2 * graph_diameter(list(x_edges), N)
    hub = N
    arm_interior: dict[int, list[int]] = {}
    nxt = N + 1
    for x in range(N):
        arm_interior[x] = list(range(nxt, nxt + 2 * D))
        nxt += 2 * D
    return CopsbaneLayout(
        N=N,
        D=D,
        hub=hub,
        arm_interior=arm_interior,
        expander_edges=x_edges,
        coloring=coloring,
        clustering=clustering,
        expansion=expansion,
        expansion_exact=exact,
    )


def gen_copsbane(
    N: int,
    alpha: float = 0.3,
    D: int | None = None,
    seed: int = 0,
    clustering_cap: int = 2000,
) -> tuple[MultiLayerGraph, ConstructionReport, CopsbaneLayout]:
    """Expander core plus a subdivided star: each cop layer is one colour
    class of the core together with all star arms, the robber layer is the
    core itself.  Arms have 2D+1 edges so cops crossing between core
    components through the hub are visible long in advance."""

    layout = copsbane_layout(N, alpha=alpha, D=D, seed=seed, clustering_cap=clustering_cap)
    D = layout.D
    star: list[Edge] = []
    for x in range(N):
        path = [layout.hub] + layout.arm_interior[x] + [x]
        star.extend((min(a, b), max(a, b)) for a, b in zip(path, path[1:]))
    e1 = [e for e in layout.expander_edges if layout.coloring[e] == 0]
    e2 = [e for e in layout.expander_edges if layout.coloring[e] == 1]
    c1 = tuple(sorted(e1 + star))
    c2 = tuple(sorted(e2 + star))
    nv = N + 1 + N * 2 * D
    g = MultiLayerGraph(
        n=nv,
        layers=(c1, c2),
        robber_spec=RobberSpec.EXPLICIT,
        robber_edges=layout.expander_edges,
    ).with_tag(f"copsbane:{N},{seed}")
    report = _report(
        "copsbane",
        {"N": N, "alpha": alpha, "D": D, "seed": seed},
        g,
    )
    report.add("vertex_count", g.n == nv, g.n)
    degs = [0] * N
    for u, v in layout.expander_edges:
        degs[u] += 1
        degs[v] += 1
    report.add("core_3_regular", all(d == 3 for d in degs))
    report.add("core_connected", is_connected_edges(layout.expander_edges, N))
    report.add("layers_connected", all(report.layer_connected))
    arm_len = 2 * D + 1
    report.add("arm_length", all(len(layout.arm_interior[x]) + 1 == arm_len for x in range(N)), arm_len)
    kind = "exact" if layout.expansion_exact else "HEURISTIC"
    report.add("expansion", layout.expansion >= alpha, f"{layout.expansion:.4f} ({kind})")
    report.add("clustering", layout.clustering <= clustering_cap, layout.clustering)
    mono_ok = True
    for colour, edges in ((0, e1), (1, e2)):
        for comp in _mono_components(list(layout.expander_edges), N, layout.coloring, colour):
            if len(comp) > layout.clustering:
                mono_ok = False
    report.add("mono_components_le_clustering", mono_ok)
    if not report.ok:
        failed = ", ".join(f"{n_}={v}" for n_, p, v in report.checks if not p)
        raise ConstructionError(f"copsbane: invariant failure: {failed}")
    return g, report, layout
