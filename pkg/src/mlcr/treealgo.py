"""Polynomial decision procedure when the robber layer is a tree.

A cop assigned to a layer is pinned, for the whole game, to the component
of that layer it starts in; only this component choice matters before
distances come into play.  For a fixed assignment we therefore quantify
over "component profiles" (one start component per cop, singletons of
isolated vertices included) and test each profile for a robber win:

* an unpoliced vertex (no cop's component contains it) lets the robber sit
  there forever;
* a robber's edge -- a tree edge whose endpoints are policed by at most one
  cop, that cop needing >= 3 steps (or being unable to travel) between
  them -- lets the robber oscillate between the endpoints.

If some profile admits neither, the cops win from it by a squeeze that
shrinks the robber's territory by at least one vertex per iteration; the
simulator's tree_squeeze strategy plays it out.  An assignment is cop-win
iff a clean profile exists; the full decision tries all tau^k assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .core import INF, MlgError, MultiLayerGraph, bfs_dist_adj, is_connected_edges
from .solver import AllocationPlan, GameVerdict, Winner, compositions


def is_tree(edges: Sequence[tuple[int, int]], n: int) -> bool:
    """Connected spanning graph with exactly n-1 edges."""

    return len(edges) == n - 1 and is_connected_edges(edges, n)


@dataclass(frozen=True)
class RobbersEdgeCertificate:
    """Witness that the robber wins a given assignment.

    `reaching_cops` lists the (cop index, layer) pairs able to reach u or v
    under the witnessing profile; `blocking_distance` is the layer distance
    between u and v for the unique reaching cop (inf when no cop reaches
    both endpoints).  Usually at most one cop reaches the pair; when the
    witness is an entirely unpoliced vertex whose tree neighbours are all
    multiply policed, the listed edge can carry more reachers, and the
    unpoliced endpoint is still a safe camp.
    """

    edge: tuple[int, int]
    reaching_cops: tuple[tuple[int, int], ...]
    blocking_distance: float

    def render(self) -> str:
        d = "inf" if self.blocking_distance == INF else str(int(self.blocking_distance))
        u, v = self.edge
        return f"ROBBERS_EDGE {u} {v} ncops={len(self.reaching_cops)} dist={d}"


def _profile_robbers_edge(
    g: MultiLayerGraph,
    assignment: Sequence[int],
    profile: Sequence[frozenset[int]],
    robber_edges: Sequence[tuple[int, int]],
) -> RobbersEdgeCertificate | None:
    """First robber-win witness for one component profile, or None if clean."""

    n = g.n
    policed_by: list[list[int]] = [[] for _ in range(n)]
    for c, comp in enumerate(profile):
        for v in comp:
            policed_by[v].append(c)
    for v in range(n):
        if not policed_by[v]:
            # the robber camps on v; witness with the first tree edge at v
            for u, w in robber_edges:
                if u == v or w == v:
                    reach = tuple((c, assignment[c]) for c in sorted(set(policed_by[u] + policed_by[w])))
                    if len(reach) <= 1:
                        return RobbersEdgeCertificate((u, w), reach, INF)
            for u, w in robber_edges:
                if u == v or w == v:
                    reach = tuple((c, assignment[c]) for c in sorted(set(policed_by[u] + policed_by[w])))
                    return RobbersEdgeCertificate((u, w), reach, INF)
            raise MlgError(f"vertex {v} has no incident robber edge")
    for u, v in robber_edges:
        reach = sorted(set(policed_by[u] + policed_by[v]))
        if len(reach) >= 2:
            continue
        c = reach[0]
        comp = profile[c]
        if u in comp and v in comp:
            dist = bfs_dist_adj(g.layer_view(assignment[c]).adjacency, u)[v]
        else:
            dist = INF
        if dist >= 3:
            return RobbersEdgeCertificate((u, v), ((c, assignment[c]),), dist)
    return None


def _component_choices(g: MultiLayerGraph, layer: int) -> list[frozenset[int]]:
    """Start components a cop on this layer can choose, most useful first."""

    comps = g.layer_view(layer).components_as_sets()
    return sorted(comps, key=lambda c: (-len(c), min(c)))


def find_robbers_edge(
    g: MultiLayerGraph,
    assignment: Sequence[int],
    profile_out: list | None = None,
) -> RobbersEdgeCertificate | None:
    """Robber-win certificate for an assignment, or None when the cops can
    pick start components that leave no robber's edge.

    When every profile is dirty the certificate of the first profile (in
    component order) is returned; if `profile_out` is given, the clean
    profile found (if any) is appended to it.
    """

    robber_edges = g.robber_layer_edges()
    if not is_tree(robber_edges, g.n):
        raise MlgError("robber layer is not a tree")
    choices = [_component_choices(g, layer) for layer in assignment]
    first_cert: RobbersEdgeCertificate | None = None
    for profile in product(*choices):
        cert = _profile_robbers_edge(g, assignment, profile, robber_edges)
        if cert is None:
            if profile_out is not None:
                profile_out.append(tuple(profile))
            return None
        if first_cert is None:
            first_cert = cert
    if first_cert is None:
        raise MlgError("assignment has no cops; cannot certify")
    return first_cert


def decide_tree_robber(
    g: MultiLayerGraph, k: int
) -> tuple[GameVerdict, AllocationPlan | None]:
    """Tree-robber decision over all allocations of k cops to layers.

    COP iff some assignment has no robber's edge; the winning allocation is
    the first one found in the composition order used by the exact solver.
    """

    robber_edges = g.robber_layer_edges()
    if not is_tree(robber_edges, g.n):
        raise MlgError("robber layer is not a tree")
    if k <= 0:
        return GameVerdict(Winner.ROBBER, safe_vertex=0), None
    last_cert: RobbersEdgeCertificate | None = None
    for comp in compositions(k, g.tau):
        plan = AllocationPlan(comp)
        assignment = plan.assignment()
        profile_box: list = []
        cert = find_robbers_edge(g, assignment, profile_out=profile_box)
        if cert is None:
            profile = profile_box[0]
            placement = tuple(min(component) for component in profile)
            return GameVerdict(Winner.COP, assignment=assignment, placement=placement), plan
        last_cert = cert
    # the certificate is the robber's witness; a single safe start vertex is
    # placement-dependent, so none is claimed here
    return GameVerdict(Winner.ROBBER, certificate=last_cert), None


def winning_profile(g: MultiLayerGraph, assignment: Sequence[int]) -> tuple[frozenset[int], ...] | None:
    """Clean component profile for an assignment, if one exists."""

    box: list = []
    if find_robbers_edge(g, assignment, profile_out=box) is None:
        return box[0]
    return None
