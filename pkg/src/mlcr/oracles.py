"""Independent reference implementations for cross-checking the fast paths.

Everything here is deliberately naive: Gauss-Seidel fixed points instead of
retrograde BFS, explicit successor enumeration instead of packed arrays, and
exhaustive search for the combinatorial quantities.  These routines are only
run on small instances.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .core import AllocationPlan, MultiLayerGraph, bfs_dist_adj


def _agent_adjacency(g: MultiLayerGraph, assignment: Sequence[int]):
    """Per-agent move sets including stay; agent 0 is the robber."""

    robber_adj = g.robber_view().adjacency
    moves = [[sorted(set(robber_adj[v]) | {v}) for v in range(g.n)]]
    for layer in assignment:
        adj = g.layer_view(layer).adjacency
        moves.append([sorted(set(adj[v]) | {v}) for v in range(g.n)])
    return moves


def naive_copwin_status(g: MultiLayerGraph, assignment: Sequence[int]) -> dict[tuple, bool]:
    """Cop-win classification of every state by Gauss-Seidel iteration.

    States are (p0, (p1..pk), t); a state is cop-win if captured, if the cop
    to move has a cop-win successor, or if every robber move (stay included)
    is cop-win.  Iterating the monotone update to a fixed point from
    all-False yields exactly the cop-win set.
    """

    n, k = g.n, len(assignment)
    moves = _agent_adjacency(g, assignment)
    states = [
        (p0, cops, t)
        for p0 in range(n)
        for cops in product(range(n), repeat=k)
        for t in range(k + 1)
    ]
    win = {s: s[0] in s[1] for s in states}
    changed = True
    while changed:
        changed = False
        for s in states:
            if win[s]:
                continue
            p0, cops, t = s
            if t < k:
                mover = t
                ok = False
                for q in moves[t + 1][cops[mover]]:
                    nc = cops[:mover] + (q,) + cops[mover + 1 :]
                    if win[(p0, nc, t + 1)]:
                        ok = True
                        break
            else:
                ok = True
                for q in moves[0][p0]:
                    if not win[(q, cops, 0)]:
                        ok = False
                        break
            if ok:
                win[s] = True
                changed = True
    return win


def naive_allocated_verdict(g: MultiLayerGraph, alloc: AllocationPlan) -> str:
    """COP/ROBBER via the naive status map (cops place, robber replies)."""

    if alloc.total == 0:
        return "ROBBER"
    assignment = alloc.assignment()
    win = naive_copwin_status(g, assignment)
    n, k = g.n, len(assignment)
    for cops in product(range(n), repeat=k):
        if all(win[(p0, cops, 0)] for p0 in range(n)):
            return "COP"
    return "ROBBER"


def simultaneous_move_verdict(g: MultiLayerGraph, alloc: AllocationPlan) -> str:
    """Verdict under team moves: the cop player moves all cops at once.

    Used to confirm that the one-agent-at-a-time turn encoding decides the
    same game.
    """

    if alloc.total == 0:
        return "ROBBER"
    assignment = alloc.assignment()
    n, k = g.n, len(assignment)
    moves = _agent_adjacency(g, assignment)

    states = [
        (p0, cops, side)
        for p0 in range(n)
        for cops in product(range(n), repeat=k)
        for side in (0, 1)  # 0 = cop team to move, 1 = robber to move
    ]
    win = {s: s[0] in s[1] for s in states}
    changed = True
    while changed:
        changed = False
        for s in states:
            if win[s]:
                continue
            p0, cops, side = s
            if side == 0:
                ok = any(
                    win[(p0, nc, 1)]
                    for nc in product(*(moves[c + 1][cops[c]] for c in range(k)))
                )
            else:
                ok = all(win[(q, cops, 0)] for q in moves[0][p0])
            if ok:
                win[s] = True
                changed = True
    for cops in product(range(n), repeat=k):
        if all(win[(p0, cops, 0)] for p0 in range(n)):
            return "COP"
    return "ROBBER"


# -- simple-graph helpers ---------------------------------------------------------


def brute_domination_number(edges: Sequence[tuple[int, int]], n: int) -> int:
    """Smallest dominating set of a simple graph by subset enumeration."""

    closed = [1 << v for v in range(n)]
    for u, v in edges:
        closed[u] |= 1 << v
        closed[v] |= 1 << u
    full = (1 << n) - 1
    for size in range(0, n + 1):
        for subset in combinations(range(n), size):
            mask = 0
            for v in subset:
                mask |= closed[v]
            if mask == full:
                return size
    return n


def brute_girth(edges: Sequence[tuple[int, int]], n: int) -> float:
    """Shortest cycle length by per-edge deletion and reconnection distance."""

    from .core import INF

    best = INF
    edge_list = list(edges)
    for i, (u, v) in enumerate(edge_list):
        adj = [[] for _ in range(n)]
        for j, (a, b) in enumerate(edge_list):
            if j == i:
                continue
            adj[a].append(b)
            adj[b].append(a)
        d = bfs_dist_adj(adj, u)[v]
        if d + 1 < best:
            best = d + 1
    return best


def brute_treewidth(edges: Sequence[tuple[int, int]], n: int) -> int:
    """Treewidth as the best elimination ordering, tried exhaustively (n <= 8)."""

    from itertools import permutations

    if n > 8:
        raise ValueError("brute_treewidth is for n <= 8")
    base = [set() for _ in range(n)]
    for u, v in edges:
        base[u].add(v)
        base[v].add(u)
    best = n - 1
    for order in permutations(range(n)):
        adj = [set(a) for a in base]
        alive = [True] * n
        width = 0
        for v in order:
            nbrs = [w for w in adj[v] if alive[w]]
            width = max(width, len(nbrs))
            if width >= best:
                break
            for a in nbrs:
                for b in nbrs:
                    if a != b:
                        adj[a].add(b)
            alive[v] = False
        best = min(best, width)
    return best


def brute_shortest_cop_distance(edges: Sequence[tuple[int, int]], n: int, s: int, t: int) -> float:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return bfs_dist_adj(adj, s)[t]
