"""Lower- and upper-bound machinery for the multi-layer cop number.

Lower bounds: multi-layer existential closure (a robber that always has an
unthreatened neighbour survives k cops) and its closed-neighbourhood-count
specialisation for complete robber layers.  Upper bounds: multi-layer
dominating sets (exact branch and bound, greedy, and randomised rounding
with repair) and the bag-sweep certificate from a tree decomposition.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations

from .core import Edge, MlgError, MultiLayerGraph, flatten, ml_min_degree

MEC_ENUMERATION_BUDGET = 10**8
DOMSET_EXACT_LIMIT = 40
TREEWIDTH_EXACT_LIMIT = 12


class EnumerationBudgetExceeded(MlgError):
    pass


def _ncr(n: int, r: int) -> int:
    return math.comb(n, r)


# -- multi-layer existential closure ------------------------------------------------


def mec_check(g: MultiLayerGraph, k: int) -> bool:
    """Exact (1, k) multi-layer existential closure.

    For every choice of vertex sets S_1..S_tau with total size k: the union
    must not cover V, and every vertex outside the union needs a robber
    neighbour outside the union with no layer-i edge to any member of S_i.
    Short-circuits on the first violation.
    """

    n, tau = g.n, g.tau
    if k == 0:
        return n >= 1
    pairs = [(v, i) for i in range(tau) for v in range(n)]
    if _ncr(len(pairs), k) * n > MEC_ENUMERATION_BUDGET:
        raise EnumerationBudgetExceeded(
            f"(tau*n choose k)*n = {_ncr(len(pairs), k) * n} exceeds {MEC_ENUMERATION_BUDGET}"
        )
    layer_adj = [g.layer_view(i).adjacency for i in range(tau)]
    robber_adj = g.robber_view().adjacency
    robber_complete = g.robber_is_complete()

    layer_nbr_masks = [
        [sum(1 << w for w in layer_adj[i][v]) for v in range(n)] for i in range(tau)
    ]
    full = (1 << n) - 1
    for chosen in combinations(pairs, k):
        occupied = 0
        threat = 0  # vertices adjacent (in the right layer) to some chosen pair
        for v, i in chosen:
            occupied |= 1 << v
            threat |= layer_nbr_masks[i][v]
        if occupied == full:
            return False
        bad = occupied | threat
        outside = full & ~occupied
        rem = outside
        while rem:
            vbit = rem & (-rem)
            rem ^= vbit
            v = vbit.bit_length() - 1
            if robber_complete:
                candidates = outside & ~vbit & ~bad
            else:
                rnbrs = sum(1 << w for w in robber_adj[v])
                candidates = rnbrs & outside & ~bad
            if not candidates:
                return False
    return True


def clique_lb_check(g: MultiLayerGraph, k: int) -> bool:
    """Closed-neighbourhood union condition certifying mc > k for a
    complete robber layer.

    A sufficient degree certificate (1 + k + k*(max layer degree + 1) < n)
    is tried first; otherwise the condition is checked exactly when the
    enumeration fits the budget, and conservatively reported False when it
    does not.
    """

    if g.robber_spec.name != "COMPLETE":
        raise MlgError("clique_lb_check requires a COMPLETE robber layer")
    n, tau = g.n, g.tau
    if k >= n:
        return False
    if k == 0:
        return n >= 2
    max_deg = max(max(g.layer_view(i).degrees) for i in range(tau))
    if 1 + k + k * (max_deg + 1) < n:
        return True
    pairs = [(v, i) for i in range(tau) for v in range(n)]
    if _ncr(len(pairs), k) * n > MEC_ENUMERATION_BUDGET:
        return False
    closed_masks = [
        [sum(1 << w for w in g.layer_view(i).adjacency[v]) | (1 << v) for v in range(n)]
        for i in range(tau)
    ]
    full = (1 << n) - 1
    for chosen in combinations(pairs, k):
        occupied = 0
        covered = 0
        for v, i in chosen:
            occupied |= 1 << v
            covered |= closed_masks[i][v]
        if occupied == full:
            return False
        outside = full & ~occupied
        rem = outside
        while rem:
            vbit = rem & (-rem)
            rem ^= vbit
            if bin(covered | vbit).count("1") >= n:
                return False
    return True


# -- multi-layer dominating sets ------------------------------------------------------


@dataclass(frozen=True)
class DominatingSet:
    """Set of (vertex, layer) pairs covering every vertex."""

    pairs: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def is_valid(self, g: MultiLayerGraph) -> bool:
        covered = set()
        for v, i in self.pairs:
            covered.add(v)
            covered.update(g.layer_view(i).adjacency[v])
        return len(covered) == g.n

    def render(self) -> str:
        body = " ".join(f"{v}:{i + 1}" for v, i in sorted(self.pairs))
        return f"DOMSET {len(self.pairs)} {body}\n"


def _closed_masks(g: MultiLayerGraph) -> list[list[int]]:
    return [
        [sum(1 << w for w in g.layer_view(i).adjacency[v]) | (1 << v) for v in range(g.n)]
        for i in range(g.tau)
    ]


def domset_exact(g: MultiLayerGraph, size_cap: int | None = None) -> DominatingSet | None:
    """Minimum multi-layer dominating set by branch and bound.

    Branches on the lowest uncovered vertex: some chosen pair must cover
    it, so only pairs covering that vertex are tried.  Guarded to
    tau*n <= DOMSET_EXACT_LIMIT.
    """

    n, tau = g.n, g.tau
    if tau * n > DOMSET_EXACT_LIMIT:
        raise EnumerationBudgetExceeded(
            f"tau*n = {tau * n} exceeds exact limit {DOMSET_EXACT_LIMIT}"
        )
    masks = _closed_masks(g)
    full = (1 << n) - 1
    # pairs that cover vertex v
    coverers: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for i in range(tau):
        for v in range(n):
            m = masks[i][v]
            rem = m
            while rem:
                bit = rem & (-rem)
                rem ^= bit
                coverers[bit.bit_length() - 1].append((v, i, m))

    greedy = domset_greedy(g)
    best_size = len(greedy)
    best = frozenset(greedy.pairs)
    cap = best_size if size_cap is None else min(best_size, size_cap)

    def recurse(covered: int, chosen: tuple[tuple[int, int], ...]):
        nonlocal best, best_size, cap
        if covered == full:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best = frozenset(chosen)
                cap = min(cap, best_size)
            return
        if len(chosen) + 1 > cap:
            return
        uncovered = full & ~covered
        v = (uncovered & (-uncovered)).bit_length() - 1
        for w, i, m in coverers[v]:
            recurse(covered | m, chosen + ((w, i),))

    recurse(0, ())
    result = DominatingSet(best)
    if size_cap is not None and len(result) > size_cap:
        return None
    return result


def domset_greedy(g: MultiLayerGraph) -> DominatingSet:
    """Greedy cover: repeatedly take the (vertex, layer) pair covering the
    most uncovered vertices, ties by (vertex, layer) order."""

    n, tau = g.n, g.tau
    masks = _closed_masks(g)
    full = (1 << n) - 1
    covered = 0
    chosen: set[tuple[int, int]] = set()
    while covered != full:
        best_pair = None
        best_gain = -1
        for v in range(n):
            for i in range(tau):
                gain = bin(masks[i][v] & ~covered).count("1")
                if gain > best_gain:
                    best_gain = gain
                    best_pair = (v, i)
        assert best_pair is not None and best_gain > 0
        chosen.add(best_pair)
        covered |= masks[best_pair[1]][best_pair[0]]
    return DominatingSet(frozenset(chosen))


def domset_randomized(g: MultiLayerGraph, seed: int) -> DominatingSet:
    """Randomised dominating set: include each (v, i) independently with
    p = ln((tau+delta)/tau)/(tau+delta), then repair uncovered vertices by
    adding them on layer 1.  Requires min summed degree >= 1."""

    delta = ml_min_degree(g)
    if delta < 1:
        raise MlgError(f"randomised dominating set needs delta >= 1, got {delta}")
    tau, n = g.tau, g.n
    p = math.log((tau + delta) / tau) / (tau + delta)
    rng = random.Random(f"domset:{seed}")
    chosen: set[tuple[int, int]] = set()
    covered = 0
    masks = _closed_masks(g)
    for v in range(n):
        for i in range(tau):
            if rng.random() < p:
                chosen.add((v, i))
                covered |= masks[i][v]
    full = (1 << n) - 1
    for v in range(n):
        if not (covered >> v) & 1:
            chosen.add((v, 0))
            covered |= masks[0][v]
    return DominatingSet(frozenset(chosen))


def domination_bound(n: int, tau: int, delta: int) -> float:
    """Probabilistic upper bound n*tau/(tau+delta) * (ln((tau+delta)/tau) + 1)."""

    return n * tau / (tau + delta) * (math.log((tau + delta) / tau) + 1)


# -- splitting probability for layered random graphs ----------------------------------


def pstar(p: float, tau: int) -> float:
    """The p* with 1 - (1 - p*/tau)^tau = p, in closed form tau*(1-(1-p)^(1/tau))."""

    if not (0.0 <= p <= 1.0):
        raise MlgError(f"p must be in [0, 1], got {p}")
    if tau < 1:
        raise MlgError(f"tau must be >= 1, got {tau}")
    if p == 1.0:
        return float(tau)
    return tau * (-math.expm1(math.log1p(-p) / tau))


def pstar_residual(p: float, tau: int) -> float:
    """|1 - (1 - p*/tau)^tau - p| for the computed p*."""

    ps = pstar(p, tau)
    if ps / tau >= 1.0:
        value = 1.0
    else:
        value = -math.expm1(tau * math.log1p(-ps / tau))
    return abs(value - p)


# -- tree decompositions ----------------------------------------------------------------


@dataclass
class TreeDecomposition:
    """Bags plus a tree on bag indices."""

    bags: tuple[frozenset[int], ...]
    tree: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    @property
    def max_bag(self) -> int:
        return max(len(b) for b in self.bags)

    def render(self) -> str:
        lines = [f"TD {len(self.bags)} width={self.width}"]
        for i, bag in enumerate(self.bags):
            lines.append(f"BAG {i} " + " ".join(str(v) for v in sorted(bag)))
        for a, b in self.tree:
            lines.append(f"EDGE {a} {b}")
        return "\n".join(lines) + "\n"


def td_validate(decomp: TreeDecomposition, edges: list[Edge] | tuple[Edge, ...], n: int) -> bool:
    """The three axioms: vertices covered, edges covered, running intersection."""

    bags = decomp.bags
    if not bags:
        return False
    union = set()
    for b in bags:
        union |= b
    if union != set(range(n)):
        return False
    for u, v in edges:
        if not any(u in b and v in b for b in bags):
            return False
    # tree must actually be a tree on the bag indices
    nb = len(bags)
    if len(decomp.tree) != nb - 1:
        return False
    tadj: list[list[int]] = [[] for _ in range(nb)]
    for a, b in decomp.tree:
        if not (0 <= a < nb and 0 <= b < nb):
            return False
        tadj[a].append(b)
        tadj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in tadj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        return False
    # running intersection: bags containing v induce a connected subtree
    for v in range(n):
        holder = [i for i in range(nb) if v in bags[i]]
        if not holder:
            return False
        hs = set(holder)
        comp = {holder[0]}
        stack = [holder[0]]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in hs and y not in comp:
                    comp.add(y)
                    stack.append(y)
        if comp != hs:
            return False
    return True


def treewidth_exact_small(edges: list[Edge] | tuple[Edge, ...], n: int) -> tuple[int, TreeDecomposition]:
    """Optimal treewidth by dynamic programming over elimination prefixes.

    q(S, v) counts the vertices outside S u {v} reachable from v through S;
    f(S) = min over v in S of max(f(S-v), q(S-v, v)).  The witness
    decomposition is rebuilt from the optimal elimination ordering.
    Guarded to n <= TREEWIDTH_EXACT_LIMIT.
    """

    if n > TREEWIDTH_EXACT_LIMIT:
        raise EnumerationBudgetExceeded(f"n = {n} exceeds exact treewidth limit {TREEWIDTH_EXACT_LIMIT}")
    nbr = [0] * n
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    def q(eliminated: int, v: int) -> int:
        """Neighbours of v in the graph where `eliminated` has been contracted away."""

        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            x = stack.pop()
            new = nbr[x] & ~seen
            seen |= new
            out |= new & ~eliminated
            inner = new & eliminated
            while inner:
                bit = inner & (-inner)
                inner ^= bit
                stack.append(bit.bit_length() - 1)
        return bin(out).count("1")

    size = 1 << n
    f = [0] * size
    choice = [0] * size
    for s in range(1, size):
        best = n
        best_v = -1
        rem = s
        while rem:
            bit = rem & (-rem)
            rem ^= bit
            v = bit.bit_length() - 1
            prev = s ^ bit
            val = max(f[prev], q(prev, v))
            if val < best:
                best = val
                best_v = v
        f[s] = best
        choice[s] = best_v
    # recover elimination order (choice vertex eliminated last within its prefix)
    order = []
    s = size - 1
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()  # elimination order: first eliminated first

    # fill-in along the order; bag of v = v plus its later neighbours
    pos = {v: i for i, v in enumerate(order)}
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    bags: list[frozenset[int]] = []
    for i, v in enumerate(order):
        later = {w for w in adj[v] if pos[w] > i}
        bags.append(frozenset(later | {v}))
        for a in later:
            for b in later:
                if a != b:
                    adj[a].add(b)
    # connect bag i to the bag of the earliest-eliminated later vertex in it;
    # bags with no later vertex are component roots, chained together so the
    # result is a single tree even for disconnected graphs
    tree: list[tuple[int, int]] = []
    roots: list[int] = []
    for i, v in enumerate(order):
        later = [w for w in bags[i] if pos[w] > i]
        if later:
            j = min(pos[w] for w in later)
            tree.append((i, j))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        tree.append((a, b))
    width = f[size - 1]
    decomp = TreeDecomposition(tuple(bags), tuple(tree))
    assert decomp.width == width
    assert td_validate(decomp, edges, n)
    return width, decomp


def treewidth_cop_bound(g: MultiLayerGraph, decomp: TreeDecomposition) -> int:
    """Number of cops certified by the bag-sweep strategy: the maximum bag
    size of a valid decomposition of the flattened graph.  Requires every
    cop layer to be connected (the sweep routes cops within their layer)."""

    for i in range(g.tau):
        if g.layer_view(i).n_components != 1:
            raise MlgError(f"layer {i + 1} is disconnected; bag sweep needs connected layers")
    if not td_validate(decomp, flatten(g), g.n):
        raise MlgError("tree decomposition does not validate against the flattened graph")
    return decomp.max_bag
