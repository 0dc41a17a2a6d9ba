"""Exact game solving by retrograde analysis on the packed state graph.

A state is (p0, p1, ..., pk, t): robber position, cop positions, and a
turn counter t in 0..k.  t = k means the robber moves next, t < k means
cop t+1 moves next; moving one agent at a time is equivalent to the team
moving together because the opponent cannot interject.  States are packed
into a single integer

    index = ((p0 * n + p1) * n + ... + pk) * (k+1) + t

and the whole table (n^(k+1) * (k+1) states) is classified by backward
BFS from the capture states: a cop-turn state is cop-win as soon as one
successor is, a robber-turn state once a counter of not-yet-cop-win
successors reaches zero.  The BFS level of a state is its rank: 0 at
capture, otherwise 1 + min (cop to move) / max (robber to move) over
successor ranks, i.e. the optimal number of single-agent moves to capture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np

from .core import AllocationPlan, MlgError, MultiLayerGraph, RobberSpec, bfs_dist

DEFAULT_STATE_BUDGET = 2**31

_CHUNK = 1 << 20


class Winner(Enum):
    COP = "COP"
    ROBBER = "ROBBER"


class StateBudgetExceeded(MlgError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"state space needs {required} states, budget is {budget}")
        self.required = required
        self.budget = budget


def _csr_with_self(n: int, adjacency: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    """CSR neighbour arrays including the stay move (self loop)."""

    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(adjacency[v]) + 1
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    for v in range(n):
        start = int(indptr[v])
        nbrs = sorted(set(adjacency[v]) | {v})
        indices[start : start + len(nbrs)] = nbrs
    return indptr, indices


@dataclass
class CopWinTable:
    """Solved table for one assignment of cops to layers."""

    graph: MultiLayerGraph
    assignment: tuple[int, ...]
    status: np.ndarray  # uint8, 1 = cop win
    rank: np.ndarray  # int32, -1 on robber-win states
    robber_complete: bool
    agent_csr: list[tuple[np.ndarray, np.ndarray]] = field(repr=False, default_factory=list)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return len(self.assignment)

    @property
    def alloc(self) -> AllocationPlan:
        counts = [0] * self.graph.tau
        for layer in self.assignment:
            counts[layer] += 1
        return AllocationPlan(tuple(counts))

    @property
    def n_states(self) -> int:
        return self.status.shape[0]

    # -- state packing --------------------------------------------------------

    def pack(self, robber: int, cops: Sequence[int], t: int) -> int:
        idx = robber
        for p in cops:
            idx = idx * self.n + p
        return idx * (self.k + 1) + t

    def unpack(self, index: int) -> tuple[int, tuple[int, ...], int]:
        t = index % (self.k + 1)
        rest = index // (self.k + 1)
        pos = []
        for _ in range(self.k + 1):
            pos.append(rest % self.n)
            rest //= self.n
        pos.reverse()
        return pos[0], tuple(pos[1:]), t

    def is_copwin(self, robber: int, cops: Sequence[int], t: int = 0) -> bool:
        return bool(self.status[self.pack(robber, cops, t)])

    def rank_of(self, robber: int, cops: Sequence[int], t: int = 0) -> int:
        return int(self.rank[self.pack(robber, cops, t)])

    # -- move enumeration (successors in game order) ---------------------------

    def _moves_from(self, agent: int, position: int) -> Iterator[int]:
        """Stay plus the agent's layer moves; agent 0 is the robber."""

        if agent == 0 and self.robber_complete:
            yield from range(self.n)
            return
        indptr, indices = self.agent_csr[agent]
        for j in range(int(indptr[position]), int(indptr[position + 1])):
            yield int(indices[j])

    def successors(self, index: int) -> Iterator[int]:
        """Successor state indices; capture states are terminal (none)."""

        robber, cops, t = self.unpack(index)
        if robber in cops:
            return
        mover = 0 if t == self.k else t + 1
        t_next = (t + 1) % (self.k + 1)
        base = index - t
        position = robber if mover == 0 else cops[mover - 1]
        stride = (self.k + 1) * self.n ** (self.k - mover)
        for q in self._moves_from(mover, position):
            yield base + (q - position) * stride + t_next

    # -- optimal policies ------------------------------------------------------

    def best_cop_move(self, index: int) -> int:
        """Rank-minimising successor of a cop-turn cop-win state (ties: smallest index)."""

        best_idx = -1
        best_rank = -1
        for s in self.successors(index):
            if not self.status[s]:
                continue
            r = int(self.rank[s])
            if best_idx < 0 or r < best_rank or (r == best_rank and s < best_idx):
                best_rank = r
                best_idx = s
        if best_idx < 0:
            raise MlgError("best_cop_move called on a state with no cop-win successor")
        return best_idx

    def chase_cop_move(self, index: int) -> int:
        """Fallback move on robber-win states: shrink layer distance to the robber."""

        robber, cops, t = self.unpack(index)
        mover = t + 1
        layer = self.assignment[mover - 1]
        dist = bfs_dist(self.graph, layer, robber)
        best_idx = -1
        best_d = math.inf
        for s in self.successors(index):
            _, new_cops, _ = self.unpack(s)
            d = dist[new_cops[mover - 1]]
            if best_idx < 0 or d < best_d or (d == best_d and s < best_idx):
                best_d = d
                best_idx = s
        return best_idx

    def best_robber_move(self, index: int) -> int:
        """Robber-win successor if any, else maximal-delay (ties: smallest index)."""

        best_escape = -1
        best_idx = -1
        best_rank = -1
        for s in self.successors(index):
            if not self.status[s]:
                if best_escape < 0 or s < best_escape:
                    best_escape = s
            else:
                r = int(self.rank[s])
                if best_idx < 0 or r > best_rank or (r == best_rank and s < best_idx):
                    best_rank = r
                    best_idx = s
        if best_escape >= 0:
            return best_escape
        if best_idx < 0:
            raise MlgError("best_robber_move called on a terminal state")
        return best_idx

    # -- verdict queries -------------------------------------------------------

    def placement_matrix(self) -> np.ndarray:
        """Bool matrix [p0, placement] of cop-win at t=0, placements in lex order."""

        k = self.k
        return self.status.reshape(self.n, self.n**k, k + 1)[:, :, 0].astype(bool)

    def winning_placements(self) -> np.ndarray:
        """Packed placement codes where every robber reply is cop-win."""

        mat = self.placement_matrix()
        return np.nonzero(mat.all(axis=0))[0]

    def decode_placement(self, code: int) -> tuple[int, ...]:
        pos = []
        for _ in range(self.k):
            pos.append(code % self.n)
            code //= self.n
        pos.reverse()
        return tuple(pos)

    def safe_robber_vertex(self, placement: Sequence[int]) -> int | None:
        """Smallest robber start that is robber-win against this placement."""

        for p0 in range(self.n):
            if not self.status[self.pack(p0, placement, 0)]:
                return p0
        return None


def state_space_size(n: int, k: int) -> int:
    return n ** (k + 1) * (k + 1)


def build_copwin(
    g: MultiLayerGraph,
    assignment: Sequence[int],
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> CopWinTable:
    """Retrograde analysis for cops assigned to layers by `assignment`."""

    k = len(assignment)
    if k < 1:
        raise MlgError("build_copwin needs at least one cop")
    for layer in assignment:
        if not (0 <= layer < g.tau):
            raise MlgError(f"assignment layer {layer} out of range (tau={g.tau})")
    n = g.n
    size = state_space_size(n, k)
    if size > state_budget:
        raise StateBudgetExceeded(size, state_budget)

    robber_complete = g.robber_is_complete()
    agent_csr: list[tuple[np.ndarray, np.ndarray]] = []
    if robber_complete:
        agent_csr.append((np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)))
        robber_outdeg = None
    else:
        robber_adj = g.robber_view().adjacency
        agent_csr.append(_csr_with_self(n, robber_adj))
        robber_outdeg = np.diff(agent_csr[0][0])
    for c in range(k):
        agent_csr.append(_csr_with_self(n, g.layer_view(assignment[c]).adjacency))

    status = np.zeros(size, dtype=np.uint8)
    rank = np.full(size, -1, dtype=np.int32)
    counter = np.zeros(size, dtype=np.int32)

    kp1 = k + 1
    # stride of agent a's position digit (agent 0 = robber)
    strides = [kp1 * n ** (k - a) for a in range(0, k + 1)]

    # initialise capture flags and robber-move counters, chunked over p0 blocks
    block = n**k * kp1  # states sharing one robber position
    for p0 in range(n):
        lo = p0 * block
        idx = np.arange(lo, lo + block, dtype=np.int64)
        cap = np.zeros(block, dtype=bool)
        rest = idx // kp1
        for c in range(k):
            digit = (rest // (n ** (k - 1 - c))) % n
            cap |= digit == p0
        status[lo : lo + block][cap] = 1
        rank[lo : lo + block][cap] = 0
        # robber-turn states: t == k
        if robber_outdeg is not None:
            counter[lo + k : lo + block : kp1] = robber_outdeg[p0]
        else:
            counter[lo + k : lo + block : kp1] = n
    frontier = np.nonzero(status)[0].astype(np.int64)

    level = 0
    while frontier.size:
        level += 1
        new_parts: list[np.ndarray] = []
        t_vals = frontier % kp1
        for t_succ in range(kp1):
            grp = frontier[t_vals == t_succ]
            if not grp.size:
                continue
            t_pred = (t_succ - 1) % kp1
            mover = 0 if t_pred == k else t_pred + 1
            stride = strides[mover]
            for lo in range(0, grp.size, _CHUNK):
                chunk = grp[lo : lo + _CHUNK]
                if mover == 0:
                    digit = chunk // strides[0]
                else:
                    digit = (chunk // stride) % n
                base = chunk - t_succ + t_pred - digit * stride
                if mover == 0 and robber_complete:
                    # predecessors: every robber position
                    preds = (base[:, None] + (np.arange(n, dtype=np.int64) * stride)[None, :]).ravel()
                else:
                    indptr, indices = agent_csr[mover]
                    starts = indptr[digit]
                    cnt = indptr[digit + 1] - starts
                    total = int(cnt.sum())
                    if total == 0:
                        continue
                    rep_base = np.repeat(base, cnt)
                    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
                    nbr = indices[np.repeat(starts, cnt) + offs]
                    preds = rep_base + nbr * stride
                if t_pred == k:
                    u, c = np.unique(preds, return_counts=True)
                    counter[u] -= c.astype(np.int32)
                    newly = u[(counter[u] <= 0) & (status[u] == 0)]
                else:
                    newly = np.unique(preds[status[preds] == 0])
                if newly.size:
                    status[newly] = 1
                    rank[newly] = level
                    new_parts.append(newly)
        frontier = np.concatenate(new_parts) if new_parts else np.zeros(0, dtype=np.int64)

    return CopWinTable(
        graph=g,
        assignment=tuple(assignment),
        status=status,
        rank=rank,
        robber_complete=robber_complete,
        agent_csr=agent_csr,
    )


# -- verdicts ------------------------------------------------------------------


@dataclass
class GameVerdict:
    """Winner plus a verified witness.

    For COP the witness is a winning initial cop placement (with the
    assignment of cops to layers).  For ROBBER the witness is a safe robber
    start against the lexicographically first cop placement; `safe_vertex`
    on the table answers the same query for any other placement.
    """

    winner: Winner
    assignment: tuple[int, ...] = ()
    placement: tuple[int, ...] | None = None
    safe_vertex: int | None = None
    certificate: object | None = None  # robber's-edge witness from the tree path

    def record_lines(self) -> list[str]:
        lines = [f"VERDICT={self.winner.value}"]
        if self.assignment:
            lines.append("ASSIGNMENT=" + ",".join(str(a) for a in self.assignment))
        if self.winner is Winner.COP and self.placement is not None:
            lines.append("PLACEMENT=" + ",".join(str(p) for p in self.placement))
        if self.winner is Winner.ROBBER and self.safe_vertex is not None:
            lines.append(f"SAFE_VERTEX={self.safe_vertex}")
        if self.certificate is not None:
            lines.append(self.certificate.render())
        return lines


def decide_allocated(
    g: MultiLayerGraph,
    alloc: AllocationPlan,
    state_budget: int = DEFAULT_STATE_BUDGET,
    table_out: list | None = None,
) -> GameVerdict:
    """Cops place first, robber replies, cops move first.

    COP iff some placement makes every robber reply a cop-win state; a
    robber forced onto an occupied vertex is already a capture state.
    Zero cops lose on any non-empty graph.
    """

    if len(alloc.counts) != g.tau:
        raise MlgError(f"allocation has {len(alloc.counts)} entries, graph has {g.tau} layers")
    if alloc.total == 0:
        return GameVerdict(Winner.ROBBER, assignment=(), safe_vertex=0)
    assignment = alloc.assignment()
    table = build_copwin(g, assignment, state_budget=state_budget)
    if table_out is not None:
        table_out.append(table)
    wins = table.winning_placements()
    if wins.size:
        placement = table.decode_placement(int(wins[0]))
        return GameVerdict(Winner.COP, assignment=assignment, placement=placement)
    safe = table.safe_robber_vertex(table.decode_placement(0))
    return GameVerdict(Winner.ROBBER, assignment=assignment, safe_vertex=safe)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of `total` into `parts`, cops packed early-layer-first.

    (2,0) comes before (1,1) before (0,2)."""

    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def decide_choose_allocation(
    g: MultiLayerGraph,
    k: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> tuple[GameVerdict, AllocationPlan | None]:
    """COP iff some composition of k cops over layers wins; first such plan returned."""

    if k < 0:
        raise MlgError("cop count must be non-negative")
    if k == 0:
        return GameVerdict(Winner.ROBBER, safe_vertex=0), None
    last = None
    for comp in compositions(k, g.tau):
        plan = AllocationPlan(comp)
        verdict = decide_allocated(g, plan, state_budget=state_budget)
        if verdict.winner is Winner.COP:
            return verdict, plan
        last = verdict
    assert last is not None
    return last, None


def decide_free_layer_choice(
    g: MultiLayerGraph,
    k: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> tuple[GameVerdict, AllocationPlan | None]:
    """Free layer choice: cops fix an allocation, robber then picks any layer.

    COP iff some composition wins for every choice of robber layer.
    The robber spec of `g` is ignored; its layers are the candidate pool.
    """

    if k <= 0:
        return GameVerdict(Winner.ROBBER, safe_vertex=0), None
    variants = [
        MultiLayerGraph(
            n=g.n, layers=g.layers, robber_spec=RobberSpec.EXPLICIT, robber_edges=g.layers[j]
        )
        for j in range(g.tau)
    ]
    for comp in compositions(k, g.tau):
        plan = AllocationPlan(comp)
        all_cop = True
        for gj in variants:
            verdict = decide_allocated(gj, plan, state_budget=state_budget)
            if verdict.winner is not Winner.COP:
                all_cop = False
                break
        if all_cop:
            return GameVerdict(Winner.COP, assignment=plan.assignment()), plan
    return GameVerdict(Winner.ROBBER), None


def multilayer_cop_number(
    g: MultiLayerGraph,
    k_max: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> int | None:
    """Least k <= k_max winning under free allocation, else None."""

    for k in range(1, k_max + 1):
        verdict, _ = decide_choose_allocation(g, k, state_budget=state_budget)
        if verdict.winner is Winner.COP:
            return k
    return None


def single_layer_cop_number(
    edges: Sequence[tuple[int, int]],
    n: int,
    k_max: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> int | None:
    """Classical cop number of a single edge set, robber on the same edges."""

    g = MultiLayerGraph(
        n=n,
        layers=(tuple(edges),),
        robber_spec=RobberSpec.EXPLICIT,
        robber_edges=tuple(edges),
    )
    return multilayer_cop_number(g, k_max, state_budget=state_budget)


# -- strategy extraction --------------------------------------------------------


@dataclass
class TablePolicies:
    """Optimal move choices read off a solved table."""

    table: CopWinTable
    cop_move: Callable[[int], int]
    robber_move: Callable[[int], int]


def extract_strategy(table: CopWinTable) -> TablePolicies:
    """Cop policy minimises rank on cop-win states (greedy chase otherwise);
    robber policy escapes to a robber-win state when one exists, else delays."""

    def cop_move(index: int) -> int:
        if table.status[index]:
            return table.best_cop_move(index)
        return table.chase_cop_move(index)

    return TablePolicies(table=table, cop_move=cop_move, robber_move=table.best_robber_move)


# -- table dump (CWT1) -----------------------------------------------------------


def dump_cwt(table: CopWinTable) -> str:
    """Debug dump: header plus one 'index status rank' line per state."""

    lines = [f"CWT1 {table.n} {table.k} {table.n_states}"]
    for i in range(table.n_states):
        lines.append(f"{i} {int(table.status[i])} {int(table.rank[i])}")
    return "\n".join(lines) + "\n"
