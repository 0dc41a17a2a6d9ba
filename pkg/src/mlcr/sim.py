"""Match runner, pluggable strategies, and the scripted plays.

The runner enforces legality (every move is a stay or a single edge of the
mover's layer) and checks capture after the cop team's full move and after
the robber's move.  Strategies are stateful objects reset per match; the
scripted ones implement the blocker/traveller grid sweep, the corner dance,
the safe-slice navigation, the blocked-set evasion on the expander core,
the tree squeeze, and the bag sweep along a tree decomposition.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import (
    INF,
    AllocationPlan,
    MlgError,
    MultiLayerGraph,
    bfs_dist_adj,
)
from .solver import CopWinTable, build_copwin

# -- errors ----------------------------------------------------------------------


class IllegalMoveError(MlgError):
    """A strategy emitted a move that is not a stay or an own-layer edge."""

    def __init__(self, agent: str, src: int, dst: int):
        super().__init__(f"{agent}: illegal move {src} -> {dst} (not an edge of its layer)")
        self.agent = agent
        self.edge = (src, dst)


class StrategyInvariantError(MlgError):
    """A scripted strategy detected that its own invariant broke."""


class StrategyMismatchError(MlgError):
    """Strategy applied to a graph outside its construction family."""


# -- match state and record ---------------------------------------------------------


@dataclass
class MatchView:
    """Everything a strategy may look at: full information plus history."""

    graph: MultiLayerGraph
    assignment: tuple[int, ...]
    cops: tuple[int, ...]
    robber: int
    round_no: int
    history: list[tuple[int, str, int, tuple[int, ...]]]


@dataclass
class MatchRecord:
    """Full trace of one match; replayable through the referee."""

    graph_id: str
    allocation: tuple[int, ...]
    assignment: tuple[int, ...]
    cop_strategy: str
    robber_strategy: str
    seed: int
    horizon: int
    rows: list[tuple[int, str, int, tuple[int, ...]]] = field(default_factory=list)
    outcome: str = "SURVIVED"
    capture_round: int | None = None
    tags: tuple[str, ...] = ()

    def render(self) -> str:
        head = (
            f"MR1 graph={self.graph_id or '-'} alloc={','.join(map(str, self.allocation))} "
            f"cop={self.cop_strategy} robber={self.robber_strategy} "
            f"seed={self.seed} T={self.horizon}"
        )
        lines = [head]
        for rnd, mover, robber, cops in self.rows:
            lines.append(f"{rnd} {mover} {robber} " + " ".join(map(str, cops)))
        tail = f"OUTCOME {self.outcome}"
        if self.capture_round is not None:
            tail += f" {self.capture_round}"
        if self.tags:
            tail += " tags=" + ",".join(self.tags)
        lines.append(tail)
        return "\n".join(lines) + "\n"


def parse_match_record(text: str) -> MatchRecord:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "MR1":
        raise MlgError(f"not an MR1 record: {lines[0]!r}")
    kv = dict(part.split("=", 1) for part in head[1:])
    rec = MatchRecord(
        graph_id="" if kv["graph"] == "-" else kv["graph"],
        allocation=tuple(int(x) for x in kv["alloc"].split(",")),
        assignment=(),
        cop_strategy=kv["cop"],
        robber_strategy=kv["robber"],
        seed=int(kv["seed"]),
        horizon=int(kv["T"]),
    )
    for ln in lines[1:]:
        if ln.startswith("OUTCOME"):
            parts = ln.split()
            rec.outcome = parts[1]
            rest = [p for p in parts[2:] if not p.startswith("tags=")]
            if rest:
                rec.capture_round = int(rest[0])
            for p in parts[2:]:
                if p.startswith("tags="):
                    rec.tags = tuple(p[5:].split(","))
            continue
        parts = ln.split()
        rec.rows.append((int(parts[0]), parts[1], int(parts[2]), tuple(int(x) for x in parts[3:])))
    rec.assignment = AllocationPlan(rec.allocation).assignment()
    return rec


# -- strategy interface ---------------------------------------------------------------


class CopTeamStrategy:
    """Controls all cops; emits one (possibly stay) move per cop per round."""

    name = "cop-team"

    def begin(self, g: MultiLayerGraph, assignment: tuple[int, ...], rng: random.Random) -> None:
        self.g = g
        self.assignment = assignment
        self.rng = rng
        self.tags: set[str] = set()

    def place(self) -> tuple[int, ...]:
        raise NotImplementedError

    def moves(self, view: MatchView) -> tuple[int, ...]:
        raise NotImplementedError


class RobberStrategy:
    name = "robber"

    def begin(self, g: MultiLayerGraph, assignment: tuple[int, ...], rng: random.Random) -> None:
        self.g = g
        self.assignment = assignment
        self.rng = rng
        self.tags: set[str] = set()

    def place(self, cops: tuple[int, ...]) -> int:
        raise NotImplementedError

    def move(self, view: MatchView) -> int:
        raise NotImplementedError


def _legal_cop_move(g: MultiLayerGraph, layer: int, src: int, dst: int) -> bool:
    return dst == src or dst in g.layer_view(layer).adjacency[src]

def _legal_robber_move(g: MultiLayerGraph, src: int, dst: int) -> bool:
    if dst == src:
        return True
    if g.robber_is_complete():
        return 0 <= dst < g.n
    return dst in g.robber_view().adjacency[src]


def run_match(
    g: MultiLayerGraph,
    alloc: AllocationPlan | Sequence[int],
    cop_strategy: CopTeamStrategy,
    robber_strategy: RobberStrategy,
    T: int,
    seed: int = 0,
) -> MatchRecord:
    """Play one match: cops place, robber places, then cop-team/robber rounds.

    Capture is checked after the team's full move and after the robber's
    move; the match stops after T robber moves.
    """

    plan = alloc if isinstance(alloc, AllocationPlan) else AllocationPlan(tuple(alloc))
    if len(plan.counts) != g.tau:
        raise MlgError(f"allocation {plan} does not match tau={g.tau}")
    assignment = plan.assignment()
    rng = random.Random(f"match:{seed}")
    cop_strategy.begin(g, assignment, rng)
    robber_strategy.begin(g, assignment, rng)

    record = MatchRecord(
        graph_id=g.tag,
        allocation=plan.counts,
        assignment=assignment,
        cop_strategy=cop_strategy.name,
        robber_strategy=robber_strategy.name,
        seed=seed,
        horizon=T,
    )

    cops = tuple(cop_strategy.place())
    for i, p in enumerate(cops):
        if not (0 <= p < g.n):
            raise IllegalMoveError(f"cop {i + 1} placement", -1, p)
    robber = robber_strategy.place(cops)
    if not (0 <= robber < g.n):
        raise IllegalMoveError("robber placement", -1, robber)
    record.rows.append((0, "P", robber, cops))
    history = record.rows

    def captured() -> bool:
        return robber in cops

    if captured():
        record.outcome = "CAPTURE"
        record.capture_round = 0
    else:
        for rnd in range(1, T + 1):
            view = MatchView(g, assignment, cops, robber, rnd, history)
            new_cops = tuple(cop_strategy.moves(view))
            if len(new_cops) != len(cops):
                raise MlgError(f"cop strategy returned {len(new_cops)} positions for {len(cops)} cops")
            for i, (src, dst) in enumerate(zip(cops, new_cops)):
                if not _legal_cop_move(g, assignment[i], src, dst):
                    raise IllegalMoveError(f"cop {i + 1} (layer {assignment[i] + 1})", src, dst)
            cops = new_cops
            record.rows.append((rnd, "C", robber, cops))
            if captured():
                record.outcome = "CAPTURE"
                record.capture_round = rnd
                break
            view = MatchView(g, assignment, cops, robber, rnd, history)
            new_robber = robber_strategy.move(view)
            if not _legal_robber_move(g, robber, new_robber):
                raise IllegalMoveError("robber", robber, new_robber)
            robber = new_robber
            record.rows.append((rnd, "R", robber, cops))
            if captured():
                record.outcome = "CAPTURE"
                record.capture_round = rnd
                break
        else:
            record.outcome = "SURVIVED"
    record.tags = tuple(sorted(cop_strategy.tags | robber_strategy.tags))
    return record


def referee_check(record: MatchRecord, g: MultiLayerGraph) -> tuple[bool, str]:
    """Independent re-scan of a record: legality of every move and exactness
    of the capture flag."""

    assignment = AllocationPlan(record.allocation).assignment()
    rows = record.rows
    if not rows or rows[0][1] != "P":
        return False, "missing placement row"
    _, _, robber, cops = rows[0]
    if robber in cops:
        if record.outcome != "CAPTURE" or record.capture_round != 0:
            return False, "capture at placement not flagged"
        if len(rows) != 1:
            return False, "rows after terminal capture"
        return True, "ok"
    for idx in range(1, len(rows)):
        rnd, mover, r_new, c_new = rows[idx]
        if mover == "C":
            if r_new != robber:
                return False, f"round {rnd}: robber moved on a cop row"
            for i, (src, dst) in enumerate(zip(cops, c_new)):
                if not _legal_cop_move(g, assignment[i], src, dst):
                    return False, f"round {rnd}: cop {i + 1} illegal {src}->{dst}"
            cops = c_new
        elif mover == "R":
            if c_new != cops:
                return False, f"round {rnd}: cops moved on a robber row"
            if not _legal_robber_move(g, robber, r_new):
                return False, f"round {rnd}: robber illegal {robber}->{r_new}"
            robber = r_new
        else:
            return False, f"unknown mover {mover!r}"
        terminal = idx == len(rows) - 1
        if robber in cops:
            if not (terminal and record.outcome == "CAPTURE" and record.capture_round == rnd):
                return False, f"round {rnd}: capture not flagged exactly"
        elif terminal and record.outcome == "CAPTURE":
            return False, "CAPTURE outcome without overlap"
    if record.outcome == "SURVIVED" and robber in cops:
        return False, "SURVIVED but captured"
    return True, "ok"


# -- baseline strategies ----------------------------------------------------------------


class GreedyCops(CopTeamStrategy):
    """Each cop walks a shortest path toward the robber within its own layer."""

    name = "greedy_cop"

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        self._dist_cache: dict[tuple[int, int], list[float]] = {}

    def _dist_from_robber(self, layer: int, robber: int) -> list[float]:
        key = (layer, robber)
        if key not in self._dist_cache:
            self._dist_cache[key] = bfs_dist_adj(self.g.layer_view(layer).adjacency, robber)
        return self._dist_cache[key]

    def place(self):
        # spread the cops over their layers' most central vertices
        out = []
        for i, layer in enumerate(self.assignment):
            view = self.g.layer_view(layer)
            deg = view.degrees
            order = sorted(range(self.g.n), key=lambda v: (-deg[v], v))
            out.append(order[i % len(order)])
        return tuple(out)

    def moves(self, view: MatchView):
        out = []
        for i, pos in enumerate(view.cops):
            layer = self.assignment[i]
            dist = self._dist_from_robber(layer, view.robber)
            best, best_d = pos, dist[pos]
            for q in self.g.layer_view(layer).adjacency[pos]:
                if dist[q] < best_d or (dist[q] == best_d and q < best):
                    best, best_d = q, dist[q]
            out.append(best)
        return tuple(out)


class RandomRobber(RobberStrategy):
    """Uniformly random legal move; placement on a uniformly random vertex
    avoiding the cops when possible."""

    name = "random_robber"

    def place(self, cops):
        free = [v for v in range(self.g.n) if v not in cops]
        pool = free or list(range(self.g.n))
        return self.rng.choice(pool)

    def move(self, view: MatchView):
        if self.g.robber_is_complete():
            options = list(range(self.g.n))
        else:
            options = [view.robber] + list(self.g.robber_view().adjacency[view.robber])
        return self.rng.choice(options)


class RandomCops(CopTeamStrategy):
    """Uniformly random legal team moves (fuzzing aid)."""

    name = "random_cop"

    def place(self):
        return tuple(self.rng.randrange(self.g.n) for _ in self.assignment)

    def moves(self, view: MatchView):
        out = []
        for i, pos in enumerate(view.cops):
            options = [pos] + list(self.g.layer_view(self.assignment[i]).adjacency[pos])
            out.append(self.rng.choice(options))
        return tuple(out)


# -- tablebase strategies ------------------------------------------------------------------


class TablebaseCops(CopTeamStrategy):
    """Optimal play from a solved table: rank-minimising on cop-win states,
    greedy chase otherwise."""

    name = "tablebase_cop"

    def __init__(self, table: CopWinTable):
        self.table = table

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        if assignment != self.table.assignment:
            raise StrategyMismatchError(
                f"table was built for assignment {self.table.assignment}, match uses {assignment}"
            )

    def place(self):
        wins = self.table.winning_placements()
        if wins.size:
            return self.table.decode_placement(int(wins[0]))
        mat = self.table.placement_matrix()
        col = int(mat.sum(axis=0).argmax())
        return self.table.decode_placement(col)

    def moves(self, view: MatchView):
        tb = self.table
        state = tb.pack(view.robber, view.cops, 0)
        for _ in range(tb.k):
            p0, cops, _ = tb.unpack(state)
            if p0 in cops:
                break  # captured mid-walk; remaining cops stay
            if tb.status[state]:
                state = tb.best_cop_move(state)
            else:
                state = tb.chase_cop_move(state)
        _, cops, _ = tb.unpack(state)
        return cops


class TablebaseRobber(RobberStrategy):
    """Optimal robber: place on a surviving vertex when one exists, move to
    robber-win successors, otherwise maximise the delay."""

    name = "tablebase_robber"

    def __init__(self, table: CopWinTable):
        self.table = table

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        if assignment != self.table.assignment:
            raise StrategyMismatchError(
                f"table was built for assignment {self.table.assignment}, match uses {assignment}"
            )

    def place(self, cops):
        tb = self.table
        safe = tb.safe_robber_vertex(cops)
        if safe is not None:
            return safe
        best_v, best_rank = 0, -1
        for v in range(self.g.n):
            r = tb.rank_of(v, cops, 0)
            if r > best_rank:
                best_v, best_rank = v, r
        return best_v

    def move(self, view: MatchView):
        tb = self.table
        state = tb.pack(view.robber, view.cops, tb.k)
        if tb.status[state] == 0 and tb.rank[state] == 0 and view.robber in view.cops:
            return view.robber
        nxt = tb.best_robber_move(state)
        robber, _, _ = tb.unpack(nxt)
        return robber


def tablebase_pair(
    g: MultiLayerGraph, alloc: AllocationPlan, state_budget: int | None = None
) -> tuple[TablebaseCops, TablebaseRobber, CopWinTable]:
    """Build one table and both optimal strategies for it."""

    kwargs = {} if state_budget is None else {"state_budget": state_budget}
    table = build_copwin(g, alloc.assignment(), **kwargs)
    return TablebaseCops(table), TablebaseRobber(table), table


# -- grid strategies -------------------------------------------------------------------


class GridCopGuard(CopTeamStrategy):
    """Two same-layer cops on the two-layer grid: a blocker pins the
    robber's row while a traveller crosses to the next column over the
    boundary rows, squeezing the robber toward the far edge."""

    name = "grid_cop_guard"

    def __init__(self, n: int):
        self.nside = n

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        from .generators import grid_layers

        ch, cv = grid_layers(self.nside)
        if g.n != self.nside * self.nside or tuple(g.layers) != (ch, cv):
            raise StrategyMismatchError(f"graph is not the {self.nside}-grid construction")
        if tuple(assignment) == (1, 1):
            self.transpose = False
        elif tuple(assignment) == (0, 0):
            self.transpose = True
        else:
            raise StrategyMismatchError("grid guard needs both cops on the same layer")
        n = self.nside
        # virtual coordinates: both cops live on the all-verticals layer
        edges = cv if not self.transpose else tuple(
            tuple(sorted((self._t(u), self._t(v)))) for u, v in ch
        )
        adj = [[] for _ in range(g.n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        self.vadj = [sorted(a) for a in adj]
        self.phase = 1
        self.blocker = 1
        self.bcol = 2
        self.traveler = 0
        self.tcol = 3

    def _t(self, v: int) -> int:
        i, j = divmod(v, self.nside)
        return j * self.nside + i

    def _rc(self, v: int) -> tuple[int, int]:
        w = self._t(v) if self.transpose else v
        return w // self.nside + 1, w % self.nside + 1

    def _idx(self, i: int, j: int) -> int:
        w = (i - 1) * self.nside + (j - 1)
        return self._t(w) if self.transpose else w

    def _vmoves(self, v: int) -> list[int]:
        w = self._t(v) if self.transpose else v
        out = [self._t(q) if self.transpose else q for q in self.vadj[w]]
        return sorted(out)

    def moves(self, view: MatchView):
        n = self.nside
        pos = list(view.cops)
        ri, rj = self._rc(view.robber)
        for i in range(2):
            if view.robber in self._vmoves(pos[i]):
                pos[i] = view.robber
                return tuple(pos)
        if self.phase == 1:
            ci, _ = self._rc(pos[0])
            if ci < ri:
                pos[0] = self._idx(ci + 1, 1)
                pos[1] = self._idx(ci + 1, 2)
                return tuple(pos)
            self.phase = 2
            self.blocker, self.bcol = 1, 2
            self.traveler, self.tcol = 0, 3
        b, t = self.blocker, self.traveler
        bi, bj = self._rc(pos[b])
        if bj != self.bcol:
            raise StrategyInvariantError("blocker drifted off its column")
        if abs(bi - ri) > 1:
            raise StrategyInvariantError("blocker lost the robber's row")
        if bi != ri:
            pos[b] = self._idx(bi + (1 if ri > bi else -1), bj)
        ti, tj = self._rc(pos[t])
        if tj != self.tcol:
            pos[t] = self._step_to_column(pos[t], self.tcol)
        elif ti != ri:
            pos[t] = self._idx(ti + (1 if ri > ti else -1), tj)
        ti, tj = self._rc(pos[t])
        if tj == self.tcol and ti == ri and rj > self.tcol:
            self.blocker, self.traveler = self.traveler, self.blocker
            self.bcol, self.tcol = self.tcol, self.bcol + 2
        return tuple(pos)

    def _step_to_column(self, v: int, col: int) -> int:
        n = self.nside
        sources = [self._idx(i, col) for i in range(1, n + 1)]
        dist: dict[int, int] = {s: 0 for s in sources}
        frontier = sources
        while frontier and v not in dist:
            nxt = []
            for x in frontier:
                for y in self._vmoves(x):
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        best = v
        for q in self._vmoves(v):
            if dist.get(q, math.inf) < dist.get(best, math.inf) or (
                dist.get(q, math.inf) == dist.get(best, math.inf) and q < best
            ):
                best = q
        return best

    def place(self):
        return (self._idx(1, 1), self._idx(1, 2))


class GridRobberCorner(RobberStrategy):
    """Corner dance against one cop per grid layer: recompute the safe
    corner cell (a, b) from which cop threatens row 1 / column 1 and hop
    within the top-left 2x2 square."""

    name = "grid_robber_corner"

    def __init__(self, n: int):
        self.nside = n

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        from .generators import grid_layers

        if g.n != self.nside * self.nside or tuple(g.layers) != grid_layers(self.nside):
            raise StrategyMismatchError(f"graph is not the {self.nside}-grid construction")
        if sorted(assignment) != [0, 1]:
            raise StrategyMismatchError("corner dance needs exactly one cop per layer")
        if self.nside < 4:
            raise StrategyMismatchError("corner dance needs n >= 4")
        self.ch_cop = assignment.index(0)
        self.cv_cop = assignment.index(1)

    def _rc(self, v: int) -> tuple[int, int]:
        return v // self.nside + 1, v % self.nside + 1

    def _idx(self, i: int, j: int) -> int:
        return (i - 1) * self.nside + (j - 1)

    def _target(self, cops) -> tuple[int, int]:
        hi, _ = self._rc(cops[self.ch_cop])
        _, vj = self._rc(cops[self.cv_cop])
        return (2 if hi == 1 else 1), (2 if vj == 1 else 1)

    def place(self, cops):
        a, b = self._target(cops)
        return self._idx(a, b)

    def _check_restrictions(self, view: MatchView):
        n = self.nside
        ri, rj = self._rc(view.robber)
        hi, hj = self._rc(view.cops[self.ch_cop])
        vi, vj = self._rc(view.cops[self.cv_cop])
        if hi == ri and hj not in (n, n - 1):
            raise StrategyInvariantError("row cop too close on the robber's row")
        if vj == rj and vi not in (n, n - 1):
            raise StrategyInvariantError("column cop too close on the robber's column")
        if hi == ri and vj == rj and not (hj == n or vi == n):
            raise StrategyInvariantError("both cops aligned without a far cop")

    def move(self, view: MatchView):
        self._check_restrictions(view)
        a, b = self._target(view.cops)
        ri, rj = self._rc(view.robber)
        if (a, b) == (ri, rj):
            return view.robber
        if a == ri:
            return self._idx(a, b)
        if b == rj:
            return self._idx(a, b)
        n = self.nside
        _, hj = self._rc(view.cops[self.ch_cop])
        if hj == n:
            return self._idx(ri, b)
        return self._idx(a, rj)


# -- slices strategy -------------------------------------------------------------------


class SlicesRobber(RobberStrategy):
    """Safe-slice navigation on the slices construction: stay on the ring
    vertices, pick a slice triple with no cops nearby and a ring column no
    cop can reach quickly, then travel ring-then-rungs to it."""

    name = "slices_robber"

    def __init__(self, k: int):
        self.k = k

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        from .generators import gen_slices, slices_coords, slices_index

        expected, _ = gen_slices(self.k)
        if g.n != expected.n or tuple(g.layers) != tuple(expected.layers):
            raise StrategyMismatchError(f"graph is not the slices construction for k={self.k}")
        self.coords = lambda v: slices_coords(self.k, v)
        self.index = lambda x, y, z: slices_index(self.k, x, y, z)
        self.plan: list[int] = []
        self.radj = g.robber_view().adjacency

    def _cop_slices(self, cops) -> set[int]:
        return {self.coords(p)[0] for p in cops}

    def _free_slices(self, cops) -> list[int]:
        bad = self._cop_slices(cops)
        out = []
        for x in range(1, 3 * self.k + 1):
            if not ({x - 1, x, x + 1} & bad):
                out.append(x)
        return out

    def _excluded_columns(self, cops) -> set[int]:
        """Ring columns a cop can reach within 5k-1 moves of its own layer."""

        k = self.k
        out: set[int] = set()
        for c, p in enumerate(cops):
            dist = bfs_dist_adj(self.g.layer_view(self.assignment[c]).adjacency, p)
            for x in range(1, 3 * k + 1):
                for y in range(1, k + 1):
                    for z in (5 * k + 1, 5 * k + 2):
                        if dist[self.index(x, y, z)] < 5 * k:
                            out.add(y)
        return out

    def _ring_path(self, x: int, src: int, dst: int) -> list[int]:
        """Shortest path from src to dst around the ring of slice x."""

        k = self.k
        ring = [self.index(x, y, z) for y in range(1, k + 1) for z in (5 * k + 1, 5 * k + 2)]
        ring_set = set(ring)
        prev = {src: -1}
        frontier = [src]
        while dst not in prev and frontier:
            nxt = []
            for a in frontier:
                for b in self.radj[a]:
                    if b in ring_set and b not in prev:
                        prev[b] = a
                        nxt.append(b)
            frontier = nxt
        path = []
        at = dst
        while at != src:
            path.append(at)
            at = prev[at]
        path.reverse()
        return path

    def _plan_is_safe(self, cops, plan: list[int]) -> bool:
        dists = [
            bfs_dist_adj(self.g.layer_view(self.assignment[c]).adjacency, p)
            for c, p in enumerate(cops)
        ]
        for t, v in enumerate(plan, start=1):
            for d in dists:
                if d[v] <= t + 1:
                    return False
        return True

    def _make_plan(self, cops, cur: int) -> list[int]:
        k = self.k
        x_cur, y_cur, z_cur = self.coords(cur)
        free = self._free_slices(cops)
        excluded = self._excluded_columns(cops)
        columns = [y for y in range(1, k + 1) if y not in excluded] or list(range(1, k + 1))
        cop_slices = self._cop_slices(cops)

        def slice_score(x):
            return (min((abs(x - s) for s in cop_slices), default=0), -abs(x - x_cur))

        candidates = sorted(free, key=slice_score, reverse=True) or [x_cur]
        for xs in candidates:
            for ys in columns:
                ring_target = self.index(x_cur, ys, 5 * k + 1)
                path = self._ring_path(x_cur, cur, ring_target) if cur != ring_target else []
                step = 1 if xs >= x_cur else -1
                rungs = [self.index(x, ys, 5 * k + 1) for x in range(x_cur + step, xs + step, step)]
                plan = path + rungs
                if plan and self._plan_is_safe(cops, plan):
                    return plan
        return []

    def _fallback(self, cops, cur: int) -> int:
        dists = [
            bfs_dist_adj(self.g.layer_view(self.assignment[c]).adjacency, p)
            for c, p in enumerate(cops)
        ]
        options = [cur] + list(self.radj[cur])
        return max(options, key=lambda v: (min(d[v] for d in dists), -v))

    def place(self, cops):
        free = self._free_slices(cops)
        if free:
            xr = max(free, key=lambda x: min((abs(x - s) for s in self._cop_slices(cops)), default=0))
            return self.index(xr, 1, 5 * self.k + 1)
        bad = self._cop_slices(cops)
        xr = max(range(1, 3 * self.k + 1), key=lambda x: min(abs(x - s) for s in bad))
        return self.index(xr, 1, 5 * self.k + 1)

    def move(self, view: MatchView):
        cur = view.robber
        if self.plan:
            nxt = self.plan[0]
            threatened = nxt in view.cops
            if not threatened:
                for c, p in enumerate(view.cops):
                    if nxt in self.g.layer_view(self.assignment[c]).adjacency[p]:
                        threatened = True
                        break
            if threatened:
                self.plan = []
            else:
                self.plan.pop(0)
                return nxt
        self.plan = self._make_plan(view.cops, cur)
        if self.plan:
            return self.move(view)
        return self._fallback(view.cops, cur)


# -- cops-bane strategy ----------------------------------------------------------------


class CopsbaneRobber(RobberStrategy):
    """Blocked-set evasion on the expander core: a cop blocks exactly the
    monochromatic component it can reach without passing the hub, so the
    robber keeps to large small-diameter subgraphs clear of all blocked
    vertices, falling back (tagged DEGRADED) to plain distance
    maximisation when no safe subgraph exists at this scale."""

    name = "copsbane_robber"

    def __init__(self, layout):
        self.layout = layout

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        lay = self.layout
        if not g.tag.startswith("copsbane:"):
            raise StrategyMismatchError("graph is not a cops-bane construction")
        self.N = lay.N
        self.x_adj: list[list[int]] = [[] for _ in range(self.N)]
        for u, v in lay.expander_edges:
            self.x_adj[u].append(v)
            self.x_adj[v].append(u)
        self.x_adj = [sorted(a) for a in self.x_adj]
        # monochromatic component (as a frozenset) of each core vertex per colour
        self.comp: list[list[frozenset[int]]] = []
        for colour in (0, 1):
            comp_map: dict[int, frozenset[int]] = {}
            seen: set[int] = set()
            adj: list[list[int]] = [[] for _ in range(self.N)]
            for e in lay.expander_edges:
                if lay.coloring[e] == colour:
                    adj[e[0]].append(e[1])
                    adj[e[1]].append(e[0])
            for s in range(self.N):
                if s in seen:
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
                fz = frozenset(comp)
                for v in comp:
                    comp_map[v] = fz
            self.comp.append([comp_map[v] for v in range(self.N)])
        self.arm_owner: dict[int, int] = {}
        for x, interior in lay.arm_interior.items():
            for v in interior:
                self.arm_owner[v] = x
        self._colour_adj = []
        for colour in (0, 1):
            adj: list[list[int]] = [[] for _ in range(self.N)]
            for e in lay.expander_edges:
                if lay.coloring[e] == colour:
                    adj[e[0]].append(e[1])
                    adj[e[1]].append(e[0])
            self._colour_adj.append(adj)
        self._comp_dist_cache: dict[tuple[int, int], dict[int, int]] = {}

    def _blocked(self, cops) -> set[int]:
        out: set[int] = set()
        for c, p in enumerate(cops):
            colour = self.assignment[c]
            if p == self.layout.hub:
                continue
            x = p if p < self.N else self.arm_owner[p]
            out |= self.comp[colour][x]
        return out

    def _dist_to_blocked(self, blocked: set[int]) -> list[float]:
        dist: list[float] = [INF] * self.N
        frontier = []
        for b in blocked:
            dist[b] = 0
            frontier.append(b)
        d = 0
        while frontier:
            d += 1
            nxt = []
            for x in frontier:
                for y in self.x_adj[x]:
                    if dist[y] == INF:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
        return dist

    def _safe_components(self, blocked: set[int]) -> list[set[int]]:
        seen: set[int] = set(blocked)
        comps: list[set[int]] = []
        for s in range(self.N):
            if s in seen:
                continue
            comp = {s}
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.x_adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(comp)
        safe = []
        for comp in comps:
            if len(comp) < self.N // 2 + 1:
                continue
            if self._diameter(comp) <= self.layout.D:
                safe.append(comp)
        return safe

    def _diameter(self, comp: set[int]) -> float:
        worst = 0.0
        for s in comp:
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in self.x_adj[x]:
                        if y in comp and y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            if len(dist) < len(comp):
                return INF
            worst = max(worst, max(dist.values()))
        return worst

    def _path_in(self, comp: set[int], src: int, dst: int) -> list[int]:
        prev = {src: -1}
        frontier = [src]
        while dst not in prev and frontier:
            nxt = []
            for x in frontier:
                for y in self.x_adj[x]:
                    if y in comp and y not in prev:
                        prev[y] = x
                        nxt.append(y)
            frontier = nxt
        path = []
        at = dst
        while at != src:
            path.append(at)
            at = prev[at]
        path.reverse()
        return path

    def place(self, cops):
        blocked = self._blocked(cops)
        dist = self._dist_to_blocked(blocked)
        threat = self._threat(cops)
        safe = self._safe_components(blocked)
        if safe:
            comp = max(safe, key=len)
            return max(comp, key=lambda v: (dist[v], -v))
        self.tags.add("DEGRADED")
        pool = [v for v in range(self.N) if v not in blocked] or list(range(self.N))
        return max(pool, key=lambda v: (dist[v], threat[v], -v))

    def _threat(self, cops) -> list[float]:
        """Per core vertex: fewest moves some cop needs to reach it.

        Computed structurally: a cop inside the core moves within its
        monochromatic component or takes 4D+2 steps through the hub; a cop
        on an arm is a steps from its leaf and 4D+2-a from everything else.
        """

        lay = self.layout
        round_trip = 4 * lay.D + 2
        threat = [INF] * self.N
        for c, p in enumerate(cops):
            colour = self.assignment[c]
            if p == lay.hub:
                base = 2 * lay.D + 1
                for v in range(self.N):
                    if base < threat[v]:
                        threat[v] = base
                continue
            if p < self.N:
                leaf, a = p, 0
            else:
                leaf = self.arm_owner[p]
                interior = lay.arm_interior[leaf]
                a = 2 * lay.D - interior.index(p)
            comp = self.comp[colour][leaf]
            local = self._comp_dist(colour, leaf)
            for v in range(self.N):
                d = round_trip - a
                if v in comp:
                    d = min(d, a + local[v])
                if d < threat[v]:
                    threat[v] = d
        return threat

    def _comp_dist(self, colour: int, src: int) -> dict[int, int]:
        key = (colour, src)
        if key not in self._comp_dist_cache:
            comp = self.comp[colour][src]
            dist = {src: 0}
            frontier = [src]
            edges = self._colour_adj[colour]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in edges[x]:
                        if y in comp and y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            self._comp_dist_cache[key] = dist
        return self._comp_dist_cache[key]

    def move(self, view: MatchView):
        cur = view.robber
        blocked = self._blocked(view.cops)
        dist = self._dist_to_blocked(blocked)
        threat = self._threat(view.cops)
        safe = self._safe_components(blocked)
        home = next((c for c in safe if cur in c), None)
        if home is not None:
            target = max(home, key=lambda v: (dist[v], -v))
            plan = self._path_in(home, cur, target) if target != cur else []
            if any(v in blocked for v in plan):
                raise StrategyInvariantError("planned path crosses the blocked set")
            nxt = plan[0] if plan else cur
            if threat[nxt] >= 2:
                return nxt
        self.tags.add("DEGRADED")
        options = [cur] + self.x_adj[cur]
        clear = [v for v in options if threat[v] >= 2]
        pool = clear or options
        return max(pool, key=lambda v: (dist[v], threat[v], -v))


# -- tree squeeze -----------------------------------------------------------------------


class TreeSqueezeCops(CopTeamStrategy):
    """Territory squeeze for tree robber layers without a robber's edge.

    Cops start inside the components of a clean profile.  Each iteration
    picks the cop closest to the robber in the tree (the guard at u), aims
    at the next tree vertex w toward the robber, and routes a cop able to
    reach w there -- reinforcing u first when the guard itself is the only
    candidate.  Commitment plus the return-capture rule mirror the textbook
    squeeze; the robber's territory loses at least u per completed trip."""

    name = "tree_squeeze_cop"

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        from .treealgo import winning_profile

        profile = winning_profile(g, tuple(assignment))
        if profile is None:
            raise StrategyMismatchError("instance has a robber's edge for this assignment")
        self.profile = profile
        self.radj = g.robber_view().adjacency
        self.tasks: list[tuple[int, int]] = []  # (cop, target vertex)
        self.guard_post: int | None = None
        self._dist_cache: dict[tuple[int, int], list[float]] = {}

    def place(self):
        return tuple(min(comp) for comp in self.profile)

    def _ldist(self, cop: int, source: int) -> list[float]:
        key = (self.assignment[cop], source)
        if key not in self._dist_cache:
            self._dist_cache[key] = bfs_dist_adj(
                self.g.layer_view(self.assignment[cop]).adjacency, source
            )
        return self._dist_cache[key]

    def _replan(self, view: MatchView) -> None:
        rdist = bfs_dist_adj(self.radj, view.robber)
        guard = min(range(len(view.cops)), key=lambda c: (rdist[view.cops[c]], c))
        u = view.cops[guard]
        w = min(q for q in self.radj[u] if rdist[q] == rdist[u] - 1)
        reach = [c for c in range(len(view.cops)) if w in self.profile[c]]
        self.guard_post = u
        others = [c for c in reach if c != guard]
        if others:
            runner = min(others, key=lambda c: (self._ldist(c, w)[view.cops[c]], c))
            self.tasks = [(runner, w)]
            return
        if guard not in reach:
            raise StrategyInvariantError(f"no cop can reach {w}; profile was not clean")
        d = self._ldist(guard, w)[u]
        if d > 2:
            helpers = [c for c in range(len(view.cops)) if c != guard and u in self.profile[c]]
            if not helpers:
                raise StrategyInvariantError(
                    f"guard is the sole policer of edge ({u},{w}) at distance {d}"
                )
            helper = min(helpers, key=lambda c: (self._ldist(c, u)[view.cops[c]], c))
            self.tasks = [(helper, u), (guard, w)]
        else:
            self.tasks = [(guard, w)]

    def moves(self, view: MatchView):
        pos = list(view.cops)
        for c in range(len(pos)):
            if view.robber in self.g.layer_view(self.assignment[c]).adjacency[pos[c]]:
                pos[c] = view.robber
                return tuple(pos)
        while True:
            while self.tasks and pos[self.tasks[0][0]] == self.tasks[0][1]:
                self.tasks.pop(0)
            if self.tasks:
                break
            self._replan(view)
        cop, target = self.tasks[0]
        if (
            self.guard_post is not None
            and view.robber == self.guard_post
            and pos[cop] != self.guard_post
        ):
            # the robber stepped onto the vacated guard post: turn back
            target = self.guard_post
            self.tasks[0] = (cop, target)
        dist = self._ldist(cop, target)
        best = pos[cop]
        for q in self.g.layer_view(self.assignment[cop]).adjacency[pos[cop]]:
            if dist[q] < dist[best] or (dist[q] == dist[best] and q < best):
                best = q
        pos[cop] = best
        return tuple(pos)


# -- bag sweep along a tree decomposition --------------------------------------------------


class BagsweepCops(CopTeamStrategy):
    """Cover one bag of a tree decomposition of the flattened graph and
    shift, one cop at a time, to the neighbouring bag on the robber's side;
    the bag intersection stays guarded so the robber's subtree shrinks."""

    name = "bagsweep_cop"

    def __init__(self, decomp):
        self.decomp = decomp

    def begin(self, g, assignment, rng):
        super().begin(g, assignment, rng)
        from .bounds import td_validate
        from .core import flatten

        if not td_validate(self.decomp, flatten(g), g.n):
            raise StrategyMismatchError("decomposition does not validate against the graph")
        for i in range(g.tau):
            if g.layer_view(i).n_components != 1:
                raise StrategyMismatchError("bag sweep needs connected cop layers")
        if len(assignment) < self.decomp.max_bag:
            raise StrategyMismatchError(
                f"need at least {self.decomp.max_bag} cops, got {len(assignment)}"
            )
        self.fadj = [[] for _ in range(g.n)]
        for u, v in flatten(g):
            self.fadj[u].append(v)
            self.fadj[v].append(u)
        nb = len(self.decomp.bags)
        self.tadj: list[list[int]] = [[] for _ in range(nb)]
        for a, b in self.decomp.tree:
            self.tadj[a].append(b)
            self.tadj[b].append(a)
        self.current = 0
        self.posts: dict[int, int] = {}
        self.tasks: list[tuple[int, int]] = []
        self._dist_cache: dict[tuple[int, int], list[float]] = {}

    def _ldist(self, cop: int, source: int) -> list[float]:
        key = (self.assignment[cop], source)
        if key not in self._dist_cache:
            self._dist_cache[key] = bfs_dist_adj(
                self.g.layer_view(self.assignment[cop]).adjacency, source
            )
        return self._dist_cache[key]

    def place(self):
        bag = sorted(self.decomp.bags[self.current])
        out = []
        for c in range(len(self.assignment)):
            if c < len(bag):
                out.append(bag[c])
                self.posts[c] = bag[c]
            else:
                out.append(bag[0])
                self.posts[c] = bag[0]
        return tuple(out)

    def _side_vertices(self, bag_from: int, bag_to: int) -> set[int]:
        """Vertices in bags of the component of the tree minus `bag_from`
        that contains `bag_to`."""

        seen = {bag_from, bag_to}
        stack = [bag_to]
        out: set[int] = set()
        while stack:
            b = stack.pop()
            out |= self.decomp.bags[b]
            for c in self.tadj[b]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return out

    def _plan_shift(self, view: MatchView) -> None:
        cur_bag = self.decomp.bags[self.current]
        target_bag = None
        for m in self.tadj[self.current]:
            if view.robber in self._side_vertices(self.current, m) - cur_bag:
                target_bag = m
                break
        if target_bag is None:
            raise StrategyInvariantError("robber is not on any side of the covered bag")
        new_bag = self.decomp.bags[target_bag]
        cut = cur_bag & new_bag
        uncovered = sorted(new_bag - set(self.posts.values()))
        movers = sorted(
            (c for c, p in self.posts.items() if p not in new_bag),
            key=lambda c: self.posts[c],
        )
        # cops parked several-to-a-vertex are surplus and may move too
        seen_posts: set[int] = set()
        surplus = []
        for c in sorted(self.posts):
            p = self.posts[c]
            if p in cut and p in seen_posts:
                surplus.append(c)
            seen_posts.add(p)
        pool = movers + [c for c in surplus if c not in movers]
        self.tasks = []
        for target, cop in zip(uncovered, pool):
            self.tasks.append((cop, target))
            self.posts[cop] = target
        self.pending_bag = target_bag

    def moves(self, view: MatchView):
        pos = list(view.cops)
        for c in range(len(pos)):
            if view.robber in self.g.layer_view(self.assignment[c]).adjacency[pos[c]]:
                pos[c] = view.robber
                return tuple(pos)
        while True:
            while self.tasks and pos[self.tasks[0][0]] == self.tasks[0][1]:
                self.tasks.pop(0)
            if self.tasks:
                break
            if getattr(self, "pending_bag", None) is not None:
                self.current = self.pending_bag
                self.pending_bag = None
            self._plan_shift(view)
            if not self.tasks:
                # every target already covered; adopt the bag and continue
                self.current = self.pending_bag
                self.pending_bag = None
        cop, target = self.tasks[0]
        dist = self._ldist(cop, target)
        best = pos[cop]
        for q in self.g.layer_view(self.assignment[cop]).adjacency[pos[cop]]:
            if dist[q] < dist[best] or (dist[q] == dist[best] and q < best):
                best = q
        pos[cop] = best
        return tuple(pos)


# -- interactive play ------------------------------------------------------------------


def interactive_play(
    g: MultiLayerGraph,
    alloc: AllocationPlan,
    human_role: str,
    input_fn: Callable[[str], str] = input,
    output_fn: Callable[[str], None] = print,
    max_rounds: int = 10_000,
    state_budget: int | None = None,
) -> MatchRecord:
    """Terminal match against the tablebase; illegal input is re-prompted,
    'quit' abandons the session."""

    if human_role not in ("robber", "cops"):
        raise MlgError(f"human role must be 'robber' or 'cops', got {human_role!r}")
    kwargs = {} if state_budget is None else {"state_budget": state_budget}
    table = build_copwin(g, alloc.assignment(), **kwargs)
    engine_cops = TablebaseCops(table)
    engine_robber = TablebaseRobber(table)
    rng = random.Random(0)
    engine_cops.begin(g, alloc.assignment(), rng)
    engine_robber.begin(g, alloc.assignment(), rng)

    record = MatchRecord(
        graph_id=g.tag,
        allocation=alloc.counts,
        assignment=alloc.assignment(),
        cop_strategy="human" if human_role == "cops" else engine_cops.name,
        robber_strategy="human" if human_role == "robber" else engine_robber.name,
        seed=0,
        horizon=max_rounds,
    )

    def ask(prompt: str, count: int, legal: Callable[[list[int]], bool]) -> list[int] | None:
        while True:
            raw = input_fn(prompt).strip()
            if raw.lower() in ("q", "quit"):
                return None
            try:
                vals = [int(x) for x in raw.replace(",", " ").split()]
            except ValueError:
                output_fn("enter vertex ids, or 'quit'")
                continue
            if len(vals) != count:
                output_fn(f"need {count} vertex id(s)")
                continue
            if not legal(vals):
                output_fn("illegal move, try again")
                continue
            return vals

    k = alloc.total
    if human_role == "cops":
        got = ask(f"place {k} cops> ", k, lambda vs: all(0 <= v < g.n for v in vs))
        if got is None:
            record.outcome = "ABANDONED"
            return record
        cops = tuple(got)
    else:
        cops = engine_cops.place()
        output_fn(f"cops placed at {' '.join(map(str, cops))}")
    if human_role == "robber":
        got = ask("place robber> ", 1, lambda vs: 0 <= vs[0] < g.n)
        if got is None:
            record.outcome = "ABANDONED"
            return record
        robber = got[0]
    else:
        robber = engine_robber.place(cops)
        output_fn(f"robber placed at {robber}")
    record.rows.append((0, "P", robber, cops))

    if robber in cops:
        record.outcome = "CAPTURE"
        record.capture_round = 0
        output_fn("capture at placement")
        return record

    for rnd in range(1, max_rounds + 1):
        view = MatchView(g, record.assignment, cops, robber, rnd, record.rows)
        if human_role == "cops":
            got = ask(
                f"round {rnd}, cops at {' '.join(map(str, cops))}, robber at {robber}; move cops> ",
                k,
                lambda vs: all(
                    _legal_cop_move(g, record.assignment[i], cops[i], v) for i, v in enumerate(vs)
                ),
            )
            if got is None:
                record.outcome = "ABANDONED"
                return record
            cops = tuple(got)
        else:
            cops = engine_cops.moves(view)
            output_fn(f"round {rnd}: cops move to {' '.join(map(str, cops))}")
        record.rows.append((rnd, "C", robber, cops))
        if robber in cops:
            record.outcome = "CAPTURE"
            record.capture_round = rnd
            output_fn(f"captured at round {rnd}")
            return record
        view = MatchView(g, record.assignment, cops, robber, rnd, record.rows)
        if human_role == "robber":
            got = ask(
                f"round {rnd}, cops at {' '.join(map(str, cops))}; move robber from {robber}> ",
                1,
                lambda vs: _legal_robber_move(g, robber, vs[0]),
            )
            if got is None:
                record.outcome = "ABANDONED"
                return record
            robber = got[0]
        else:
            robber = engine_robber.move(view)
            output_fn(f"round {rnd}: robber moves to {robber}")
        record.rows.append((rnd, "R", robber, cops))
        if robber in cops:
            record.outcome = "CAPTURE"
            record.capture_round = rnd
            output_fn(f"captured at round {rnd}")
            return record
    record.outcome = "SURVIVED"
    return record


# -- registry for the CLI ----------------------------------------------------------------


def cop_strategy_from_name(name: str, g: MultiLayerGraph, alloc: AllocationPlan, state_budget=None):
    kwargs = {} if state_budget is None else {"state_budget": state_budget}
    if name == "greedy":
        return GreedyCops()
    if name == "random":
        return RandomCops()
    if name == "tablebase":
        return TablebaseCops(build_copwin(g, alloc.assignment(), **kwargs))
    if name == "grid_guard":
        side = math.isqrt(g.n)
        return GridCopGuard(side)
    if name == "tree_squeeze":
        return TreeSqueezeCops()
    if name == "bagsweep":
        from .bounds import treewidth_exact_small
        from .core import flatten

        _, decomp = treewidth_exact_small(flatten(g), g.n)
        return BagsweepCops(decomp)
    raise MlgError(f"unknown cop strategy {name!r}")


def robber_strategy_from_name(name: str, g: MultiLayerGraph, alloc: AllocationPlan, state_budget=None):
    kwargs = {} if state_budget is None else {"state_budget": state_budget}
    if name == "random":
        return RandomRobber()
    if name == "tablebase":
        return TablebaseRobber(build_copwin(g, alloc.assignment(), **kwargs))
    if name == "grid_corner":
        side = math.isqrt(g.n)
        return GridRobberCorner(side)
    if name == "slices":
        if not g.tag.startswith("slices:"):
            raise MlgError("slices robber needs a slices construction graph")
        return SlicesRobber(int(g.tag.split(":")[1]))
    if name == "copsbane":
        if not g.tag.startswith("copsbane:"):
            raise MlgError("cops-bane robber needs a cops-bane construction graph")
        from .generators import copsbane_layout

        parts = g.tag.split(":")[1].split(",")
        return CopsbaneRobber(copsbane_layout(int(parts[0]), seed=int(parts[1])))
    raise MlgError(f"unknown robber strategy {name!r}")
